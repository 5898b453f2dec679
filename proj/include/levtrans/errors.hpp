#pragma once

#include <stdexcept>
#include <string>

namespace levtrans {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define LEVTRANS_DEFINE_ERROR(Name)        \
    class Name : public Error {            \
    public:                                \
        using Error::Error;                \
    };

// symexpr
LEVTRANS_DEFINE_ERROR(ParseError)
LEVTRANS_DEFINE_ERROR(PoleInDomain)
LEVTRANS_DEFINE_ERROR(UnboundedAtInfinity)

// problem loading and validation
LEVTRANS_DEFINE_ERROR(SchemaError)
LEVTRANS_DEFINE_ERROR(InvariantViolation)
LEVTRANS_DEFINE_ERROR(PreconditionError)

// transformation engine
LEVTRANS_DEFINE_ERROR(DivisionByZeroDenominator)
LEVTRANS_DEFINE_ERROR(OrderRegression)

// bounds
LEVTRANS_DEFINE_ERROR(ContractionFailure)
LEVTRANS_DEFINE_ERROR(DivergentIntegral)

// asymptotic solutions
LEVTRANS_DEFINE_ERROR(MissingBackTransform)
LEVTRANS_DEFINE_ERROR(DichotomyFailure)
LEVTRANS_DEFINE_ERROR(ContinuationRefused)

// numerical continuation
LEVTRANS_DEFINE_ERROR(StepSizeUnderflow)
LEVTRANS_DEFINE_ERROR(PoleInInterval)

#undef LEVTRANS_DEFINE_ERROR

} // namespace levtrans
