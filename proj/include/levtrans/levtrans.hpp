#pragma once

#include "errors.hpp"
#include "rational.hpp"
#include "polynomial.hpp"
#include "rational_fn.hpp"
#include "sym_matrix.hpp"
#include "real_roots.hpp"
#include "sup_bound.hpp"
#include "problem.hpp"
#include "transform.hpp"
#include "error_ledger.hpp"
#include "levinson.hpp"
#include "ode.hpp"
#include "pipeline.hpp"
#include "report.hpp"
#include "verify.hpp"
