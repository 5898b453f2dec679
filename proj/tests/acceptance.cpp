// One line per acceptance criterion. Exit status is nonzero when any
// criterion fails, except those listed as known deviations in the README.

#include <cstdio>
#include <map>

#include "levtrans/verify.hpp"

int main() {
    using namespace levtrans;
    const VerifyReport rep = verify();
    std::map<int, std::vector<const VerifyRow*>> by;
    for (const auto& r : rep.rows) by[r.criterion].push_back(&r);
    int hard_failures = 0;
    for (int c = 1; c <= 10; ++c) {
        bool pass = !by[c].empty();
        std::string detail;
        for (const VerifyRow* r : by[c]) {
            if (r->diagnostic) {
                detail += "; " + r->name + " " + r->computed;
                continue;
            }
            if (!r->pass) {
                pass = false;
                detail += "; " + r->name + " = " + r->computed + " vs " + r->expected + " (" + r->tolerance + ")";
            }
        }
        const bool deviation = !pass && is_known_deviation(c);
        if (!pass && !deviation) ++hard_failures;
        std::printf("criterion %2d: %s%s\n", c, pass ? "PASS" : deviation ? "FAIL (known deviation)" : "FAIL",
                    detail.c_str());
    }
    return hard_failures == 0 ? 0 : 1;
}
