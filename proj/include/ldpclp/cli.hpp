#pragma once

#include <cstdint>

namespace ldpclp {

struct RunConfig {
    double tol_int = 1e-6;
    double tol_y = 1e-8;
    double residual_tol = 1e-8;
    double delta = 1e-3;
    int search_iter_cap = 200;
    double init_scale = 1.0;
    int doubling_cap = 20;
    int workers = 0;  // 0: environment default (LDPCLP_WORKERS) or 1
    std::uint64_t seed = 1;
};

// Entry point shared by the binary and the tests. Exit codes: 0 success,
// 1 usage error, 2 runtime error.
int run(int argc, const char* const* argv);

}  // namespace ldpclp
