#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldpclp/dendro.hpp"
#include "ldpclp/lp.hpp"
#include "ldpclp/parity_check.hpp"
#include "ldpclp/rng.hpp"
#include "ldpclp/simplex.hpp"
#include "oracles.hpp"

using namespace ldpclp;

namespace {

// Prism graph cycle code: two triangle checks chained by rungs; bits are edges.
// 0=a0a1 1=a1a2 2=a0a2 3=b0b1 4=b1b2 5=b0b2 6=a0b0 7=a1b1 8=a2b2
ParityCheckMatrix prism_code() {
    return make_parity_check_matrix(9, {{0, 2, 6}, {0, 1, 7}, {1, 2, 8}, {3, 5, 6}, {3, 4, 7}, {4, 5, 8}});
}

double constraint_violation(const LpProblem& p, const std::vector<double>& x) {
    std::vector<double> r = p.simplex.rhs;
    for (int j = 0; j < p.num_vars(); ++j)
        for (int k = p.simplex.col_ptr[j]; k < p.simplex.col_ptr[j + 1]; ++k)
            r[p.simplex.row_idx[k]] -= p.simplex.value[k] * x[j];
    double mx = 0.0;
    for (double v : r) mx = std::max(mx, std::fabs(v));
    return mx;
}

}  // namespace

TEST_CASE("simplex: bounded pivoting on a two-variable problem") {
    // min -2 x1 + x2  s.t.  x1 + x2 = 1.5, 0 <= x <= 1
    SimplexProblem sp;
    sp.num_rows = 1;
    sp.num_cols = 2;
    sp.col_ptr = {0, 1, 2};
    sp.row_idx = {0, 0};
    sp.value = {1.0, 1.0};
    sp.cost = {-2.0, 1.0};
    sp.rhs = {1.5};
    sp.lower = {0.0, 0.0};
    sp.upper = {1.0, 1.0};
    SimplexSolver solver(sp);
    solver.set_basis({0}, {0, 1});  // x2 starts at its upper bound
    SimplexResult res = solver.solve();
    CHECK(res.status == SimplexStatus::Optimal);
    CHECK(res.objective == doctest::Approx(-1.5));
    CHECK(solver.solution()[0] == doctest::Approx(1.0));
    CHECK(solver.solution()[1] == doctest::Approx(0.5));
}

TEST_CASE("build_lp: structure counts for a single degree-3 check") {
    ParityCheckMatrix h = make_parity_check_matrix(3, {{0, 1, 2}});
    LpProblem p = build_lp(h, std::vector<double>(3, 1.0));
    CHECK(p.num_bit_vars == 3);
    CHECK(p.num_check_vars == 4);
    CHECK(p.num_rows == 3 + 1);
    CHECK(p.blocks.size() == 1);
    CHECK(p.blocks[0].patterns == std::vector<std::uint32_t>{0, 3, 5, 6});
    // every coefficient in {-1, 0, +1}
    for (double v : p.simplex.value) CHECK(std::fabs(v) == 1.0);
}

TEST_CASE("build_lp: dendro form of the [155,64,20] code") {
    ParityCheckMatrix h = load_alist_file(oracle::fixture_path("tanner155.alist"));
    DendroCode d = dendro_transform(h);
    CHECK(d.matrix.num_checks == 279);
    CHECK(d.num_punctured() == 186);
    LpProblem p = build_lp(d.matrix, std::vector<double>(d.matrix.num_bits, 0.0));
    CHECK(p.num_bit_vars == 341);
    CHECK(p.num_check_vars == 1116);
    CHECK(p.num_rows == 837 + 279);
}

TEST_CASE("build_lp: degree guard points at the transform") {
    std::vector<int> wide(13);
    for (int i = 0; i < 13; ++i) wide[i] = i;
    ParityCheckMatrix h = make_parity_check_matrix(13, {wide});
    CHECK_THROWS_WITH_AS(build_lp(h, std::vector<double>(13, 1.0)), doctest::Contains("dendro"),
                         std::invalid_argument);
}

TEST_CASE("local_codewords: even parity, counts") {
    for (int q = 1; q <= 8; ++q) {
        auto patterns = local_codewords(q);
        CHECK(patterns.size() == (std::size_t{1} << (q - 1)));
        CHECK(patterns[0] == 0);
        for (auto m : patterns) CHECK((std::popcount(m) & 1) == 0);
        CHECK(std::is_sorted(patterns.begin(), patterns.end()));
    }
}

TEST_CASE("solve_lp: all-positive llr keeps the zero vertex at objective zero") {
    ParityCheckMatrix h = load_alist_file(oracle::fixture_path("hamming74.alist"));
    std::vector<double> llr(7, 1.0);
    LpProblem p = build_lp(h, llr);
    LpSolveOutcome out = solve_lp(p);
    CHECK(out.objective == doctest::Approx(0.0));
    for (int i = 0; i < 7; ++i) CHECK(out.assignment[i] == doctest::Approx(0.0));
    CHECK(out.iterations == 0);
}

TEST_CASE("solve_lp: all-negative llr on one even-degree check selects all ones") {
    ParityCheckMatrix h = make_parity_check_matrix(4, {{0, 1, 2, 3}});
    std::vector<double> llr(4, -1.0);
    LpSolveOutcome out = solve_lp(build_lp(h, llr));
    CHECK(out.objective == doctest::Approx(-4.0));
    for (int i = 0; i < 4; ++i) CHECK(out.assignment[i] == doctest::Approx(1.0));
}

TEST_CASE("lp_decode: noiseless output decodes to the zero codeword") {
    ParityCheckMatrix h = load_alist_file(oracle::fixture_path("hamming74.alist"));
    NoiseVector x(7, 0.0);
    PseudoCodeword p = lp_decode(h, llr_from_output(x, Snr{2.0}));
    CHECK(p.kind == PcwKind::ZeroCodeword);
    CHECK(p.objective == doctest::Approx(0.0));
}

TEST_CASE("lp_decode: frozen fractional optimum on the prism cycle code") {
    ParityCheckMatrix h = prism_code();
    // Adversarial draw found by seeded scan; the optimal vertex is half on both
    // triangles plus one full rung, strictly below every codeword.
    std::vector<double> llr{-0.12861210052082908, -0.4033270853641403,  -0.23938544583683533,
                            -0.47903980871855872, -0.12437628148087213, -0.22485917191942142,
                            -1.4082055409424998,  1.6837842223642507,   1.5005249037741064};
    PseudoCodeword p = lp_decode(h, llr);
    CHECK(p.kind == PcwKind::Fractional);
    std::vector<double> expected{0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0, 0.0, 0.0};
    for (int i = 0; i < 9; ++i) CHECK(std::fabs(p.beliefs[i] - expected[i]) < 1e-7);

    // at least one belief strictly inside (tol, 1-tol): classification contract
    bool interior = false;
    for (double b : p.beliefs) interior = interior || (b > 1e-6 && b < 1.0 - 1e-6);
    CHECK(interior);

    // strictly better than every codeword
    double best_cw = 0.0;
    for (const auto& c : enumerate_codewords(h)) best_cw = std::min(best_cw, codeword_objective(c, llr));
    CHECK(p.objective < best_cw - 1e-9);

    // independent optimality certificate: cycle-code vertices are half-integral,
    // so scanning the {0, 1/2, 1} grid against the parity-polytope oracle covers
    // every vertex of the relaxation.
    double grid_best = 0.0;
    const int n = 9;
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (long code = 0; code < total; ++code) {
        long c = code;
        std::vector<double> mu(n);
        double obj = 0.0;
        for (int i = 0; i < n; ++i) {
            mu[i] = 0.5 * (c % 3);
            c /= 3;
            obj += mu[i] * llr[i];
        }
        if (obj < grid_best && oracle::in_fundamental_polytope(h.rows, mu)) grid_best = obj;
    }
    CHECK(p.objective == doctest::Approx(grid_best).epsilon(1e-9));
}

TEST_CASE("lp_decode: ml certificate against brute-force MAP") {
    Rng rng(20606);
    for (ParityCheckMatrix h : {load_alist_file(oracle::fixture_path("hamming74.alist")), prism_code()}) {
        LpDecoder dec(h);
        auto cws = enumerate_codewords(h);
        int integral = 0;
        for (int t = 0; t < 3000; ++t) {
            std::vector<double> llr(h.num_bits);
            for (auto& v : llr) v = rng.normal();
            PseudoCodeword p = dec.decode(llr);
            CHECK(p.objective <= 1e-9);  // zero codeword is always feasible
            double best_cw = 0.0;
            for (const auto& c : cws) best_cw = std::min(best_cw, codeword_objective(c, llr));
            CHECK(p.objective <= best_cw + 1e-9);  // relaxation lower bound
            for (double b : p.beliefs) {
                CHECK(b >= -1e-9);
                CHECK(b <= 1.0 + 1e-9);
            }
            if (p.kind == PcwKind::Fractional) continue;
            ++integral;
            Codeword r(h.num_bits);
            for (int i = 0; i < h.num_bits; ++i) r[i] = p.beliefs[i] > 0.5 ? 1 : 0;
            CHECK(r == min_objective_codeword(cws, llr));
        }
        CHECK(integral > 500);
    }
}

TEST_CASE("lp feasibility: indicator beliefs of any codeword satisfy the constraints exactly") {
    ParityCheckMatrix h = load_alist_file(oracle::fixture_path("hamming74.alist"));
    LpProblem p = build_lp(h, std::vector<double>(7, 0.25));
    for (const auto& v : enumerate_codewords(h)) {
        std::vector<double> x(p.num_vars(), 0.0);
        for (int i = 0; i < 7; ++i) x[i] = v[i];
        for (const auto& blk : p.blocks) {
            std::uint32_t mask = 0;
            const auto& row = h.rows[blk.check];
            for (std::size_t t = 0; t < row.size(); ++t)
                if (v[row[t]]) mask |= std::uint32_t{1} << t;
            auto it = std::lower_bound(blk.patterns.begin(), blk.patterns.end(), mask);
            REQUIRE(it != blk.patterns.end());
            REQUIRE(*it == mask);
            x[blk.first_var + (it - blk.patterns.begin())] = 1.0;
        }
        CHECK(constraint_violation(p, x) == 0.0);
    }
}

TEST_CASE("lp_decode: warm-started decoder matches one-shot decoding") {
    ParityCheckMatrix h = prism_code();
    Rng rng(8);
    LpDecoder warm(h);
    for (int t = 0; t < 60; ++t) {
        std::vector<double> llr(9);
        for (auto& v : llr) v = rng.normal();
        PseudoCodeword a = warm.decode(llr);
        PseudoCodeword b = lp_decode(h, llr);
        CHECK(a.kind == b.kind);
        CHECK(std::fabs(a.objective - b.objective) < 1e-8);
        for (int i = 0; i < 9; ++i) CHECK(std::fabs(a.beliefs[i] - b.beliefs[i]) < 1e-7);
    }
}

TEST_CASE("lp_decode: positive rescaling of the llr keeps the decision") {
    ParityCheckMatrix h = prism_code();
    Rng rng(4444);
    LpDecoder dec(h);
    for (int t = 0; t < 40; ++t) {
        std::vector<double> llr(9), scaled(9);
        for (int i = 0; i < 9; ++i) {
            llr[i] = rng.normal();
            scaled[i] = 3.5 * llr[i];
        }
        PseudoCodeword a = lp_decode(h, llr);
        PseudoCodeword b = lp_decode(h, scaled);
        CHECK(a.kind == b.kind);
        for (int i = 0; i < 9; ++i) CHECK(std::fabs(a.beliefs[i] - b.beliefs[i]) < 1e-7);
        CHECK(std::fabs(b.objective - 3.5 * a.objective) < 1e-8);
    }
}

TEST_CASE("lp objective equality between a code and its dendro transform") {
    Rng rng(1717);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 8 + static_cast<int>(rng.next_u64() % 6);
        int m = 3 + static_cast<int>(rng.next_u64() % 3);
        ParityCheckMatrix h = make_parity_check_matrix(n, oracle::random_code_rows(rng, n, m, 2, 6));
        DendroCode d = dendro_transform(h);
        LpDecoder orig(h), dendro(d.matrix);
        for (int t = 0; t < 25; ++t) {
            std::vector<double> llr(n);
            for (auto& v : llr) v = rng.normal();
            std::vector<double> lifted(d.matrix.num_bits, 0.0);
            for (int i = 0; i < n; ++i) lifted[d.origin_bits[i]] = llr[i];
            PseudoCodeword a = orig.decode(llr);
            PseudoCodeword b = dendro.decode(lifted);
            CHECK(std::fabs(a.objective - b.objective) < 1e-6);
        }
    }
}

TEST_CASE("lp solve: iteration limit is reported, never silently truncated") {
    ParityCheckMatrix h = prism_code();
    LpOptions opts;
    opts.max_iterations = 1;
    CHECK_THROWS_WITH_AS(lp_decode(h, std::vector<double>(9, -1.0), {}, opts), doctest::Contains("iteration limit"),
                         std::runtime_error);
}

TEST_CASE("lp_decode: rejects nonzero llr at punctured positions") {
    ParityCheckMatrix h = make_parity_check_matrix(5, {{0, 1, 2, 3, 4}});
    DendroCode d = dendro_transform(h);
    LlrVector bad(d.matrix.num_bits, 1.0);
    CHECK_THROWS_AS(lp_decode(d.matrix, bad, d.punctured), std::invalid_argument);
}
