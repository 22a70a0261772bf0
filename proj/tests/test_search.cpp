#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ldpclp/dendro.hpp"
#include "ldpclp/search.hpp"
#include "oracles.hpp"

using namespace ldpclp;

namespace {

ParityCheckMatrix prism_code() {
    return make_parity_check_matrix(9, {{0, 2, 6}, {0, 1, 7}, {1, 2, 8}, {3, 5, 6}, {3, 4, 7}, {4, 5, 8}});
}

// Independent route to the optimal noise: minimize |x|^2 over the
// ray x = t b subject to the self-energy balance sum_i (1 - 2 x_i) b_i = 0.
NoiseVector instanton_by_projection(const std::vector<double>& b) {
    double dot = std::inner_product(b.begin(), b.end(), b.begin(), 0.0);
    double sum = std::accumulate(b.begin(), b.end(), 0.0);
    double t = sum / (2.0 * dot);
    NoiseVector y(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) y[i] = t * b[i];
    return y;
}

}  // namespace

TEST_CASE("effective_distance: direct evaluations") {
    std::vector<double> w20(40, 0.0);
    for (int i = 0; i < 20; ++i) w20[i] = 1.0;
    CHECK(effective_distance(w20) == 20.0);  // integral case is exact

    CHECK(effective_distance({0.5, 0.5, 0.5, 0.5, 0.0}) == doctest::Approx(4.0));
    CHECK(effective_distance({1.0, 0.5, 0.5}) == doctest::Approx(8.0 / 3.0));

    CHECK_THROWS_AS(effective_distance(std::vector<double>(4, 0.0)), std::invalid_argument);

    // punctured positions are excluded from both sums
    std::vector<double> b{1.0, 0.25, 0.5, 0.5};
    std::vector<std::uint8_t> mask{0, 1, 0, 0};
    CHECK(effective_distance(b, mask) == doctest::Approx(effective_distance({1.0, 0.5, 0.5})));

    // scale invariance
    std::vector<double> scaled{0.31, 0.155, 0.155};
    CHECK(effective_distance(scaled) == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("effective_distance: integral vectors give the Hamming weight exactly") {
    ParityCheckMatrix h = load_alist_file(oracle::fixture_path("hamming74.alist"));
    for (const auto& c : enumerate_codewords(h)) {
        int w = 0;
        for (auto b : c) w += b;
        if (w == 0) continue;
        std::vector<double> as_real(c.begin(), c.end());
        CHECK(effective_distance(as_real) == static_cast<double>(w));
    }
}

TEST_CASE("median_noise: direct evaluations and the instanton identity") {
    NoiseVector y = median_noise({1.0, 1.0, 0.0, 0.0});
    CHECK(y[0] == doctest::Approx(0.5));
    CHECK(y[1] == doctest::Approx(0.5));
    CHECK(y[2] == 0.0);

    NoiseVector y2 = median_noise({1.0, 0.5, 0.5});
    CHECK(y2[0] == doctest::Approx(2.0 / 3.0));
    CHECK(y2[1] == doctest::Approx(1.0 / 3.0));
    CHECK(y2[2] == doctest::Approx(1.0 / 3.0));

    // any integral codeword: midpoint 1/2 on the support
    NoiseVector y3 = median_noise({1.0, 0.0, 1.0, 1.0});
    CHECK(y3[0] == doctest::Approx(0.5));
    CHECK(y3[1] == 0.0);

    // median equals the constrained-optimum noise, pointwise
    Rng rng(41);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> b(8);
        for (auto& v : b) v = rng.uniform();
        NoiseVector a = median_noise(b);
        NoiseVector c = instanton_by_projection(b);
        double balance = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            CHECK(a[i] == doctest::Approx(c[i]).epsilon(1e-12));
            balance += (1.0 - 2.0 * a[i]) * b[i];
        }
        CHECK(std::fabs(balance) < 1e-12);  // self-energy balance at the median
    }

    // punctured coordinates carry no noise
    std::vector<std::uint8_t> mask{0, 1, 0};
    NoiseVector y4 = median_noise({1.0, 0.7, 1.0}, mask);
    CHECK(y4[1] == 0.0);
    CHECK(y4[0] == doctest::Approx(0.5));
}

TEST_CASE("search: integral fixed point on a single-check code") {
    SearchCode code = search_code_original(make_parity_check_matrix(3, {{0, 1, 2}}));
    SearchConfig cfg;
    NoiseVector x0{0.6, 0.6, 0.0};
    InstantonResult r = pseudo_codeword_search(code, x0, cfg);
    CHECK(r.status == SearchStatus::Converged);
    CHECK(r.d_eff == doctest::Approx(2.0));
    CHECK(r.pseudo_codeword.kind == PcwKind::NonzeroCodeword);
    CHECK(r.instanton[0] == doctest::Approx(0.5));
    CHECK(r.instanton[2] == doctest::Approx(0.0));
    CHECK(r.straddle_checked);
    CHECK(r.straddle_inner_zero);
    CHECK(r.straddle_outer_nonzero);
    CHECK(r.iterations <= 5);
}

TEST_CASE("search: converges on the prism code with straddle and balance") {
    SearchCode code = search_code_original(prism_code());
    SearchConfig cfg;
    Rng rng(2024);
    LpDecoder decoder(code.matrix, cfg.lp);
    int converged = 0;
    for (int t = 0; t < 30; ++t) {
        NoiseVector x0 = random_initial_noise(code, rng, cfg, &decoder);
        InstantonResult r = pseudo_codeword_search(code, x0, cfg, &decoder);
        if (r.status != SearchStatus::Converged) continue;
        ++converged;
        CHECK(r.d_eff >= 1.0);
        CHECK(r.d_eff <= code.matrix.num_bits);
        CHECK(r.straddle_inner_zero);
        CHECK(r.straddle_outer_nonzero);
        double balance = 0.0;
        for (std::size_t i = 0; i < r.instanton.size(); ++i)
            balance += (1.0 - 2.0 * r.instanton[i]) * r.pseudo_codeword.beliefs[i];
        CHECK(std::fabs(balance) < 1e-9);
        CHECK(!r.trajectory.empty());
        CHECK(r.trajectory.back().d_eff == doctest::Approx(r.d_eff));
        // d_eff of the projected beliefs agrees with the reported value
        CHECK(effective_distance(r.pseudo_codeword.beliefs) == doctest::Approx(r.d_eff).epsilon(1e-9));
    }
    CHECK(converged >= 25);
}

TEST_CASE("search: dendro projection reports original-length results") {
    ParityCheckMatrix h = load_alist_file(oracle::fixture_path("hamming74.alist"));
    SearchCode code = search_code_dendro(dendro_transform(h));
    CHECK(code.matrix.num_bits == 10);
    SearchConfig cfg;
    Rng rng(7);
    LpDecoder decoder(code.matrix, cfg.lp);
    for (int t = 0; t < 10; ++t) {
        NoiseVector x0 = random_initial_noise(code, rng, cfg, &decoder);
        InstantonResult r = pseudo_codeword_search(code, x0, cfg, &decoder);
        if (r.status != SearchStatus::Converged) continue;
        CHECK(r.pseudo_codeword.beliefs.size() == 7);
        CHECK(r.instanton.size() == 7);
        CHECK(effective_distance(r.pseudo_codeword.beliefs) == doctest::Approx(r.d_eff).epsilon(1e-9));
    }
}

TEST_CASE("random_initial_noise: immediate acceptance, doubling, determinism, cap") {
    SearchCode code = search_code_original(prism_code());
    SearchConfig cfg;
    LpDecoder decoder(code.matrix, cfg.lp);

    // large scale: every llr negative, first decode cannot be the zero codeword
    cfg.init_scale = 50.0;
    Rng r1(5);
    NoiseVector big = random_initial_noise(code, r1, cfg, &decoder);
    CHECK(decoder.decode(llr_from_output(big, Snr{1.0})).kind != PcwKind::ZeroCodeword);

    // tiny scale: doubling has to engage before acceptance
    cfg.init_scale = 1e-4;
    Rng r2(5);
    NoiseVector grown = random_initial_noise(code, r2, cfg, &decoder);
    CHECK(decoder.decode(llr_from_output(grown, Snr{1.0})).kind != PcwKind::ZeroCodeword);
    double ratio = grown[0] / big[0];
    CHECK(ratio > 1e-4 / 50.0);  // same direction, rescaled

    // replay
    cfg.init_scale = 1.0;
    Rng r3(99), r4(99);
    CHECK(random_initial_noise(code, r3, cfg, &decoder) == random_initial_noise(code, r4, cfg, &decoder));

    // doubling cap
    cfg.init_scale = 1e-12;
    cfg.doubling_cap = 2;
    Rng r5(1);
    CHECK_THROWS_WITH_AS(random_initial_noise(code, r5, cfg, &decoder), doctest::Contains("doubling"),
                         std::runtime_error);
}

TEST_CASE("search: zero-collapse reports a restart signal") {
    // start so close to the zero codeword that the first decode is zero
    SearchCode code = search_code_original(prism_code());
    SearchConfig cfg;
    NoiseVector x0(9, 0.01);
    InstantonResult r = pseudo_codeword_search(code, x0, cfg);
    CHECK(r.status == SearchStatus::CollapsedToZero);
}
