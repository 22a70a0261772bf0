#include <doctest.h>

#include <algorithm>
#include <set>

#include "ldpclp/dendro.hpp"
#include "ldpclp/parity_check.hpp"
#include "ldpclp/rng.hpp"
#include "oracles.hpp"

using namespace ldpclp;

namespace {

// Random test code small enough that the transformed code stays enumerable.
ParityCheckMatrix random_enumerable_code(Rng& rng) {
    for (;;) {
        int n = 8 + static_cast<int>(rng.next_u64() % 9);  // 8..16
        int m = 3 + static_cast<int>(rng.next_u64() % 4);  // 3..6
        auto rows = oracle::random_code_rows(rng, n, m, 1, 6);
        int extra = 0;
        for (const auto& r : rows) extra += std::max<int>(static_cast<int>(r.size()) - 3, 0);
        if (n + extra <= 22) return make_parity_check_matrix(n, std::move(rows));
    }
}

}  // namespace

TEST_CASE("dendro: structural counts and degree bounds") {
    // degree-3 check passes through untouched
    ParityCheckMatrix deg3 = make_parity_check_matrix(3, {{0, 1, 2}});
    DendroCode d3 = dendro_transform(deg3);
    CHECK(d3.matrix.num_bits == 3);
    CHECK(d3.matrix.num_checks == 1);
    CHECK(d3.num_punctured() == 0);
    CHECK(d3.matrix.rows == deg3.rows);

    // degree-4 check becomes 2 checks and 1 punctured bit
    ParityCheckMatrix deg4 = make_parity_check_matrix(4, {{0, 1, 2, 3}});
    DendroCode d4 = dendro_transform(deg4);
    CHECK(d4.matrix.num_bits == 5);
    CHECK(d4.matrix.num_checks == 2);
    CHECK(d4.num_punctured() == 1);

    // degree-6 check becomes 4 checks and 3 punctured bits
    ParityCheckMatrix deg6 = make_parity_check_matrix(6, {{0, 1, 2, 3, 4, 5}});
    DendroCode d6 = dendro_transform(deg6);
    CHECK(d6.matrix.num_bits == 9);
    CHECK(d6.matrix.num_checks == 4);
    CHECK(d6.num_punctured() == 3);
    for (const auto& row : d6.matrix.rows) CHECK(row.size() <= 3);

    // punctured bits have degree exactly 2; originals keep their degree
    Rng rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        ParityCheckMatrix h = random_enumerable_code(rng);
        DendroCode d = dendro_transform(h);
        int extra = 0;
        for (const auto& r : h.rows) extra += std::max<int>(static_cast<int>(r.size()) - 3, 0);
        CHECK(d.matrix.num_bits == h.num_bits + extra);
        CHECK(d.matrix.num_checks == h.num_checks + extra);
        for (const auto& row : d.matrix.rows) {
            CHECK(row.size() >= 1);
            CHECK(row.size() <= 3);
        }
        for (int i = 0; i < d.matrix.num_bits; ++i) {
            if (d.punctured[i])
                CHECK(d.matrix.cols[i].size() == 2);
            else
                CHECK(d.matrix.cols[i].size() == h.cols[i].size());
        }
        for (int a = 0; a < d.matrix.num_checks; ++a) {
            CHECK(d.check_provenance[a] >= 0);
            CHECK(d.check_provenance[a] < h.num_checks);
        }
    }

    ParityCheckMatrix degenerate;
    degenerate.num_bits = 2;
    degenerate.num_checks = 1;
    degenerate.rows = {{}};
    degenerate.cols = {{}, {}};
    CHECK_THROWS_AS(dendro_transform(degenerate), std::invalid_argument);
}

TEST_CASE("dendro: transform is deterministic") {
    ParityCheckMatrix h = load_alist_file(oracle::fixture_path("tanner155.alist"));
    DendroCode a = dendro_transform(h);
    DendroCode b = dendro_transform(h);
    CHECK(a.matrix.rows == b.matrix.rows);
    CHECK(a.punctured == b.punctured);
    CHECK(a.check_provenance == b.check_provenance);
    CHECK(write_alist(a.matrix) == write_alist(b.matrix));
    CHECK(a.matrix.num_bits == 341);
    CHECK(a.matrix.num_checks == 279);
    CHECK(a.num_punctured() == 186);
}

TEST_CASE("dendro: lift computes prefix parities") {
    // single check of degree 5, v = 11000 -> t1 = 0, t2 = 0
    ParityCheckMatrix h = make_parity_check_matrix(5, {{0, 1, 2, 3, 4}});
    DendroCode d = dendro_transform(h);
    Codeword v{1, 1, 0, 0, 0};
    Codeword w = lift_codeword(d, v);
    CHECK(w == Codeword{1, 1, 0, 0, 0, 0, 0});

    // prefix parities for a length-6 check
    ParityCheckMatrix h6 = make_parity_check_matrix(6, {{0, 1, 2, 3, 4, 5}});
    DendroCode d6 = dendro_transform(h6);
    Codeword v6{1, 0, 1, 1, 0, 1};
    Codeword w6 = lift_codeword(d6, v6);
    CHECK(w6[6] == (1 ^ 0));          // t1 = v0 ^ v1
    CHECK(w6[7] == (1 ^ 0 ^ 1));      // t2 = t1 ^ v2
    CHECK(w6[8] == (1 ^ 0 ^ 1 ^ 1));  // t3 = t2 ^ v3
    CHECK(is_codeword(d6.matrix, w6));

    // zero maps to zero
    CHECK(lift_codeword(d6, Codeword(6, 0)) == Codeword(9, 0));

    // non-codewords are rejected
    CHECK_THROWS_AS(lift_codeword(d6, Codeword{1, 0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("dendro: projection inverts lift and handles reals") {
    ParityCheckMatrix h = load_alist_file(oracle::fixture_path("hamming74.alist"));
    DendroCode d = dendro_transform(h);
    for (const auto& v : enumerate_codewords(h)) CHECK(project_bits(d, lift_codeword(d, v)) == v);

    std::vector<double> w(d.matrix.num_bits, 0.0);
    CHECK(project(d, w) == std::vector<double>(7, 0.0));
    CHECK_THROWS_AS(project(d, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("dendro: codeword sets are in bijection (hamming + random codes)") {
    Rng rng(90210);
    std::vector<ParityCheckMatrix> codes;
    codes.push_back(load_alist_file(oracle::fixture_path("hamming74.alist")));
    for (int t = 0; t < 12; ++t) codes.push_back(random_enumerable_code(rng));

    for (const auto& h : codes) {
        DendroCode d = dendro_transform(h);
        auto original = enumerate_codewords(h);
        auto lifted = enumerate_codewords(d.matrix);
        CHECK(original.size() == lifted.size());

        std::set<Codeword> orig_set(original.begin(), original.end());
        std::set<Codeword> projected;
        for (const auto& w : lifted) projected.insert(project_bits(d, w));
        CHECK(projected == orig_set);

        for (const auto& v : original) {
            Codeword w = lift_codeword(d, v);
            CHECK(is_codeword(d.matrix, w));
            CHECK(project_bits(d, w) == v);
        }
    }
}

TEST_CASE("dendro: MAP decoding agrees through the transform") {
    Rng rng(1963);
    std::vector<ParityCheckMatrix> codes;
    codes.push_back(load_alist_file(oracle::fixture_path("hamming74.alist")));
    for (int t = 0; t < 4; ++t) codes.push_back(random_enumerable_code(rng));

    for (const auto& h : codes) {
        DendroCode d = dendro_transform(h);
        auto cws = enumerate_codewords(h);
        auto cws_dendro = enumerate_codewords(d.matrix);
        for (int t = 0; t < 300; ++t) {
            std::vector<double> llr(h.num_bits);
            for (auto& v : llr) v = rng.normal();
            std::vector<double> lifted_llr(d.matrix.num_bits, 0.0);
            for (int i = 0; i < h.num_bits; ++i) lifted_llr[d.origin_bits[i]] = llr[i];

            Codeword direct = min_objective_codeword(cws, llr);
            Codeword through = project_bits(d, min_objective_codeword(cws_dendro, lifted_llr));
            CHECK(direct == through);
        }
    }
}
