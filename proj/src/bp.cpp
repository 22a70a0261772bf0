#include "ldpclp/bp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ldpclp {

namespace {

// Stable log-domain pairwise combine: 2 atanh(tanh(a/2) tanh(b/2)).
inline double boxplus(double a, double b) {
    double m = std::copysign(1.0, a) * std::copysign(1.0, b) * std::min(std::fabs(a), std::fabs(b));
    return m + std::log1p(std::exp(-std::fabs(a + b))) - std::log1p(std::exp(-std::fabs(a - b)));
}

inline double clamp_msg(double v, double limit) { return std::clamp(v, -limit, limit); }

}  // namespace

BpResult bp_decode(const ParityCheckMatrix& h, const LlrVector& llr, const BpOptions& opts) {
    if (static_cast<int>(llr.size()) != h.num_bits) throw std::invalid_argument("bp_decode: LLR length mismatch");
    if (opts.max_iters < 1) throw std::invalid_argument("bp_decode: max_iters must be >= 1");

    const int m = h.num_checks;
    const int n = h.num_bits;

    // Edge layout: contiguous per check; bits keep the edge ids they touch.
    std::vector<int> check_edge_base(m + 1, 0);
    for (int a = 0; a < m; ++a) check_edge_base[a + 1] = check_edge_base[a] + static_cast<int>(h.rows[a].size());
    const int num_edges = check_edge_base[m];
    std::vector<int> edge_bit(num_edges);
    std::vector<std::vector<int>> bit_edges(n);
    for (int a = 0; a < m; ++a) {
        for (std::size_t t = 0; t < h.rows[a].size(); ++t) {
            int e = check_edge_base[a] + static_cast<int>(t);
            edge_bit[e] = h.rows[a][t];
            bit_edges[h.rows[a][t]].push_back(e);
        }
    }

    std::vector<double> v2c(num_edges), c2v(num_edges, 0.0);
    for (int e = 0; e < num_edges; ++e) v2c[e] = clamp_msg(llr[edge_bit[e]], opts.clamp);

    BpResult res;
    res.hard.assign(n, 0);
    std::vector<double> posterior(n);

    auto hard_decide = [&](const std::vector<double>& l) {
        for (int i = 0; i < n; ++i) res.hard[i] = l[i] < 0.0 ? 1 : 0;
    };

    // The channel decision alone may already satisfy every check.
    hard_decide(llr);
    if (is_codeword(h, res.hard)) {
        res.converged = true;
        res.iterations = 0;
        return res;
    }

    std::vector<double> fwd, bwd;
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        for (int a = 0; a < m; ++a) {
            const int base = check_edge_base[a];
            const int q = check_edge_base[a + 1] - base;
            if (q == 1) {
                c2v[base] = opts.clamp;  // a lone bit is pinned to zero
                continue;
            }
            fwd.assign(q, 0.0);
            bwd.assign(q, 0.0);
            fwd[0] = v2c[base];
            bwd[q - 1] = v2c[base + q - 1];
            for (int t = 1; t < q; ++t) {
                fwd[t] = boxplus(fwd[t - 1], v2c[base + t]);
                bwd[q - 1 - t] = boxplus(bwd[q - t], v2c[base + q - 1 - t]);
            }
            c2v[base] = clamp_msg(bwd[1], opts.clamp);
            c2v[base + q - 1] = clamp_msg(fwd[q - 2], opts.clamp);
            for (int t = 1; t < q - 1; ++t) c2v[base + t] = clamp_msg(boxplus(fwd[t - 1], bwd[t + 1]), opts.clamp);
        }

        for (int i = 0; i < n; ++i) {
            double l = llr[i];
            for (int e : bit_edges[i]) l += c2v[e];
            posterior[i] = l;
            for (int e : bit_edges[i]) v2c[e] = clamp_msg(l - c2v[e], opts.clamp);
        }

        hard_decide(posterior);
        res.iterations = iter;
        if (is_codeword(h, res.hard)) {
            res.converged = true;
            return res;
        }
    }
    res.converged = false;
    return res;
}

}  // namespace ldpclp
