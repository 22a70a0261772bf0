#include "ldpclp/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ldpclp {

SearchCode search_code_original(const ParityCheckMatrix& h) {
    SearchCode c;
    c.matrix = h;
    c.punctured.assign(h.num_bits, 0);
    c.report_bits.resize(h.num_bits);
    std::iota(c.report_bits.begin(), c.report_bits.end(), 0);
    return c;
}

SearchCode search_code_dendro(const DendroCode& d) {
    SearchCode c;
    c.matrix = d.matrix;
    c.punctured = d.punctured;
    c.report_bits = d.origin_bits;
    return c;
}

namespace {

struct BeliefMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

BeliefMoments transmitted_moments(const std::vector<double>& beliefs, const std::vector<std::uint8_t>& punctured) {
    if (!punctured.empty() && punctured.size() != beliefs.size())
        throw std::invalid_argument("belief vector and punctured mask lengths differ");
    BeliefMoments m;
    for (std::size_t i = 0; i < beliefs.size(); ++i) {
        if (!punctured.empty() && punctured[i]) continue;
        m.sum += beliefs[i];
        m.sum_sq += beliefs[i] * beliefs[i];
    }
    if (m.sum_sq <= 0.0)
        throw std::invalid_argument("belief vector is zero on all transmitted positions");
    return m;
}

}  // namespace

double effective_distance(const std::vector<double>& beliefs, const std::vector<std::uint8_t>& punctured) {
    BeliefMoments m = transmitted_moments(beliefs, punctured);
    return m.sum * m.sum / m.sum_sq;
}

NoiseVector median_noise(const std::vector<double>& beliefs, const std::vector<std::uint8_t>& punctured) {
    BeliefMoments m = transmitted_moments(beliefs, punctured);
    const double factor = m.sum / (2.0 * m.sum_sq);
    NoiseVector y(beliefs.size(), 0.0);
    for (std::size_t i = 0; i < beliefs.size(); ++i) {
        if (!punctured.empty() && punctured[i]) continue;
        y[i] = beliefs[i] * factor;
    }
    return y;
}

namespace {

// Search geometry is SNR independent, so decodes run at s^2 = 1.
LlrVector llr_at_unit_snr(const NoiseVector& x, const std::vector<std::uint8_t>& punctured) {
    return llr_from_output(x, Snr{1.0}, punctured);
}

std::vector<double> restrict_to(const std::vector<int>& positions, const std::vector<double>& v) {
    std::vector<double> out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) out[i] = v[positions[i]];
    return out;
}

}  // namespace

namespace {

struct Candidate {
    PseudoCodeword pcw;
    NoiseVector y;
    double d = 0.0;
};

}  // namespace

InstantonResult pseudo_codeword_search(const SearchCode& code, const NoiseVector& x0, const SearchConfig& cfg,
                                       LpDecoder* decoder) {
    if (static_cast<int>(x0.size()) != code.matrix.num_bits)
        throw std::invalid_argument("pseudo_codeword_search: noise length mismatch");

    std::optional<LpDecoder> local;
    if (!decoder) {
        local.emplace(code.matrix, cfg.lp);
        decoder = &*local;
    }

    InstantonResult res;
    int iters = 0;

    auto decode_at = [&](const NoiseVector& x) {
        ++iters;
        return decoder->decode(llr_at_unit_snr(x, code.punctured));
    };
    auto note = [&](const PseudoCodeword& p, double d) {
        if (cfg.keep_trajectory) res.trajectory.push_back({d, p.kind});
    };

    PseudoCodeword pcw = decode_at(x0);
    if (pcw.kind == PcwKind::ZeroCodeword) {
        res.status = SearchStatus::CollapsedToZero;
        res.iterations = iters;
        return res;
    }

    Candidate best{pcw, median_noise(pcw.beliefs, code.punctured),
                   effective_distance(pcw.beliefs, code.punctured)};
    note(best.pcw, best.d);

    // Push-to-median loop. Leaves for the refinement phase once successive
    // medians stop moving or the best distance stops improving.
    NoiseVector y = best.y;
    int stall = 0;
    const int stall_limit = 10;
    while (iters < cfg.max_iters) {
        NoiseVector x(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) x[i] = (1.0 + cfg.delta) * y[i];
        pcw = decode_at(x);
        if (pcw.kind == PcwKind::ZeroCodeword) {
            res.status = SearchStatus::CollapsedToZero;
            res.iterations = iters;
            return res;
        }
        NoiseVector y2 = median_noise(pcw.beliefs, code.punctured);
        double d2 = effective_distance(pcw.beliefs, code.punctured);
        note(pcw, d2);
        if (d2 < best.d - 1e-12) {
            best = Candidate{pcw, y2, d2};
            stall = 0;
        } else {
            ++stall;
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < y2.size(); ++i) diff = std::max(diff, std::fabs(y2[i] - y[i]));
        y = std::move(y2);
        if (diff < cfg.tol_y || stall >= stall_limit) break;
    }

    // Surface refinement: step just inside the candidate median until the zero
    // codeword wins there. Any erroneous decode inside the sphere has
    // d_eff < (1-delta)^2 * d of the candidate, so this descends strictly.
    while (iters < cfg.max_iters) {
        NoiseVector inner(best.y.size());
        for (std::size_t i = 0; i < best.y.size(); ++i) inner[i] = (1.0 - cfg.delta) * best.y[i];
        PseudoCodeword probe = decode_at(inner);
        if (probe.kind == PcwKind::ZeroCodeword) {
            res.status = SearchStatus::Converged;
            res.iterations = iters;
            res.d_eff = best.d;
            res.pseudo_codeword = best.pcw;
            res.pseudo_codeword.beliefs = restrict_to(code.report_bits, best.pcw.beliefs);
            res.instanton = restrict_to(code.report_bits, best.y);
            if (cfg.straddle_check) {
                res.straddle_checked = true;
                res.straddle_inner_zero = true;  // verified by the probe that ended the descent
                NoiseVector outer(best.y.size());
                for (std::size_t i = 0; i < best.y.size(); ++i) outer[i] = (1.0 + cfg.delta) * best.y[i];
                res.straddle_outer_nonzero = decode_at(outer).kind != PcwKind::ZeroCodeword;
            }
            return res;
        }
        double d2 = effective_distance(probe.beliefs, code.punctured);
        note(probe, d2);
        if (d2 >= best.d - 1e-12) break;  // numerically stuck; report the cap below
        best = Candidate{probe, median_noise(probe.beliefs, code.punctured), d2};
    }

    res.status = SearchStatus::IterationCap;
    res.iterations = iters;
    res.d_eff = best.d;
    res.pseudo_codeword = best.pcw;
    res.pseudo_codeword.beliefs = restrict_to(code.report_bits, best.pcw.beliefs);
    res.instanton = restrict_to(code.report_bits, best.y);
    return res;
}

NoiseVector random_initial_noise(const SearchCode& code, Rng& rng, const SearchConfig& cfg, LpDecoder* decoder) {
    std::optional<LpDecoder> local;
    if (!decoder) {
        local.emplace(code.matrix, cfg.lp);
        decoder = &*local;
    }

    const int n = code.matrix.num_bits;
    NoiseVector direction(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double g = rng.half_normal();
        if (code.punctured.empty() || !code.punctured[i]) direction[i] = g;
    }

    double scale = cfg.init_scale;
    NoiseVector x(n, 0.0);
    for (int attempt = 0; attempt <= cfg.doubling_cap; ++attempt) {
        for (int i = 0; i < n; ++i) x[i] = scale * direction[i];
        PseudoCodeword pcw = decoder->decode(llr_at_unit_snr(x, code.punctured));
        if (pcw.kind != PcwKind::ZeroCodeword) return x;
        scale *= 2.0;
    }
    throw std::runtime_error("random_initial_noise: amplitude doubling cap reached without leaving the decision region");
}

}  // namespace ldpclp
