#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ldpclp/channel.hpp"
#include "ldpclp/dendro.hpp"
#include "ldpclp/lp.hpp"
#include "ldpclp/parity_check.hpp"
#include "ldpclp/rng.hpp"

namespace ldpclp {

/// Code carrier for a search run: the matrix decoded against, its punctured
/// mask, and the bit positions results are reported on.
struct SearchCode {
    ParityCheckMatrix matrix;
    std::vector<std::uint8_t> punctured;  // length matrix.num_bits
    std::vector<int> report_bits;         // positions projected into results
};

SearchCode search_code_original(const ParityCheckMatrix& h);
SearchCode search_code_dendro(const DendroCode& d);

struct SearchConfig {
    double delta = 1e-3;        // multiplicative push past the median
    double tol_y = 1e-8;        // infinity-norm termination test on medians
    int max_iters = 200;
    double init_scale = 1.0;    // starting half-normal amplitude scale
    int doubling_cap = 20;
    bool straddle_check = true; // verify error-surface membership on termination
    bool keep_trajectory = true;
    LpOptions lp;
};

// (sum b)^2 / sum b^2 over non-punctured positions.
double effective_distance(const std::vector<double>& beliefs, const std::vector<std::uint8_t>& punctured = {});

// Weighted median toward the zero codeword: y_i = b_i * sum(b) / (2 sum(b^2))
// on non-punctured positions, zero at punctured ones.
NoiseVector median_noise(const std::vector<double>& beliefs, const std::vector<std::uint8_t>& punctured = {});

enum class SearchStatus { Converged, CollapsedToZero, IterationCap };

struct TrajectoryStep {
    double d_eff;
    PcwKind kind;
};

struct InstantonResult {
    SearchStatus status = SearchStatus::Converged;
    PseudoCodeword pseudo_codeword;  // beliefs restricted to report_bits
    NoiseVector instanton;           // same restriction of the terminal median
    double d_eff = 0.0;
    int iterations = 0;
    std::vector<TrajectoryStep> trajectory;
    bool straddle_checked = false;
    bool straddle_inner_zero = false;    // decode at (1-delta) y returned the zero codeword
    bool straddle_outer_nonzero = false; // decode at (1+delta) y stayed erroneous
};

/// One run of the search loop: decode, move to the weighted median, push just
/// past it, repeat until the median stops moving.
InstantonResult pseudo_codeword_search(const SearchCode& code, const NoiseVector& x0, const SearchConfig& cfg,
                                       LpDecoder* decoder = nullptr);

// Half-normal amplitudes with doubling until the LP decodes away from the zero
// codeword; the direction is drawn once and only the scale grows.
NoiseVector random_initial_noise(const SearchCode& code, Rng& rng, const SearchConfig& cfg,
                                 LpDecoder* decoder = nullptr);

}  // namespace ldpclp
