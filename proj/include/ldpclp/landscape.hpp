#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldpclp/search.hpp"

namespace ldpclp {

struct RestartSample {
    int restart = 0;
    SearchStatus status = SearchStatus::Converged;
    double d_eff = 0.0;
    PcwKind kind = PcwKind::Fractional;
    int iterations = 0;
    bool straddle_ok = false;
    double balance_residual = 0.0;  // |sum_i h_i(y) b_i| at the terminal median
};

struct SpectrumEntry {
    double d_eff = 0.0;  // bin lower edge
    PcwKind kind = PcwKind::Fractional;
    int count = 0;
};

struct SpectrumRecord {
    std::vector<SpectrumEntry> entries;  // sorted by d_eff, then kind
    double bin_width = 0.05;
    double range_lo = 0.0;
    double range_hi = 0.0;
    std::string code_id;
    int restarts = 0;
    std::uint64_t seed = 0;
    int converged = 0;
    int collapsed = 0;
    int capped = 0;
    std::optional<double> min_d_eff;
    std::vector<RestartSample> samples;  // per-restart raw records, restart order
};

struct SpectrumConfig {
    double bin_width = 0.05;
    int workers = 1;
    SearchConfig search;
};

/// Runs independent searches with seeds derived per restart and aggregates the
/// effective-distance histogram. Output is identical for any worker count.
SpectrumRecord build_spectrum(const SearchCode& code, int restarts, std::uint64_t seed, const SpectrumConfig& cfg);

// Rebuilds the histogram from the raw samples at a different resolution.
SpectrumRecord rebin(const SpectrumRecord& rec, double bin_width);

struct SpectrumGap {
    double gap_start = 0.0;  // last populated bin before the gap
    double gap_end = 0.0;    // first populated bin after it
};

/// Largest interval between consecutive populated bins (count >= min_count),
/// anchored below by the lowest occupied bin regardless of its count; returns
/// nothing when the spectrum is contiguous at the bin resolution.
std::optional<SpectrumGap> spectrum_gap(const SpectrumRecord& rec, int min_count);

std::string spectrum_to_json(const SpectrumRecord& rec);
std::string spectrum_to_csv(const SpectrumRecord& rec);
std::string spectrum_to_density(const SpectrumRecord& rec);  // two-column d_eff density

}  // namespace ldpclp
