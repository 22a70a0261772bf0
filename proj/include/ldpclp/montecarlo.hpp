#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldpclp/bp.hpp"
#include "ldpclp/channel.hpp"
#include "ldpclp/lp.hpp"
#include "ldpclp/parity_check.hpp"

namespace ldpclp {

enum class DecoderKind { Lp, Bp };

struct FerPoint {
    Snr snr;
    long frames = 0;
    long errors = 0;
    double fer = 0.0;
    double ci_low = 0.0;   // Wilson 95% interval
    double ci_high = 0.0;
    DecoderKind decoder = DecoderKind::Lp;
    std::uint64_t seed = 0;
};

struct StopRule {
    long target_errors = 100;
    long max_frames = 10'000'000;
};

struct FerConfig {
    DecoderKind decoder = DecoderKind::Lp;
    int workers = 1;
    long batch_size = 256;  // stop rule is evaluated at batch boundaries
    LpOptions lp;
    BpOptions bp;
};

/// Frames transmit the zero codeword; a frame fails unless the decoder returns
/// exactly zero on every non-punctured bit. Per-frame seeds derive from the
/// master seed and the frame index, so a run replays identically for any
/// worker count given the batch size.
FerPoint estimate_fer(const ParityCheckMatrix& h, const std::vector<std::uint8_t>& punctured, Snr snr,
                      const StopRule& stop, std::uint64_t seed, const FerConfig& cfg);

// exp(-d s^2 / 2): the slope factor of the high-SNR error-floor asymptote; any
// overall prefactor must be fitted to an anchor measurement when plotting.
double asymptote_estimate(double d_eff, Snr snr);

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};
WilsonInterval wilson_interval(long errors, long frames);

std::string fer_csv_header();
std::string fer_to_csv_row(const FerPoint& p);

}  // namespace ldpclp
