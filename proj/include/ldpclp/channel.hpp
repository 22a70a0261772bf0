#pragma once

#include <cstdint>
#include <vector>

#include "ldpclp/rng.hpp"

namespace ldpclp {

/// AWGN signal-to-noise ratio, stored as s^2 = E_c/N_0.
struct Snr {
    double s_squared = 1.0;

    static Snr from_s2(double s2);
    static Snr from_db(double db);
    double db() const;
};

// Channel output measured from the zero codeword.
using NoiseVector = std::vector<double>;
using LlrVector = std::vector<double>;

// h_i = s^2 (1 - 2 x_i) at transmitted positions, exactly 0 at punctured ones.
// An empty mask means every position is transmitted.
LlrVector llr_from_output(const NoiseVector& x, Snr snr, const std::vector<std::uint8_t>& punctured = {});

// i.i.d. x_i ~ Normal(0, 1/(4 s^2)) at transmitted positions, 0 at punctured ones.
NoiseVector sample_awgn(Snr snr, int n, Rng& rng, const std::vector<std::uint8_t>& punctured = {});

double noise_sigma(Snr snr);

}  // namespace ldpclp
