#include "ldpclp/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ldpclp {

Snr Snr::from_s2(double s2) {
    if (!(s2 > 0.0)) throw std::invalid_argument("snr: s^2 must be positive");
    return Snr{s2};
}

Snr Snr::from_db(double db) { return Snr{std::pow(10.0, db / 10.0)}; }

double Snr::db() const { return 10.0 * std::log10(s_squared); }

double noise_sigma(Snr snr) { return 1.0 / (2.0 * std::sqrt(snr.s_squared)); }

LlrVector llr_from_output(const NoiseVector& x, Snr snr, const std::vector<std::uint8_t>& punctured) {
    if (!punctured.empty() && punctured.size() != x.size())
        throw std::invalid_argument("llr_from_output: punctured mask length mismatch");
    LlrVector h(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!punctured.empty() && punctured[i])
            h[i] = 0.0;
        else
            h[i] = snr.s_squared * (1.0 - 2.0 * x[i]);
    }
    return h;
}

NoiseVector sample_awgn(Snr snr, int n, Rng& rng, const std::vector<std::uint8_t>& punctured) {
    if (n < 1) throw std::invalid_argument("sample_awgn: n must be >= 1");
    if (!punctured.empty() && static_cast<int>(punctured.size()) != n)
        throw std::invalid_argument("sample_awgn: punctured mask length mismatch");
    const double sigma = noise_sigma(snr);
    NoiseVector x(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double g = rng.normal();
        if (punctured.empty() || !punctured[i]) x[i] = sigma * g;
    }
    return x;
}

}  // namespace ldpclp
