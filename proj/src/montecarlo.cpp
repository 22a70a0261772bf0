#include "ldpclp/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ldpclp/rng.hpp"

namespace ldpclp {

double asymptote_estimate(double d_eff, Snr snr) {
    if (d_eff < 1.0) throw std::invalid_argument("asymptote_estimate: effective distance must be >= 1");
    return std::exp(-0.5 * d_eff * snr.s_squared);
}

WilsonInterval wilson_interval(long errors, long frames) {
    if (frames <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(frames);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (errors == 0) ci.low = 0.0;
    if (errors == frames) ci.high = 1.0;
    return ci;
}

namespace {

struct FrameWorker {
    const ParityCheckMatrix& h;
    const std::vector<std::uint8_t>& punctured;
    Snr snr;
    const FerConfig& cfg;
    std::unique_ptr<LpDecoder> lp;

    explicit FrameWorker(const ParityCheckMatrix& code, const std::vector<std::uint8_t>& mask, Snr s,
                         const FerConfig& c)
        : h(code), punctured(mask), snr(s), cfg(c) {
        if (cfg.decoder == DecoderKind::Lp) lp = std::make_unique<LpDecoder>(h, cfg.lp);
    }

    bool frame_fails(std::uint64_t master_seed, long frame) {
        Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(frame)));
        NoiseVector x = sample_awgn(snr, h.num_bits, rng, punctured);
        LlrVector llr = llr_from_output(x, snr, punctured);
        if (cfg.decoder == DecoderKind::Lp) {
            lp->reset();  // every frame decodes from the same starting vertex
            return lp->decode(llr).kind != PcwKind::ZeroCodeword;
        }
        BpResult r = bp_decode(h, llr, cfg.bp);
        for (int i = 0; i < h.num_bits; ++i) {
            if (!punctured.empty() && punctured[i]) continue;
            if (r.hard[i]) return true;
        }
        return false;
    }
};

}  // namespace

FerPoint estimate_fer(const ParityCheckMatrix& h, const std::vector<std::uint8_t>& punctured, Snr snr,
                      const StopRule& stop, std::uint64_t seed, const FerConfig& cfg) {
    if (stop.target_errors < 1 && stop.max_frames < 1)
        throw std::invalid_argument("estimate_fer: need a positive target error count or frame cap");
    if (!punctured.empty() && static_cast<int>(punctured.size()) != h.num_bits)
        throw std::invalid_argument("estimate_fer: punctured mask length mismatch");

    const long max_frames = stop.max_frames >= 1 ? stop.max_frames : std::numeric_limits<long>::max();
    const long batch = std::max<long>(1, cfg.batch_size);
    const int workers = std::max(1, cfg.workers);

    long frames = 0, errors = 0;
    std::vector<std::unique_ptr<FrameWorker>> pool_workers;
    for (int w = 0; w < workers; ++w) pool_workers.push_back(std::make_unique<FrameWorker>(h, punctured, snr, cfg));

    while (frames < max_frames && (stop.target_errors < 1 || errors < stop.target_errors)) {
        const long begin = frames;
        const long end = std::min(max_frames, begin + batch);
        std::atomic<long> next{begin};
        std::atomic<long> batch_errors{0};
        auto run = [&](FrameWorker& worker) {
            for (long f = next.fetch_add(1); f < end; f = next.fetch_add(1))
                if (worker.frame_fails(seed, f)) batch_errors.fetch_add(1);
        };
        if (workers == 1) {
            run(*pool_workers[0]);
        } else {
            std::vector<std::thread> threads;
            threads.reserve(workers);
            for (int w = 0; w < workers; ++w) threads.emplace_back(run, std::ref(*pool_workers[w]));
            for (auto& t : threads) t.join();
        }
        errors += batch_errors.load();
        frames = end;
    }

    FerPoint p;
    p.snr = snr;
    p.frames = frames;
    p.errors = errors;
    p.fer = frames > 0 ? static_cast<double>(errors) / static_cast<double>(frames) : 0.0;
    WilsonInterval ci = wilson_interval(errors, frames);
    p.ci_low = ci.low;
    p.ci_high = ci.high;
    p.decoder = cfg.decoder;
    p.seed = seed;
    return p;
}

std::string fer_csv_header() { return "snr_db,frames,errors,fer,ci_low,ci_high\n"; }

std::string fer_to_csv_row(const FerPoint& p) {
    std::ostringstream os;
    os.precision(12);
    os << p.snr.db() << ',' << p.frames << ',' << p.errors << ',' << p.fer << ',' << p.ci_low << ',' << p.ci_high
       << '\n';
    return os.str();
}

}  // namespace ldpclp
