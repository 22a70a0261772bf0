#include "ldpclp/landscape.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace ldpclp {

namespace {

RestartSample run_one_restart(const SearchCode& code, int restart, std::uint64_t master_seed, const SearchConfig& scfg,
                              LpDecoder& decoder) {
    RestartSample s;
    s.restart = restart;
    Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(restart)));
    decoder.reset();  // warm starts stay within a restart so scheduling cannot leak in
    try {
        NoiseVector x0 = random_initial_noise(code, rng, scfg, &decoder);
        InstantonResult r = pseudo_codeword_search(code, x0, scfg, &decoder);
        s.status = r.status;
        s.iterations = r.iterations;
        if (r.status == SearchStatus::Converged) {
            s.d_eff = r.d_eff;
            s.kind = r.pseudo_codeword.kind;
            s.straddle_ok = !r.straddle_checked || (r.straddle_inner_zero && r.straddle_outer_nonzero);
            double balance = 0.0;
            for (std::size_t i = 0; i < r.instanton.size(); ++i)
                balance += (1.0 - 2.0 * r.instanton[i]) * r.pseudo_codeword.beliefs[i];
            s.balance_residual = std::fabs(balance);
        }
    } catch (const std::exception&) {
        s.status = SearchStatus::CollapsedToZero;  // counted as an aborted search
    }
    return s;
}

void aggregate(SpectrumRecord& rec) {
    std::map<std::pair<long long, int>, int> bins;
    rec.converged = rec.collapsed = rec.capped = 0;
    rec.min_d_eff.reset();
    rec.range_lo = rec.range_hi = 0.0;
    for (const auto& s : rec.samples) {
        switch (s.status) {
            case SearchStatus::Converged: ++rec.converged; break;
            case SearchStatus::CollapsedToZero: ++rec.collapsed; break;
            case SearchStatus::IterationCap: ++rec.capped; break;
        }
        if (s.status != SearchStatus::Converged) continue;
        if (!rec.min_d_eff || s.d_eff < *rec.min_d_eff) rec.min_d_eff = s.d_eff;
        long long bin = static_cast<long long>(std::floor(s.d_eff / rec.bin_width));
        bins[{bin, static_cast<int>(s.kind)}] += 1;
    }
    rec.entries.clear();
    for (const auto& [key, count] : bins) {
        SpectrumEntry e;
        e.d_eff = static_cast<double>(key.first) * rec.bin_width;
        e.kind = static_cast<PcwKind>(key.second);
        e.count = count;
        rec.entries.push_back(e);
    }
    if (!rec.entries.empty()) {
        rec.range_lo = rec.entries.front().d_eff;
        rec.range_hi = rec.entries.back().d_eff + rec.bin_width;
    }
}

}  // namespace

SpectrumRecord build_spectrum(const SearchCode& code, int restarts, std::uint64_t seed, const SpectrumConfig& cfg) {
    if (restarts < 1) throw std::invalid_argument("build_spectrum: restarts must be >= 1");
    if (cfg.bin_width <= 0.0) throw std::invalid_argument("build_spectrum: bin width must be positive");

    SpectrumRecord rec;
    rec.bin_width = cfg.bin_width;
    rec.restarts = restarts;
    rec.seed = seed;
    rec.samples.resize(restarts);

    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        LpDecoder decoder(code.matrix, cfg.search.lp);
        for (int r = 0; r < restarts; ++r) rec.samples[r] = run_one_restart(code, r, seed, cfg.search, decoder);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                LpDecoder decoder(code.matrix, cfg.search.lp);
                for (int r = next.fetch_add(1); r < restarts; r = next.fetch_add(1))
                    rec.samples[r] = run_one_restart(code, r, seed, cfg.search, decoder);
            });
        }
        for (auto& t : pool) t.join();
    }

    aggregate(rec);
    return rec;
}

SpectrumRecord rebin(const SpectrumRecord& rec, double bin_width) {
    if (bin_width <= 0.0) throw std::invalid_argument("rebin: bin width must be positive");
    SpectrumRecord out = rec;
    out.bin_width = bin_width;
    aggregate(out);
    return out;
}

std::optional<SpectrumGap> spectrum_gap(const SpectrumRecord& rec, int min_count) {
    if (rec.entries.empty()) throw std::invalid_argument("spectrum_gap: empty spectrum");

    // Collapse kinds: occupancy per bin edge.
    std::map<double, int> bin_counts;
    for (const auto& e : rec.entries) bin_counts[e.d_eff] += e.count;

    std::vector<double> anchors;
    anchors.push_back(bin_counts.begin()->first);  // lowest occupied bin, however rare
    for (const auto& [edge, count] : bin_counts)
        if (count >= min_count && (anchors.empty() || edge != anchors.front())) anchors.push_back(edge);
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

    SpectrumGap best{0.0, 0.0};
    double best_len = 0.0;
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        double len = anchors[i] - anchors[i - 1];
        if (len > best_len) {
            best_len = len;
            best = {anchors[i - 1], anchors[i]};
        }
    }
    if (best_len <= 1.5 * rec.bin_width) return std::nullopt;  // contiguous at this resolution
    return best;
}

namespace {

double round12(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    std::ostringstream os;
    os.precision(12);
    os << v;
    return std::stod(os.str());
}

const char* status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::Converged: return "converged";
        case SearchStatus::CollapsedToZero: return "collapsed_to_zero";
        case SearchStatus::IterationCap: return "iteration_cap";
    }
    return "unknown";
}

}  // namespace

std::string spectrum_to_json(const SpectrumRecord& rec) {
    nlohmann::json j;
    j["code_id"] = rec.code_id;
    j["restarts"] = rec.restarts;
    j["seed"] = rec.seed;
    j["bin_width"] = rec.bin_width;
    j["range"] = {round12(rec.range_lo), round12(rec.range_hi)};
    j["converged"] = rec.converged;
    j["collapsed_to_zero"] = rec.collapsed;
    j["iteration_cap"] = rec.capped;
    if (rec.min_d_eff) j["min_d_eff"] = round12(*rec.min_d_eff);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : rec.entries)
        entries.push_back({{"d_eff", round12(e.d_eff)}, {"kind", to_string(e.kind)}, {"count", e.count}});
    j["entries"] = entries;
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : rec.samples) {
        nlohmann::json js = {{"restart", s.restart},
                             {"status", status_name(s.status)},
                             {"iterations", s.iterations}};
        if (s.status == SearchStatus::Converged) {
            js["d_eff"] = round12(s.d_eff);
            js["kind"] = to_string(s.kind);
            js["straddle_ok"] = s.straddle_ok;
            js["balance_residual"] = round12(s.balance_residual);
        }
        samples.push_back(js);
    }
    j["samples"] = samples;
    return j.dump(2);
}

std::string spectrum_to_csv(const SpectrumRecord& rec) {
    std::ostringstream os;
    os << "d_eff,kind,count\n";
    os.precision(12);
    for (const auto& e : rec.entries) os << e.d_eff << ',' << to_string(e.kind) << ',' << e.count << '\n';
    return os.str();
}

std::string spectrum_to_density(const SpectrumRecord& rec) {
    std::ostringstream os;
    os.precision(12);
    int total = 0;
    for (const auto& e : rec.entries) total += e.count;
    std::map<double, int> bins;
    for (const auto& e : rec.entries) bins[e.d_eff] += e.count;
    for (const auto& [edge, count] : bins)
        os << edge + 0.5 * rec.bin_width << ' ' << static_cast<double>(count) / (std::max(total, 1) * rec.bin_width)
           << '\n';
    return os.str();
}

}  // namespace ldpclp
