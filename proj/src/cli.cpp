#include "ldpclp/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldpclp/bp.hpp"
#include "ldpclp/channel.hpp"
#include "ldpclp/dendro.hpp"
#include "ldpclp/landscape.hpp"
#include "ldpclp/lp.hpp"
#include "ldpclp/montecarlo.hpp"
#include "ldpclp/parity_check.hpp"
#include "ldpclp/rng.hpp"
#include "ldpclp/search.hpp"

namespace ldpclp {

namespace {

double round12(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    std::ostringstream os;
    os.precision(12);
    os << v;
    return std::stod(os.str());
}

int default_workers() {
    if (const char* env = std::getenv("LDPCLP_WORKERS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing file: " + path);
}

// SNR given either in dB or as s^2; exactly one of the two.
struct SnrOption {
    std::optional<double> db;
    std::optional<double> s2;

    void attach(CLI::App* cmd) {
        auto* a = cmd->add_option_function<double>(
            "--snr-db", [this](double v) { db = v; }, "SNR in dB (10 log10 s^2)");
        auto* b = cmd->add_option_function<double>(
            "--s2", [this](double v) { s2 = v; }, "SNR as s^2 = E_c/N_0");
        a->excludes(b);
        b->excludes(a);
    }

    Snr resolve() const {
        if (db && s2) throw CLI::ValidationError("--snr-db and --s2 are mutually exclusive");
        if (db) return Snr::from_db(*db);
        if (s2) return Snr::from_s2(*s2);
        throw CLI::ValidationError("one of --snr-db or --s2 is required");
    }

    bool given() const { return db.has_value() || s2.has_value(); }
};

std::vector<double> read_number_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    return out;
}

nlohmann::json beliefs_json(const std::vector<double>& b) {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : b) arr.push_back(round12(v));
    return arr;
}

SearchConfig make_search_config(const RunConfig& rc) {
    SearchConfig sc;
    sc.delta = rc.delta;
    sc.tol_y = rc.tol_y;
    sc.max_iters = rc.search_iter_cap;
    sc.init_scale = rc.init_scale;
    sc.doubling_cap = rc.doubling_cap;
    sc.lp.tol_int = rc.tol_int;
    sc.lp.residual_tol = rc.residual_tol;
    return sc;
}

void attach_common(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--config", "key=value configuration file (flags take precedence)");
    cmd->add_option("--tol-int", rc.tol_int, "integrality tolerance");
    cmd->add_option("--tol-y", rc.tol_y, "median convergence tolerance (infinity norm)");
    cmd->add_option("--residual-tol", rc.residual_tol, "LP constraint residual tolerance");
    cmd->add_option("--delta", rc.delta, "multiplicative push past the median");
    cmd->add_option("--search-iter-cap", rc.search_iter_cap, "search iteration cap");
    cmd->add_option("--init-scale", rc.init_scale, "initial half-normal amplitude scale");
    cmd->add_option("--doubling-cap", rc.doubling_cap, "amplitude doubling cap");
    cmd->add_option("--workers", rc.workers, "worker thread count (default: LDPCLP_WORKERS or 1)");
    cmd->add_option("--seed", rc.seed, "master seed");
}

// key=value file for the shared run parameters; values fill only options that
// were not given as flags, so precedence is flags > file > defaults.
void apply_config_file(CLI::App* cmd, RunConfig& rc) {
    auto* copt = cmd->get_option_no_throw("--config");
    if (!copt || copt->count() == 0) return;
    std::string path = copt->as<std::string>();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);

    auto assign = [&](CLI::App* c, const std::string& key, const std::string& value) {
        const std::string flag = "--" + key;
        auto* opt = c->get_option_no_throw(flag);
        if (!opt) throw CLI::ValidationError("unknown config key '" + key + "'");
        if (opt->count() > 0) return;  // a flag was given; it wins
        if (key == "tol-int") rc.tol_int = std::stod(value);
        else if (key == "tol-y") rc.tol_y = std::stod(value);
        else if (key == "residual-tol") rc.residual_tol = std::stod(value);
        else if (key == "delta") rc.delta = std::stod(value);
        else if (key == "search-iter-cap") rc.search_iter_cap = std::stoi(value);
        else if (key == "init-scale") rc.init_scale = std::stod(value);
        else if (key == "doubling-cap") rc.doubling_cap = std::stoi(value);
        else if (key == "workers") rc.workers = std::stoi(value);
        else if (key == "seed") rc.seed = std::stoull(value);
        else throw CLI::ValidationError("config key '" + key + "' cannot be set from a file");
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        assign(cmd, trim(key), trim(value));
    }
}

std::string code_id_of(const std::string& alist_path, const std::string& form) {
    auto slash = alist_path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? alist_path : alist_path.substr(slash + 1);
    return base + ":" + form;
}

void validate_run_config(const RunConfig& rc) {
    if (!(rc.tol_int > 0.0 && rc.tol_y > 0.0 && rc.residual_tol > 0.0 && rc.delta > 0.0 && rc.init_scale > 0.0))
        throw CLI::ValidationError("tolerances, delta and init-scale must be positive");
    if (rc.search_iter_cap < 1 || rc.doubling_cap < 0 || rc.workers < 1)
        throw CLI::ValidationError("iteration caps must be positive and workers >= 1");
}

// One line that, together with the subcommand flags, replays the run exactly.
void echo_config(const RunConfig& rc) {
    std::ostringstream os;
    os.precision(12);
    os << "config: tol-int=" << rc.tol_int << " tol-y=" << rc.tol_y << " residual-tol=" << rc.residual_tol
       << " delta=" << rc.delta << " search-iter-cap=" << rc.search_iter_cap << " init-scale=" << rc.init_scale
       << " doubling-cap=" << rc.doubling_cap << " workers=" << rc.workers << " seed=" << rc.seed;
    std::cout << os.str() << "\n";
}

int run_transform(const std::string& alist_path, const std::string& out_path, std::string sidecar_path) {
    ParityCheckMatrix h = load_alist_file(alist_path);
    DendroCode d = dendro_transform(h);
    save_alist_file(d.matrix, out_path);
    if (sidecar_path.empty()) sidecar_path = out_path + ".json";
    nlohmann::json j;
    nlohmann::json punctured = nlohmann::json::array();
    for (int i = 0; i < d.matrix.num_bits; ++i)
        if (d.punctured[i]) punctured.push_back(i);
    j["punctured"] = punctured;
    j["origin_bits"] = d.origin_bits;
    j["check_provenance"] = d.check_provenance;
    write_text_file(sidecar_path, j.dump(2) + "\n");
    std::cout << "transformed " << h.num_bits << "x" << h.num_checks << " -> " << d.matrix.num_bits << "x"
              << d.matrix.num_checks << " (" << d.num_punctured() << " punctured bits)\n"
              << "wrote " << out_path << " and " << sidecar_path << "\n";
    return 0;
}

std::vector<std::uint8_t> load_punctured_mask(const std::string& sidecar_path, int n) {
    std::ifstream in(sidecar_path);
    if (!in) throw std::runtime_error("cannot open sidecar file: " + sidecar_path);
    nlohmann::json j;
    in >> j;
    std::vector<std::uint8_t> mask(n, 0);
    for (int idx : j.at("punctured").get<std::vector<int>>()) {
        if (idx < 0 || idx >= n) throw std::runtime_error("sidecar punctured index out of range");
        mask[idx] = 1;
    }
    return mask;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"LDPC linear-programming decoding toolkit"};
    app.require_subcommand(1);

    RunConfig rc;

    // transform
    auto* t = app.add_subcommand("transform", "replace high-degree checks by degree-3 chains with punctured bits");
    std::string t_alist, t_out, t_sidecar;
    t->add_option("--alist", t_alist, "input alist file")->required();
    t->add_option("--out", t_out, "output alist file")->required();
    t->add_option("--sidecar", t_sidecar, "sidecar JSON path (default: <out>.json)");

    // decode
    auto* dec = app.add_subcommand("decode", "decode one frame with the LP or BP decoder");
    std::string d_alist, d_llr, d_sidecar, d_decoder = "lp", d_json_out;
    int d_max_iters = 1024;
    SnrOption d_snr;
    dec->add_option("--alist", d_alist, "alist file")->required();
    dec->add_option("--llr", d_llr, "whitespace-separated LLR file (one value per bit)");
    d_snr.attach(dec);
    dec->add_option("--decoder", d_decoder, "lp|bp")->check(CLI::IsMember({"lp", "bp"}));
    dec->add_option("--max-iters", d_max_iters, "BP iteration cap");
    dec->add_option("--sidecar", d_sidecar, "dendro sidecar JSON with the punctured mask");
    dec->add_option("--output-json", d_json_out, "write the result to this file instead of stdout");
    attach_common(dec, rc);

    // search
    auto* srch = app.add_subcommand("search", "randomized pseudo-codeword searches; reports every restart");
    std::string s_alist, s_json_out, s_form = "dendro";
    int s_restarts = 1;
    srch->add_option("--alist", s_alist, "alist file")->required();
    srch->add_option("--restarts", s_restarts, "number of independent restarts")->required();
    srch->add_option("--form", s_form, "dendro|original")->check(CLI::IsMember({"dendro", "original"}));
    srch->add_option("--json-out", s_json_out, "write the JSON report to this file");
    attach_common(srch, rc);

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "effective-distance spectrum over many searches");
    std::string p_alist, p_json_out, p_csv_out, p_density_out, p_form = "dendro";
    int p_restarts = 100, p_min_count = 5;
    double p_bin_width = 0.05;
    spec->add_option("--alist", p_alist, "alist file")->required();
    spec->add_option("--restarts", p_restarts, "number of independent restarts");
    spec->add_option("--form", p_form, "dendro|original")->check(CLI::IsMember({"dendro", "original"}));
    spec->add_option("--bin-width", p_bin_width, "histogram bin width in distance units");
    spec->add_option("--min-count", p_min_count, "bin occupancy threshold for gap reporting");
    spec->add_option("--json-out", p_json_out, "full record JSON output path");
    spec->add_option("--csv-out", p_csv_out, "histogram CSV output path");
    spec->add_option("--density-out", p_density_out, "two-column density output path");
    attach_common(spec, rc);

    // fer
    auto* fer = app.add_subcommand("fer", "Monte Carlo frame-error-rate sweep");
    std::string f_alist, f_sidecar, f_decoder = "lp", f_csv_out;
    std::vector<double> f_snr_db, f_s2;
    long f_target_errors = 100, f_max_frames = 10'000'000, f_batch = 256;
    int f_max_iters = 1024;
    fer->add_option("--alist", f_alist, "alist file")->required();
    fer->add_option("--decoder", f_decoder, "lp|bp")->check(CLI::IsMember({"lp", "bp"}));
    fer->add_option("--snr-db", f_snr_db, "SNR sweep in dB")->delimiter(',');
    fer->add_option("--s2", f_s2, "SNR sweep as s^2 values")->delimiter(',');
    fer->add_option("--target-errors", f_target_errors, "stop after this many frame errors");
    fer->add_option("--max-frames", f_max_frames, "frame cap per SNR point");
    fer->add_option("--batch-size", f_batch, "frames per stop-rule batch");
    fer->add_option("--max-iters", f_max_iters, "BP iteration cap");
    fer->add_option("--sidecar", f_sidecar, "dendro sidecar JSON with the punctured mask");
    fer->add_option("--csv-out", f_csv_out, "CSV output path");
    attach_common(fer, rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        for (CLI::App* sub : {dec, srch, spec, fer})
            if (sub->parsed()) apply_config_file(sub, rc);
        if (rc.workers < 1) rc.workers = default_workers();
        if (!t->parsed()) validate_run_config(rc);

        if (t->parsed()) return run_transform(t_alist, t_out, t_sidecar);

        if (dec->parsed()) {
            ParityCheckMatrix h = load_alist_file(d_alist);
            std::vector<std::uint8_t> mask;
            if (!d_sidecar.empty()) mask = load_punctured_mask(d_sidecar, h.num_bits);
            LlrVector llr;
            nlohmann::json meta;
            if (!d_llr.empty()) {
                llr = read_number_file(d_llr);
                if (static_cast<int>(llr.size()) != h.num_bits)
                    throw std::runtime_error("LLR file has " + std::to_string(llr.size()) + " values, expected " +
                                             std::to_string(h.num_bits));
                if (!mask.empty())
                    for (std::size_t i = 0; i < llr.size(); ++i)
                        if (mask[i]) llr[i] = 0.0;
            } else if (d_snr.given()) {
                Snr snr = d_snr.resolve();
                Rng rng(derive_seed(rc.seed, 0));
                NoiseVector x = sample_awgn(snr, h.num_bits, rng, mask);
                llr = llr_from_output(x, snr, mask);
                meta["seed"] = rc.seed;
                echo_config(rc);
            } else {
                throw CLI::ValidationError("decode needs --llr or an SNR (--snr-db / --s2)");
            }

            nlohmann::json j = meta;
            if (d_decoder == "lp") {
                LpOptions opts;
                opts.tol_int = rc.tol_int;
                opts.residual_tol = rc.residual_tol;
                PseudoCodeword pcw = lp_decode(h, llr, mask, opts);
                j["kind"] = to_string(pcw.kind);
                j["beliefs"] = beliefs_json(pcw.beliefs);
                j["objective"] = round12(pcw.objective);
                j["iterations"] = pcw.iterations;
            } else {
                BpOptions opts;
                opts.max_iters = d_max_iters;
                BpResult r = bp_decode(h, llr, opts);
                bool zero = true, cw = is_codeword(h, r.hard);
                for (auto b : r.hard) zero = zero && b == 0;
                j["kind"] = cw ? (zero ? "zero_codeword" : "nonzero_codeword") : "noncodeword";
                j["beliefs"] = beliefs_json(std::vector<double>(r.hard.begin(), r.hard.end()));
                j["objective"] = round12(codeword_objective(r.hard, llr));
                j["iterations"] = r.iterations;
                j["converged"] = r.converged;
            }
            std::string text = j.dump(2) + "\n";
            if (d_json_out.empty())
                std::cout << text;
            else
                write_text_file(d_json_out, text);
            return 0;
        }

        if (srch->parsed() || spec->parsed()) {
            const bool is_search = srch->parsed();
            const std::string alist_path = is_search ? s_alist : p_alist;
            const std::string form = is_search ? s_form : p_form;
            const int restarts = is_search ? s_restarts : p_restarts;

            ParityCheckMatrix h = load_alist_file(alist_path);
            SearchCode code;
            if (form == "dendro") {
                code = search_code_dendro(dendro_transform(h));
            } else {
                code = search_code_original(h);
            }

            SpectrumConfig cfg;
            cfg.bin_width = is_search ? 0.05 : p_bin_width;
            cfg.workers = rc.workers;
            cfg.search = make_search_config(rc);
            echo_config(rc);
            SpectrumRecord rec = build_spectrum(code, restarts, rc.seed, cfg);
            rec.code_id = code_id_of(alist_path, form);

            if (is_search) {
                nlohmann::json j;
                j["code_id"] = rec.code_id;
                j["seed"] = rec.seed;
                j["restarts"] = rec.restarts;
                nlohmann::json rs = nlohmann::json::array();
                for (const auto& s : rec.samples) {
                    nlohmann::json js = {{"restart", s.restart}, {"iterations", s.iterations}};
                    if (s.status == SearchStatus::Converged) {
                        js["d_eff"] = round12(s.d_eff);
                        js["kind"] = to_string(s.kind);
                    } else {
                        js["aborted"] = s.status == SearchStatus::CollapsedToZero ? "collapsed_to_zero" : "iteration_cap";
                    }
                    rs.push_back(js);
                }
                j["results"] = rs;
                if (rec.min_d_eff) j["min_d_eff"] = round12(*rec.min_d_eff);
                j["converged"] = rec.converged;
                j["aborted"] = rec.collapsed + rec.capped;
                std::string text = j.dump(2) + "\n";
                if (s_json_out.empty())
                    std::cout << text;
                else
                    write_text_file(s_json_out, text);
                if (rec.min_d_eff) std::cout << "min d_eff: " << round12(*rec.min_d_eff) << "\n";
            } else {
                if (!p_json_out.empty()) write_text_file(p_json_out, spectrum_to_json(rec) + "\n");
                if (!p_csv_out.empty()) write_text_file(p_csv_out, spectrum_to_csv(rec));
                if (!p_density_out.empty()) write_text_file(p_density_out, spectrum_to_density(rec));
                std::cout << "restarts converged/collapsed/capped: " << rec.converged << "/" << rec.collapsed << "/"
                          << rec.capped << "\n";
                if (rec.min_d_eff) std::cout << "min d_eff: " << round12(*rec.min_d_eff) << "\n";
                if (auto gap = spectrum_gap(rec, p_min_count))
                    std::cout << "gap: (" << round12(gap->gap_start) << ", " << round12(gap->gap_end) << ")\n";
                else
                    std::cout << "gap: none\n";
                if (p_json_out.empty() && p_csv_out.empty() && p_density_out.empty()) std::cout << spectrum_to_csv(rec);
            }
            return 0;
        }

        if (fer->parsed()) {
            ParityCheckMatrix h = load_alist_file(f_alist);
            std::vector<std::uint8_t> mask;
            if (!f_sidecar.empty()) mask = load_punctured_mask(f_sidecar, h.num_bits);
            std::vector<Snr> sweep;
            for (double db : f_snr_db) sweep.push_back(Snr::from_db(db));
            for (double s2 : f_s2) sweep.push_back(Snr::from_s2(s2));
            if (sweep.empty()) throw CLI::ValidationError("fer needs at least one --snr-db or --s2 value");
            FerConfig cfg;
            cfg.decoder = f_decoder == "lp" ? DecoderKind::Lp : DecoderKind::Bp;
            cfg.workers = rc.workers;
            cfg.batch_size = f_batch;
            cfg.lp.tol_int = rc.tol_int;
            cfg.lp.residual_tol = rc.residual_tol;
            cfg.bp.max_iters = f_max_iters;
            StopRule stop{f_target_errors, f_max_frames};
            echo_config(rc);
            std::string csv = fer_csv_header();
            for (Snr snr : sweep) {
                FerPoint p = estimate_fer(h, mask, snr, stop, rc.seed, cfg);
                csv += fer_to_csv_row(p);
                std::cout << "snr_db=" << round12(snr.db()) << " frames=" << p.frames << " errors=" << p.errors
                          << " fer=" << round12(p.fer) << " ci=[" << round12(p.ci_low) << "," << round12(p.ci_high)
                          << "]\n";
            }
            if (!f_csv_out.empty()) write_text_file(f_csv_out, csv);
            return 0;
        }

        throw CLI::ValidationError("no subcommand selected");
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace ldpclp
