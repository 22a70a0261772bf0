#include "ldpclp/lp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ldpclp {

std::vector<std::uint32_t> local_codewords(int degree) {
    if (degree < 1) throw std::invalid_argument("local_codewords: degree must be >= 1");
    if (degree > 31) throw std::invalid_argument("local_codewords: degree too large");
    std::vector<std::uint32_t> out;
    out.reserve(std::size_t{1} << (degree - 1));
    const std::uint32_t end = std::uint32_t{1} << degree;
    for (std::uint32_t mask = 0; mask < end; ++mask)
        if ((std::popcount(mask) & 1) == 0) out.push_back(mask);
    return out;
}

std::string to_string(PcwKind kind) {
    switch (kind) {
        case PcwKind::ZeroCodeword: return "zero_codeword";
        case PcwKind::NonzeroCodeword: return "nonzero_codeword";
        case PcwKind::Fractional: return "fractional";
    }
    return "unknown";
}

namespace {

struct ColumnBuilder {
    std::vector<int> col_ptr{0};
    std::vector<int> row_idx;
    std::vector<double> value;
    std::vector<double> cost, lower, upper;

    void add(const std::vector<std::pair<int, double>>& entries, double c, double lo, double up) {
        for (const auto& [r, v] : entries) {
            row_idx.push_back(r);
            value.push_back(v);
        }
        col_ptr.push_back(static_cast<int>(row_idx.size()));
        cost.push_back(c);
        lower.push_back(lo);
        upper.push_back(up);
    }
};

}  // namespace

LpProblem build_lp(const ParityCheckMatrix& h, const LlrVector& llr, const LpOptions& opts) {
    if (static_cast<int>(llr.size()) != h.num_bits) throw std::invalid_argument("build_lp: LLR length mismatch");
    for (int a = 0; a < h.num_checks; ++a) {
        int q = static_cast<int>(h.rows[a].size());
        if (q < 1) throw std::invalid_argument("build_lp: check " + std::to_string(a) + " has degree 0");
        if (q > opts.max_check_degree)
            throw std::invalid_argument("build_lp: check " + std::to_string(a) + " has degree " + std::to_string(q) +
                                        " above the guard of " + std::to_string(opts.max_check_degree) +
                                        "; apply the dendro transform first");
    }

    LpProblem p;
    p.num_bits = h.num_bits;
    p.num_checks = h.num_checks;
    p.num_bit_vars = h.num_bits;

    // Row layout: compatibility rows grouped by check, then normalization rows.
    std::vector<int> compat_base(h.num_checks + 1, 0);
    for (int a = 0; a < h.num_checks; ++a) compat_base[a + 1] = compat_base[a] + static_cast<int>(h.rows[a].size());
    const int num_compat = compat_base[h.num_checks];
    p.num_rows = num_compat + h.num_checks;

    ColumnBuilder cb;

    // Bit variables: +1 in every compatibility row of the bit.
    for (int i = 0; i < h.num_bits; ++i) {
        std::vector<std::pair<int, double>> entries;
        for (int a : h.cols[i]) {
            int slot = static_cast<int>(std::lower_bound(h.rows[a].begin(), h.rows[a].end(), i) - h.rows[a].begin());
            entries.push_back({compat_base[a] + slot, 1.0});
        }
        cb.add(entries, llr[i], 0.0, 1.0);
    }

    // Check belief variables: -1 in the compatibility rows of the bits the
    // pattern sets, +1 in the check's normalization row.
    int next_var = h.num_bits;
    for (int a = 0; a < h.num_checks; ++a) {
        const int q = static_cast<int>(h.rows[a].size());
        CheckVarBlock blk;
        blk.check = a;
        blk.degree = q;
        blk.first_var = next_var;
        blk.patterns = local_codewords(q);
        for (std::uint32_t mask : blk.patterns) {
            std::vector<std::pair<int, double>> entries;
            for (int t = 0; t < q; ++t)
                if (mask & (std::uint32_t{1} << t)) entries.push_back({compat_base[a] + t, -1.0});
            entries.push_back({num_compat + a, 1.0});
            cb.add(entries, 0.0, 0.0, 1.0);
        }
        next_var += static_cast<int>(blk.patterns.size());
        p.blocks.push_back(std::move(blk));
    }
    p.num_check_vars = next_var - h.num_bits;

    // Solver-side artificial columns complete the zero-codeword crash basis for
    // checks of degree below three (fixed at zero, so they never re-enter).
    for (int a = 0; a < h.num_checks; ++a) {
        int q = static_cast<int>(h.rows[a].size());
        if (q < 3) cb.add({{compat_base[a], 1.0}}, 0.0, 0.0, 0.0);
    }

    p.simplex.num_rows = p.num_rows;
    p.simplex.num_cols = static_cast<int>(cb.cost.size());
    p.simplex.col_ptr = std::move(cb.col_ptr);
    p.simplex.row_idx = std::move(cb.row_idx);
    p.simplex.value = std::move(cb.value);
    p.simplex.cost = std::move(cb.cost);
    p.simplex.rhs.assign(p.num_rows, 0.0);
    for (int a = 0; a < h.num_checks; ++a) p.simplex.rhs[num_compat + a] = 1.0;
    p.simplex.lower = std::move(cb.lower);
    p.simplex.upper = std::move(cb.upper);
    return p;
}

namespace {

int pattern_index(const CheckVarBlock& blk, std::uint32_t mask) {
    auto it = std::lower_bound(blk.patterns.begin(), blk.patterns.end(), mask);
    if (it == blk.patterns.end() || *it != mask) throw std::logic_error("pattern not found in local codeword table");
    return static_cast<int>(it - blk.patterns.begin());
}

// Zero-codeword vertex basis: per check the all-zeros pattern, the pairwise
// patterns {0,j}, and for degree >= 3 the pattern {1,2}; degree-1 and degree-2
// checks are completed with their artificial column.
std::vector<int> crash_basis(const LpProblem& p) {
    std::vector<int> basic;
    basic.reserve(p.num_rows);
    int next_artificial = p.num_vars();
    for (const auto& blk : p.blocks) {
        const int q = blk.degree;
        basic.push_back(blk.first_var + pattern_index(blk, 0));
        for (int j = 1; j < q; ++j)
            basic.push_back(blk.first_var + pattern_index(blk, (std::uint32_t{1}) | (std::uint32_t{1} << j)));
        if (q >= 3)
            basic.push_back(blk.first_var + pattern_index(blk, (std::uint32_t{2}) | (std::uint32_t{4})));
        else
            basic.push_back(next_artificial++);
    }
    return basic;
}

}  // namespace

LpSolveOutcome solve_lp(const LpProblem& p, const LpOptions& opts) {
    SimplexOptions sopts;
    sopts.residual_tol = opts.residual_tol;
    sopts.max_iterations = opts.max_iterations;
    SimplexSolver solver(p.simplex, sopts);
    solver.set_basis(crash_basis(p), {});
    SimplexResult res = solver.solve();
    if (res.status == SimplexStatus::IterationLimit)
        throw std::runtime_error("lp solve: iteration limit exceeded after " + std::to_string(res.iterations) +
                                 " iterations");
    if (res.status == SimplexStatus::Unstable)
        throw std::runtime_error("lp solve: numerical instability, constraint residual " +
                                 std::to_string(res.max_residual) + " above tolerance");
    LpSolveOutcome out;
    out.assignment.assign(solver.solution().begin(), solver.solution().begin() + p.num_vars());
    out.objective = res.objective;
    out.iterations = res.iterations;
    return out;
}

PseudoCodeword classify_beliefs(const ParityCheckMatrix& h, std::vector<double> bit_beliefs, double objective,
                                long iterations, double tol_int) {
    PseudoCodeword pcw;
    pcw.objective = objective;
    pcw.iterations = iterations;
    bool integral = true;
    Codeword rounded(bit_beliefs.size(), 0);
    for (std::size_t i = 0; i < bit_beliefs.size(); ++i) {
        double b = bit_beliefs[i];
        double r = std::round(b);
        if (std::fabs(b - r) > tol_int) {
            integral = false;
            break;
        }
        rounded[i] = static_cast<std::uint8_t>(r);
    }
    if (integral && is_codeword(h, rounded)) {
        bool zero = std::all_of(rounded.begin(), rounded.end(), [](std::uint8_t b) { return b == 0; });
        pcw.kind = zero ? PcwKind::ZeroCodeword : PcwKind::NonzeroCodeword;
    } else {
        pcw.kind = PcwKind::Fractional;
    }
    pcw.beliefs = std::move(bit_beliefs);
    return pcw;
}

PseudoCodeword lp_decode(const ParityCheckMatrix& h, const LlrVector& llr, const std::vector<std::uint8_t>& punctured,
                         const LpOptions& opts) {
    LpDecoder dec(h, opts);
    if (!punctured.empty()) {
        if (punctured.size() != llr.size()) throw std::invalid_argument("lp_decode: punctured mask length mismatch");
        for (std::size_t i = 0; i < llr.size(); ++i)
            if (punctured[i] && llr[i] != 0.0)
                throw std::invalid_argument("lp_decode: nonzero LLR at punctured bit " + std::to_string(i));
    }
    return dec.decode(llr);
}

LpDecoder::LpDecoder(const ParityCheckMatrix& h, const LpOptions& opts) : code_(h), opts_(opts) {
    problem_ = build_lp(h, LlrVector(h.num_bits, 0.0), opts_);
    SimplexOptions sopts;
    sopts.residual_tol = opts_.residual_tol;
    sopts.max_iterations = opts_.max_iterations;
    if (const char* env = std::getenv("LDPCLP_REFACTOR_INTERVAL")) sopts.refactor_interval = std::max(8, std::atoi(env));
    if (const char* env = std::getenv("LDPCLP_STALL_LIMIT")) sopts.stall_limit = std::max(10, std::atoi(env));
    solver_ = std::make_unique<SimplexSolver>(problem_.simplex, sopts);
    solver_->set_basis(crash_basis(problem_), {});
    cold_state_ = solver_->save_state();
}

void LpDecoder::reset() { solver_->restore_state(cold_state_); }

PseudoCodeword LpDecoder::decode(const LlrVector& llr) {
    if (static_cast<int>(llr.size()) != code_.num_bits) throw std::invalid_argument("lp decode: LLR length mismatch");
    std::vector<double> cost(problem_.simplex.cost.size(), 0.0);
    for (int i = 0; i < code_.num_bits; ++i) cost[i] = llr[i];
    solver_->set_cost(cost);

    // A long warm chain can degrade the factorization; one retry from the cold
    // crash basis resolves that deterministically before giving up.
    SimplexResult res;
    bool retried = false;
    for (;;) {
        bool failed = false;
        try {
            res = solver_->solve();
        } catch (const std::runtime_error&) {
            if (retried) throw;
            failed = true;
        }
        if (!failed && res.status == SimplexStatus::Optimal) break;
        if (!failed && res.status == SimplexStatus::IterationLimit)
            throw std::runtime_error("lp decode: iteration limit exceeded after " + std::to_string(res.iterations) +
                                     " iterations");
        if (retried)
            throw std::runtime_error("lp decode: numerical instability, constraint residual " +
                                     std::to_string(res.max_residual));
        retried = true;
        reset();
    }

    std::vector<double> beliefs(solver_->solution().begin(), solver_->solution().begin() + code_.num_bits);
    return classify_beliefs(code_, std::move(beliefs), res.objective, res.iterations, opts_.tol_int);
}

}  // namespace ldpclp
