#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ldpclp/channel.hpp"
#include "ldpclp/parity_check.hpp"
#include "ldpclp/simplex.hpp"

namespace ldpclp {

/// Even-weight bit patterns of a single check, as masks over the check's
/// positions in ascending numeric order (the all-zeros pattern is first).
std::vector<std::uint32_t> local_codewords(int degree);

struct CheckVarBlock {
    int check = 0;
    int degree = 0;
    int first_var = 0;                     // index of the first belief variable of this check
    std::vector<std::uint32_t> patterns;   // 2^(q-1) even-weight masks, ascending
};

/// LP relaxation over bit beliefs b_i(1) and per-check local-codeword beliefs.
/// Variables: bits first (one per bit), then one block per check. Rows: one
/// compatibility row per (check, incident bit) grouped by check, then one
/// normalization row per check. All variables live in [0, 1].
struct LpProblem {
    int num_bits = 0;
    int num_checks = 0;
    int num_bit_vars = 0;
    int num_check_vars = 0;
    int num_rows = 0;
    std::vector<CheckVarBlock> blocks;
    SimplexProblem simplex;  // includes solver-side artificial columns after the beliefs

    int num_vars() const { return num_bit_vars + num_check_vars; }
};

struct LpOptions {
    double tol_int = 1e-6;       // integrality tolerance for classification
    double residual_tol = 1e-8;  // constraint residual signal
    int max_check_degree = 12;   // local-codeword table guard
    long max_iterations = 0;     // 0: automatic
};

enum class PcwKind { ZeroCodeword, NonzeroCodeword, Fractional };

std::string to_string(PcwKind kind);

/// LP decoding output: per-bit beliefs with integral/fractional classification.
struct PseudoCodeword {
    std::vector<double> beliefs;
    PcwKind kind = PcwKind::ZeroCodeword;
    double objective = 0.0;
    long iterations = 0;
};

LpProblem build_lp(const ParityCheckMatrix& h, const LlrVector& llr, const LpOptions& opts = {});

struct LpSolveOutcome {
    std::vector<double> assignment;  // bit beliefs then check beliefs
    double objective = 0.0;
    long iterations = 0;
};

// One-shot solve of a built problem; starts from the zero-codeword vertex.
LpSolveOutcome solve_lp(const LpProblem& p, const LpOptions& opts = {});

// One-shot decode. For repeated decodes on one code use LpDecoder.
PseudoCodeword lp_decode(const ParityCheckMatrix& h, const LlrVector& llr,
                         const std::vector<std::uint8_t>& punctured = {}, const LpOptions& opts = {});

/// Reusable decoder: builds the relaxation once and warm-starts the simplex
/// across successive objective vectors.
class LpDecoder {
  public:
    explicit LpDecoder(const ParityCheckMatrix& h, const LpOptions& opts = {});

    PseudoCodeword decode(const LlrVector& llr);
    void reset();  // back to the zero-codeword starting basis

    const LpProblem& problem() const { return problem_; }
    const ParityCheckMatrix& code() const { return code_; }

  private:
    ParityCheckMatrix code_;
    LpOptions opts_;
    LpProblem problem_;
    std::unique_ptr<SimplexSolver> solver_;
    SimplexSolver::State cold_state_;
};

PseudoCodeword classify_beliefs(const ParityCheckMatrix& h, std::vector<double> bit_beliefs, double objective,
                                long iterations, double tol_int);

}  // namespace ldpclp
