#pragma once

#include <cstdint>
#include <vector>

namespace ldpclp {

/// Equality-form LP with box bounds: min c'x  s.t.  A x = b, lower <= x <= upper.
/// Columns are sparse (CSC). Variables with lower == upper are fixed and never
/// become entering candidates.
struct SimplexProblem {
    int num_rows = 0;
    int num_cols = 0;
    std::vector<int> col_ptr;  // size num_cols + 1
    std::vector<int> row_idx;
    std::vector<double> value;
    std::vector<double> cost;
    std::vector<double> rhs;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct SimplexOptions {
    double dual_tol = 1e-9;
    double pivot_tol = 1e-7;   // minimum accepted pivot magnitude in the ratio test
    double feas_tol = 1e-9;
    double residual_tol = 1e-8;
    int refactor_interval = 100;
    int stall_limit = 10000;   // degenerate iterations before Bland's rule engages
    long max_iterations = 0;   // 0: scale with problem size
};

enum class SimplexStatus { Optimal, IterationLimit, Unstable };

struct SimplexResult {
    SimplexStatus status = SimplexStatus::Optimal;
    double objective = 0.0;
    long iterations = 0;
    double max_residual = 0.0;
};

/// Revised simplex over a dense LU factorization of the basis with product-form
/// updates and periodic refactorization. Pricing is most-negative reduced cost
/// with lowest-index tie break; after a run of degenerate iterations the solver
/// switches to Bland's rule until the objective moves again, so every solve
/// terminates. The returned point is always a basic feasible solution.
class SimplexSolver {
  public:
    SimplexSolver(SimplexProblem problem, SimplexOptions options = {});

    // Installs a starting basis: `basic` holds one variable per basis slot,
    // `at_upper` flags the nonbasic variables resting at their upper bound.
    void set_basis(const std::vector<int>& basic, const std::vector<std::uint8_t>& at_upper);

    // Replaces the objective, keeping the current basis; the next solve()
    // warm-starts from the incumbent vertex.
    void set_cost(const std::vector<double>& cost);

    // Snapshot of the basis state including its factorization. Restoring is a
    // plain copy, so returning to a fixed starting vertex is cheap and puts the
    // solver in a state independent of any previous solves.
    struct State {
        std::vector<int> basic;
        std::vector<std::uint8_t> status;
        std::vector<double> x;
        std::vector<double> lu;
        std::vector<int> ipiv;
    };
    State save_state() const;
    void restore_state(const State& s);

    SimplexResult solve();

    // Most recent solve's point, clamped to the true bounds.
    const std::vector<double>& solution() const { return solution_.empty() ? x_ : solution_; }
    const std::vector<int>& basic() const { return basic_; }
    const SimplexProblem& problem() const { return prob_; }

  private:
    enum class VarStatus : std::uint8_t { AtLower, AtUpper, Basic };

    void factorize();
    void compute_basic_values();
    void ftran(std::vector<double>& v) const;
    void btran(std::vector<double>& v) const;
    double current_objective() const;
    double constraint_residual() const;

    SimplexProblem prob_;       // bounds carry a deterministic anti-degeneracy offset
    std::vector<double> true_lower_, true_upper_;
    SimplexOptions opts_;

    std::vector<int> basic_;            // size m
    std::vector<VarStatus> status_;     // size n
    std::vector<double> x_;             // size n, consistent with perturbed bounds
    std::vector<double> solution_;      // clamped copy published by solve()

    std::vector<double> lu_;            // m*m row-major, L below diag (unit), U on/above
    std::vector<int> ipiv_;             // row swap at each elimination step
    struct Eta {
        int slot;
        std::vector<double> d;
    };
    std::vector<Eta> etas_;
    bool factorized_ = false;
};

}  // namespace ldpclp
