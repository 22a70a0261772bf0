#include "ldpclp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ldpclp/rng.hpp"

namespace ldpclp {

namespace {
constexpr double kSingularTol = 1e-11;
constexpr double kBoundPerturbation = 1e-9;

// Deterministic per-variable offset in [0.25, 1) * kBoundPerturbation.
double bound_offset(int var, int side) {
    std::uint64_t h = splitmix64(0x5eed5eedULL + 2ULL * static_cast<std::uint64_t>(var) + side);
    return kBoundPerturbation * (0.25 + 0.75 * (static_cast<double>(h >> 11) * 0x1.0p-53));
}

}  // namespace

SimplexSolver::SimplexSolver(SimplexProblem problem, SimplexOptions options)
    : prob_(std::move(problem)), opts_(options) {
    const int n = prob_.num_cols;
    if (static_cast<int>(prob_.col_ptr.size()) != n + 1 || static_cast<int>(prob_.cost.size()) != n ||
        static_cast<int>(prob_.lower.size()) != n || static_cast<int>(prob_.upper.size()) != n ||
        static_cast<int>(prob_.rhs.size()) != prob_.num_rows)
        throw std::invalid_argument("simplex: inconsistent problem arrays");
    true_lower_ = prob_.lower;
    true_upper_ = prob_.upper;
    // Nudging each finite bound by a distinct tiny amount makes ratio-test ties
    // vanishingly rare, which is what keeps highly degenerate bases moving.
    // Reported solutions are clamped back to the true bounds.
    for (int j = 0; j < n; ++j) {
        if (prob_.lower[j] < prob_.upper[j]) {
            prob_.lower[j] -= bound_offset(j, 0);
            prob_.upper[j] += bound_offset(j, 1);
        }
    }
    status_.assign(n, VarStatus::AtLower);
    x_.assign(n, 0.0);
    for (int j = 0; j < n; ++j) x_[j] = prob_.lower[j];
}

void SimplexSolver::set_basis(const std::vector<int>& basic, const std::vector<std::uint8_t>& at_upper) {
    if (static_cast<int>(basic.size()) != prob_.num_rows)
        throw std::invalid_argument("simplex: basis size must equal the row count");
    basic_ = basic;
    status_.assign(prob_.num_cols, VarStatus::AtLower);
    for (int j = 0; j < prob_.num_cols; ++j) {
        x_[j] = prob_.lower[j];
        if (!at_upper.empty() && at_upper[j]) {
            status_[j] = VarStatus::AtUpper;
            x_[j] = prob_.upper[j];
        }
    }
    for (int v : basic_) {
        if (v < 0 || v >= prob_.num_cols) throw std::invalid_argument("simplex: basis variable out of range");
        status_[v] = VarStatus::Basic;
    }
    etas_.clear();
    factorize();
    compute_basic_values();
}

void SimplexSolver::set_cost(const std::vector<double>& cost) {
    if (static_cast<int>(cost.size()) != prob_.num_cols) throw std::invalid_argument("simplex: cost size mismatch");
    prob_.cost = cost;
}

SimplexSolver::State SimplexSolver::save_state() const {
    if (!factorized_ || !etas_.empty())
        throw std::logic_error("simplex: save_state requires a freshly factorized basis");
    State s;
    s.basic = basic_;
    s.status.assign(status_.size(), 0);
    for (std::size_t j = 0; j < status_.size(); ++j) s.status[j] = static_cast<std::uint8_t>(status_[j]);
    s.x = x_;
    s.lu = lu_;
    s.ipiv = ipiv_;
    return s;
}

void SimplexSolver::restore_state(const State& s) {
    basic_ = s.basic;
    status_.resize(s.status.size());
    for (std::size_t j = 0; j < s.status.size(); ++j) status_[j] = static_cast<VarStatus>(s.status[j]);
    x_ = s.x;
    lu_ = s.lu;
    ipiv_ = s.ipiv;
    etas_.clear();
    factorized_ = true;
}

void SimplexSolver::factorize() {
    const int m = prob_.num_rows;
    lu_.assign(static_cast<std::size_t>(m) * m, 0.0);
    ipiv_.assign(m, 0);
    for (int s = 0; s < m; ++s) {
        int j = basic_[s];
        for (int k = prob_.col_ptr[j]; k < prob_.col_ptr[j + 1]; ++k)
            lu_[static_cast<std::size_t>(prob_.row_idx[k]) * m + s] = prob_.value[k];
    }
    for (int k = 0; k < m; ++k) {
        int p = k;
        double best = std::fabs(lu_[static_cast<std::size_t>(k) * m + k]);
        for (int i = k + 1; i < m; ++i) {
            double v = std::fabs(lu_[static_cast<std::size_t>(i) * m + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best < kSingularTol) throw std::runtime_error("simplex: singular basis at elimination step " + std::to_string(k));
        ipiv_[k] = p;
        if (p != k) {
            for (int j = 0; j < m; ++j) std::swap(lu_[static_cast<std::size_t>(k) * m + j], lu_[static_cast<std::size_t>(p) * m + j]);
        }
        const double piv = lu_[static_cast<std::size_t>(k) * m + k];
        double* rowk = &lu_[static_cast<std::size_t>(k) * m];
        for (int i = k + 1; i < m; ++i) {
            double* rowi = &lu_[static_cast<std::size_t>(i) * m];
            double f = rowi[k] / piv;
            if (f == 0.0) continue;
            rowi[k] = f;
            for (int j = k + 1; j < m; ++j) rowi[j] -= f * rowk[j];
        }
    }
    etas_.clear();
    factorized_ = true;
}

void SimplexSolver::ftran(std::vector<double>& v) const {
    const int m = prob_.num_rows;
    for (int k = 0; k < m; ++k)
        if (ipiv_[k] != k) std::swap(v[k], v[ipiv_[k]]);
    for (int i = 1; i < m; ++i) {
        const double* rowi = &lu_[static_cast<std::size_t>(i) * m];
        double s = v[i];
        for (int k = 0; k < i; ++k) s -= rowi[k] * v[k];
        v[i] = s;
    }
    for (int i = m - 1; i >= 0; --i) {
        const double* rowi = &lu_[static_cast<std::size_t>(i) * m];
        double s = v[i];
        for (int k = i + 1; k < m; ++k) s -= rowi[k] * v[k];
        v[i] = s / rowi[i];
    }
    for (const Eta& e : etas_) {
        double vr = v[e.slot] / e.d[e.slot];
        v[e.slot] = vr;
        if (vr != 0.0) {
            const double* d = e.d.data();
            for (int i = 0; i < m; ++i) v[i] -= d[i] * vr;
            v[e.slot] = vr;  // the loop above subtracted d[r]*vr from slot r as well
        }
    }
}

void SimplexSolver::btran(std::vector<double>& v) const {
    const int m = prob_.num_rows;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        const Eta& e = *it;
        double s = 0.0;
        const double* d = e.d.data();
        for (int i = 0; i < m; ++i) s += d[i] * v[i];
        // v[r] <- (v[r] - sum_{i != r} d_i v_i) / d_r
        const double vr = v[e.slot];
        v[e.slot] = (vr - (s - e.d[e.slot] * vr)) / e.d[e.slot];
    }
    // U^T forward solve
    for (int k = 0; k < m; ++k) {
        const double* rowk = &lu_[static_cast<std::size_t>(k) * m];
        double vk = v[k] / rowk[k];
        v[k] = vk;
        if (vk != 0.0)
            for (int j = k + 1; j < m; ++j) v[j] -= rowk[j] * vk;
    }
    // L^T backward solve (unit diagonal)
    for (int j = m - 1; j >= 0; --j) {
        const double* rowj = &lu_[static_cast<std::size_t>(j) * m];
        double vj = v[j];
        if (vj != 0.0)
            for (int k = 0; k < j; ++k) v[k] -= rowj[k] * vj;
    }
    for (int k = m - 1; k >= 0; --k)
        if (ipiv_[k] != k) std::swap(v[k], v[ipiv_[k]]);
}

void SimplexSolver::compute_basic_values() {
    const int m = prob_.num_rows;
    std::vector<double> r = prob_.rhs;
    for (int j = 0; j < prob_.num_cols; ++j) {
        if (status_[j] == VarStatus::Basic) continue;
        double xj = (status_[j] == VarStatus::AtUpper) ? prob_.upper[j] : prob_.lower[j];
        x_[j] = xj;
        if (xj != 0.0)
            for (int k = prob_.col_ptr[j]; k < prob_.col_ptr[j + 1]; ++k) r[prob_.row_idx[k]] -= prob_.value[k] * xj;
    }
    ftran(r);
    for (int s = 0; s < m; ++s) x_[basic_[s]] = r[s];
}

double SimplexSolver::current_objective() const {
    double obj = 0.0;
    for (int j = 0; j < prob_.num_cols; ++j)
        if (x_[j] != 0.0 && prob_.cost[j] != 0.0) obj += prob_.cost[j] * x_[j];
    return obj;
}

double SimplexSolver::constraint_residual() const {
    std::vector<double> r = prob_.rhs;
    for (int j = 0; j < prob_.num_cols; ++j) {
        double xj = x_[j];
        if (xj != 0.0)
            for (int k = prob_.col_ptr[j]; k < prob_.col_ptr[j + 1]; ++k) r[prob_.row_idx[k]] -= prob_.value[k] * xj;
    }
    double mx = 0.0;
    for (double v : r) mx = std::max(mx, std::fabs(v));
    return mx;
}

SimplexResult SimplexSolver::solve() {
    const int m = prob_.num_rows;
    const int n = prob_.num_cols;
    if (basic_.empty()) throw std::logic_error("simplex: solve() requires a starting basis");
    if (!factorized_) {
        factorize();
        compute_basic_values();
    }

    long max_iters = opts_.max_iterations > 0 ? opts_.max_iterations : 20000L + 25L * (m + n);

    SimplexResult res;
    std::vector<double> y(m), d(m);
    bool bland = false;
    int stall = 0;
    double last_obj = current_objective();

    for (res.iterations = 0; res.iterations < max_iters; ++res.iterations) {
        // Dual vector and pricing.
        for (int s = 0; s < m; ++s) y[s] = prob_.cost[basic_[s]];
        btran(y);

        int enter = -1;
        double best_viol = opts_.dual_tol;
        for (int j = 0; j < n; ++j) {
            if (status_[j] == VarStatus::Basic || prob_.lower[j] == prob_.upper[j]) continue;
            double z = prob_.cost[j];
            for (int k = prob_.col_ptr[j]; k < prob_.col_ptr[j + 1]; ++k) z -= prob_.value[k] * y[prob_.row_idx[k]];
            double viol = (status_[j] == VarStatus::AtLower) ? -z : z;
            if (viol > best_viol) {
                enter = j;
                best_viol = viol;
                if (bland) break;  // lowest eligible index
            }
        }
        if (enter < 0) {
            res.status = SimplexStatus::Optimal;
            break;
        }

        const double dir = (status_[enter] == VarStatus::AtLower) ? 1.0 : -1.0;
        d.assign(m, 0.0);
        for (int k = prob_.col_ptr[enter]; k < prob_.col_ptr[enter + 1]; ++k) d[prob_.row_idx[k]] = prob_.value[k];
        ftran(d);

        // Ratio test: entering moves by t >= 0, basics move as x_B - t*dir*d.
        double t_bound = prob_.upper[enter] - prob_.lower[enter];
        double t_best = t_bound;
        int leave_slot = -1;
        double leave_pivot = 0.0;
        bool leave_to_upper = false;
        for (int s = 0; s < m; ++s) {
            double step = dir * d[s];
            if (std::fabs(step) <= opts_.pivot_tol) continue;
            int bv = basic_[s];
            double t;
            bool to_upper;
            if (step > 0.0) {
                t = (x_[bv] - prob_.lower[bv]) / step;
                to_upper = false;
            } else {
                t = (x_[bv] - prob_.upper[bv]) / step;
                to_upper = true;
            }
            if (t < 0.0) t = 0.0;
            bool better;
            if (t < t_best - 1e-12) {
                better = true;
            } else if (t <= t_best + 1e-12 && leave_slot >= 0) {
                better = bland ? (bv < basic_[leave_slot]) : (std::fabs(step) > std::fabs(leave_pivot));
            } else {
                better = false;
            }
            if (better) {
                t_best = std::min(t, t_best);
                leave_slot = s;
                leave_pivot = d[s];
                leave_to_upper = to_upper;
            }
        }

        if (leave_slot < 0) {
            // Bound flip: entering variable traverses to its opposite bound.
            double t = t_bound;
            for (int s = 0; s < m; ++s)
                if (d[s] != 0.0) x_[basic_[s]] -= t * dir * d[s];
            if (status_[enter] == VarStatus::AtLower) {
                status_[enter] = VarStatus::AtUpper;
                x_[enter] = prob_.upper[enter];
            } else {
                status_[enter] = VarStatus::AtLower;
                x_[enter] = prob_.lower[enter];
            }
        } else {
            if (std::fabs(leave_pivot) < opts_.pivot_tol)
                throw std::runtime_error("simplex: pivot element below tolerance");
            double t = t_best;
            for (int s = 0; s < m; ++s)
                if (d[s] != 0.0) x_[basic_[s]] -= t * dir * d[s];
            int leave_var = basic_[leave_slot];
            x_[enter] = ((status_[enter] == VarStatus::AtLower) ? prob_.lower[enter] : prob_.upper[enter]) + dir * t;
            x_[leave_var] = leave_to_upper ? prob_.upper[leave_var] : prob_.lower[leave_var];
            status_[leave_var] = leave_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
            status_[enter] = VarStatus::Basic;
            basic_[leave_slot] = enter;
            etas_.push_back(Eta{leave_slot, d});
        }

        if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) {
            factorize();
            compute_basic_values();
        }

        double obj = current_objective();
        if (obj < last_obj - 1e-12 * (1.0 + std::fabs(last_obj))) {
            stall = 0;
            bland = false;
        } else if (++stall >= opts_.stall_limit) {
            bland = true;
        }
        last_obj = obj;
    }

    if (res.iterations >= max_iters) {
        res.status = SimplexStatus::IterationLimit;
        res.objective = current_objective();
        return res;
    }

    res.max_residual = constraint_residual();
    if (res.max_residual > opts_.residual_tol) {
        factorize();
        compute_basic_values();
        res.max_residual = constraint_residual();
        if (res.max_residual > opts_.residual_tol) {
            res.status = SimplexStatus::Unstable;
            res.objective = current_objective();
            return res;
        }
    }
    solution_.resize(n);
    res.objective = 0.0;
    for (int j = 0; j < n; ++j) {
        solution_[j] = std::clamp(x_[j], true_lower_[j], true_upper_[j]);
        if (solution_[j] != 0.0 && prob_.cost[j] != 0.0) res.objective += prob_.cost[j] * solution_[j];
    }
    return res;
}

}  // namespace ldpclp
