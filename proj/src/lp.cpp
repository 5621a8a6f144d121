#include "fct/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fct/simd.hpp"

namespace fct {

void LinearProgram::add_row(std::span<const double> dense, double lo, double hi) {
    Row row;
    row.lo = lo;
    row.hi = hi;
    for (int j = 0; j < static_cast<int>(dense.size()); ++j)
        if (dense[j] != 0.0) row.coeffs.emplace_back(j, dense[j]);
    rows.push_back(std::move(row));
}

void LinearProgram::add_row_sparse(std::vector<std::pair<int, double>> coeffs, double lo,
                                   double hi) {
    rows.push_back(Row{std::move(coeffs), lo, hi});
}

void LinearProgram::validate() const {
    for (int j = 0; j < n_vars; ++j) {
        if (!(var_lo[j] <= var_hi[j])) throw LPError("variable bounds crossed");
        if (!std::isfinite(var_lo[j]) || !std::isfinite(var_hi[j]))
            throw LPError("variable bounds must be finite");
        if (!std::isfinite(objective[j])) throw LPError("objective must be finite");
    }
    for (const auto& r : rows) {
        if (!(r.lo <= r.hi)) throw LPError("row bounds crossed");
        for (auto [j, a] : r.coeffs) {
            if (j < 0 || j >= n_vars) throw LPError("row references unknown variable");
            if (!std::isfinite(a)) throw LPError("row coefficient must be finite");
        }
    }
}

namespace {

constexpr double kPivotTol = 1e-10;
constexpr int kBlandTrigger = 50;  // consecutive degenerate pivots

enum class VarState : unsigned char { AtLower, AtUpper, Basic };

/// Bounded-variable primal simplex on the equality system  A x - s (+ a) = 0
/// with structural columns, one slack per row and phase-1 artificials.
class Simplex {
  public:
    explicit Simplex(const LinearProgram& lp) : lp_(lp), m_(static_cast<int>(lp.rows.size())) {
        n_total_ = lp_.n_vars + m_;  // structural + slacks; artificials appended later
        cols_.resize(n_total_);
        lo_.resize(n_total_);
        hi_.resize(n_total_);
        for (int j = 0; j < lp_.n_vars; ++j) {
            lo_[j] = lp_.var_lo[j];
            hi_[j] = lp_.var_hi[j];
        }
        for (int i = 0; i < m_; ++i) {
            const auto& r = lp_.rows[i];
            for (auto [j, a] : r.coeffs) cols_[j].emplace_back(i, a);
            cols_[lp_.n_vars + i].emplace_back(i, -1.0);
            lo_[lp_.n_vars + i] = r.lo;
            hi_[lp_.n_vars + i] = r.hi;
        }
        scale_ = 1.0;
        for (int j = 0; j < n_total_; ++j) {
            // huge magnitudes stand in for missing bounds and must not widen
            // the working tolerances
            if (std::abs(lo_[j]) < 1e20) scale_ = std::max(scale_, std::abs(lo_[j]));
            if (std::abs(hi_[j]) < 1e20) scale_ = std::max(scale_, std::abs(hi_[j]));
        }
        feas_tol_ = 1e-11 * scale_;
    }

    LPSolution run() {
        LPSolution sol;
        setup_initial_basis();
        if (n_art_ > 0) {
            // Phase 1: maximize minus the sum of artificials.
            cost_.assign(n_cols_, 0.0);
            for (int j = n_total_; j < n_cols_; ++j) cost_[j] = -1.0;
            iterate();
            double infeas = 0.0;
            for (int i = 0; i < m_; ++i)
                if (basic_[i] >= n_total_) infeas += std::abs(xb_[i]);
            if (infeas > 1e-8 * scale_) {
                sol.status = LPSolution::Status::Infeasible;
                sol.iterations = iterations_;
                return sol;
            }
            pin_artificials();
        }
        // Phase 2 on the real objective.
        cost_.assign(n_cols_, 0.0);
        for (int j = 0; j < lp_.n_vars; ++j) cost_[j] = lp_.objective[j];
        iterate();
        refresh_basics();

        sol.status = LPSolution::Status::Optimal;
        sol.x.assign(lp_.n_vars, 0.0);
        for (int j = 0; j < lp_.n_vars; ++j) sol.x[j] = value_of(j);
        sol.objective_value = 0.0;
        for (int j = 0; j < lp_.n_vars; ++j) sol.objective_value += lp_.objective[j] * sol.x[j];
        sol.iterations = iterations_;
        return sol;
    }

  private:
    using SparseCol = std::vector<std::pair<int, double>>;

    double value_of(int j) const {
        if (state_[j] == VarState::Basic) return xb_[basic_row_[j]];
        return state_[j] == VarState::AtLower ? lo_[j] : hi_[j];
    }

    void setup_initial_basis() {
        // Structural variables start at the bound the objective favors (the
        // scheme LPs are maximizations whose optima sit mostly at the upper
        // bound); slacks basic at the implied row value, swapped for
        // artificials where that violates bounds.
        state_.assign(n_total_, VarState::AtLower);
        std::vector<double> rval(m_, 0.0);
        for (int j = 0; j < lp_.n_vars; ++j) {
            if (lp_.objective[j] > 0.0 && std::isfinite(hi_[j])) state_[j] = VarState::AtUpper;
            const double v = state_[j] == VarState::AtUpper ? hi_[j] : lo_[j];
            if (v != 0.0)
                for (auto [i, a] : cols_[j]) rval[i] += a * v;
        }
        basic_.assign(m_, -1);
        xb_.assign(m_, 0.0);
        n_art_ = 0;
        std::vector<int> art_row;
        for (int i = 0; i < m_; ++i) {
            const int sj = lp_.n_vars + i;
            const double row_tol = 1e-11 * std::max(1.0, std::abs(rval[i]));
            if (rval[i] >= lo_[sj] - row_tol && rval[i] <= hi_[sj] + row_tol) {
                basic_[i] = sj;
                xb_[i] = rval[i];
                state_[sj] = VarState::Basic;
            } else {
                // Slack pinned at its nearest bound, artificial takes the gap.
                const bool above = rval[i] > hi_[sj];
                state_[sj] = above ? VarState::AtUpper : VarState::AtLower;
                art_row.push_back(i);
                ++n_art_;
            }
        }
        n_cols_ = n_total_ + n_art_;
        cols_.resize(n_cols_);
        lo_.resize(n_cols_, 0.0);
        hi_.resize(n_cols_, kLpInf);
        state_.resize(n_cols_, VarState::AtLower);
        int a = 0;
        for (int i : art_row) {
            const int sj = lp_.n_vars + i;
            const double sv = state_[sj] == VarState::AtUpper ? hi_[sj] : lo_[sj];
            const double gap = sv - rval[i];  // a_i = sigma*(s - r) with sigma = sign
            const int aj = n_total_ + a++;
            cols_[aj].emplace_back(i, gap > 0 ? 1.0 : -1.0);
            basic_[i] = aj;
            xb_[i] = std::abs(gap);
            state_[aj] = VarState::Basic;
        }
        basic_row_.assign(n_cols_, -1);
        for (int i = 0; i < m_; ++i) basic_row_[basic_[i]] = i;
        binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const int bj = basic_[i];
            const double diag = cols_[bj].front().second;  // -1 slack or +-1 artificial
            binv_[static_cast<size_t>(i) * m_ + i] = 1.0 / diag;
        }
        refresh_basics();
    }

    /// Recompute basic values from nonbasic bounds (keeps drift in check).
    void refresh_basics() {
        std::vector<double> rhs(m_, 0.0);
        for (int j = 0; j < n_cols_; ++j) {
            if (state_[j] == VarState::Basic) continue;
            const double v = state_[j] == VarState::AtLower ? lo_[j] : hi_[j];
            if (v != 0.0)
                for (auto [i, a] : cols_[j]) rhs[i] -= a * v;
        }
        for (int i = 0; i < m_; ++i)
            xb_[i] = simd::kernels().dot(&binv_[static_cast<size_t>(i) * m_], rhs.data(), m_);
    }

    void rebuild_binv() {
        // Dense Gauss-Jordan inverse of the current basis matrix.
        std::vector<double> a(static_cast<size_t>(m_) * 2 * m_, 0.0);
        const int w = 2 * m_;
        for (int i = 0; i < m_; ++i) {
            for (auto [r, v] : cols_[basic_[i]]) a[static_cast<size_t>(r) * w + i] = v;
            a[static_cast<size_t>(i) * w + m_ + i] = 1.0;
        }
        for (int c = 0; c < m_; ++c) {
            int p = c;
            for (int r = c + 1; r < m_; ++r)
                if (std::abs(a[static_cast<size_t>(r) * w + c]) >
                    std::abs(a[static_cast<size_t>(p) * w + c]))
                    p = r;
            if (std::abs(a[static_cast<size_t>(p) * w + c]) < 1e-14)
                throw LPError("singular basis during refactorization");
            if (p != c)
                for (int k = 0; k < w; ++k)
                    std::swap(a[static_cast<size_t>(p) * w + k], a[static_cast<size_t>(c) * w + k]);
            const double piv = a[static_cast<size_t>(c) * w + c];
            for (int k = 0; k < w; ++k) a[static_cast<size_t>(c) * w + k] /= piv;
            for (int r = 0; r < m_; ++r) {
                if (r == c) continue;
                const double f = a[static_cast<size_t>(r) * w + c];
                if (f == 0.0) continue;
                for (int k = 0; k < w; ++k)
                    a[static_cast<size_t>(r) * w + k] -= f * a[static_cast<size_t>(c) * w + k];
            }
        }
        for (int i = 0; i < m_; ++i)
            for (int k = 0; k < m_; ++k)
                binv_[static_cast<size_t>(i) * m_ + k] = a[static_cast<size_t>(i) * w + m_ + k];
        refresh_basics();
    }

    /// After phase 1, basic artificials sit at zero; freeze every artificial
    /// so phase 2 cannot move them.
    void pin_artificials() {
        for (int j = n_total_; j < n_cols_; ++j) {
            hi_[j] = 0.0;
            lo_[j] = 0.0;
        }
    }

    void iterate() {
        const double cost_scale =
            std::max(1.0, std::abs(*std::max_element(cost_.begin(), cost_.end(),
                                                     [](double a, double b) {
                                                         return std::abs(a) < std::abs(b);
                                                     })));
        const double dtol = 1e-10 * cost_scale;
        int degenerate_run = 0;
        std::vector<double> y(m_), w(m_);
        const int iter_cap = 200 * (m_ + n_cols_) + 2000;
        for (;; ++iterations_) {
            if (iterations_ > iter_cap) throw LPError("simplex iteration cap exceeded");
            const int refresh = std::max(512, 4 * m_);
            if (iterations_ > 0 && iterations_ % refresh == 0) rebuild_binv();
            // Pricing: y = c_B' B^{-1}.
            std::fill(y.begin(), y.end(), 0.0);
            for (int i = 0; i < m_; ++i) {
                const double cb = cost_[basic_[i]];
                if (cb != 0.0)
                    simd::kernels().axpy(cb, &binv_[static_cast<size_t>(i) * m_], y.data(), m_);
            }
            const bool bland = degenerate_run >= kBlandTrigger;
            int enter = -1;
            double best = dtol;
            int dir = +1;
            for (int j = 0; j < n_cols_; ++j) {
                if (state_[j] == VarState::Basic) continue;
                if (lo_[j] == hi_[j]) continue;  // fixed (pinned artificials)
                double d = cost_[j];
                for (auto [i, a] : cols_[j]) d -= y[i] * a;
                const int sdir = state_[j] == VarState::AtLower ? +1 : -1;
                const double gain = sdir * d;
                if (gain > (bland ? dtol : best)) {
                    enter = j;
                    dir = sdir;
                    if (bland) break;
                    best = gain;
                }
            }
            if (enter < 0) return;  // optimal for this phase

            // w = B^{-1} A_enter.
            std::fill(w.begin(), w.end(), 0.0);
            for (auto [i, a] : cols_[enter])
                for (int r = 0; r < m_; ++r) w[r] += binv_[static_cast<size_t>(r) * m_ + i] * a;

            // Ratio test: entering moves by t*dir until it hits its opposite
            // bound or a basic variable hits one of its own.
            double t_max = hi_[enter] - lo_[enter];
            int leave_row = -1;
            bool leave_to_upper = false;
            double leave_pivot = 0.0;
            for (int r = 0; r < m_; ++r) {
                const double g = dir * w[r];
                if (std::abs(g) < kPivotTol) continue;
                const int bj = basic_[r];
                double t;
                bool to_upper;
                if (g > 0.0) {  // basic value decreases
                    if (!std::isfinite(lo_[bj])) continue;
                    t = (xb_[r] - lo_[bj]) / g;
                    to_upper = false;
                } else {  // basic value increases
                    if (!std::isfinite(hi_[bj])) continue;
                    t = (xb_[r] - hi_[bj]) / g;
                    to_upper = true;
                }
                if (t < -feas_tol_) t = 0.0;
                const bool better =
                    t < t_max - 1e-12 ||
                    (t < t_max + 1e-12 && leave_row >= 0 &&
                     (bland ? bj < basic_[leave_row] : std::abs(g) > std::abs(leave_pivot)));
                if (leave_row < 0 ? t < t_max : better) {
                    t_max = std::max(t, 0.0);
                    leave_row = r;
                    leave_to_upper = to_upper;
                    leave_pivot = g;
                }
            }
            if (!std::isfinite(t_max)) throw LPError("unbounded direction in box-bounded LP");

            degenerate_run = (t_max <= feas_tol_) ? degenerate_run + 1 : 0;

            if (leave_row < 0) {
                // Bound flip: entering runs to its opposite bound.
                for (int r = 0; r < m_; ++r) xb_[r] -= t_max * dir * w[r];
                state_[enter] =
                    state_[enter] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
                continue;
            }

            const int leave = basic_[leave_row];
            const double enter_val =
                (dir > 0 ? lo_[enter] : hi_[enter]) + t_max * dir;
            for (int r = 0; r < m_; ++r) xb_[r] -= t_max * dir * w[r];
            xb_[leave_row] = enter_val;
            state_[leave] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
            state_[enter] = VarState::Basic;
            basic_[leave_row] = enter;
            basic_row_[leave] = -1;
            basic_row_[enter] = leave_row;

            // Product-form update of B^{-1}.
            const double piv = w[leave_row];
            double* prow = &binv_[static_cast<size_t>(leave_row) * m_];
            for (int k = 0; k < m_; ++k) prow[k] /= piv;
            for (int r = 0; r < m_; ++r) {
                if (r == leave_row) continue;
                const double f = w[r];
                if (f == 0.0) continue;
                simd::kernels().axpy(-f, prow, &binv_[static_cast<size_t>(r) * m_], m_);
            }
        }
    }

    const LinearProgram& lp_;
    int m_;
    int n_total_ = 0;  // structural + slacks
    int n_cols_ = 0;   // + artificials
    int n_art_ = 0;
    double scale_ = 1.0;
    double feas_tol_ = 1e-9;
    std::vector<SparseCol> cols_;
    std::vector<double> lo_, hi_, cost_;
    std::vector<VarState> state_;
    std::vector<int> basic_;       // column basic in each row
    std::vector<int> basic_row_;   // inverse map
    std::vector<double> xb_;       // basic values
    std::vector<double> binv_;     // dense m x m
    int iterations_ = 0;
};

}  // namespace

LPSolution solve(const LinearProgram& lp) {
    lp.validate();
    if (lp.n_vars == 0) {
        LPSolution sol;
        bool ok = true;
        for (const auto& r : lp.rows) {
            const double tol = 1e-9 * std::max({1.0, std::abs(r.lo), std::abs(r.hi)});
            ok = ok && r.lo <= tol && -tol <= r.hi;
        }
        sol.status = ok ? LPSolution::Status::Optimal : LPSolution::Status::Infeasible;
        return sol;
    }
    Simplex s(lp);
    return s.run();
}

namespace {

/// Gaussian elimination with partial pivoting; returns false when singular.
bool dense_solve(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x) {
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
        if (std::abs(a[p * n + c]) < 1e-11) return false;
        if (p != c) {
            for (int k = 0; k < n; ++k) std::swap(a[p * n + k], a[c * n + k]);
            std::swap(b[p], b[c]);
        }
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            if (f == 0.0) continue;
            for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
        x[r] = s / a[r * n + r];
    }
    return true;
}

}  // namespace

LPSolution vertex_oracle(const LinearProgram& lp) {
    lp.validate();
    const int n = lp.n_vars;
    const int m = static_cast<int>(lp.rows.size());
    if (n > 8 || m > 12) throw LPError("vertex_oracle limited to n_vars <= 8, rows <= 12");

    std::vector<std::vector<double>> dense(m, std::vector<double>(n, 0.0));
    for (int i = 0; i < m; ++i)
        for (auto [j, a] : lp.rows[i].coeffs) dense[i][j] += a;

    LPSolution best;
    best.status = LPSolution::Status::Infeasible;

    const double tol = 1e-9;
    auto feasible = [&](const std::vector<double>& x) {
        for (int j = 0; j < n; ++j)
            if (x[j] < lp.var_lo[j] - tol || x[j] > lp.var_hi[j] + tol) return false;
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += dense[i][j] * x[j];
            double rs = 1.0;
            for (int j = 0; j < n; ++j) rs = std::max(rs, std::abs(dense[i][j] * x[j]));
            if (s < lp.rows[i].lo - tol * rs || s > lp.rows[i].hi + tol * rs) return false;
        }
        return true;
    };
    auto consider = [&](const std::vector<double>& x) {
        if (!feasible(x)) return;
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
        if (best.status == LPSolution::Status::Infeasible || obj > best.objective_value) {
            best.status = LPSolution::Status::Optimal;
            best.objective_value = obj;
            best.x = x;
        }
    };

    // Enumerate candidate basic points: k rows tight (at lo or hi) and n-k
    // variables pinned at a bound, for every k, subset, and side assignment.
    std::vector<int> rowsel, varsel;
    std::vector<double> x(n), sys, rhs, sol;
    auto solve_candidate = [&](int k, unsigned row_sides, unsigned var_sides) {
        std::vector<int> free_vars;
        std::vector<char> pinned(n, 0);
        for (int t = 0; t < n - k; ++t) pinned[varsel[t]] = 1;
        for (int j = 0; j < n; ++j)
            if (!pinned[j]) free_vars.push_back(j);
        for (int t = 0; t < n - k; ++t) {
            const int j = varsel[t];
            x[j] = (var_sides >> t & 1u) ? lp.var_hi[j] : lp.var_lo[j];
        }
        if (k == 0) {
            consider(x);
            return;
        }
        sys.assign(k * k, 0.0);
        rhs.assign(k, 0.0);
        for (int t = 0; t < k; ++t) {
            const int i = rowsel[t];
            double target = (row_sides >> t & 1u) ? lp.rows[i].hi : lp.rows[i].lo;
            if (!std::isfinite(target)) return;  // cannot pin a row at an infinite bound
            for (int u = 0; u < k; ++u) sys[t * k + u] = dense[i][free_vars[u]];
            double fixed = 0.0;
            for (int t2 = 0; t2 < n - k; ++t2) fixed += dense[i][varsel[t2]] * x[varsel[t2]];
            rhs[t] = target - fixed;
        }
        if (!dense_solve(sys, rhs, k, sol)) return;
        for (int u = 0; u < k; ++u) x[free_vars[u]] = sol[u];
        consider(x);
    };

    const int kmax = std::min(n, m);
    for (int k = 0; k <= kmax; ++k) {
        rowsel.assign(k, 0);
        // subsets of rows of size k
        std::vector<int> rc(k);
        std::iota(rc.begin(), rc.end(), 0);
        bool rows_done = (k > 0 && k > m);
        while (!rows_done) {
            rowsel = rc;
            // subsets of variables of size n-k to pin
            std::vector<int> vc(n - k);
            std::iota(vc.begin(), vc.end(), 0);
            bool vars_done = false;
            while (!vars_done) {
                varsel = vc;
                for (unsigned rs = 0; rs < (1u << k); ++rs)
                    for (unsigned vs = 0; vs < (1u << (n - k)); ++vs) solve_candidate(k, rs, vs);
                // next variable combination
                int t = n - k - 1;
                while (t >= 0 && vc[t] == t + k) --t;
                if (t < 0)
                    vars_done = true;
                else {
                    ++vc[t];
                    for (int u = t + 1; u < n - k; ++u) vc[u] = vc[u - 1] + 1;
                }
                if (n - k == 0) vars_done = true;
            }
            if (k == 0) break;
            int t = k - 1;
            while (t >= 0 && rc[t] == t + m - k) --t;
            if (t < 0)
                rows_done = true;
            else {
                ++rc[t];
                for (int u = t + 1; u < k; ++u) rc[u] = rc[u - 1] + 1;
            }
        }
    }
    return best;
}

namespace {

LPSolution solve_components(const LinearProgram& lp, const std::vector<int>& kept) {
    const int n = lp.n_vars;

    // Union-find over variables touched by the kept rows.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int i : kept) {
        const auto& r = lp.rows[i];
        const int root = find(r.coeffs.front().first);
        for (auto [j, a] : r.coeffs) {
            (void)a;
            parent[find(j)] = root;
        }
    }

    LPSolution sol;
    sol.status = LPSolution::Status::Optimal;
    sol.x.assign(n, 0.0);
    std::vector<char> constrained(n, 0);
    for (int i : kept)
        for (auto [j, a] : lp.rows[i].coeffs) {
            (void)a;
            constrained[j] = 1;
        }
    for (int j = 0; j < n; ++j)
        if (!constrained[j]) sol.x[j] = lp.objective[j] > 0.0 ? lp.var_hi[j] : lp.var_lo[j];

    // Group rows and variables per component and solve each sub-LP.
    std::vector<std::vector<int>> comp_rows;
    std::vector<int> comp_of(n, -1);
    std::vector<int> roots;
    for (int j = 0; j < n; ++j) {
        if (!constrained[j]) continue;
        const int root = find(j);
        int c = -1;
        for (int t = 0; t < static_cast<int>(roots.size()); ++t)
            if (roots[t] == root) c = t;
        if (c < 0) {
            c = static_cast<int>(roots.size());
            roots.push_back(root);
            comp_rows.emplace_back();
        }
        comp_of[j] = c;
    }
    for (int i : kept) comp_rows[comp_of[lp.rows[i].coeffs.front().first]].push_back(i);

    for (int c = 0; c < static_cast<int>(roots.size()); ++c) {
        std::vector<int> vars;
        for (int j = 0; j < n; ++j)
            if (comp_of[j] == c) vars.push_back(j);
        std::vector<int> local(n, -1);
        for (int t = 0; t < static_cast<int>(vars.size()); ++t) local[vars[t]] = t;
        LinearProgram sub(static_cast<int>(vars.size()));
        for (int t = 0; t < static_cast<int>(vars.size()); ++t) {
            sub.objective[t] = lp.objective[vars[t]];
            sub.var_lo[t] = lp.var_lo[vars[t]];
            sub.var_hi[t] = lp.var_hi[vars[t]];
        }
        for (int i : comp_rows[c]) {
            std::vector<std::pair<int, double>> coeffs;
            for (auto [j, a] : lp.rows[i].coeffs) coeffs.emplace_back(local[j], a);
            sub.add_row_sparse(std::move(coeffs), lp.rows[i].lo, lp.rows[i].hi);
        }
        LPSolution s = solve(sub);
        sol.iterations += s.iterations;
        if (s.status != LPSolution::Status::Optimal) {
            sol.status = LPSolution::Status::Infeasible;
            return sol;
        }
        for (int t = 0; t < static_cast<int>(vars.size()); ++t) sol.x[vars[t]] = s.x[t];
    }
    sol.objective_value = 0.0;
    for (int j = 0; j < n; ++j) sol.objective_value += lp.objective[j] * sol.x[j];
    return sol;
}

}  // namespace

LPSolution solve_reduced(const LinearProgram& lp) {
    lp.validate();
    for (double c : lp.objective)
        if (c < 0.0) throw LPError("solve_reduced requires a nonnegative objective");

    const int n = lp.n_vars;
    const int m = static_cast<int>(lp.rows.size());

    // Working-set outer loop: start from the unconstrained box optimum and
    // bring in rows as they are violated. On exit every row holds and the
    // dropped ones were slack, so the subset optimum solves the full problem.
    std::vector<double> x_probe(n);
    for (int j = 0; j < n; ++j) x_probe[j] = lp.objective[j] > 0.0 ? lp.var_hi[j] : lp.var_lo[j];
    std::vector<char> in_working(m, 0);
    std::vector<int> kept;
    kept.reserve(64);
    LPSolution seed;
    seed.status = LPSolution::Status::Optimal;
    seed.x = x_probe;

    for (int round = 0;; ++round) {
        bool added = false;
        for (int i = 0; i < m; ++i) {
            if (in_working[i]) continue;
            const auto& r = lp.rows[i];
            double v = 0.0, scale = 1.0;
            for (auto [j, a] : r.coeffs) {
                v += a * seed.x[j];
                scale = std::max(scale, std::abs(a * seed.x[j]));
            }
            if (std::abs(r.lo) < 1e20) scale = std::max(scale, std::abs(r.lo));
            if (std::abs(r.hi) < 1e20) scale = std::max(scale, std::abs(r.hi));
            const double tol = 1e-11 * scale;
            if (r.coeffs.empty()) {
                const double etol = 1e-9 * std::max({1.0, std::abs(r.lo), std::abs(r.hi)});
                if (r.lo > etol || r.hi < -etol) {
                    LPSolution sol;
                    sol.status = LPSolution::Status::Infeasible;
                    return sol;
                }
                in_working[i] = 1;
                continue;
            }
            if (v < r.lo - tol || v > r.hi + tol) {
                in_working[i] = 1;
                kept.push_back(i);
                added = true;
            }
        }
        if (!added) break;
        const int prev_iters = seed.iterations;
        seed = solve_components(lp, kept);
        seed.iterations += prev_iters;
        if (seed.status != LPSolution::Status::Optimal) return seed;
        if (round > m) throw LPError("row generation failed to settle");
    }
    if (kept.empty()) {
        seed.objective_value = 0.0;
        for (int j = 0; j < n; ++j) seed.objective_value += lp.objective[j] * seed.x[j];
    }
    return seed;
}


}  // namespace fct
