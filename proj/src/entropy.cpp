#include "fct/entropy.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace fct {

namespace {

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = fn(lm), frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& fn, double a, double b, double tol) {
    const double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(fn, a, b, fa, fm, fb, whole, tol, 40);
}

/// Cumulative antiderivative table with Hermite-cubic interpolation; the
/// derivative at each node is known exactly, so interpolation error is O(h^4).
class HermiteTable {
  public:
    HermiteTable(const std::function<double(double)>& deriv, double lo, double hi, int points)
        : lo_(lo), hi_(hi), n_(points), deriv_(deriv) {
        values_.resize(n_ + 1);
        slopes_.resize(n_ + 1);
        const double h = (hi_ - lo_) / n_;
        // Anchor at zero when the range contains it so F(0) = 0 exactly.
        int zero_node = 0;
        if (lo_ < 0.0 && hi_ > 0.0) zero_node = static_cast<int>(std::round(-lo_ / h));
        values_[zero_node] = integrate(deriv_, 0.0, lo_ + zero_node * h, 1e-13);
        for (int i = zero_node + 1; i <= n_; ++i)
            values_[i] =
                values_[i - 1] + integrate(deriv_, lo_ + (i - 1) * h, lo_ + i * h, 1e-13);
        for (int i = zero_node - 1; i >= 0; --i)
            values_[i] =
                values_[i + 1] - integrate(deriv_, lo_ + i * h, lo_ + (i + 1) * h, 1e-13);
        for (int i = 0; i <= n_; ++i) slopes_[i] = deriv_(lo_ + i * h);
    }

    double operator()(double x) const {
        if (x < lo_ || x > hi_) {
            // Outside the table: integrate directly from the nearest end.
            const double edge = (x < lo_) ? lo_ : hi_;
            const double base = (x < lo_) ? values_.front() : values_.back();
            return base + integrate(deriv_, edge, x, 1e-13);
        }
        const double h = (hi_ - lo_) / n_;
        int i = static_cast<int>((x - lo_) / h);
        if (i >= n_) i = n_ - 1;
        const double t = (x - (lo_ + i * h)) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * values_[i] + h * h10 * slopes_[i] + h01 * values_[i + 1] +
               h * h11 * slopes_[i + 1];
    }

  private:
    double lo_, hi_;
    int n_;
    std::function<double(double)> deriv_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

}  // namespace

EntropyPair square_entropy(const FluxFunction& flux, double lo, double hi, int table_points) {
    EntropyPair pair;
    pair.U = [](double r) { return 0.5 * r * r; };
    pair.dU = [](double r) { return r; };
    pair.d2U = [](double) { return 1.0; };
    if (flux.square_entropy_flux) {
        pair.F = flux.square_entropy_flux;
    } else {
        auto df = flux.df;
        auto integrand = [df](double s) { return s * df(s); };
        auto table = std::make_shared<HermiteTable>(integrand, lo, hi, table_points);
        pair.F = [table](double r) { return (*table)(r); };
    }
    return pair;
}

TadmorPotential tadmor_potential(const EntropyPair& pair, const FluxFunction& flux) {
    TadmorPotential pot;
    pot.v = pair.dU;
    // Only the square entropy is exercised, where v = rho inverts trivially.
    pot.rho_of_v = [](double v) { return v; };
    auto rho_of_v = pot.rho_of_v;
    auto f = flux.f;
    auto F = pair.F;
    pot.g = [f, rho_of_v](double v) { return f(rho_of_v(v)); };
    pot.psi = [f, F, rho_of_v](double v) {
        const double r = rho_of_v(v);
        return v * f(r) - F(r);
    };
    return pot;
}

double rusanov_entropy_flux(const EntropyPair& pair, const FluxFunction& flux, double y_left,
                            double y_right) {
    const double nu = interval_max_abs_deriv(flux, y_left, y_right);
    return 0.5 * (pair.F(y_left) + pair.F(y_right) - nu * (pair.U(y_right) - pair.U(y_left)));
}

double antidiffusive_entropy_term(const EntropyPair& pair, const FluxFunction& flux, double y_left,
                                  double y_right) {
    const double nu = interval_max_abs_deriv(flux, y_left, y_right);
    return 0.5 * nu * (pair.U(y_right) - pair.U(y_left));
}

double tadmor_entropy_flux(const TadmorPotential& pot, const EntropyPair& pair, double y_left,
                           double y_right, double g_value) {
    const double vl = pair.dU(y_left), vr = pair.dU(y_right);
    return 0.5 * (vl + vr) * g_value - 0.5 * (pot.psi(vl) + pot.psi(vr));
}

std::vector<double> cell_entropy_residual(const EntropyPair& pair, const FluxFunction& flux,
                                          const std::vector<double>& y_n,
                                          const std::vector<double>& y_np1,
                                          const std::vector<double>& alpha_n,
                                          const std::vector<double>& alpha_np1, double sigma,
                                          const Grid1D& grid, const BoundarySpec& bc, double dt) {
    const int n = grid.n();
    if (static_cast<int>(y_n.size()) != n || static_cast<int>(y_np1.size()) != n)
        throw std::invalid_argument("cell_entropy_residual: field size mismatch");
    if (static_cast<int>(alpha_n.size()) != n + 1 || static_cast<int>(alpha_np1.size()) != n + 1)
        throw std::invalid_argument("cell_entropy_residual: limiter size mismatch");

    auto limited = [&](const std::vector<double>& y, const std::vector<double>& alpha,
                       std::vector<double>& H) {
        const auto g = ghost_extend(y, bc, 1);
        H.resize(n + 1);
        for (int k = 0; k <= n; ++k) {
            const double yl = g[k], yr = g[k + 1];
            H[k] = rusanov_entropy_flux(pair, flux, yl, yr) +
                   alpha[k] * antidiffusive_entropy_term(pair, flux, yl, yr);
        }
    };

    std::vector<double> Hn, Hp;
    limited(y_n, alpha_n, Hn);
    if (sigma > 0.0) {
        limited(y_np1, alpha_np1, Hp);
    } else {
        Hp.assign(n + 1, 0.0);
    }

    std::vector<double> res(n);
    for (int i = 0; i < n; ++i) {
        const double Hd = sigma * (Hp[i + 1] - Hp[i]) + (1.0 - sigma) * (Hn[i + 1] - Hn[i]);
        res[i] = pair.U(y_np1[i]) - pair.U(y_n[i]) + dt / grid.widths[i] * Hd;
    }
    return res;
}

}  // namespace fct
