#include "fct/grid.hpp"

#include <cmath>

namespace fct {

double Grid1D::interface_spacing(int k) const {
    const int nc = n();
    if (k <= 0) return centers[0] - a;
    if (k >= nc) return b - centers[nc - 1];
    return centers[k] - centers[k - 1];
}

Grid1D Grid1D::uniform(double a, double b, int n_cells) {
    if (n_cells < 3) throw GridError("uniform grid needs at least 3 cells");
    if (!(b > a)) throw GridError("uniform grid needs b > a");
    Grid1D g;
    g.a = a;
    g.b = b;
    const double dx = (b - a) / n_cells;
    g.centers.resize(n_cells);
    g.widths.assign(n_cells, dx);
    g.interfaces.resize(n_cells + 1);
    for (int i = 0; i < n_cells; ++i) g.centers[i] = a + (i + 0.5) * dx;
    for (int i = 0; i <= n_cells; ++i) g.interfaces[i] = a + i * dx;
    g.interfaces[n_cells] = b;
    return g;
}

Grid1D Grid1D::from_centers(double a, double b, std::vector<double> centers) {
    const int n = static_cast<int>(centers.size());
    if (n < 3) throw GridError("grid needs at least 3 cells");
    if (!(centers.front() > a) || !(centers.back() < b))
        throw GridError("cell centers must lie strictly inside (a,b)");
    for (int i = 1; i < n; ++i)
        if (!(centers[i] > centers[i - 1])) throw GridError("cell centers must be increasing");
    Grid1D g;
    g.a = a;
    g.b = b;
    g.centers = std::move(centers);
    g.widths.resize(n);
    for (int i = 1; i + 1 < n; ++i) g.widths[i] = 0.5 * (g.centers[i + 1] - g.centers[i - 1]);
    g.widths[0] = g.centers[1] - g.centers[0];
    g.widths[n - 1] = g.centers[n - 1] - g.centers[n - 2];
    g.interfaces.resize(n + 1);
    g.interfaces[0] = a;
    g.interfaces[n] = b;
    for (int i = 1; i < n; ++i) g.interfaces[i] = 0.5 * (g.centers[i - 1] + g.centers[i]);
    for (int i = 0; i < n; ++i)
        if (!(g.widths[i] > 0.0)) throw GridError("nonpositive cell width");
    return g;
}

Grid2D Grid2D::uniform(double ax, double bx, int nx, double ay, double by, int ny) {
    return Grid2D{Grid1D::uniform(ax, bx, nx), Grid1D::uniform(ay, by, ny)};
}

bool Field::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

std::vector<double> ghost_extend(const std::vector<double>& values, const BoundarySpec& bc,
                                 int width) {
    if (width < 1 || width > 2) throw GridError("ghost width must be 1 or 2");
    const int n = static_cast<int>(values.size());
    if (n < width) throw GridError("field too short for ghost extension");
    std::vector<double> out(n + 2 * width);
    for (int i = 0; i < n; ++i) out[width + i] = values[i];
    for (int w = 1; w <= width; ++w) {
        double lv = 0.0, rv = 0.0;
        switch (bc.kind) {
            case BoundarySpec::Kind::Periodic:
                lv = values[(n - w) % n];
                rv = values[(w - 1) % n];
                break;
            case BoundarySpec::Kind::Dirichlet:
                if (!std::isfinite(bc.left) || !std::isfinite(bc.right))
                    throw GridError("dirichlet boundary values must be finite");
                lv = bc.left;
                rv = bc.right;
                break;
            case BoundarySpec::Kind::ExtendConstant:
                lv = values[0];
                rv = values[n - 1];
                break;
        }
        out[width - w] = lv;
        out[width + n + w - 1] = rv;
    }
    return out;
}

}  // namespace fct
