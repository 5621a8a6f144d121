#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fct {

/// Cell-centered 1D grid. Centers lie strictly inside [a,b]; the first and
/// last interfaces coincide with the domain ends. Cell widths use the
/// half-distance between neighboring centers, one-sided at the ends.
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    std::vector<double> centers;     // x_i, size n
    std::vector<double> widths;      // dx_i, size n
    std::vector<double> interfaces;  // x_{i+1/2}, size n+1, interfaces[0]=a, interfaces[n]=b

    int n() const { return static_cast<int>(centers.size()); }

    /// Spacing between neighboring centers across interface k (k = 0..n);
    /// half-cell distances at the domain ends.
    double interface_spacing(int k) const;

    static Grid1D uniform(double a, double b, int n_cells);
    static Grid1D from_centers(double a, double b, std::vector<double> centers);
};

/// Tensor-product 2D grid with row-major linear cell index r = i + j*nx.
struct Grid2D {
    Grid1D gx;
    Grid1D gy;

    int nx() const { return gx.n(); }
    int ny() const { return gy.n(); }
    int cells() const { return nx() * ny(); }
    int index(int i, int j) const { return i + j * nx(); }

    static Grid2D uniform(double ax, double bx, int nx, double ay, double by, int ny);
};

/// Cell-averaged scalar field tagged with its physical time.
struct Field {
    std::vector<double> values;
    double time = 0.0;

    Field() = default;
    explicit Field(std::vector<double> v, double t = 0.0) : values(std::move(v)), time(t) {}
    int size() const { return static_cast<int>(values.size()); }
    bool all_finite() const;
};

struct BoundarySpec {
    enum class Kind { Periodic, Dirichlet, ExtendConstant };
    Kind kind = Kind::Periodic;
    double left = 0.0;   // Dirichlet values
    double right = 0.0;

    static BoundarySpec periodic() { return {Kind::Periodic, 0.0, 0.0}; }
    static BoundarySpec dirichlet(double l, double r) { return {Kind::Dirichlet, l, r}; }
    static BoundarySpec extend_constant() { return {Kind::ExtendConstant, 0.0, 0.0}; }
};

/// Per-axis boundary kinds for 2D tensor-product domains.
struct BoundarySpec2D {
    BoundarySpec x;
    BoundarySpec y;
};

/// Pads `values` with `width` ghost cells on each side. Periodic wraps
/// indices, Dirichlet fills the boundary value, ExtendConstant copies the
/// nearest interior value. Result has size n + 2*width.
std::vector<double> ghost_extend(const std::vector<double>& values, const BoundarySpec& bc,
                                 int width);

class GridError : public std::runtime_error {
  public:
    explicit GridError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fct
