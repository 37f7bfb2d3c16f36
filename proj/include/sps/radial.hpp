#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sps {

enum class Spacing { uniform, graded };

/// Nodes r_i = R (i/n) or R (i/n)^2 for i = 1..n; the origin carries no
/// quadrature weight and is recovered by even extrapolation when needed.
struct RadialGrid {
  Spacing spacing = Spacing::graded;
  std::size_t n = 0;
  double r_max = 0.0;
  double h = 0.0;                // spacing of the index coordinate s = i/n
  std::vector<double> s;         // i/n
  std::vector<double> r;         // node radii, strictly increasing, r.back() == r_max
  std::vector<double> w;         // weights for \int_0^R f(r) r^2 dr
  std::vector<double> dr_ds;     // map derivatives, used by the stencils
  std::vector<double> d2r_ds2;
  std::array<double, 4> origin;  // u(0) ~ sum_k origin[k] * u_{k+1}

  std::size_t size() const { return n; }
  /// Index coordinate of an arbitrary radius (inverse of the node map).
  double s_of(double radius) const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Throws std::invalid_argument when n < 16 or r_max <= 0.
GridPtr make_grid(std::size_t n, double r_max, Spacing spacing = Spacing::graded);

/// Values of a radial profile on a grid. State functions carry the Dirichlet
/// condition u(R) = 0; auxiliary fields (potentials) may opt out.
class RadialFunction {
 public:
  RadialFunction() = default;
  explicit RadialFunction(GridPtr grid, bool dirichlet = true);
  RadialFunction(GridPtr grid, std::vector<double> values, bool dirichlet = true);

  template <class F>
  static RadialFunction sample(GridPtr grid, F&& f, bool dirichlet = true) {
    std::vector<double> v(grid->n);
    for (std::size_t i = 0; i < grid->n; ++i) v[i] = f(grid->r[i]);
    return RadialFunction(std::move(grid), std::move(v), dirichlet);
  }

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  bool dirichlet() const { return dirichlet_; }

  const std::vector<double>& values() const { return values_; }
  /// Mutable access invalidates the cached norm.
  std::vector<double>& mutable_values() {
    norm_cached_ = false;
    return values_;
  }
  double operator[](std::size_t i) const { return values_[i]; }

  /// ||u||_2^2 = 4 pi sum w_i u_i^2, cached until the values change.
  double mass() const;
  /// Multiplies the values so that mass() == target.
  void normalize_mass(double target);
  void scale(double factor);

 private:
  void check();

  GridPtr grid_;
  std::vector<double> values_;
  bool dirichlet_ = true;
  mutable bool norm_cached_ = false;
  mutable double mass_ = 0.0;
};

/// \int_0^R f(r) r^2 dr with the grid weights (no 4 pi).
double integrate(const RadialGrid& g, std::span<const double> f);
/// \int_0^R f g r^2 dr.
double integrate(const RadialGrid& g, std::span<const double> f, std::span<const double> h);

/// Even extrapolation of a profile to r = 0.
double value_at_origin(const RadialFunction& u);

/// du/dr at the nodes (sixth-order stencil in the index coordinate).
std::vector<double> radial_derivative(const RadialFunction& u);
/// Strong-form Laplacian u'' + 2u'/r at the nodes.
std::vector<double> radial_laplacian(const RadialFunction& u);

/// Monotone cubic interpolation of u at an arbitrary radius; 0 beyond R.
class Interpolant {
 public:
  explicit Interpolant(const RadialFunction& u);
  double operator()(double radius) const;

 private:
  const RadialGrid* grid_;
  std::vector<double> val_;  // index 0 is the origin
  std::vector<double> der_;  // d/ds, limited
};

/// phi(r) = (4 pi / r) \int_0^r s^2 u^2 ds + 4 pi \int_r^R s u^2 ds.
RadialFunction poisson_potential(const RadialFunction& u);
/// Same kernel for an arbitrary radial density rho (sampled at the nodes).
std::vector<double> newton_potential(const RadialGrid& g, std::span<const double> rho);

/// u^t(r) = t^{3/2} u(t r). Throws std::invalid_argument for t <= 0.
RadialFunction rescale_fiber(const RadialFunction& u, double t);
/// General dilation amp * u(t r), zero beyond R.
RadialFunction dilate(const RadialFunction& u, double t, double amp);
/// amp * u(t r) sampled on another grid; used to move profiles between domains.
RadialFunction dilate(const RadialFunction& u, GridPtr target, double t, double amp);

}  // namespace sps
