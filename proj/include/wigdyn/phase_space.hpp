#ifndef WIGDYN_PHASE_SPACE_HPP
#define WIGDYN_PHASE_SPACE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

#include "wigdyn/errors.hpp"
#include "wigdyn/numeric.hpp"

namespace wigdyn {

// Grid values are stored row-major: row i is the x_i slice, contiguous in p.
using GridArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct GridSpec {
  double x_min = -12.0;
  double x_max = 12.0;
  double p_min = -12.0;
  double p_max = 12.0;
  int nx = 1024;
  int np = 1024;

  void validate() const;  // throws std::invalid_argument
  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
  Eigen::VectorXd x_nodes() const { return linspace(x_min, x_max, nx); }
  Eigen::VectorXd p_nodes() const { return linspace(p_min, p_max, np); }
  bool symmetric() const;
};

/// ±half_width in both axes, n nodes per axis.
GridSpec square_window(double half_width, int n);

/// Like square_window but forces odd node counts so x=0 and p=0 are exact
/// grid lines (n is bumped by one when even).
GridSpec centered_window(double half_width, int n);

/// Immutable sampled Wigner function. The trapezoid integral is computed
/// once at construction.
class WignerGrid {
 public:
  WignerGrid(GridSpec spec, GridArray values, std::string convention_tag);

  const GridSpec& spec() const { return spec_; }
  const GridArray& values() const { return values_; }
  const std::string& convention_tag() const { return convention_tag_; }
  double integral() const { return integral_; }

 private:
  GridSpec spec_;
  GridArray values_;
  std::string convention_tag_;
  double integral_ = 0.0;
};

struct Marginal {
  Eigen::VectorXd axis_values;
  Eigen::VectorXd density;
  std::string label;
};

namespace detail {
double trapezoid_mass(const GridSpec& spec, const GridArray& values);
}

/// values[i][j] = f(x_i, p_j). Throws NumericError(NonFiniteValue) if the
/// evaluator produces NaN/Inf anywhere on the window.
template <class F>
WignerGrid rasterize(F&& f, const GridSpec& spec, std::string convention_tag = {}) {
  spec.validate();
  const Eigen::VectorXd xs = spec.x_nodes();
  const Eigen::VectorXd ps = spec.p_nodes();
  GridArray values(spec.nx, spec.np);
  for (int i = 0; i < spec.nx; ++i) {
    double* row = values.row(i).data();
    for (int j = 0; j < spec.np; ++j) {
      const double w = f(xs[i], ps[j]);
      if (!std::isfinite(w)) {
        throw NumericError(NumericErrorKind::NonFiniteValue,
                           "rasterize: evaluator returned a non-finite value at (x=" +
                               std::to_string(xs[i]) + ", p=" + std::to_string(ps[j]) + ")");
      }
      row[j] = w;
    }
  }
  return WignerGrid(spec, std::move(values), std::move(convention_tag));
}

/// Trapezoid value of ∬ weight(x,p)·W(x,p) dx dp, pairwise-summed per axis.
template <class F>
double integrate_2d(const WignerGrid& g, F&& weight) {
  const GridSpec& spec = g.spec();
  const Eigen::VectorXd xs = spec.x_nodes();
  const Eigen::VectorXd ps = spec.p_nodes();
  const Eigen::VectorXd wx = trapezoid_weights(spec.nx, spec.dx());
  const Eigen::VectorXd wp = trapezoid_weights(spec.np, spec.dp());
  Eigen::VectorXd inner(spec.np);
  Eigen::VectorXd outer(spec.nx);
  for (int i = 0; i < spec.nx; ++i) {
    const double* row = g.values().row(i).data();
    for (int j = 0; j < spec.np; ++j) inner[j] = wp[j] * weight(xs[i], ps[j]) * row[j];
    outer[i] = wx[i] * pairwise_sum(inner);
  }
  return pairwise_sum(outer);
}

/// π₀ profile: integrates over p, returning the position density.
Marginal marginal_along_p(const WignerGrid& g);

/// Integrates over x, returning the momentum density.
Marginal marginal_along_x(const WignerGrid& g);

/// Density of the rotated quadrature x_θ = x·cosθ + p·sinθ: for each
/// quadrature node q, a trapezoid line integral of W along
/// {x = q·cosθ − u·sinθ, p = q·sinθ + u·cosθ}, bilinear off-lattice and zero
/// outside the window. Throws NumericError(WindowTooSmall) when the boundary
/// density exceeds 1e−10 of the grid peak.
Marginal rotated_marginal(const WignerGrid& g, double theta);

/// Bilinear interpolation of the grid; zero outside the window.
double value_at(const WignerGrid& g, double x, double p);

/// True when the largest |W| on the window boundary is at most rel_tol of
/// the overall peak |W| (both zero counts as contained).
bool window_contains_state(const WignerGrid& g, double rel_tol = 1e-10);

}  // namespace wigdyn

#endif
