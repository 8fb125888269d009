#include "wigdyn/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wigdyn {

void GridSpec::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(p_min) ||
      !std::isfinite(p_max)) {
    throw std::invalid_argument("grid bounds must be finite");
  }
  if (!(x_min < x_max)) throw std::invalid_argument("grid requires x_min < x_max");
  if (!(p_min < p_max)) throw std::invalid_argument("grid requires p_min < p_max");
  if (nx < 8 || np < 8) throw std::invalid_argument("grid requires nx, np >= 8");
}

bool GridSpec::symmetric() const {
  const double sx = (x_max - x_min) * 1e-12;
  const double sp = (p_max - p_min) * 1e-12;
  return std::abs(x_min + x_max) <= sx && std::abs(p_min + p_max) <= sp;
}

GridSpec square_window(double half_width, int n) {
  return GridSpec{-half_width, half_width, -half_width, half_width, n, n};
}

GridSpec centered_window(double half_width, int n) {
  if (n % 2 == 0) ++n;
  return square_window(half_width, n);
}

namespace detail {

double trapezoid_mass(const GridSpec& spec, const GridArray& values) {
  const Eigen::VectorXd wx = trapezoid_weights(spec.nx, spec.dx());
  const Eigen::VectorXd wp = trapezoid_weights(spec.np, spec.dp());
  Eigen::VectorXd inner(spec.np);
  Eigen::VectorXd outer(spec.nx);
  for (int i = 0; i < spec.nx; ++i) {
    const double* row = values.row(i).data();
    for (int j = 0; j < spec.np; ++j) inner[j] = wp[j] * row[j];
    outer[i] = wx[i] * pairwise_sum(inner);
  }
  return pairwise_sum(outer);
}

}  // namespace detail

WignerGrid::WignerGrid(GridSpec spec, GridArray values, std::string convention_tag)
    : spec_(spec), values_(std::move(values)), convention_tag_(std::move(convention_tag)) {
  spec_.validate();
  if (values_.rows() != spec_.nx || values_.cols() != spec_.np) {
    throw std::invalid_argument("WignerGrid: value array does not match the grid spec");
  }
  if (!values_.allFinite()) {
    throw NumericError(NumericErrorKind::NonFiniteValue,
                       "WignerGrid: non-finite value in grid data");
  }
  integral_ = detail::trapezoid_mass(spec_, values_);
}

Marginal marginal_along_p(const WignerGrid& g) {
  const GridSpec& spec = g.spec();
  const Eigen::VectorXd wp = trapezoid_weights(spec.np, spec.dp());
  Marginal m;
  m.axis_values = spec.x_nodes();
  m.density.resize(spec.nx);
  Eigen::VectorXd inner(spec.np);
  for (int i = 0; i < spec.nx; ++i) {
    const double* row = g.values().row(i).data();
    for (int j = 0; j < spec.np; ++j) inner[j] = wp[j] * row[j];
    m.density[i] = pairwise_sum(inner);
  }
  m.label = "x";
  return m;
}

Marginal marginal_along_x(const WignerGrid& g) {
  const GridSpec& spec = g.spec();
  const Eigen::VectorXd wx = trapezoid_weights(spec.nx, spec.dx());
  Marginal m;
  m.axis_values = spec.p_nodes();
  m.density.resize(spec.np);
  Eigen::VectorXd inner(spec.nx);
  for (int j = 0; j < spec.np; ++j) {
    for (int i = 0; i < spec.nx; ++i) inner[i] = wx[i] * g.values()(i, j);
    m.density[j] = pairwise_sum(inner);
  }
  m.label = "p";
  return m;
}

double value_at(const WignerGrid& g, double x, double p) {
  const GridSpec& spec = g.spec();
  if (x < spec.x_min || x > spec.x_max || p < spec.p_min || p > spec.p_max) return 0.0;
  const double fx = (x - spec.x_min) / spec.dx();
  const double fp = (p - spec.p_min) / spec.dp();
  int i0 = std::min(static_cast<int>(fx), spec.nx - 2);
  int j0 = std::min(static_cast<int>(fp), spec.np - 2);
  const double ax = fx - i0;
  const double ap = fp - j0;
  const auto& v = g.values();
  return v(i0, j0) * (1.0 - ax) * (1.0 - ap) + v(i0 + 1, j0) * ax * (1.0 - ap) +
         v(i0, j0 + 1) * (1.0 - ax) * ap + v(i0 + 1, j0 + 1) * ax * ap;
}

bool window_contains_state(const WignerGrid& g, double rel_tol) {
  const auto& v = g.values();
  const double peak = v.abs().maxCoeff();
  double boundary = v.row(0).abs().maxCoeff();
  boundary = std::max(boundary, v.row(v.rows() - 1).abs().maxCoeff());
  boundary = std::max(boundary, v.col(0).abs().maxCoeff());
  boundary = std::max(boundary, v.col(v.cols() - 1).abs().maxCoeff());
  return boundary <= rel_tol * peak;
}

Marginal rotated_marginal(const WignerGrid& g, double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rotated_marginal: theta must be finite");
  if (!window_contains_state(g)) {
    throw NumericError(NumericErrorKind::WindowTooSmall,
                       "rotated_marginal: boundary density exceeds 1e-10 of the grid peak");
  }
  const GridSpec& spec = g.spec();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double du = spec.dp();
  // u lattice: the p lattice extended so the rotated line spans the window
  // diagonal; extension nodes stay on the same affine lattice, so axis-aligned
  // angles reduce to exact node lookups.
  const double x_reach = std::max(std::abs(spec.x_min), std::abs(spec.x_max));
  const double p_reach = std::max(std::abs(spec.p_min), std::abs(spec.p_max));
  const double reach = std::hypot(x_reach, p_reach);
  const int extend = std::max(0, static_cast<int>(std::ceil((reach - p_reach) / du)) + 1);
  const int nu = spec.np + 2 * extend;
  const Eigen::VectorXd wu = trapezoid_weights(nu, du);
  const Eigen::VectorXd qs = spec.x_nodes();

  Marginal m;
  m.axis_values = qs;
  m.density.resize(spec.nx);
  Eigen::VectorXd inner(nu);
  for (int i = 0; i < spec.nx; ++i) {
    const double q = qs[i];
    for (int k = 0; k < nu; ++k) {
      const double u = spec.p_min + (k - extend) * du;
      inner[k] = wu[k] * value_at(g, q * c - u * s, q * s + u * c);
    }
    m.density[i] = pairwise_sum(inner);
  }
  m.label = "x_theta";
  return m;
}

}  // namespace wigdyn
