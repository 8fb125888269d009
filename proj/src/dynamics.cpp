#include "wigdyn/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wigdyn {

void EvolutionSpec::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw std::invalid_argument("evolution requires mass > 0");
  }
  if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
}

namespace detail {

double row_moment(const WignerGrid& g, int row, int order_n) {
  const GridSpec& spec = g.spec();
  const Eigen::VectorXd ps = spec.p_nodes();
  const Eigen::VectorXd wp = trapezoid_weights(spec.np, spec.dp());
  const double* v = g.values().row(row).data();
  Eigen::VectorXd terms(spec.np);
  for (int j = 0; j < spec.np; ++j) {
    double pn = 1.0;
    for (int k = 0; k < order_n; ++k) pn *= ps[j];
    terms[j] = wp[j] * pn * v[j];
  }
  return pairwise_sum(terms);
}

GridSpec force_center_line(GridSpec spec) {
  spec.validate();
  if (!spec.symmetric()) {
    throw std::invalid_argument("the x=0 diagnostic requires a symmetric grid window");
  }
  if (spec.nx % 2 == 0) ++spec.nx;
  return spec;
}

}  // namespace detail

MomentProfile moment_profile(const WignerGrid& g, int order_n, double t) {
  if (order_n < 0 || order_n > 4) {
    throw std::invalid_argument("moment_profile: order must be in {0,...,4}");
  }
  MomentProfile profile;
  profile.x_values = g.spec().x_nodes();
  profile.pi_values.resize(g.spec().nx);
  for (int i = 0; i < g.spec().nx; ++i) {
    profile.pi_values[i] = detail::row_moment(g, i, order_n);
  }
  profile.order_n = order_n;
  profile.t = t;
  profile.convention_tag = g.convention_tag();
  return profile;
}

namespace {

// pi_n at an arbitrary x: exact row when x sits on the lattice, linear
// interpolation between the bracketing rows otherwise.
double moment_at(const WignerGrid& g, double x, int order_n) {
  const GridSpec& spec = g.spec();
  if (x < spec.x_min || x > spec.x_max) {
    throw std::invalid_argument("conditional moment requested outside the grid window");
  }
  const double fx = (x - spec.x_min) / spec.dx();
  int i0 = std::min(static_cast<int>(fx), spec.nx - 2);
  const double a = fx - i0;
  if (a < 1e-9) return detail::row_moment(g, i0, order_n);
  if (a > 1.0 - 1e-9) return detail::row_moment(g, i0 + 1, order_n);
  return (1.0 - a) * detail::row_moment(g, i0, order_n) +
         a * detail::row_moment(g, i0 + 1, order_n);
}

}  // namespace

double conditional_kinetic_energy(const WignerGrid& g, double x, double mass, double pi0_floor) {
  if (!(mass > 0.0)) throw std::invalid_argument("conditional_kinetic_energy: mass must be > 0");
  const double pi0 = moment_at(g, x, 0);
  if (std::abs(pi0) < pi0_floor) {
    throw NumericError(NumericErrorKind::IllConditionedConditional,
                       "conditional kinetic energy undefined: |pi_0(x)| below floor at x=" +
                           std::to_string(x));
  }
  const double pi2 = moment_at(g, x, 2);
  return pi2 / (2.0 * mass * pi0);
}

double pi2_origin_analytic(double t, double x0) {
  const double t2 = t * t;
  const double a = 1.0 + t2;
  return std::exp(-x0 * x0 / a) * (1.0 - x0 * x0 + t2 + x0 * x0 * t2) /
         (a * a * std::sqrt(a) * std::sqrt(std::numbers::pi));
}

std::optional<double> negativity_window(double x0) {
  if (!(x0 >= 0.0)) throw std::invalid_argument("negativity_window: x0 must be >= 0");
  if (x0 <= 1.0) return std::nullopt;
  return std::sqrt((x0 * x0 - 1.0) / (x0 * x0 + 1.0));
}

ClassicalityReport classicality_check(const AbsDevCurve& curve, double tol_neg) {
  ClassicalityReport report;
  report.tol_neg = tol_neg;
  for (Eigen::Index k = 0; k < curve.t_values.size(); ++k) {
    if (curve.d2[k] < -tol_neg) report.violating_times.push_back(curve.t_values[k]);
  }
  return report;
}

}  // namespace wigdyn
