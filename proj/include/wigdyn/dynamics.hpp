#ifndef WIGDYN_DYNAMICS_HPP
#define WIGDYN_DYNAMICS_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wigdyn/phase_space.hpp"

namespace wigdyn {

struct EvolutionSpec {
  double mass = 1.0;
  double t = 0.0;
  void validate() const;  // mass > 0, t finite
};

/// Free evolution as evaluator composition: the returned callable is
/// (x,p) ↦ f(x − p·t/mass, p). Exact shear, no lattice interpolation;
/// evolved grids are produced by rasterizing this.
template <class F>
auto evolve_free(F f, EvolutionSpec ev) {
  ev.validate();
  const double shear = ev.t / ev.mass;
  return [f = std::move(f), shear](double x, double p) { return f(x - p * shear, p); };
}

struct MomentProfile {
  Eigen::VectorXd x_values;
  Eigen::VectorXd pi_values;
  int order_n = 0;
  double t = 0.0;
  std::string convention_tag;
};

/// π_n(x_i) = ∫ pⁿ W(x_i, p) dp for every grid column; n in {0,...,4}.
/// t is carried as metadata only.
MomentProfile moment_profile(const WignerGrid& g, int order_n, double t = 0.0);

/// π₂(x)/(2·mass·π₀(x)), both moments read from the grid (linear
/// interpolation between columns off-lattice). Throws
/// NumericError(IllConditionedConditional) when |π₀(x)| < pi0_floor.
double conditional_kinetic_energy(const WignerGrid& g, double x, double mass = 1.0,
                                  double pi0_floor = 1e-12);

/// Closed-form π₂(0;t) for the even cat with p0 = 0, PaperScaled:
/// (1/√π)·exp(−x0²/(1+t²))·(1 − x0² + t² + x0²t²)/(1+t²)^{5/2}.
double pi2_origin_analytic(double t, double x0);

/// Largest t* with π₂(0;t) < 0 for t < t*: sqrt((x0²−1)/(x0²+1)) when
/// x0 > 1, empty otherwise. p0 = 0 model.
std::optional<double> negativity_window(double x0);

struct AbsDevCurve {
  Eigen::VectorXd t_values;
  Eigen::VectorXd absdev;  // ⟨|x|⟩(t)
  Eigen::VectorXd d1;      // (1/m)·∬ p·sign(x)·W
  Eigen::VectorXd d2;      // (2/m²)·∫ p²·W(0,p;t) dp
  double mass = 1.0;
  std::string convention_tag;
};

namespace detail {
/// ∫ pⁿ W(x_i, p) dp along one grid row.
double row_moment(const WignerGrid& g, int row, int order_n);
/// Symmetric window with x=0 on the lattice (nx bumped to odd if needed).
GridSpec force_center_line(GridSpec spec);
inline double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
}  // namespace detail

/// ⟨|x|⟩ and both time derivatives per t, all from the same evolved grid.
/// The window must be symmetric; nx is forced odd so x=0 is a grid line.
/// Throws NumericError(WindowTooSmall) when the evolved state reaches the
/// boundary.
template <class F>
AbsDevCurve absdev_curve(F&& f, const Eigen::VectorXd& t_values, double mass,
                         const GridSpec& spec, std::string convention_tag = {}) {
  const GridSpec cspec = detail::force_center_line(spec);
  const int center_row = (cspec.nx - 1) / 2;
  AbsDevCurve curve;
  curve.t_values = t_values;
  curve.absdev.resize(t_values.size());
  curve.d1.resize(t_values.size());
  curve.d2.resize(t_values.size());
  curve.mass = mass;
  curve.convention_tag = convention_tag;
  for (Eigen::Index k = 0; k < t_values.size(); ++k) {
    const WignerGrid g =
        rasterize(evolve_free(f, EvolutionSpec{mass, t_values[k]}), cspec, convention_tag);
    // Looser containment than the marginal machinery: boundary density at
    // 1e-8 of peak keeps the |x| and p*sign(x) integrals good to ~1e-7.
    if (!window_contains_state(g, 1e-8)) {
      throw NumericError(NumericErrorKind::WindowTooSmall,
                         "absdev_curve: evolved state reaches the grid boundary at t=" +
                             std::to_string(t_values[k]));
    }
    curve.absdev[k] = integrate_2d(g, [](double x, double) { return std::abs(x); });
    curve.d1[k] =
        integrate_2d(g, [](double x, double p) { return p * detail::sign0(x); }) / mass;
    curve.d2[k] = 2.0 / (mass * mass) * detail::row_moment(g, center_row, 2);
  }
  return curve;
}

struct ClassicalityReport {
  std::vector<double> violating_times;  // t where d2 < -tol_neg
  double tol_neg = 1e-6;
  bool consistent() const { return violating_times.empty(); }
};

/// Flags every t where the curvature bound d²⟨|x|⟩/dt² ≥ 0 is violated
/// beyond tol_neg.
ClassicalityReport classicality_check(const AbsDevCurve& curve, double tol_neg = 1e-6);

}  // namespace wigdyn

#endif
