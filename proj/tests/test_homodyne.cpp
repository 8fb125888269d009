#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "wigdyn/dynamics.hpp"
#include "wigdyn/homodyne.hpp"
#include "wigdyn/io.hpp"
#include "wigdyn/states.hpp"

using namespace wigdyn;

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;

WignerGrid cat_grid(int n = 1025, Convention conv = Convention::PaperScaled) {
  const CatStateParams s{kSqrt2, 0.0, conv};
  return rasterize(cat_evaluator(s), centered_window(12.0, n),
                   std::string(convention_name(conv)));
}

WignerGrid coherent_origin_grid(int n = 1025) {
  return rasterize(coherent_evaluator({0.0, 0.0}), centered_window(12.0, n), "coherent");
}

Eigen::VectorXd tau_grid(double h) {
  Eigen::VectorXd taus(3);
  taus << -h, 0.0, h;
  return taus;
}
}  // namespace

TEST_CASE("quadrature angle: tau relation and validation") {
  CHECK(QuadratureAngle{0.0}.tau() == 0.0);
  CHECK(QuadratureAngle::from_tau(0.2).theta == doctest::Approx(std::atan(0.2)).epsilon(1e-15));
  CHECK(QuadratureAngle::from_tau(-3.0).tau() == doctest::Approx(-3.0).epsilon(1e-14));
  const QuadratureAngle too_steep{std::numbers::pi / 2};
  CHECK_THROWS_AS(too_steep.validate(), std::invalid_argument);
}

TEST_CASE("sampling is deterministic given (seed, stream)") {
  const WignerGrid g = cat_grid(513);
  const Eigen::VectorXd a = sample_quadrature(g, QuadratureAngle{0.3}, 5000, 42, 1);
  const Eigen::VectorXd b = sample_quadrature(g, QuadratureAngle{0.3}, 5000, 42, 1);
  CHECK(a.size() == b.size());
  CHECK((a.array() == b.array()).all());
  // different stream index decorrelates
  const Eigen::VectorXd c = sample_quadrature(g, QuadratureAngle{0.3}, 5000, 42, 2);
  CHECK(!(a.array() == c.array()).all());
}

TEST_CASE("coherent samples at theta=0 have the Gaussian moments") {
  const WignerGrid g = coherent_origin_grid(513);
  const std::int64_t n = 200'000;
  const Eigen::VectorXd s = sample_quadrature(g, QuadratureAngle{0.0}, n, 7);
  const double mean = s.mean();
  const double var = (s.array() - mean).square().sum() / static_cast<double>(n - 1);
  const double se_mean = std::sqrt(0.5 / static_cast<double>(n));
  const double se_var = 0.5 * std::sqrt(2.0 / static_cast<double>(n));
  CHECK(std::abs(mean - 0.0) <= 4.0 * se_mean);
  CHECK(std::abs(var - 0.5) <= 4.0 * se_var);
}

TEST_CASE("cat samples at theta=0 are bimodal around +-x0") {
  const WignerGrid g = cat_grid(513);
  const std::int64_t n = 50'000;
  const Eigen::VectorXd s = sample_quadrature(g, QuadratureAngle{0.0}, n, 11);
  const double lo_frac =
      ((s.array() > -2.4) && (s.array() < -0.5)).cast<double>().sum() / static_cast<double>(n);
  const double hi_frac =
      ((s.array() > 0.5) && (s.array() < 2.4)).cast<double>().sum() / static_cast<double>(n);
  const double mid_frac = (s.array().abs() < 0.5).cast<double>().sum() / static_cast<double>(n);
  CHECK(lo_frac > 0.35);
  CHECK(hi_frac > 0.35);
  CHECK(mid_frac < 0.2);
}

TEST_CASE("estimate_abs_chi: half-normal mean at theta=0") {
  const WignerGrid g = coherent_origin_grid(513);
  const Eigen::VectorXd s = sample_quadrature(g, QuadratureAngle{0.0}, 200'000, 3);
  const MeanStdErr r = estimate_abs_chi(s, QuadratureAngle{0.0});
  CHECK(std::abs(r.mean - 0.5641895835477563) <= 4.0 * r.std_error);
  CHECK(r.std_error > 0.0);
}

TEST_CASE("estimate_abs_chi: theta=0 equals the plain |sample| mean, zeros give (0,0)") {
  Eigen::VectorXd s(4);
  s << 1.0, -2.0, 0.5, -0.5;
  const MeanStdErr r = estimate_abs_chi(s, QuadratureAngle{0.0});
  CHECK(r.mean == doctest::Approx(1.0).epsilon(1e-15));
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(16);
  const MeanStdErr z = estimate_abs_chi(zeros, QuadratureAngle{0.0});
  CHECK(z.mean == 0.0);
  CHECK(z.std_error == 0.0);
}

TEST_CASE("substitution identity: quadrature matches the scaled sample mean") {
  // <|chi_tau|> as a W-weighted integral versus the Monte Carlo estimate
  for (bool use_cat : {false, true}) {
    const WignerGrid g = use_cat ? cat_grid(1025) : coherent_origin_grid(1025);
    const std::int64_t n = 100'000;
    int stream = 0;
    for (double tau : {-0.2, 0.0, 0.2}) {
      const QuadratureAngle angle = QuadratureAngle::from_tau(tau);
      const Eigen::VectorXd s = sample_quadrature(g, angle, n, 5, stream++);
      const MeanStdErr r = estimate_abs_chi(s, angle);
      const double mc = g.integral() * r.mean;
      const double se = g.integral() * r.std_error;
      const double direct =
          integrate_2d(g, [tau](double x, double p) { return std::abs(x + p * tau); });
      CHECK(std::abs(mc - direct) <= 4.0 * se);
    }
  }
}

TEST_CASE("curvature identity: second difference of the quadrature matches 2 int p^2 W(0,p)") {
  const double h = 0.05;
  for (bool use_cat : {false, true}) {
    const WignerGrid g = use_cat ? cat_grid(1025) : coherent_origin_grid(1025);
    const double fm = abs_chi_quadrature(g, -h);
    const double f0 = abs_chi_quadrature(g, 0.0);
    const double fp = abs_chi_quadrature(g, h);
    const double fd2 = (fm - 2.0 * f0 + fp) / (h * h);
    CHECK(std::abs(fd2 - curvature_quadrature(g)) <= 1e-3);
  }
}

TEST_CASE("witness: cat state is flagged, coherent state is classical") {
  WitnessConfig cfg;
  cfg.samples_per_angle = 1'000'000;
  cfg.seed = 19;
  cfg.bootstrap_resamples = 1'000;
  const CurvatureEstimate cat_est = curvature_witness(cat_grid(1025), tau_grid(0.2), cfg);
  CHECK(cat_est.verdict == Verdict::NegativityWitnessed);
  CHECK(cat_est.ci_high < 0.0);
  const double comb_se = std::sqrt(std::pow(cat_est.abs_chi_std_errors[0], 2) +
                                   4.0 * std::pow(cat_est.abs_chi_std_errors[1], 2) +
                                   std::pow(cat_est.abs_chi_std_errors[2], 2)) /
                         0.04;
  CHECK(std::abs(cat_est.curvature_at_zero - (-0.15270951417716433)) <= 3.0 * comb_se);

  WitnessConfig coh_cfg;
  coh_cfg.samples_per_angle = 50'000;
  coh_cfg.seed = 42;
  coh_cfg.bootstrap_resamples = 1'000;
  const CurvatureEstimate coh_est =
      curvature_witness(coherent_origin_grid(513), tau_grid(0.2), coh_cfg);
  CHECK(coh_est.verdict == Verdict::ClassicalConsistent);
  CHECK(coh_est.ci_low > 0.0);
  // true curvature 2 int p^2 W(0,p) dp = 1/sqrt(pi) for the vacuum state
  const double coh_comb = std::sqrt(std::pow(coh_est.abs_chi_std_errors[0], 2) +
                                    4.0 * std::pow(coh_est.abs_chi_std_errors[1], 2) +
                                    std::pow(coh_est.abs_chi_std_errors[2], 2)) /
                          0.04;
  CHECK(std::abs(coh_est.curvature_at_zero - 0.5641895835477563) <= 3.0 * coh_comb + 5e-3);
}

TEST_CASE("witness: tiny sample counts are inconclusive, not witnessed") {
  WitnessConfig cfg;
  cfg.samples_per_angle = 10;
  cfg.seed = 3;
  cfg.bootstrap_resamples = 500;
  const CurvatureEstimate est = curvature_witness(cat_grid(257), tau_grid(0.2), cfg);
  CHECK(est.verdict == Verdict::Inconclusive);
  CHECK(est.ci_low <= est.curvature_at_zero);
  CHECK(est.ci_high >= est.curvature_at_zero);
}

TEST_CASE("witness soundness: coherent runs never report negativity across seeds") {
  const WignerGrid g = coherent_origin_grid(257);
  WitnessConfig cfg;
  cfg.samples_per_angle = 5'000;
  cfg.bootstrap_resamples = 500;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const CurvatureEstimate est = curvature_witness(g, tau_grid(0.2), cfg);
    CHECK(est.verdict != Verdict::NegativityWitnessed);
  }
}

TEST_CASE("witness is deterministic and serializes byte-identically") {
  WitnessConfig cfg;
  cfg.samples_per_angle = 5'000;
  cfg.seed = 99;
  cfg.bootstrap_resamples = 500;
  const WignerGrid g = cat_grid(257);
  HomodyneRun run_a;
  HomodyneRun run_b;
  const CurvatureEstimate a = curvature_witness(g, tau_grid(0.2), cfg, &run_a);
  const CurvatureEstimate b = curvature_witness(g, tau_grid(0.2), cfg, &run_b);
  CHECK(a.curvature_at_zero == b.curvature_at_zero);
  CHECK(a.ci_low == b.ci_low);
  CHECK(a.ci_high == b.ci_high);
  CHECK((a.abs_chi_means.array() == b.abs_chi_means.array()).all());
  for (std::size_t k = 0; k < run_a.samples.size(); ++k) {
    CHECK((run_a.samples[k].array() == run_b.samples[k].array()).all());
  }
  const io::StateDescription state{"cat", kSqrt2, 0.0, "paper"};
  const std::string ja =
      io::homodyne_record_json(state, g.spec(), a, cfg.samples_per_angle, cfg.seed, cfg.confidence);
  const std::string jb =
      io::homodyne_record_json(state, g.spec(), b, cfg.samples_per_angle, cfg.seed, cfg.confidence);
  CHECK(ja == jb);
}

TEST_CASE("witness rejects malformed tau grids") {
  const WignerGrid g = coherent_origin_grid(257);
  WitnessConfig cfg;
  cfg.samples_per_angle = 100;
  Eigen::VectorXd no_zero(3);
  no_zero << 0.1, 0.2, 0.3;
  CHECK_THROWS_AS(curvature_witness(g, no_zero, cfg), std::invalid_argument);
  Eigen::VectorXd asym(3);
  asym << -0.1, 0.0, 0.2;
  CHECK_THROWS_AS(curvature_witness(g, asym, cfg), std::invalid_argument);
  Eigen::VectorXd lone(1);
  lone << 0.0;
  CHECK_THROWS_AS(curvature_witness(g, lone, cfg), std::invalid_argument);
}

TEST_CASE("witness flags tau offsets below numerical resolution") {
  const WignerGrid g = coherent_origin_grid(257);
  WitnessConfig cfg;
  cfg.samples_per_angle = 1'000;
  cfg.bootstrap_resamples = 100;
  CHECK_THROWS_AS(curvature_witness(g, tau_grid(1e-9), cfg), NumericError);
  try {
    curvature_witness(g, tau_grid(1e-9), cfg);
  } catch (const NumericError& e) {
    CHECK(e.kind() == NumericErrorKind::DegenerateTauGrid);
  }
}

TEST_CASE("sampler rejects marginals with real negative mass") {
  // synthetic quasidistribution whose x-profile goes genuinely negative
  auto synthetic = [](double x, double p) {
    const double dx = x - 2.0;
    return std::exp(-p * p) * (std::exp(-x * x) - 0.5 * std::exp(-dx * dx)) / std::numbers::pi;
  };
  const WignerGrid g = rasterize(synthetic, centered_window(10.0, 257), "synthetic");
  CHECK(g.integral() > 0.0);
  CHECK_THROWS_AS(sample_quadrature(g, QuadratureAngle{0.0}, 100, 1), NumericError);
  try {
    sample_quadrature(g, QuadratureAngle{0.0}, 100, 1);
  } catch (const NumericError& e) {
    CHECK(e.kind() == NumericErrorKind::NonpositiveMarginal);
  }
}

TEST_CASE("sampler preconditions") {
  const WignerGrid zeros =
      rasterize([](double, double) { return 0.0; }, centered_window(4.0, 33));
  CHECK_THROWS_AS(sample_quadrature(zeros, QuadratureAngle{0.0}, 10, 1), std::invalid_argument);
  const WignerGrid g = coherent_origin_grid(257);
  CHECK_THROWS_AS(sample_quadrature(g, QuadratureAngle{0.0}, 0, 1), std::invalid_argument);
}

TEST_CASE("simulate_homodyne records angles, counts, and per-angle streams") {
  const WignerGrid g = cat_grid(257);
  const std::vector<QuadratureAngle> angles = {QuadratureAngle::from_tau(-0.2),
                                               QuadratureAngle{0.0},
                                               QuadratureAngle::from_tau(0.2)};
  const HomodyneRun run = simulate_homodyne(g, angles, 1'000, 5);
  CHECK(run.samples.size() == 3);
  CHECK(run.samples_per_angle == 1'000);
  CHECK(run.seed == 5);
  for (const auto& s : run.samples) CHECK(s.size() == 1'000);
  // matches direct per-stream sampling
  const Eigen::VectorXd direct = sample_quadrature(g, angles[1], 1'000, 5, 1);
  CHECK((run.samples[1].array() == direct.array()).all());
}
