#include "wigdyn/cli_app.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wigdyn/dynamics.hpp"
#include "wigdyn/homodyne.hpp"
#include "wigdyn/io.hpp"
#include "wigdyn/phase_space.hpp"
#include "wigdyn/states.hpp"

namespace wigdyn::cli {

namespace {

struct StateOptions {
  std::string state = "cat";
  double x0 = std::numbers::sqrt2;
  double p0 = 0.0;
  double mass = 1.0;
  std::string convention = "paper";
  int grid_n = 1024;
  double grid_window = 12.0;
  std::uint64_t seed = 19;
  std::string out;
  std::string format = "csv";
};

void add_common_options(CLI::App* cmd, StateOptions& o) {
  cmd->add_option("--state", o.state, "state to build: cat or coherent")
      ->check(CLI::IsMember({"cat", "coherent"}))
      ->capture_default_str();
  cmd->add_option("--x0", o.x0, "position displacement")->capture_default_str();
  cmd->add_option("--p0", o.p0, "momentum displacement")->capture_default_str();
  cmd->add_option("--mass", o.mass, "particle mass (hbar = 1 units)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--convention", o.convention,
                  "cat-state scaling: as-printed, paper, or unit-norm")
      ->check(CLI::IsMember({"as-printed", "paper", "unit-norm"}))
      ->capture_default_str();
  cmd->add_option("--grid-n", o.grid_n, "nodes per grid axis")
      ->check(CLI::Range(8, 1 << 15))
      ->capture_default_str();
  cmd->add_option("--grid-window", o.grid_window, "grid half-width (window is +-this)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "random seed for sampling subcommands")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "output path (default <subcommand>.<format>)");
  cmd->add_option("--format", o.format, "primary output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

std::function<double(double, double)> make_evaluator(const StateOptions& o) {
  if (o.state == "coherent") {
    CoherentStateParams s{o.x0, o.p0};
    validate(s);
    return coherent_evaluator(s);
  }
  CatStateParams s{o.x0, o.p0, parse_convention(o.convention)};
  validate(s);
  return cat_evaluator(s);
}

io::StateDescription describe(const StateOptions& o) {
  return io::StateDescription{o.state, o.x0, o.p0, o.convention};
}

std::filesystem::path output_path(const StateOptions& o, const std::string& stem) {
  if (!o.out.empty()) return o.out;
  return stem + (o.format == "json" ? ".json" : ".csv");
}

nlohmann::ordered_json values_json(const WignerGrid& g) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 0; i < g.spec().nx; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 0; j < g.spec().np; ++j) row.push_back(g.values()(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void cmd_wigner(const StateOptions& o) {
  // centered so the x=0 line (where cat negativity concentrates) is on the
  // lattice; node count bumps to odd when needed
  const GridSpec spec = centered_window(o.grid_window, o.grid_n);
  spec.validate();
  const WignerGrid grid = rasterize(make_evaluator(o), spec, std::string(o.convention));
  const std::filesystem::path path = output_path(o, "wigner");
  if (o.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(io::wigner_sidecar_json(grid, describe(o)));
    j["values"] = values_json(grid);
    io::write_text(path, j.dump(2) + "\n");
  } else {
    io::write_grid_csv(path, grid);
    io::write_text(path.string() + ".json", io::wigner_sidecar_json(grid, describe(o)));
  }
  std::cout << "wrote " << path.string() << "\n";
}

struct TimeGridOptions {
  double t_min = 0.0;
  double t_max = 3.0;
  int t_count = 61;
};

void add_time_options(CLI::App* cmd, TimeGridOptions& t) {
  cmd->add_option("--t-min", t.t_min, "first evolution time")->capture_default_str();
  cmd->add_option("--t-max", t.t_max, "last evolution time")->capture_default_str();
  cmd->add_option("--t-count", t.t_count, "number of time samples")
      ->check(CLI::Range(1, 1 << 20))
      ->capture_default_str();
}

Eigen::VectorXd time_nodes(const TimeGridOptions& t) {
  if (!(t.t_min <= t.t_max)) throw std::invalid_argument("time grid requires t-min <= t-max");
  return linspace(t.t_min, t.t_max, t.t_count);
}

// Grid moment pi_2 at the x=0 line of the evolved state; window widens past
// far_t_threshold so spread states stay resolved.
constexpr double kFarTThreshold = 1.5;
constexpr double kFarHalfWidthFloor = 16.0;

double pi2_numeric_at(const std::function<double(double, double)>& f, double t, double mass,
                      double base_half, int grid_n, const std::string& tag) {
  const double half = t <= kFarTThreshold ? base_half : std::max(base_half, kFarHalfWidthFloor);
  const GridSpec spec = centered_window(half, grid_n);
  const WignerGrid g = rasterize(evolve_free(f, EvolutionSpec{mass, t}), spec, tag);
  return moment_profile(g, 2, t).pi_values[(spec.nx - 1) / 2];
}

void cmd_pi2(const StateOptions& o, const TimeGridOptions& topt, const std::string& profile_out,
             double profile_t, int profile_order) {
  const Eigen::VectorXd ts = time_nodes(topt);
  const auto f = make_evaluator(o);
  const bool with_analytic = o.state == "cat" && o.p0 == 0.0;

  Eigen::VectorXd numeric(ts.size());
  Eigen::VectorXd analytic(ts.size());
  for (Eigen::Index k = 0; k < ts.size(); ++k) {
    numeric[k] = pi2_numeric_at(f, ts[k], o.mass, o.grid_window, o.grid_n, o.convention);
    if (with_analytic) analytic[k] = pi2_origin_analytic(ts[k], o.x0);
  }

  std::optional<double> window;
  if (with_analytic) window = negativity_window(o.x0);
  const GridSpec base = centered_window(o.grid_window, o.grid_n);

  // Optional x-resolved moment profile at one evolution time.
  if (!profile_out.empty()) {
    const double half =
        profile_t <= kFarTThreshold ? o.grid_window : std::max(o.grid_window, kFarHalfWidthFloor);
    const WignerGrid g = rasterize(evolve_free(f, EvolutionSpec{o.mass, profile_t}),
                                   centered_window(half, o.grid_n), o.convention);
    io::write_moment_profile_csv(profile_out, moment_profile(g, profile_order, profile_t));
  }

  const std::filesystem::path path = output_path(o, "pi2");
  // The numeric column header carries the convention that produced it.
  const std::string numeric_name = "pi2_numeric_" + o.convention;
  if (o.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(io::pi2_sidecar_json(
        describe(o), o.mass, base, std::max(o.grid_window, kFarHalfWidthFloor), kFarTThreshold,
        window));
    j["t"] = std::vector<double>(ts.data(), ts.data() + ts.size());
    j[numeric_name] = std::vector<double>(numeric.data(), numeric.data() + numeric.size());
    if (with_analytic) {
      j["pi2_analytic"] = std::vector<double>(analytic.data(), analytic.data() + analytic.size());
    }
    io::write_text(path, j.dump(2) + "\n");
  } else {
    if (with_analytic) {
      io::write_csv(path, {"t", numeric_name, "pi2_analytic"}, {&ts, &numeric, &analytic});
    } else {
      io::write_csv(path, {"t", numeric_name}, {&ts, &numeric});
    }
    io::write_text(path.string() + ".json",
                   io::pi2_sidecar_json(describe(o), o.mass, base,
                                        std::max(o.grid_window, kFarHalfWidthFloor),
                                        kFarTThreshold, window));
  }
  std::cout << "wrote " << path.string() << "\n";
}

void cmd_absdev(const StateOptions& o, const TimeGridOptions& topt, double tol_neg) {
  const Eigen::VectorXd ts = time_nodes(topt);
  const GridSpec spec = centered_window(o.grid_window, o.grid_n);
  const AbsDevCurve curve =
      absdev_curve(make_evaluator(o), ts, o.mass, spec, std::string(o.convention));
  std::vector<bool> flags(static_cast<std::size_t>(ts.size()));
  for (Eigen::Index k = 0; k < ts.size(); ++k) flags[k] = curve.d2[k] < -tol_neg;

  const std::filesystem::path path = output_path(o, "absdev");
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["state"] = nlohmann::ordered_json{
        {"kind", o.state}, {"x0", o.x0}, {"p0", o.p0}, {"convention", o.convention}};
    j["mass"] = o.mass;
    j["tol_neg"] = tol_neg;
    j["t"] = std::vector<double>(ts.data(), ts.data() + ts.size());
    j["absdev"] = std::vector<double>(curve.absdev.data(), curve.absdev.data() + ts.size());
    j["d1"] = std::vector<double>(curve.d1.data(), curve.d1.data() + ts.size());
    j["d2"] = std::vector<double>(curve.d2.data(), curve.d2.data() + ts.size());
    j["violation_flag"] = flags;
    io::write_text(path, j.dump(2) + "\n");
  } else {
    io::write_absdev_csv(path, curve, &flags);
  }
  std::cout << "wrote " << path.string() << "\n";
}

struct HomodyneOptions {
  std::int64_t samples = 1'000'000;
  double tau_step = 0.2;
  int resamples = 10'000;
  double confidence = 0.99;
  int bins = 4096;
  std::string raw_out;
};

void cmd_homodyne(const StateOptions& o, const HomodyneOptions& h) {
  const GridSpec spec = square_window(o.grid_window, o.grid_n);
  spec.validate();
  if (!(h.tau_step > 0.0)) throw std::invalid_argument("tau-step must be positive");
  const WignerGrid grid = rasterize(make_evaluator(o), spec, std::string(o.convention));
  Eigen::VectorXd taus(3);
  taus << -h.tau_step, 0.0, h.tau_step;
  WitnessConfig cfg;
  cfg.samples_per_angle = h.samples;
  cfg.seed = o.seed;
  cfg.confidence = h.confidence;
  cfg.bootstrap_resamples = h.resamples;
  cfg.bootstrap_bins = h.bins;
  const bool want_raw = !h.raw_out.empty() || o.format == "csv";
  HomodyneRun run;
  const CurvatureEstimate est = curvature_witness(grid, taus, cfg, want_raw ? &run : nullptr);

  const std::filesystem::path path =
      o.out.empty() ? std::filesystem::path("homodyne.json") : std::filesystem::path(o.out);
  io::write_text(path, io::homodyne_record_json(describe(o), spec, est, h.samples, o.seed,
                                                h.confidence));
  if (want_raw) {
    const std::filesystem::path raw = h.raw_out.empty()
                                          ? std::filesystem::path(path.string() + ".samples.csv")
                                          : std::filesystem::path(h.raw_out);
    io::write_samples_csv(raw, run);
  }
  std::cout << "verdict: " << verdict_name(est.verdict) << "\n";
  std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"phase-space toolkit: Wigner functions of cat/coherent states, free-particle\n"
               "evolution diagnostics, and a homodyne negativity witness"};
  app.require_subcommand(1);

  StateOptions wigner_opts;
  auto* wigner = app.add_subcommand("wigner", "rasterize a Wigner function to CSV/JSON");
  add_common_options(wigner, wigner_opts);
  wigner->callback([&] { cmd_wigner(wigner_opts); });

  StateOptions pi2_opts;
  TimeGridOptions pi2_time;
  std::string pi2_profile_out;
  double pi2_profile_t = 0.0;
  int pi2_profile_order = 2;
  auto* pi2 = app.add_subcommand(
      "pi2", "grid moment pi_2(0;t) of the evolved state against the closed form");
  add_common_options(pi2, pi2_opts);
  add_time_options(pi2, pi2_time);
  pi2->add_option("--profile-out", pi2_profile_out,
                  "also write the x-resolved moment profile CSV (x,pi_n) to this path");
  pi2->add_option("--profile-t", pi2_profile_t, "evolution time for --profile-out")
      ->capture_default_str();
  pi2->add_option("--profile-order", pi2_profile_order, "moment order n for --profile-out")
      ->check(CLI::Range(0, 4))
      ->capture_default_str();
  pi2->callback([&] { cmd_pi2(pi2_opts, pi2_time, pi2_profile_out, pi2_profile_t,
                              pi2_profile_order); });

  StateOptions absdev_opts;
  absdev_opts.grid_window = 16.0;
  TimeGridOptions absdev_time;
  double tol_neg = 1e-6;
  auto* absdev = app.add_subcommand(
      "absdev", "absolute-deviation curve <|x|>(t) with derivatives and the classical bound");
  add_common_options(absdev, absdev_opts);
  add_time_options(absdev, absdev_time);
  absdev->add_option("--tol-neg", tol_neg, "negativity tolerance for the classical bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  absdev->callback([&] { cmd_absdev(absdev_opts, absdev_time, tol_neg); });

  StateOptions homodyne_opts;
  HomodyneOptions homodyne_extra;
  auto* homodyne =
      app.add_subcommand("homodyne", "simulate the quadrature curvature witness run");
  add_common_options(homodyne, homodyne_opts);
  homodyne->add_option("--samples", homodyne_extra.samples, "samples per angle")
      ->check(CLI::Range(static_cast<std::int64_t>(2), static_cast<std::int64_t>(1) << 40))
      ->capture_default_str();
  homodyne->add_option("--tau-step", homodyne_extra.tau_step, "tau offset h (grid {-h,0,h})")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  homodyne->add_option("--resamples", homodyne_extra.resamples, "bootstrap resamples")
      ->check(CLI::Range(2, 1 << 24))
      ->capture_default_str();
  homodyne->add_option("--confidence", homodyne_extra.confidence, "bootstrap CI level")
      ->capture_default_str();
  homodyne->add_option("--bins", homodyne_extra.bins, "bootstrap binning resolution")
      ->check(CLI::Range(2, 1 << 24))
      ->capture_default_str();
  homodyne->add_option("--raw-out", homodyne_extra.raw_out,
                       "also write raw samples CSV (theta,sample) to this path");
  homodyne->callback([&] { cmd_homodyne(homodyne_opts, homodyne_extra); });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("wigdyn");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "numerical guard (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitNumericalGuard;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace wigdyn::cli
