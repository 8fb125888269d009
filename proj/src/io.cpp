#include "wigdyn/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace wigdyn::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ordered_json grid_json(const GridSpec& spec) {
  return ordered_json{{"x_min", spec.x_min}, {"x_max", spec.x_max}, {"p_min", spec.p_min},
                      {"p_max", spec.p_max}, {"nx", spec.nx},       {"np", spec.np}};
}

ordered_json state_json(const StateDescription& state) {
  return ordered_json{
      {"kind", state.kind}, {"x0", state.x0}, {"p0", state.p0}, {"convention", state.convention}};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<const Eigen::VectorXd*>& columns) {
  if (header.size() != columns.size()) {
    throw std::invalid_argument("write_csv: header/column count mismatch");
  }
  const Eigen::Index rows = columns.empty() ? 0 : columns.front()->size();
  for (const auto* c : columns) {
    if (c->size() != rows) throw std::invalid_argument("write_csv: ragged columns");
  }
  std::ofstream out = open_for_write(path);
  for (std::size_t k = 0; k < header.size(); ++k) {
    out << (k ? "," : "") << header[k];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      out << (k ? "," : "") << format_double((*columns[k])[i]);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_grid_csv(const std::filesystem::path& path, const WignerGrid& g) {
  const Eigen::VectorXd xs = g.spec().x_nodes();
  const Eigen::VectorXd ps = g.spec().p_nodes();
  std::ofstream out = open_for_write(path);
  out << "x,p,w\n";
  for (int i = 0; i < g.spec().nx; ++i) {
    const std::string xs_str = format_double(xs[i]);
    const double* row = g.values().row(i).data();
    for (int j = 0; j < g.spec().np; ++j) {
      out << xs_str << ',' << format_double(ps[j]) << ',' << format_double(row[j]) << '\n';
    }
  }
  finish(out, path);
}

void write_moment_profile_csv(const std::filesystem::path& path, const MomentProfile& profile) {
  write_csv(path, {"x", "pi_n"}, {&profile.x_values, &profile.pi_values});
}

void write_absdev_csv(const std::filesystem::path& path, const AbsDevCurve& curve,
                      const std::vector<bool>* violation_flags) {
  std::ofstream out = open_for_write(path);
  out << (violation_flags ? "t,absdev,d1,d2,violation_flag" : "t,absdev,d1,d2") << '\n';
  for (Eigen::Index i = 0; i < curve.t_values.size(); ++i) {
    out << format_double(curve.t_values[i]) << ',' << format_double(curve.absdev[i]) << ','
        << format_double(curve.d1[i]) << ',' << format_double(curve.d2[i]);
    if (violation_flags) out << ',' << ((*violation_flags)[i] ? 1 : 0);
    out << '\n';
  }
  finish(out, path);
}

void write_samples_csv(const std::filesystem::path& path, const HomodyneRun& run) {
  std::ofstream out = open_for_write(path);
  out << "theta,sample\n";
  for (std::size_t k = 0; k < run.angles.size(); ++k) {
    const std::string theta = format_double(run.angles[k].theta);
    for (Eigen::Index i = 0; i < run.samples[k].size(); ++i) {
      out << theta << ',' << format_double(run.samples[k][i]) << '\n';
    }
  }
  finish(out, path);
}

std::string grid_sidecar_json(const WignerGrid& g) {
  ordered_json j;
  j["grid"] = grid_json(g.spec());
  j["convention_tag"] = g.convention_tag();
  j["integral"] = g.integral();
  return j.dump(2) + "\n";
}

std::string wigner_sidecar_json(const WignerGrid& g, const StateDescription& state) {
  ordered_json j;
  j["state"] = state_json(state);
  j["grid"] = grid_json(g.spec());
  j["convention_tag"] = g.convention_tag();
  j["integral"] = g.integral();
  return j.dump(2) + "\n";
}

std::string pi2_sidecar_json(const StateDescription& state, double mass,
                             const GridSpec& base_grid, double far_window_half_width,
                             double far_t_threshold, std::optional<double> window) {
  ordered_json j;
  j["state"] = state_json(state);
  j["mass"] = mass;
  j["grid"] = grid_json(base_grid);
  j["far_window_half_width"] = far_window_half_width;
  j["far_t_threshold"] = far_t_threshold;
  j["negativity_window"] = window ? ordered_json(*window) : ordered_json(nullptr);
  return j.dump(2) + "\n";
}

std::string homodyne_record_json(const StateDescription& state, const GridSpec& grid,
                                 const CurvatureEstimate& estimate, std::int64_t samples_per_angle,
                                 std::uint64_t seed, double confidence) {
  ordered_json j;
  j["state"] = state_json(state);
  j["grid"] = grid_json(grid);
  ordered_json angles = ordered_json::array();
  ordered_json per_angle = ordered_json::array();
  for (Eigen::Index k = 0; k < estimate.tau_values.size(); ++k) {
    const double tau = estimate.tau_values[k];
    angles.push_back({{"theta", std::atan(tau)}, {"tau", tau}});
    per_angle.push_back({{"tau", tau},
                         {"abs_chi_mean", estimate.abs_chi_means[k]},
                         {"abs_chi_std_error", estimate.abs_chi_std_errors[k]}});
  }
  j["angles"] = angles;
  j["samples_per_angle"] = samples_per_angle;
  j["seed"] = seed;
  j["per_angle"] = per_angle;
  j["curvature"] = ordered_json{{"at_zero", estimate.curvature_at_zero},
                                {"ci_low", estimate.ci_low},
                                {"ci_high", estimate.ci_high},
                                {"confidence", confidence}};
  j["verdict"] = std::string(verdict_name(estimate.verdict));
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out = open_for_write(path);
  out << content;
  finish(out, path);
}

}  // namespace wigdyn::io
