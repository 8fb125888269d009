#ifndef WIGDYN_IO_HPP
#define WIGDYN_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "wigdyn/dynamics.hpp"
#include "wigdyn/homodyne.hpp"
#include "wigdyn/phase_space.hpp"
#include "wigdyn/states.hpp"

namespace wigdyn::io {

/// 17-significant-digit decimal rendering ("%.17g"), '.' decimal point.
std::string format_double(double v);

/// Generic CSV writer: comma separators, LF line endings, one header row.
/// All columns must share the same length.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<const Eigen::VectorXd*>& columns);

/// Grid export: header `x,p,w`, one line per cell, row-major in x.
void write_grid_csv(const std::filesystem::path& path, const WignerGrid& g);

/// Header `x,pi_n`.
void write_moment_profile_csv(const std::filesystem::path& path, const MomentProfile& profile);

/// Header `t,absdev,d1,d2`; with flags, `t,absdev,d1,d2,violation_flag`
/// (flag printed as 0/1).
void write_absdev_csv(const std::filesystem::path& path, const AbsDevCurve& curve,
                      const std::vector<bool>* violation_flags = nullptr);

/// Raw sample export: header `theta,sample`, angles concatenated in order.
void write_samples_csv(const std::filesystem::path& path, const HomodyneRun& run);

std::string grid_sidecar_json(const WignerGrid& g);

/// State description carried into sidecars and run records.
struct StateDescription {
  std::string kind;  // "cat" | "coherent"
  double x0 = 0.0;
  double p0 = 0.0;
  std::string convention;
};

std::string wigner_sidecar_json(const WignerGrid& g, const StateDescription& state);

std::string pi2_sidecar_json(const StateDescription& state, double mass,
                             const GridSpec& base_grid, double far_window_half_width,
                             double far_t_threshold, std::optional<double> window);

/// Full homodyne run record: state, convention, grid, angles, counts, seed,
/// per-angle summary statistics, curvature estimate with CI, verdict.
std::string homodyne_record_json(const StateDescription& state, const GridSpec& grid,
                                 const CurvatureEstimate& estimate, std::int64_t samples_per_angle,
                                 std::uint64_t seed, double confidence);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace wigdyn::io

#endif
