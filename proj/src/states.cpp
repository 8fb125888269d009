#include "wigdyn/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wigdyn {

std::string_view convention_name(Convention c) {
  switch (c) {
    case Convention::AsPrinted:
      return "as-printed";
    case Convention::PaperScaled:
      return "paper";
    case Convention::UnitNorm:
      return "unit-norm";
  }
  throw std::invalid_argument("convention_name: unknown convention");
}

Convention parse_convention(std::string_view name) {
  if (name == "as-printed") return Convention::AsPrinted;
  if (name == "paper") return Convention::PaperScaled;
  if (name == "unit-norm") return Convention::UnitNorm;
  throw std::invalid_argument("unknown convention '" + std::string(name) +
                              "' (expected as-printed, paper, or unit-norm)");
}

void validate(const CoherentStateParams& s) {
  if (!std::isfinite(s.x0) || !std::isfinite(s.p0)) {
    throw std::invalid_argument("coherent state displacements must be finite");
  }
}

void validate(const CatStateParams& s) {
  if (!std::isfinite(s.x0) || !std::isfinite(s.p0)) {
    throw std::invalid_argument("cat state displacements must be finite");
  }
}

double coherent_wigner(PhasePoint pt, const CoherentStateParams& s) {
  const double dx = pt.x - s.x0;
  const double dp = pt.p - s.p0;
  return std::exp(-dp * dp - dx * dx) / std::numbers::pi;
}

double cat_wigner(PhasePoint pt, const CatStateParams& s) {
  const double dxm = pt.x - s.x0;
  const double dxp = pt.x + s.x0;
  const double dpm = pt.p - s.p0;
  const double dpp = pt.p + s.p0;
  const double raw = (std::exp(-dpm * dpm - dxm * dxm) + std::exp(-dpp * dpp - dxp * dxp) +
                      2.0 * std::exp(-pt.x * pt.x - pt.p * pt.p) *
                          std::cos(2.0 * (s.p0 * pt.x - pt.p * s.x0))) /
                     std::numbers::pi;
  switch (s.convention) {
    case Convention::AsPrinted:
      return raw;
    case Convention::PaperScaled:
      return 0.5 * raw;
    case Convention::UnitNorm:
      return raw / cat_norm_integral(s);
  }
  throw std::invalid_argument("cat_wigner: unknown convention");
}

double cat_norm_integral(const CatStateParams& s) {
  return 2.0 + 2.0 * std::exp(-(s.x0 * s.x0 + s.p0 * s.p0));
}

}  // namespace wigdyn
