#ifndef WIGDYN_STATES_HPP
#define WIGDYN_STATES_HPP

#include <string_view>

namespace wigdyn {

/// Scaling applied to the even-cat Wigner function.
///
/// AsPrinted:   the raw three-term closed form; its phase-space integral is
///               2 + 2·exp(−(x0²+p0²)).
/// PaperScaled: AsPrinted divided by 2 (default; the scale under which the
///               closed-form moment diagnostics hold without extra factors).
/// UnitNorm:    AsPrinted divided by its full phase-space integral.
enum class Convention { AsPrinted, PaperScaled, UnitNorm };

std::string_view convention_name(Convention c);  // "as-printed" | "paper" | "unit-norm"
Convention parse_convention(std::string_view name);

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

struct CoherentStateParams {
  double x0 = 0.0;
  double p0 = 0.0;
};

struct CatStateParams {
  double x0 = 0.0;
  double p0 = 0.0;
  Convention convention = Convention::PaperScaled;
};

void validate(const CoherentStateParams& s);  // throws std::invalid_argument
void validate(const CatStateParams& s);

/// (1/π)·exp(−(p−p0)² − (x−x0)²); strictly positive, integrates to 1.
double coherent_wigner(PhasePoint pt, const CoherentStateParams& s);

/// Even-cat Wigner function: two displaced Gaussians plus the oscillatory
/// interference term 2·exp(−x²−p²)·cos 2(p0·x − p·x0), all over π, scaled
/// per s.convention. Negative regions sit along x=0 when p0=0.
double cat_wigner(PhasePoint pt, const CatStateParams& s);

/// Phase-space integral of the AsPrinted form: 2 + 2·exp(−(x0²+p0²)).
/// The convention field of s is ignored.
double cat_norm_integral(const CatStateParams& s);

// Pointwise evaluators packaged for rasterize()/evolve_free().
inline auto cat_evaluator(const CatStateParams& s) {
  return [s](double x, double p) { return cat_wigner({x, p}, s); };
}

inline auto coherent_evaluator(const CoherentStateParams& s) {
  return [s](double x, double p) { return coherent_wigner({x, p}, s); };
}

}  // namespace wigdyn

#endif
