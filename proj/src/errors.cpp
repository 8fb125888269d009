#include "wigdyn/errors.hpp"

namespace wigdyn {

std::string_view to_string(NumericErrorKind kind) {
  switch (kind) {
    case NumericErrorKind::WindowTooSmall:
      return "window-too-small";
    case NumericErrorKind::NonpositiveMarginal:
      return "nonpositive-marginal";
    case NumericErrorKind::IllConditionedConditional:
      return "ill-conditioned-conditional";
    case NumericErrorKind::DegenerateTauGrid:
      return "degenerate-tau-grid";
    case NumericErrorKind::NonFiniteValue:
      return "non-finite-value";
  }
  return "unknown";
}

}  // namespace wigdyn
