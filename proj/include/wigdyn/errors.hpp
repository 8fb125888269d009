#ifndef WIGDYN_ERRORS_HPP
#define WIGDYN_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace wigdyn {

/// Guard conditions raised mid-computation (as opposed to invalid arguments,
/// which throw std::invalid_argument before any work starts).
enum class NumericErrorKind {
  WindowTooSmall,             // state mass touches the grid boundary
  NonpositiveMarginal,        // rotated marginal carries too much negative mass
  IllConditionedConditional,  // |pi_0(x)| below the conditional floor
  DegenerateTauGrid,          // tau offsets below numerical resolution
  NonFiniteValue,             // evaluator produced NaN/Inf
};

std::string_view to_string(NumericErrorKind kind);

class NumericError : public std::runtime_error {
 public:
  NumericError(NumericErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  NumericErrorKind kind() const noexcept { return kind_; }

 private:
  NumericErrorKind kind_;
};

/// File-system failures; the CLI maps these to their own exit code.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wigdyn

#endif
