#ifndef WIGDYN_NUMERIC_HPP
#define WIGDYN_NUMERIC_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <span>

namespace wigdyn {

/// Pairwise (cascade) summation. Fixed reduction order independent of any
/// caller-side parallelism, O(eps·log n) rounding growth.
double pairwise_sum(std::span<const double> values);

inline double pairwise_sum(const Eigen::VectorXd& v) {
  return pairwise_sum(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

/// n equally spaced nodes on [lo, hi], endpoints included. n == 1 gives {lo}.
Eigen::VectorXd linspace(double lo, double hi, int n);

/// Composite trapezoid weights for n uniform nodes with spacing h:
/// h/2 at the ends, h inside.
Eigen::VectorXd trapezoid_weights(int n, double h);

}  // namespace wigdyn

#endif
