#include "wigdyn/numeric.hpp"

#include <stdexcept>

namespace wigdyn {

namespace {

double pairwise_block(const double* v, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_block(v, half) + pairwise_block(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return values.empty() ? 0.0 : pairwise_block(values.data(), values.size());
}

Eigen::VectorXd linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: need at least one node");
  Eigen::VectorXd v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo + i * h;
  v[n - 1] = hi;  // exact endpoint
  return v;
}

Eigen::VectorXd trapezoid_weights(int n, double h) {
  if (n < 2) throw std::invalid_argument("trapezoid_weights: need at least two nodes");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  w[0] = 0.5 * h;
  w[n - 1] = 0.5 * h;
  return w;
}

}  // namespace wigdyn
