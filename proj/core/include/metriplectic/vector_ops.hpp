#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace metriplectic {

using Vec = std::vector<double>;
using VecView = std::span<const double>;

[[nodiscard]] inline double dot(VecView a, VecView b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

[[nodiscard]] inline Eigen::Map<const Eigen::VectorXd> as_eigen(VecView v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

[[nodiscard]] inline Vec to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

/// Bilinear form a^T M b evaluated as sum_ij M_ij (a_i b_j + a_j b_i) / 2, so
/// the result is bitwise symmetric in (a, b) whenever M is exactly symmetric.
[[nodiscard]] inline double symmetric_form(const Eigen::MatrixXd& m, VecView a, VecView b) noexcept {
  double acc = 0.0;
  const auto n = static_cast<Eigen::Index>(a.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      acc += m(i, j) * (a[ui] * b[uj] + a[uj] * b[ui]);
    }
  }
  return 0.5 * acc;
}

}  // namespace metriplectic
