#pragma once

#include <Eigen/Core>
#include <span>

namespace maxchaos {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VecX = Vector<double>;
using MatX = Matrix<double>;

/// A particle path as seen by the coefficients: the current value x_t plus
/// the discrete history x_0, ..., x_{t-dt}. History may be empty when the
/// model does not read it.
struct PathView {
  double now = 0.0;
  std::span<const double> history{};
};

}  // namespace maxchaos
