// Copyright 2026 The scverb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCVERB_LINALG_HPP_
#define SCVERB_LINALG_HPP_

// Dense numerical kernels of the calibration cascade. Everything here is a
// free function over Eigen expressions, templated on the scalar type, so the
// same code runs on float distributions coming off a GPU server and on the
// double-precision vectors used internally.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace scverb {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

// Lower clamp applied to anchor probabilities before the log-odds.
inline constexpr double kLogOddsEpsilon = 1e-12;

// Normalized exponential of a column vector, shifted by the maximum so that
// large inputs do not overflow.
template <typename Derived>
VectorX<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived> &v) {
  using Scalar = typename Derived::Scalar;
  VectorX<Scalar> e = (v.array() - v.maxCoeff()).exp().matrix();
  return e / e.sum();
}

// Column-wise softmax; each column of the result sums to one.
template <typename Derived>
MatrixX<typename Derived::Scalar> softmax_columns(
    const Eigen::MatrixBase<Derived> &m) {
  MatrixX<typename Derived::Scalar> out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) = softmax(m.col(c));
  return out;
}

// log(q / (1 - q)) with q clamped into [eps, 1 - eps], elementwise.
template <typename Derived>
MatrixX<typename Derived::Scalar> clamped_log_odds(
    const Eigen::MatrixBase<Derived> &q,
    typename Derived::Scalar eps = typename Derived::Scalar(kLogOddsEpsilon)) {
  using Scalar = typename Derived::Scalar;
  auto c = q.array().max(eps).min(Scalar(1) - eps);
  return (c / (Scalar(1) - c)).log().matrix();
}

// Mean of v over the given indices. Callers guarantee a non-empty index set.
template <typename Derived>
typename Derived::Scalar mean_at(const Eigen::MatrixBase<Derived> &v,
                                 std::span<const int> idx) {
  typename Derived::Scalar acc(0);
  for (int i : idx) acc += v(i);
  return acc / static_cast<typename Derived::Scalar>(idx.size());
}

template <typename Derived>
typename Derived::Scalar max_at(const Eigen::MatrixBase<Derived> &v,
                                std::span<const int> idx) {
  auto best = v(idx.front());
  for (int i : idx) best = std::max(best, v(i));
  return best;
}

// +1/-1 role matrix of a labelled sample: entry (s, y) is +1 when sample s
// belongs to class y and -1 otherwise. Multiplying a token-by-sample matrix
// of log-odds by it yields the one-vs-rest score of every token for every
// class in one product.
template <typename Scalar = double>
MatrixX<Scalar> role_matrix(std::span<const int> labels, int num_classes) {
  MatrixX<Scalar> roles = MatrixX<Scalar>::Constant(
      static_cast<Eigen::Index>(labels.size()), num_classes, Scalar(-1));
  for (std::size_t s = 0; s < labels.size(); ++s)
    roles(static_cast<Eigen::Index>(s), labels[s]) = Scalar(1);
  return roles;
}

}  // namespace scverb

#endif  // SCVERB_LINALG_HPP_
