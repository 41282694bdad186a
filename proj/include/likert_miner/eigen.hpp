#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "matrix.hpp"

namespace likert {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  RealMatrix vectors;          // column k pairs with values[k]
  int sweeps = 0;
};

inline double off_diagonal_norm(const RealMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

/// Cyclic Jacobi eigensolver for symmetric matrices. Sweeps plane rotations
/// over every (p, q) pair until the off-diagonal Frobenius norm is below
/// `tolerance` (scaled by max(1, ||M||_F)).
inline EigenDecomposition symmetric_eigen(const RealMatrix& m, double tolerance = 1e-10, int max_sweeps = 100) {
  const std::size_t n = m.rows();
  detail::require(m.cols() == n, ErrorKind::InvalidArgument, "symmetric_eigen needs a square matrix");
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      norm += m(i, j) * m(i, j);
      detail::require(std::abs(m(i, j) - m(j, i)) <= 1e-12 * std::max(1.0, std::abs(m(i, j))),
                      ErrorKind::InvalidArgument, "symmetric_eigen needs a symmetric matrix");
    }
  const double threshold = tolerance * std::max(1.0, std::sqrt(norm));

  RealMatrix a = m;
  RealMatrix v = RealMatrix::identity(n);
  int sweep = 0;
  for (; sweep < max_sweeps && off_diagonal_norm(a) > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p, q); t is the smaller root of t^2 + 2 theta t - 1.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });
  EigenDecomposition out{std::vector<double>(n), RealMatrix(n, n), sweep};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace likert
