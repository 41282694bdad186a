#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "correlation.hpp"
#include "dataset.hpp"
#include "eigen.hpp"
#include "matrix.hpp"

namespace likert {

struct FactorOptions {
  double tolerance = 1e-4;  // max communality change between iterations
  int max_iterations = 200;
  bool rotate = true;  // varimax when q >= 2
};

struct FactorModel {
  std::size_t q = 0;
  RealMatrix loadings;  // p x q
  std::vector<double> communalities;
  std::vector<double> uniquenesses;
  std::vector<double> ss_loadings;  // per factor, descending
  double pct_variance = 0.0;        // sum of communalities / p
  std::string rotation = "none";
  std::vector<std::string> item_names;

  int iterations = 0;
  bool converged = false;
  bool heywood = false;     // some communality exceeded 1 and was clamped
  bool degenerate = false;  // no common variance was found
  std::vector<double> residual_history;          // off-diagonal fit per iteration
  std::vector<double> varimax_criterion_history;  // per rotation sweep, starting unrotated
};

namespace detail {

inline double offdiag_residual(const RealMatrix& c, const RealMatrix& lambda) {
  const std::size_t p = c.rows();
  double s = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      if (i == j) continue;
      double fit = 0.0;
      for (std::size_t f = 0; f < lambda.cols(); ++f) fit += lambda(i, f) * lambda(j, f);
      s += (c(i, j) - fit) * (c(i, j) - fit);
    }
  return std::sqrt(s);
}

inline double varimax_criterion(const RealMatrix& x) {
  const auto p = static_cast<double>(x.rows());
  double total = 0.0;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double sq = x(i, f) * x(i, f);
      s2 += sq;
      s4 += sq * sq;
    }
    total += (p * s4 - s2 * s2) / (p * p);
  }
  return total;
}

// Kaiser-normalised varimax by successive planar rotations. Each pair angle is
// the exact maximiser of the criterion for that pair, so the criterion never
// decreases from one sweep to the next.
inline RealMatrix varimax(const RealMatrix& loadings, std::vector<double>& criterion_history,
                          int max_sweeps = 100, double angle_tolerance = 1e-12) {
  const std::size_t p = loadings.rows();
  const std::size_t q = loadings.cols();
  std::vector<double> h(p);
  RealMatrix x = loadings;
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t f = 0; f < q; ++f) s += x(i, f) * x(i, f);
    h[i] = std::sqrt(s);
    for (std::size_t f = 0; f < q; ++f) x(i, f) = h[i] > 0 ? x(i, f) / h[i] : 0.0;
  }
  const auto pd = static_cast<double>(p);
  criterion_history.push_back(varimax_criterion(x));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double largest = 0.0;
    for (std::size_t j = 0; j + 1 < q; ++j)
      for (std::size_t k = j + 1; k < q; ++k) {
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
          const double u = x(i, j) * x(i, j) - x(i, k) * x(i, k);
          const double v = 2.0 * x(i, j) * x(i, k);
          a += u;
          b += v;
          c += u * u - v * v;
          d += 2.0 * u * v;
        }
        const double phi = 0.25 * std::atan2(d - 2.0 * a * b / pd, c - (a * a - b * b) / pd);
        largest = std::max(largest, std::abs(phi));
        const double cs = std::cos(phi), sn = std::sin(phi);
        for (std::size_t i = 0; i < p; ++i) {
          const double xj = x(i, j), xk = x(i, k);
          x(i, j) = xj * cs + xk * sn;
          x(i, k) = -xj * sn + xk * cs;
        }
      }
    criterion_history.push_back(varimax_criterion(x));
    if (largest < angle_tolerance) break;
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t f = 0; f < q; ++f) x(i, f) *= h[i];
  return x;
}

}  // namespace detail

/// Principal-axis factoring of a correlation matrix followed by varimax and a
/// sign convention (every loading column sums to a positive value). Factors
/// are ordered by sum of squared loadings, largest first.
inline FactorModel extract_factors(const RealMatrix& c, std::size_t q, const std::vector<std::string>& item_names,
                                   const FactorOptions& options = {}) {
  const std::size_t p = c.rows();
  detail::require(c.cols() == p, ErrorKind::InvalidArgument, "correlation matrix must be square");
  detail::require(q >= 1 && q < p, ErrorKind::InvalidArgument, "need 1 <= q < p");
  for (std::size_t i = 0; i < p; ++i) {
    detail::require(std::abs(c(i, i) - 1.0) < 1e-9, ErrorKind::InvalidArgument, "correlation diagonal must be 1");
    for (std::size_t j = 0; j < p; ++j)
      detail::require(std::abs(c(i, j) - c(j, i)) < 1e-12, ErrorKind::InvalidArgument,
                      "correlation matrix must be symmetric");
  }

  FactorModel model;
  model.q = q;
  model.item_names = item_names;
  std::vector<double> h2(p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (i != j) h2[i] = std::max(h2[i], std::abs(c(i, j)));

  RealMatrix lambda(p, q);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    RealMatrix reduced = c;
    for (std::size_t i = 0; i < p; ++i) reduced(i, i) = h2[i];
    const auto eig = symmetric_eigen(reduced);
    for (std::size_t f = 0; f < q; ++f) {
      const double root = std::sqrt(std::max(eig.values[f], 0.0));
      for (std::size_t i = 0; i < p; ++i) lambda(i, f) = eig.vectors(i, f) * root;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      double next = 0.0;
      for (std::size_t f = 0; f < q; ++f) next += lambda(i, f) * lambda(i, f);
      if (next > 1.0) {
        model.heywood = true;
        next = 1.0;
      }
      change = std::max(change, std::abs(next - h2[i]));
      h2[i] = next;
    }
    model.residual_history.push_back(detail::offdiag_residual(c, lambda));
    model.iterations = iter + 1;
    if (change < options.tolerance) {
      model.converged = true;
      break;
    }
  }

  double total_h2 = std::accumulate(h2.begin(), h2.end(), 0.0);
  model.degenerate = total_h2 < 1e-12;
  if (options.rotate && q >= 2 && !model.degenerate) {
    lambda = detail::varimax(lambda, model.varimax_criterion_history);
    model.rotation = "varimax";
  }

  std::vector<double> ss(q, 0.0);
  for (std::size_t f = 0; f < q; ++f)
    for (std::size_t i = 0; i < p; ++i) ss[f] += lambda(i, f) * lambda(i, f);
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ss[a] > ss[b]; });

  model.loadings = RealMatrix(p, q);
  for (std::size_t f = 0; f < q; ++f) {
    double col_sum = 0.0;
    for (std::size_t i = 0; i < p; ++i) col_sum += lambda(i, order[f]);
    const double sign = col_sum < 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < p; ++i) model.loadings(i, f) = sign * lambda(i, order[f]);
    model.ss_loadings.push_back(ss[order[f]]);
  }
  model.communalities.resize(p);
  model.uniquenesses.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t f = 0; f < q; ++f) s += model.loadings(i, f) * model.loadings(i, f);
    model.communalities[i] = s;
    model.uniquenesses[i] = 1.0 - s;
  }
  model.pct_variance = std::accumulate(model.communalities.begin(), model.communalities.end(), 0.0) /
                       static_cast<double>(p);
  return model;
}

inline FactorModel extract_factors(const CorrelationMatrix& c, std::size_t q, const FactorOptions& options = {}) {
  return extract_factors(c.values, q, c.item_names, options);
}

/// Regression (Thomson) factor scores: z = Lambda^T C^-1 x_std, with x
/// standardised by the per-item mean and standard deviation of the analysed
/// data. A ridge of 1e-6 is added to C before solving.
class FactorScorer {
 public:
  FactorScorer(const FactorModel& model, const RealMatrix& c, const RealMatrix& data, double ridge = 1e-6) {
    const std::size_t p = c.rows();
    detail::require(model.loadings.rows() == p && data.cols() == p, ErrorKind::FeatureMismatch,
                    "factor model, correlation matrix and data disagree on item count");
    detail::require(data.rows() >= 2, ErrorKind::InvalidArgument, "factor scores need at least 2 rows");
    RealMatrix regularised = c;
    for (std::size_t i = 0; i < p; ++i) regularised(i, i) += ridge;
    weights_ = solve(regularised, model.loadings);  // C^-1 Lambda, p x q
    means_.assign(p, 0.0);
    sds_.assign(p, 0.0);
    const auto n = static_cast<double>(data.rows());
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < data.rows(); ++i) means_[j] += data(i, j);
      means_[j] /= n;
      for (std::size_t i = 0; i < data.rows(); ++i) sds_[j] += (data(i, j) - means_[j]) * (data(i, j) - means_[j]);
      sds_[j] = std::sqrt(sds_[j] / (n - 1.0));
      detail::require(sds_[j] > 0, ErrorKind::ZeroVariance, "item with zero variance cannot be standardised");
    }
  }

  std::vector<double> score(std::span<const double> x) const {
    detail::require(x.size() == means_.size(), ErrorKind::FeatureMismatch, "score vector has the wrong length");
    std::vector<double> z(weights_.cols(), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double standardised = (x[j] - means_[j]) / sds_[j];
      for (std::size_t f = 0; f < z.size(); ++f) z[f] += standardised * weights_(j, f);
    }
    return z;
  }

  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& standard_deviations() const noexcept { return sds_; }
  const RealMatrix& weights() const noexcept { return weights_; }

 private:
  RealMatrix weights_;
  std::vector<double> means_;
  std::vector<double> sds_;
};

struct FactorScores {
  RealMatrix scores;  // n x q
  std::string method = "regression";
};

inline FactorScores factor_scores(const FactorModel& model, const LikertMatrix& m, const CorrelationMatrix& c) {
  const RealMatrix data = m.to_real();
  const FactorScorer scorer(model, c.values, data);
  FactorScores out{RealMatrix(m.n(), model.q)};
  for (std::size_t i = 0; i < m.n(); ++i) {
    const auto z = scorer.score(data.row(i));
    std::copy(z.begin(), z.end(), out.scores.row(i).begin());
  }
  return out;
}

}  // namespace likert
