#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pctile/corpus.hpp"
#include "pctile/inference.hpp"
#include "pctile/math.hpp"
#include "pctile/rank_classes.hpp"

namespace pctile {

struct DesignMatrix {
  Eigen::MatrixXd x;                       // intercept, k-1 group dummies, pages, n_authors
  Eigen::VectorXd y;                       // 1 = class 10%
  std::vector<std::string> cluster_ids;    // pub_id per row
  std::vector<std::string> column_names;
  std::vector<std::string> group_labels;   // all groups, sorted; first = reference
  std::string reference_group;
};

// One design row per (record, group) pair of the complete-case sub-corpus;
// the same pub_id appearing under several groups forms one cluster.
inline DesignMatrix build_design(const Corpus& corpus,
                                 const std::string& reference_group = "") {
  DesignMatrix d;
  d.group_labels = corpus.group_labels();
  if (d.group_labels.empty())
    throw std::invalid_argument("regression: corpus has no groups");
  d.reference_group = reference_group.empty() ? d.group_labels.front() : reference_group;
  if (std::find(d.group_labels.begin(), d.group_labels.end(), d.reference_group) ==
      d.group_labels.end())
    throw std::invalid_argument("regression: unknown reference group: " +
                                d.reference_group);

  std::vector<std::string> dummy_groups;
  for (const auto& g : d.group_labels)
    if (g != d.reference_group) dummy_groups.push_back(g);

  d.column_names.push_back("intercept");
  for (const auto& g : dummy_groups) d.column_names.push_back(g);
  d.column_names.push_back("pages");
  d.column_names.push_back("n_authors");

  std::size_t n_rows = 0;
  for (const auto& r : corpus.records) {
    if (!r.percentile || !r.pages || !r.n_authors)
      throw std::invalid_argument(
          "regression: record " + r.pub_id +
          " has missing model variables (run regression_subset first)");
    n_rows += r.groups.size();
  }
  const std::size_t n_cols = d.column_names.size();
  d.x.setZero(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
  d.y.setZero(static_cast<Eigen::Index>(n_rows));
  d.cluster_ids.reserve(n_rows);

  Eigen::Index row = 0;
  const auto& pr2 = ClassScheme::pr2();
  for (const auto& r : corpus.records) {
    const double outcome = classify(*r.percentile, pr2) == "10%" ? 1.0 : 0.0;
    for (const auto& g : r.groups) {
      d.x(row, 0) = 1.0;
      for (std::size_t j = 0; j < dummy_groups.size(); ++j)
        if (g == dummy_groups[j]) d.x(row, static_cast<Eigen::Index>(j + 1)) = 1.0;
      d.x(row, static_cast<Eigen::Index>(n_cols - 2)) = static_cast<double>(*r.pages);
      d.x(row, static_cast<Eigen::Index>(n_cols - 1)) = static_cast<double>(*r.n_authors);
      d.y(row) = outcome;
      d.cluster_ids.push_back(r.pub_id);
      ++row;
    }
  }
  return d;
}

struct RegressionFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd model_vcov;    // inverse observed information
  Eigen::MatrixXd robust_vcov;   // cluster-robust sandwich (filled separately)
  Eigen::VectorXd fitted;        // predicted probabilities
  std::vector<std::string> column_names;
  std::vector<std::string> group_labels;
  std::string reference_group;
  std::size_t n_rows = 0;
  std::size_t n_unique_clusters = 0;
  bool converged = false;
  int iterations = 0;
  double deviance = 0.0;
};

inline double logistic(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

namespace detail {

inline double deviance_of(const Eigen::VectorXd& y, const Eigen::VectorXd& p) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double pi = std::clamp(p(i), 1e-12, 1.0 - 1e-12);
    d += y(i) > 0.5 ? -2.0 * std::log(pi) : -2.0 * std::log(1.0 - pi);
  }
  return d;
}

}  // namespace detail

// Maximum-likelihood logistic fit by IRLS / Newton steps. Throws on rank
// deficiency, degenerate outcomes and detected separation.
inline RegressionFit fit_logit(const DesignMatrix& design, double tol = 1e-8,
                               int max_iter = 50) {
  const Eigen::MatrixXd& x = design.x;
  const Eigen::VectorXd& y = design.y;
  const auto n = x.rows();
  const auto k = x.cols();
  if (n == 0) throw std::invalid_argument("regression: empty design matrix");

  const double ybar = y.mean();
  if (ybar <= 0.0 || ybar >= 1.0)
    throw std::runtime_error(
        "regression: degenerate outcome (all responses identical)");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < k) {
    const auto perm = qr.colsPermutation().indices();
    const auto bad = static_cast<std::size_t>(perm(qr.rank()));
    throw std::runtime_error("regression: rank-deficient design, column '" +
                             design.column_names.at(bad) + "' is collinear");
  }

  RegressionFit fit;
  fit.column_names = design.column_names;
  fit.group_labels = design.group_labels;
  fit.reference_group = design.reference_group;
  fit.n_rows = static_cast<std::size_t>(n);
  fit.n_unique_clusters =
      std::set<std::string>(design.cluster_ids.begin(), design.cluster_ids.end()).size();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  beta(0) = std::log(ybar / (1.0 - ybar));
  Eigen::VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) p(i) = logistic(x.row(i).dot(beta));
  double dev = detail::deviance_of(y, p);

  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd w = p.array() * (1.0 - p.array());
    Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
    Eigen::VectorXd score = x.transpose() * (y - p);
    Eigen::VectorXd step = info.ldlt().solve(score);
    beta += step;
    if (beta.cwiseAbs().maxCoeff() > 30.0)
      throw std::runtime_error(
          "regression: separation detected (coefficient diverging on the logit scale)");
    for (Eigen::Index i = 0; i < n; ++i) p(i) = logistic(x.row(i).dot(beta));
    const double new_dev = detail::deviance_of(y, p);
    if (new_dev > dev + 1e-6)
      throw std::runtime_error(
          "regression: separation detected (deviance increased during fitting)");
    fit.iterations = it;
    if (std::abs(dev - new_dev) < tol) {
      dev = new_dev;
      fit.converged = true;
      break;
    }
    dev = new_dev;
  }
  if (!fit.converged)
    throw std::runtime_error("regression: IRLS did not converge in " +
                             std::to_string(max_iter) + " iterations");
  bool perfect = true;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(y(i) - p(i)) > 1e-4) {
      perfect = false;
      break;
    }
  if (perfect)
    throw std::runtime_error(
        "regression: separation detected (model perfectly classifies the outcome)");
  fit.beta = beta;
  fit.fitted = p;
  fit.deviance = dev;
  Eigen::VectorXd w = p.array() * (1.0 - p.array());
  fit.model_vcov = (x.transpose() * w.asDiagonal() * x).ldlt().solve(
      Eigen::MatrixXd::Identity(k, k));
  return fit;
}

// Sandwich V = A^-1 B A^-1, with A the observed information and
// B = G/(G-1) * sum_g s_g s_g' over cluster score sums.
inline Eigen::MatrixXd cluster_robust_vcov(const RegressionFit& fit,
                                           const DesignMatrix& design) {
  if (!fit.converged) throw std::invalid_argument("regression: fit not converged");
  std::map<std::string, Eigen::VectorXd> score_sums;
  const auto k = design.x.cols();
  for (Eigen::Index i = 0; i < design.x.rows(); ++i) {
    const Eigen::VectorXd s =
        design.x.row(i).transpose() * (design.y(i) - fit.fitted(i));
    auto [it, inserted] =
        score_sums.try_emplace(design.cluster_ids[static_cast<std::size_t>(i)], s);
    if (!inserted) it->second += s;
  }
  const auto g = static_cast<double>(score_sums.size());
  if (g < 2.0) throw std::runtime_error("regression: fewer than 2 clusters");
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (const auto& [_, s] : score_sums) meat += s * s.transpose();
  meat *= g / (g - 1.0);
  return fit.model_vcov * meat * fit.model_vcov;
}

struct Contrast {
  std::string group_a;   // "A vs B"
  std::string group_b;
  double estimate = 0.0;  // difference of group coefficients
  double se = 0.0;
  double statistic = 0.0;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  bool significant = false;
};

struct AdjustedPrediction {
  std::string group;
  double probability = 0.0;
  double se = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
};

struct MarginsResult {
  std::vector<AdjustedPrediction> predictions;
  std::vector<Contrast> contrasts;
  double ci_level = 0.95;
  double alpha = kDefaultAlpha;
};

namespace detail {

// Contrast vector for "coefficient of group a minus coefficient of group b"
// on the model's column basis (reference group coefficient is 0).
inline Eigen::VectorXd contrast_vector(const RegressionFit& fit, const std::string& a,
                                       const std::string& b) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(fit.beta.size());
  auto apply = [&](const std::string& g, double sign) {
    if (g == fit.reference_group) return;
    auto it = std::find(fit.column_names.begin(), fit.column_names.end(), g);
    if (it == fit.column_names.end())
      throw std::invalid_argument("regression: unknown group label: " + g);
    c(it - fit.column_names.begin()) += sign;
  };
  if (std::find(fit.group_labels.begin(), fit.group_labels.end(), a) ==
          fit.group_labels.end() ||
      std::find(fit.group_labels.begin(), fit.group_labels.end(), b) ==
          fit.group_labels.end())
    throw std::invalid_argument("regression: unknown group label in contrast");
  apply(a, 1.0);
  apply(b, -1.0);
  return c;
}

}  // namespace detail

// Pairwise differences of group coefficients on the linear-predictor scale,
// with cluster-robust SEs and Bonferroni adjustment.
inline std::vector<Contrast> pairwise_contrasts(const RegressionFit& fit,
                                                const Eigen::MatrixXd& vcov,
                                                double alpha = kDefaultAlpha) {
  const auto& groups = fit.group_labels;
  const std::size_t k = groups.size();
  const std::size_t m = k * (k - 1) / 2;
  std::vector<Contrast> out;
  for (std::size_t base = 0; base < k; ++base)
    for (std::size_t other = base + 1; other < k; ++other) {
      Contrast c;
      c.group_a = groups[other];
      c.group_b = groups[base];
      const Eigen::VectorXd cv = detail::contrast_vector(fit, c.group_a, c.group_b);
      c.estimate = cv.dot(fit.beta);
      c.se = std::sqrt(cv.dot(vcov * cv));
      c.statistic = c.se > 0.0 ? c.estimate / c.se : 0.0;
      c.raw_p = math::two_sided_normal_p(c.statistic);
      c.adjusted_p = std::min(1.0, static_cast<double>(m) * c.raw_p);
      c.significant = c.adjusted_p < alpha;
      out.push_back(c);
    }
  return out;
}

// Average predicted probability with the group indicator counterfactually set
// to each group in turn, covariates at observed values; delta-method SE on
// the probability scale.
inline std::vector<AdjustedPrediction> adjusted_predictions(
    const RegressionFit& fit, const DesignMatrix& design, const Eigen::MatrixXd& vcov,
    double ci_level = 0.95) {
  const auto n = design.x.rows();
  const auto k = design.x.cols();
  const double z = math::normal_quantile(0.5 + ci_level / 2.0);
  std::vector<AdjustedPrediction> out;
  // column indices of the group dummies
  std::vector<Eigen::Index> dummy_cols;
  for (Eigen::Index j = 1; j < k - 2; ++j) dummy_cols.push_back(j);

  for (const auto& g : fit.group_labels) {
    Eigen::Index gcol = -1;
    if (g != fit.reference_group) {
      auto it = std::find(fit.column_names.begin(), fit.column_names.end(), g);
      gcol = it - fit.column_names.begin();
    }
    double psum = 0.0;
    Eigen::VectorXd jac = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd xi = design.x.row(i).transpose();
      for (auto j : dummy_cols) xi(j) = 0.0;
      if (gcol >= 0) xi(gcol) = 1.0;
      const double p = logistic(xi.dot(fit.beta));
      psum += p;
      jac += p * (1.0 - p) * xi;
    }
    AdjustedPrediction ap;
    ap.group = g;
    ap.probability = psum / static_cast<double>(n);
    jac /= static_cast<double>(n);
    ap.se = std::sqrt(jac.dot(vcov * jac));
    ap.ci_lower = ap.probability - z * ap.se;
    ap.ci_upper = ap.probability + z * ap.se;
    out.push_back(ap);
  }
  return out;
}

inline MarginsResult margins(const RegressionFit& fit, const DesignMatrix& design,
                             const Eigen::MatrixXd& vcov, double ci_level = 0.95,
                             double alpha = kDefaultAlpha) {
  MarginsResult m;
  m.ci_level = ci_level;
  m.alpha = alpha;
  m.predictions = adjusted_predictions(fit, design, vcov, ci_level);
  m.contrasts = pairwise_contrasts(fit, vcov, alpha);
  return m;
}

}  // namespace pctile
