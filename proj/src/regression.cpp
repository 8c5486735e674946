#include "invkern/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "invkern/rng.hpp"

namespace invkern {

namespace {
constexpr double kConditionThreshold = 1e10;
constexpr double kMpeLabelFloor = 1e-12;

std::string partition_label(const Partition& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p.parts[i]);
  }
  return s + ")";
}
}  // namespace

FeatureTable build_features(const std::vector<Eigen::VectorXd>& points,
                            const Eigen::VectorXd& y, BasisKind kind, int m) {
  if (kind != BasisKind::partition_esp) {
    throw input_error("build_features: only the partition-ESP basis is vector-valued");
  }
  if (static_cast<Eigen::Index>(points.size()) != y.size()) {
    throw input_error("build_features: label count does not match points");
  }
  FeatureTable table;
  table.degree = m;
  table.kind = kind;
  table.basis = partitions_up_to(m);
  table.y = y;
  Eigen::Index n = static_cast<Eigen::Index>(points.size());
  table.phi.resize(n, static_cast<Eigen::Index>(table.basis.size()));
  table.dims.reserve(points.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    int d = static_cast<int>(points[static_cast<std::size_t>(i)].size());
    if (d < m) {
      throw regime_error("build_features: point dimension " + std::to_string(d) +
                         " below stability degree " + std::to_string(m));
    }
    table.dims.push_back(d);
    table.phi.row(i) =
        feature_vector_E(points[static_cast<std::size_t>(i)], m).transpose();
  }
  return table;
}

FitResult fit(const FeatureTable& table) {
  Eigen::Index n = table.phi.rows();
  Eigen::Index k = table.phi.cols();
  if (n < k) {
    throw fit_error("fit: fewer rows than basis elements");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(table.phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double smax = sv(0);
  double smin = sv(sv.size() - 1);
  if (smax <= 0.0 || smax / std::max(smin, 1e-300) > kConditionThreshold) {
    // Name the basis directions dominating the deficient singular vectors.
    std::ostringstream msg;
    msg << "fit: feature matrix is rank deficient; weak directions:";
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (smax <= 0.0 || sv(i) <= smax / kConditionThreshold) {
        Eigen::Index worst = 0;
        svd.matrixV().col(i).cwiseAbs().maxCoeff(&worst);
        msg << " " << partition_label(table.basis[static_cast<std::size_t>(worst)]);
      }
    }
    throw fit_error(msg.str());
  }
  FitResult result;
  result.alpha = svd.solve(table.y);
  result.sigma_s = (table.phi.transpose() * table.phi) / static_cast<double>(n);
  if (n > k) {
    double rss = (table.y - table.phi * result.alpha).squaredNorm();
    result.sigma_sq_est = rss / static_cast<double>(n - k);
  }
  return result;
}

RiskReport excess_risk(const Eigen::MatrixXd& sigma_s,
                       const Eigen::MatrixXd& sigma_t, double sigma_sq,
                       std::int64_t n) {
  if (sigma_s.rows() != sigma_s.cols() || sigma_t.rows() != sigma_t.cols() ||
      sigma_s.rows() != sigma_t.rows()) {
    throw input_error("excess_risk: Gram matrices must be square and matching");
  }
  if (n < 1) throw input_error("excess_risk: n must be positive");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sigma_s);
  if (!lu.isInvertible()) {
    throw fit_error("excess_risk: training Gram matrix is singular");
  }
  RiskReport report;
  report.trace_term = lu.solve(sigma_t).trace();
  report.sigma_sq = sigma_sq;
  report.sigma_t = sigma_t;
  report.excess_risk = sigma_sq / static_cast<double>(n) * report.trace_term;
  return report;
}

double ridge_trace(const Eigen::MatrixXd& sigma_s,
                   const Eigen::MatrixXd& sigma_t, double lambda) {
  Eigen::MatrixXd reg =
      sigma_s + lambda * Eigen::MatrixXd::Identity(sigma_s.rows(), sigma_s.cols());
  return reg.ldlt().solve(sigma_t).trace();
}

RidgeClassifier ridge_classify_fit(const Eigen::MatrixXd& gram,
                                   const Eigen::VectorXd& y,
                                   const std::vector<double>& lambda_grid,
                                   int folds, std::uint64_t seed) {
  Eigen::Index n = gram.rows();
  if (gram.cols() != n || y.size() != n) {
    throw input_error("ridge_classify_fit: shape mismatch");
  }
  if (folds < 2 || folds > n) {
    throw input_error("ridge_classify_fit: folds must be in [2, n]");
  }
  if (lambda_grid.empty()) {
    throw input_error("ridge_classify_fit: empty lambda grid");
  }
  bool has_pos = false, has_neg = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) > 0) has_pos = true;
    if (y(i) < 0) has_neg = true;
  }
  if (!has_pos || !has_neg) {
    throw input_error("ridge_classify_fit: degenerate labels (one class only)");
  }
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    double lo = es.eigenvalues().minCoeff();
    double hi = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (lo < -1e-8 * hi) {
      throw input_error("ridge_classify_fit: Gram matrix is not PSD");
    }
  }

  // Contiguous fold blocks over a seeded shuffle.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    Eigen::Index j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }

  std::vector<double> grid = lambda_grid;
  std::sort(grid.begin(), grid.end());
  double best_lambda = grid.front();
  std::int64_t best_correct = -1;
  for (double lambda : grid) {
    std::int64_t correct = 0;
    for (int f = 0; f < folds; ++f) {
      Eigen::Index lo = n * f / folds;
      Eigen::Index hi = n * (f + 1) / folds;
      std::vector<Eigen::Index> train, hold;
      for (Eigen::Index t = 0; t < n; ++t) {
        (t >= lo && t < hi ? hold : train).push_back(order[static_cast<std::size_t>(t)]);
      }
      Eigen::Index nt = static_cast<Eigen::Index>(train.size());
      Eigen::MatrixXd kt(nt, nt);
      Eigen::VectorXd yt(nt);
      for (Eigen::Index a = 0; a < nt; ++a) {
        yt(a) = y(train[static_cast<std::size_t>(a)]);
        for (Eigen::Index b = 0; b < nt; ++b) {
          kt(a, b) = gram(train[static_cast<std::size_t>(a)],
                          train[static_cast<std::size_t>(b)]);
        }
      }
      kt.diagonal().array() += lambda;
      Eigen::VectorXd alpha = kt.ldlt().solve(yt);
      for (Eigen::Index h : hold) {
        double dec = 0.0;
        for (Eigen::Index a = 0; a < nt; ++a) {
          dec += alpha(a) * gram(h, train[static_cast<std::size_t>(a)]);
        }
        double pred = dec < 0.0 ? -1.0 : 1.0;
        if (pred == y(h)) ++correct;
      }
    }
    if (correct > best_correct) {
      best_correct = correct;
      best_lambda = lambda;
    }
  }

  Eigen::MatrixXd kk = gram;
  kk.diagonal().array() += best_lambda;
  RidgeClassifier clf;
  clf.alpha = kk.ldlt().solve(y);
  clf.lambda = best_lambda;
  clf.cv_accuracy = static_cast<double>(best_correct) / static_cast<double>(n);
  return clf;
}

Eigen::VectorXd ridge_decision(const RidgeClassifier& clf,
                               const Eigen::MatrixXd& cross) {
  if (cross.cols() != clf.alpha.size()) {
    throw input_error("ridge_decision: cross-kernel width does not match alpha");
  }
  return cross * clf.alpha;
}

Eigen::VectorXd ridge_predict(const RidgeClassifier& clf,
                              const Eigen::MatrixXd& cross) {
  Eigen::VectorXd dec = ridge_decision(clf, cross);
  for (Eigen::Index i = 0; i < dec.size(); ++i) {
    dec(i) = dec(i) < 0.0 ? -1.0 : 1.0;  // sign(0) -> +1
  }
  return dec;
}

double accuracy(const Eigen::VectorXd& predictions, const Eigen::VectorXd& labels) {
  if (predictions.size() == 0) throw input_error("accuracy: empty test set");
  if (predictions.size() != labels.size()) {
    throw input_error("accuracy: size mismatch");
  }
  int correct = 0;
  for (Eigen::Index i = 0; i < predictions.size(); ++i) {
    if (predictions(i) == labels(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

ErrorStats mse_mpe(const Eigen::VectorXd& predictions, const Eigen::VectorXd& labels) {
  if (predictions.size() != labels.size()) {
    throw input_error("mse_mpe: size mismatch");
  }
  ErrorStats stats;
  Eigen::Index n = predictions.size();
  if (n == 0) return stats;
  double sq = 0.0, pe = 0.0;
  int counted = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double diff = labels(i) - predictions(i);
    sq += diff * diff;
    if (std::abs(labels(i)) < kMpeLabelFloor) {
      ++stats.excluded;
    } else {
      pe += std::abs(diff) / std::abs(labels(i));
      ++counted;
    }
  }
  stats.mse = sq / static_cast<double>(n);
  stats.mpe = counted > 0 ? pe / static_cast<double>(counted) : 0.0;
  return stats;
}

nlohmann::json fit_to_json(const FitResult& fit, const FeatureTable& table,
                           std::uint64_t seed) {
  nlohmann::json j;
  j["alpha"] = std::vector<double>(fit.alpha.data(), fit.alpha.data() + fit.alpha.size());
  j["sigma_sq_est"] = fit.sigma_sq_est;
  j["degree"] = table.degree;
  j["basis_kind"] = basis_kind_name(table.kind);
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& p : table.basis) basis.push_back(p.parts);
  j["basis"] = basis;
  std::vector<double> s;
  for (Eigen::Index r = 0; r < fit.sigma_s.rows(); ++r) {
    for (Eigen::Index c = 0; c < fit.sigma_s.cols(); ++c) {
      s.push_back(fit.sigma_s(r, c));
    }
  }
  j["sigma_s"] = s;
  j["seed"] = seed;
  return j;
}

nlohmann::json risk_to_json(const RiskReport& report, std::int64_t n) {
  nlohmann::json j;
  j["excess_risk"] = report.excess_risk;
  j["trace_term"] = report.trace_term;
  j["sigma_sq"] = report.sigma_sq;
  j["n"] = n;
  std::vector<double> t;
  for (Eigen::Index r = 0; r < report.sigma_t.rows(); ++r) {
    for (Eigen::Index c = 0; c < report.sigma_t.cols(); ++c) {
      t.push_back(report.sigma_t(r, c));
    }
  }
  j["sigma_t"] = t;
  return j;
}

}  // namespace invkern
