#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "invkern/kernels.hpp"

namespace invkern {

// Free-basis feature rows for points living in (possibly different)
// dimensions; all rows have the basis length for the given degree.
struct FeatureTable {
  Eigen::MatrixXd phi;
  Eigen::VectorXd y;
  std::vector<int> dims;  // original dimension of each point
  int degree = 0;
  BasisKind kind = BasisKind::partition_esp;
  std::vector<Partition> basis;
};

FeatureTable build_features(const std::vector<Eigen::VectorXd>& points,
                            const Eigen::VectorXd& y, BasisKind kind, int m);

struct FitResult {
  Eigen::VectorXd alpha;
  double sigma_sq_est = 0.0;
  Eigen::MatrixXd sigma_s;  // Phi^T Phi / n
};

// Least squares by orthogonal factorization. Requires full column rank,
// checked against condition threshold 1e10; the error names the basis
// directions carried by the deficient singular vectors.
FitResult fit(const FeatureTable& table);

struct RiskReport {
  double excess_risk = 0.0;
  double trace_term = 0.0;
  Eigen::MatrixXd sigma_t;
  double sigma_sq = 0.0;
};

// sigma^2/n * Trace(Sigma_S^{-1} Sigma_T).
RiskReport excess_risk(const Eigen::MatrixXd& sigma_s,
                       const Eigen::MatrixXd& sigma_t, double sigma_sq,
                       std::int64_t n);

// Trace((Sigma_S + lambda I)^{-1} Sigma_T), the ridge-regularized variant.
double ridge_trace(const Eigen::MatrixXd& sigma_s,
                   const Eigen::MatrixXd& sigma_t, double lambda);

struct RidgeClassifier {
  Eigen::VectorXd alpha;
  double lambda = 0.0;
  double cv_accuracy = 0.0;
};

// Kernel ridge with lambda selected by k-fold cross validation on held-out
// accuracy; ties go to the smaller lambda; the final alpha is refit on all
// data. Folds are contiguous blocks of a seeded shuffle.
RidgeClassifier ridge_classify_fit(const Eigen::MatrixXd& gram,
                                   const Eigen::VectorXd& y,
                                   const std::vector<double>& lambda_grid,
                                   int folds, std::uint64_t seed);

// Decision values / sign predictions for rows of cross = [K(x_test_i, x_train_j)].
Eigen::VectorXd ridge_decision(const RidgeClassifier& clf,
                               const Eigen::MatrixXd& cross);
Eigen::VectorXd ridge_predict(const RidgeClassifier& clf,
                              const Eigen::MatrixXd& cross);

double accuracy(const Eigen::VectorXd& predictions, const Eigen::VectorXd& labels);

struct ErrorStats {
  double mse = 0.0;
  double mpe = 0.0;
  int excluded = 0;  // labels with |y| < 1e-12, skipped by the MPE mean
};

ErrorStats mse_mpe(const Eigen::VectorXd& predictions, const Eigen::VectorXd& labels);

nlohmann::json fit_to_json(const FitResult& fit, const FeatureTable& table,
                           std::uint64_t seed);
nlohmann::json risk_to_json(const RiskReport& report, std::int64_t n);

}  // namespace invkern
