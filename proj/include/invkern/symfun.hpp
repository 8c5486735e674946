#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <vector>

#include "invkern/combinatorics.hpp"

namespace invkern {

// Core two-term recurrence filling e_0..e_m, one pass over the variables.
// Templated on the scalar so tests can run it on exact integers or on a
// counting type that meters arithmetic operations.
template <class Scalar>
std::vector<Scalar> esp_recursion(const std::vector<Scalar>& x, int m) {
  std::vector<Scalar> e(static_cast<std::size_t>(m) + 1, Scalar(0));
  e[0] = Scalar(1);
  for (std::size_t t = 0; t < x.size(); ++t) {
    int top = std::min<int>(m, static_cast<int>(t) + 1);
    for (int j = top; j >= 1; --j) e[j] = e[j] + x[t] * e[j - 1];
  }
  return e;
}

struct EspTable {
  std::vector<double> values;  // values[j] = e_j(x), j = 0..m
  int d = 0;
  int m = 0;
};

// True when the inputs are large enough that degree-m ESPs risk overflowing
// double range (they grow like ||x||_inf^m * binom(d, m)).
bool needs_conditioning_warning(const Eigen::VectorXd& x, int m);

EspTable esp_all(const Eigen::VectorXd& x, int m);

double esp_partition(const EspTable& table, const Partition& lam);
double esp_partition(const Eigen::VectorXd& x, const Partition& lam);

// Feature vector over all partitions of j <= m in the canonical order of
// partitions_up_to(m); first entry (empty partition) is 1.
Eigen::VectorXd feature_vector_E(const Eigen::VectorXd& x, int m);

// Index bookkeeping for weak compositions of each degree j <= m into k
// parts, in the enumeration order of weak_compositions(j, k).
class CompositionIndex {
 public:
  CompositionIndex(int m, int k);

  int k() const { return k_; }
  int m() const { return m_; }
  int count(int j) const { return static_cast<int>(comps_[j].size()); }
  const std::vector<int>& composition(int j, int idx) const {
    return comps_[j][idx];
  }
  int index_of(int j, const std::vector<int>& comp) const;
  // Predecessors used by the polarization recurrence: for composition idx of
  // degree j, the list of (column l, index of comp - delta_l in degree j-1).
  const std::vector<std::pair<int, int>>& down(int j, int idx) const {
    return down_[j][idx];
  }

 private:
  int m_, k_;
  std::vector<std::vector<std::vector<int>>> comps_;
  std::vector<std::vector<std::vector<std::pair<int, int>>>> down_;
};

struct PolarizedEspTable {
  int d = 0, k = 0, m = 0;
  // values[j][idx] = Pol_alpha(e_j)(X) with alpha = index.composition(j, idx)
  std::vector<std::vector<double>> values;

  double value(const CompositionIndex& index, int j,
               const std::vector<int>& alpha) const {
    return values[j][index.index_of(j, alpha)];
  }
};

PolarizedEspTable polarized_esp_all(const Eigen::MatrixXd& x, int m);
PolarizedEspTable polarized_esp_all(const Eigen::MatrixXd& x, int m,
                                    const CompositionIndex& index);

// Feature vector over all k-vector partitions of j <= m in the canonical
// order of vector_partitions(m, k); entries are products of polarized ESPs.
Eigen::VectorXd feature_vector_P(const Eigen::MatrixXd& x, int m);

// Oracle-scale monomial symmetric polynomial: the sum over the distinct
// coordinate rearrangements of x^lambda. Enumeration is factorial in d.
double monomial_symmetric(const Eigen::VectorXd& x, const Partition& lam);

// Number of 0/1 matrices with row sums lam and column sums mu.
std::int64_t binary_matrix_count(const Partition& lam, const Partition& mu);

// Change-of-basis data between partition-indexed ESPs and monomial symmetric
// polynomials: e_lam = sum_mu B[lam][mu] m_mu (block diagonal by degree),
// plus the diagonal Taylor coefficients (1/j!) * multinomial(j; lam) * eta(lam).
struct BasisChangeData {
  Eigen::MatrixXd b;
  Eigen::MatrixXd b_inv;
  Eigen::VectorXd c_taylor;
  std::vector<Partition> index;
};

BasisChangeData taylor_basis_change(int m);

// Monomial symmetric values for all partitions of j <= m, computed through
// the ESP features and the basis change (fast in d, unlike the oracle).
Eigen::VectorXd monomial_feature_vector(const Eigen::VectorXd& x,
                                        const BasisChangeData& basis);

}  // namespace invkern
