#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "invkern/combinatorics.hpp"
#include "invkern/groups.hpp"
#include "invkern/symfun.hpp"

namespace invkern {

enum class BasisKind { partition_esp, vector_partition_polarized_esp };

std::string basis_kind_name(BasisKind k);

// A degree-m invariant kernel as a symmetric bilinear form over a free
// basis: K(x, y) = F(x)^T C F(y). The index list pins the coordinate order.
struct KernelSpec {
  int degree = 0;
  BasisKind kind = BasisKind::partition_esp;
  int k = 1;  // column count for the vector-partition basis
  Eigen::MatrixXd c;
  std::vector<Partition> partition_index;
  std::vector<VectorPartition> vp_index;

  Eigen::Index size() const { return c.rows(); }
};

// Symmetry within 1e-12 and side length == basis cardinality.
void validate_spec(const KernelSpec& spec);

// E_m(x)^T C E_m(y); arguments may live in different dimensions.
double eval_perm_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                        const KernelSpec& spec);

// P_m(X)^T C P_m(Y); row counts may differ, column counts must match spec.k.
double eval_set_kernel(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       const KernelSpec& spec);

// Spec whose evaluation equals the S_d average of sum_{j<=m} <x,sy>^j / j!
// at the construction dimension d (requires d >= m). The matrix acts on the
// free ESP basis, so evaluating zero-padded inputs gives identical values.
KernelSpec taylor_invariant_spec(int m, int d);

// Set analogue: the exact S_d average of the Frobenius Taylor kernel
// sum_{j<=m} <X,Y>_F^j / j! on d x k matrices, expressed over the
// polarized-ESP product basis.
KernelSpec set_taylor_invariant_spec(int m, int k, int d);

// sum_{j=0}^m <x,y>^j / j! on equal-length vectors.
double taylor_baseline(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int m);

// (1/d!) sum_sigma <u, sigma v>^r, computed from monomial symmetric cross
// terms rather than the d! sum.
double avg_inner_power(const Eigen::VectorXd& u, const Eigen::VectorXd& v, int r);

// The product-of-averaged-moments set kernel:
//   sum_{j<=m} sum_{lambda in C_k(j)} prod_i s_{i,lambda_i},
// with s_{i,r} = (1/d!) sum_sigma <x_i, sigma y_i>^r per column i. Each
// column factor is averaged independently, so the k=1 case reduces exactly
// to sum_{j<=m} (1/d!) sum_sigma <x, sigma y>^j (no 1/j! weights).
double set_taylor_kernel(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int m);

// Same kernel with per-dataset feature caching for Gram assembly.
class SetTaylorEvaluator {
 public:
  SetTaylorEvaluator(int m, int k, int d);

  // Per-column monomial symmetric features; one row per column of x.
  Eigen::MatrixXd features(const Eigen::MatrixXd& x) const;
  double eval_features(const Eigen::MatrixXd& fx, const Eigen::MatrixXd& fy) const;
  double eval(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const;

 private:
  int m_, k_, d_;
  BasisChangeData basis_;
  Eigen::VectorXd weights_;                    // per partition entry
  std::vector<std::pair<int, int>> blocks_;    // (offset, count) per degree
  std::vector<std::vector<WeakComposition>> comps_;  // C_k(j) per degree
};

// Exact group average of a kernel. One-sided (1/|G|) sum_g K(x, g y) is
// valid whenever K(gx, gy) = K(x, y); the two-sided form averages over
// independent pairs. Evaluation count is capped at 1e6.
double brute_force_symmetrize(
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& kernel,
    const std::vector<GroupElement>& elements, const Eigen::VectorXd& x,
    const Eigen::VectorXd& y, bool two_sided = false);

Eigen::MatrixXd gram(
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& kernel,
    const std::vector<Eigen::VectorXd>& points);
Eigen::MatrixXd gram(
    const std::function<double(const Eigen::MatrixXd&, const Eigen::MatrixXd&)>& kernel,
    const std::vector<Eigen::MatrixXd>& points);

// Phi C Phi^T with one feature pass per point.
Eigen::MatrixXd gram_from_spec(const KernelSpec& spec,
                               const std::vector<Eigen::VectorXd>& points);

// Number of singular values above rel_tol times the largest.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

// Oracle-scale multisymmetric monomial: sum over distinct assignments of the
// exponent rows of the vector partition to the rows of x (factorial in d).
double multisym_monomial(const Eigen::MatrixXd& x, const VectorPartition& vp);

nlohmann::json kernel_spec_to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const nlohmann::json& j);

}  // namespace invkern
