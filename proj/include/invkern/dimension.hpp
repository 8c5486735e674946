#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "invkern/combinatorics.hpp"
#include "invkern/groups.hpp"

namespace invkern {

enum class DimMethod { closed_form, exhaustive_character, mc_eigen, mc_permanent };

enum class TraceFormula { eigen, permanent };

struct DimensionResult {
  double value = 0.0;
  DimMethod method = DimMethod::closed_form;
  std::int64_t n_samples = 0;  // 0 for exact methods
  double stderr_ = 0.0;        // 0 for exact methods
  // Running means at checkpoints, for convergence plots (Monte Carlo only).
  std::vector<std::pair<std::int64_t, double>> running;
};

// dim of degree-<=m coordinate-permutation invariants on R^d:
// sum_{j<=m} p_d(j); equals sum_{j<=m} p(j) once d >= m.
std::int64_t dim_permutation(int m, int d);

// dim of degree-<=m row-permutation invariants on R^{dxk}, valid for d >= m:
// sum_{j<=m} sum_{partitions a of j} prod_i binom(c_k(i)+mu_i-1, mu_i).
std::int64_t dim_set_permutation(int m, int k, int d);

// Number of symmetric non-negative integer matrices with row sums alpha.
std::int64_t count_symmetric_matrices(const Partition& alpha);

// Upper bounds for conjugation invariants on symmetric matrices (d >= 2m)
// and for point-cloud invariants (permutations x simultaneous O(k)).
std::int64_t dim_graphs_upper(int m);
std::int64_t dim_point_clouds_upper(int m);

// Exact dimension for Z/dZ cyclic coordinate shifts, stated for m < d.
std::int64_t dim_cyclic(int m, int d);

// Exact dimension for Z/dZ x Z/dZ acting on dxd arrays by 2D cyclic shifts.
std::int64_t dim_image_2dcyclic(int m, int d);

// Exact permanent by Ryser's inclusion-exclusion; n <= 20.
double permanent(const Eigen::MatrixXd& m);

// Trace of the action induced on polynomials of degree <= m.
//
// Spectral route: the trace equals sum_{j<=m} h_j(eigenvalues), computed
// without an eigendecomposition from power sums p_r = Trace(M^r) via
// j h_j = sum_{r=1}^{j} p_r h_{j-r}.
double induced_trace_eigen(const GroupElement& g, int m);

// Permanent route: sum over weak compositions alpha of j <= m (at most j
// nonzero entries) of per(g[alpha]) / prod_i alpha_i!, where g[alpha]
// repeats row/column i with multiplicity alpha_i.
double induced_trace_permanent(const GroupElement& g, int m);

// Monte-Carlo estimate of the invariant dimension: empirical mean of the
// chosen induced-trace formula over i.i.d. samples from the sampler.
DimensionResult mc_dimension(GroupSampler& sampler, int m,
                             std::int64_t n_samples,
                             TraceFormula formula = TraceFormula::eigen,
                             const std::vector<std::int64_t>& checkpoints = {});

// (1/|G|) sum_g induced_trace_eigen(g, m), rounded half-to-even; the rounding
// residual must stay within 1e-6.
DimensionResult exhaustive_dimension(const std::vector<GroupElement>& elements,
                                     int m);

std::vector<std::int64_t> default_checkpoints(std::int64_t n_samples);

}  // namespace invkern
