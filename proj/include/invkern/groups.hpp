#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "invkern/errors.hpp"
#include "invkern/rng.hpp"

namespace invkern {

// The group families whose elements we materialize as real matrices. Apart
// from `orthogonal` every family is finite and acts by permuting coordinates
// of the listed representation space:
//   permutation       S_d on R^d
//   cyclic            Z/dZ on R^d by cyclic shift
//   rotation4         Z/4Z on R^2, generator (a,b) -> (-b,a)
//   cyclic2d          Z/dZ x Z/dZ on R^{dxd}, (r,r') . X = S^r X (S^r')^T
//   set_permutation   S_d on R^{dxk} by row permutation
//   graph_conjugation S_d on symmetric dxd matrices, realized on the
//                     d(d+1)/2 upper-triangle coordinates
enum class GroupFamily {
  permutation,
  orthogonal,
  cyclic,
  rotation4,
  cyclic2d,
  set_permutation,
  graph_conjugation,
};

std::string family_name(GroupFamily f);

struct GroupElement {
  Eigen::MatrixXd matrix;
  GroupFamily family = GroupFamily::permutation;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

struct GroupParams {
  int d = 1;
  int k = 1;  // column count for set_permutation, ignored elsewhere
};

// Dimension of the representation space an element of the family acts on.
int representation_dim(GroupFamily f, const GroupParams& p);

// Exhaustive enumeration of a finite family, identity first, each element
// exactly once. Throws size_error when |G| exceeds the cap (default 10!).
std::vector<GroupElement> enumerate_group(GroupFamily f, const GroupParams& p,
                                          std::int64_t cap = 3628800);

GroupElement sample_permutation(int d, Rng& rng);

// Haar-distributed on O(d): QR of a Gaussian matrix with the R-diagonal sign
// correction. Verifies the orthogonality residual before returning.
GroupElement sample_orthogonal(int d, Rng& rng);

// Applies the element to a point of its representation space.
Eigen::VectorXd act(const GroupElement& g, const Eigen::VectorXd& x);

// Conveniences for families acting on matrix-shaped data.
Eigen::VectorXd sym_to_coords(const Eigen::MatrixXd& s);
Eigen::MatrixXd coords_to_sym(const Eigen::VectorXd& v, int d);
Eigen::VectorXd flatten(const Eigen::MatrixXd& x);   // row-major
Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int rows, int cols);

// Seeded sampler over one family; exhaustive() defers to enumerate_group.
class GroupSampler {
 public:
  GroupSampler(GroupFamily family, GroupParams params, std::uint64_t seed);

  GroupElement sample();
  std::vector<GroupElement> exhaustive(std::int64_t cap = 3628800) const;
  GroupFamily family() const { return family_; }
  const GroupParams& params() const { return params_; }

 private:
  GroupFamily family_;
  GroupParams params_;
  Rng rng_;
};

// Permutation matrix for sigma given as images: P e_i = e_{sigma(i)}.
Eigen::MatrixXd permutation_matrix(const std::vector<int>& sigma);

}  // namespace invkern
