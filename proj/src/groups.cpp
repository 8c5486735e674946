#include "invkern/groups.hpp"

#include <algorithm>
#include <numeric>

namespace invkern {

namespace {

Eigen::MatrixXd shift_power(int d, int r) {
  // S^r with S e_i = e_{i+1 mod d}.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) m((i + r) % d, i) = 1.0;
  return m;
}

int upper_index(int i, int j, int d) {
  // Row-major position of (i, j), i <= j, among upper-triangle pairs.
  return i * d - i * (i - 1) / 2 + (j - i);
}

Eigen::MatrixXd induced_graph(const std::vector<int>& sigma) {
  int d = static_cast<int>(sigma.size());
  int n = d * (d + 1) / 2;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      int a = sigma[i], b = sigma[j];
      if (a > b) std::swap(a, b);
      m(upper_index(a, b, d), upper_index(i, j, d)) = 1.0;
    }
  }
  return m;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd m(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return m;
}

std::vector<int> random_permutation(int d, Rng& rng) {
  std::vector<int> sigma(d);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (int i = d - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(sigma[i], sigma[j]);
  }
  return sigma;
}

Eigen::MatrixXd rotation4_generator() {
  Eigen::MatrixXd r(2, 2);
  r << 0.0, -1.0, 1.0, 0.0;
  return r;
}

}  // namespace

std::string family_name(GroupFamily f) {
  switch (f) {
    case GroupFamily::permutation: return "permutation";
    case GroupFamily::orthogonal: return "orthogonal";
    case GroupFamily::cyclic: return "cyclic";
    case GroupFamily::rotation4: return "rotation4";
    case GroupFamily::cyclic2d: return "cyclic2d";
    case GroupFamily::set_permutation: return "set_permutation";
    case GroupFamily::graph_conjugation: return "graph_conjugation";
  }
  return "unknown";
}

int representation_dim(GroupFamily f, const GroupParams& p) {
  switch (f) {
    case GroupFamily::permutation:
    case GroupFamily::orthogonal:
    case GroupFamily::cyclic: return p.d;
    case GroupFamily::rotation4: return 2;
    case GroupFamily::cyclic2d: return p.d * p.d;
    case GroupFamily::set_permutation: return p.d * p.k;
    case GroupFamily::graph_conjugation: return p.d * (p.d + 1) / 2;
  }
  return 0;
}

Eigen::MatrixXd permutation_matrix(const std::vector<int>& sigma) {
  int d = static_cast<int>(sigma.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) m(sigma[i], i) = 1.0;
  return m;
}

std::vector<GroupElement> enumerate_group(GroupFamily f, const GroupParams& p,
                                          std::int64_t cap) {
  if (p.d < 1) throw input_error("enumerate_group: d must be >= 1");
  std::int64_t order = 0;
  switch (f) {
    case GroupFamily::permutation:
    case GroupFamily::set_permutation:
    case GroupFamily::graph_conjugation: order = factorial(p.d); break;
    case GroupFamily::cyclic: order = p.d; break;
    case GroupFamily::rotation4: order = 4; break;
    case GroupFamily::cyclic2d: order = checked_mul(p.d, p.d); break;
    case GroupFamily::orthogonal:
      throw input_error("enumerate_group: orthogonal group is not finite");
  }
  if (order > cap) {
    throw size_error("enumerate_group: |G| = " + std::to_string(order) +
                     " exceeds cap " + std::to_string(cap));
  }

  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(order));
  switch (f) {
    case GroupFamily::permutation:
    case GroupFamily::set_permutation:
    case GroupFamily::graph_conjugation: {
      std::vector<int> sigma(p.d);
      std::iota(sigma.begin(), sigma.end(), 0);
      do {
        Eigen::MatrixXd m;
        if (f == GroupFamily::permutation) {
          m = permutation_matrix(sigma);
        } else if (f == GroupFamily::set_permutation) {
          m = kron(permutation_matrix(sigma), Eigen::MatrixXd::Identity(p.k, p.k));
        } else {
          m = induced_graph(sigma);
        }
        out.push_back(GroupElement{std::move(m), f});
      } while (std::next_permutation(sigma.begin(), sigma.end()));
      break;
    }
    case GroupFamily::cyclic:
      for (int r = 0; r < p.d; ++r) {
        out.push_back(GroupElement{shift_power(p.d, r), f});
      }
      break;
    case GroupFamily::rotation4: {
      Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
      for (int r = 0; r < 4; ++r) {
        out.push_back(GroupElement{g, f});
        g = rotation4_generator() * g;
      }
      break;
    }
    case GroupFamily::cyclic2d:
      for (int r = 0; r < p.d; ++r) {
        for (int s = 0; s < p.d; ++s) {
          out.push_back(GroupElement{kron(shift_power(p.d, r), shift_power(p.d, s)), f});
        }
      }
      break;
    case GroupFamily::orthogonal: break;  // unreachable
  }
  return out;
}

GroupElement sample_permutation(int d, Rng& rng) {
  if (d < 1) throw input_error("sample_permutation: d must be >= 1");
  return GroupElement{permutation_matrix(random_permutation(d, rng)),
                      GroupFamily::permutation};
}

GroupElement sample_orthogonal(int d, Rng& rng) {
  if (d < 1) throw input_error("sample_orthogonal: d must be >= 1");
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  double residual = (q.transpose() * q - Eigen::MatrixXd::Identity(d, d))
                        .cwiseAbs()
                        .maxCoeff();
  if (residual > 1e-10) {
    throw numeric_error("sample_orthogonal: orthogonality residual too large");
  }
  return GroupElement{std::move(q), GroupFamily::orthogonal};
}

Eigen::VectorXd act(const GroupElement& g, const Eigen::VectorXd& x) {
  if (g.matrix.cols() != x.size()) {
    throw input_error("act: dimension mismatch");
  }
  return g.matrix * x;
}

Eigen::VectorXd sym_to_coords(const Eigen::MatrixXd& s) {
  int d = static_cast<int>(s.rows());
  if (s.cols() != d) throw input_error("sym_to_coords: matrix must be square");
  Eigen::VectorXd v(d * (d + 1) / 2);
  int t = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) v(t++) = s(i, j);
  }
  return v;
}

Eigen::MatrixXd coords_to_sym(const Eigen::VectorXd& v, int d) {
  if (v.size() != d * (d + 1) / 2) {
    throw input_error("coords_to_sym: length does not match dimension");
  }
  Eigen::MatrixXd s(d, d);
  int t = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      s(i, j) = v(t);
      s(j, i) = v(t);
      ++t;
    }
  }
  return s;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& x) {
  Eigen::VectorXd v(x.size());
  int t = 0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) v(t++) = x(i, j);
  }
  return v;
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw input_error("unflatten: size mismatch");
  }
  Eigen::MatrixXd x(rows, cols);
  int t = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) x(i, j) = v(t++);
  }
  return x;
}

GroupSampler::GroupSampler(GroupFamily family, GroupParams params,
                           std::uint64_t seed)
    : family_(family), params_(params), rng_(seed) {
  if (params_.d < 1) throw input_error("GroupSampler: d must be >= 1");
  if (params_.k < 1) throw input_error("GroupSampler: k must be >= 1");
}

GroupElement GroupSampler::sample() {
  switch (family_) {
    case GroupFamily::permutation: return sample_permutation(params_.d, rng_);
    case GroupFamily::orthogonal: return sample_orthogonal(params_.d, rng_);
    case GroupFamily::cyclic: {
      int r = static_cast<int>(rng_.below(params_.d));
      return GroupElement{shift_power(params_.d, r), family_};
    }
    case GroupFamily::rotation4: {
      int r = static_cast<int>(rng_.below(4));
      Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
      for (int t = 0; t < r; ++t) g = rotation4_generator() * g;
      return GroupElement{std::move(g), family_};
    }
    case GroupFamily::cyclic2d: {
      int r = static_cast<int>(rng_.below(params_.d));
      int s = static_cast<int>(rng_.below(params_.d));
      return GroupElement{kron(shift_power(params_.d, r), shift_power(params_.d, s)),
                          family_};
    }
    case GroupFamily::set_permutation: {
      auto sigma = random_permutation(params_.d, rng_);
      return GroupElement{kron(permutation_matrix(sigma),
                               Eigen::MatrixXd::Identity(params_.k, params_.k)),
                          family_};
    }
    case GroupFamily::graph_conjugation: {
      auto sigma = random_permutation(params_.d, rng_);
      return GroupElement{induced_graph(sigma), family_};
    }
  }
  throw input_error("GroupSampler: unknown family");
}

std::vector<GroupElement> GroupSampler::exhaustive(std::int64_t cap) const {
  return enumerate_group(family_, params_, cap);
}

}  // namespace invkern
