#include "invkern/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "invkern/rng.hpp"

namespace invkern {

namespace {

constexpr std::int64_t kSymmetrizeCap = 1'000'000;
constexpr int kOracleMaxDim = 8;

double falling_factorial(int d, int l) {
  double prod = 1.0;
  for (int i = 0; i < l; ++i) prod *= static_cast<double>(d - i);
  return prod;
}

int vp_degree(const VectorPartition& vp) { return vp.total; }

// eta of a vector partition: factorials of the multiplicities of its parts.
double vp_eta(const VectorPartition& vp) {
  double eta = 1.0;
  std::size_t i = 0;
  while (i < vp.parts.size()) {
    std::size_t j = i;
    while (j < vp.parts.size() && vp.parts[j] == vp.parts[i]) ++j;
    eta *= static_cast<double>(factorial(static_cast<int>(j - i)));
    i = j;
  }
  return eta;
}

// multinomial(j; vp) = j! / prod over all entries of the exponent rows.
double vp_multinomial(const VectorPartition& vp) {
  double num = static_cast<double>(factorial(vp.total));
  for (const auto& part : vp.parts) {
    for (int v : part) num /= static_cast<double>(factorial(v));
  }
  return num;
}

std::vector<int> vp_multidegree(const VectorPartition& vp, int k) {
  std::vector<int> alpha(k, 0);
  for (const auto& part : vp.parts) {
    for (int c = 0; c < k; ++c) alpha[c] += part[c];
  }
  return alpha;
}

}  // namespace

std::string basis_kind_name(BasisKind k) {
  return k == BasisKind::partition_esp ? "partition-esp"
                                       : "vector-partition-polarized-esp";
}

void validate_spec(const KernelSpec& spec) {
  Eigen::Index expected =
      spec.kind == BasisKind::partition_esp
          ? static_cast<Eigen::Index>(spec.partition_index.size())
          : static_cast<Eigen::Index>(spec.vp_index.size());
  if (spec.c.rows() != spec.c.cols() || spec.c.rows() != expected) {
    throw input_error("KernelSpec: C side length does not match basis size");
  }
  double scale = std::max(1.0, spec.c.cwiseAbs().maxCoeff());
  if ((spec.c - spec.c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw input_error("KernelSpec: C is not symmetric");
  }
}

double eval_perm_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                        const KernelSpec& spec) {
  if (spec.kind != BasisKind::partition_esp) {
    throw input_error("eval_perm_kernel: spec basis is not partition-esp");
  }
  Eigen::VectorXd fx = feature_vector_E(x, spec.degree);
  Eigen::VectorXd fy = feature_vector_E(y, spec.degree);
  return fx.dot(spec.c * fy);
}

double eval_set_kernel(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       const KernelSpec& spec) {
  if (spec.kind != BasisKind::vector_partition_polarized_esp) {
    throw input_error("eval_set_kernel: spec basis is not vector-partition");
  }
  if (x.cols() != spec.k || y.cols() != spec.k) {
    throw input_error("eval_set_kernel: column count does not match spec");
  }
  Eigen::VectorXd fx = feature_vector_P(x, spec.degree);
  Eigen::VectorXd fy = feature_vector_P(y, spec.degree);
  return fx.dot(spec.c * fy);
}

KernelSpec taylor_invariant_spec(int m, int d) {
  if (m < 0) throw input_error("taylor_invariant_spec: negative degree");
  if (d < m) {
    throw regime_error("taylor_invariant_spec: requires d >= m");
  }
  BasisChangeData basis = taylor_basis_change(m);
  Eigen::Index n = basis.b.rows();
  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    diag(i) = basis.c_taylor(i) /
              falling_factorial(d, basis.index[i].num_parts());
  }
  KernelSpec spec;
  spec.degree = m;
  spec.kind = BasisKind::partition_esp;
  spec.k = 1;
  spec.partition_index = basis.index;
  spec.c = basis.b_inv.transpose() * diag.asDiagonal() * basis.b_inv;
  spec.c = ((spec.c + spec.c.transpose()) / 2.0).eval();
  return spec;
}

double taylor_baseline(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int m) {
  if (x.size() != y.size()) {
    throw input_error("taylor_baseline: dimension mismatch");
  }
  double ip = x.dot(y);
  double term = 1.0, total = 1.0;
  for (int j = 1; j <= m; ++j) {
    term *= ip / static_cast<double>(j);
    total += term;
  }
  return total;
}

double avg_inner_power(const Eigen::VectorXd& u, const Eigen::VectorXd& v, int r) {
  if (u.size() != v.size()) {
    throw input_error("avg_inner_power: dimension mismatch");
  }
  if (r == 0) return 1.0;
  int d = static_cast<int>(u.size());
  BasisChangeData basis = taylor_basis_change(r);
  Eigen::VectorXd mu = monomial_feature_vector(u, basis);
  Eigen::VectorXd mv = monomial_feature_vector(v, basis);
  double rfact = static_cast<double>(factorial(r));
  double total = 0.0;
  for (std::size_t i = 0; i < basis.index.size(); ++i) {
    const Partition& lam = basis.index[i];
    if (lam.sum != r) continue;
    double w = rfact * basis.c_taylor(static_cast<Eigen::Index>(i)) /
               falling_factorial(d, lam.num_parts());
    total += w * mu(static_cast<Eigen::Index>(i)) * mv(static_cast<Eigen::Index>(i));
  }
  return total;
}

SetTaylorEvaluator::SetTaylorEvaluator(int m, int k, int d)
    : m_(m), k_(k), d_(d), basis_(taylor_basis_change(m)) {
  if (m < 0) throw input_error("SetTaylorEvaluator: negative degree");
  if (k < 1) throw input_error("SetTaylorEvaluator: k must be >= 1");
  if (d < m) throw regime_error("SetTaylorEvaluator: requires d >= m");
  Eigen::Index n = static_cast<Eigen::Index>(basis_.index.size());
  weights_ = Eigen::VectorXd::Zero(n);
  blocks_.assign(m + 1, {0, 0});
  int offset = 0;
  for (int j = 0; j <= m; ++j) {
    int count = static_cast<int>(partition_count(j));
    blocks_[j] = {offset, count};
    offset += count;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Partition& lam = basis_.index[i];
    weights_(i) = static_cast<double>(factorial(lam.sum)) * basis_.c_taylor(i) /
                  falling_factorial(d, lam.num_parts());
  }
  comps_.resize(m + 1);
  for (int j = 0; j <= m; ++j) comps_[j] = weak_compositions(j, k);
}

Eigen::MatrixXd SetTaylorEvaluator::features(const Eigen::MatrixXd& x) const {
  if (x.cols() != k_) throw input_error("SetTaylorEvaluator: wrong column count");
  if (x.rows() != d_) throw input_error("SetTaylorEvaluator: wrong row count");
  Eigen::MatrixXd f(k_, basis_.b.rows());
  for (int i = 0; i < k_; ++i) {
    f.row(i) = monomial_feature_vector(x.col(i), basis_).transpose();
  }
  return f;
}

double SetTaylorEvaluator::eval_features(const Eigen::MatrixXd& fx,
                                         const Eigen::MatrixXd& fy) const {
  // s(i, r) = (1/d!) sum_sigma <x_i, sigma y_i>^r from the degree-r block.
  Eigen::MatrixXd s(k_, m_ + 1);
  for (int i = 0; i < k_; ++i) {
    s(i, 0) = 1.0;
    for (int r = 1; r <= m_; ++r) {
      auto [off, cnt] = blocks_[r];
      double acc = 0.0;
      for (int t = 0; t < cnt; ++t) {
        acc += weights_(off + t) * fx(i, off + t) * fy(i, off + t);
      }
      s(i, r) = acc;
    }
  }
  double total = 0.0;
  for (int j = 0; j <= m_; ++j) {
    for (const auto& comp : comps_[j]) {
      double prod = 1.0;
      for (int i = 0; i < k_; ++i) prod *= s(i, comp.parts[i]);
      total += prod;
    }
  }
  return total;
}

double SetTaylorEvaluator::eval(const Eigen::MatrixXd& x,
                                const Eigen::MatrixXd& y) const {
  return eval_features(features(x), features(y));
}

double set_taylor_kernel(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int m) {
  if (x.cols() != y.cols()) {
    throw input_error("set_taylor_kernel: column counts differ");
  }
  if (x.rows() != y.rows()) {
    throw input_error("set_taylor_kernel: row counts differ");
  }
  SetTaylorEvaluator ev(m, static_cast<int>(x.cols()), static_cast<int>(x.rows()));
  return ev.eval(x, y);
}

double multisym_monomial(const Eigen::MatrixXd& x, const VectorPartition& vp) {
  int d = static_cast<int>(x.rows());
  int k = static_cast<int>(x.cols());
  if (d > kOracleMaxDim) {
    throw size_error("multisym_monomial: oracle limited to d <= 8");
  }
  if (vp.num_parts() > d) return 0.0;
  for (const auto& part : vp.parts) {
    if (static_cast<int>(part.size()) != k) {
      throw input_error("multisym_monomial: part length does not match columns");
    }
  }
  std::vector<std::vector<int>> exps(vp.parts.begin(), vp.parts.end());
  exps.resize(d, std::vector<int>(k, 0));
  std::sort(exps.begin(), exps.end());
  double total = 0.0;
  do {
    double prod = 1.0;
    for (int i = 0; i < d; ++i) {
      for (int c = 0; c < k; ++c) {
        for (int e = 0; e < exps[i][c]; ++e) prod *= x(i, c);
      }
    }
    total += prod;
  } while (std::next_permutation(exps.begin(), exps.end()));
  return total;
}

KernelSpec set_taylor_invariant_spec(int m, int k, int d) {
  if (m < 0) throw input_error("set_taylor_invariant_spec: negative degree");
  if (k < 1) throw input_error("set_taylor_invariant_spec: k must be >= 1");
  if (d < m) throw regime_error("set_taylor_invariant_spec: requires d >= m");
  auto vps = vector_partitions(m, k);
  Eigen::Index n = static_cast<Eigen::Index>(vps.size());

  // Group the basis indices by multi-degree: the expansion of a polarized-ESP
  // product only involves multisymmetric monomials of the same multi-degree,
  // so the change of basis is block diagonal over these groups.
  std::map<std::vector<int>, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < n; ++i) {
    groups[vp_multidegree(vps[i], k)].push_back(i);
  }

  int d0 = std::max(m, 1);  // generic evaluation dimension
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [alpha, idx] : groups) {
    Eigen::Index t = static_cast<Eigen::Index>(idx.size());
    bool ok = false;
    for (std::uint64_t attempt = 0; attempt < 3 && !ok; ++attempt) {
      Rng rng(derive_seed(0x5e7ba515u, attempt * 977 + idx.front()));
      std::vector<Eigen::MatrixXd> pts;
      for (Eigen::Index p = 0; p < t + 2; ++p) {
        Eigen::MatrixXd pt(d0, k);
        for (int r = 0; r < d0; ++r) {
          for (int c = 0; c < k; ++c) pt(r, c) = rng.normal();
        }
        pts.push_back(std::move(pt));
      }
      Eigen::MatrixXd evals_e(t, t), evals_m(t, t);
      std::vector<Eigen::VectorXd> pfeat;
      for (Eigen::Index p = 0; p < t + 2; ++p) {
        pfeat.push_back(feature_vector_P(pts[p], m));
      }
      for (Eigen::Index a = 0; a < t; ++a) {
        for (Eigen::Index p = 0; p < t; ++p) {
          evals_e(a, p) = pfeat[p](idx[a]);
          evals_m(a, p) = multisym_monomial(pts[p], vps[idx[a]]);
        }
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(evals_m.transpose());
      if (!lu.isInvertible()) continue;
      Eigen::MatrixXd block = lu.solve(evals_e.transpose()).transpose();
      // Entries are counts; round and verify on the two held-out points.
      Eigen::MatrixXd rounded = block.array().round();
      if ((block - rounded).cwiseAbs().maxCoeff() > 1e-6) continue;
      bool verified = true;
      for (Eigen::Index p = t; p < t + 2 && verified; ++p) {
        for (Eigen::Index a = 0; a < t && verified; ++a) {
          double lhs = pfeat[p](idx[a]);
          double rhs = 0.0;
          for (Eigen::Index c = 0; c < t; ++c) {
            rhs += rounded(a, c) * multisym_monomial(pts[p], vps[idx[c]]);
          }
          if (std::abs(lhs - rhs) > 1e-8 * std::max(1.0, std::abs(lhs))) {
            verified = false;
          }
        }
      }
      if (!verified) continue;
      for (Eigen::Index a = 0; a < t; ++a) {
        for (Eigen::Index c = 0; c < t; ++c) b(idx[a], idx[c]) = rounded(a, c);
      }
      ok = true;
    }
    if (!ok) {
      throw numeric_error("set_taylor_invariant_spec: basis change not resolved");
    }
  }

  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const VectorPartition& vp = vps[i];
    diag(i) = vp_multinomial(vp) * vp_eta(vp) /
              (static_cast<double>(factorial(vp_degree(vp))) *
               falling_factorial(d, vp.num_parts()));
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  if (!lu.isInvertible()) {
    throw numeric_error("set_taylor_invariant_spec: singular basis change");
  }
  Eigen::MatrixXd b_inv = lu.inverse();

  KernelSpec spec;
  spec.degree = m;
  spec.kind = BasisKind::vector_partition_polarized_esp;
  spec.k = k;
  spec.vp_index = std::move(vps);
  spec.c = b_inv.transpose() * diag.asDiagonal() * b_inv;
  spec.c = ((spec.c + spec.c.transpose()) / 2.0).eval();
  return spec;
}

double brute_force_symmetrize(
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& kernel,
    const std::vector<GroupElement>& elements, const Eigen::VectorXd& x,
    const Eigen::VectorXd& y, bool two_sided) {
  if (elements.empty()) throw input_error("brute_force_symmetrize: empty group");
  std::int64_t n = static_cast<std::int64_t>(elements.size());
  std::int64_t evals = two_sided ? checked_mul(n, n) : n;
  if (evals > kSymmetrizeCap) {
    throw size_error("brute_force_symmetrize: " + std::to_string(evals) +
                     " evaluations exceed cap");
  }
  double total = 0.0;
  if (two_sided) {
    for (const auto& g : elements) {
      Eigen::VectorXd gx = act(g, x);
      for (const auto& h : elements) total += kernel(gx, act(h, y));
    }
  } else {
    for (const auto& g : elements) total += kernel(x, act(g, y));
  }
  return total / static_cast<double>(evals);
}

Eigen::MatrixXd gram(
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& kernel,
    const std::vector<Eigen::VectorXd>& points) {
  Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double v = kernel(points[i], points[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd gram(
    const std::function<double(const Eigen::MatrixXd&, const Eigen::MatrixXd&)>& kernel,
    const std::vector<Eigen::MatrixXd>& points) {
  Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double v = kernel(points[i], points[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd gram_from_spec(const KernelSpec& spec,
                               const std::vector<Eigen::VectorXd>& points) {
  if (spec.kind != BasisKind::partition_esp) {
    throw input_error("gram_from_spec: spec basis is not partition-esp");
  }
  Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd phi(n, spec.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    phi.row(i) = feature_vector_E(points[i], spec.degree).transpose();
  }
  Eigen::MatrixXd k = phi * spec.c * phi.transpose();
  return ((k + k.transpose()) / 2.0).eval();
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (rel_tol <= 0.0 || rel_tol >= 1.0) {
    throw input_error("numerical_rank: rel_tol must be in (0,1)");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  double top = sv(0);
  if (top <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * top) ++rank;
  }
  return rank;
}

nlohmann::json kernel_spec_to_json(const KernelSpec& spec) {
  validate_spec(spec);
  nlohmann::json j;
  j["degree"] = spec.degree;
  j["basis_kind"] = basis_kind_name(spec.kind);
  j["k"] = spec.k;
  nlohmann::json index = nlohmann::json::array();
  if (spec.kind == BasisKind::partition_esp) {
    for (const auto& p : spec.partition_index) index.push_back(p.parts);
  } else {
    for (const auto& vp : spec.vp_index) index.push_back(vp.parts);
  }
  j["index_list"] = index;
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(spec.c.size()));
  for (Eigen::Index r = 0; r < spec.c.rows(); ++r) {
    for (Eigen::Index col = 0; col < spec.c.cols(); ++col) {
      c.push_back(spec.c(r, col));
    }
  }
  j["C"] = c;
  return j;
}

KernelSpec kernel_spec_from_json(const nlohmann::json& j) {
  KernelSpec spec;
  spec.degree = j.at("degree").get<int>();
  std::string kind = j.at("basis_kind").get<std::string>();
  if (kind == "partition-esp") {
    spec.kind = BasisKind::partition_esp;
  } else if (kind == "vector-partition-polarized-esp") {
    spec.kind = BasisKind::vector_partition_polarized_esp;
  } else {
    throw input_error("kernel_spec_from_json: unknown basis kind " + kind);
  }
  spec.k = j.at("k").get<int>();
  Eigen::Index n = static_cast<Eigen::Index>(j.at("index_list").size());
  spec.c.resize(n, n);
  const auto& c = j.at("C");
  if (static_cast<Eigen::Index>(c.size()) != n * n) {
    throw input_error("kernel_spec_from_json: C length does not match index");
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index col = 0; col < n; ++col) {
      spec.c(r, col) = c[static_cast<std::size_t>(r * n + col)].get<double>();
    }
  }
  // The index list must be exactly the canonical enumeration.
  if (spec.kind == BasisKind::partition_esp) {
    spec.partition_index = partitions_up_to(spec.degree);
    if (static_cast<Eigen::Index>(spec.partition_index.size()) != n) {
      throw input_error("kernel_spec_from_json: index size mismatch");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      auto parts = j.at("index_list")[static_cast<std::size_t>(i)]
                       .get<std::vector<int>>();
      if (parts != spec.partition_index[static_cast<std::size_t>(i)].parts) {
        throw input_error("kernel_spec_from_json: non-canonical index order");
      }
    }
  } else {
    spec.vp_index = vector_partitions(spec.degree, spec.k);
    if (static_cast<Eigen::Index>(spec.vp_index.size()) != n) {
      throw input_error("kernel_spec_from_json: index size mismatch");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      auto parts = j.at("index_list")[static_cast<std::size_t>(i)]
                       .get<std::vector<std::vector<int>>>();
      if (parts != spec.vp_index[static_cast<std::size_t>(i)].parts) {
        throw input_error("kernel_spec_from_json: non-canonical index order");
      }
    }
  }
  validate_spec(spec);
  return spec;
}

}  // namespace invkern
