#include "invkern/symfun.hpp"

#include <cmath>
#include <iostream>
#include <map>

namespace invkern {

namespace {
constexpr int kOracleMaxDim = 8;
constexpr int kMaxBasisDegree = 8;
}  // namespace

bool needs_conditioning_warning(const Eigen::VectorXd& x, int m) {
  if (m < 6 || x.size() == 0) return false;
  return x.cwiseAbs().maxCoeff() > 1e3;
}

EspTable esp_all(const Eigen::VectorXd& x, int m) {
  if (m < 0) throw input_error("esp_all: negative degree");
  if (needs_conditioning_warning(x, m)) {
    std::cerr << "invkern: esp_all conditioning warning: |x|_inf > 1e3 at m >= 6\n";
  }
  EspTable table;
  table.d = static_cast<int>(x.size());
  table.m = m;
  table.values.assign(static_cast<std::size_t>(m) + 1, 0.0);
  table.values[0] = 1.0;
  const double* data = x.data();
  for (int t = 0; t < table.d; ++t) {
    int top = std::min(m, t + 1);
    double xt = data[t];
    for (int j = top; j >= 1; --j) {
      table.values[j] += xt * table.values[j - 1];
    }
  }
  return table;
}

double esp_partition(const EspTable& table, const Partition& lam) {
  double prod = 1.0;
  for (int part : lam.parts) {
    if (part > table.m) {
      throw input_error("esp_partition: partition part exceeds table degree");
    }
    prod *= table.values[part];
  }
  return prod;
}

double esp_partition(const Eigen::VectorXd& x, const Partition& lam) {
  int top = lam.parts.empty() ? 0 : lam.parts.front();
  return esp_partition(esp_all(x, top), lam);
}

Eigen::VectorXd feature_vector_E(const Eigen::VectorXd& x, int m) {
  EspTable table = esp_all(x, m);
  auto index = partitions_up_to(m);
  Eigen::VectorXd out(static_cast<Eigen::Index>(index.size()));
  for (std::size_t i = 0; i < index.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = esp_partition(table, index[i]);
  }
  return out;
}

CompositionIndex::CompositionIndex(int m, int k) : m_(m), k_(k) {
  if (m < 0) throw input_error("CompositionIndex: negative degree");
  if (k < 1) throw input_error("CompositionIndex: k must be >= 1");
  comps_.resize(m + 1);
  down_.resize(m + 1);
  std::vector<std::map<std::vector<int>, int>> rank(m + 1);
  for (int j = 0; j <= m; ++j) {
    auto wc = weak_compositions(j, k);
    comps_[j].reserve(wc.size());
    for (std::size_t i = 0; i < wc.size(); ++i) {
      comps_[j].push_back(wc[i].parts);
      rank[j][wc[i].parts] = static_cast<int>(i);
    }
  }
  for (int j = 1; j <= m; ++j) {
    down_[j].resize(comps_[j].size());
    for (std::size_t i = 0; i < comps_[j].size(); ++i) {
      std::vector<int> alpha = comps_[j][i];
      for (int l = 0; l < k; ++l) {
        if (alpha[l] == 0) continue;
        alpha[l] -= 1;
        down_[j][i].emplace_back(l, rank[j - 1].at(alpha));
        alpha[l] += 1;
      }
    }
  }
  down_[0].resize(comps_[0].size());
}

int CompositionIndex::index_of(int j, const std::vector<int>& comp) const {
  const auto& list = comps_[j];
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i] == comp) return static_cast<int>(i);
  }
  throw input_error("CompositionIndex: composition not found");
}

PolarizedEspTable polarized_esp_all(const Eigen::MatrixXd& x, int m,
                                    const CompositionIndex& index) {
  if (m < 0) throw input_error("polarized_esp_all: negative degree");
  if (index.k() != x.cols() || index.m() < m) {
    throw input_error("polarized_esp_all: index does not match arguments");
  }
  PolarizedEspTable table;
  table.d = static_cast<int>(x.rows());
  table.k = static_cast<int>(x.cols());
  table.m = m;
  table.values.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    table.values[j].assign(index.count(j), 0.0);
  }
  table.values[0][0] = 1.0;
  // One pass over the rows; degree descending so that the degree j-1 slice
  // still holds the previous row's values when degree j reads it.
  for (int t = 0; t < table.d; ++t) {
    int top = std::min(m, t + 1);
    for (int j = top; j >= 1; --j) {
      auto& cur = table.values[j];
      const auto& prev = table.values[j - 1];
      for (int idx = 0; idx < index.count(j); ++idx) {
        double acc = 0.0;
        for (const auto& [l, down_idx] : index.down(j, idx)) {
          acc += x(t, l) * prev[down_idx];
        }
        cur[idx] += acc;
      }
    }
  }
  return table;
}

PolarizedEspTable polarized_esp_all(const Eigen::MatrixXd& x, int m) {
  CompositionIndex index(m, static_cast<int>(x.cols()));
  return polarized_esp_all(x, m, index);
}

Eigen::VectorXd feature_vector_P(const Eigen::MatrixXd& x, int m) {
  int k = static_cast<int>(x.cols());
  CompositionIndex index(m, k);
  PolarizedEspTable table = polarized_esp_all(x, m, index);
  auto vps = vector_partitions(m, k);
  Eigen::VectorXd out(static_cast<Eigen::Index>(vps.size()));
  for (std::size_t i = 0; i < vps.size(); ++i) {
    double prod = 1.0;
    for (const auto& part : vps[i].parts) {
      int deg = 0;
      for (int v : part) deg += v;
      prod *= table.values[deg][index.index_of(deg, part)];
    }
    out(static_cast<Eigen::Index>(i)) = prod;
  }
  return out;
}

double monomial_symmetric(const Eigen::VectorXd& x, const Partition& lam) {
  int d = static_cast<int>(x.size());
  if (d > kOracleMaxDim) {
    throw size_error("monomial_symmetric: oracle limited to d <= 8");
  }
  if (lam.num_parts() > d) return 0.0;
  std::vector<int> exps(d, 0);
  std::copy(lam.parts.begin(), lam.parts.end(), exps.begin());
  std::sort(exps.begin(), exps.end());
  double total = 0.0;
  do {
    double prod = 1.0;
    for (int i = 0; i < d; ++i) {
      for (int e = 0; e < exps[i]; ++e) prod *= x(i);
    }
    total += prod;
  } while (std::next_permutation(exps.begin(), exps.end()));
  return total;
}

std::int64_t binary_matrix_count(const Partition& lam, const Partition& mu) {
  if (lam.sum != mu.sum) {
    throw input_error("binary_matrix_count: row and column totals differ");
  }
  if (lam.num_parts() > kOracleMaxDim || mu.num_parts() > kOracleMaxDim ||
      lam.sum > kOracleMaxDim) {
    throw size_error("binary_matrix_count: enumeration limited to size <= 8");
  }
  int rows = lam.num_parts();
  int cols = mu.num_parts();
  for (int v : lam.parts) {
    if (v > cols) return 0;
  }
  std::vector<int> rem(mu.parts.begin(), mu.parts.end());
  // Row by row, choosing the column subset for each row's ones.
  auto rec = [&](auto&& self, int r) -> std::int64_t {
    if (r == rows) {
      for (int c : rem) {
        if (c != 0) return 0;
      }
      return 1;
    }
    std::int64_t total = 0;
    int need = lam.parts[r];
    std::vector<int> chosen;
    auto pick = [&](auto&& pickself, int start, int left) -> void {
      if (left == 0) {
        total += self(self, r + 1);
        return;
      }
      for (int c = start; c <= cols - left; ++c) {
        if (rem[c] == 0) continue;
        rem[c] -= 1;
        pickself(pickself, c + 1, left - 1);
        rem[c] += 1;
      }
    };
    pick(pick, 0, need);
    return total;
  };
  return rec(rec, 0);
}

BasisChangeData taylor_basis_change(int m) {
  if (m < 0) throw input_error("taylor_basis_change: negative degree");
  if (m > kMaxBasisDegree) {
    throw size_error("taylor_basis_change: degree limited to 8");
  }
  BasisChangeData data;
  data.index = partitions_up_to(m);
  Eigen::Index n = static_cast<Eigen::Index>(data.index.size());
  data.b = Eigen::MatrixXd::Zero(n, n);
  data.b_inv = Eigen::MatrixXd::Zero(n, n);
  data.c_taylor = Eigen::VectorXd::Zero(n);

  Eigen::Index offset = 0;
  for (int j = 0; j <= m; ++j) {
    auto parts = partitions_of(j);
    Eigen::Index sz = static_cast<Eigen::Index>(parts.size());
    Eigen::MatrixXd block(sz, sz);
    for (Eigen::Index a = 0; a < sz; ++a) {
      for (Eigen::Index b = 0; b < sz; ++b) {
        block(a, b) = static_cast<double>(binary_matrix_count(parts[a], parts[b]));
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
    if (!lu.isInvertible()) {
      throw numeric_error("taylor_basis_change: singular basis-change block");
    }
    data.b.block(offset, offset, sz, sz) = block;
    data.b_inv.block(offset, offset, sz, sz) = lu.inverse();
    for (Eigen::Index a = 0; a < sz; ++a) {
      const Partition& lam = parts[a];
      // (1/j!) * multinomial(j; lam) * eta(lam) = eta(lam) / prod_i lam_i!
      double denom = 1.0;
      for (int v : lam.parts) denom *= static_cast<double>(factorial(v));
      double eta = static_cast<double>(multiplicity_profile(lam).eta);
      data.c_taylor(offset + a) = eta / denom;
    }
    offset += sz;
  }
  return data;
}

Eigen::VectorXd monomial_feature_vector(const Eigen::VectorXd& x,
                                        const BasisChangeData& basis) {
  int m = basis.index.empty() ? 0 : basis.index.back().sum;
  Eigen::VectorXd e = feature_vector_E(x, m);
  return basis.b_inv * e;
}

}  // namespace invkern
