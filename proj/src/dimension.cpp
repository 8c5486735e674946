#include "invkern/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace invkern {

namespace {

constexpr int kMaxPermanentSize = 20;
constexpr std::int64_t kSymMatrixBudget = 50'000'000;

// Round half to even, the declared rounding rule for exact methods.
double round_half_even(double v) {
  double r = std::nearbyint(v);  // default FE_TONEAREST is half-to-even
  return r == 0.0 ? 0.0 : r;    // normalize -0
}

std::int64_t gcd_int(std::int64_t a, std::int64_t b) {
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::int64_t dim_permutation(int m, int d) {
  if (m < 0) throw input_error("dim_permutation: negative degree");
  if (d < 1) throw input_error("dim_permutation: d must be >= 1");
  std::int64_t total = 0;
  for (int j = 0; j <= m; ++j) {
    total = checked_add(total, partition_count_bounded(j, d));
  }
  return total;
}

std::int64_t dim_set_permutation(int m, int k, int d) {
  if (m < 0) throw input_error("dim_set_permutation: negative degree");
  if (k < 1) throw input_error("dim_set_permutation: k must be >= 1");
  if (d < m) {
    throw regime_error("dim_set_permutation: formula requires d >= m");
  }
  std::int64_t total = 0;
  for (int j = 0; j <= m; ++j) {
    for (const auto& alpha : partitions_of(j)) {
      auto prof = multiplicity_profile(alpha);
      std::int64_t term = 1;
      for (int i = 1; i < static_cast<int>(prof.mu.size()); ++i) {
        if (prof.mu[i] == 0) continue;
        std::int64_t ck = weak_composition_count(i, k);
        term = checked_mul(term,
                           binomial(static_cast<int>(ck) + prof.mu[i] - 1, prof.mu[i]));
      }
      total = checked_add(total, term);
    }
  }
  return total;
}

std::int64_t count_symmetric_matrices(const Partition& alpha) {
  int n = alpha.num_parts();
  if (n == 0) return 1;  // the empty matrix
  // Backtracking over rows; entries above the diagonal charge the budget of
  // their column's row. Budget guard aborts pathological inputs.
  std::int64_t visited = 0;
  std::vector<int> rem(alpha.parts.begin(), alpha.parts.end());
  std::vector<std::vector<int>> entries(n, std::vector<int>(n, 0));
  auto rec = [&](auto&& self, int i, int j, int left) -> std::int64_t {
    // Filling row i at column j >= i, `left` of row i's budget unassigned.
    if (++visited > kSymMatrixBudget) {
      throw size_error("count_symmetric_matrices: enumeration budget exceeded");
    }
    if (j == n) {
      if (left != 0) return 0;
      if (i + 1 == n) return 1;
      return self(self, i + 1, i + 1, rem[i + 1]);
    }
    if (j == i) {
      std::int64_t total = 0;
      for (int v = 0; v <= left; ++v) {
        total += self(self, i, j + 1, left - v);
      }
      return total;
    }
    std::int64_t total = 0;
    int cap = std::min(left, rem[j]);
    for (int v = 0; v <= cap; ++v) {
      rem[j] -= v;
      total += self(self, i, j + 1, left - v);
      rem[j] += v;
    }
    return total;
  };
  return rec(rec, 0, 0, rem[0]);
}

std::int64_t dim_graphs_upper(int m) {
  if (m < 0) throw input_error("dim_graphs_upper: negative degree");
  std::int64_t total = 0;
  for (int j = 0; j <= m; ++j) {
    for (const auto& alpha : partitions_of(2 * j)) {
      total = checked_add(total, count_symmetric_matrices(alpha));
    }
  }
  return total;
}

std::int64_t dim_point_clouds_upper(int m) {
  if (m < 0) throw input_error("dim_point_clouds_upper: negative degree");
  std::int64_t total = 0;
  for (int j = 0; j <= m / 2; ++j) {
    for (const auto& alpha : partitions_of(2 * j)) {
      total = checked_add(total, count_symmetric_matrices(alpha));
    }
  }
  return total;
}

std::int64_t dim_cyclic(int m, int d) {
  if (m < 0) throw input_error("dim_cyclic: negative degree");
  if (m >= d) throw regime_error("dim_cyclic: formula stated for m < d");
  // 1 + (1/d) sum over r with s = gcd(r,d) > 1 of sum_{j=1}^{floor(ms/d)}
  // binom(j+s-1, s-1). The r-th shift splits into s cycles of length d/s.
  std::int64_t acc = 0;
  for (int r = 1; r <= d; ++r) {
    std::int64_t s = gcd_int(r, d);
    if (s <= 1) continue;
    std::int64_t top = (static_cast<std::int64_t>(m) * s) / d;
    for (std::int64_t j = 1; j <= top; ++j) {
      acc = checked_add(acc, binomial(static_cast<int>(j + s - 1),
                                      static_cast<int>(s - 1)));
    }
  }
  if (acc % d != 0) {
    throw numeric_error("dim_cyclic: character sum not divisible by |G|");
  }
  return 1 + acc / d;
}

std::int64_t dim_image_2dcyclic(int m, int d) {
  if (m < 0) throw input_error("dim_image_2dcyclic: negative degree");
  if (d < 1) throw input_error("dim_image_2dcyclic: d must be >= 1");
  // Character of (sigma^r, sigma^r'): with s = gcd(r,d), s' = gcd(r',d), the
  // fixed exponent matrices are constant on an s x s' block grid with every
  // block total equal; substituting block totals nu in C_s(j) gives
  //   sum_{j=0}^{floor(m s s'/d^2)} sum_{nu in C_s(j)} prod_i binom(nu_i+s'-1, s'-1).
  std::int64_t acc = 0;
  std::int64_t d2 = checked_mul(d, d);
  for (int r = 1; r <= d; ++r) {
    for (int rp = 1; rp <= d; ++rp) {
      std::int64_t s = gcd_int(r, d);
      std::int64_t sp = gcd_int(rp, d);
      std::int64_t top = (static_cast<std::int64_t>(m) * s * sp) / d2;
      for (std::int64_t j = 0; j <= top; ++j) {
        for (const auto& nu :
             weak_compositions(static_cast<int>(j), static_cast<int>(s))) {
          std::int64_t term = 1;
          for (int v : nu.parts) {
            term = checked_mul(term, binomial(v + static_cast<int>(sp) - 1,
                                              static_cast<int>(sp) - 1));
          }
          acc = checked_add(acc, term);
        }
      }
    }
  }
  if (acc % d2 != 0) {
    throw numeric_error("dim_image_2dcyclic: character sum not divisible by |G|");
  }
  return acc / d2;
}

double permanent(const Eigen::MatrixXd& m) {
  int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw input_error("permanent: matrix must be square");
  if (n > kMaxPermanentSize) {
    throw size_error("permanent: size above " + std::to_string(kMaxPermanentSize));
  }
  if (n == 0) return 1.0;
  // Ryser with Gray-code updates of the column partial sums.
  std::vector<double> sums(n, 0.0);
  double total = 0.0;
  std::uint32_t prev = 0;
  std::uint32_t limit = 1u << n;
  for (std::uint32_t idx = 1; idx < limit; ++idx) {
    std::uint32_t gray = idx ^ (idx >> 1);
    std::uint32_t changed = gray ^ prev;
    int bit = __builtin_ctz(changed);
    double sign_of_change = (gray & changed) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) sums[i] += sign_of_change * m(i, bit);
    prev = gray;
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= sums[i];
    int bits = __builtin_popcount(gray);
    total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
  }
  return total;
}

double induced_trace_eigen(const GroupElement& g, int m) {
  if (m < 0) throw input_error("induced_trace_eigen: negative degree");
  const Eigen::MatrixXd& mat = g.matrix;
  if (mat.rows() != mat.cols()) {
    throw input_error("induced_trace_eigen: matrix must be square");
  }
  std::vector<double> power_sums(m + 1, 0.0);
  Eigen::MatrixXd p = mat;
  for (int r = 1; r <= m; ++r) {
    power_sums[r] = p.trace();
    if (r < m) p = p * mat;
  }
  std::vector<double> h(m + 1, 0.0);
  h[0] = 1.0;
  for (int j = 1; j <= m; ++j) {
    double acc = 0.0;
    for (int r = 1; r <= j; ++r) acc += power_sums[r] * h[j - r];
    h[j] = acc / j;
  }
  double total = 0.0;
  for (int j = 0; j <= m; ++j) total += h[j];
  return total;
}

double induced_trace_permanent(const GroupElement& g, int m) {
  if (m < 0) throw input_error("induced_trace_permanent: negative degree");
  const Eigen::MatrixXd& mat = g.matrix;
  int d = static_cast<int>(mat.rows());
  if (mat.cols() != d) {
    throw input_error("induced_trace_permanent: matrix must be square");
  }
  if (m > kMaxPermanentSize) {
    throw size_error("induced_trace_permanent: degree above permanent cap");
  }
  double total = 1.0;  // j = 0: empty submatrix
  // A weak composition of j has at most j nonzero entries, so enumerate
  // (support, positive composition) pairs instead of all of C_d(j).
  std::vector<int> support;
  std::vector<int> comp;
  Eigen::MatrixXd sub(m, m);
  auto eval_support = [&](int j) {
    int t = static_cast<int>(support.size());
    // positive compositions of j into t parts
    comp.assign(t, 1);
    int rem = j - t;
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == t - 1) {
        comp[pos] = 1 + left;
        // Build the repeated submatrix and accumulate per/eta.
        int size = j;
        sub.resize(size, size);
        int ri = 0;
        double eta = 1.0;
        for (int a = 0; a < t; ++a) {
          for (int u = 0; u < comp[a]; ++u, ++ri) {
            int ci = 0;
            for (int b = 0; b < t; ++b) {
              for (int v = 0; v < comp[b]; ++v, ++ci) {
                sub(ri, ci) = mat(support[a], support[b]);
              }
            }
          }
          eta *= static_cast<double>(factorial(comp[a]));
        }
        total += permanent(sub) / eta;
        return;
      }
      for (int v = 0; v <= left; ++v) {
        comp[pos] = 1 + v;
        self(self, pos + 1, left - v);
      }
    };
    if (t == 0) return;
    rec(rec, 0, rem);
  };
  for (int j = 1; j <= m; ++j) {
    int max_support = std::min(j, d);
    auto choose = [&](auto&& self, int start, int need) -> void {
      if (need == 0) {
        eval_support(j);
        return;
      }
      for (int i = start; i <= d - need; ++i) {
        support.push_back(i);
        self(self, i + 1, need - 1);
        support.pop_back();
      }
    };
    for (int t = 1; t <= max_support; ++t) choose(choose, 0, t);
  }
  return total;
}

std::vector<std::int64_t> default_checkpoints(std::int64_t n_samples) {
  static const std::int64_t base[] = {10,  20,  50,   100,  200,
                                      500, 1000, 2000, 5000, 10000};
  std::vector<std::int64_t> out;
  for (std::int64_t c : base) {
    if (c < n_samples) out.push_back(c);
  }
  out.push_back(n_samples);
  return out;
}

DimensionResult mc_dimension(GroupSampler& sampler, int m,
                             std::int64_t n_samples, TraceFormula formula,
                             const std::vector<std::int64_t>& checkpoints) {
  if (n_samples < 1) throw input_error("mc_dimension: need at least one sample");
  std::vector<std::int64_t> marks =
      checkpoints.empty() ? default_checkpoints(n_samples) : checkpoints;
  DimensionResult res;
  res.method = formula == TraceFormula::eigen ? DimMethod::mc_eigen
                                              : DimMethod::mc_permanent;
  res.n_samples = n_samples;
  double sum = 0.0, sumsq = 0.0;
  std::size_t mark_pos = 0;
  for (std::int64_t i = 1; i <= n_samples; ++i) {
    GroupElement g = sampler.sample();
    double v = formula == TraceFormula::eigen ? induced_trace_eigen(g, m)
                                              : induced_trace_permanent(g, m);
    sum += v;
    sumsq += v * v;
    while (mark_pos < marks.size() && marks[mark_pos] == i) {
      res.running.emplace_back(i, sum / static_cast<double>(i));
      ++mark_pos;
    }
  }
  double n = static_cast<double>(n_samples);
  res.value = sum / n;
  double var = std::max(0.0, (sumsq - n * res.value * res.value) / std::max(1.0, n - 1.0));
  res.stderr_ = std::sqrt(var / n);
  return res;
}

DimensionResult exhaustive_dimension(const std::vector<GroupElement>& elements,
                                     int m) {
  if (elements.empty()) {
    throw input_error("exhaustive_dimension: empty enumeration");
  }
  double sum = 0.0;
  for (const auto& g : elements) sum += induced_trace_eigen(g, m);
  double mean = sum / static_cast<double>(elements.size());
  double rounded = round_half_even(mean);
  if (std::abs(rounded - mean) > 1e-6) {
    throw numeric_error("exhaustive_dimension: rounding residual " +
                        std::to_string(std::abs(rounded - mean)));
  }
  DimensionResult res;
  res.value = rounded;
  res.method = DimMethod::exhaustive_character;
  return res;
}

}  // namespace invkern
