#include "invkern/combinatorics.hpp"

#include <algorithm>

namespace invkern {

namespace {
constexpr int kMaxPartitionTarget = 64;
}  // namespace

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw size_error("integer count overflows 64 bits");
  }
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw size_error("integer count overflows 64 bits");
  }
  return r;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n-k+i) is divisible by i at every step.
    r = checked_mul(r, n - k + i) / i;
  }
  return r;
}

std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r = checked_mul(r, i);
  return r;
}

bool graded_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  int sa = 0, sb = 0;
  for (int v : a) sa += v;
  for (int v : b) sb += v;
  if (sa != sb) return sa < sb;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Partition> partitions_of(int j, std::optional<int> max_parts) {
  if (j < 0) throw input_error("partitions_of: negative target");
  if (j > kMaxPartitionTarget) {
    throw size_error("partitions_of: target beyond supported range");
  }
  if (max_parts && *max_parts < 1) {
    throw input_error("partitions_of: max_parts must be at least 1");
  }
  int bound = max_parts ? *max_parts : j;
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rem, int max_val) -> void {
    if (rem == 0) {
      out.push_back(Partition{cur, j});
      return;
    }
    if (static_cast<int>(cur.size()) >= bound) return;
    for (int v = std::min(rem, max_val); v >= 1; --v) {
      cur.push_back(v);
      self(self, rem - v, v);
      cur.pop_back();
    }
  };
  rec(rec, j, j);
  return out;
}

std::vector<Partition> partitions_up_to(int m) {
  std::vector<Partition> out;
  for (int j = 0; j <= m; ++j) {
    auto pj = partitions_of(j);
    out.insert(out.end(), pj.begin(), pj.end());
  }
  return out;
}

std::vector<WeakComposition> weak_compositions(int j, int d) {
  if (j < 0) throw input_error("weak_compositions: negative target");
  if (d < 1) {
    if (j == 0 && d == 0) return {WeakComposition{{}, 0}};
    throw input_error("weak_compositions: need at least one part");
  }
  std::vector<WeakComposition> out;
  std::vector<int> cur(d, 0);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == d - 1) {
      cur[pos] = rem;
      out.push_back(WeakComposition{cur, j});
      return;
    }
    for (int v = rem; v >= 0; --v) {
      cur[pos] = v;
      self(self, pos + 1, rem - v);
    }
  };
  rec(rec, 0, j);
  return out;
}

std::vector<VectorPartition> vector_partitions(int m, int k) {
  if (m < 0) throw input_error("vector_partitions: negative degree");
  if (k < 1) throw input_error("vector_partitions: vector length must be >= 1");
  // Universe of admissible parts: nonzero k-vectors of degree <= m, sorted
  // descending in graded-lex so recursive choices stay non-increasing.
  std::vector<std::vector<int>> parts_desc;
  for (int j = m; j >= 1; --j) {
    for (const auto& c : weak_compositions(j, k)) parts_desc.push_back(c.parts);
  }
  std::sort(parts_desc.begin(), parts_desc.end(),
            [](const auto& a, const auto& b) { return graded_lex_less(b, a); });

  std::vector<VectorPartition> out;
  std::vector<std::vector<int>> cur;
  auto degree = [](const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
  };
  // Degree-major output order, matching partitions_up_to.
  for (int j = 0; j <= m; ++j) {
    auto rec = [&](auto&& self, std::size_t start, int rem) -> void {
      if (rem == 0) {
        out.push_back(VectorPartition{cur, j});
        return;
      }
      for (std::size_t i = start; i < parts_desc.size(); ++i) {
        int dg = degree(parts_desc[i]);
        if (dg > rem) continue;
        cur.push_back(parts_desc[i]);
        self(self, i, rem - dg);
        cur.pop_back();
      }
    };
    rec(rec, 0, j);
  }
  return out;
}

MultiplicityProfile multiplicity_profile(const Partition& p) {
  MultiplicityProfile prof;
  int largest = p.parts.empty() ? 0 : p.parts.front();
  prof.mu.assign(largest + 1, 0);
  for (int v : p.parts) prof.mu[v] += 1;
  prof.eta = 1;
  for (int i = 1; i <= largest; ++i) {
    prof.eta = checked_mul(prof.eta, factorial(prof.mu[i]));
  }
  return prof;
}

std::int64_t partition_count_bounded(int j, int d) {
  if (j < 0) throw input_error("partition_count_bounded: negative target");
  if (d < 0) throw input_error("partition_count_bounded: negative bound");
  // p_d(j) by the standard two-variable recurrence, independent of the
  // enumerator above so the two can cross-check each other.
  std::vector<std::int64_t> cnt(j + 1, 0);
  cnt[0] = 1;
  for (int part = 1; part <= d; ++part) {
    for (int t = part; t <= j; ++t) cnt[t] = checked_add(cnt[t], cnt[t - part]);
  }
  return cnt[j];
}

std::int64_t partition_count(int j) { return partition_count_bounded(j, j); }

std::int64_t weak_composition_count(int j, int d) {
  if (j < 0) throw input_error("weak_composition_count: negative target");
  if (d == 0) {
    if (j > 0) throw input_error("weak_composition_count: no parts");
    return 1;
  }
  return binomial(j + d - 1, j);
}

}  // namespace invkern
