#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "invkern/errors.hpp"

namespace invkern {

// Checked 64-bit arithmetic. Counts at the scales we support (m <= 10 or so)
// fit comfortably, but silent wraparound must be impossible.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t binomial(int n, int k);
std::int64_t factorial(int n);

// A partition of `sum`: strictly positive parts in non-increasing order.
// The partition of 0 is the empty sequence (the constant monomial).
struct Partition {
  std::vector<int> parts;
  int sum = 0;

  int num_parts() const { return static_cast<int>(parts.size()); }
  bool operator==(const Partition&) const = default;
};

// A weak composition of `sum` into parts.size() non-negative parts.
struct WeakComposition {
  std::vector<int> parts;
  int sum = 0;

  bool operator==(const WeakComposition&) const = default;
};

// A vector partition: non-increasing (graded-lex) sequence of nonzero
// k-dimensional non-negative integer vectors summing entrywise to `total`.
struct VectorPartition {
  std::vector<std::vector<int>> parts;
  int total = 0;

  int num_parts() const { return static_cast<int>(parts.size()); }
  bool operator==(const VectorPartition&) const = default;
};

// mu[i] = number of parts equal to i (mu[0] unused), eta = prod_i mu[i]!.
struct MultiplicityProfile {
  std::vector<int> mu;
  std::int64_t eta = 1;
};

// Graded lexicographic comparison of integer vectors: first by entry sum,
// ties broken lexicographically.
bool graded_lex_less(const std::vector<int>& a, const std::vector<int>& b);

// All partitions of j (optionally with at most max_parts parts), in the
// canonical order: descending lexicographic, e.g. 4, 3+1, 2+2, 2+1+1, 1+1+1+1.
std::vector<Partition> partitions_of(int j,
                                     std::optional<int> max_parts = std::nullopt);

// All partitions of every j <= m, degree-major (graded), canonical order
// within each degree. This order owns every partition-indexed vector.
std::vector<Partition> partitions_up_to(int m);

// All weak compositions of j into d parts, first entry largest first,
// e.g. (2,0), (1,1), (0,2).
std::vector<WeakComposition> weak_compositions(int j, int d);

// All k-vector partitions of every j <= m, degree-major; within a degree the
// enumeration picks parts in non-increasing graded-lex order, largest first.
std::vector<VectorPartition> vector_partitions(int m, int k);

MultiplicityProfile multiplicity_profile(const Partition& p);

// Counting without enumeration.
std::int64_t partition_count(int j);                  // p(j)
std::int64_t partition_count_bounded(int j, int d);   // p_d(j)
std::int64_t weak_composition_count(int j, int d);    // binom(j+d-1, j)

}  // namespace invkern
