#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace conseq {

// Bounds for a counterexample search. Identical budget + seed reproduces the
// search bit-for-bit.
struct SearchBudget {
  int max_vars = 3;
  int max_depth = 2;
  int max_set_size = 2;
  int max_family_size = 3;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;

  bool operator==(const SearchBudget&) const = default;
};

struct SearchStats {
  std::uint64_t examined = 0; // candidates tested after constraint filters
  std::uint64_t space = 0;    // candidate space size, saturating
  bool exhausted = false;     // the ordered enumeration covered the whole space

  bool operator==(const SearchStats&) const = default;
};

namespace detail {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

// Saturating count of subsets of an n-element set with size <= k.
inline std::uint64_t sat_subsets_up_to(std::uint64_t n, std::uint64_t k) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1; // C(n, 0)
  for (std::uint64_t s = 0; s <= k; ++s) {
    total = sat_add(total, binom);
    if (s == k || binom == kSaturated) break;
    binom = sat_mul(binom, n - s) / (s + 1);
  }
  return total;
}

// splitmix64; fully specified, so reports replay byte-for-byte anywhere.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

private:
  std::uint64_t state_;
};

// combo := the lexicographically first size-s combination of {0..n-1}.
inline bool first_combination(std::vector<std::size_t>& combo, std::size_t n, std::size_t s) {
  if (s > n) return false;
  combo.resize(s);
  for (std::size_t i = 0; i < s; ++i) combo[i] = i;
  return true;
}

// Advance a fixed-size combination in lexicographic order.
inline bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
  std::size_t s = combo.size();
  std::size_t i = s;
  while (i > 0) {
    --i;
    if (combo[i] < n - (s - i)) {
      ++combo[i];
      for (std::size_t j = i + 1; j < s; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Sorted index combinations from {0..n-1}, sizes ascending, each size in
// lexicographic order. The canonical "total size first" candidate order.
class SubsetStream {
public:
  SubsetStream(std::size_t n, std::size_t max_size) : n_(n), max_size_(std::min(max_size, n)) {}

  // Writes the next combination into `out`; false when exhausted.
  bool next(std::vector<std::size_t>& out) {
    if (!started_) {
      started_ = true;
      current_.clear();
      out = current_;
      return true;
    }
    if (next_combination(current_, n_)) {
      out = current_;
      return true;
    }
    if (current_.size() >= max_size_) return false;
    if (!first_combination(current_, n_, current_.size() + 1)) return false;
    out = current_;
    return true;
  }

  void reset() {
    started_ = false;
    current_.clear();
  }

private:
  std::size_t n_;
  std::size_t max_size_;
  std::vector<std::size_t> current_;
  bool started_ = false;
};

// A seeded random sorted combination of {0..n-1} with size <= max_size.
inline std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, std::size_t max_size) {
  std::size_t bound = std::min(max_size, n);
  std::size_t s = static_cast<std::size_t>(rng.below(bound + 1));
  std::vector<std::size_t> out;
  while (out.size() < s) {
    std::size_t pick = static_cast<std::size_t>(rng.below(n));
    if (std::find(out.begin(), out.end(), pick) == out.end()) out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace detail

} // namespace conseq
