#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace conseq {

// Fixed-size bit vector used to represent formula sets inside an indexed
// fragment. Comparison is lexicographic on the words, which together with
// popcount gives the deterministic orderings the searches rely on.
class Bitset {
public:
  Bitset() = default;

  explicit Bitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(std::size_t i, bool value = true) {
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  bool is_subset_of(const Bitset& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  Bitset operator&(const Bitset& o) const {
    Bitset out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] & o.words_[i];
    return out;
  }

  Bitset operator|(const Bitset& o) const {
    Bitset out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] | o.words_[i];
    return out;
  }

  Bitset operator~() const {
    Bitset out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    out.trim();
    return out;
  }

  bool operator==(const Bitset& o) const { return size_ == o.size_ && words_ == o.words_; }

  std::strong_ordering operator<=>(const Bitset& o) const {
    if (auto c = size_ <=> o.size_; c != 0) return c;
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (auto c = words_[i] <=> o.words_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  static Bitset full(std::size_t size) {
    Bitset out(size);
    for (auto& w : out.words_) w = ~std::uint64_t{0};
    out.trim();
    return out;
  }

  static Bitset of(std::size_t size, const std::vector<std::size_t>& indices) {
    Bitset out(size);
    for (auto i : indices) out.set(i);
    return out;
  }

private:
  void trim() {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

} // namespace conseq
