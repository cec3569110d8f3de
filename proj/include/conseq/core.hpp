#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace conseq {

// Failure of a library operation: bad input, mismatched signatures, broken invariants.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Text that does not parse; carries the offending position (byte offset, or
// line number for matrix files).
class parse_error : public error {
public:
  parse_error(const std::string& what, std::size_t position)
      : error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

// A configured ceiling was hit. Enumeration never silently truncates.
class resource_error : public error {
public:
  using error::error;
};

// Ceilings for the enumeration-heavy operations.
struct Limits {
  std::size_t max_fragment_size = 5000;
  std::uint64_t max_valuations = 10'000'000;
  std::size_t max_theory_sets = std::size_t{1} << 20;
  std::uint64_t max_product_table = 1'000'000;
};

inline bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto tail = [&head](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s[0])) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!tail(s[i])) return false;
  return true;
}

} // namespace conseq
