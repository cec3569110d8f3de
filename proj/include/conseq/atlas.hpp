#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "core.hpp"
#include "matrix.hpp"

namespace conseq {

// One algebra carrying a family of filters: the single-algebra presentation
// of a bundle of matrices. Entailment relative to an atlas is entailment in
// the induced class {<A, D_i>}.
class Atlas {
public:
  Atlas() = default;

  Atlas(FiniteAlgebra algebra, std::vector<std::vector<int>> filters) : algebra_(std::move(algebra)) {
    if (filters.empty()) throw error("atlas needs at least one filter");
    for (auto& f : filters) charts_.emplace_back(algebra_, std::move(f));
  }

  const FiniteAlgebra& algebra() const { return algebra_; }
  std::size_t chart_count() const { return charts_.size(); }
  const FiniteMatrix& chart(std::size_t i) const { return charts_[i]; }

  MatrixClass to_class() const { return MatrixClass(charts_); }

private:
  FiniteAlgebra algebra_;
  std::vector<FiniteMatrix> charts_;
};

inline Atlas make_atlas(FiniteAlgebra algebra, std::vector<std::vector<int>> filters) {
  return Atlas(std::move(algebra), std::move(filters));
}

inline bool atlas_entails(const Atlas& a, const FormulaSet& premises, const Formula& conclusion,
                          const Limits& limits = {}) {
  return entails_class(a.to_class(), premises, conclusion, limits);
}

// The componentwise product of a class: carrier = product of carriers,
// operations computed coordinatewise, and one filter per member constraining
// only that member's coordinate. Entailment relative to the result coincides
// with entailment relative to the class.
inline Atlas product_atlas(const MatrixClass& cls, const Limits& limits = {}) {
  const Signature& sig = cls.signature();
  const std::size_t m = cls.members().size();

  std::uint64_t carrier = 1;
  for (const auto& member : cls.members()) {
    std::uint64_t n = static_cast<std::uint64_t>(member.algebra().carrier_size());
    if (carrier > limits.max_product_table / n)
      throw resource_error("product carrier exceeds the configured cap");
    carrier *= n;
  }
  int max_arity = 0;
  for (const auto& c : sig.connectives()) max_arity = std::max(max_arity, c.arity);
  detail::checked_pow(carrier, static_cast<std::uint64_t>(max_arity), limits.max_product_table,
                      "product operation table");

  // row-major encoding: the first member is the most significant coordinate
  std::vector<std::uint64_t> stride(m, 1);
  for (std::size_t i = m; i-- > 1;)
    stride[i - 1] = stride[i] * static_cast<std::uint64_t>(cls.members()[i].algebra().carrier_size());

  auto decode = [&](std::uint64_t e, std::vector<int>& coords) {
    for (std::size_t i = 0; i < m; ++i) {
      coords[i] = static_cast<int>(e / stride[i]);
      e %= stride[i];
    }
  };

  std::vector<std::vector<int>> tables;
  std::vector<std::vector<int>> arg_coords;
  for (std::size_t ci = 0; ci < sig.connectives().size(); ++ci) {
    std::size_t k = static_cast<std::size_t>(sig.connectives()[ci].arity);
    std::uint64_t rows = 1;
    for (std::size_t i = 0; i < k; ++i) rows *= carrier;
    std::vector<int> table(rows);
    arg_coords.assign(k, std::vector<int>(m));
    std::vector<std::uint64_t> args(k, 0);
    for (std::uint64_t r = 0; r < rows; ++r) {
      std::uint64_t rest = r;
      for (std::size_t i = k; i-- > 0;) {
        args[i] = rest % carrier;
        rest /= carrier;
      }
      for (std::size_t i = 0; i < k; ++i) decode(args[i], arg_coords[i]);
      std::uint64_t value = 0;
      std::vector<int> member_args(k);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < k; ++i) member_args[i] = arg_coords[i][j];
        value += static_cast<std::uint64_t>(cls.members()[j].algebra().apply(ci, member_args)) * stride[j];
      }
      table[r] = static_cast<int>(value);
    }
    tables.push_back(std::move(table));
  }
  FiniteAlgebra product(sig, static_cast<int>(carrier), std::move(tables));

  std::vector<std::vector<int>> filters(m);
  std::vector<int> coords(m);
  for (std::uint64_t e = 0; e < carrier; ++e) {
    decode(e, coords);
    for (std::size_t j = 0; j < m; ++j)
      if (cls.members()[j].designated(coords[j])) filters[j].push_back(static_cast<int>(e));
  }
  return Atlas(std::move(product), std::move(filters));
}

} // namespace conseq
