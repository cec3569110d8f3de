#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "atlas.hpp"
#include "core.hpp"
#include "matrix.hpp"

namespace conseq {

// ---------------------------------------------------------------------------
// Built-in matrices. Tables are spelled out in the README; everything here is
// over the signature {neg/1, and/2, or/2, imp/2}.
// ---------------------------------------------------------------------------

inline Signature builtin_signature() {
  return Signature({{"neg", 1}, {"and", 2}, {"or", 2}, {"imp", 2}});
}

// Two-element Boolean algebra on {0,1}.
inline FiniteAlgebra b2_algebra() {
  return FiniteAlgebra::from_function(builtin_signature(), 2, [](std::size_t ci, const std::vector<int>& a) {
    switch (ci) {
      case 0: return 1 - a[0];
      case 1: return std::min(a[0], a[1]);
      case 2: return std::max(a[0], a[1]);
      default: return std::max(1 - a[0], a[1]);
    }
  });
}

// Lukasiewicz three-valued algebra on {0,1,2}: neg x = 2-x,
// imp x y = min(2, 2-x+y), and = min, or = max.
inline FiniteAlgebra l3_algebra() {
  return FiniteAlgebra::from_function(builtin_signature(), 3, [](std::size_t ci, const std::vector<int>& a) {
    switch (ci) {
      case 0: return 2 - a[0];
      case 1: return std::min(a[0], a[1]);
      case 2: return std::max(a[0], a[1]);
      default: return std::min(2, 2 - a[0] + a[1]);
    }
  });
}

// Strong Kleene three-valued algebra on {0,1,2}: as L3 but imp x y = max(2-x, y).
inline FiniteAlgebra k3_algebra() {
  return FiniteAlgebra::from_function(builtin_signature(), 3, [](std::size_t ci, const std::vector<int>& a) {
    switch (ci) {
      case 0: return 2 - a[0];
      case 1: return std::min(a[0], a[1]);
      case 2: return std::max(a[0], a[1]);
      default: return std::max(2 - a[0], a[1]);
    }
  });
}

inline FiniteMatrix cl2() { return FiniteMatrix(b2_algebra(), {1}); }
inline FiniteMatrix l3() { return FiniteMatrix(l3_algebra(), {2}); }
inline FiniteMatrix k3() { return FiniteMatrix(k3_algebra(), {2}); }

// ---------------------------------------------------------------------------
// Matrix files. Line-oriented grammar, one definition per line:
//
//   signature name/arity ...
//   algebra NAME carrier N
//   op ANAME CONN tuple:value ...      tuple = arity-many indices, either a
//                                      digit string or comma-separated; empty
//                                      before ':' for a nullary connective
//   matrix NAME algebra ANAME filter e1,e2,...     (empty filter: `filter -`)
//   atlas NAME algebra ANAME filters {e,...};{e,...};...
//   # comment
// ---------------------------------------------------------------------------

struct MatrixFileMatrix {
  std::string name;
  std::string algebra;
  std::vector<int> filter;
};

struct MatrixFileAtlas {
  std::string name;
  std::string algebra;
  std::vector<std::vector<int>> filters;
};

struct MatrixFile {
  std::optional<Signature> signature;
  std::vector<std::pair<std::string, FiniteAlgebra>> algebras;
  std::vector<MatrixFileMatrix> matrices;
  std::vector<MatrixFileAtlas> atlases;

  const FiniteAlgebra* find_algebra(const std::string& name) const {
    for (const auto& [n, a] : algebras)
      if (n == name) return &a;
    return nullptr;
  }
};

namespace detail {

inline std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline int parse_element(const std::string& text, std::size_t line_no) {
  if (text.empty() || text.size() > 9 || text.find_first_not_of("0123456789") != std::string::npos)
    throw parse_error("expected a carrier element, got '" + text + "'", line_no);
  return std::stoi(text);
}

inline std::vector<int> parse_element_list(const std::string& text, std::size_t line_no) {
  std::vector<int> out;
  std::string piece;
  std::istringstream in(text);
  while (std::getline(in, piece, ',')) out.push_back(parse_element(piece, line_no));
  return out;
}

// Tuple syntax: "012" (one digit per index) or "0,1,2".
inline std::vector<int> parse_tuple(const std::string& text, std::size_t line_no) {
  if (text.empty()) return {};
  if (text.find(',') != std::string::npos) return parse_element_list(text, line_no);
  std::vector<int> out;
  for (char c : text) {
    if (c < '0' || c > '9') throw parse_error(std::string("bad tuple digit '") + c + "'", line_no);
    out.push_back(c - '0');
  }
  return out;
}

struct PendingAlgebra {
  std::string name;
  int carrier = 0;
  std::size_t line_no = 0;
  // per connective: tuple-index -> value
  std::vector<std::map<std::uint64_t, int>> entries;
};

} // namespace detail

inline MatrixFile parse_matrix_file(const std::string& text) {
  MatrixFile file;
  std::vector<detail::PendingAlgebra> pending;
  std::set<std::string> names;

  auto find_pending = [&pending](const std::string& name) -> detail::PendingAlgebra* {
    for (auto& p : pending)
      if (p.name == name) return &p;
    return nullptr;
  };

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto words = detail::split_words(line);
    if (words.empty()) continue;
    const std::string& kind = words[0];

    if (kind == "signature") {
      if (file.signature) throw parse_error("duplicate signature line", line_no);
      std::vector<Connective> conns;
      for (std::size_t i = 1; i < words.size(); ++i) {
        auto slash = words[i].find('/');
        if (slash == std::string::npos) throw parse_error("expected name/arity, got '" + words[i] + "'", line_no);
        std::string name = words[i].substr(0, slash);
        int arity = detail::parse_element(words[i].substr(slash + 1), line_no);
        conns.push_back({name, arity});
      }
      try {
        file.signature = Signature(std::move(conns));
      } catch (const error& e) {
        throw parse_error(e.what(), line_no);
      }
    } else if (kind == "algebra") {
      if (!file.signature) throw parse_error("algebra before signature", line_no);
      if (words.size() != 4 || words[2] != "carrier")
        throw parse_error("expected: algebra NAME carrier N", line_no);
      if (find_pending(words[1])) throw parse_error("duplicate algebra name '" + words[1] + "'", line_no);
      detail::PendingAlgebra p;
      p.name = words[1];
      p.carrier = detail::parse_element(words[3], line_no);
      if (p.carrier <= 0) throw parse_error("carrier size must be positive", line_no);
      p.line_no = line_no;
      p.entries.resize(file.signature->connectives().size());
      pending.push_back(std::move(p));
    } else if (kind == "op") {
      if (words.size() < 3) throw parse_error("expected: op ANAME CONN tuple:value ...", line_no);
      detail::PendingAlgebra* p = find_pending(words[1]);
      if (!p) throw parse_error("unknown algebra '" + words[1] + "'", line_no);
      auto ci = file.signature->index_of(words[2]);
      if (!ci) throw parse_error("unknown connective '" + words[2] + "'", line_no);
      int arity = file.signature->connectives()[*ci].arity;
      for (std::size_t i = 3; i < words.size(); ++i) {
        auto colon = words[i].find(':');
        if (colon == std::string::npos) throw parse_error("expected tuple:value, got '" + words[i] + "'", line_no);
        std::vector<int> tuple = detail::parse_tuple(words[i].substr(0, colon), line_no);
        int value = detail::parse_element(words[i].substr(colon + 1), line_no);
        if (tuple.size() != static_cast<std::size_t>(arity))
          throw parse_error("tuple '" + words[i].substr(0, colon) + "' has " + std::to_string(tuple.size()) +
                                " indices, connective '" + words[2] + "' expects " + std::to_string(arity),
                            line_no);
        std::uint64_t idx = 0;
        for (int e : tuple) {
          if (e < 0 || e >= p->carrier) throw parse_error("tuple index outside the carrier", line_no);
          idx = idx * static_cast<std::uint64_t>(p->carrier) + static_cast<std::uint64_t>(e);
        }
        if (value < 0 || value >= p->carrier) throw parse_error("value outside the carrier", line_no);
        if (!p->entries[*ci].emplace(idx, value).second)
          throw parse_error("duplicate entry for connective '" + words[2] + "'", line_no);
      }
    } else if (kind == "matrix") {
      if (words.size() != 6 || words[2] != "algebra" || words[4] != "filter")
        throw parse_error("expected: matrix NAME algebra ANAME filter e1,e2,... | -", line_no);
      if (!names.insert(words[1]).second) throw parse_error("duplicate name '" + words[1] + "'", line_no);
      MatrixFileMatrix m;
      m.name = words[1];
      m.algebra = words[3];
      if (words[5] != "-") m.filter = detail::parse_element_list(words[5], line_no);
      if (!find_pending(m.algebra)) throw parse_error("unknown algebra '" + m.algebra + "'", line_no);
      file.matrices.push_back(std::move(m));
    } else if (kind == "atlas") {
      if (words.size() < 6 || words[2] != "algebra" || words[4] != "filters")
        throw parse_error("expected: atlas NAME algebra ANAME filters {e,...};{e,...};...", line_no);
      if (!names.insert(words[1]).second) throw parse_error("duplicate name '" + words[1] + "'", line_no);
      MatrixFileAtlas a;
      a.name = words[1];
      a.algebra = words[3];
      if (!find_pending(a.algebra)) throw parse_error("unknown algebra '" + a.algebra + "'", line_no);
      std::string filters_text;
      for (std::size_t i = 5; i < words.size(); ++i) filters_text += words[i];
      std::string piece;
      std::istringstream fin(filters_text);
      while (std::getline(fin, piece, ';')) {
        if (piece.size() < 2 || piece.front() != '{' || piece.back() != '}')
          throw parse_error("expected {e,...}, got '" + piece + "'", line_no);
        std::string body = piece.substr(1, piece.size() - 2);
        a.filters.push_back(body.empty() ? std::vector<int>{} : detail::parse_element_list(body, line_no));
      }
      if (a.filters.empty()) throw parse_error("atlas needs at least one filter", line_no);
      file.atlases.push_back(std::move(a));
    } else {
      throw parse_error("unknown directive '" + kind + "'", line_no);
    }
  }

  // finalize algebras: every connective needs a complete table
  for (auto& p : pending) {
    std::vector<std::vector<int>> tables;
    for (std::size_t ci = 0; ci < file.signature->connectives().size(); ++ci) {
      const Connective& c = file.signature->connectives()[ci];
      std::uint64_t rows = 1;
      for (int i = 0; i < c.arity; ++i) rows *= static_cast<std::uint64_t>(p.carrier);
      std::vector<int> table(rows);
      for (std::uint64_t r = 0; r < rows; ++r) {
        auto it = p.entries[ci].find(r);
        if (it == p.entries[ci].end()) {
          // reconstruct the missing tuple for the diagnostic
          std::string tuple;
          std::uint64_t rest = r;
          std::vector<int> digits(static_cast<std::size_t>(c.arity));
          for (std::size_t i = digits.size(); i-- > 0;) {
            digits[i] = static_cast<int>(rest % p.carrier);
            rest /= p.carrier;
          }
          for (std::size_t i = 0; i < digits.size(); ++i) {
            if (i) tuple += ',';
            tuple += std::to_string(digits[i]);
          }
          throw parse_error("algebra '" + p.name + "': table for '" + c.name + "' is missing tuple (" +
                                tuple + ")",
                            p.line_no);
        }
        table[r] = it->second;
      }
      tables.push_back(std::move(table));
    }
    file.algebras.emplace_back(p.name, FiniteAlgebra(*file.signature, p.carrier, std::move(tables)));
  }

  // materialize to validate filters against carriers
  for (const auto& m : file.matrices) FiniteMatrix(*file.find_algebra(m.algebra), m.filter);
  for (const auto& a : file.atlases) Atlas(*file.find_algebra(a.algebra), a.filters);
  return file;
}

// Canonical text; parse(print(parse(t))) == parse(t).
inline std::string print_matrix_file(const MatrixFile& file) {
  std::ostringstream out;
  if (file.signature) {
    out << "signature";
    for (const auto& c : file.signature->connectives()) out << ' ' << c.name << '/' << c.arity;
    out << '\n';
  }
  auto print_tuple = [](std::ostream& os, std::uint64_t row, int carrier, int arity) {
    std::vector<int> digits(static_cast<std::size_t>(arity));
    for (std::size_t i = digits.size(); i-- > 0;) {
      digits[i] = static_cast<int>(row % carrier);
      row /= static_cast<std::uint64_t>(carrier);
    }
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (i) os << ',';
      os << digits[i];
    }
  };
  for (const auto& [name, alg] : file.algebras) {
    out << "algebra " << name << " carrier " << alg.carrier_size() << '\n';
    for (std::size_t ci = 0; ci < alg.signature().connectives().size(); ++ci) {
      const Connective& c = alg.signature().connectives()[ci];
      out << "op " << name << ' ' << c.name;
      for (std::uint64_t r = 0; r < alg.tables()[ci].size(); ++r) {
        out << ' ';
        print_tuple(out, r, alg.carrier_size(), c.arity);
        out << ':' << alg.tables()[ci][r];
      }
      out << '\n';
    }
  }
  auto print_elements = [](std::ostream& os, const std::vector<int>& es) {
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (i) os << ',';
      os << es[i];
    }
  };
  for (const auto& m : file.matrices) {
    out << "matrix " << m.name << " algebra " << m.algebra << " filter ";
    if (m.filter.empty())
      out << '-';
    else
      print_elements(out, m.filter);
    out << '\n';
  }
  for (const auto& a : file.atlases) {
    out << "atlas " << a.name << " algebra " << a.algebra << " filters ";
    for (std::size_t i = 0; i < a.filters.size(); ++i) {
      if (i) out << ';';
      out << '{';
      print_elements(out, a.filters[i]);
      out << '}';
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Catalog: built-ins plus whatever a matrix file contributes, under one
// namespace of stable names.
// ---------------------------------------------------------------------------

using CatalogEntry = std::variant<FiniteMatrix, Atlas>;

class Catalog {
public:
  static Catalog with_builtins() {
    Catalog c;
    c.add_matrix("CL2", cl2());
    c.add_matrix("L3", l3());
    c.add_matrix("K3", k3());
    return c;
  }

  void add_matrix(const std::string& name, FiniteMatrix m) { add(name, CatalogEntry(std::move(m))); }
  void add_atlas(const std::string& name, Atlas a) { add(name, CatalogEntry(std::move(a))); }

  void add_file(const MatrixFile& file) {
    for (const auto& m : file.matrices) add_matrix(m.name, FiniteMatrix(*file.find_algebra(m.algebra), m.filter));
    for (const auto& a : file.atlases) add_atlas(a.name, Atlas(*file.find_algebra(a.algebra), a.filters));
  }

  const CatalogEntry* find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [n, e] : entries_) out.push_back(n);
    return out;
  }

  // Expand the named entries into one class; atlases contribute their charts.
  MatrixClass to_class(const std::vector<std::string>& use) const {
    std::vector<FiniteMatrix> members;
    for (const auto& name : use) {
      const CatalogEntry* e = find(name);
      if (!e) throw error("unknown matrix or atlas '" + name + "'");
      if (const auto* m = std::get_if<FiniteMatrix>(e)) {
        members.push_back(*m);
      } else {
        const Atlas& a = std::get<Atlas>(*e);
        for (std::size_t i = 0; i < a.chart_count(); ++i) members.push_back(a.chart(i));
      }
    }
    return MatrixClass(std::move(members));
  }

  // The named entries as an atlas, when they share one algebra.
  std::optional<Atlas> to_atlas(const std::vector<std::string>& use) const {
    MatrixClass cls = to_class(use);
    const FiniteAlgebra& alg = cls.members().front().algebra();
    std::vector<std::vector<int>> filters;
    for (const auto& m : cls.members()) {
      if (!(m.algebra() == alg)) return std::nullopt;
      filters.push_back(m.filter());
    }
    return Atlas(alg, std::move(filters));
  }

private:
  void add(const std::string& name, CatalogEntry entry) {
    if (!is_identifier(name)) throw error("catalog name is not an identifier: '" + name + "'");
    if (!entries_.emplace(name, std::move(entry)).second) throw error("duplicate name '" + name + "'");
  }

  std::map<std::string, CatalogEntry> entries_;
};

inline Catalog load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open matrix file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Catalog catalog = Catalog::with_builtins();
  catalog.add_file(parse_matrix_file(buf.str()));
  return catalog;
}

} // namespace conseq
