#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace conseq {

struct Connective {
  std::string name;
  int arity = 0;

  bool operator==(const Connective&) const = default;
};

// A propositional signature: connective names with arities, in declaration
// order. Nullary connectives (constants) are allowed.
class Signature {
public:
  Signature() = default;

  explicit Signature(std::vector<Connective> connectives) : connectives_(std::move(connectives)) {
    std::set<std::string> seen;
    for (const auto& c : connectives_) {
      if (!is_identifier(c.name)) throw error("connective name is not an identifier: '" + c.name + "'");
      if (c.arity < 0) throw error("connective '" + c.name + "' has negative arity");
      if (!seen.insert(c.name).second) throw error("duplicate connective name '" + c.name + "'");
    }
  }

  const std::vector<Connective>& connectives() const { return connectives_; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < connectives_.size(); ++i)
      if (connectives_[i].name == name) return i;
    return std::nullopt;
  }

  const Connective* find(const std::string& name) const {
    auto i = index_of(name);
    return i ? &connectives_[*i] : nullptr;
  }

  bool operator==(const Signature&) const = default;

private:
  std::vector<Connective> connectives_;
};

// A signature plus a variable pool. `named_vars` are the declared variables
// in declaration order (they fix fragment enumeration order); when
// `pool_unbounded` is set, any identifier that is not a connective name also
// counts as a variable, and fresh variables v0, v1, ... are always available.
class Language {
public:
  Language() = default;

  Language(Signature sig, std::vector<std::string> named_vars, bool pool_unbounded = true)
      : signature_(std::move(sig)), named_vars_(std::move(named_vars)), pool_unbounded_(pool_unbounded) {
    std::set<std::string> seen;
    for (const auto& v : named_vars_) {
      if (!is_identifier(v)) throw error("variable name is not an identifier: '" + v + "'");
      if (signature_.find(v)) throw error("variable '" + v + "' clashes with a connective name");
      if (!seen.insert(v).second) throw error("duplicate variable name '" + v + "'");
    }
  }

  const Signature& signature() const { return signature_; }
  const std::vector<std::string>& named_vars() const { return named_vars_; }
  bool pool_unbounded() const { return pool_unbounded_; }

  bool has_named_var(const std::string& name) const {
    return std::find(named_vars_.begin(), named_vars_.end(), name) != named_vars_.end();
  }

  // Whether `name` denotes a variable of this language.
  bool is_variable_name(const std::string& name) const {
    if (signature_.find(name)) return false;
    if (has_named_var(name)) return true;
    return pool_unbounded_ && is_identifier(name);
  }

  bool operator==(const Language&) const = default;

private:
  Signature signature_;
  std::vector<std::string> named_vars_;
  bool pool_unbounded_ = true;
};

// Same signature, enlarged variable pool. Throws on a name clash.
inline Language extend_language(const Language& lang, const std::vector<std::string>& new_vars) {
  std::vector<std::string> vars = lang.named_vars();
  for (const auto& v : new_vars) {
    if (!is_identifier(v)) throw error("variable name is not an identifier: '" + v + "'");
    if (lang.signature().find(v)) throw error("variable '" + v + "' clashes with a connective name");
    if (std::find(vars.begin(), vars.end(), v) != vars.end())
      throw error("variable '" + v + "' already present in the language");
    vars.push_back(v);
  }
  return Language(lang.signature(), std::move(vars), lang.pool_unbounded());
}

// True iff the signatures are identical and `base`'s variable pool is
// included in `ext`'s.
inline bool is_primitive_extension(const Language& base, const Language& ext) {
  if (!(base.signature() == ext.signature())) return false;
  if (base.pool_unbounded() && !ext.pool_unbounded()) return false;
  for (const auto& v : base.named_vars())
    if (!ext.is_variable_name(v)) return false;
  return true;
}

// First fresh variable v0, v1, ... absent from the language's declared names
// and from `avoid`.
inline std::string fresh_variable(const Language& lang, const std::set<std::string>& avoid = {}) {
  for (std::size_t i = 0;; ++i) {
    std::string candidate = "v" + std::to_string(i);
    if (lang.signature().find(candidate)) continue;
    if (lang.has_named_var(candidate)) continue;
    if (avoid.count(candidate)) continue;
    return candidate;
  }
}

} // namespace conseq
