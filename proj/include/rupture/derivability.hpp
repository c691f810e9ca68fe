#pragma once

// Resource-annotated derivability for a minimal term language (variables,
// pairs, unit). Derivability is decided by usage counting plus shape
// matching, so every judgment is either derivable or underivable, each with
// a recomputable certificate. A derivability horn is a judgment derivable in
// Γ whose substitution instance is underivable in Δ.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rupture/report.hpp"

namespace rupture::deriv {

enum class Annotation { Linear, Affine, Relevant, Exponential };

inline const char* annotation_name(Annotation a) {
  switch (a) {
    case Annotation::Linear: return "linear";
    case Annotation::Affine: return "affine";
    case Annotation::Relevant: return "relevant";
    case Annotation::Exponential: return "exponential";
  }
  return "?";
}

inline std::optional<Annotation> parse_annotation(const std::string& s) {
  if (s == "linear") return Annotation::Linear;
  if (s == "affine") return Annotation::Affine;
  if (s == "relevant") return Annotation::Relevant;
  if (s == "exponential") return Annotation::Exponential;
  return std::nullopt;
}

/// Whether `count` uses satisfy the annotation's rule.
constexpr bool usage_allowed(Annotation a, std::size_t count) {
  switch (a) {
    case Annotation::Linear: return count == 1;
    case Annotation::Affine: return count <= 1;
    case Annotation::Relevant: return count >= 1;
    case Annotation::Exponential: return true;
  }
  return false;
}

/// Opaque names, Unit, and binary products.
struct Type {
  enum class Kind { Name, Unit, Product } kind = Kind::Unit;
  std::string name;
  std::vector<Type> parts;  // two entries for products

  static Type named(std::string n) { return {Kind::Name, std::move(n), {}}; }
  static Type unit() { return {}; }
  static Type product(Type a, Type b) { return {Kind::Product, {}, {std::move(a), std::move(b)}}; }

  friend bool operator==(const Type&, const Type&) = default;
};

inline std::string to_string(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Name: return t.name;
    case Type::Kind::Unit: return "Unit";
    case Type::Kind::Product: return "(" + to_string(t.parts[0]) + " × " + to_string(t.parts[1]) + ")";
  }
  return "?";
}

inline bool well_formed(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Name: return !t.name.empty() && t.name != "Unit";
    case Type::Kind::Unit: return true;
    case Type::Kind::Product: return t.parts.size() == 2 && well_formed(t.parts[0]) && well_formed(t.parts[1]);
  }
  return false;
}

/// Variable leaves, pair nodes, unit leaves.
struct Term {
  enum class Kind { Var, Pair, Unit } kind = Kind::Unit;
  std::string var;
  std::vector<Term> parts;

  static Term variable(std::string v) { return {Kind::Var, std::move(v), {}}; }
  static Term unit() { return {}; }
  static Term pair(Term a, Term b) { return {Kind::Pair, {}, {std::move(a), std::move(b)}}; }

  friend bool operator==(const Term&, const Term&) = default;
};

inline std::string to_string(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var: return t.var;
    case Term::Kind::Unit: return "()";
    case Term::Kind::Pair: return "(" + to_string(t.parts[0]) + ", " + to_string(t.parts[1]) + ")";
  }
  return "?";
}

struct Binding {
  std::string var;
  Type type;
  Annotation annotation = Annotation::Linear;

  friend bool operator==(const Binding&, const Binding&) = default;
};

class ResourceContext {
 public:
  ResourceContext() = default;
  explicit ResourceContext(std::vector<Binding> bindings) : bindings_(std::move(bindings)) {
    std::set<std::string> seen;
    for (const auto& b : bindings_) {
      if (b.var.empty()) throw Error("context: empty variable name");
      if (!seen.insert(b.var).second) throw Error("context: duplicate variable '" + b.var + "'");
      if (!well_formed(b.type)) throw Error("context: malformed type for '" + b.var + "'");
    }
  }

  [[nodiscard]] const std::vector<Binding>& bindings() const { return bindings_; }

  [[nodiscard]] const Binding* find(const std::string& v) const {
    for (const auto& b : bindings_)
      if (b.var == v) return &b;
    return nullptr;
  }

  friend bool operator==(const ResourceContext&, const ResourceContext&) = default;

 private:
  std::vector<Binding> bindings_;
};

struct VariableVerdict {
  Annotation annotation = Annotation::Linear;
  std::size_t count = 0;
  bool satisfied = true;

  friend bool operator==(const VariableVerdict&, const VariableVerdict&) = default;
};

/// Per-variable occurrence counts and verdicts, for every context variable.
struct UsageCertificate {
  std::map<std::string, VariableVerdict> verdicts;

  [[nodiscard]] bool all_satisfied() const {
    for (const auto& [v, verdict] : verdicts)
      if (!verdict.satisfied) return false;
    return true;
  }
  [[nodiscard]] std::size_t count(const std::string& v) const { return verdicts.at(v).count; }

  friend bool operator==(const UsageCertificate&, const UsageCertificate&) = default;
};

enum class Verdict { Derivable, Underivable };

struct DerivabilityResult {
  Verdict verdict = Verdict::Underivable;
  UsageCertificate certificate;
  /// Shape mismatches between term and goal, if any.
  std::vector<std::string> type_errors;

  [[nodiscard]] bool derivable() const { return verdict == Verdict::Derivable; }
};

namespace detail {

inline void count_uses(const Term& t, std::map<std::string, std::size_t>& counts) {
  switch (t.kind) {
    case Term::Kind::Var: ++counts[t.var]; break;
    case Term::Kind::Pair:
      for (const auto& p : t.parts) count_uses(p, counts);
      break;
    case Term::Kind::Unit: break;
  }
}

inline void check_shape(const ResourceContext& ctx, const Term& t, const Type& goal, std::vector<std::string>& errors) {
  switch (t.kind) {
    case Term::Kind::Var: {
      const auto& bound = ctx.find(t.var)->type;
      if (!(bound == goal))
        errors.push_back(t.var + " : " + to_string(bound) + " does not have type " + to_string(goal));
      break;
    }
    case Term::Kind::Unit:
      if (goal.kind != Type::Kind::Unit) errors.push_back("() does not have type " + to_string(goal));
      break;
    case Term::Kind::Pair:
      if (goal.kind != Type::Kind::Product) {
        errors.push_back(to_string(t) + " is a pair but the goal is " + to_string(goal));
        break;
      }
      check_shape(ctx, t.parts[0], goal.parts[0], errors);
      check_shape(ctx, t.parts[1], goal.parts[1], errors);
      break;
  }
}

inline void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.push_back(t.var);
  for (const auto& p : t.parts) collect_vars(p, out);
}

}  // namespace detail

inline std::map<std::string, std::size_t> occurrence_counts(const Term& t) {
  std::map<std::string, std::size_t> counts;
  detail::count_uses(t, counts);
  return counts;
}

/// Derivable iff the term matches the goal's shape and every context
/// variable's usage count satisfies its annotation.
inline DerivabilityResult check_derivable(const ResourceContext& ctx, const Term& term, const Type& goal) {
  if (!well_formed(goal)) throw Error("check_derivable: malformed goal type");
  std::vector<std::string> vars;
  detail::collect_vars(term, vars);
  for (const auto& v : vars)
    if (!ctx.find(v)) throw Error("check_derivable: unbound variable '" + v + "'");

  DerivabilityResult out;
  auto counts = occurrence_counts(term);
  for (const auto& b : ctx.bindings()) {
    auto it = counts.find(b.var);
    std::size_t c = it == counts.end() ? 0 : it->second;
    out.certificate.verdicts[b.var] = {b.annotation, c, usage_allowed(b.annotation, c)};
  }
  detail::check_shape(ctx, term, goal, out.type_errors);
  out.verdict = out.type_errors.empty() && out.certificate.all_satisfied() ? Verdict::Derivable : Verdict::Underivable;
  return out;
}

/// σ : Δ → Γ, sending each Γ-variable to a Δ-variable.
struct Substitution {
  std::map<std::string, std::string> mapping;

  friend bool operator==(const Substitution&, const Substitution&) = default;
};

/// Totality over Γ, targets bound in Δ, types equal. Annotations are
/// deliberately ignored.
inline Report validate_substitution(const ResourceContext& gamma, const ResourceContext& delta, const Substitution& s) {
  Report r;
  for (const auto& b : gamma.bindings()) {
    auto it = s.mapping.find(b.var);
    if (it == s.mapping.end()) {
      r.add("substitution", "Γ-variable '" + b.var + "' is unmapped");
      continue;
    }
    const auto* target = delta.find(it->second);
    if (!target) {
      r.add("substitution", "'" + b.var + "' maps to '" + it->second + "', which Δ does not bind");
      continue;
    }
    if (!(target->type == b.type))
      r.add("substitution", "'" + b.var + "' : " + to_string(b.type) + " maps to '" + target->var + "' : " +
                                to_string(target->type));
  }
  for (const auto& [from, to] : s.mapping)
    if (!gamma.find(from)) r.add("substitution", "'" + from + "' is not a Γ-variable");
  return r;
}

/// Leaf-wise renaming.
inline Term apply_substitution(const Term& t, const Substitution& s) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = s.mapping.find(t.var);
      if (it == s.mapping.end()) throw Error("apply_substitution: unmapped variable '" + t.var + "'");
      return Term::variable(it->second);
    }
    case Term::Kind::Unit: return t;
    case Term::Kind::Pair:
      return Term::pair(apply_substitution(t.parts[0], s), apply_substitution(t.parts[1], s));
  }
  return t;
}

struct DerivabilityHorn {
  DerivabilityResult in_gamma;     // Derivable
  Substitution substitution;
  Term substituted;
  DerivabilityResult in_delta;     // Underivable: the gap witness
};

inline std::optional<DerivabilityHorn> detect_derivability_horn(const ResourceContext& gamma,
                                                                const ResourceContext& delta,
                                                                const Substitution& sigma, const Term& term,
                                                                const Type& goal) {
  if (auto r = validate_substitution(gamma, delta, sigma); !r.ok())
    throw Error("detect_derivability_horn: " + r.items().front().message);
  auto before = check_derivable(gamma, term, goal);
  if (!before.derivable()) return std::nullopt;
  auto moved = apply_substitution(term, sigma);
  auto after = check_derivable(delta, moved, goal);
  if (after.derivable()) return std::nullopt;
  return DerivabilityHorn{std::move(before), sigma, std::move(moved), std::move(after)};
}

}  // namespace rupture::deriv
