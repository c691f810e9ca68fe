#pragma once

// Typed gap witnesses: how a horn or lifting problem fails to fill.

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "rupture/report.hpp"

namespace rupture {

/// A bijection on {0..size-1}, stored as the image list.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {}

  static Permutation identity(std::size_t size) {
    std::vector<std::size_t> v(size);
    for (std::size_t i = 0; i < size; ++i) v[i] = i;
    return Permutation(std::move(v));
  }

  [[nodiscard]] std::size_t size() const { return images_.size(); }
  [[nodiscard]] std::size_t operator()(std::size_t i) const { return images_.at(i); }
  [[nodiscard]] const std::vector<std::size_t>& images() const { return images_; }

  [[nodiscard]] bool is_bijection() const {
    std::vector<bool> seen(images_.size(), false);
    for (auto v : images_) {
      if (v >= images_.size() || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  [[nodiscard]] bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  /// (this ∘ first): apply `first`, then this.
  [[nodiscard]] Permutation after(const Permutation& first) const {
    std::vector<std::size_t> v(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) v[i] = images_.at(first(i));
    return Permutation(std::move(v));
  }

  /// Cycle notation without fixed points; "()" for the identity.
  [[nodiscard]] std::string cycles() const {
    std::string out;
    std::vector<bool> done(images_.size(), false);
    for (std::size_t start = 0; start < images_.size(); ++start) {
      if (done[start] || images_[start] == start) continue;
      out += "(";
      std::size_t i = start;
      bool first = true;
      while (!done[i]) {
        done[i] = true;
        if (!first) out += " ";
        out += std::to_string(i);
        first = false;
        i = images_[i];
      }
      out += ")";
    }
    return out.empty() ? "()" : out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> images_;
};

using UsageCounts = std::map<std::string, std::size_t>;
using FeatureList = std::vector<std::string>;
using GapPayload = std::variant<std::monostate, Permutation, UsageCounts, FeatureList>;

struct GapMode {
  std::string kind = "plain";
  GapPayload payload;

  static GapMode plain() { return {}; }
  static GapMode monodromy(Permutation p) { return {"monodromy", std::move(p)}; }
  static GapMode resource(UsageCounts c) { return {"resource", std::move(c)}; }
  static GapMode semantic(FeatureList f) { return {"semantic", std::move(f)}; }

  friend bool operator==(const GapMode&, const GapMode&) = default;
};

/// Kind must be one of plain | monodromy | resource | semantic with the
/// matching payload alternative.
inline Report validate_gap_mode(const GapMode& mode) {
  Report r;
  if (mode.kind.empty()) {
    r.add("gap-mode", "empty kind");
    return r;
  }
  std::size_t expected = 0;
  if (mode.kind == "plain") expected = 0;
  else if (mode.kind == "monodromy") expected = 1;
  else if (mode.kind == "resource") expected = 2;
  else if (mode.kind == "semantic") expected = 3;
  else {
    r.add("gap-mode", "unknown kind '" + mode.kind + "'");
    return r;
  }
  if (mode.payload.index() != expected) r.add("gap-mode", "payload does not match kind '" + mode.kind + "'");
  if (auto* p = std::get_if<Permutation>(&mode.payload); p && !p->is_bijection())
    r.add("gap-mode", "monodromy payload is not a bijection");
  return r;
}

}  // namespace rupture
