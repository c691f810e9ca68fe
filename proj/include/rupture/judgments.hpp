#pragma once

// Witness store for polarity-tagged judgments. A judgment may carry many
// coherent witnesses or many gap witnesses, never both (Exclusion). A horn is
// two coherent arrow steps J⇒K, K⇒L with a gapped closure J⇒L. level_up
// starts a store over the coherence witnesses of the previous level.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rupture/report.hpp"

namespace rupture::judg {

/// Base atom (source only) or arrow atom source ⇒ target.
struct JudgmentAtom {
  std::string source;
  std::optional<std::string> target;

  static JudgmentAtom base(std::string label) { return {std::move(label), std::nullopt}; }
  static JudgmentAtom arrow(std::string from, std::string to) { return {std::move(from), std::move(to)}; }

  [[nodiscard]] bool is_arrow() const { return target.has_value(); }

  auto operator<=>(const JudgmentAtom&) const = default;
};

inline std::string to_string(const JudgmentAtom& j) { return j.is_arrow() ? j.source + "=>" + *j.target : j.source; }

enum class Polarity { Coherent, Gapped };

inline const char* polarity_name(Polarity p) { return p == Polarity::Coherent ? "coherent" : "gapped"; }

struct WitnessEntry {
  JudgmentAtom judgment;
  Polarity polarity = Polarity::Coherent;
  std::string id;
  nlohmann::json payload;  // null when absent

  friend bool operator==(const WitnessEntry&, const WitnessEntry&) = default;
};

struct ExclusionViolation {
  JudgmentAtom judgment;
  Polarity attempted = Polarity::Coherent;
  std::string conflicting_id;
};

class UnknownAtom : public Error {
 public:
  using Error::Error;
};

class WitnessStore;
using AddResult = std::variant<WitnessStore, ExclusionViolation>;

/// Persistent value: operations return new stores. Ids are w1, w2, ... at
/// level 0 and w<level>.1, w<level>.2, ... above it.
class WitnessStore {
 public:
  WitnessStore() = default;

  [[nodiscard]] std::size_t level() const { return level_; }
  [[nodiscard]] const std::vector<WitnessEntry>& entries() const { return entries_; }
  /// Base atoms available at levels >= 1 (the previous level's coherent ids).
  [[nodiscard]] const std::optional<std::set<std::string>>& universe() const { return universe_; }

  [[nodiscard]] const WitnessEntry* find(const std::string& id) const {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const WitnessEntry& e) { return e.id == id; });
    return it == entries_.end() ? nullptr : &*it;
  }

  [[nodiscard]] std::vector<const WitnessEntry*> witnesses(const JudgmentAtom& j) const {
    std::vector<const WitnessEntry*> out;
    for (const auto& e : entries_)
      if (e.judgment == j) out.push_back(&e);
    return out;
  }

  [[nodiscard]] AddResult add_witness(const JudgmentAtom& j, Polarity p, nlohmann::json payload = nullptr) const {
    if (universe_) {
      auto known = [&](const std::string& a) { return universe_->contains(a); };
      if (!known(j.source) || (j.target && !known(*j.target)))
        throw UnknownAtom("judgment " + to_string(j) + " uses atoms outside the level-" + std::to_string(level_) +
                          " universe");
    }
    for (const auto& e : entries_)
      if (e.judgment == j && e.polarity != p) return ExclusionViolation{j, p, e.id};
    WitnessStore next = *this;
    const auto prefix = level_ == 0 ? std::string("w") : "w" + std::to_string(level_) + ".";
    next.entries_.push_back({j, p, prefix + std::to_string(next.next_id_++), std::move(payload)});
    return next;
  }

  /// Fresh store whose base atoms are this store's coherent witness ids.
  [[nodiscard]] WitnessStore level_up() const {
    WitnessStore next;
    next.level_ = level_ + 1;
    next.universe_.emplace();
    for (const auto& e : entries_)
      if (e.polarity == Polarity::Coherent) next.universe_->insert(e.id);
    return next;
  }

  friend bool operator==(const WitnessStore&, const WitnessStore&) = default;

 private:
  std::size_t level_ = 0;
  std::size_t next_id_ = 1;
  std::vector<WitnessEntry> entries_;
  std::optional<std::set<std::string>> universe_;
};

/// Neither polarity witnessed.
inline bool is_open(const WitnessStore& s, const JudgmentAtom& j) { return s.witnesses(j).empty(); }

inline bool is_coherent_fragment(const WitnessStore& s) {
  return std::all_of(s.entries().begin(), s.entries().end(),
                     [](const WitnessEntry& e) { return e.polarity == Polarity::Coherent; });
}

struct HornTriple {
  std::string first;   // coherent J⇒K
  std::string second;  // coherent K⇒L
  std::string gap;     // gapped J⇒L

  friend bool operator==(const HornTriple&, const HornTriple&) = default;
};

enum class HornErrorKind { MissingId, WrongPolarity, NotArrow, NonChaining };

inline const char* horn_error_name(HornErrorKind k) {
  switch (k) {
    case HornErrorKind::MissingId: return "missing-id";
    case HornErrorKind::WrongPolarity: return "wrong-polarity";
    case HornErrorKind::NotArrow: return "not-arrow";
    case HornErrorKind::NonChaining: return "non-chaining";
  }
  return "?";
}

class HornError : public Error {
 public:
  HornError(HornErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  [[nodiscard]] HornErrorKind kind() const { return kind_; }

 private:
  HornErrorKind kind_;
};

inline HornTriple make_horn(const WitnessStore& s, const std::string& first_id, const std::string& second_id,
                            const std::string& gap_id) {
  const WitnessEntry* parts[3] = {s.find(first_id), s.find(second_id), s.find(gap_id)};
  const std::string ids[3] = {first_id, second_id, gap_id};
  const Polarity want[3] = {Polarity::Coherent, Polarity::Coherent, Polarity::Gapped};
  for (int i = 0; i < 3; ++i)
    if (!parts[i]) throw HornError(HornErrorKind::MissingId, "no witness '" + ids[i] + "'");
  for (int i = 0; i < 3; ++i)
    if (parts[i]->polarity != want[i])
      throw HornError(HornErrorKind::WrongPolarity, "witness '" + ids[i] + "' is " +
                                                        polarity_name(parts[i]->polarity) + ", expected " +
                                                        polarity_name(want[i]));
  for (int i = 0; i < 3; ++i)
    if (!parts[i]->judgment.is_arrow())
      throw HornError(HornErrorKind::NotArrow, "witness '" + ids[i] + "' is not an arrow judgment");
  const auto& jk = parts[0]->judgment;
  const auto& kl = parts[1]->judgment;
  const auto& jl = parts[2]->judgment;
  if (*jk.target != kl.source || jl.source != jk.source || *jl.target != *kl.target)
    throw HornError(HornErrorKind::NonChaining, to_string(jk) + ", " + to_string(kl) + ", " + to_string(jl) +
                                                    " do not chain as (J,K), (K,L), (J,L)");
  return {first_id, second_id, gap_id};
}

}  // namespace rupture::judg
