// Acceptance runner: one PASS/FAIL line per criterion. All checks are exact;
// counts and seeds are fixed below.

#include <cstdio>
#include <functional>
#include <iostream>

#include "support.hpp"

using namespace rt;

namespace {

constexpr int kExclusionCases = 1000;
constexpr std::size_t kExclusionMaxSimplices = 40;
constexpr int kDerivationCases = 1000;
constexpr int kScriptCases = 1000;
constexpr std::size_t kProductFactorMax = 12;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

EdgePath generator_loop(std::size_t m, std::size_t times) {
  EdgePath p{0, {}};
  for (std::size_t t = 0; t < times; ++t)
    for (Index i = 0; i < m; ++i) p.steps.push_back({i, true});
  return p;
}

Check mobius_monodromy() {
  Check c;
  auto f = build_double_cover(3);
  auto once = monodromy(f, 0, generator_loop(3, 1));
  auto twice = monodromy(f, 0, generator_loop(3, 2));
  c.require(once == Permutation({1, 0}), "generator monodromy is " + once.cycles());
  c.require(twice.is_identity(), "doubled loop monodromy is " + twice.cycles());
  c.detail = c.ok ? "generator (0 1), doubled ()" : c.detail;
  return c;
}

Check monodromy_transport_horn() {
  Check c;
  auto f = build_double_cover(3);
  auto m = monodromy_ruptured(f, 0, {generator_loop(3, 1)});
  const auto swap = GapMode::monodromy(Permutation({1, 0}));
  c.require(m.gapped_count() == 2, "gapped problems: " + std::to_string(m.gapped_count()));
  for (const auto& p : m.registry) {
    c.require(p.gapped && p.mode && *p.mode == swap, "registry payload differs at start " + std::to_string(p.start));
    auto h = detect_transport_horn(m, 0, p.start);
    c.require(h && h->gap && *h->gap == swap, "transport horn missing at start " + std::to_string(p.start));
  }
  c.detail = c.ok ? "2 gapped, payload (0 1)" : c.detail;
  return c;
}

Check exclusion_fuzzing() {
  Check c;
  Rng rng(1001);
  std::size_t insertions = 0;
  for (int t = 0; t < kExclusionCases && c.ok; ++t) {
    auto x = random_complex(rng, kExclusionMaxSimplices);
    auto r = random_ruptured(rng, x, 0.5, 0.3);
    c.require(validate_exclusion(r).size() == oracle_exclusion_violations(r), "disagreement on case " + std::to_string(t));
    drop_conflicts(r);
    for (const auto& [h, mode] : r.gap)
      for (auto s : oracle_fillers(x, h)) {
        if (r.is_coherent(s)) continue;
        ++insertions;
        bool rejected = false;
        try {
          (void)with_coherent(r, s);
        } catch (const ExclusionConflict&) {
          rejected = true;
        }
        c.require(rejected, "insertion of " + to_string(s) + " accepted");
      }
  }
  c.detail = c.ok ? std::to_string(kExclusionCases) + " cases, " + std::to_string(insertions) + " insertions rejected"
                  : c.detail;
  return c;
}

Check trichotomy_partition() {
  Check c;
  std::size_t horns = 0;
  for (const auto& [name, r] : twenty_fixtures()) {
    for (const auto& h : enumerate_all_horns(r.underlying, r.dim_bound())) {
      ++horns;
      auto t = classify_horn(r, h);
      const int variants = int(is_coherent(t)) + int(is_gapped(t)) + int(is_open(t));
      c.require(variants == 1, name + ": " + to_string(h) + " has " + std::to_string(variants) + " variants");
      if (is_gapped(t))
        for (auto s : oracle_fillers(r.underlying, h))
          c.require(!r.is_coherent(s), name + ": gapped " + to_string(h) + " has coherent filler");
    }
  }
  c.detail = c.ok ? "20 fixtures, " + std::to_string(horns) + " horns" : c.detail;
  return c;
}

Check kan_checks() {
  Check c;
  auto delta2 = is_kan_up_to(standard_simplex(2, 2), 2);
  c.require(delta2.kan, "");
  auto circle = is_kan_up_to(build_cycle(3), 2);
  const bool witness_ok = circle.unfilled && oracle_compatible(build_cycle(3), *circle.unfilled) &&
                          oracle_fillers(build_cycle(3), *circle.unfilled).empty();
  c.require(!circle.kan && witness_ok, "");
  std::size_t open = 0;
  bool fixtures_kan = true;
  for (auto x : {z3_nerve(), terminal_complex(2)}) {
    fixtures_kan = fixtures_kan && is_kan_up_to(x, 2).kan;
    auto r = from_kan(x);
    for (const auto& h : enumerate_all_horns(x, 2)) open += is_open(classify_horn(r, h)) ? 1 : 0;
  }
  c.require(fixtures_kan && open == 0, "");
  c.detail = std::string("delta^2 Kan: ") + (delta2.kan ? "yes" : "no, unfilled " + to_string(*delta2.unfilled)) +
             "; 3-cycle Kan: " + (circle.kan ? "yes" : "no, witness " + to_string(*circle.unfilled)) +
             "; open horns under from_kan of Kan fixtures: " + std::to_string(open);
  return c;
}

Check product_gap_rule() {
  Check c;
  Rng rng(1002);
  std::size_t horns = 0;
  for (int t = 0; t < 40; ++t) {
    auto x = random_complex(rng, kProductFactorMax);
    auto y = random_complex(rng, kProductFactorMax);
    auto r = random_ruptured(rng, x, 0.5, 0.3);
    auto s = random_ruptured(rng, y, 0.5, 0.3);
    drop_conflicts(r);
    drop_conflicts(s);
    auto p = product(r, s);
    const auto [left, right] = product_projections(x, y);
    for (const auto& h : enumerate_all_horns(p.underlying, 2)) {
      ++horns;
      // Direct projection: the image of each face under the projection maps.
      HornSpec hl = h, hr = h;
      for (std::size_t i = 0; i <= h.n; ++i) {
        if (i == h.k) continue;
        hl.faces[i] = left.per_dim[h.n - 1][h.faces[i]];
        hr.faces[i] = right.per_dim[h.n - 1][h.faces[i]];
      }
      const bool expected = r.is_gapped(hl) || s.is_gapped(hr);
      c.require(is_gapped(classify_horn(p, h)) == expected, "product horn " + to_string(h));
    }
  }
  c.detail = c.ok ? "40 products, " + std::to_string(horns) + " horns" : c.detail;
  return c;
}

Check composition_table() {
  Check c;
  for (auto a : kOutcomes)
    for (auto b : kOutcomes) {
      auto cell = composition_cell(a, b);
      auto step = decompose_lift(cell.f, cell.g, cell.key);
      const bool gapped_rule = (a == Outcome::Gapped || b == Outcome::Gapped) == (step.composite == Outcome::Gapped);
      c.require(step.first == a && step.second == b && step.composite == compose_outcomes(a, b) && gapped_rule,
                std::string("cell (") + outcome_name(a) + ", " + outcome_name(b) + ") composite " +
                    outcome_name(step.composite));
    }
  c.detail = c.ok ? "9 cells" : c.detail;
  return c;
}

Check linear_derivability_horn() {
  using namespace rupture::deriv;
  Check c;
  ResourceContext gamma({{"x", Type::named("A"), Annotation::Exponential}});
  ResourceContext delta({{"y", Type::named("A"), Annotation::Linear}});
  auto AxA = Type::product(Type::named("A"), Type::named("A"));
  auto h = detect_derivability_horn(gamma, delta, {{{"x", "y"}}},
                                    Term::pair(Term::variable("x"), Term::variable("x")), AxA);
  c.require(h.has_value(), "no horn");
  if (h) {
    c.require(h->in_gamma.derivable(), "gamma side underivable");
    c.require(h->in_delta.certificate.count("y") == 2 && !h->in_delta.certificate.verdicts.at("y").satisfied,
              "delta certificate wrong");
  }
  Rng rng(1003);
  const char* names[] = {"a", "b", "c"};
  const Annotation anns[] = {Annotation::Linear, Annotation::Affine, Annotation::Relevant, Annotation::Exponential};
  for (int t = 0; t < kDerivationCases; ++t) {
    std::vector<Binding> bs;
    for (std::size_t i = 0, n = uniform(rng, 1, 3); i < n; ++i)
      bs.push_back({names[i], Type::named(coin(rng, 0.5) ? "A" : "B"), anns[uniform(rng, 0, 3)]});
    ResourceContext ctx(bs);
    std::function<Term(int)> term = [&](int depth) {
      if (depth == 0 || coin(rng, 0.4))
        return coin(rng, 0.15) ? Term::unit() : Term::variable(bs[uniform(rng, 0, bs.size() - 1)].var);
      return Term::pair(term(depth - 1), term(depth - 1));
    };
    std::function<Type(int)> type = [&](int depth) {
      if (depth == 0 || coin(rng, 0.4)) return coin(rng, 0.2) ? Type::unit() : Type::named(coin(rng, 0.5) ? "A" : "B");
      return Type::product(type(depth - 1), type(depth - 1));
    };
    auto r = check_derivable(ctx, term(3), type(3));
    const bool decided = r.verdict == Verdict::Derivable || r.verdict == Verdict::Underivable;
    c.require(decided && r.derivable() == (r.certificate.all_satisfied() && r.type_errors.empty()),
              "undecided case " + std::to_string(t));
  }
  c.detail = c.ok ? "horn inhabited, count(y)=2, " + std::to_string(kDerivationCases) + " decided" : c.detail;
  return c;
}

Check judgment_store() {
  using namespace rupture::judg;
  Check c;
  Rng rng(1004);
  const char* names[] = {"P", "Q", "R"};
  std::size_t rejected = 0, horns = 0;
  for (int t = 0; t < kScriptCases && c.ok; ++t) {
    WitnessStore s;
    std::map<JudgmentAtom, Polarity> seen;
    for (std::size_t i = 0, n = uniform(rng, 1, 15); i < n; ++i) {
      auto j = coin(rng, 0.2) ? JudgmentAtom::base(names[uniform(rng, 0, 2)])
                              : JudgmentAtom::arrow(names[uniform(rng, 0, 2)], names[uniform(rng, 0, 2)]);
      auto p = coin(rng, 0.6) ? Polarity::Coherent : Polarity::Gapped;
      auto r = s.add_witness(j, p);
      const bool dual = seen.contains(j) && seen[j] != p;
      c.require(std::holds_alternative<ExclusionViolation>(r) == dual, "dual insertion mishandled");
      if (dual) {
        ++rejected;
        continue;
      }
      seen[j] = p;
      s = std::get<WitnessStore>(r);
    }
    const bool fragment = is_coherent_fragment(s);
    for (const auto& a : s.entries())
      for (const auto& b : s.entries())
        for (const auto& g : s.entries()) {
          const bool expected = a.polarity == Polarity::Coherent && b.polarity == Polarity::Coherent &&
                                g.polarity == Polarity::Gapped && a.judgment.is_arrow() && b.judgment.is_arrow() &&
                                g.judgment.is_arrow() && *a.judgment.target == b.judgment.source &&
                                g.judgment.source == a.judgment.source && *g.judgment.target == *b.judgment.target;
          bool made = true;
          try {
            make_horn(s, a.id, b.id, g.id);
          } catch (const HornError&) {
            made = false;
          }
          c.require(made == expected, "make_horn mismatch on " + a.id + " " + b.id + " " + g.id);
          c.require(!(fragment && made), "coherent fragment yielded a horn");
          horns += made ? 1 : 0;
        }
  }
  c.detail = c.ok ? std::to_string(kScriptCases) + " scripts, " + std::to_string(rejected) + " dual insertions rejected, " +
                        std::to_string(horns) + " horns"
                  : c.detail;
  return c;
}

Check semantic_fixtures() {
  Check c;
  auto bank = load_fibration_fixture("bank.json");
  auto t = transport(bank, 0, 0);
  auto* g = std::get_if<TransportGapped>(&t);
  c.require(g && g->mode && g->mode->kind == "semantic", "bank transport not gapped (semantic)");
  auto crane = load_fibration_fixture("crane.json");
  auto first = transport(crane, 0, 0);
  auto h = detect_functoriality_horn(crane, 0, 0, 1);
  c.require(std::holds_alternative<TransportCoherent>(first), "crane first step not coherent");
  c.require(h.has_value(), "crane functoriality horn missing");
  c.detail = c.ok ? "bank gapped (semantic), crane functoriality horn" : c.detail;
  return c;
}

Check cli_round_trip() {
  Check c;
  for (const auto& name : document_fixtures()) {
    auto doc = load_fixture(name);
    auto text = io::serialize(doc);
    auto again = io::parse_document(text);
    c.require(again == doc && io::serialize(again) == text, "round trip failed on " + name);
  }
  using namespace rupture::cli;
  const auto f = [](const std::string& n) { return fixture_path(n); };
  std::vector<std::function<CliResult()>> reports = {
      [&] { return cmd_horns(f("cycle3_gapped.json"), 2, 1, false); },
      [&] { return cmd_kan(f("delta2.json"), 2, true); },
      [&] { return cmd_transport(f("crane.json"), 0, {0, 1}, false); },
      [&] { return cmd_monodromy(f("double_cover3.json"), f("double_cover3_loops.json"), true); },
      [&] { return cmd_derive(f("linear_horn.json"), false); },
      [&] { return cmd_judgments(f("judgments.json"), true); },
      [&] { return cmd_product(f("delta2.json"), f("cycle3.json"), true); },
      [&] { return cmd_core(f("delta2.json"), true); },
  };
  for (std::size_t i = 0; i < reports.size(); ++i) {
    auto a = reports[i]();
    auto b = reports[i]();
    c.require(a.out == b.out && a.err == b.err && a.code == b.code, "report " + std::to_string(i) + " differs");
  }
  c.detail = c.ok ? std::to_string(document_fixtures().size()) + " fixtures, " + std::to_string(reports.size()) +
                        " reports stable"
                  : c.detail;
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"mobius-monodromy", mobius_monodromy},
      {"monodromy-transport-horn", monodromy_transport_horn},
      {"exclusion-fuzzing", exclusion_fuzzing},
      {"trichotomy-partition", trichotomy_partition},
      {"kan-checks", kan_checks},
      {"product-gap-rule", product_gap_rule},
      {"composition-truth-table", composition_table},
      {"linear-derivability-horn", linear_derivability_horn},
      {"judgment-store", judgment_store},
      {"semantic-fixtures", semantic_fixtures},
      {"cli-round-trip-determinism", cli_round_trip},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", c.ok ? "PASS" : "FAIL", name, c.detail.c_str());
    failed += c.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", int(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
