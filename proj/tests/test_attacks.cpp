#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "builders.hpp"
#include "doctest.h"
#include "json.hpp"
#include "phishlab/attacks.hpp"
#include "phishlab/classifier.hpp"
#include "phishlab/collision.hpp"
#include "phishlab/error.hpp"
#include "phishlab/features.hpp"
#include "phishlab/mutation.hpp"

using namespace phishlab;
using phishlab::testing::page;
using phishlab::testing::rule;

namespace {

// Brute-force rescoring used as the reference for every influence.
double brute_x(const Classifier& c, const FeatureValueMap& m) {
  double x = c.bias;
  for (const auto& r : c.rules) {
    double prod = r.weight;
    bool hit = true;
    for (const auto& f : r.features) {
      const double v = m.count(f) ? m.at(f) : 0.0;
      if (v == 0.0 || (is_frequency_feature(f) && v < c.freq_detect_threshold)) hit = false;
      prod *= v;
    }
    if (hit) x += prod;
  }
  return x;
}

bool brute_detected(const Classifier& c, const FeatureValueMap& m, const std::string& f) {
  const double v = m.count(f) ? m.at(f) : 0.0;
  return v != 0.0 && !(is_frequency_feature(f) && v < c.freq_detect_threshold);
}

struct Candidate {
  bool del = false;
  std::string name;
  std::vector<std::string> features;  // rule features for additions
  double gain = 0.0;
};

/// Candidates of a one-step lookahead maximizer: every deletion of a feature
/// of a hit positive rule and every addition of a negative rule, by gain.
/// Deletions win equal gains; ties within a kind go by name.
std::vector<Candidate> lookahead(const Classifier& c, const FeatureValueMap& m) {
  const double x = brute_x(c, m);
  std::vector<Candidate> out;
  std::set<std::string> seen;
  for (const auto& r : c.rules) {
    if (r.weight <= 0) continue;
    bool hit = true;
    for (const auto& f : r.features) hit = hit && brute_detected(c, m, f);
    if (!hit) continue;
    for (const auto& f : r.features) {
      if (!is_deletable_feature(f) || !seen.insert(f).second) continue;
      FeatureValueMap without = m;
      without.erase(f);
      const double g = x - brute_x(c, without);
      if (g > 0) out.push_back({true, f, {}, g});
    }
  }
  for (const auto& r : c.rules) {
    if (r.weight >= 0) continue;
    FeatureValueMap added = m;
    bool hit = true, addable = true;
    for (const auto& f : r.features) {
      if (brute_detected(c, m, f)) continue;
      hit = false;
      addable = addable && is_addable_feature(f);
      added[f] = 1.0;
    }
    if (hit || !addable) continue;
    const double g = x - brute_x(c, added);
    if (g > 0) out.push_back({false, r.id, r.features, g});
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    // Rescoring differences carry rounding noise; the attack sums contributions.
    if (std::abs(a.gain - b.gain) > 1e-9) return a.gain > b.gain;
    if (a.del != b.del) return a.del;
    return a.name < b.name;
  });
  return out;
}

Classifier undeletable_only() {
  Classifier c;
  c.bias = -1.0;
  c.rules = {rule("s", {"PageNumScriptTags>1"}, 0.9), rule("u", {"UrlPathToken=login"}, 2.23),
             rule("f", {"PageHasForms"}, 0.6), rule("n", {"UrlTld=org"}, -3.0)};
  return c;
}

DomTree shop_login_page() {
  return page("<html><head><script></script><script></script></head><body><form action=\"/x\"></form>"
              "<p>welcome</p></body></html>",
              "http://shop.example.com/login");
}

}  // namespace

TEST_SUITE("attacks") {
  TEST_CASE("feature influence") {
    Classifier c;
    c.rules = {rule("r", {"PageTerm=a"}, 1.7)};
    CHECK(influence_feature(c, {{"PageTerm=a", 1.0}}, "PageTerm=a") == 1.7);
    c.rules.push_back(rule("q", {"PageTerm=b", "PageTerm=c"}, 2.0));
    CHECK(influence_feature(c, {{"PageTerm=a", 1.0}, {"PageTerm=b", 1.0}}, "PageTerm=b") == 0.0);
    CHECK_THROWS_AS(influence_feature(c, {}, "PageTerm=a"), FeatureAbsent);
  }

  TEST_CASE("rule influence") {
    Classifier c;
    c.rules = {rule("iso", {"PageTerm=a"}, -2.0)};
    CHECK(influence_rule(c, {}, c.rules[0]) == -2.0);
    c.rules = {rule("big", {"PageTerm=a", "PageTerm=b"}, -1.5), rule("sub", {"PageTerm=a"}, -1.0)};
    CHECK(influence_rule(c, {}, c.rules[0]) == doctest::Approx(-2.5));
    CHECK(influence_rule(c, {{"PageTerm=a", 1.0}}, c.rules[0]) == doctest::Approx(-1.5));
    CHECK_THROWS_AS(influence_rule(c, {{"PageTerm=a", 1.0}}, c.rules[1]), RuleAlreadyHit);
    const auto added = with_rule_added(c, {{"PageExternalLinksFreq", 0.01}}, rule("x", {"PageExternalLinksFreq"}, -1));
    CHECK(added.at("PageExternalLinksFreq") == 1.0);
  }

  TEST_CASE("levels and outcomes") {
    CHECK(parse_level("gray") == AttackLevel::grey);
    CHECK(level_name(AttackLevel::black) == "black");
    CHECK(outcome_name(Outcome::budget_exhausted) == "budget_exhausted");
    CHECK_THROWS_AS(parse_level("purple"), std::invalid_argument);
  }

  TEST_CASE("white-box single deletion") {
    Classifier c;
    c.bias = -1.0;
    c.rules = {rule("p", {"PageTerm=verify"}, 1.5)};
    ScoreOracle o(c);
    const AttackResult r = white_box(c, o, page("<p>verify now</p>"));
    CHECK(r.success);
    REQUIRE(r.trajectory.size() == 2);
    CHECK(r.trajectory[1].op.rfind("delete PageTerm=verify", 0) == 0);
    CHECK(r.queries == 2);
    CHECK(o.query_count() == 2);
  }

  TEST_CASE("white-box exhausts on undeletable rules") {
    const Classifier c = undeletable_only();
    ScoreOracle o(c);
    const AttackResult r = white_box(c, o, shop_login_page());
    CHECK_FALSE(r.success);
    CHECK(r.outcome == Outcome::exhausted);
    CHECK(r.trajectory.size() == 1);
    CHECK(r.final_page == shop_login_page());
  }

  TEST_CASE("benign seeds are refused") {
    Classifier c;
    c.bias = -3.0;
    ScoreOracle o(c);
    const DomTree p = page("<p>hello</p>");
    CHECK_THROWS_AS(white_box(c, o, p), NotPhishing);
    CHECK_THROWS_AS(grey_box(rules_without_weights(c), o, p), NotPhishing);
    CHECK_THROWS_AS(black_box(o, p, testing::acceptance_pool()), NotPhishing);
  }

  TEST_CASE("white-box follows the lookahead maximizer on the fixture suite") {
    const Classifier model = testing::acceptance_model();
    std::set<std::string> positive_terms;
    for (const auto& r : model.rules) {
      for (const auto& f : r.features) {
        if (r.weight > 0 && f.rfind("PageTerm=", 0) == 0) positive_terms.insert(f.substr(9));
      }
    }
    PlanOptions po;
    po.freq_detect_threshold = model.freq_detect_threshold;
    po.guard = [&](std::string_view frag) { return positive_terms.count(std::string(frag)) > 0; };
    for (const auto& s : testing::acceptance_seeds()) {
      ScoreOracle o(model);
      const AttackResult r = white_box(model, o, s.page);
      CHECK(r.success);
      CHECK(r.final_score < 0.5);
      CHECK(r.queries == o.query_count());
      REQUIRE(r.accepted_states.size() == r.trajectory.size());
      // Replay: the best candidate whose plan lowers x is taken, the others
      // stay excluded for the rest of the run.
      std::set<std::string> excluded;
      DomTree current = s.page;
      for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
        CHECK(r.trajectory[i].accepted);
        CHECK(r.trajectory[i].score < r.trajectory[i - 1].score);
        const FeatureValueMap& m = r.accepted_states[i - 1];
        std::string expected;
        for (const auto& cand : lookahead(model, m)) {
          const std::string key = (cand.del ? "delete " : "add rule ") + cand.name + " ";
          if (excluded.count(key)) continue;
          MutationPlan plan;
          try {
            plan = cand.del ? plan_delete_feature(current, cand.name, po) : plan_add_rule(current, cand.features, po);
          } catch (const Error&) {
          }
          if (!plan.empty() && brute_x(model, extract_features(apply(current, plan))) < brute_x(model, m)) {
            expected = key;
            current = apply(current, plan);
            break;
          }
          excluded.insert(key);
        }
        CHECK_MESSAGE(r.trajectory[i].op.rfind(expected, 0) == 0, s.name << ": " << r.trajectory[i].op << " vs " << expected);
      }
      CHECK(serialize(current) == serialize(r.final_page));
    }
  }

  TEST_CASE("white-box restricted to some rules") {
    const Classifier model = testing::single_rule_model();
    const auto seeds = testing::single_rule_seeds(3);
    WhiteBoxOptions opts;
    opts.allowed_rules = std::vector<std::string>{"C1"};
    ScoreOracle o(model);
    const AttackResult r = white_box(model, o, seeds[0].page, opts);
    CHECK(r.outcome == Outcome::exhausted);
  }

  TEST_CASE("white-box with hashed knowledge decoded by collision") {
    const Classifier plain = testing::acceptance_model();
    const Classifier hashed = hash_model(plain);
    std::vector<std::string> candidates;
    Corpus corpus;
    for (const auto& s : testing::acceptance_seeds()) corpus.pages.push_back({s.page.source_url, s.page, Label::phish});
    for (const auto& spec : testing::acceptance_pool().specs) {
      DomTree p = page("<body></body>");
      apply_in_place(p, add_invisible_element(p, spec));
      corpus.pages.push_back({"http://legit.example.com/", p, Label::legit});
    }
    const auto inv = invert_hashes(harvest_candidates(corpus), model_manifest(hashed));
    const Classifier decoded = decode_model(hashed, inv.recovered);
    const auto seed = testing::acceptance_seeds().back();
    ScoreOracle o(hashed);
    const AttackResult r = white_box(decoded, o, seed.page);
    CHECK(r.success);
  }

  TEST_CASE("grey-box deletes when everything is deletable") {
    Classifier c;
    c.bias = -1.0;
    c.rules = {rule("a", {"PageTerm=verify"}, 1.0), rule("b", {"PageHasPswdInputs"}, 1.0)};
    ScoreOracle o(c);
    const AttackResult r = grey_box(rules_without_weights(c), o, page("<p>verify</p><input type=password>"));
    CHECK(r.success);
    for (const auto& s : r.trajectory) CHECK(s.op.rfind("add", 0) != 0);
  }

  TEST_CASE("grey-box adds when nothing is deletable") {
    Classifier c;
    c.bias = -1.0;
    c.rules = {rule("s", {"PageNumScriptTags>1"}, 1.5), rule("f", {"PageHasForms"}, 0.6),
               rule("n", {"PageTerm=privacy", "PageHasCheckInputs"}, -3.0)};
    ScoreOracle o(c);
    const AttackResult r = grey_box(rules_without_weights(c), o, shop_login_page());
    CHECK(r.success);
    bool added = false;
    for (const auto& s : r.trajectory) added |= s.accepted && s.op.rfind("add rule n", 0) == 0;
    CHECK(added);
    CHECK(r.queries == o.query_count());
  }

  TEST_CASE("grey-box accepted scores strictly decrease") {
    const Classifier model = testing::acceptance_model();
    const RuleSet known = rules_without_weights(model);
    double white_features = 0, grey_features = 0;
    for (const auto& s : testing::acceptance_seeds()) {
      ScoreOracle ow(model), og(model);
      AttackResult w = white_box(model, ow, s.page);
      AttackResult g = grey_box(known, og, s.page);
      annotate(w, model);
      annotate(g, model);
      CHECK(g.success);
      double best = g.initial_score;
      for (const auto& step : g.trajectory) {
        if (step.index == 0) continue;
        if (step.accepted) {
          CHECK(step.score < best);
          best = step.score;
        }
      }
      CHECK(g.final_score == best);
      CHECK(g.mutated_rules >= g.mutated_features);
      white_features += static_cast<double>(w.mutated_features);
      grey_features += static_cast<double>(g.mutated_features);
    }
    CHECK(grey_features >= white_features);
  }

  TEST_CASE("black-box succeeds by modification alone") {
    Classifier c;
    c.bias = -1.0;
    c.rules = {rule("p", {"PageHasPswdInputs"}, 1.5)};
    ScoreOracle o(c);
    const AttackResult r = black_box(o, page("<form action=\"/s\"><input type=\"password\"></form>"),
                                     testing::acceptance_pool());
    CHECK(r.success);
    CHECK(r.additions == 0);
    REQUIRE(r.score_after_modification.has_value());
    CHECK(*r.score_after_modification < 0.5);
  }

  TEST_CASE("black-box needs additions after modification stalls") {
    const Classifier hashed = testing::exhaustion_model_hashed();
    ScoreOracle o(hashed);
    BlackBoxOptions opts;
    opts.seed = 3;
    const AttackResult r = black_box(o, testing::exhaustion_seed(), testing::exhaustion_pool(40), opts);
    CHECK(r.success);
    CHECK(r.additions > 0);
    REQUIRE(r.score_after_modification.has_value());
    CHECK(*r.score_after_modification >= 0.5);
    CHECK(r.queries == o.query_count());
  }

  TEST_CASE("black-box rollbacks restore the checkpoint exactly") {
    const Classifier hashed = testing::exhaustion_model_hashed();
    ScoreOracle o(hashed);
    std::string checkpoint = serialize(testing::exhaustion_seed());
    double best = 2.0;
    std::size_t rollbacks = 0;
    bool ok = true;
    BlackBoxOptions opts;
    opts.seed = 11;
    opts.observer = [&](const BlackBoxEvent& e) {
      const std::string now = serialize(*e.page);
      if (e.accepted) {
        ok = ok && e.score < best;
        best = e.score;
        checkpoint = now;
      } else {
        ok = ok && now == checkpoint;
        rollbacks += e.phase == 2;
      }
    };
    const AttackResult r = black_box(o, testing::exhaustion_seed(), testing::exhaustion_pool(60), opts);
    CHECK(ok);
    CHECK(rollbacks == r.rollbacks);
    CHECK(rollbacks > 0);
    CHECK(serialize(r.final_page) == checkpoint);
  }

  TEST_CASE("black-box is deterministic per seed and honours the budget") {
    const Classifier hashed = testing::exhaustion_model_hashed();
    const auto run = [&](std::uint64_t seed, std::size_t budget) {
      ScoreOracle o(hashed);
      BlackBoxOptions opts;
      opts.seed = seed;
      opts.budget = budget;
      return black_box(o, testing::exhaustion_seed(), testing::exhaustion_pool(100), opts);
    };
    const AttackResult a = run(5, 2000), b = run(5, 2000);
    CHECK(serialize(a.final_page) == serialize(b.final_page));
    CHECK(result_to_json(a, "s", "f", false) == result_to_json(b, "s", "f", false));
    const AttackResult tight = run(5, 4);
    CHECK(tight.outcome == Outcome::budget_exhausted);
    CHECK(tight.additions == 4);
    ScoreOracle o(hashed);
    CHECK_THROWS_AS(black_box(o, testing::exhaustion_seed(), AdditionPool{}), std::invalid_argument);
  }

  TEST_CASE("annotation counts flipped features and the rules relying on them") {
    Classifier c;
    c.rules = {rule("a", {"PageTerm=x"}, 1), rule("b", {"PageTerm=x", "PageTerm=y"}, 1), rule("c", {"PageTerm=z"}, -1)};
    AttackResult r;
    r.accepted_states = {{{"PageTerm=x", 1.0}, {"PageTerm=y", 1.0}}, {{"PageTerm=y", 1.0}},
                         {{"PageTerm=y", 1.0}, {"PageTerm=z", 1.0}}};
    annotate(r, c);
    CHECK(r.mutated_features == 2);
    CHECK(r.mutated_rules == 3);
  }

  TEST_CASE("report json") {
    Classifier c;
    c.bias = -1.0;
    c.rules = {rule("p", {"PageTerm=verify"}, 1.5)};
    ScoreOracle o(c);
    AttackResult r = white_box(c, o, page("<p>verify</p>"));
    annotate(r, c);
    const auto j = nlohmann::ordered_json::parse(result_to_json(r, "seed.html", "out/final.html", false));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"level", "success", "outcome", "seed_path", "final_path", "initial_score",
                                           "final_score", "steps", "mutated_features", "mutated_rules", "queries",
                                           "operations", "additions", "rollbacks", "rng_seed"});
    CHECK(j["steps"].size() == 2);
    CHECK(j["steps"][0]["op"] == "seed");
    const auto timed = nlohmann::ordered_json::parse(result_to_json(r, "s", "f", true));
    CHECK(timed.contains("elapsed_ms"));
  }
}
