#include "phishlab/attacks.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "phishlab/error.hpp"
#include "phishlab/text.hpp"

namespace phishlab {

std::string_view level_name(AttackLevel level) {
  switch (level) {
    case AttackLevel::white: return "white";
    case AttackLevel::grey: return "grey";
    case AttackLevel::black: return "black";
  }
  return "?";
}

AttackLevel parse_level(std::string_view name) {
  if (name == "white") return AttackLevel::white;
  if (name == "grey" || name == "gray") return AttackLevel::grey;
  if (name == "black") return AttackLevel::black;
  throw std::invalid_argument("unknown attack level '" + std::string(name) + "'");
}

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::success: return "success";
    case Outcome::exhausted: return "exhausted";
    case Outcome::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

bool detected(const FeatureValueMap& fmap, const std::string& feature, double thr) {
  const auto it = fmap.find(feature);
  if (it == fmap.end() || it->second == 0.0) return false;
  return !(it->second < thr && is_frequency_feature(feature));
}

std::size_t count_additions(const MutationPlan& plan) {
  return static_cast<std::size_t>(std::count_if(plan.ops.begin(), plan.ops.end(), [](const NodeOp& op) {
    return op.kind == OpKind::add_invisible_element;
  }));
}

/// Shared bookkeeping of the three attacks.
class Run {
 public:
  Run(AttackLevel level, ScoreOracle& oracle, const DomTree& page)
      : oracle_(oracle), started_(Clock::now()), queries_before_(oracle.query_count()), page_(page) {
    result_.level = level;
    score_ = oracle_.score(page_);
    if (score_ < oracle_.threshold()) {
      throw NotPhishing("seed scores " + std::to_string(score_) + ", below the threshold");
    }
    result_.initial_score = score_;
    result_.trajectory.push_back({0, "seed", score_, true});
    raw_ = extract_features(page_);
    result_.accepted_states.push_back(raw_);
  }

  const DomTree& page() const { return page_; }
  const FeatureValueMap& raw() const { return raw_; }
  double score() const { return score_; }
  bool evaded() const { return score_ < oracle_.threshold(); }
  ScoreOracle& oracle() { return oracle_; }
  AttackResult& result() { return result_; }

  /// Queries the oracle on a candidate page and keeps it iff the score drops.
  bool try_candidate(DomTree candidate, const std::string& what, std::size_t ops,
                     std::size_t additions) {
    result_.operations += ops;
    result_.additions += additions;
    const double q = oracle_.score(candidate);
    const bool keep = q < score_;
    record(what, q, keep);
    if (keep) commit(std::move(candidate), q);
    return keep;
  }

  void record(const std::string& what, double q, bool accepted) {
    result_.trajectory.push_back({result_.trajectory.size(), what, q, accepted});
  }

  void commit(DomTree page, double q) {
    page_ = std::move(page);
    score_ = q;
    raw_ = extract_features(page_);
    result_.accepted_states.push_back(raw_);
  }

  AttackResult finish(Outcome failure) {
    result_.success = evaded();
    result_.outcome = result_.success ? Outcome::success : failure;
    result_.final_page = page_;
    result_.final_score = score_;
    result_.queries = oracle_.query_count() - queries_before_;
    result_.elapsed = Clock::now() - started_;
    return std::move(result_);
  }

 private:
  ScoreOracle& oracle_;
  Clock::time_point started_;
  std::size_t queries_before_;
  DomTree page_;
  FeatureValueMap raw_;
  double score_ = 0.0;
  AttackResult result_;
};

std::string plan_summary(const std::string& head, const MutationPlan& plan) {
  return head + " (" + std::to_string(plan.ops.size()) + (plan.ops.size() == 1 ? " op)" : " ops)");
}

/// Page terms an attacker must not create while splitting another term.
class TermGuard {
 public:
  void add_feature(const std::string& f) {
    if (is_hex_digest(f)) {
      digests_.insert(f);
    } else if (const auto parsed = parse_feature(f); parsed && parsed->kind == FeatureKind::PageTerm) {
      terms_.insert(parsed->payload);
    }
  }

  bool operator()(std::string_view fragment) const {
    if (terms_.count(std::string(fragment))) return true;
    if (digests_.empty() || fragment.empty()) return false;
    return digests_.count(hash_feature("PageTerm=" + std::string(fragment))) > 0;
  }

 private:
  std::set<std::string> terms_;
  std::set<std::string> digests_;
};

}  // namespace

double influence_feature(const Classifier& classifier, const FeatureValueMap& fmap,
                         std::string_view feature) {
  const auto it = fmap.find(feature);
  if (it == fmap.end() || it->second == 0.0) {
    throw FeatureAbsent(std::string(feature) + " is not present on the page");
  }
  double delta = 0.0;
  for (const auto& r : classifier.rules) {
    if (r.relies_on(feature) && rule_hit(r, fmap, classifier.freq_detect_threshold)) {
      delta += rule_contribution(r, fmap);
    }
  }
  return delta;
}

FeatureValueMap with_rule_added(const Classifier& classifier, const FeatureValueMap& fmap,
                                const ClassificationRule& rule) {
  FeatureValueMap out = fmap;
  for (const auto& f : rule.features) {
    if (!detected(fmap, f, classifier.freq_detect_threshold)) out[f] = 1.0;
  }
  return out;
}

double influence_rule(const Classifier& classifier, const FeatureValueMap& fmap,
                      const ClassificationRule& rule) {
  const double thr = classifier.freq_detect_threshold;
  if (rule_hit(rule, fmap, thr)) throw RuleAlreadyHit("rule " + rule.id + " is already hit");
  const FeatureValueMap added = with_rule_added(classifier, fmap, rule);
  double delta = 0.0;
  for (const auto& r : classifier.rules) {
    if (!rule_hit(r, fmap, thr) && rule_hit(r, added, thr)) delta += rule_contribution(r, added);
  }
  return delta;
}

AttackResult white_box(const Classifier& knowledge, ScoreOracle& oracle, const DomTree& page,
                       const WhiteBoxOptions& options) {
  Run run(AttackLevel::white, oracle, page);
  const double thr = knowledge.freq_detect_threshold;
  auto allowed = [&](const ClassificationRule& r) {
    if (!options.allowed_rules) return true;
    const auto& ids = *options.allowed_rules;
    return std::find(ids.begin(), ids.end(), r.id) != ids.end();
  };
  TermGuard guard;
  for (const auto& r : knowledge.rules) {
    if (r.weight > 0) {
      for (const auto& f : r.features) guard.add_feature(f);
    }
  }
  const PlanOptions plan_options{thr, std::cref(guard)};

  FeatureValueMap fm = to_model_space(knowledge, run.raw());
  double x = raw_score(knowledge, fm);
  std::set<std::string> excluded_features;
  std::set<std::string> excluded_rules;

  for (std::size_t step = 0; step < options.max_steps && !run.evaded(); ++step) {
    std::vector<char> hit(knowledge.rules.size());
    for (std::size_t i = 0; i < knowledge.rules.size(); ++i) {
      hit[i] = rule_hit(knowledge.rules[i], fm, thr);
    }

    const std::string* best_feature = nullptr;
    double best_df = 0.0;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < knowledge.rules.size(); ++i) {
      const auto& r = knowledge.rules[i];
      if (r.weight <= 0 || !hit[i] || !allowed(r)) continue;
      for (const auto& f : r.features) {
        if (excluded_features.count(f) || !seen.insert(f).second || !is_deletable_feature(f)) continue;
        const double d = influence_feature(knowledge, fm, f);
        if (d > 0 && (!best_feature || d > best_df || (d == best_df && f < *best_feature))) {
          best_feature = &f;
          best_df = d;
        }
      }
    }

    const ClassificationRule* best_rule = nullptr;
    double best_dr = 0.0;
    for (std::size_t i = 0; i < knowledge.rules.size(); ++i) {
      const auto& r = knowledge.rules[i];
      if (r.weight >= 0 || hit[i] || !allowed(r) || excluded_rules.count(r.id)) continue;
      const bool addable = std::all_of(r.features.begin(), r.features.end(), [&](const std::string& f) {
        return detected(fm, f, thr) || is_addable_feature(f);
      });
      if (!addable) continue;
      const double d = influence_rule(knowledge, fm, r);
      if (d < 0 && (!best_rule || d < best_dr || (d == best_dr && r.id < best_rule->id))) {
        best_rule = &r;
        best_dr = d;
      }
    }

    const bool delete_step = best_feature && (!best_rule || best_df >= -best_dr);
    if (!delete_step && !best_rule) break;

    MutationPlan plan;
    std::string what;
    try {
      if (delete_step) {
        plan = plan_delete_feature(run.page(), *best_feature, plan_options);
        what = plan_summary("delete " + *best_feature, plan);
      } else {
        plan = plan_add_rule(run.page(), best_rule->features, plan_options);
        what = plan_summary("add rule " + best_rule->id, plan);
      }
    } catch (const Error&) {
      plan = {};
    }
    auto exclude = [&] {
      if (delete_step) {
        excluded_features.insert(*best_feature);
      } else {
        excluded_rules.insert(best_rule->id);
      }
    };
    if (plan.empty()) {
      exclude();
      continue;
    }
    DomTree next = apply(run.page(), plan);
    FeatureValueMap next_fm = to_model_space(knowledge, extract_features(next));
    const double next_x = raw_score(knowledge, next_fm);
    if (!(next_x < x)) {
      exclude();
      continue;
    }
    auto& res = run.result();
    res.operations += plan.ops.size();
    res.additions += count_additions(plan);
    const double q = run.oracle().score(next);
    run.record(what, q, true);
    run.commit(std::move(next), q);
    fm = std::move(next_fm);
    x = next_x;
  }
  return run.finish(Outcome::exhausted);
}

AttackResult grey_box(const RuleSet& knowledge, ScoreOracle& oracle, const DomTree& page,
                      const GreyBoxOptions& options) {
  Run run(AttackLevel::grey, oracle, page);
  // Weights are unknown; a zero-weight shadow model gives hit tests in the
  // right feature space.
  Classifier shadow;
  shadow.hashed = knowledge.hashed;
  shadow.freq_detect_threshold = knowledge.freq_detect_threshold;
  for (const auto& r : knowledge.rules) shadow.rules.push_back({r.id, r.features, 0.0});
  const double thr = knowledge.freq_detect_threshold;

  TermGuard guard;
  std::map<std::string, std::size_t> reliance;
  for (const auto& r : knowledge.rules) {
    for (const auto& f : r.features) {
      guard.add_feature(f);
      ++reliance[f];
    }
  }
  const PlanOptions plan_options{thr, std::cref(guard)};

  std::vector<const KnownRule*> by_id;
  for (const auto& r : knowledge.rules) by_id.push_back(&r);
  std::sort(by_id.begin(), by_id.end(), [](const KnownRule* a, const KnownRule* b) { return a->id < b->id; });

  std::set<std::string> tried_delete;
  std::set<std::string> tried_add;
  for (std::size_t round = 0; round < options.max_rounds && !run.evaded(); ++round) {
    bool progress = false;

    // Phase 1: deletions, most-relied-upon features first.
    const FeatureValueMap fm = to_model_space(shadow, run.raw());
    std::vector<std::string> candidates;
    for (const auto& r : shadow.rules) {
      if (!rule_hit(r, fm, thr)) continue;
      for (const auto& f : r.features) {
        if (!tried_delete.count(f) && is_deletable_feature(f) &&
            std::find(candidates.begin(), candidates.end(), f) == candidates.end()) {
          candidates.push_back(f);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end(), [&](const std::string& a, const std::string& b) {
      if (reliance[a] != reliance[b]) return reliance[a] > reliance[b];
      return a < b;
    });
    for (const auto& f : candidates) {
      if (run.evaded()) break;
      tried_delete.insert(f);
      MutationPlan plan;
      try {
        plan = plan_delete_feature(run.page(), f, plan_options);
      } catch (const Error&) {
        continue;
      }
      if (plan.empty()) continue;
      if (run.try_candidate(apply(run.page(), plan), plan_summary("delete " + f, plan),
                            plan.ops.size(), count_additions(plan))) {
        progress = true;
      }
    }

    // Phase 2: additions of rules the page does not hit yet.
    for (const KnownRule* r : by_id) {
      if (run.evaded()) break;
      if (tried_add.count(r->id)) continue;
      const ClassificationRule probe{r->id, r->features, 0.0};
      if (rule_hit(probe, to_model_space(shadow, run.raw()), thr)) continue;
      tried_add.insert(r->id);
      MutationPlan plan;
      try {
        plan = plan_add_rule(run.page(), r->features, plan_options);
      } catch (const Error&) {
        continue;
      }
      if (plan.empty()) continue;
      if (run.try_candidate(apply(run.page(), plan), plan_summary("add rule " + r->id, plan),
                            plan.ops.size(), count_additions(plan))) {
        progress = true;
      }
    }
    if (!progress) break;
  }
  return run.finish(Outcome::exhausted);
}

namespace {

/// Identity of an element as the pool sees it.
std::string element_key(const std::string& tag, const Attributes& attrs, const std::string& text) {
  std::string key = tag;
  for (const auto& [k, v] : attrs) key += '\x1f' + k + '=' + v;
  key += '\x1e' + text;
  return key;
}

std::string element_key(const DomNode& el) {
  Attributes attrs;
  for (const auto& a : el.attributes) {
    if (a.name == "id" || a.name == "style" || a.name.rfind("on", 0) == 0) continue;
    attrs.emplace_back(a.name, a.value);
  }
  std::string words;
  for (const auto& c : el.children) {
    if (!c.is_text()) continue;
    for (const auto& w : text::split_terms(c.value)) {
      if (!words.empty()) words += ' ';
      words += w;
    }
  }
  return element_key(el.tag, attrs, words);
}

/// One phase-1 modification: every element sharing (tag, attr, value), or
/// every occurrence of a term.
struct Unit {
  bool is_term = false;
  std::string tag, attr, value;
  std::string term;
};

void collect_units(const DomNode& node, std::vector<Unit>& units, std::set<std::string>& seen) {
  if (!node.is_element()) return;
  for (const auto& a : node.attributes) {
    if (!is_modifiable(node.tag, a.name, a.value)) continue;
    if (seen.insert("a\x1f" + node.tag + "\x1f" + a.name + "\x1f" + a.value).second) {
      units.push_back({false, node.tag, a.name, a.value, {}});
    }
  }
  const bool opaque = node.tag == "script" || node.tag == "style" || node.tag == "template";
  for (const auto& c : node.children) {
    if (c.is_text()) {
      if (opaque) continue;
      for (const auto& t : text::tokenize(c.value)) {
        if (seen.insert("t\x1f" + std::string(t.text)).second) {
          units.push_back({true, {}, {}, {}, std::string(t.text)});
        }
      }
    } else {
      collect_units(c, units, seen);
    }
  }
}

MutationPlan plan_unit(const DomTree& tree, const Unit& unit) {
  MutationPlan plan;
  if (unit.is_term) {
    for_each_page_text(tree.root, [&](const DomNode& node, const NodePath& path) {
      for (const auto& t : text::tokenize(node.value)) {
        if (t.text == unit.term) plan.ops.push_back(modify_text(tree, path, unit.term));
      }
    });
  } else {
    for_each_element(tree.root, [&](const DomNode& el, const NodePath& path) {
      const auto* v = el.attr(unit.attr);
      if (el.tag == unit.tag && v && *v == unit.value) {
        plan.ops.push_back(modify_attribute(tree, path, unit.attr));
      }
    });
  }
  return plan;
}

}  // namespace

AttackResult black_box(ScoreOracle& oracle, const DomTree& page, const AdditionPool& pool,
                       const BlackBoxOptions& options) {
  if (pool.specs.empty()) throw std::invalid_argument("black-box attack needs a non-empty pool");
  if (options.batch == 0) throw std::invalid_argument("batch size must be positive");
  Run run(AttackLevel::black, oracle, page);
  run.result().rng_seed = options.seed;
  auto notify = [&](int phase, double q, bool accepted) {
    if (options.observer) {
      options.observer({phase, run.result().trajectory.size() - 1, q, accepted, &run.page()});
    }
  };

  // Phase 1: modify every modifiable node once, keeping what helps.
  std::vector<Unit> units;
  std::set<std::string> seen;
  collect_units(page.root, units, seen);
  for (const auto& unit : units) {
    if (run.evaded()) break;
    MutationPlan plan;
    try {
      plan = plan_unit(run.page(), unit);
    } catch (const Error&) {
      continue;
    }
    if (plan.empty()) continue;
    const std::string what = unit.is_term
                                 ? plan_summary("modify term '" + unit.term + "'", plan)
                                 : plan_summary("modify <" + unit.tag + " " + unit.attr + "=\"" + unit.value + "\">", plan);
    const bool kept = run.try_candidate(apply(run.page(), plan), what, plan.ops.size(), 0);
    notify(1, run.result().trajectory.back().score, kept);
  }
  run.result().score_after_modification = run.score();

  // Phase 2: random invisible additions in batches, rolled back when a batch
  // does not lower the score.
  std::set<std::string> present;
  for_each_element(page.root, [&](const DomNode& el, const NodePath&) { present.insert(element_key(el)); });
  std::vector<const ElementSpec*> candidates;
  for (const auto& spec : pool.specs) {
    if (!present.count(element_key(spec.tag, spec.attrs, spec.text))) candidates.push_back(&spec);
  }
  if (!run.evaded() && !candidates.empty()) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    auto& res = run.result();
    DomTree working = run.page();
    while (!run.evaded() && res.additions < options.budget) {
      std::string what = "add";
      for (std::size_t i = 0; i < options.batch && res.additions < options.budget; ++i) {
        const NodeOp op = add_invisible_element(working, *candidates[pick(rng)]);
        apply_in_place(working, op);
        ++res.additions;
        ++res.operations;
        what += (i ? "; " : " ") + op.describe().substr(op_kind_name(op.kind).size() + 1);
      }
      const double q = run.oracle().score(working);
      const bool keep = q < run.score();
      run.record(what, q, keep);
      if (keep) {
        run.commit(working, q);
      } else {
        working = run.page();
        ++res.rollbacks;
      }
      notify(2, q, keep);
    }
  }
  return run.finish(Outcome::budget_exhausted);
}

void annotate(AttackResult& result, const Classifier& truth) {
  std::map<std::string, std::size_t> reliance;
  for (const auto& r : truth.rules) {
    for (const auto& f : std::set<std::string>(r.features.begin(), r.features.end())) ++reliance[f];
  }
  result.mutated_features = 0;
  result.mutated_rules = 0;
  const double thr = truth.freq_detect_threshold;
  for (std::size_t i = 1; i < result.accepted_states.size(); ++i) {
    const auto before = to_model_space(truth, result.accepted_states[i - 1]);
    const auto after = to_model_space(truth, result.accepted_states[i]);
    for (const auto& [f, count] : reliance) {
      if (detected(before, f, thr) != detected(after, f, thr)) {
        ++result.mutated_features;
        result.mutated_rules += count;
      }
    }
  }
}

std::string result_to_json(const AttackResult& result, std::string_view seed_path,
                           std::string_view final_path, bool with_timing) {
  nlohmann::ordered_json doc;
  doc["level"] = std::string(level_name(result.level));
  doc["success"] = result.success;
  doc["outcome"] = std::string(outcome_name(result.outcome));
  doc["seed_path"] = std::string(seed_path);
  doc["final_path"] = std::string(final_path);
  doc["initial_score"] = result.initial_score;
  doc["final_score"] = result.final_score;
  if (result.score_after_modification) doc["score_after_modification"] = *result.score_after_modification;
  doc["steps"] = nlohmann::ordered_json::array();
  for (const auto& s : result.trajectory) {
    doc["steps"].push_back({{"index", s.index}, {"op", s.op}, {"score", s.score}, {"accepted", s.accepted}});
  }
  doc["mutated_features"] = result.mutated_features;
  doc["mutated_rules"] = result.mutated_rules;
  doc["queries"] = result.queries;
  doc["operations"] = result.operations;
  doc["additions"] = result.additions;
  doc["rollbacks"] = result.rollbacks;
  if (with_timing) {
    doc["elapsed_ms"] = std::chrono::duration<double, std::milli>(result.elapsed).count();
  }
  doc["rng_seed"] = result.rng_seed;
  return doc.dump(2) + "\n";
}

}  // namespace phishlab
