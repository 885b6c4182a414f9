#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishlab/classifier.hpp"
#include "phishlab/dom.hpp"
#include "phishlab/features.hpp"
#include "phishlab/mutation.hpp"

namespace phishlab {

enum class AttackLevel { white, grey, black };
enum class Outcome { success, exhausted, budget_exhausted };

std::string_view level_name(AttackLevel level);
AttackLevel parse_level(std::string_view name);  // throws std::invalid_argument
std::string_view outcome_name(Outcome outcome);

struct TrajectoryStep {
  std::size_t index = 0;
  std::string op;      // what was tried
  double score = 0.0;  // oracle score of the tried page
  bool accepted = false;
};

struct AttackResult {
  AttackLevel level = AttackLevel::white;
  Outcome outcome = Outcome::exhausted;
  bool success = false;
  DomTree final_page;
  double initial_score = 0.0;
  double final_score = 0.0;
  std::optional<double> score_after_modification;  // black-box only
  std::vector<TrajectoryStep> trajectory;          // entry 0 is the seed
  std::size_t mutated_features = 0;
  std::size_t mutated_rules = 0;
  std::size_t queries = 0;
  std::size_t operations = 0;  // node operations applied, reverted ones included
  std::size_t additions = 0;
  std::size_t rollbacks = 0;
  std::chrono::nanoseconds elapsed{0};
  std::uint64_t rng_seed = 0;
  /// Raw extractor output of the seed and of every accepted state.
  std::vector<FeatureValueMap> accepted_states;
};

/// delta(p,f): summed contribution of the hit rules relying on f. `fmap` is in
/// the classifier's feature space. Throws FeatureAbsent.
double influence_feature(const Classifier& classifier, const FeatureValueMap& fmap,
                         std::string_view feature);

/// delta(p,r): change of x when every feature of r that is not detected is
/// set to 1, i.e. the summed contribution of the rules this makes hit. Throws
/// RuleAlreadyHit.
double influence_rule(const Classifier& classifier, const FeatureValueMap& fmap,
                      const ClassificationRule& rule);

/// fmap with the rule's undetected features set to 1.
FeatureValueMap with_rule_added(const Classifier& classifier, const FeatureValueMap& fmap,
                                const ClassificationRule& rule);

struct WhiteBoxOptions {
  /// Only these rules may be deleted or added when set.
  std::optional<std::vector<std::string>> allowed_rules;
  std::size_t max_steps = 10000;
};

/// Greedy influence-maximizing attack with the full model as knowledge.
/// Throws NotPhishing when the oracle does not flag the seed.
AttackResult white_box(const Classifier& knowledge, ScoreOracle& oracle, const DomTree& page,
                       const WhiteBoxOptions& options = {});

struct GreyBoxOptions {
  std::size_t max_rounds = 1000;
};

/// Delete-then-add attack knowing rule feature sets but not weights.
AttackResult grey_box(const RuleSet& knowledge, ScoreOracle& oracle, const DomTree& page,
                      const GreyBoxOptions& options = {});

struct BlackBoxEvent {
  int phase = 1;
  std::size_t index = 0;
  double score = 0.0;
  bool accepted = false;
  const DomTree* page = nullptr;  // state after the accept/revert decision
};

struct BlackBoxOptions {
  std::size_t batch = 3;
  std::size_t budget = 2000;  // maximum additions
  std::uint64_t seed = 0;
  std::function<void(const BlackBoxEvent&)> observer;
};

/// Modify-then-add attack seeing only scores. Throws std::invalid_argument
/// for an empty pool.
AttackResult black_box(ScoreOracle& oracle, const DomTree& page, const AdditionPool& pool,
                       const BlackBoxOptions& options = {});

/// Fills mutated_features / mutated_rules from accepted_states: per accepted
/// step, the classifier features whose detection flipped, and for each of
/// them the rules relying on it.
void annotate(AttackResult& result, const Classifier& truth);

std::string result_to_json(const AttackResult& result, std::string_view seed_path,
                           std::string_view final_path, bool with_timing);

}  // namespace phishlab
