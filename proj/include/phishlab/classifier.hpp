#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phishlab/dom.hpp"
#include "phishlab/features.hpp"

namespace phishlab {

struct ClassificationRule {
  std::string id;
  std::vector<std::string> features;  // canonical strings or 64-hex digests
  double weight = 0.0;

  bool relies_on(std::string_view feature) const;

  friend bool operator==(const ClassificationRule&, const ClassificationRule&) = default;
};

struct Classifier {
  double bias = 0.0;
  double threshold = 0.5;
  double freq_detect_threshold = 0.05;
  bool hashed = false;
  std::vector<ClassificationRule> rules;

  const ClassificationRule* find(std::string_view id) const;

  friend bool operator==(const Classifier&, const Classifier&) = default;
};

/// e^x / (1 + e^x), evaluated without overflow for large |x|.
double logistic(double x);

/// Whether a canonical feature string is one of the four ratio features.
bool is_frequency_feature(std::string_view feature);

bool rule_hit(const ClassificationRule& rule, const FeatureValueMap& fmap,
              double freq_detect_threshold);

/// w_r times the product of the rule's feature values.
double rule_contribution(const ClassificationRule& rule, const FeatureValueMap& fmap);

/// Maps raw extractor output into the classifier's feature space. For hashed
/// classifiers, ratio features below the detection threshold are dropped and
/// every name is replaced by its digest; plain classifiers get the map back.
/// A plain classifier that still carries digests (a partially decoded model)
/// gets the map plus the digests of its entries.
FeatureValueMap to_model_space(const Classifier& classifier, const FeatureValueMap& raw);

/// x = bias + sum of hit-rule contributions. `fmap` must already be in model
/// space.
double raw_score(const Classifier& classifier, const FeatureValueMap& fmap);
double score(const Classifier& classifier, const FeatureValueMap& fmap);

/// Scores raw extractor output (hashing it first when needed).
double score_page_features(const Classifier& classifier, const FeatureValueMap& raw);

bool is_phishing(const Classifier& classifier, double score_value);

struct RulePartition {
  std::vector<const ClassificationRule*> positive;
  std::vector<const ClassificationRule*> negative;
};

RulePartition partition_rules(const Classifier& classifier);

/// Ordered pairs (r, r') with r != r' and F_r' a subset of F_r, as rule ids.
std::vector<std::pair<std::string, std::string>> find_subset_rules(const Classifier& classifier);

/// Rules none of whose features occurs in any other rule.
std::vector<std::string> find_single_rules(const Classifier& classifier);

/// Copy with the named rules' weights set to 0. Throws UnknownRule.
Classifier prune(const Classifier& classifier, const std::vector<std::string>& ids);

/// Negative rules whose feature set is contained in some other rule's: hitting
/// the larger rule hands these to an attacker for free.
std::vector<std::string> subset_prune_targets(const Classifier& classifier);

/// Single rules an attacker can exploit: positive ones with a deletable
/// feature and negative ones whose features are all addable.
std::vector<std::string> single_prune_targets(const Classifier& classifier);

/// Rules as known to a grey-box attacker: feature sets, optional weights.
struct KnownRule {
  std::string id;
  std::vector<std::string> features;
  std::optional<double> weight;
};

struct RuleSet {
  bool hashed = false;
  double freq_detect_threshold = 0.05;
  std::vector<KnownRule> rules;
};

RuleSet rules_without_weights(const Classifier& classifier);

std::string model_to_json(const Classifier& classifier, bool strip_weights = false);
Classifier model_from_json(std::string_view json);
RuleSet rule_set_from_json(std::string_view json);

/// Throws IoError, SchemaError or HashFormatError.
Classifier load_model(const std::filesystem::path& path);
RuleSet load_rule_set(const std::filesystem::path& path);
void save_model(const Classifier& classifier, const std::filesystem::path& path,
                bool strip_weights = false);

/// The only view of the classifier a black-box attacker gets. Counts every
/// evaluation.
class ScoreOracle {
 public:
  explicit ScoreOracle(Classifier classifier) : classifier_(std::move(classifier)) {}

  double score(const DomTree& page);
  double threshold() const { return classifier_.threshold; }
  std::size_t query_count() const { return queries_; }

 private:
  Classifier classifier_;
  std::size_t queries_ = 0;
};

}  // namespace phishlab
