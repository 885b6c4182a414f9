#include "phishlab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "phishlab/error.hpp"
#include "phishlab/text.hpp"

namespace phishlab {

using json = nlohmann::ordered_json;

bool ClassificationRule::relies_on(std::string_view feature) const {
  return std::find(features.begin(), features.end(), feature) != features.end();
}

const ClassificationRule* Classifier::find(std::string_view id) const {
  for (const auto& r : rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

bool is_frequency_feature(std::string_view feature) {
  const auto f = parse_feature(feature);
  return f && is_frequency(f->kind);
}

bool rule_hit(const ClassificationRule& rule, const FeatureValueMap& fmap,
              double freq_detect_threshold) {
  if (rule.features.empty()) return false;
  for (const auto& f : rule.features) {
    const auto it = fmap.find(f);
    if (it == fmap.end() || it->second == 0.0) return false;
    if (it->second < freq_detect_threshold && is_frequency_feature(f)) return false;
  }
  return true;
}

double rule_contribution(const ClassificationRule& rule, const FeatureValueMap& fmap) {
  double product = rule.weight;
  for (const auto& f : rule.features) {
    const auto it = fmap.find(f);
    product *= it == fmap.end() ? 0.0 : it->second;
  }
  return product;
}

FeatureValueMap to_model_space(const Classifier& classifier, const FeatureValueMap& raw) {
  // A partially decoded model mixes plaintext features with digests whose
  // preimage is unknown; both spellings of every page feature are offered.
  const bool mixed = !classifier.hashed &&
                     std::any_of(classifier.rules.begin(), classifier.rules.end(), [](const auto& r) {
                       return std::any_of(r.features.begin(), r.features.end(),
                                          [](const std::string& f) { return is_hex_digest(f); });
                     });
  if (!classifier.hashed && !mixed) return raw;
  FeatureValueMap out = mixed ? raw : FeatureValueMap{};
  for (const auto& [name, value] : raw) {
    if (value < classifier.freq_detect_threshold && is_frequency_feature(name)) continue;
    out[hash_feature(name)] = value;
  }
  return out;
}

double raw_score(const Classifier& classifier, const FeatureValueMap& fmap) {
  double x = classifier.bias;
  for (const auto& r : classifier.rules) {
    if (rule_hit(r, fmap, classifier.freq_detect_threshold)) x += rule_contribution(r, fmap);
  }
  return x;
}

double score(const Classifier& classifier, const FeatureValueMap& fmap) {
  return logistic(raw_score(classifier, fmap));
}

double score_page_features(const Classifier& classifier, const FeatureValueMap& raw) {
  return score(classifier, to_model_space(classifier, raw));
}

bool is_phishing(const Classifier& classifier, double score_value) {
  return score_value >= classifier.threshold;
}

RulePartition partition_rules(const Classifier& classifier) {
  RulePartition p;
  for (const auto& r : classifier.rules) {
    if (r.weight > 0) p.positive.push_back(&r);
    if (r.weight < 0) p.negative.push_back(&r);
  }
  return p;
}

namespace {

bool is_subset(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  return std::all_of(small.begin(), small.end(), [&](const std::string& f) {
    return std::find(big.begin(), big.end(), f) != big.end();
  });
}

}  // namespace

std::vector<std::pair<std::string, std::string>> find_subset_rules(const Classifier& classifier) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& rules = classifier.rules;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = 0; j < rules.size(); ++j) {
      if (i != j && is_subset(rules[j].features, rules[i].features)) {
        out.emplace_back(rules[i].id, rules[j].id);
      }
    }
  }
  return out;
}

std::vector<std::string> find_single_rules(const Classifier& classifier) {
  std::unordered_map<std::string, std::size_t> owners;
  for (const auto& r : classifier.rules) {
    const std::set<std::string> unique(r.features.begin(), r.features.end());
    for (const auto& f : unique) ++owners[f];
  }
  std::vector<std::string> out;
  for (const auto& r : classifier.rules) {
    if (std::all_of(r.features.begin(), r.features.end(),
                    [&](const std::string& f) { return owners[f] == 1; })) {
      out.push_back(r.id);
    }
  }
  return out;
}

Classifier prune(const Classifier& classifier, const std::vector<std::string>& ids) {
  Classifier out = classifier;
  for (const auto& id : ids) {
    auto it = std::find_if(out.rules.begin(), out.rules.end(),
                           [&](const ClassificationRule& r) { return r.id == id; });
    if (it == out.rules.end()) throw UnknownRule("no rule with id '" + id + "'");
    it->weight = 0.0;
  }
  return out;
}

std::vector<std::string> subset_prune_targets(const Classifier& classifier) {
  std::set<std::string> subs;
  for (const auto& [sup, sub] : find_subset_rules(classifier)) subs.insert(sub);
  std::vector<std::string> out;
  for (const auto& r : classifier.rules) {
    if (r.weight < 0 && subs.count(r.id)) out.push_back(r.id);
  }
  return out;
}

std::vector<std::string> single_prune_targets(const Classifier& classifier) {
  std::vector<std::string> out;
  for (const auto& id : find_single_rules(classifier)) {
    const auto* r = classifier.find(id);
    const bool deletable_positive =
        r->weight > 0 && std::any_of(r->features.begin(), r->features.end(),
                                     [](const std::string& f) { return is_deletable_feature(f); });
    const bool addable_negative =
        r->weight < 0 && std::all_of(r->features.begin(), r->features.end(),
                                     [](const std::string& f) { return is_addable_feature(f); });
    if (deletable_positive || addable_negative) out.push_back(id);
  }
  return out;
}

RuleSet rules_without_weights(const Classifier& classifier) {
  RuleSet set;
  set.hashed = classifier.hashed;
  set.freq_detect_threshold = classifier.freq_detect_threshold;
  for (const auto& r : classifier.rules) set.rules.push_back({r.id, r.features, std::nullopt});
  return set;
}

std::string model_to_json(const Classifier& classifier, bool strip_weights) {
  json doc;
  doc["bias"] = classifier.bias;
  doc["threshold"] = classifier.threshold;
  doc["freq_detect_threshold"] = classifier.freq_detect_threshold;
  doc["hashed"] = classifier.hashed;
  doc["rules"] = json::array();
  for (const auto& r : classifier.rules) {
    json rule;
    rule["id"] = r.id;
    if (!strip_weights) rule["weight"] = r.weight;
    rule["features"] = r.features;
    doc["rules"].push_back(std::move(rule));
  }
  return doc.dump(2) + "\n";
}

namespace {

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model is not valid JSON: ") + e.what());
  }
}

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(std::string("model: missing required key '") + key + "'");
  }
  return obj.at(key);
}

double require_number(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number()) throw SchemaError(std::string("model: '") + key + "' must be a number");
  return v.get<double>();
}

struct ParsedRule {
  std::string id;
  std::vector<std::string> features;
  std::optional<double> weight;
};

struct ParsedModel {
  double bias = 0;
  double threshold = 0.5;
  double freq_detect_threshold = 0.05;
  bool hashed = false;
  std::vector<ParsedRule> rules;
};

ParsedModel parse_model(std::string_view text, bool weights_required) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw SchemaError("model: top level must be an object");
  ParsedModel m;
  m.bias = weights_required ? require_number(doc, "bias") : doc.value("bias", 0.0);
  m.threshold = require_number(doc, "threshold");
  if (!(m.threshold > 0 && m.threshold < 1)) throw SchemaError("model: threshold must lie in (0,1)");
  if (doc.contains("freq_detect_threshold")) {
    m.freq_detect_threshold = require_number(doc, "freq_detect_threshold");
  }
  if (doc.contains("hashed")) {
    if (!doc["hashed"].is_boolean()) throw SchemaError("model: 'hashed' must be a boolean");
    m.hashed = doc["hashed"].get<bool>();
  }
  const json& rules = require(doc, "rules");
  if (!rules.is_array()) throw SchemaError("model: 'rules' must be an array");
  std::set<std::string> ids;
  for (const auto& r : rules) {
    ParsedRule rule;
    const json& id = require(r, "id");
    if (!id.is_string()) throw SchemaError("model: rule id must be a string");
    rule.id = id.get<std::string>();
    if (!ids.insert(rule.id).second) throw SchemaError("model: duplicate rule id '" + rule.id + "'");
    if (r.contains("weight")) {
      rule.weight = require_number(r, "weight");
    } else if (weights_required) {
      throw SchemaError("model: rule '" + rule.id + "' has no weight");
    }
    const json& features = require(r, "features");
    if (!features.is_array() || features.empty()) {
      throw SchemaError("model: rule '" + rule.id + "' needs a non-empty feature list");
    }
    for (const auto& f : features) {
      if (!f.is_string()) throw SchemaError("model: feature names must be strings");
      std::string name = f.get<std::string>();
      if (m.hashed) {
        name = text::to_lower_ascii(name);
        if (!is_hex_digest(name)) {
          throw HashFormatError("model: '" + name + "' is not a 64-hex SHA-256 digest");
        }
      }
      rule.features.push_back(std::move(name));
    }
    m.rules.push_back(std::move(rule));
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Classifier model_from_json(std::string_view text) {
  ParsedModel m = parse_model(text, true);
  Classifier c;
  c.bias = m.bias;
  c.threshold = m.threshold;
  c.freq_detect_threshold = m.freq_detect_threshold;
  c.hashed = m.hashed;
  for (auto& r : m.rules) c.rules.push_back({std::move(r.id), std::move(r.features), *r.weight});
  return c;
}

RuleSet rule_set_from_json(std::string_view text) {
  ParsedModel m = parse_model(text, false);
  RuleSet set;
  set.hashed = m.hashed;
  set.freq_detect_threshold = m.freq_detect_threshold;
  for (auto& r : m.rules) set.rules.push_back({std::move(r.id), std::move(r.features), r.weight});
  return set;
}

Classifier load_model(const std::filesystem::path& path) {
  return model_from_json(read_file(path));
}

RuleSet load_rule_set(const std::filesystem::path& path) {
  return rule_set_from_json(read_file(path));
}

void save_model(const Classifier& classifier, const std::filesystem::path& path,
                bool strip_weights) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << model_to_json(classifier, strip_weights);
  if (!out) throw IoError("write failed for " + path.string());
}

double ScoreOracle::score(const DomTree& page) {
  ++queries_;
  return score_page_features(classifier_, extract_features(page));
}

}  // namespace phishlab
