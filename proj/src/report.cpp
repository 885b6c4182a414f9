#include "phishlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "json.hpp"

#include "phishlab/corpus.hpp"
#include "phishlab/error.hpp"
#include "phishlab/features.hpp"

namespace phishlab {

namespace fs = std::filesystem;

const std::vector<std::string>& score_buckets() {
  static const std::vector<std::string> buckets = {"1",         "[0.9,1.0)", "[0.8,0.9)",
                                                   "[0.7,0.8)", "[0.6,0.7)", "[0.5,0.6)"};
  return buckets;
}

std::optional<std::size_t> score_bucket(double score) {
  if (score >= 1.0) return 0;
  static constexpr double lower[] = {0.9, 0.8, 0.7, 0.6, 0.5};
  for (std::size_t i = 0; i < 5; ++i) {
    if (score >= lower[i]) return i + 1;
  }
  return std::nullopt;
}

SeedRow seed_row_from_json(std::string_view json, std::string variant) {
  try {
    const auto doc = nlohmann::json::parse(json);
    SeedRow row;
    row.variant = std::move(variant);
    row.seed = fs::path(doc.at("seed_path").get<std::string>()).stem().string();
    row.level = doc.at("level").get<std::string>();
    row.outcome = doc.at("outcome").get<std::string>();
    row.success = doc.at("success").get<bool>();
    row.initial_score = doc.at("initial_score").get<double>();
    row.final_score = doc.at("final_score").get<double>();
    if (doc.contains("score_after_modification")) {
      row.score_after_modification = doc["score_after_modification"].get<double>();
    }
    row.mutated_features = doc.at("mutated_features").get<std::size_t>();
    row.mutated_rules = doc.at("mutated_rules").get<std::size_t>();
    row.queries = doc.at("queries").get<std::size_t>();
    row.operations = doc.at("operations").get<std::size_t>();
    row.additions = doc.at("additions").get<std::size_t>();
    row.rollbacks = doc.at("rollbacks").get<std::size_t>();
    if (doc.contains("elapsed_ms")) row.elapsed_ms = doc["elapsed_ms"].get<double>();
    return row;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("attack report: ") + e.what());
  }
}

std::vector<SeedRow> load_results(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SeedRow> rows;
  for (const auto& f : files) {
    const fs::path rel = fs::relative(f, dir);
    const std::size_t depth = static_cast<std::size_t>(std::distance(rel.begin(), rel.end()));
    const std::string text = read_text_file(f);
    // Other JSON files (stores, models) may share the directory.
    const auto probe = nlohmann::json::parse(text, nullptr, false);
    if (!probe.is_object() || !probe.contains("seed_path")) continue;
    rows.push_back(seed_row_from_json(text, depth >= 3 ? rel.begin()->string() : std::string()));
  }
  return rows;
}

std::vector<BucketSummary> summarize(const std::vector<SeedRow>& rows, std::string_view level) {
  const auto& names = score_buckets();
  std::vector<BucketSummary> acc(names.size());
  std::vector<std::size_t> timed(names.size());
  std::vector<double> elapsed(names.size());
  for (const auto& r : rows) {
    if (r.level != level) continue;
    const auto b = score_bucket(r.initial_score);
    if (!b) continue;
    auto& s = acc[*b];
    ++s.websites;
    s.succeeded += r.success;
    s.mean_features += static_cast<double>(r.mutated_features);
    s.mean_rules += static_cast<double>(r.mutated_rules);
    s.mean_queries += static_cast<double>(r.queries);
    s.mean_operations += static_cast<double>(r.operations);
    if (r.elapsed_ms) {
      ++timed[*b];
      elapsed[*b] += *r.elapsed_ms;
    }
  }
  std::vector<BucketSummary> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto s = acc[i];
    if (s.websites == 0) continue;
    const double n = static_cast<double>(s.websites);
    s.bucket = names[i];
    s.mean_features /= n;
    s.mean_rules /= n;
    s.mean_queries /= n;
    s.mean_operations /= n;
    if (timed[i]) s.mean_elapsed_ms = elapsed[i] / static_cast<double>(timed[i]);
    out.push_back(std::move(s));
  }
  return out;
}

OperationPivot pivot_operations(const std::vector<SeedRow>& rows) {
  OperationPivot pivot;
  std::map<std::string, std::size_t> column;
  for (const auto& r : rows) column.emplace(r.variant, 0);
  for (auto& [name, idx] : column) {
    idx = pivot.variants.size();
    pivot.variants.push_back(name);
  }
  const auto& names = score_buckets();
  std::vector<std::vector<double>> sum(names.size(), std::vector<double>(pivot.variants.size()));
  std::vector<std::vector<std::size_t>> count(names.size(), std::vector<std::size_t>(pivot.variants.size()));
  for (const auto& r : rows) {
    const auto b = score_bucket(r.initial_score);
    if (!b) continue;
    const std::size_t c = column[r.variant];
    sum[*b][c] += static_cast<double>(r.operations);
    ++count[*b][c];
  }
  for (std::size_t b = 0; b < names.size(); ++b) {
    OperationPivotRow row;
    row.bucket = names[b];
    for (std::size_t c = 0; c < pivot.variants.size(); ++c) {
      row.websites = std::max(row.websites, count[b][c]);
      row.mean.push_back(count[b][c] ? std::optional<double>(sum[b][c] / static_cast<double>(count[b][c]))
                                     : std::nullopt);
    }
    if (row.websites) pivot.rows.push_back(std::move(row));
  }
  return pivot;
}

std::vector<SingleRuleRow> single_rule_table(const Classifier& classifier) {
  std::map<std::string, SingleRuleRow> by_kind;
  for (const auto& id : find_single_rules(classifier)) {
    const ClassificationRule* r = classifier.find(id);
    if (!r || r->features.empty() || r->weight == 0.0) continue;
    const auto parsed = parse_feature(r->features.front());
    std::string kind = parsed ? std::string(kind_name(parsed->kind)) : std::string("(hashed)");
    if (parsed && is_wildcard(parsed->kind)) kind += "=*";
    if (r->weight > 0) {
      if (std::none_of(r->features.begin(), r->features.end(),
                       [](const std::string& f) { return is_deletable_feature(f); })) {
        continue;
      }
      auto& row = by_kind[kind];
      ++row.deletable;
      row.deletable_weight += r->weight;
    } else {
      if (!std::all_of(r->features.begin(), r->features.end(),
                       [](const std::string& f) { return is_addable_feature(f); })) {
        continue;
      }
      auto& row = by_kind[kind];
      ++row.addable;
      row.addable_weight += r->weight;
    }
  }
  std::vector<SingleRuleRow> out;
  SingleRuleRow total{"Total", 0, 0.0, 0, 0.0};
  for (auto& [kind, row] : by_kind) {
    row.kind = kind;
    total.deletable += row.deletable;
    total.deletable_weight += row.deletable_weight;
    total.addable += row.addable;
    total.addable_weight += row.addable_weight;
    out.push_back(row);
  }
  out.push_back(total);
  return out;
}

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

std::string render_report(const std::vector<SeedRow>& rows) {
  std::string out;
  for (const std::string_view level : {"white", "grey", "black"}) {
    const auto summary = summarize(rows, level);
    out += "Attack performance, " + std::string(level) + "-box\n";
    out += pad("Score", 10) + pad("#Websites", 11) + pad("#Succeeded", 12) + pad("Time(ms)", 10) +
           pad("Features/Rules", 16) + pad("Queries", 10) + pad("Operations", 12) + "\n";
    std::size_t total = 0, succeeded = 0;
    for (const auto& s : summary) {
      out += pad(s.bucket, 10) + pad(std::to_string(s.websites), 11) + pad(std::to_string(s.succeeded), 12) +
             pad(s.mean_elapsed_ms ? fmt("%.2f", *s.mean_elapsed_ms) : "-", 10) +
             pad(fmt("%.2f", s.mean_features) + "/" + fmt("%.2f", s.mean_rules), 16) +
             pad(fmt("%.2f", s.mean_queries), 10) + pad(fmt("%.2f", s.mean_operations), 12) + "\n";
      total += s.websites;
      succeeded += s.succeeded;
    }
    out += pad("Total", 10) + pad(std::to_string(total), 11) + pad(std::to_string(succeeded), 12) + "\n\n";
  }

  out += "Black-box seeds that needed additions\n";
  out += pad("Seed", 32) + pad("After modification", 20) + pad("#Additions", 12) + pad("Time(ms)", 10) + "\n";
  for (const auto& r : rows) {
    if (r.level != "black" || r.additions == 0) continue;
    out += pad(r.variant.empty() ? r.seed : r.variant + "/" + r.seed, 32) +
           pad(r.score_after_modification ? fmt("%.2f", *r.score_after_modification) : "-", 20) +
           pad(std::to_string(r.additions), 12) + pad(r.elapsed_ms ? fmt("%.2f", *r.elapsed_ms) : "-", 10) + "\n";
  }

  const auto pivot = pivot_operations(rows);
  if (pivot.variants.size() > 1) {
    out += "\nOperations per variant\n";
    out += pad("Score", 10) + pad("#Websites", 11);
    for (const auto& v : pivot.variants) out += pad(v, std::max<std::size_t>(14, v.size() + 2));
    out += "\n";
    for (const auto& row : pivot.rows) {
      out += pad(row.bucket, 10) + pad(std::to_string(row.websites), 11);
      for (std::size_t i = 0; i < row.mean.size(); ++i) {
        const auto& m = row.mean[i];
        out += pad(m ? fmt("%.1f", *m) : "-", std::max<std::size_t>(14, pivot.variants[i].size() + 2));
      }
      out += "\n";
    }
  }
  return out;
}

std::string render_single_rules(const std::vector<SingleRuleRow>& table) {
  std::string out = pad("Feature", 24) + pad("#Deletable", 12) + pad("Total weight", 14) + pad("#Addable", 10) +
                    pad("Total weight", 14) + "\n";
  for (const auto& r : table) {
    out += pad(r.kind, 24) + pad(std::to_string(r.deletable), 12) + pad(fmt("%.2f", r.deletable_weight), 14) +
           pad(std::to_string(r.addable), 10) + pad(fmt("%.2f", r.addable_weight), 14) + "\n";
  }
  return out;
}

std::string rows_to_csv(const std::vector<SeedRow>& rows) {
  std::string out =
      "variant,seed,level,bucket,initial_score,final_score,success,outcome,mutated_features,mutated_rules,"
      "queries,operations,additions,rollbacks,elapsed_ms\n";
  for (const auto& r : rows) {
    const auto b = score_bucket(r.initial_score);
    out += r.variant + ',' + r.seed + ',' + r.level + ',' + (b ? score_buckets()[*b] : std::string("<0.5")) + ',' +
           fmt("%.6f", r.initial_score) + ',' + fmt("%.6f", r.final_score) + ',' + (r.success ? "1" : "0") + ',' +
           r.outcome + ',' + std::to_string(r.mutated_features) + ',' + std::to_string(r.mutated_rules) + ',' +
           std::to_string(r.queries) + ',' + std::to_string(r.operations) + ',' + std::to_string(r.additions) +
           ',' + std::to_string(r.rollbacks) + ',' + (r.elapsed_ms ? fmt("%.3f", *r.elapsed_ms) : "") + '\n';
  }
  return out;
}

}  // namespace phishlab
