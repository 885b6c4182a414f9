#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishlab/classifier.hpp"

namespace phishlab {

/// Initial-score buckets, highest first: "1", "[0.9,1.0)", ..., "[0.5,0.6)".
const std::vector<std::string>& score_buckets();

/// Index into score_buckets(), or nullopt below 0.5.
std::optional<std::size_t> score_bucket(double score);

/// One attack report as read back from disk.
struct SeedRow {
  std::string variant;  // first directory below the results root, for nested layouts
  std::string seed;
  std::string level;
  std::string outcome;
  bool success = false;
  double initial_score = 0.0;
  double final_score = 0.0;
  std::optional<double> score_after_modification;
  std::size_t mutated_features = 0;
  std::size_t mutated_rules = 0;
  std::size_t queries = 0;
  std::size_t operations = 0;
  std::size_t additions = 0;
  std::size_t rollbacks = 0;
  std::optional<double> elapsed_ms;
};

SeedRow seed_row_from_json(std::string_view json, std::string variant = {});

/// Every attack report (*.json with a seed_path) below `dir`, sorted by path. A report at
/// dir/<variant>/<seed>/report.json gets that variant.
std::vector<SeedRow> load_results(const std::filesystem::path& dir);

struct BucketSummary {
  std::string bucket;
  std::size_t websites = 0;
  std::size_t succeeded = 0;
  std::optional<double> mean_elapsed_ms;
  double mean_features = 0.0;
  double mean_rules = 0.0;
  double mean_queries = 0.0;
  double mean_operations = 0.0;
};

/// Per-bucket means for one attack level; empty buckets are omitted.
std::vector<BucketSummary> summarize(const std::vector<SeedRow>& rows, std::string_view level);

struct OperationPivotRow {
  std::string bucket;
  std::size_t websites = 0;                 // per variant, the largest count
  std::vector<std::optional<double>> mean;  // one per variant
};

struct OperationPivot {
  std::vector<std::string> variants;
  std::vector<OperationPivotRow> rows;
};

/// Mean operation counts per bucket, one column per variant.
OperationPivot pivot_operations(const std::vector<SeedRow>& rows);

struct SingleRuleRow {
  std::string kind;
  std::size_t deletable = 0;
  double deletable_weight = 0.0;
  std::size_t addable = 0;
  double addable_weight = 0.0;
};

/// Single rules per feature kind with the weight an attacker can remove or
/// add through them; a "Total" row closes the table.
std::vector<SingleRuleRow> single_rule_table(const Classifier& classifier);

std::string render_report(const std::vector<SeedRow>& rows);
std::string render_single_rules(const std::vector<SingleRuleRow>& table);
std::string rows_to_csv(const std::vector<SeedRow>& rows);

}  // namespace phishlab
