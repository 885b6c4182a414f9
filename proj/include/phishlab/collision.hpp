#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "phishlab/classifier.hpp"
#include "phishlab/corpus.hpp"

namespace phishlab {

/// Every canonical feature string the extractors produce on the corpus pages
/// and URLs, sorted and unique.
std::vector<std::string> harvest_candidates(const Corpus& corpus);

/// One 64-hex digest per line; duplicates collapse. Throws HashFormatError.
std::vector<std::string> parse_manifest(std::string_view text);
std::vector<std::string> load_manifest(const std::filesystem::path& path);

/// Distinct feature digests of a hashed classifier, sorted.
std::vector<std::string> model_manifest(const Classifier& hashed);

struct InversionReport {
  std::map<std::string, std::string> recovered;  // digest -> canonical string
  std::vector<std::string> unrecovered;          // sorted
  std::chrono::nanoseconds elapsed{0};
  std::size_t candidates_tried = 0;
};

/// Hashes the candidates in parallel chunks and matches them against the
/// manifest. `threads` = 0 picks the hardware concurrency. Output does not
/// depend on the thread count. Throws HashFormatError.
InversionReport invert_hashes(const std::vector<std::string>& candidates,
                              const std::vector<std::string>& manifest, unsigned threads = 0);

struct RuleInference {
  std::vector<std::string> fully_inferred;      // can be added and deleted
  std::vector<std::string> partially_inferred;  // can only be deleted
  std::vector<std::string> opaque;
};

RuleInference infer_rules(const Classifier& hashed,
                          const std::map<std::string, std::string>& recovered);

/// Plaintext where recovered, digests elsewhere.
Classifier decode_model(const Classifier& hashed,
                        const std::map<std::string, std::string>& recovered);

/// Hashes every rule feature; the collision target for tests and fixtures.
Classifier hash_model(const Classifier& plain);

std::string inversion_to_json(const InversionReport& report, bool with_timing);

}  // namespace phishlab
