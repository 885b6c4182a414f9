#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "phishlab/classifier.hpp"
#include "phishlab/corpus.hpp"
#include "phishlab/dom.hpp"

namespace phishlab {

struct FixtureRequest {
  double lo = 0.9;  // inclusive
  double hi = 1.0;  // exclusive, except that hi > 1 admits a score of exactly 1
  std::size_t count = 10;
  std::string phishing_action = "http://secure-login.example.info/auth.php";
};

struct GeneratedFixture {
  std::string source_url;
  DomTree page;
  double score = 0.0;
};

/// Turns legitimate form-bearing pages into phishing seeds: every form posts
/// to `phishing_action`, every deletable model feature is deleted, then
/// positive rules built only from undeletable features are added until the
/// score lands in [lo, hi). Pages are used round-robin, each contributing
/// distinct variants. Throws Unreachable when fewer than `count` pages land.
std::vector<GeneratedFixture> generate_fixtures(const Classifier& model,
                                                const std::vector<CorpusPage>& legit,
                                                const FixtureRequest& request);

}  // namespace phishlab
