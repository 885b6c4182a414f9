#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phishlab/classifier.hpp"
#include "phishlab/dom.hpp"

namespace phishlab {

/// Hashed view of one element: tag, its "name=value" attribute hashes and the
/// hashes of its direct text children. Hash vectors are sorted and unique.
struct ElementSignature {
  std::string tag;
  std::vector<std::uint64_t> attrs;
  std::vector<std::uint64_t> texts;

  friend bool operator==(const ElementSignature&, const ElementSignature&) = default;
};

/// BFS layers of element signatures.
struct LayerSignature {
  std::vector<std::vector<ElementSignature>> layers;

  friend bool operator==(const LayerSignature&, const LayerSignature&) = default;
};

std::uint64_t fnv1a64(std::string_view data);
ElementSignature element_signature(const DomNode& element);
LayerSignature layer_signature(const DomTree& tree);

/// Mean of the two Jaccard ratios; 0 for different tags.
double element_similarity_baseline(const ElementSignature& a, const ElementSignature& b);
/// Mean of the two containment ratios of `phish` in `other`; 0 for different tags.
double element_similarity_pelican(const ElementSignature& phish, const ElementSignature& other);

double tree_similarity_baseline(const LayerSignature& a, const LayerSignature& b);
double tree_similarity_baseline(const DomTree& a, const DomTree& b);

struct PelicanParams {
  double detect_threshold = 0.9;
  double layer_accept = 0.5;
  std::size_t lookahead = 3;  // unknown-page layers probed per phishing layer
};

double tree_similarity_pelican(const LayerSignature& phish, const LayerSignature& unknown,
                               const PelicanParams& params = {});
double tree_similarity_pelican(const DomTree& phish, const DomTree& unknown,
                               const PelicanParams& params = {});

struct StoreEntry {
  LayerSignature signature;
  std::int64_t timestamp = 0;  // seconds since the epoch
  std::string url;
};

/// The most recent phishing pages, at most `k` of them and none older than
/// `h_hours`.
class PhishStore {
 public:
  PhishStore(std::size_t k = 1000, double h_hours = 24.0) : k_(k), h_hours_(h_hours) {}

  void insert(LayerSignature signature, std::int64_t now, std::string url = {});
  void evict(std::int64_t now);

  const std::vector<StoreEntry>& entries() const { return entries_; }
  std::size_t capacity() const { return k_; }
  double horizon_hours() const { return h_hours_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  std::string to_json() const;
  static PhishStore from_json(std::string_view json);
  /// A missing file yields an empty store with the given bounds.
  static PhishStore load(const std::filesystem::path& path, std::size_t k, double h_hours);
  void save(const std::filesystem::path& path) const;

 private:
  std::size_t k_;
  double h_hours_;
  std::vector<StoreEntry> entries_;  // oldest first
};

enum class VerdictLabel { whitelisted, blacklisted, evasion_detected, phishing_by_classifier, benign };

std::string_view verdict_label_name(VerdictLabel label);

struct Verdict {
  VerdictLabel label = VerdictLabel::benign;
  std::optional<double> similarity;
  std::optional<std::size_t> matched_entry;
  std::optional<double> classifier_score;
};

std::string verdict_to_json(const Verdict& verdict);

struct UrlList {
  std::set<std::string> urls;

  bool contains(std::string_view url) const { return urls.count(std::string(url)) > 0; }
};

UrlList load_url_list(const std::filesystem::path& path);

/// Whitelist, blacklist, similarity against the store, then the classifier.
/// Pages the classifier flags go into the store.
Verdict pipeline(std::string_view url, const DomTree& page, const UrlList& whitelist,
                 const UrlList& blacklist, PhishStore& store, ScoreOracle& oracle,
                 std::int64_t now, const PelicanParams& params = {});

}  // namespace phishlab
