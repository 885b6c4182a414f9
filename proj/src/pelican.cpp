#include "phishlab/pelican.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "json.hpp"

#include "phishlab/assignment.hpp"
#include "phishlab/corpus.hpp"
#include "phishlab/error.hpp"

namespace phishlab {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

void sort_unique(std::vector<std::uint64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::size_t intersection_size(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

double jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  const std::size_t common = intersection_size(a, b);
  return ratio(common, a.size() + b.size() - common);
}

double containment(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  return ratio(intersection_size(a, b), a.size());
}

struct LayerMatch {
  double common = 0.0;
  std::size_t pairs = 0;
};

/// Best total similarity over one-to-one pairings of equal-tag elements.
template <typename Sim>
LayerMatch match_layer(const std::vector<ElementSignature>& a, const std::vector<ElementSignature>& b,
                       Sim sim) {
  std::map<std::string_view, std::vector<std::size_t>> by_tag_a, by_tag_b;
  for (std::size_t i = 0; i < a.size(); ++i) by_tag_a[a[i].tag].push_back(i);
  for (std::size_t i = 0; i < b.size(); ++i) by_tag_b[b[i].tag].push_back(i);
  LayerMatch out;
  for (const auto& [tag, rows] : by_tag_a) {
    const auto it = by_tag_b.find(tag);
    if (it == by_tag_b.end()) continue;
    const auto& cols = it->second;
    std::vector<std::vector<double>> w(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) w[r][c] = sim(a[rows[r]], b[cols[c]]);
    }
    const auto assigned = max_weight_assignment(w);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (assigned[r] < 0) continue;
      out.common += w[r][static_cast<std::size_t>(assigned[r])];
      ++out.pairs;
    }
  }
  return out;
}

double pelican_layer(const std::vector<ElementSignature>& phish, const std::vector<ElementSignature>& other) {
  if (phish.empty()) return 1.0;
  return match_layer(phish, other, element_similarity_pelican).common / static_cast<double>(phish.size());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  if (s.size() != 16 || s.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw SchemaError("bad element hash '" + s + "'");
  }
  return std::stoull(s, nullptr, 16);
}

}  // namespace

ElementSignature element_signature(const DomNode& element) {
  ElementSignature sig;
  sig.tag = element.tag;
  for (const auto& a : element.attributes) sig.attrs.push_back(fnv1a64(a.name + "=" + a.value));
  for (const auto& c : element.children) {
    if (c.is_text()) sig.texts.push_back(fnv1a64(c.value));
  }
  sort_unique(sig.attrs);
  sort_unique(sig.texts);
  return sig;
}

LayerSignature layer_signature(const DomTree& tree) {
  LayerSignature out;
  for (const auto& layer : bfs_layers(tree)) {
    auto& sigs = out.layers.emplace_back();
    for (const DomNode* el : layer) sigs.push_back(element_signature(*el));
  }
  return out;
}

double element_similarity_baseline(const ElementSignature& a, const ElementSignature& b) {
  if (a.tag != b.tag) return 0.0;
  return (jaccard(a.attrs, b.attrs) + jaccard(a.texts, b.texts)) / 2.0;
}

double element_similarity_pelican(const ElementSignature& phish, const ElementSignature& other) {
  if (phish.tag != other.tag) return 0.0;
  return (containment(phish.attrs, other.attrs) + containment(phish.texts, other.texts)) / 2.0;
}

double tree_similarity_baseline(const LayerSignature& a, const LayerSignature& b) {
  const std::size_t m = std::max(a.layers.size(), b.layers.size());
  if (m == 0) return 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < std::min(a.layers.size(), b.layers.size()); ++i) {
    const auto match = match_layer(a.layers[i], b.layers[i], element_similarity_baseline);
    const std::size_t united = a.layers[i].size() + b.layers[i].size() - match.pairs;
    total += united == 0 ? 1.0 : match.common / static_cast<double>(united);
  }
  return total / static_cast<double>(m);
}

double tree_similarity_baseline(const DomTree& a, const DomTree& b) {
  return tree_similarity_baseline(layer_signature(a), layer_signature(b));
}

double tree_similarity_pelican(const LayerSignature& phish, const LayerSignature& unknown,
                               const PelicanParams& params) {
  const std::size_t m = phish.layers.size();
  if (m == 0) return 1.0;
  const std::size_t u = unknown.layers.size();
  double total = 0.0;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < m; ++i) {
    bool placed = false;
    for (std::size_t j = cursor; j < u && j < cursor + params.lookahead; ++j) {
      const double l = pelican_layer(phish.layers[i], unknown.layers[j]);
      if (l >= params.layer_accept) {
        total += l;
        cursor = j + 1;
        placed = true;
        break;
      }
    }
    if (!placed && i < u) total += pelican_layer(phish.layers[i], unknown.layers[i]);
  }
  return total / static_cast<double>(m);
}

double tree_similarity_pelican(const DomTree& phish, const DomTree& unknown, const PelicanParams& params) {
  return tree_similarity_pelican(layer_signature(phish), layer_signature(unknown), params);
}

void PhishStore::insert(LayerSignature signature, std::int64_t now, std::string url) {
  StoreEntry entry{std::move(signature), now, std::move(url)};
  // Keep entries ordered by timestamp; equal stamps stay in insertion order.
  const auto pos = std::upper_bound(entries_.begin(), entries_.end(), now,
                                    [](std::int64_t t, const StoreEntry& e) { return t < e.timestamp; });
  entries_.insert(pos, std::move(entry));
  evict(now);
}

void PhishStore::evict(std::int64_t now) {
  const double horizon = h_hours_ * 3600.0;
  std::erase_if(entries_, [&](const StoreEntry& e) { return static_cast<double>(now - e.timestamp) > horizon; });
  if (entries_.size() > k_) {
    entries_.erase(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(entries_.size() - k_));
  }
}

std::string PhishStore::to_json() const {
  nlohmann::ordered_json doc;
  doc["k"] = k_;
  doc["h_hours"] = h_hours_;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json layers = nlohmann::ordered_json::array();
    for (const auto& layer : e.signature.layers) {
      nlohmann::ordered_json els = nlohmann::ordered_json::array();
      for (const auto& el : layer) {
        nlohmann::ordered_json attrs = nlohmann::ordered_json::array();
        nlohmann::ordered_json texts = nlohmann::ordered_json::array();
        for (const auto h : el.attrs) attrs.push_back(hex64(h));
        for (const auto h : el.texts) texts.push_back(hex64(h));
        els.push_back({{"tag", el.tag}, {"attrs", attrs}, {"texts", texts}});
      }
      layers.push_back(std::move(els));
    }
    doc["entries"].push_back({{"timestamp", e.timestamp}, {"url", e.url}, {"signature", layers}});
  }
  return doc.dump(1) + "\n";
}

PhishStore PhishStore::from_json(std::string_view json) {
  try {
    const auto doc = nlohmann::json::parse(json);
    PhishStore store(doc.at("k").get<std::size_t>(), doc.at("h_hours").get<double>());
    for (const auto& e : doc.at("entries")) {
      StoreEntry entry;
      entry.timestamp = e.at("timestamp").get<std::int64_t>();
      entry.url = e.value("url", "");
      for (const auto& layer : e.at("signature")) {
        auto& sigs = entry.signature.layers.emplace_back();
        for (const auto& el : layer) {
          ElementSignature sig;
          sig.tag = el.at("tag").get<std::string>();
          for (const auto& h : el.at("attrs")) sig.attrs.push_back(parse_hex64(h.get<std::string>()));
          for (const auto& h : el.at("texts")) sig.texts.push_back(parse_hex64(h.get<std::string>()));
          sort_unique(sig.attrs);
          sort_unique(sig.texts);
          sigs.push_back(std::move(sig));
        }
      }
      store.entries_.push_back(std::move(entry));
    }
    std::stable_sort(store.entries_.begin(), store.entries_.end(),
                     [](const StoreEntry& a, const StoreEntry& b) { return a.timestamp < b.timestamp; });
    return store;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("store: ") + e.what());
  }
}

PhishStore PhishStore::load(const std::filesystem::path& path, std::size_t k, double h_hours) {
  if (!std::filesystem::exists(path)) return PhishStore(k, h_hours);
  PhishStore stored = from_json(read_text_file(path));
  PhishStore store(k, h_hours);
  store.entries_ = std::move(stored.entries_);
  return store;
}

void PhishStore::save(const std::filesystem::path& path) const { write_text_file(path, to_json()); }

std::string_view verdict_label_name(VerdictLabel label) {
  switch (label) {
    case VerdictLabel::whitelisted: return "whitelisted";
    case VerdictLabel::blacklisted: return "blacklisted";
    case VerdictLabel::evasion_detected: return "evasion_detected";
    case VerdictLabel::phishing_by_classifier: return "phishing_by_classifier";
    case VerdictLabel::benign: return "benign";
  }
  return "?";
}

std::string verdict_to_json(const Verdict& verdict) {
  nlohmann::ordered_json doc;
  doc["label"] = std::string(verdict_label_name(verdict.label));
  doc["similarity"] = verdict.similarity ? nlohmann::ordered_json(*verdict.similarity) : nullptr;
  doc["matched_entry"] = verdict.matched_entry ? nlohmann::ordered_json(*verdict.matched_entry) : nullptr;
  doc["classifier_score"] =
      verdict.classifier_score ? nlohmann::ordered_json(*verdict.classifier_score) : nullptr;
  return doc.dump(2) + "\n";
}

UrlList load_url_list(const std::filesystem::path& path) {
  UrlList list;
  for (auto& line : read_lines(path)) list.urls.insert(std::move(line));
  return list;
}

Verdict pipeline(std::string_view url, const DomTree& page, const UrlList& whitelist,
                 const UrlList& blacklist, PhishStore& store, ScoreOracle& oracle,
                 std::int64_t now, const PelicanParams& params) {
  Verdict v;
  if (whitelist.contains(url)) {
    v.label = VerdictLabel::whitelisted;
    return v;
  }
  if (blacklist.contains(url)) {
    v.label = VerdictLabel::blacklisted;
    return v;
  }
  store.evict(now);
  const LayerSignature sig = layer_signature(page);
  for (std::size_t i = 0; i < store.entries().size(); ++i) {
    const double s = tree_similarity_pelican(store.entries()[i].signature, sig, params);
    if (!v.similarity || s > *v.similarity) {
      v.similarity = s;
      v.matched_entry = i;
    }
  }
  if (v.similarity && *v.similarity >= params.detect_threshold) {
    v.label = VerdictLabel::evasion_detected;
    return v;
  }
  v.matched_entry.reset();
  const double score = oracle.score(page);
  v.classifier_score = score;
  if (score >= oracle.threshold()) {
    v.label = VerdictLabel::phishing_by_classifier;
    store.insert(sig, now, std::string(url));
  } else {
    v.label = VerdictLabel::benign;
  }
  return v;
}

}  // namespace phishlab
