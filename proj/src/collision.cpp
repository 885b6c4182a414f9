#include "phishlab/collision.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "json.hpp"

#include "phishlab/error.hpp"
#include "phishlab/features.hpp"
#include "phishlab/text.hpp"

namespace phishlab {

std::vector<std::string> harvest_candidates(const Corpus& corpus) {
  std::set<std::string> out;
  auto add_url = [&](const std::string& url) {
    for (const auto& f : extract_url_features(url)) out.insert(f.canonical());
  };
  for (const auto& page : corpus.pages) {
    for (const auto& [name, value] : extract_page_features(page.tree)) out.insert(name);
    add_url(page.url);
  }
  for (const auto& url : corpus.url_list) add_url(url);
  return {out.begin(), out.end()};
}

std::vector<std::string> parse_manifest(std::string_view text) {
  std::set<std::string> digests;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string digest = text::to_lower_ascii(text::trim(text.substr(start, end - start)));
    start = end + 1;
    if (digest.empty()) continue;
    if (!is_hex_digest(digest)) {
      throw HashFormatError("manifest line " + std::to_string(line_no) + ": '" + digest +
                            "' is not a 64-hex digest");
    }
    digests.insert(digest);
  }
  return {digests.begin(), digests.end()};
}

std::vector<std::string> load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path));
}

std::vector<std::string> model_manifest(const Classifier& hashed) {
  std::set<std::string> out;
  for (const auto& r : hashed.rules) out.insert(r.features.begin(), r.features.end());
  return {out.begin(), out.end()};
}

InversionReport invert_hashes(const std::vector<std::string>& candidates,
                              const std::vector<std::string>& manifest, unsigned threads) {
  const auto started = std::chrono::steady_clock::now();
  std::set<std::string> targets;
  for (const auto& d : manifest) {
    const std::string digest = text::to_lower_ascii(d);
    if (!is_hex_digest(digest)) throw HashFormatError("'" + d + "' is not a 64-hex digest");
    targets.insert(digest);
  }

  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (candidates.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<std::pair<std::string, std::size_t>>> hits(chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      const std::size_t end = std::min(candidates.size(), (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < end; ++i) {
        if (candidates[i].empty()) continue;
        std::string digest = hash_feature(candidates[i]);
        if (targets.count(digest)) hits[c].emplace_back(std::move(digest), i);
      }
    }
  };
  unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(chunks, 1)));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  InversionReport report;
  for (const auto& chunk : hits) {
    for (const auto& [digest, index] : chunk) report.recovered.emplace(digest, candidates[index]);
  }
  for (const auto& d : targets) {
    if (!report.recovered.count(d)) report.unrecovered.push_back(d);
  }
  report.candidates_tried = candidates.size();
  report.elapsed = std::chrono::steady_clock::now() - started;
  return report;
}

RuleInference infer_rules(const Classifier& hashed,
                          const std::map<std::string, std::string>& recovered) {
  RuleInference out;
  for (const auto& r : hashed.rules) {
    const auto known = std::count_if(r.features.begin(), r.features.end(),
                                     [&](const std::string& f) { return recovered.count(f) > 0; });
    if (known == 0) {
      out.opaque.push_back(r.id);
    } else if (static_cast<std::size_t>(known) == r.features.size()) {
      out.fully_inferred.push_back(r.id);
    } else {
      out.partially_inferred.push_back(r.id);
    }
  }
  return out;
}

Classifier decode_model(const Classifier& hashed,
                        const std::map<std::string, std::string>& recovered) {
  Classifier out = hashed;
  out.hashed = false;
  for (auto& r : out.rules) {
    for (auto& f : r.features) {
      if (const auto it = recovered.find(f); it != recovered.end()) f = it->second;
    }
  }
  return out;
}

Classifier hash_model(const Classifier& plain) {
  Classifier out = plain;
  out.hashed = true;
  for (auto& r : out.rules) {
    for (auto& f : r.features) f = hash_feature(f);
  }
  return out;
}

std::string inversion_to_json(const InversionReport& report, bool with_timing) {
  nlohmann::ordered_json doc;
  doc["candidates_tried"] = report.candidates_tried;
  doc["recovered_count"] = report.recovered.size();
  doc["unrecovered_count"] = report.unrecovered.size();
  doc["recovered"] = nlohmann::ordered_json::object();
  for (const auto& [digest, name] : report.recovered) doc["recovered"][digest] = name;
  doc["unrecovered"] = report.unrecovered;
  if (with_timing) {
    doc["elapsed_ms"] = std::chrono::duration<double, std::milli>(report.elapsed).count();
  }
  return doc.dump(2) + "\n";
}

}  // namespace phishlab
