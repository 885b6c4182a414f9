#include "phishlab/fixtures.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <stdexcept>

#include "phishlab/error.hpp"
#include "phishlab/features.hpp"
#include "phishlab/mutation.hpp"

namespace phishlab {

namespace {

constexpr std::size_t kMaxCandidates = 10;

bool in_range(double s, const FixtureRequest& r) {
  return s >= r.lo && (s < r.hi || (r.hi > 1.0 && s <= 1.0));
}

bool detected(const FeatureValueMap& raw, const std::string& f, double thr) {
  const auto it = raw.find(f);
  if (it == raw.end() || it->second == 0.0) return false;
  return !(is_frequency_feature(f) && it->second < thr);
}

/// A legitimate page turned into a phishing seed, plus the subsets of
/// undeletable positive rules still to try on it.
struct Source {
  DomTree base;
  std::vector<const ClassificationRule*> candidates;
  std::vector<std::uint32_t> masks;  // by subset size, then value
  std::size_t next = 0;
};

std::optional<Source> prepare(const Classifier& model, const CorpusPage& legit, const FixtureRequest& request) {
  Source src;
  src.base = legit.tree;
  src.base.source_url = legit.url;
  // for_each_element only hands out const nodes; rewrite by path.
  std::vector<NodePath> forms;
  for_each_element(src.base.root, [&](const DomNode& el, const NodePath& path) {
    if (el.tag == "form") forms.push_back(path);
  });
  if (forms.empty()) return std::nullopt;
  for (const auto& path : forms) resolve(src.base.root, path)->set_attr("action", request.phishing_action);

  const double thr = model.freq_detect_threshold;
  const PlanOptions options{thr, {}};
  const std::string own_action = "PageActionURL=" + request.phishing_action;
  std::set<std::string> features;
  for (const auto& r : model.rules) features.insert(r.features.begin(), r.features.end());
  for (std::size_t round = 0; round < 16; ++round) {
    bool progress = false;
    for (const auto& f : features) {
      if (f == own_action || !is_deletable_feature(f)) continue;
      if (!detected(extract_features(src.base), f, thr)) continue;
      try {
        const MutationPlan plan = plan_delete_feature(src.base, f, options);
        if (plan.empty()) continue;
        src.base = apply(src.base, plan);
        progress = true;
      } catch (const Error&) {
      }
    }
    if (!progress) break;
  }

  const FeatureValueMap raw = extract_features(src.base);
  for (const auto& r : model.rules) {
    if (r.weight <= 0 || rule_hit(r, raw, thr)) continue;
    const bool undeletable = std::all_of(r.features.begin(), r.features.end(), [&](const std::string& f) {
      return detected(raw, f, thr) || (!is_deletable_feature(f) && is_addable_feature(f));
    });
    if (undeletable) src.candidates.push_back(&r);
  }
  std::sort(src.candidates.begin(), src.candidates.end(),
            [](const ClassificationRule* a, const ClassificationRule* b) { return a->id < b->id; });
  if (src.candidates.size() > kMaxCandidates) src.candidates.resize(kMaxCandidates);
  const std::uint32_t n = std::uint32_t{1} << src.candidates.size();
  for (std::uint32_t m = 0; m < n; ++m) src.masks.push_back(m);
  std::stable_sort(src.masks.begin(), src.masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  return src;
}

/// Advances to the next subset that lands in range.
std::optional<GeneratedFixture> next_variant(const Classifier& model, Source& src,
                                             const FixtureRequest& request, std::set<std::string>& seen) {
  const PlanOptions options{model.freq_detect_threshold, {}};
  while (src.next < src.masks.size()) {
    const std::uint32_t mask = src.masks[src.next++];
    DomTree page = src.base;
    bool ok = true;
    for (std::size_t i = 0; ok && i < src.candidates.size(); ++i) {
      if (!(mask >> i & 1U)) continue;
      try {
        page = apply(page, plan_add_rule(page, src.candidates[i]->features, options));
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) continue;
    const double s = score_page_features(model, extract_features(page));
    if (!in_range(s, request)) continue;
    if (!seen.insert(serialize(page)).second) continue;
    return GeneratedFixture{page.source_url, std::move(page), s};
  }
  return std::nullopt;
}

}  // namespace

std::vector<GeneratedFixture> generate_fixtures(const Classifier& model, const std::vector<CorpusPage>& legit,
                                                const FixtureRequest& request) {
  if (model.hashed) throw std::invalid_argument("fixture generation needs a plaintext model");
  if (!(request.lo < request.hi)) throw std::invalid_argument("empty score range");
  std::vector<Source> sources;
  for (const auto& page : legit) {
    if (auto src = prepare(model, page, request)) sources.push_back(std::move(*src));
  }
  std::vector<GeneratedFixture> out;
  std::set<std::string> seen;
  bool any = true;
  while (out.size() < request.count && any) {
    any = false;
    for (auto& src : sources) {
      if (out.size() == request.count) break;
      if (auto fx = next_variant(model, src, request, seen)) {
        out.push_back(std::move(*fx));
        any = true;
      }
    }
  }
  if (out.size() < request.count) {
    throw Unreachable("only " + std::to_string(out.size()) + " of " + std::to_string(request.count) +
                      " pages land in [" + std::to_string(request.lo) + ", " + std::to_string(request.hi) + ")");
  }
  return out;
}

}  // namespace phishlab
