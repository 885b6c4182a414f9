#include "phishlab/features.hpp"

#include <openssl/sha.h>

#include <array>
#include <stdexcept>

#include "phishlab/error.hpp"
#include "phishlab/text.hpp"
#include "phishlab/url.hpp"

namespace phishlab {
namespace {

struct KindInfo {
  FeatureKind kind;
  std::string_view name;
};

constexpr std::array<KindInfo, 18> kKinds{{
    {FeatureKind::PageHasForms, "PageHasForms"},
    {FeatureKind::PageHasTextInputs, "PageHasTextInputs"},
    {FeatureKind::PageHasPswdInputs, "PageHasPswdInputs"},
    {FeatureKind::PageHasRadioInputs, "PageHasRadioInputs"},
    {FeatureKind::PageHasCheckInputs, "PageHasCheckInputs"},
    {FeatureKind::PageExternalLinksFreq, "PageExternalLinksFreq"},
    {FeatureKind::PageActionOtherDomainFreq, "PageActionOtherDomainFreq"},
    {FeatureKind::PageSecureLinksFreq, "PageSecureLinksFreq"},
    {FeatureKind::PageImgOtherDomainFreq, "PageImgOtherDomainFreq"},
    {FeatureKind::PageNumScriptTagsGt1, "PageNumScriptTags>1"},
    {FeatureKind::PageNumScriptTagsGt6, "PageNumScriptTags>6"},
    {FeatureKind::PageActionURL, "PageActionURL"},
    {FeatureKind::PageLinkDomain, "PageLinkDomain"},
    {FeatureKind::PageTerm, "PageTerm"},
    {FeatureKind::UrlTld, "UrlTld"},
    {FeatureKind::UrlDomain, "UrlDomain"},
    {FeatureKind::UrlOtherHostToken, "UrlOtherHostToken"},
    {FeatureKind::UrlPathToken, "UrlPathToken"},
}};

std::string canonical_of(FeatureKind kind, std::string_view payload = {}) {
  return Feature{kind, std::string(payload)}.canonical();
}

void set_ratio(FeatureValueMap& map, FeatureKind kind, std::size_t num, std::size_t den) {
  if (den == 0 || num == 0) return;
  map[canonical_of(kind)] = static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string_view kind_name(FeatureKind kind) {
  return kKinds[static_cast<std::size_t>(kind)].name;
}

bool is_wildcard(FeatureKind kind) {
  return kind >= FeatureKind::PageActionURL;
}

bool is_frequency(FeatureKind kind) {
  return kind == FeatureKind::PageExternalLinksFreq ||
         kind == FeatureKind::PageActionOtherDomainFreq ||
         kind == FeatureKind::PageSecureLinksFreq || kind == FeatureKind::PageImgOtherDomainFreq;
}

bool is_url_kind(FeatureKind kind) { return kind >= FeatureKind::UrlTld; }

bool is_deletable(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::PageHasTextInputs:
    case FeatureKind::PageHasPswdInputs:
    case FeatureKind::PageExternalLinksFreq:
    case FeatureKind::PageActionOtherDomainFreq:
    case FeatureKind::PageSecureLinksFreq:
    case FeatureKind::PageImgOtherDomainFreq:
    case FeatureKind::PageActionURL:
    case FeatureKind::PageLinkDomain:
    case FeatureKind::PageTerm:
      return true;
    default:
      return false;
  }
}

bool is_addable(FeatureKind kind) { return !is_url_kind(kind); }

bool is_deletable_feature(std::string_view canonical) {
  const auto f = parse_feature(canonical);
  return f && is_deletable(f->kind);
}

bool is_addable_feature(std::string_view canonical) {
  const auto f = parse_feature(canonical);
  return f && is_addable(f->kind);
}

std::string Feature::canonical() const {
  std::string out(kind_name(kind));
  if (is_wildcard(kind)) {
    out += '=';
    out += payload;
  }
  return out;
}

std::optional<Feature> parse_feature(std::string_view canonical) {
  const auto eq = canonical.find('=');
  const std::string_view name = canonical.substr(0, eq);
  for (const auto& k : kKinds) {
    if (k.name != name) continue;
    if (is_wildcard(k.kind)) {
      if (eq == std::string_view::npos || eq + 1 == canonical.size()) return std::nullopt;
      return Feature{k.kind, std::string(canonical.substr(eq + 1))};
    }
    if (eq != std::string_view::npos) return std::nullopt;
    return Feature{k.kind, {}};
  }
  return std::nullopt;
}

FeatureValueMap extract_page_features(const DomTree& tree) {
  FeatureValueMap map;
  const auto page = try_parse_url(tree.source_url);
  std::size_t links = 0, external_links = 0, secure_links = 0;
  std::size_t actions = 0, external_actions = 0;
  std::size_t imgs = 0, external_imgs = 0;
  std::size_t scripts = 0;

  for_each_element(tree.root, [&](const DomNode& el, const NodePath&) {
    const std::string& tag = el.tag;
    if (tag == "form") {
      map[canonical_of(FeatureKind::PageHasForms)] = 1;
      if (const auto* action = el.attr("action")) {
        ++actions;
        const auto target = classify_link(*action, page);
        if (is_external(target, page)) ++external_actions;
        const std::string_view value = text::trim(*action);
        if (!value.empty()) map[canonical_of(FeatureKind::PageActionURL, value)] = 1;
      }
    } else if (tag == "input") {
      if (const auto* type = el.attr("type")) {
        const std::string t = text::to_lower_ascii(text::trim(*type));
        if (t == "text") map[canonical_of(FeatureKind::PageHasTextInputs)] = 1;
        if (t == "password") map[canonical_of(FeatureKind::PageHasPswdInputs)] = 1;
        if (t == "radio") map[canonical_of(FeatureKind::PageHasRadioInputs)] = 1;
        if (t == "checkbox") map[canonical_of(FeatureKind::PageHasCheckInputs)] = 1;
      }
    } else if (tag == "a") {
      if (const auto* href = el.attr("href")) {
        ++links;
        const auto target = classify_link(*href, page);
        if (target.scheme == "https") ++secure_links;
        if (is_external(target, page)) {
          ++external_links;
          map[canonical_of(FeatureKind::PageLinkDomain, registrable_domain(*target.host))] = 1;
        }
      }
    } else if (tag == "img") {
      ++imgs;
      if (const auto* src = el.attr("src")) {
        if (is_external(classify_link(*src, page), page)) ++external_imgs;
      }
    } else if (tag == "script") {
      ++scripts;
    }
  });

  set_ratio(map, FeatureKind::PageExternalLinksFreq, external_links, links);
  set_ratio(map, FeatureKind::PageActionOtherDomainFreq, external_actions, actions);
  set_ratio(map, FeatureKind::PageSecureLinksFreq, secure_links, links);
  set_ratio(map, FeatureKind::PageImgOtherDomainFreq, external_imgs, imgs);
  if (scripts > 1) map[canonical_of(FeatureKind::PageNumScriptTagsGt1)] = 1;
  if (scripts > 6) map[canonical_of(FeatureKind::PageNumScriptTagsGt6)] = 1;

  for_each_page_text(tree.root, [&](const DomNode& node, const NodePath&) {
    for (const auto& token : text::tokenize(node.value)) {
      map[canonical_of(FeatureKind::PageTerm, token.text)] = 1;
    }
  });
  return map;
}

std::vector<Feature> extract_url_features(std::string_view url_text) {
  const Url url = parse_url(url_text);
  std::vector<Feature> out;
  if (is_ip_literal(url.host)) {
    out.push_back({FeatureKind::UrlDomain, url.host});
  } else {
    const std::string suffix = public_suffix(url.host);
    const std::string domain = registrable_domain(url.host);
    out.push_back({FeatureKind::UrlTld, suffix});
    out.push_back({FeatureKind::UrlDomain, domain});
    if (url.host.size() > domain.size()) {
      const std::string_view rest =
          std::string_view(url.host).substr(0, url.host.size() - domain.size() - 1);
      std::size_t start = 0;
      while (start <= rest.size()) {
        auto dot = rest.find('.', start);
        if (dot == std::string_view::npos) dot = rest.size();
        if (dot > start) out.push_back({FeatureKind::UrlOtherHostToken, std::string(rest.substr(start, dot - start))});
        start = dot + 1;
      }
    }
  }
  std::size_t start = 0;
  const std::string_view path = url.path;
  while (start < path.size()) {
    auto slash = path.find('/', start);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > start) out.push_back({FeatureKind::UrlPathToken, std::string(path.substr(start, slash - start))});
    start = slash + 1;
  }
  return out;
}

FeatureValueMap extract_features(const DomTree& tree) {
  FeatureValueMap map = extract_page_features(tree);
  if (try_parse_url(tree.source_url)) {
    for (const auto& f : extract_url_features(tree.source_url)) map[f.canonical()] = 1;
  }
  return map;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest.data());
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(digest.size() * 2);
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

std::string hash_feature(std::string_view canonical) {
  if (canonical.empty()) throw std::invalid_argument("hash_feature: empty feature string");
  return sha256_hex(canonical);
}

bool is_hex_digest(std::string_view s) {
  if (s.size() != 64) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace phishlab
