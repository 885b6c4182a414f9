#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishlab/dom.hpp"

namespace phishlab {

enum class FeatureKind {
  PageHasForms,
  PageHasTextInputs,
  PageHasPswdInputs,
  PageHasRadioInputs,
  PageHasCheckInputs,
  PageExternalLinksFreq,
  PageActionOtherDomainFreq,
  PageSecureLinksFreq,
  PageImgOtherDomainFreq,
  PageNumScriptTagsGt1,
  PageNumScriptTagsGt6,
  PageActionURL,
  PageLinkDomain,
  PageTerm,
  UrlTld,
  UrlDomain,
  UrlOtherHostToken,
  UrlPathToken,
};

std::string_view kind_name(FeatureKind kind);
bool is_wildcard(FeatureKind kind);
bool is_frequency(FeatureKind kind);
bool is_url_kind(FeatureKind kind);

struct Feature {
  FeatureKind kind = FeatureKind::PageHasForms;
  std::string payload;

  /// `Kind` or `Kind=payload`.
  std::string canonical() const;

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Inverse of Feature::canonical(); nullopt for strings that are not a known
/// canonical feature (digests, typos, empty payloads).
std::optional<Feature> parse_feature(std::string_view canonical);

/// Attacker capabilities: whether a present feature can be removed, and
/// whether an absent one can be introduced, without touching the URL or the
/// page's appearance. Strings that are not canonical features (digests of
/// unknown preimage) are neither.
bool is_deletable(FeatureKind kind);
bool is_addable(FeatureKind kind);
bool is_deletable_feature(std::string_view canonical);
bool is_addable_feature(std::string_view canonical);

/// Canonical feature string -> value. Absent means 0.
using FeatureValueMap = std::map<std::string, double, std::less<>>;

FeatureValueMap extract_page_features(const DomTree& tree);

/// Throws UrlError for anything that is not an absolute URL.
std::vector<Feature> extract_url_features(std::string_view url);

/// Page features plus the URL features of tree.source_url (value 1). A page
/// whose URL does not parse contributes no URL features.
FeatureValueMap extract_features(const DomTree& tree);

std::string sha256_hex(std::string_view bytes);

/// SHA-256 of the canonical string as 64 lowercase hex characters. Throws
/// std::invalid_argument on an empty string.
std::string hash_feature(std::string_view canonical);

bool is_hex_digest(std::string_view s);

}  // namespace phishlab
