#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace phishlab {

struct Url {
  std::string scheme;  // lowercase
  std::string host;    // lowercase, no port
  std::string path;    // starts with '/' or is empty
  std::string query;   // without '?'
};

/// Absolute URLs of the form scheme://host[:port][/path][?query][#fragment].
/// Throws UrlError otherwise.
Url parse_url(std::string_view text);
std::optional<Url> try_parse_url(std::string_view text);

bool is_ip_literal(std::string_view host);

/// Longest matching entry of the bundled suffix list; falls back to the last
/// label. Empty for IP literals.
std::string public_suffix(std::string_view host);

/// Public suffix plus one label. IP literals and bare suffixes map to
/// themselves.
std::string registrable_domain(std::string_view host);

/// Where an href/src/action points, relative to the page it sits on.
struct LinkTarget {
  std::string scheme;  // explicit scheme only; empty for relative references
  std::optional<std::string> host;  // the page's host for relative references, empty for non-network schemes
};

LinkTarget classify_link(std::string_view reference, const std::optional<Url>& page);

/// True when the reference resolves to a host whose registrable domain differs
/// from the page's.
bool is_external(const LinkTarget& target, const std::optional<Url>& page);

}  // namespace phishlab
