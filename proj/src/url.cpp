#include "phishlab/url.hpp"

#include <algorithm>
#include <array>

#include "phishlab/error.hpp"
#include "phishlab/text.hpp"

namespace phishlab {
namespace {

// Multi-label public suffixes seen in the fixture and phishing corpora. Single
// labels fall through to the implicit "*" rule.
constexpr std::array<std::string_view, 48> kSuffixes{
    "co.uk",         "ac.uk",          "gov.uk",        "org.uk",       "me.uk",
    "com.au",        "net.au",         "org.au",        "edu.au",       "gov.au",
    "co.jp",         "ne.jp",          "or.jp",         "ac.jp",        "com.br",
    "net.br",        "com.cn",         "net.cn",        "org.cn",       "gov.cn",
    "edu.cn",        "com.hk",         "co.in",         "co.kr",        "com.mx",
    "com.tr",        "co.nz",          "co.za",         "com.sg",       "com.tw",
    "com.ar",        "com.my",         "co.id",         "com.ng",       "com.pk",
    "github.io",     "blogspot.com",   "herokuapp.com", "appspot.com",  "azurewebsites.net",
    "cloudfront.net", "firebaseapp.com", "web.app",     "netlify.app",  "000webhostapp.com",
    "weebly.com",    "wixsite.com",    "glitch.me",
};

bool is_scheme_char(char c, bool first) {
  const bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (first) return alpha;
  return alpha || (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
}

/// Scheme of a reference when it has one ("https" in "https://...").
std::optional<std::string> scheme_of(std::string_view ref) {
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const char c = ref[i];
    if (c == ':') {
      if (i == 0) return std::nullopt;
      return text::to_lower_ascii(ref.substr(0, i));
    }
    if (!is_scheme_char(c, i == 0)) return std::nullopt;
  }
  return std::nullopt;
}

bool valid_host(std::string_view host) {
  if (host.empty()) return false;
  return std::all_of(host.begin(), host.end(), [](char c) {
    return static_cast<unsigned char>(c) > 0x20 && c != '/' && c != '\\' && c != '?' &&
           c != '#' && c != '@' && c != '<' && c != '>' && c != '"';
  });
}

/// Host of an authority component, without userinfo or port.
std::string host_of_authority(std::string_view authority) {
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    return text::to_lower_ascii(authority.substr(0, close == std::string_view::npos ? authority.size() : close + 1));
  }
  if (const auto colon = authority.find(':'); colon != std::string_view::npos) {
    authority = authority.substr(0, colon);
  }
  std::string host = text::to_lower_ascii(authority);
  while (!host.empty() && host.back() == '.') host.pop_back();
  return host;
}

}  // namespace

std::optional<Url> try_parse_url(std::string_view raw) {
  const std::string_view s = text::trim(raw);
  const auto scheme = scheme_of(s);
  if (!scheme) return std::nullopt;
  std::string_view rest = s.substr(scheme->size() + 1);
  if (rest.substr(0, 2) != "//") return std::nullopt;
  rest.remove_prefix(2);
  const auto end = rest.find_first_of("/?#");
  const std::string_view authority = rest.substr(0, end);
  Url url;
  url.scheme = *scheme;
  url.host = host_of_authority(authority);
  if (!valid_host(url.host)) return std::nullopt;
  if (end == std::string_view::npos) return url;
  rest.remove_prefix(end);
  if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
  if (const auto q = rest.find('?'); q != std::string_view::npos) {
    url.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  url.path = std::string(rest);
  return url;
}

Url parse_url(std::string_view text) {
  if (auto url = try_parse_url(text)) return std::move(*url);
  throw UrlError("not an absolute URL: '" + std::string(text) + "'");
}

bool is_ip_literal(std::string_view host) {
  if (!host.empty() && host.front() == '[') return true;
  int dots = 0;
  for (char c : host) {
    if (c == '.') {
      ++dots;
    } else if (c < '0' || c > '9') {
      return false;
    }
  }
  return dots == 3;
}

std::string public_suffix(std::string_view host) {
  if (is_ip_literal(host)) return {};
  std::string_view best;
  for (const auto suffix : kSuffixes) {
    if (host.size() > suffix.size() && host.ends_with(suffix) &&
        host[host.size() - suffix.size() - 1] == '.' && suffix.size() > best.size()) {
      best = suffix;
    } else if (host == suffix && suffix.size() > best.size()) {
      best = suffix;
    }
  }
  if (!best.empty()) return std::string(best);
  const auto dot = host.rfind('.');
  return std::string(dot == std::string_view::npos ? host : host.substr(dot + 1));
}

std::string registrable_domain(std::string_view host) {
  if (is_ip_literal(host)) return std::string(host);
  const std::string suffix = public_suffix(host);
  if (host.size() <= suffix.size()) return std::string(host);
  const std::string_view before = host.substr(0, host.size() - suffix.size() - 1);
  const auto dot = before.rfind('.');
  return std::string(dot == std::string_view::npos ? host : host.substr(dot + 1));
}

LinkTarget classify_link(std::string_view reference, const std::optional<Url>& page) {
  const std::string_view ref = text::trim(reference);
  LinkTarget target;
  if (ref.substr(0, 2) == "//") {
    const std::string_view rest = ref.substr(2);
    const std::string host = host_of_authority(rest.substr(0, rest.find_first_of("/?#")));
    if (valid_host(host)) target.host = host;
    return target;
  }
  if (const auto scheme = scheme_of(ref)) {
    target.scheme = *scheme;
    if (auto url = try_parse_url(ref)) target.host = std::move(url->host);
    return target;
  }
  if (page) target.host = page->host;
  return target;
}

bool is_external(const LinkTarget& target, const std::optional<Url>& page) {
  if (!target.host) return false;
  if (!page) return true;
  return registrable_domain(*target.host) != registrable_domain(page->host);
}

}  // namespace phishlab
