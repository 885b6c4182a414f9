#include "doctest.h"
#include "phishlab/error.hpp"
#include "phishlab/url.hpp"

using namespace phishlab;

TEST_SUITE("url") {
  TEST_CASE("parse absolute URLs") {
    const Url u = parse_url("HTTPS://Login.Example.COM:8443/a/b?x=1#frag");
    CHECK(u.scheme == "https");
    CHECK(u.host == "login.example.com");
    CHECK(u.path == "/a/b");
    CHECK(u.query == "x=1");
    CHECK(parse_url("http://example.com").path.empty());
    CHECK_THROWS_AS(parse_url("not a url"), UrlError);
    CHECK_THROWS_AS(parse_url("/relative/path"), UrlError);
    CHECK_FALSE(try_parse_url("mailto:x@example.com").has_value());
  }

  TEST_CASE("registrable domains") {
    CHECK(public_suffix("www.example.co.uk") == "co.uk");
    CHECK(registrable_domain("www.example.co.uk") == "example.co.uk");
    CHECK(registrable_domain("login.example.com") == "example.com");
    CHECK(registrable_domain("example.com") == "example.com");
    CHECK(registrable_domain("192.168.1.1") == "192.168.1.1");
    CHECK(is_ip_literal("10.0.0.1"));
    CHECK_FALSE(is_ip_literal("10.example"));
  }

  TEST_CASE("link classification") {
    const auto page = try_parse_url("https://www.example.com/login");
    const LinkTarget rel = classify_link("/help", page);
    CHECK(rel.scheme.empty());
    CHECK(rel.host == std::optional<std::string>("www.example.com"));
    CHECK_FALSE(is_external(rel, page));
    const LinkTarget same = classify_link("https://static.example.com/x", page);
    CHECK(same.scheme == "https");
    CHECK_FALSE(is_external(same, page));
    CHECK(is_external(classify_link("http://evil.example.net/", page), page));
    CHECK(is_external(classify_link("//cdn.other.org/lib.js", page), page));
    CHECK_FALSE(is_external(classify_link("javascript:void(0)", page), page));
  }
}
