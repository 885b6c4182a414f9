#include "builders.hpp"

#include <algorithm>
#include <stdexcept>

#include "phishlab/collision.hpp"
#include "phishlab/features.hpp"

namespace phishlab::testing {

DomTree page(const std::string& html, const std::string& url) { return parse_html(html, url); }

ClassificationRule rule(std::string id, std::vector<std::string> features, double weight) {
  return ClassificationRule{std::move(id), std::move(features), weight};
}

// ---- login-page family -----------------------------------------------------

std::string login_url(const LoginKnobs& k) {
  return std::string("http://account-check.example.com/") + (k.login_path ? "login" : "signin");
}

std::string login_html(const LoginKnobs& k) {
  std::string h = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<title>sign in</title>\n";
  h += "<style>.btn{height:38px;} .note{color:#333333;}</style>\n";
  h += "<script src=\"/js/app.js\"></script>\n";
  if (k.two_scripts) h += "<script src=\"/js/track.js\"></script>\n";
  h += "</head>\n<body>\n<div class=\"header\">\n";
  h += "  <a href=\"/\">home</a>\n  <a href=\"/help\">help</a>\n";
  if (k.paypal_link) h += "  <a href=\"https://www.paypal.com/us/smarthelp\">paypal support</a>\n";
  if (k.secure_link) h += "  <a href=\"https://account-check.example.com/security\">security center</a>\n";
  h += k.foreign_image ? "  <img src=\"https://cdn.imgstore.net/logo.png\" alt=\"logo\">\n"
                       : "  <img src=\"/img/logo.png\" alt=\"logo\">\n";
  h += "</div>\n<div class=\"main\">\n  <h2>welcome back</h2>\n";
  h += k.bad_action ? "  <form method=\"post\" action=\"http://secure-login.example.info/auth.php\">\n"
                    : "  <form method=\"post\" action=\"/session\">\n";
  h += k.password_term ? "    <label>email and password</label>\n" : "    <label>email address</label>\n";
  h += k.text_input ? "    <input type=\"text\" name=\"email\">\n" : "    <input type=\"email\" name=\"email\">\n";
  h += k.password_input ? "    <input type=\"password\" name=\"pw\">\n" : "    <input type=\"tel\" name=\"code\">\n";
  h += "    <button class=\"btn\" type=\"submit\">sign in</button>\n  </form>\n";
  std::string note;
  if (k.verify_term) note += "please verify your details ";
  if (k.suspended_terms) note += "your account has been suspended ";
  if (note.empty()) note = "manage your settings ";
  note.pop_back();
  h += "  <p class=\"note\">" + note + "</p>\n</div>\n<div class=\"footer\">\n";
  h += k.privacy_term ? "  <p>read our privacy notice</p>\n" : "  <p>all rights kept</p>\n";
  h += "  <span>help desk</span>\n</div>\n</body>\n</html>\n";
  return h;
}

DomTree login_page(const LoginKnobs& k) { return page(login_html(k), login_url(k)); }

Classifier acceptance_model() {
  Classifier c;
  c.bias = -2.0;
  c.rules = {
      rule("P1", {"PageHasPswdInputs"}, 1.1),
      rule("P2", {"PageTerm=verify"}, 0.9),
      rule("P3", {"PageTerm=account", "PageTerm=suspended"}, 1.4),
      rule("P4", {"PageLinkDomain=paypal.com"}, 1.2),
      rule("P5", {"PageActionURL=http://secure-login.example.info/auth.php"}, 1.3),
      rule("P6", {"PageSecureLinksFreq", "PageHasPswdInputs"}, 0.8),
      rule("P7", {"PageHasTextInputs", "PageHasPswdInputs"}, 0.5),
      rule("P8", {"PageExternalLinksFreq"}, 0.6),
      rule("P9", {"PageTerm=password"}, 0.4),
      rule("U1", {"PageHasForms"}, 0.3),
      rule("U2", {"PageNumScriptTags>1"}, 0.35),
      rule("U3", {"UrlPathToken=login"}, 0.6),
      rule("N1", {"PageTerm=privacy"}, -0.7),
      rule("N2", {"PageTerm=copyright", "PageTerm=terms"}, -0.9),
      rule("N3", {"PageTerm=terms"}, -0.4),
      rule("N4", {"PageHasCheckInputs"}, -0.5),
      rule("N5", {"PageTerm=careers", "PageLinkDomain=linkedin.com"}, -0.8),
      rule("N6", {"UrlTld=org"}, -0.6),
      rule("N7", {"UrlDomain=university.edu"}, -1.0),
      rule("M1", {"PageImgOtherDomainFreq"}, 0.45),
  };
  return c;
}

namespace {

LoginKnobs knobs_from_mask(unsigned m) {
  LoginKnobs k;
  bool* bits[] = {&k.password_input, &k.text_input,  &k.verify_term,   &k.suspended_terms,
                  &k.password_term,  &k.paypal_link, &k.bad_action,    &k.two_scripts,
                  &k.foreign_image,  &k.login_path,  &k.secure_link,   &k.privacy_term};
  for (unsigned i = 0; i < 12; ++i) *bits[i] = (m >> i) & 1U;
  return k;
}

}  // namespace

std::vector<Seed> acceptance_seeds() {
  const Classifier model = acceptance_model();
  // Candidates per bucket [0.5,0.6) .. [0.9,1.0), in mask order.
  std::vector<std::vector<Seed>> buckets(5);
  for (unsigned m = 0; m < (1U << 12); ++m) {
    DomTree p = login_page(knobs_from_mask(m));
    const double s = score_page_features(model, extract_features(p));
    if (s < 0.5 || s >= 1.0) continue;
    const auto b = std::min<std::size_t>(4, static_cast<std::size_t>((s - 0.5) * 10.0));
    buckets[b].push_back({"seed_" + std::to_string(m), std::move(p), s});
  }
  std::vector<Seed> out;
  for (auto& cands : buckets) {
    if (cands.size() < 6) throw std::logic_error("acceptance seed bucket underfilled");
    // Spread the picks over the candidate list.
    for (std::size_t i = 0; i < 6; ++i) out.push_back(cands[i * (cands.size() - 1) / 5]);
  }
  return out;
}

AdditionPool acceptance_pool() {
  AdditionPool pool;
  pool.specs = {
      {"span", {{"class", "legal"}}, "privacy policy"},
      {"p", {{"class", "legal"}}, "copyright terms apply"},
      {"input", {{"type", "checkbox"}, {"name", "remember"}}, ""},
      {"a", {{"href", "https://www.linkedin.com/company/acme"}}, "careers"},
      {"span", {{"class", "tag"}}, "news"},
      {"p", {}, "latest updates from the team"},
      {"li", {}, "products"},
      {"div", {{"class", "card"}}, "customer stories"},
      {"a", {{"href", "/blog"}}, "blog"},
      {"h3", {}, "our mission"},
      {"span", {{"class", "muted"}}, "since 1998"},
      {"li", {{"class", "nav"}}, "pricing"},
  };
  return pool;
}

// ---- exhaustion case -------------------------------------------------------

namespace {

const std::vector<std::string>& opaque_terms() {
  static const std::vector<std::string> terms = {"bonjour", "danke", "gracias", "obrigado",
                                                 "arigato", "spasibo", "grazie", "tack"};
  return terms;
}

}  // namespace

Classifier exhaustion_model_hashed() {
  Classifier c;
  c.bias = -3.5;
  c.rules = {
      rule("E1", {"PageHasForms"}, 1.2),
      rule("E2", {"PageNumScriptTags>1"}, 0.9),
      rule("E3", {"UrlPathToken=login"}, 1.0),
      rule("E4", {"PageHasForms", "PageNumScriptTags>1"}, 0.8),
      rule("E5", {"UrlTld=info"}, 0.7),
  };
  for (std::size_t i = 0; i < opaque_terms().size(); ++i) {
    c.rules.push_back(rule("O" + std::to_string(i + 1), {"PageTerm=" + opaque_terms()[i]}, -0.25));
  }
  return hash_model(c);
}

DomTree exhaustion_seed() {
  return page(
      "<html><head><title>member area</title><script src=\"/a.js\"></script>"
      "<script src=\"/b.js\"></script></head><body><div class=\"wrap\"><h1>member area</h1>"
      "<form method=\"post\" action=\"/go\"><input type=\"email\" name=\"user\">"
      "<button type=\"button\">continue</button></form><p>enter your email to continue</p>"
      "</div></body></html>",
      "http://members.example.info/login");
}

Corpus exhaustion_corpus() {
  Corpus corpus;
  corpus.pages.push_back({"http://portal.example.info/login",
                          page("<html><head><script src=\"/x.js\"></script><script src=\"/y.js\"></script>"
                               "</head><body><form action=\"/s\"><input type=\"email\"></form>"
                               "<p>welcome to the portal</p></body></html>",
                               "http://portal.example.info/login"),
                          Label::phish});
  corpus.pages.push_back({"https://shop.example.com/",
                          page("<html><body><p>fresh deals every day</p></body></html>", "https://shop.example.com/"),
                          Label::legit});
  return corpus;
}

AdditionPool exhaustion_pool(std::size_t filler) {
  AdditionPool pool;
  static const char* tags[] = {"span", "p", "li", "div", "em"};
  for (std::size_t i = 0; i < filler; ++i) {
    pool.specs.push_back({tags[i % 5], {{"class", "f" + std::to_string(i)}}, "note " + std::to_string(i)});
  }
  // Spread the useful specs through the pool.
  for (std::size_t i = 0; i < opaque_terms().size(); ++i) {
    const std::size_t at = std::min(pool.specs.size(), (i * 31) % (filler + 1));
    pool.specs.insert(pool.specs.begin() + static_cast<std::ptrdiff_t>(at),
                      ElementSpec{"span", {{"lang", "xx"}}, opaque_terms()[i]});
  }
  return pool;
}

// ---- frequency dilution case -----------------------------------------------

DomTree dilution_seed() {
  std::string h = "<html>";
  for (int i = 0; i < 20; ++i) {
    h += "<a href=\"https://bank.example.com/s" + std::to_string(i) + "\">section " + std::to_string(i) + "</a>";
  }
  h += "<form action=\"/auth\"></form><input type=\"password\" name=\"pin\"><p>online banking</p></html>";
  return page(h, "https://bank.example.com/signin");
}

Classifier dilution_model() {
  Classifier c;
  c.bias = -1.0;
  c.rules = {
      rule("R1", {"PageSecureLinksFreq", "PageHasPswdInputs"}, 2.0),
      rule("R2", {"PageSecureLinksFreq"}, 0.5),
      rule("R3", {"PageHasForms"}, 0.2),
  };
  return c;
}

// ---- subset pruning case ---------------------------------------------------

namespace {

const std::vector<std::pair<std::string, std::string>>& negative_pairs() {
  static const std::vector<std::pair<std::string, std::string>> pairs = {
      {"privacy", "policy"},   {"copyright", "reserved"},  {"careers", "jobs"},
      {"newsletter", "subscribe"}, {"investors", "relations"}, {"accessibility", "statement"}};
  return pairs;
}

}  // namespace

Classifier subset_model() {
  Classifier c;
  c.bias = -2.0;
  c.rules = {
      rule("S1", {"PageHasPswdInputs"}, 1.0),
      rule("S2", {"PageTerm=verify"}, 0.8),
      rule("S3", {"PageHasForms"}, 1.0),
      rule("S4", {"PageNumScriptTags>1"}, 0.9),
      rule("S5", {"PageHasRadioInputs"}, 0.8),
      rule("S6", {"PageNumScriptTags>6"}, 1.1),
      rule("S7", {"PageHasRadioInputs", "PageNumScriptTags>1"}, 0.6),
      rule("S8", {"PageHasTextInputs"}, 0.5),
  };
  std::size_t i = 0;
  for (const auto& [a, b] : negative_pairs()) {
    ++i;
    c.rules.push_back(rule("G" + std::to_string(i), {"PageTerm=" + a, "PageTerm=" + b}, -0.5));
    c.rules.push_back(rule("H" + std::to_string(i), {"PageTerm=" + a}, -0.45));
  }
  return c;
}

std::vector<CorpusPage> legit_login_pages(std::size_t count) {
  static const char* brands[] = {"acme", "globex", "initech", "umbrella", "hooli", "stark", "wayne",
                                 "wonka", "tyrell", "cyberdyne", "soylent", "oscorp"};
  std::vector<CorpusPage> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string brand = brands[i % 12] + (i >= 12 ? std::to_string(i / 12) : std::string());
    const std::string url = "https://www." + brand + ".com/account";
    std::string h = "<html><head><title>" + brand + " account</title></head><body>";
    h += "<div class=\"top\"><a href=\"/\">" + brand + "</a><a href=\"/shop\">shop</a></div>";
    h += "<div class=\"panel\"><h2>sign in to " + brand + "</h2>";
    h += "<form action=\"/session\" method=\"post\"><input type=\"text\" name=\"user\">";
    if (i % 2 == 0) h += "<input type=\"password\" name=\"pass\">";
    h += "<button type=\"submit\">continue</button></form>";
    h += i % 3 == 0 ? "<p>verify it is you</p>" : "<p>good to see you</p>";
    h += "</div><div class=\"bottom\"><span>" + brand + " group</span></div></body></html>";
    out.push_back({url, page(h, url), Label::legit});
  }
  return out;
}

AdditionPool subset_pool() {
  AdditionPool pool;
  static const char* tags[] = {"span", "p", "li", "div", "small"};
  for (std::size_t i = 0; i < 60; ++i) {
    pool.specs.push_back({tags[i % 5], {{"class", "x" + std::to_string(i)}}, "item " + std::to_string(i)});
  }
  std::size_t i = 0;
  for (const auto& [a, b] : negative_pairs()) {
    pool.specs.insert(pool.specs.begin() + static_cast<std::ptrdiff_t>(i * 11), ElementSpec{"p", {}, a + " " + b});
    ++i;
  }
  return pool;
}

// ---- pruning neutrality ----------------------------------------------------

Classifier robust_model() {
  Classifier c;
  c.bias = -2.5;
  c.rules = {
      rule("R1", {"PageHasPswdInputs", "PageHasForms"}, 2.5),
      rule("R2", {"PageActionOtherDomainFreq", "PageHasForms"}, 2.0),
      rule("R3", {"PageHasPswdInputs", "PageExternalLinksFreq"}, 1.0),
      rule("R4", {"PageTerm=privacy", "PageHasForms"}, -2.0),
      rule("L1", {"PageTerm=verify"}, 0.3),
      rule("L2", {"PageTerm=careers"}, -0.3),
      rule("Q1", {"PageTerm=copyright", "PageTerm=reserved"}, -0.5),
      rule("Q2", {"PageTerm=copyright"}, -0.3),
  };
  return c;
}

std::vector<CorpusPage> mixed_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<CorpusPage> out;
  for (std::size_t i = 0; i < count; ++i) {
    const bool phish = i % 2 == 0;
    const std::string url = "https://site" + std::to_string(i) + ".example.com/" + (phish ? "login" : "home");
    std::string h = "<html><head><title>page " + std::to_string(i) + "</title></head><body><div>";
    const bool external = coin(rng);
    h += "<a href=\"/\">start</a>";
    if (external) h += "<a href=\"https://partner.example.net/\">partner</a>";
    const bool form = phish || coin(rng);
    if (form) {
      h += phish ? "<form action=\"http://collect.example.ru/post\">" : "<form action=\"/post\">";
      if (phish || coin(rng)) h += "<input type=\"password\" name=\"p\">";
      h += "<input type=\"text\" name=\"u\"></form>";
    }
    std::string words = phish ? "sign in now" : "welcome";
    if (coin(rng)) words += " verify";
    if (!phish && coin(rng)) words += " careers";
    if (!phish && coin(rng)) words += " copyright reserved";
    if (!phish && form) words += " privacy";
    h += "<p>" + words + "</p></div></body></html>";
    out.push_back({url, page(h, url), phish ? Label::phish : Label::legit});
  }
  return out;
}

// ---- single-rule case ------------------------------------------------------

namespace {

const std::vector<std::string> kBadTerms = {
    "verify",   "suspended", "unlock",   "confirm",  "billing",  "urgent",   "locked",   "restore",
    "validate", "expired",   "limited",  "unusual",  "reactivate", "secure", "update",   "alert",
    "wallet",   "invoice",   "refund",   "prize",    "winner",   "claim",    "ssn"};
const std::vector<std::string> kBadDomains = {
    "paypal.com", "apple.com",  "chase.com",   "wellsfargo.com", "bankofamerica.com", "amazon.com",
    "ebay.com",   "netflix.com", "microsoft.com", "office.com",   "dropbox.com",       "adobe.com",
    "docusign.com", "dhl.com",  "fedex.com",   "usps.com"};
const std::vector<std::string> kGoodTerms = {
    "privacy",  "careers",   "copyright", "blog",    "press",  "investors", "accessibility",
    "sitemap",  "newsletter", "community", "partners", "events", "recipes",  "weather"};
const std::vector<std::string> kGoodDomains = {
    "wikipedia.org", "github.com",   "stackoverflow.com", "mozilla.org",  "python.org",
    "w3.org",        "ietf.org",     "gnu.org",           "apache.org",   "debian.org",
    "kernel.org",    "openstreetmap.org", "archive.org",  "creativecommons.org", "eff.org",
    "ubuntu.com",    "rust-lang.org", "cppreference.com", "isocpp.org",   "llvm.org"};

/// Splits `total_cents` over n weights differing by at most one cent.
std::vector<double> spread(std::size_t n, long total_cents) {
  std::vector<double> out;
  const long sign = total_cents < 0 ? -1 : 1;
  const long abs_total = total_cents * sign;
  const long base = abs_total / static_cast<long>(n);
  const long extra = abs_total % static_cast<long>(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(static_cast<double>(sign * (base + (static_cast<long>(i) < extra ? 1 : 0))) / 100.0);
  }
  return out;
}

}  // namespace

Classifier single_rule_model() {
  Classifier c;
  c.bias = -1.0;
  c.rules = {
      rule("C1", {"PageHasForms", "PageNumScriptTags>1"}, 0.8),
      rule("C2", {"PageHasForms", "UrlPathToken=login"}, 0.7),
  };
  auto add = [&](const std::string& prefix, const std::vector<std::string>& payloads, const std::string& kind,
                 long cents) {
    const auto w = spread(payloads.size(), cents);
    for (std::size_t i = 0; i < payloads.size(); ++i) {
      c.rules.push_back(rule(prefix + std::to_string(i + 1), {kind + "=" + payloads[i]}, w[i]));
    }
  };
  add("DT", kBadTerms, "PageTerm", 4342);
  add("DL", kBadDomains, "PageLinkDomain", 3996);
  add("AT", kGoodTerms, "PageTerm", -2294);
  add("AL", kGoodDomains, "PageLinkDomain", -1989);
  return c;
}

std::vector<Seed> single_rule_seeds(std::size_t count) {
  const Classifier model = single_rule_model();
  std::mt19937_64 rng(7);
  std::vector<Seed> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::string> terms = kBadTerms;
    std::vector<std::string> domains = kBadDomains;
    std::shuffle(terms.begin(), terms.end(), rng);
    std::shuffle(domains.begin(), domains.end(), rng);
    terms.resize(3 + i % 6);
    domains.resize(1 + i % 4);
    std::string h = "<html><head><title>notice</title><script src=\"/a.js\"></script>"
                    "<script src=\"/b.js\"></script></head><body>"
                    "<div class=\"top\"><h1>account notice</h1><span>ref " + std::to_string(i) +
                    "</span></div><div class=\"main\"><ul><li>step one</li><li>step two</li>"
                    "<li>step three</li></ul><p>";
    for (std::size_t t = 0; t < terms.size(); ++t) h += (t ? " " : "") + terms[t];
    h += "</p><form action=\"/next\"><input type=\"email\" name=\"mail\"><button type=\"button\">next</button>"
         "</form></div><div class=\"links\"><span>see also</span><em>help</em><em>faq</em><em>status</em>";
    for (const auto& d : domains) h += "<a href=\"https://www." + d + "/signin\">portal</a>";
    h += "</div></body></html>";
    DomTree p = page(h, "http://notice-" + std::to_string(i) + ".example.com/login");
    const double s = score_page_features(model, extract_features(p));
    out.push_back({"single_" + std::to_string(i), std::move(p), s});
  }
  return out;
}

std::vector<std::string> single_rule_ids(const Classifier& model) { return find_single_rules(model); }

// ---- collision case --------------------------------------------------------

Corpus collision_corpus() {
  static const char* words[] = {
      "alpha",   "bravo",   "charlie", "delta",   "echo",    "foxtrot", "golf",    "hotel",   "india",
      "juliet",  "kilo",    "lima",    "mike",    "november", "oscar",  "papa",    "quebec",  "romeo",
      "sierra",  "tango",   "uniform", "victor",  "whiskey", "xray",    "yankee",  "zulu",    "amber",
      "basil",   "cedar",   "dune",    "ember",   "fjord",   "grove",   "harbor",  "islet",   "jasper",
      "kettle",  "lantern", "meadow",  "nectar",  "orchid",  "pebble",  "quartz",  "ridge",   "saffron",
      "thistle", "umber",   "velvet",  "willow",  "yarrow",  "zephyr",  "anchor",  "bramble", "copper",
      "dapple",  "falcon",  "garnet",  "heron",   "iris",    "juniper", "kestrel", "lichen",  "marble",
      "nutmeg",  "opal",    "pine",    "quill",   "raven",   "sorrel",  "tern",    "upland",  "vale",
      "wren",    "yew",     "zinnia",  "aster",   "birch",   "clover",  "dahlia",  "elm"};
  constexpr std::size_t n_words = sizeof words / sizeof words[0];
  Corpus corpus;
  for (std::size_t i = 0; i < 20; ++i) {
    const std::string url = "https://host" + std::to_string(i) + ".example" + (i % 2 ? ".net" : ".org") +
                            "/p" + std::to_string(i) + "/index";
    std::string h = "<html><body><p>";
    for (std::size_t w = 0; w < 12; ++w) {
      h += std::string(words[(i * 7 + w * 3) % n_words]) + std::to_string(i) + " ";
    }
    h += "</p><a href=\"https://ref" + std::to_string(i) + ".example.com/\">ref</a>";
    if (i % 3 == 0) h += "<form action=\"/f" + std::to_string(i) + "\"><input type=\"password\"></form>";
    h += "</body></html>";
    corpus.pages.push_back({url, page(h, url), i % 2 ? Label::phish : Label::legit});
  }
  return corpus;
}

// ---- random classifiers ----------------------------------------------------

RandomCase random_case(std::mt19937_64& rng, std::size_t max_rules, std::size_t max_features, std::size_t maps) {
  static const char* ratio_names[] = {"PageExternalLinksFreq", "PageSecureLinksFreq", "PageActionOtherDomainFreq",
                                      "PageImgOtherDomainFreq"};
  std::uniform_int_distribution<std::size_t> n_feat(2, max_features);
  std::uniform_int_distribution<std::size_t> n_rules(1, max_rules);
  std::uniform_real_distribution<double> weight(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> rule_len(1, 3);
  std::bernoulli_distribution coin(0.5);

  std::vector<std::string> universe;
  const std::size_t nf = n_feat(rng);
  for (std::size_t i = 0; i < nf; ++i) {
    universe.push_back(i < 4 && coin(rng) ? ratio_names[i] : "PageTerm=w" + std::to_string(i));
  }
  std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);

  RandomCase rc;
  rc.classifier.bias = weight(rng);
  const std::size_t nr = n_rules(rng);
  for (std::size_t r = 0; r < nr; ++r) {
    std::vector<std::string> fs;
    const std::size_t len = std::min(rule_len(rng), universe.size());
    while (fs.size() < len) {
      const auto& f = universe[pick(rng)];
      if (std::find(fs.begin(), fs.end(), f) == fs.end()) fs.push_back(f);
    }
    rc.classifier.rules.push_back(rule("r" + std::to_string(r), fs, weight(rng)));
  }
  static const double ratio_values[] = {0.01, 0.03, 0.2, 0.7, 1.0};
  std::uniform_int_distribution<std::size_t> ratio_pick(0, 4);
  for (std::size_t m = 0; m < maps; ++m) {
    FeatureValueMap fm;
    for (const auto& f : universe) {
      if (!coin(rng)) continue;
      fm[f] = is_frequency_feature(f) ? ratio_values[ratio_pick(rng)] : 1.0;
    }
    rc.maps.push_back(std::move(fm));
  }
  return rc;
}

}  // namespace phishlab::testing
