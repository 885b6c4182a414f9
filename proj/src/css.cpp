#include "phishlab/css.hpp"

#include <algorithm>

#include "phishlab/text.hpp"

namespace phishlab::css {
namespace {

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : text::trim(s)) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string strip_comments(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "/*") == 0) {
      const auto end = s.find("*/", i + 2);
      if (end == std::string_view::npos) break;
      i = end + 2;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '-' || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

Declarations parse_declarations(std::string_view block) {
  Declarations out;
  std::size_t start = 0;
  const std::string cleaned = strip_comments(block);
  std::string_view s = cleaned;
  while (start <= s.size()) {
    auto end = s.find(';', start);
    if (end == std::string_view::npos) end = s.size();
    const std::string_view item = s.substr(start, end - start);
    const auto colon = item.find(':');
    if (colon != std::string_view::npos) {
      std::string property = text::to_lower_ascii(text::trim(item.substr(0, colon)));
      std::string value = collapse_spaces(item.substr(colon + 1));
      if (const auto bang = value.find("!important"); bang != std::string::npos) {
        value = collapse_spaces(std::string_view(value).substr(0, bang));
      }
      if (!property.empty() && !value.empty()) {
        out.push_back({std::move(property), std::move(value)});
      }
    }
    start = end + 1;
  }
  return out;
}

std::string format_declarations(const Declarations& decls) {
  std::string out;
  for (const auto& d : decls) {
    out += d.property;
    out += ':';
    out += d.value;
    out += ';';
  }
  return out;
}

int Selector::specificity() const {
  const int ids = id.empty() ? 0 : 1;
  const int cls = static_cast<int>(classes.size() + attributes.size());
  const int tags = tag.empty() ? 0 : 1;
  return ids * 10000 + cls * 100 + tags;
}

bool Selector::references_attribute(std::string_view name) const {
  if (name == "class" && !classes.empty()) return true;
  if (name == "id" && !id.empty()) return true;
  return std::any_of(attributes.begin(), attributes.end(),
                     [&](const AttributeSelector& a) { return a.name == name; });
}

std::optional<Selector> parse_selector(std::string_view raw) {
  const std::string_view s = text::trim(raw);
  if (s.empty()) return std::nullopt;
  Selector sel;
  std::size_t i = 0;
  auto read_ident = [&]() {
    const std::size_t b = i;
    while (i < s.size() && is_ident_char(s[i])) ++i;
    return std::string(s.substr(b, i - b));
  };
  if (s[i] == '*') {
    ++i;
  } else if (is_ident_char(s[i])) {
    sel.tag = text::to_lower_ascii(read_ident());
  }
  while (i < s.size()) {
    const char c = s[i];
    if (c == '.') {
      ++i;
      auto cls = read_ident();
      if (cls.empty()) return std::nullopt;
      sel.classes.push_back(std::move(cls));
    } else if (c == '#') {
      ++i;
      sel.id = read_ident();
      if (sel.id.empty()) return std::nullopt;
    } else if (c == '[') {
      const auto close = s.find(']', i);
      if (close == std::string_view::npos) return std::nullopt;
      const std::string_view inner = text::trim(s.substr(i + 1, close - i - 1));
      i = close + 1;
      AttributeSelector attr;
      const auto eq = inner.find('=');
      if (eq == std::string_view::npos) {
        attr.name = text::to_lower_ascii(text::trim(inner));
      } else {
        std::string_view name = text::trim(inner.substr(0, eq));
        // Operators such as ~= or ^= are out of scope.
        if (!name.empty() && !is_ident_char(name.back())) return std::nullopt;
        std::string_view value = text::trim(inner.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
            value.back() == value.front()) {
          value = value.substr(1, value.size() - 2);
        }
        attr.name = text::to_lower_ascii(name);
        attr.value = std::string(value);
      }
      if (attr.name.empty()) return std::nullopt;
      sel.attributes.push_back(std::move(attr));
    } else {
      // combinators, pseudo-classes, anything else
      return std::nullopt;
    }
  }
  return sel;
}

bool matches(const Selector& sel, const DomNode& element) {
  if (!element.is_element()) return false;
  if (!sel.tag.empty() && sel.tag != element.tag) return false;
  if (!sel.id.empty()) {
    const auto* id = element.attr("id");
    if (!id || *id != sel.id) return false;
  }
  if (!sel.classes.empty()) {
    const auto* cls = element.attr("class");
    if (!cls) return false;
    const auto have = text::split_terms(*cls);
    for (const auto& want : sel.classes) {
      if (std::find(have.begin(), have.end(), want) == have.end()) return false;
    }
  }
  for (const auto& a : sel.attributes) {
    const auto* v = element.attr(a.name);
    if (!v) return false;
    if (a.value && *v != *a.value) return false;
  }
  return true;
}

StyleSheet parse_stylesheet(std::string_view css_text) {
  StyleSheet sheet;
  const std::string cleaned = strip_comments(css_text);
  std::string_view s = cleaned;
  std::size_t i = 0;
  std::size_t order = 0;
  while (i < s.size()) {
    const auto open = s.find('{', i);
    if (open == std::string_view::npos) break;
    const std::string_view prelude = text::trim(s.substr(i, open - i));
    // find the matching close brace, tracking nesting for @-blocks
    std::size_t depth = 1;
    std::size_t j = open + 1;
    while (j < s.size() && depth > 0) {
      if (s[j] == '{') ++depth;
      if (s[j] == '}') --depth;
      ++j;
    }
    const std::size_t body_end = depth == 0 ? j - 1 : s.size();
    const std::string_view body = s.substr(open + 1, body_end - open - 1);
    i = j;
    if (!prelude.empty() && prelude.front() == '@') {
      // @media and friends are skipped wholesale; statements like @import
      // that end in ';' may precede the prelude.
      continue;
    }
    std::string_view pre = prelude;
    if (const auto semi = pre.rfind(';'); semi != std::string_view::npos) {
      pre = text::trim(pre.substr(semi + 1));
    }
    const auto decls = parse_declarations(body);
    std::size_t start = 0;
    while (start <= pre.size()) {
      auto comma = pre.find(',', start);
      if (comma == std::string_view::npos) comma = pre.size();
      if (auto sel = parse_selector(pre.substr(start, comma - start))) {
        sheet.rules.push_back({std::move(*sel), decls, order++});
      }
      start = comma + 1;
    }
  }
  return sheet;
}

StyleSheet collect_stylesheet(const DomTree& tree) {
  std::string all;
  for_each_element(tree.root, [&](const DomNode& el, const NodePath&) {
    if (el.tag != "style") return;
    for (const auto& c : el.children) {
      if (c.is_text()) {
        all += c.value;
        all += '\n';
      }
    }
  });
  return parse_stylesheet(all);
}

std::map<std::string, std::string> effective_style(const StyleSheet& sheet,
                                                   const DomNode& element) {
  std::vector<const Rule*> matching;
  for (const auto& r : sheet.rules) {
    if (matches(r.selector, element)) matching.push_back(&r);
  }
  std::stable_sort(matching.begin(), matching.end(), [](const Rule* a, const Rule* b) {
    const int sa = a->selector.specificity();
    const int sb = b->selector.specificity();
    return sa != sb ? sa < sb : a->order < b->order;
  });
  std::map<std::string, std::string> out;
  for (const Rule* r : matching) {
    for (const auto& d : r->declarations) out[d.property] = d.value;
  }
  if (const auto* inline_style = element.attr("style")) {
    for (const auto& d : parse_declarations(*inline_style)) out[d.property] = d.value;
  }
  return out;
}

}  // namespace phishlab::css
