#include "phishlab/dom.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <optional>
#include <string>

#include "phishlab/css.hpp"
#include "phishlab/error.hpp"
#include "phishlab/text.hpp"

namespace phishlab {

DomNode DomNode::element(std::string tag) {
  DomNode n;
  n.type = NodeType::element;
  n.tag = std::move(tag);
  return n;
}

DomNode DomNode::text(std::string value) {
  DomNode n;
  n.type = NodeType::text;
  n.value = std::move(value);
  return n;
}

DomNode DomNode::comment(std::string value) {
  DomNode n;
  n.type = NodeType::comment;
  n.value = std::move(value);
  return n;
}

DomNode DomNode::attribute(std::string name, std::string value) {
  DomNode n;
  n.type = NodeType::attribute;
  n.name = std::move(name);
  n.value = std::move(value);
  return n;
}

const std::string* DomNode::attr(std::string_view attr_name) const {
  for (const auto& a : attributes) {
    if (a.name == attr_name) return &a.value;
  }
  return nullptr;
}

void DomNode::set_attr(std::string_view attr_name, std::string attr_value) {
  for (auto& a : attributes) {
    if (a.name == attr_name) {
      a.value = std::move(attr_value);
      return;
    }
  }
  attributes.push_back(attribute(std::string(attr_name), std::move(attr_value)));
}

bool DomNode::remove_attr(std::string_view attr_name) {
  const auto it = std::find_if(attributes.begin(), attributes.end(),
                               [&](const DomNode& a) { return a.name == attr_name; });
  if (it == attributes.end()) return false;
  attributes.erase(it);
  return true;
}

namespace {

bool contains(std::initializer_list<std::string_view> set, std::string_view tag) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}

bool is_raw_text(std::string_view tag) { return tag == "script" || tag == "style"; }
bool is_rcdata(std::string_view tag) { return tag == "title" || tag == "textarea"; }

bool closes_paragraph(std::string_view tag) {
  return contains({"address", "article", "aside", "blockquote", "center", "details", "dialog",
                   "dir", "div", "dl", "dd", "dt", "fieldset", "figcaption", "figure", "footer",
                   "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hgroup", "hr", "li",
                   "main", "menu", "nav", "ol", "p", "pre", "section", "table", "ul"},
                  tag);
}

bool is_scope_boundary(std::string_view tag) {
  return contains({"html", "table", "td", "th", "caption", "marquee", "object", "applet",
                   "template", "button"},
                  tag);
}

struct NamedEntity {
  std::string_view name;
  char32_t cp;
  bool legacy;  // accepted without the trailing ';'
};

constexpr std::array<NamedEntity, 35> kEntities{{
    {"amp", U'&', true},       {"lt", U'<', true},        {"gt", U'>', true},
    {"quot", U'"', true},      {"apos", U'\'', false},    {"nbsp", 0xA0, true},
    {"copy", 0xA9, true},      {"reg", 0xAE, true},       {"trade", 0x2122, false},
    {"hellip", 0x2026, false}, {"mdash", 0x2014, false},  {"ndash", 0x2013, false},
    {"lsquo", 0x2018, false},  {"rsquo", 0x2019, false},  {"ldquo", 0x201C, false},
    {"rdquo", 0x201D, false},  {"laquo", 0xAB, true},     {"raquo", 0xBB, true},
    {"bull", 0x2022, false},   {"middot", 0xB7, true},    {"euro", 0x20AC, false},
    {"pound", 0xA3, true},     {"yen", 0xA5, true},       {"cent", 0xA2, true},
    {"sect", 0xA7, true},      {"deg", 0xB0, true},       {"times", 0xD7, true},
    {"divide", 0xF7, true},    {"zwnj", 0x200C, false},   {"zwj", 0x200D, false},
    {"ZeroWidthSpace", 0x200B, false}, {"shy", 0xAD, true}, {"iexcl", 0xA1, true},
    {"para", 0xB6, true},      {"larr", 0x2190, false},
}};

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_hex(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

/// Decodes character references. Unknown names are left as literal text.
std::string decode_entities(std::string_view s, bool in_attribute) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    if (i + 1 < s.size() && s[i + 1] == '#') {
      std::size_t j = i + 2;
      const bool hex = j < s.size() && (s[j] == 'x' || s[j] == 'X');
      if (hex) ++j;
      const std::size_t digits_start = j;
      while (j < s.size() && (hex ? is_hex(s[j]) : (s[j] >= '0' && s[j] <= '9'))) ++j;
      if (j == digits_start) {
        out.push_back(s[i++]);
        continue;
      }
      const std::string digits(s.substr(digits_start, std::min<std::size_t>(j - digits_start, 8)));
      unsigned long cp = std::strtoul(digits.c_str(), nullptr, hex ? 16 : 10);
      if (j - digits_start > 8) cp = 0x110000;
      if (j < s.size() && s[j] == ';') ++j;
      if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
      text::append_utf8(out, static_cast<char32_t>(cp));
      i = j;
      continue;
    }
    std::size_t j = i + 1;
    while (j < s.size() && is_alnum(s[j])) ++j;
    const std::string_view name = s.substr(i + 1, j - i - 1);
    const bool semicolon = j < s.size() && s[j] == ';';
    const NamedEntity* found = nullptr;
    for (const auto& e : kEntities) {
      if (e.name == name) {
        found = &e;
        break;
      }
    }
    if (found && (semicolon || found->legacy)) {
      if (!semicolon && in_attribute && j < s.size() && (is_alnum(s[j]) || s[j] == '=')) {
        out.push_back(s[i++]);
        continue;
      }
      text::append_utf8(out, found->cp);
      i = semicolon ? j + 1 : j;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

bool is_html_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\r';
}

bool is_tag_name_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

class Parser {
 public:
  explicit Parser(std::string_view input) : s_(input) {
    stack_.push_back(&root_);
    root_ = DomNode::element("html");
  }

  DomNode run() {
    stack_.assign(1, &root_);
    std::size_t text_start = 0;
    while (pos_ < s_.size()) {
      if (s_[pos_] != '<') {
        ++pos_;
        continue;
      }
      const std::size_t lt = pos_;
      if (!markup_ahead()) {
        ++pos_;
        continue;
      }
      add_text(s_.substr(text_start, lt - text_start));
      consume_markup();
      text_start = pos_;
    }
    add_text(s_.substr(text_start));
    return std::move(root_);
  }

 private:
  bool markup_ahead() const {
    if (pos_ + 1 >= s_.size()) return false;
    const char c = s_[pos_ + 1];
    if (is_tag_name_start(c) || c == '!' || c == '?') return true;
    return c == '/' && pos_ + 2 < s_.size() && (is_tag_name_start(s_[pos_ + 2]) || s_[pos_ + 2] == '>');
  }

  DomNode& current() { return *stack_.back(); }

  bool in_preformatted() const {
    return std::any_of(stack_.begin(), stack_.end(), [](const DomNode* n) {
      return n->tag == "pre" || n->tag == "textarea" || n->tag == "listing";
    });
  }

  void append_text_node(std::string value) {
    if (value.empty()) return;
    auto& children = current().children;
    if (!children.empty() && children.back().is_text()) {
      children.back().value += value;
    } else {
      children.push_back(DomNode::text(std::move(value)));
    }
  }

  void add_text(std::string_view raw) {
    if (raw.empty()) return;
    if (text::is_blank(raw) && !in_preformatted()) return;
    append_text_node(decode_entities(raw, false));
  }

  void consume_markup() {
    const char c = s_[pos_ + 1];
    if (c == '!') {
      if (s_.compare(pos_, 4, "<!--") == 0) {
        const auto end = s_.find("-->", pos_ + 4);
        const std::size_t stop = end == std::string_view::npos ? s_.size() : end;
        current().children.push_back(DomNode::comment(std::string(s_.substr(pos_ + 4, stop - pos_ - 4))));
        pos_ = end == std::string_view::npos ? s_.size() : end + 3;
        return;
      }
      skip_past('>');  // doctype and other declarations
      return;
    }
    if (c == '?') {
      skip_past('>');
      return;
    }
    if (c == '/') {
      consume_end_tag();
      return;
    }
    consume_start_tag();
  }

  void skip_past(char ch) {
    const auto end = s_.find(ch, pos_);
    pos_ = end == std::string_view::npos ? s_.size() : end + 1;
  }

  std::string read_name() {
    const std::size_t b = pos_;
    while (pos_ < s_.size() && !is_html_space(s_[pos_]) && s_[pos_] != '/' && s_[pos_] != '>' &&
           s_[pos_] != '=') {
      ++pos_;
    }
    return text::to_lower_ascii(s_.substr(b, pos_ - b));
  }

  void skip_spaces() {
    while (pos_ < s_.size() && is_html_space(s_[pos_])) ++pos_;
  }

  void consume_end_tag() {
    pos_ += 2;
    const std::string name = read_name();
    skip_past('>');
    if (name.empty() || name == "html") return;
    if (name == "body") {
      // Content after </body> stays inside body in browsers; be as lenient.
      return;
    }
    if (name == "head") {
      close_element("head", std::nullopt);
      return;
    }
    close_element(name, std::nullopt);
  }

  /// Pops up to and including the nearest open `tag`, stopping at `boundary`.
  bool close_element(std::string_view tag, std::optional<bool (*)(std::string_view)> boundary) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& t = stack_[i]->tag;
      if (t == tag) {
        stack_.resize(i);
        return true;
      }
      if (boundary && (*boundary)(t)) return false;
    }
    return false;
  }

  void close_any(std::initializer_list<std::string_view> tags, bool (*boundary)(std::string_view)) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& t = stack_[i]->tag;
      if (contains(tags, t)) {
        stack_.resize(i);
        return;
      }
      if (boundary(t)) return;
    }
  }

  void apply_implicit_closes(std::string_view tag) {
    if (closes_paragraph(tag)) close_element("p", &is_scope_boundary);
    if (tag == "li") {
      close_any({"li"}, [](std::string_view t) { return t == "ul" || t == "ol" || is_scope_boundary(t); });
    } else if (tag == "dt" || tag == "dd") {
      close_any({"dt", "dd"}, [](std::string_view t) { return t == "dl" || is_scope_boundary(t); });
    } else if (tag == "option") {
      if (current().tag == "option") stack_.pop_back();
    } else if (tag == "optgroup") {
      if (current().tag == "option") stack_.pop_back();
      if (current().tag == "optgroup") stack_.pop_back();
    } else if (tag == "tr") {
      close_any({"tr"}, [](std::string_view t) {
        return t == "table" || t == "tbody" || t == "thead" || t == "tfoot";
      });
    } else if (tag == "td" || tag == "th") {
      close_any({"td", "th"}, [](std::string_view t) { return t == "tr" || t == "table"; });
    } else if (tag == "tbody" || tag == "thead" || tag == "tfoot") {
      close_any({"tbody", "thead", "tfoot"}, [](std::string_view t) { return t == "table"; });
    }
  }

  void consume_start_tag() {
    ++pos_;
    const std::string tag = read_name();
    DomNode el = DomNode::element(tag);
    bool self_closing = false;
    while (pos_ < s_.size()) {
      skip_spaces();
      if (pos_ >= s_.size()) break;
      if (s_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (s_[pos_] == '/') {
        ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '>') {
          self_closing = true;
          ++pos_;
          break;
        }
        continue;
      }
      std::string name = read_name();
      if (name.empty()) {
        // a stray '=' with no name in front of it
        ++pos_;
        continue;
      }
      skip_spaces();
      std::string value;
      if (pos_ < s_.size() && s_[pos_] == '=') {
        ++pos_;
        skip_spaces();
        value = read_attribute_value();
      }
      if (!el.has_attr(name)) {
        el.attributes.push_back(DomNode::attribute(std::move(name), std::move(value)));
      }
    }

    if (tag == "html") {
      for (auto& a : el.attributes) {
        if (!root_.has_attr(a.name)) root_.attributes.push_back(std::move(a));
      }
      return;
    }
    if (tag == "body" && seen_body_) return;
    if (tag == "body") {
      seen_body_ = true;
      close_element("head", std::nullopt);
    }

    apply_implicit_closes(tag);
    auto& children = current().children;
    children.push_back(std::move(el));
    DomNode* node = &children.back();

    if (is_void_element(tag) || self_closing) return;
    if (is_raw_text(tag) || is_rcdata(tag)) {
      const std::size_t body_start = pos_;
      const std::size_t end = find_end_tag(tag);
      std::string_view body = s_.substr(body_start, end - body_start);
      if (!body.empty()) {
        node->children.push_back(
            DomNode::text(is_rcdata(tag) ? decode_entities(body, false) : std::string(body)));
      }
      pos_ = end;
      if (pos_ < s_.size()) skip_past('>');
      return;
    }
    stack_.push_back(node);
  }

  std::string read_attribute_value() {
    if (pos_ >= s_.size()) return {};
    const char q = s_[pos_];
    if (q == '"' || q == '\'') {
      const auto end = s_.find(q, pos_ + 1);
      const std::size_t stop = end == std::string_view::npos ? s_.size() : end;
      std::string v = decode_entities(s_.substr(pos_ + 1, stop - pos_ - 1), true);
      pos_ = end == std::string_view::npos ? s_.size() : end + 1;
      return v;
    }
    const std::size_t b = pos_;
    while (pos_ < s_.size() && !is_html_space(s_[pos_]) && s_[pos_] != '>') ++pos_;
    return decode_entities(s_.substr(b, pos_ - b), true);
  }

  /// Offset of "</tag" (case-insensitive) or end of input.
  std::size_t find_end_tag(std::string_view tag) const {
    std::size_t p = pos_;
    while ((p = s_.find("</", p)) != std::string_view::npos) {
      const std::size_t after = p + 2 + tag.size();
      if (after <= s_.size() && text::iequals(s_.substr(p + 2, tag.size()), tag) &&
          (after == s_.size() || is_html_space(s_[after]) || s_[after] == '>' || s_[after] == '/')) {
        return p;
      }
      p += 2;
    }
    return s_.size();
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  DomNode root_;
  std::vector<DomNode*> stack_;
  bool seen_body_ = false;
};

std::string normalize_input(std::string_view html) {
  if (html.size() >= 3 && html.compare(0, 3, "\xEF\xBB\xBF") == 0) html.remove_prefix(3);
  std::string out;
  out.reserve(html.size());
  for (std::size_t i = 0; i < html.size(); ++i) {
    if (html[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < html.size() && html[i + 1] == '\n') ++i;
    } else {
      out.push_back(html[i]);
    }
  }
  return out;
}

void escape_attribute(std::string& out, std::string_view v) {
  for (char c : v) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
}

void escape_text(std::string& out, std::string_view v) {
  for (std::size_t pos = 0; pos < v.size();) {
    const std::size_t start = pos;
    const char32_t cp = text::next_code_point(v, pos);
    switch (cp) {
      case U'&': out += "&amp;"; break;
      case U'<': out += "&lt;"; break;
      case U'>': out += "&gt;"; break;
      default:
        if (text::is_zero_width(cp)) {
          out += "&#" + std::to_string(static_cast<unsigned long>(cp)) + ";";
        } else {
          out.append(v.substr(start, pos - start));
        }
    }
  }
}

void serialize_node(std::string& out, const DomNode& node, bool raw_parent) {
  switch (node.type) {
    case NodeType::text:
      if (raw_parent) {
        out += node.value;
      } else {
        escape_text(out, node.value);
      }
      return;
    case NodeType::comment:
      out += "<!--";
      out += node.value;
      out += "-->";
      return;
    case NodeType::attribute:
      return;
    case NodeType::element:
      break;
  }
  out += '<';
  out += node.tag;
  for (const auto& a : node.attributes) {
    out += ' ';
    out += a.name;
    out += "=\"";
    escape_attribute(out, a.value);
    out += '"';
  }
  out += '>';
  if (is_void_element(node.tag)) return;
  const bool raw = is_raw_text(node.tag);
  for (const auto& c : node.children) serialize_node(out, c, raw);
  out += "</";
  out += node.tag;
  out += '>';
}

bool is_projection_excluded(std::string_view tag) {
  return contains({"head", "script", "style", "template", "title", "meta", "link", "noscript",
                   "base"},
                  tag);
}

bool is_zero_length(std::string_view v) {
  const std::string s(text::trim(v));
  if (s.empty()) return false;
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) return false;
  return d == 0.0;
}

void project(const DomNode& node, const css::StyleSheet& sheet, VisibleProjection& out) {
  if (!node.is_element()) return;
  if (is_projection_excluded(node.tag) || hides_subtree(node)) return;
  VisibleItem item;
  item.tag = node.tag;
  for (const auto& c : node.children) {
    if (c.is_text()) item.text += text::strip_zero_width(c.value);
  }
  static constexpr std::array<std::string_view, 7> kAppearance{
      "class", "align", "background", "src", "width", "height", "color"};
  for (const auto& a : node.attributes) {
    if (std::find(kAppearance.begin(), kAppearance.end(), a.name) != kAppearance.end()) {
      item.appearance[a.name] = a.value;
    }
  }
  const auto style = css::effective_style(sheet, node);
  if (!style.empty()) {
    std::string formatted;
    for (const auto& [k, v] : style) formatted += k + ":" + v + ";";
    item.appearance["style"] = std::move(formatted);
  }
  out.items.push_back(std::move(item));
  for (const auto& c : node.children) project(c, sheet, out);
}

}  // namespace

bool is_void_element(std::string_view tag) {
  return contains({"area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta",
                   "param", "source", "track", "wbr"},
                  tag);
}

DomTree parse_html(std::string_view html, std::string url) {
  if (const auto bad = text::find_invalid_utf8(html)) {
    throw ParseError("invalid UTF-8 at byte " + std::to_string(*bad));
  }
  const std::string normalized = normalize_input(html);
  Parser parser(normalized);
  return DomTree{parser.run(), std::move(url)};
}

std::string serialize(const DomTree& tree) {
  std::string out = "<!DOCTYPE html>\n";
  serialize_node(out, tree.root, false);
  out += '\n';
  return out;
}

std::vector<std::vector<const DomNode*>> bfs_layers(const DomTree& tree) {
  std::vector<std::vector<const DomNode*>> layers;
  std::vector<const DomNode*> layer{&tree.root};
  while (!layer.empty()) {
    std::vector<const DomNode*> next;
    for (const DomNode* n : layer) {
      for (const auto& c : n->children) {
        if (c.is_element()) next.push_back(&c);
      }
    }
    layers.push_back(std::move(layer));
    layer = std::move(next);
  }
  return layers;
}

std::size_t element_count(const DomTree& tree) {
  std::size_t n = 0;
  for_each_element(tree.root, [&](const DomNode&, const NodePath&) { ++n; });
  return n;
}

const DomNode* resolve(const DomNode& root, const NodePath& path) {
  const DomNode* n = &root;
  for (std::size_t i : path) {
    if (i >= n->children.size()) return nullptr;
    n = &n->children[i];
  }
  return n;
}

DomNode* resolve(DomNode& root, const NodePath& path) {
  return const_cast<DomNode*>(resolve(static_cast<const DomNode&>(root), path));
}

NodePath body_path(const DomTree& tree) {
  NodePath found;
  bool done = false;
  for_each_element(tree.root, [&](const DomNode& el, const NodePath& path) {
    if (!done && el.tag == "body") {
      found = path;
      done = true;
    }
  });
  return found;
}

bool hides_subtree(const DomNode& element) {
  const auto* style = element.attr("style");
  if (!style) return false;
  bool zero_width = false;
  bool zero_height = false;
  for (const auto& d : css::parse_declarations(*style)) {
    const std::string v = text::to_lower_ascii(d.value);
    if (d.property == "display" && v == "none") return true;
    if (d.property == "visibility" && v == "hidden") return true;
    if (d.property == "width") zero_width = is_zero_length(v);
    if (d.property == "height") zero_height = is_zero_length(v);
  }
  return zero_width && zero_height;
}

VisibleProjection visible_projection(const DomTree& tree) {
  const auto sheet = css::collect_stylesheet(tree);
  VisibleProjection out;
  project(tree.root, sheet, out);
  return out;
}

}  // namespace phishlab
