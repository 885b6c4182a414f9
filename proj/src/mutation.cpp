#include "phishlab/mutation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "phishlab/classifier.hpp"
#include "phishlab/css.hpp"
#include "phishlab/error.hpp"
#include "phishlab/text.hpp"
#include "phishlab/url.hpp"

namespace phishlab {

using json = nlohmann::ordered_json;

namespace {

struct MatrixRow {
  std::string_view tag;
  std::string_view event;
  std::vector<std::string_view> attrs;
};

// Function-related attributes whose removal changes nothing on screen, and
// the event used to put them back.
const std::array<MatrixRow, 5> kMatrix{{
    {"button", "onclick",
     {"form", "formaction", "formenctype", "formmethod", "formnovalidate", "formtarget", "name",
      "type", "value"}},
    {"input", "onfocus",
     {"accept", "submit", "text", "type", "step", "size", "required", "name", "placeholder", "min",
      "max", "formtarget", "formnovalidate", "formmethod", "formenctype", "formaction", "form"}},
    {"form", "oninput", {"action", "enctype", "method", "name", "novalidate", "target"}},
    {"a", "onclick", {"download", "href", "hreflang", "media", "rel", "target", "type"}},
    {"table", "onmousemove", {"summary"}},
}};

const MatrixRow* matrix_row(std::string_view tag) {
  for (const auto& row : kMatrix) {
    if (row.tag == tag) return &row;
  }
  return nullptr;
}

// Input types whose look a plain text box with a style attribute reproduces.
// reset/button/password come with the matrix; text and submit are the
// browser defaults for the same box and button.
bool input_type_modifiable(std::string_view value) {
  const std::string v = text::to_lower_ascii(text::trim(value));
  return v == "reset" || v == "button" || v == "password" || v == "text" || v == "submit";
}

std::string js_single_quote_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

DomNode& element_at(DomTree& tree, const NodePath& path) {
  DomNode* node = resolve(tree.root, path);
  if (!node || !node->is_element()) throw PathError("no element at " + path_string(path));
  return *node;
}

const DomNode& element_at(const DomTree& tree, const NodePath& path) {
  const DomNode* node = resolve(tree.root, path);
  if (!node || !node->is_element()) throw PathError("no element at " + path_string(path));
  return *node;
}

void apply_modify_attribute(DomTree& tree, const NodeOp& op) {
  const auto sheet = css::collect_stylesheet(tree);
  DomNode& el = element_at(tree, op.target);
  const std::string* current = el.attr(op.attr);
  if (!current) throw PathError("no attribute '" + op.attr + "' at " + path_string(op.target));
  const std::string value = *current;
  const std::string_view event = handler_event(el.tag);
  if (event.empty()) throw Unsupported("no handler event for <" + el.tag + ">");

  // Properties the stylesheet attaches through selectors on the attribute
  // would be lost with it, so they move inline with their cascaded values.
  std::vector<std::string> props;
  for (const auto& rule : sheet.rules) {
    if (!rule.selector.references_attribute(op.attr) || !css::matches(rule.selector, el)) continue;
    for (const auto& d : rule.declarations) {
      if (std::find(props.begin(), props.end(), d.property) == props.end()) {
        props.push_back(d.property);
      }
    }
  }
  if (!props.empty()) {
    const auto effective = css::effective_style(sheet, el);
    css::Declarations inline_decls;
    if (const auto* style = el.attr("style")) inline_decls = css::parse_declarations(*style);
    css::Declarations merged;
    for (const auto& p : props) {
      const bool inline_has = std::any_of(inline_decls.begin(), inline_decls.end(),
                                          [&](const css::Declaration& d) { return d.property == p; });
      if (!inline_has) merged.push_back({p, effective.at(p)});
    }
    merged.insert(merged.end(), inline_decls.begin(), inline_decls.end());
    el.set_attr("style", css::format_declarations(merged));
  }

  el.remove_attr(op.attr);
  std::string code = "this." + op.attr + "='" + js_single_quote_escape(value) + "';";
  if (const auto* existing = el.attr(event)) code += *existing;
  el.set_attr(event, std::move(code));
}

void apply_modify_text(DomTree& tree, const NodeOp& op) {
  DomNode* node = resolve(tree.root, op.target);
  if (!node || !node->is_text()) throw PathError("no text node at " + path_string(op.target));
  for (const auto& token : text::tokenize(node->value)) {
    if (token.text != op.term) continue;
    const std::size_t at = token.offset + text::byte_offset_of(op.term, op.split_at);
    node->value.insert(at, "\xE2\x80\x8B");
    return;
  }
  throw TermNotFound("term '" + op.term + "' not in text node at " + path_string(op.target));
}

void apply_add(DomTree& tree, const NodeOp& op) {
  DomNode& parent = element_at(tree, op.target);
  DomNode el = DomNode::element(text::to_lower_ascii(op.spec.tag));
  for (const auto& [k, v] : op.spec.attrs) {
    if (k != "style") el.set_attr(text::to_lower_ascii(k), v);
  }
  el.set_attr("style", "display:none");
  if (!op.spec.text.empty() && !is_void_element(el.tag)) {
    el.children.push_back(DomNode::text(op.spec.text));
  }
  parent.children.push_back(std::move(el));
}

struct PageCounts {
  std::size_t links = 0, external_links = 0, secure_links = 0;
  std::size_t actions = 0, external_actions = 0;
  std::size_t imgs = 0, external_imgs = 0;
  std::size_t scripts = 0;
  bool has_form = false;
};

PageCounts count_page(const DomTree& tree, const std::optional<Url>& page) {
  PageCounts c;
  for_each_element(tree.root, [&](const DomNode& el, const NodePath&) {
    if (el.tag == "a") {
      if (const auto* href = el.attr("href")) {
        ++c.links;
        const auto t = classify_link(*href, page);
        if (t.scheme == "https") ++c.secure_links;
        if (is_external(t, page)) ++c.external_links;
      }
    } else if (el.tag == "form") {
      c.has_form = true;
      if (const auto* action = el.attr("action")) {
        ++c.actions;
        if (is_external(classify_link(*action, page), page)) ++c.external_actions;
      }
    } else if (el.tag == "img") {
      ++c.imgs;
      if (const auto* src = el.attr("src")) {
        if (is_external(classify_link(*src, page), page)) ++c.external_imgs;
      }
    } else if (el.tag == "script") {
      ++c.scripts;
    }
  });
  return c;
}

bool ratio_detected(std::size_t num, std::size_t den, double thr) {
  if (den == 0 || num == 0) return false;
  return static_cast<double>(num) / static_cast<double>(den) >= thr;
}

/// Smallest n with num / (den + n) below thr.
std::size_t dilution_count(std::size_t num, std::size_t den, double thr) {
  const double bound = static_cast<double>(num) / thr - static_cast<double>(den);
  std::size_t n = bound < 0 ? 0 : static_cast<std::size_t>(std::floor(bound)) + 1;
  while (ratio_detected(num, den + n, thr)) ++n;
  while (n > 0 && !ratio_detected(num, den + n - 1, thr)) --n;
  return n;
}

/// Smallest k with (num + k) / (den + k) at or above thr.
std::optional<std::size_t> saturation_count(std::size_t num, std::size_t den, double thr) {
  if (thr >= 1.0 && num < den) return std::nullopt;
  const double bound = (thr * static_cast<double>(den) - static_cast<double>(num)) / (1.0 - thr);
  std::size_t k = bound <= 0 ? 0 : static_cast<std::size_t>(std::ceil(bound));
  while (!ratio_detected(num + k, den + k, thr)) ++k;
  while (k > 0 && ratio_detected(num + k - 1, den + k - 1, thr)) --k;
  return k;
}

std::string filler_domain(const std::optional<Url>& page) {
  if (page && registrable_domain(page->host) == "example.net") return "example.org";
  return "example.net";
}

NodeOp make_add(const NodePath& parent, ElementSpec spec, std::string provenance) {
  NodeOp op;
  op.kind = OpKind::add_invisible_element;
  op.target = parent;
  op.spec = std::move(spec);
  op.provenance = std::move(provenance);
  return op;
}

bool is_single_term(std::string_view payload) {
  const auto tokens = text::tokenize(payload);
  return tokens.size() == 1 && tokens.front().text == payload;
}

}  // namespace

std::string_view op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::modify_attribute: return "modify_attribute";
    case OpKind::modify_text: return "modify_text";
    case OpKind::add_invisible_element: return "add_invisible_element";
  }
  return "?";
}

std::string path_string(const NodePath& path) {
  std::string out;
  for (std::size_t i : path) out += "/" + std::to_string(i);
  return out.empty() ? "/" : out;
}

std::string NodeOp::describe() const {
  std::string out(op_kind_name(kind));
  switch (kind) {
    case OpKind::modify_attribute:
      out += " @" + attr + " at " + path_string(target);
      break;
    case OpKind::modify_text:
      out += " '" + term + "' at " + path_string(target);
      break;
    case OpKind::add_invisible_element:
      out += " <" + spec.tag;
      for (const auto& [k, v] : spec.attrs) out += " " + k + "=\"" + v + "\"";
      out += ">";
      if (!spec.text.empty()) out += spec.text;
      break;
  }
  return out;
}

std::string_view handler_event(std::string_view tag) {
  const auto* row = matrix_row(tag);
  return row ? row->event : std::string_view{};
}

bool is_modifiable(std::string_view tag, std::string_view attr, std::string_view value) {
  const auto* row = matrix_row(tag);
  if (!row) return false;
  if (std::find(row->attrs.begin(), row->attrs.end(), attr) == row->attrs.end()) return false;
  if (tag == "input" && attr == "type") return input_type_modifiable(value);
  return true;
}

std::vector<std::pair<NodePath, std::string>> modifiable_attributes(const DomTree& tree) {
  std::vector<std::pair<NodePath, std::string>> out;
  for_each_element(tree.root, [&](const DomNode& el, const NodePath& path) {
    for (const auto& a : el.attributes) {
      if (is_modifiable(el.tag, a.name, a.value)) out.emplace_back(path, a.name);
    }
  });
  return out;
}

NodeOp modify_attribute(const DomTree& tree, const NodePath& element, std::string_view attr) {
  const DomNode& el = element_at(tree, element);
  const auto* value = el.attr(attr);
  if (!value) {
    throw PathError("no attribute '" + std::string(attr) + "' at " + path_string(element));
  }
  if (!is_modifiable(el.tag, attr, *value)) {
    throw Unsupported("<" + el.tag + " " + std::string(attr) + "=\"" + *value +
                      "\"> cannot move into an event handler");
  }
  NodeOp op;
  op.kind = OpKind::modify_attribute;
  op.target = element;
  op.attr = std::string(attr);
  return op;
}

NodeOp modify_text(const DomTree& tree, const NodePath& text_node, std::string_view term,
                   const FragmentGuard& guard) {
  const DomNode* node = resolve(tree.root, text_node);
  if (!node || !node->is_text()) throw PathError("no text node at " + path_string(text_node));
  const auto tokens = text::tokenize(node->value);
  if (std::none_of(tokens.begin(), tokens.end(), [&](const text::Token& t) { return t.text == term; })) {
    throw TermNotFound("term '" + std::string(term) + "' not in text node at " + path_string(text_node));
  }
  const std::size_t n = text::code_point_count(term);
  if (n < 2) throw Unsupported("term '" + std::string(term) + "' is too short to split");

  const long mid = static_cast<long>((n + 1) / 2);
  std::vector<std::size_t> positions;
  for (long step = 0; positions.size() < n - 1; ++step) {
    for (long k : {mid + step, mid - step}) {
      if (k >= 1 && k <= static_cast<long>(n) - 1 &&
          std::find(positions.begin(), positions.end(), static_cast<std::size_t>(k)) == positions.end()) {
        positions.push_back(static_cast<std::size_t>(k));
      }
    }
  }
  for (std::size_t k : positions) {
    const std::size_t cut = text::byte_offset_of(term, k);
    if (guard && (guard(term.substr(0, cut)) || guard(term.substr(cut)))) continue;
    NodeOp op;
    op.kind = OpKind::modify_text;
    op.target = text_node;
    op.term = std::string(term);
    op.split_at = k;
    return op;
  }
  throw Unsupported("every split of '" + std::string(term) + "' leaves a harmful fragment");
}

NodeOp add_invisible_element(const DomTree& tree, ElementSpec spec) {
  static constexpr std::array<std::string_view, 5> kNotUnderBody{"html", "head", "body", "frameset",
                                                                 "frame"};
  const std::string tag = text::to_lower_ascii(spec.tag);
  if (tag.empty() || std::find(kNotUnderBody.begin(), kNotUnderBody.end(), tag) != kNotUnderBody.end()) {
    throw Unsupported("<" + spec.tag + "> cannot be added under body");
  }
  spec.tag = tag;
  return make_add(body_path(tree), std::move(spec), {});
}

MutationPlan plan_delete_feature(const DomTree& tree, std::string_view feature,
                                 const PlanOptions& options) {
  const auto parsed = parse_feature(feature);
  if (!parsed) throw Unsupported("unknown feature '" + std::string(feature) + "'");
  if (is_url_kind(parsed->kind)) {
    throw UrlFeatureUnaddable("URL features are never mutated: " + std::string(feature));
  }
  const auto fmap = extract_page_features(tree);
  if (!fmap.count(feature)) throw FeatureAbsent(std::string(feature) + " is not present");
  if (!is_deletable(parsed->kind)) throw Unsupported(std::string(feature) + " cannot be deleted");

  const std::string provenance(feature);
  const auto page = try_parse_url(tree.source_url);
  MutationPlan plan;
  auto add_attribute_ops = [&](auto&& wanted, std::string_view tag, std::string_view attr) {
    for_each_element(tree.root, [&](const DomNode& el, const NodePath& path) {
      if (el.tag != tag) return;
      const auto* v = el.attr(attr);
      if (!v || !wanted(*v)) return;
      NodeOp op = modify_attribute(tree, path, attr);
      op.provenance = provenance;
      plan.ops.push_back(std::move(op));
    });
  };

  switch (parsed->kind) {
    case FeatureKind::PageTerm: {
      const std::string& term = parsed->payload;
      for_each_page_text(tree.root, [&](const DomNode& node, const NodePath& path) {
        for (const auto& token : text::tokenize(node.value)) {
          if (token.text != term) continue;
          NodeOp op = modify_text(tree, path, term, options.guard);
          op.provenance = provenance;
          plan.ops.push_back(std::move(op));
        }
      });
      break;
    }
    case FeatureKind::PageHasTextInputs:
    case FeatureKind::PageHasPswdInputs: {
      const std::string want = parsed->kind == FeatureKind::PageHasTextInputs ? "text" : "password";
      add_attribute_ops(
          [&](const std::string& v) { return text::to_lower_ascii(text::trim(v)) == want; }, "input",
          "type");
      break;
    }
    case FeatureKind::PageActionURL:
      add_attribute_ops([&](const std::string& v) { return text::trim(v) == parsed->payload; },
                        "form", "action");
      break;
    case FeatureKind::PageLinkDomain:
      add_attribute_ops(
          [&](const std::string& v) {
            const auto t = classify_link(v, page);
            return is_external(t, page) && registrable_domain(*t.host) == parsed->payload;
          },
          "a", "href");
      break;
    case FeatureKind::PageExternalLinksFreq:
    case FeatureKind::PageSecureLinksFreq:
    case FeatureKind::PageActionOtherDomainFreq:
    case FeatureKind::PageImgOtherDomainFreq: {
      const double thr = options.freq_detect_threshold;
      if (!(thr > 0)) throw Unsupported("ratio features cannot be diluted below a zero threshold");
      const auto c = count_page(tree, page);
      std::size_t num = 0, den = 0;
      ElementSpec spec;
      switch (parsed->kind) {
        case FeatureKind::PageExternalLinksFreq:
          num = c.external_links, den = c.links, spec = {"a", {{"href", "/"}}, {}};
          break;
        case FeatureKind::PageSecureLinksFreq:
          num = c.secure_links, den = c.links, spec = {"a", {{"href", "/"}}, {}};
          // A relative link inherits https from an https page.
          if (page && page->scheme == "https") spec.attrs[0].second = "http://" + page->host + "/";
          break;
        case FeatureKind::PageActionOtherDomainFreq:
          num = c.external_actions, den = c.actions, spec = {"form", {{"action", "/"}}, {}};
          break;
        default:
          num = c.external_imgs, den = c.imgs, spec = {"img", {{"src", "/images/spacer.gif"}}, {}};
      }
      const std::size_t n = dilution_count(num, den, thr);
      const NodePath parent = body_path(tree);
      for (std::size_t i = 0; i < n; ++i) plan.ops.push_back(make_add(parent, spec, provenance));
      break;
    }
    default:
      throw Unsupported(std::string(feature) + " cannot be deleted");
  }
  return plan;
}

MutationPlan plan_add_rule(const DomTree& tree, const std::vector<std::string>& features,
                           const PlanOptions& options) {
  const double thr = options.freq_detect_threshold;
  const auto fmap = extract_page_features(tree);
  auto detected = [&](const std::string& f) {
    const auto it = fmap.find(f);
    if (it == fmap.end() || it->second == 0.0) return false;
    return !(it->second < thr && is_frequency_feature(f));
  };

  std::vector<Feature> missing;
  std::vector<std::string> url_features;
  for (const auto& f : features) {
    if (detected(f)) continue;
    const auto parsed = parse_feature(f);
    if (!parsed) throw Unsupported("no construction known for feature '" + f + "'");
    if (is_url_kind(parsed->kind)) {
      if (url_features.empty() && try_parse_url(tree.source_url)) {
        for (const auto& u : extract_url_features(tree.source_url)) url_features.push_back(u.canonical());
      }
      if (std::find(url_features.begin(), url_features.end(), f) != url_features.end()) continue;
      throw UrlFeatureUnaddable("URL features are never mutated: " + f);
    }
    if (std::find(missing.begin(), missing.end(), *parsed) == missing.end()) missing.push_back(*parsed);
  }
  MutationPlan plan;
  if (missing.empty()) return plan;

  const auto page = try_parse_url(tree.source_url);
  PageCounts c = count_page(tree, page);
  const NodePath parent = body_path(tree);
  const std::string filler = filler_domain(page);
  auto has = [&](FeatureKind k) {
    return std::any_of(missing.begin(), missing.end(), [&](const Feature& f) { return f.kind == k; });
  };
  auto add = [&](ElementSpec spec, const Feature& served) {
    plan.ops.push_back(make_add(parent, std::move(spec), served.canonical()));
  };

  std::string terms;
  const Feature* first_term = nullptr;
  for (const auto& f : missing) {
    if (f.kind != FeatureKind::PageTerm) continue;
    if (!is_single_term(f.payload)) throw Unsupported("'" + f.payload + "' can never be a page term");
    if (!terms.empty()) terms += ' ';
    terms += f.payload;
    if (!first_term) first_term = &f;
  }
  if (first_term) {
    NodeOp op = make_add(parent, {"span", {}, terms}, first_term->canonical());
    plan.ops.push_back(std::move(op));
  }

  for (const auto& f : missing) {
    switch (f.kind) {
      case FeatureKind::PageLinkDomain: {
        const std::string href = "http://" + f.payload + "/";
        const auto t = classify_link(href, page);
        if (!is_external(t, page) || registrable_domain(*t.host) != f.payload) {
          throw Unsupported("cannot link to " + f.payload + " as an external domain");
        }
        add({"a", {{"href", href}}, {}}, f);
        ++c.links;
        ++c.external_links;
        break;
      }
      case FeatureKind::PageActionURL: {
        if (text::trim(f.payload) != f.payload) {
          throw Unsupported("action '" + f.payload + "' does not survive trimming");
        }
        add({"form", {{"action", f.payload}}, {}}, f);
        c.has_form = true;
        ++c.actions;
        if (is_external(classify_link(f.payload, page), page)) ++c.external_actions;
        break;
      }
      default:
        break;
    }
  }

  for (const auto& f : missing) {
    switch (f.kind) {
      case FeatureKind::PageHasForms:
        if (!c.has_form) add({"form", {}, {}}, f);
        c.has_form = true;
        break;
      case FeatureKind::PageHasTextInputs:
        add({"input", {{"type", "text"}}, {}}, f);
        break;
      case FeatureKind::PageHasPswdInputs:
        add({"input", {{"type", "password"}}, {}}, f);
        break;
      case FeatureKind::PageHasRadioInputs:
        add({"input", {{"type", "radio"}}, {}}, f);
        break;
      case FeatureKind::PageHasCheckInputs:
        add({"input", {{"type", "checkbox"}}, {}}, f);
        break;
      case FeatureKind::PageNumScriptTagsGt1:
      case FeatureKind::PageNumScriptTagsGt6: {
        const std::size_t need = f.kind == FeatureKind::PageNumScriptTagsGt1 ? 2 : 7;
        for (; c.scripts < need; ++c.scripts) add({"script", {}, {}}, f);
        break;
      }
      default:
        break;
    }
  }

  auto saturate = [&](std::size_t num, std::size_t den, const Feature& f) {
    const auto k = saturation_count(num, den, thr);
    if (!k) throw Unsupported("ratio threshold " + std::to_string(thr) + " is unreachable for " + f.canonical());
    return *k;
  };
  const std::string external_link = "https://" + filler + "/";
  if (has(FeatureKind::PageExternalLinksFreq)) {
    const Feature f{FeatureKind::PageExternalLinksFreq, {}};
    const std::size_t k = saturate(c.external_links, c.links, f);
    for (std::size_t i = 0; i < k; ++i) add({"a", {{"href", external_link}}, {}}, f);
    c.links += k, c.external_links += k, c.secure_links += k;
  }
  if (has(FeatureKind::PageSecureLinksFreq)) {
    const Feature f{FeatureKind::PageSecureLinksFreq, {}};
    // Internal secure links would dilute the external-link ratio the same
    // rule may need.
    const bool stay_external = has(FeatureKind::PageExternalLinksFreq) || !page;
    const std::string href = stay_external ? external_link : "https://" + page->host + "/";
    const std::size_t k = saturate(c.secure_links, c.links, f);
    for (std::size_t i = 0; i < k; ++i) add({"a", {{"href", href}}, {}}, f);
    c.links += k, c.secure_links += k;
    if (stay_external) c.external_links += k;
  }
  if (has(FeatureKind::PageActionOtherDomainFreq)) {
    const Feature f{FeatureKind::PageActionOtherDomainFreq, {}};
    const std::size_t k = saturate(c.external_actions, c.actions, f);
    for (std::size_t i = 0; i < k; ++i) add({"form", {{"action", external_link + "login"}}, {}}, f);
    c.actions += k, c.external_actions += k;
  }
  if (has(FeatureKind::PageImgOtherDomainFreq)) {
    const Feature f{FeatureKind::PageImgOtherDomainFreq, {}};
    const std::size_t k = saturate(c.external_imgs, c.imgs, f);
    for (std::size_t i = 0; i < k; ++i) add({"img", {{"src", external_link + "pixel.png"}}, {}}, f);
    c.imgs += k, c.external_imgs += k;
  }

  // Interactions between added elements (links diluting each other's
  // ratios, for instance) are settled by re-extraction rather than algebra.
  const DomTree after = apply(tree, plan);
  const auto after_map = extract_page_features(after);
  for (const auto& f : missing) {
    const std::string name = f.canonical();
    const auto it = after_map.find(name);
    const bool ok = it != after_map.end() && it->second != 0.0 &&
                    !(it->second < thr && is_frequency(f.kind));
    if (!ok) throw Unsupported("could not construct " + name);
  }
  return plan;
}

void apply_in_place(DomTree& tree, const NodeOp& op) {
  switch (op.kind) {
    case OpKind::modify_attribute: apply_modify_attribute(tree, op); break;
    case OpKind::modify_text: apply_modify_text(tree, op); break;
    case OpKind::add_invisible_element: apply_add(tree, op); break;
  }
}

DomTree apply(const DomTree& tree, const MutationPlan& plan) {
  DomTree out = tree;
  for (const auto& op : plan.ops) apply_in_place(out, op);
  return out;
}

std::vector<std::pair<std::string, std::string>> handler_assignments(std::string_view code) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < code.size() && (code[pos] == ' ' || code[pos] == '\t' || code[pos] == '\n')) ++pos;
  };
  while ((pos = code.find("this.", pos)) != std::string_view::npos) {
    pos += 5;
    const std::size_t name_start = pos;
    while (pos < code.size() && (std::isalnum(static_cast<unsigned char>(code[pos])) ||
                                 code[pos] == '_' || code[pos] == '-')) {
      ++pos;
    }
    const std::string name(code.substr(name_start, pos - name_start));
    skip_ws();
    if (name.empty() || pos >= code.size() || code[pos] != '=') continue;
    ++pos;
    skip_ws();
    if (pos >= code.size() || (code[pos] != '\'' && code[pos] != '"')) continue;
    const char quote = code[pos++];
    std::string value;
    bool closed = false;
    while (pos < code.size()) {
      const char c = code[pos++];
      if (c == quote) {
        closed = true;
        break;
      }
      if (c == '\\' && pos < code.size()) {
        const char e = code[pos++];
        value.push_back(e == 'n' ? '\n' : e == 'r' ? '\r' : e == 't' ? '\t' : e);
      } else {
        value.push_back(c);
      }
    }
    if (closed) out.emplace_back(name, std::move(value));
  }
  return out;
}

PreservationReport preservation_check(const DomTree& before, const DomTree& after) {
  PreservationReport report;
  if (before.source_url != after.source_url) {
    report.url_equal = false;
    report.problems.push_back("source URL changed");
  }
  const auto pb = visible_projection(before);
  const auto pa = visible_projection(after);
  if (pb != pa) {
    report.projection_equal = false;
    const std::size_t n = std::min(pb.items.size(), pa.items.size());
    std::size_t i = 0;
    while (i < n && pb.items[i] == pa.items[i]) ++i;
    report.problems.push_back("visible projection differs at item " + std::to_string(i));
  }
  for_each_element(before.root, [&](const DomNode& el, const NodePath& path) {
    const DomNode* other = resolve(after.root, path);
    if (!other || !other->is_element() || other->tag != el.tag) {
      report.functional_equal = false;
      report.problems.push_back("element <" + el.tag + "> at " + path_string(path) + " is gone");
      return;
    }
    std::vector<std::pair<std::string, std::string>> restored;
    for (const auto& a : other->attributes) {
      if (a.name.rfind("on", 0) == 0) {
        auto found = handler_assignments(a.value);
        restored.insert(restored.end(), found.begin(), found.end());
      }
    }
    for (const auto& a : el.attributes) {
      if (a.name == "style") continue;
      const auto* now = other->attr(a.name);
      if (now && *now == a.value) continue;
      if (std::find(restored.begin(), restored.end(), std::make_pair(a.name, a.value)) != restored.end()) {
        continue;
      }
      report.functional_equal = false;
      report.problems.push_back("attribute " + a.name + " of <" + el.tag + "> at " +
                                path_string(path) + " lost without a restoring handler");
    }
  });
  return report;
}

namespace {

bool excluded_from_pool(std::string_view tag) {
  static constexpr std::array<std::string_view, 17> kExcluded{
      "script", "style", "iframe", "object", "embed", "noscript", "template", "frame", "frameset",
      "head", "html", "body", "meta", "link", "base", "title", "applet"};
  return std::find(kExcluded.begin(), kExcluded.end(), tag) != kExcluded.end();
}

void harvest_element(const DomNode& el, std::vector<ElementSpec>& out, std::set<std::string>& seen) {
  if (!el.is_element() || excluded_from_pool(el.tag)) return;
  ElementSpec spec;
  spec.tag = el.tag;
  for (const auto& a : el.attributes) {
    if (a.name == "id" || a.name == "style" || a.name.rfind("on", 0) == 0) continue;
    spec.attrs.emplace_back(a.name, a.value);
  }
  std::vector<std::string> words;
  for (const auto& c : el.children) {
    if (!c.is_text()) continue;
    for (auto& w : text::split_terms(c.value)) words.push_back(std::move(w));
  }
  for (const auto& w : words) {
    if (!spec.text.empty()) spec.text += ' ';
    spec.text += w;
  }
  if (!spec.attrs.empty() || !spec.text.empty()) {
    json key = {spec.tag, spec.attrs, spec.text};
    if (seen.insert(key.dump()).second) out.push_back(std::move(spec));
  }
  for (const auto& c : el.children) harvest_element(c, out, seen);
}

}  // namespace

AdditionPool harvest_pool(const std::vector<DomTree>& legit_pages) {
  AdditionPool pool;
  std::set<std::string> seen;
  for (const auto& page : legit_pages) {
    const NodePath body = body_path(page);
    const DomNode* start = resolve(page.root, body);
    for (const auto& c : start->children) harvest_element(c, pool.specs, seen);
  }
  return pool;
}

std::string pool_to_jsonl(const AdditionPool& pool) {
  std::string out;
  for (const auto& spec : pool.specs) {
    json attrs = json::object();
    for (const auto& [k, v] : spec.attrs) attrs[k] = v;
    json line;
    line["tag"] = spec.tag;
    line["attrs"] = std::move(attrs);
    line["text"] = spec.text;
    out += line.dump() + "\n";
  }
  return out;
}

AdditionPool pool_from_jsonl(std::string_view text) {
  AdditionPool pool;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError("pool line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("tag") || !doc["tag"].is_string()) {
      throw SchemaError("pool line " + std::to_string(line_no) + ": missing \"tag\"");
    }
    ElementSpec spec;
    spec.tag = text::to_lower_ascii(doc["tag"].get<std::string>());
    if (doc.contains("attrs")) {
      if (!doc["attrs"].is_object()) throw SchemaError("pool line " + std::to_string(line_no) + ": \"attrs\" must be an object");
      for (const auto& [k, v] : doc["attrs"].items()) {
        if (!v.is_string()) throw SchemaError("pool line " + std::to_string(line_no) + ": attribute values must be strings");
        spec.attrs.emplace_back(k, v.get<std::string>());
      }
    }
    if (doc.contains("text") && doc["text"].is_string()) spec.text = doc["text"].get<std::string>();
    pool.specs.push_back(std::move(spec));
  }
  return pool;
}

AdditionPool load_pool(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return pool_from_jsonl(ss.str());
}

void save_pool(const AdditionPool& pool, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << pool_to_jsonl(pool);
}

}  // namespace phishlab
