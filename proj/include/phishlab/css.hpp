#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishlab/dom.hpp"

// Just enough CSS to keep appearance stable when an attribute that a
// `<style>` rule selects on is moved into an event handler. Only compound
// selectors (tag, .class, #id, [attr], [attr=value]) are understood; rules
// with combinators, pseudo-classes or inside @-blocks are ignored.
namespace phishlab::css {

struct Declaration {
  std::string property;
  std::string value;

  friend bool operator==(const Declaration&, const Declaration&) = default;
};

using Declarations = std::vector<Declaration>;

Declarations parse_declarations(std::string_view block);

/// "prop:value;prop:value;"
std::string format_declarations(const Declarations& decls);

struct AttributeSelector {
  std::string name;
  std::optional<std::string> value;
};

struct Selector {
  std::string tag;  // empty matches any element
  std::string id;
  std::vector<std::string> classes;
  std::vector<AttributeSelector> attributes;

  /// (ids, classes + attributes, tags) packed for ordering.
  int specificity() const;
  bool references_attribute(std::string_view name) const;
};

std::optional<Selector> parse_selector(std::string_view text);

bool matches(const Selector& selector, const DomNode& element);

struct Rule {
  Selector selector;
  Declarations declarations;
  std::size_t order = 0;
};

struct StyleSheet {
  std::vector<Rule> rules;
};

StyleSheet parse_stylesheet(std::string_view css_text);

/// Concatenation of every `<style>` element of the page.
StyleSheet collect_stylesheet(const DomTree& tree);

/// Cascade of matching rules (specificity, then source order) followed by
/// the inline `style` attribute.
std::map<std::string, std::string> effective_style(const StyleSheet& sheet,
                                                   const DomNode& element);

}  // namespace phishlab::css
