#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace phishlab {

enum class NodeType { element, attribute, text, comment };

/// One node of a parsed page. Elements keep their attribute nodes in
/// `attributes` and their element/text/comment children in `children`;
/// attribute, text and comment nodes carry only `value` (and `name` for
/// attributes).
struct DomNode {
  NodeType type = NodeType::element;
  std::string tag;
  std::string name;
  std::string value;
  std::vector<DomNode> attributes;
  std::vector<DomNode> children;

  static DomNode element(std::string tag);
  static DomNode text(std::string value);
  static DomNode comment(std::string value);
  static DomNode attribute(std::string name, std::string value);

  bool is_element() const { return type == NodeType::element; }
  bool is_text() const { return type == NodeType::text; }

  const std::string* attr(std::string_view attr_name) const;
  bool has_attr(std::string_view attr_name) const { return attr(attr_name) != nullptr; }
  /// Replaces the value in place when present, appends otherwise.
  void set_attr(std::string_view attr_name, std::string attr_value);
  bool remove_attr(std::string_view attr_name);

  friend bool operator==(const DomNode&, const DomNode&) = default;
};

/// Child-index sequence from the root, counting element/text/comment
/// children only. Attribute edits never shift a path.
using NodePath = std::vector<std::size_t>;

struct DomTree {
  DomNode root;
  std::string source_url;

  friend bool operator==(const DomTree&, const DomTree&) = default;
};

/// Tag-soup tolerant parser. Unclosed tags are closed at end of input,
/// unknown tags are kept, whitespace-only text outside `pre`/`textarea` is
/// dropped. Empty input yields a bare `html` root. Throws ParseError on
/// invalid UTF-8.
DomTree parse_html(std::string_view html, std::string url);

std::string serialize(const DomTree& tree);

bool is_void_element(std::string_view tag);

/// Layer 1 is the root; layer i+1 holds the element children of layer i in
/// document order.
std::vector<std::vector<const DomNode*>> bfs_layers(const DomTree& tree);

std::size_t element_count(const DomTree& tree);

const DomNode* resolve(const DomNode& root, const NodePath& path);
DomNode* resolve(DomNode& root, const NodePath& path);

/// Path of the first `body` element, or the root path when there is none.
NodePath body_path(const DomTree& tree);

/// Pre-order visit of every element with its path.
template <typename Fn>
void for_each_element(const DomNode& node, NodePath& path, Fn&& fn) {
  if (!node.is_element()) return;
  fn(node, path);
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    for_each_element(node.children[i], path, fn);
    path.pop_back();
  }
}

template <typename Fn>
void for_each_element(const DomNode& root, Fn&& fn) {
  NodePath path;
  for_each_element(root, path, fn);
}

/// Visits text nodes whose content is page text, skipping `script`, `style`
/// and `template` contents. `fn(text_node, path)`.
template <typename Fn>
void for_each_page_text(const DomNode& node, NodePath& path, Fn&& fn) {
  if (node.is_element() &&
      (node.tag == "script" || node.tag == "style" || node.tag == "template")) {
    return;
  }
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const DomNode& child = node.children[i];
    path.push_back(i);
    if (child.is_text()) {
      fn(child, path);
    } else if (child.is_element()) {
      for_each_page_text(child, path, fn);
    }
    path.pop_back();
  }
}

template <typename Fn>
void for_each_page_text(const DomNode& root, Fn&& fn) {
  NodePath path;
  for_each_page_text(root, path, fn);
}

/// One rendered element as seen by the static appearance model.
struct VisibleItem {
  std::string tag;
  std::string text;  // direct text children, zero-width characters removed
  std::map<std::string, std::string> appearance;

  friend bool operator==(const VisibleItem&, const VisibleItem&) = default;
};

struct VisibleProjection {
  std::vector<VisibleItem> items;

  friend bool operator==(const VisibleProjection&, const VisibleProjection&) = default;
};

/// Static stand-in for a rendered screenshot: visible elements in document
/// order with zero-width-stripped text and the appearance attributes
/// (`style` resolved against the page's own `<style>` blocks).
VisibleProjection visible_projection(const DomTree& tree);

/// True when the inline style hides the element and its subtree.
bool hides_subtree(const DomNode& element);

}  // namespace phishlab
