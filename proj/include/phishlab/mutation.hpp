#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phishlab/dom.hpp"
#include "phishlab/features.hpp"

namespace phishlab {

using Attributes = std::vector<std::pair<std::string, std::string>>;

/// An element to be added invisibly: tag, attributes in order, text content.
struct ElementSpec {
  std::string tag;
  Attributes attrs;
  std::string text;

  friend bool operator==(const ElementSpec&, const ElementSpec&) = default;
};

enum class OpKind { modify_attribute, modify_text, add_invisible_element };

std::string_view op_kind_name(OpKind kind);

struct NodeOp {
  OpKind kind = OpKind::modify_attribute;
  /// Element for modify_attribute, text node for modify_text, parent element
  /// for add_invisible_element.
  NodePath target;
  std::string attr;            // modify_attribute
  std::string term;            // modify_text
  std::size_t split_at = 0;    // modify_text: code point index of the U+200B
  ElementSpec spec;            // add_invisible_element
  std::string provenance;      // feature or rule served, "blind" otherwise

  std::string describe() const;
};

struct MutationPlan {
  std::vector<NodeOp> ops;

  bool empty() const { return ops.empty(); }
};

std::string path_string(const NodePath& path);

/// Event attribute the modification matrix assigns to a tag ("onclick" for button), or empty.
std::string_view handler_event(std::string_view tag);

/// Whether removing `attr` from `tag` can be undone by an event handler
/// without visual change. `value` matters only for input/type.
bool is_modifiable(std::string_view tag, std::string_view attr, std::string_view value);

/// Every (element, attribute) pair the matrix allows, in document order.
std::vector<std::pair<NodePath, std::string>> modifiable_attributes(const DomTree& tree);

/// Returns true for a fragment that must not appear as a page term (because
/// the attacker knows it would feed a positive rule).
using FragmentGuard = std::function<bool(std::string_view fragment)>;

/// Throws PathError, Unsupported.
NodeOp modify_attribute(const DomTree& tree, const NodePath& element, std::string_view attr);

/// Splits the first occurrence of `term` in the text node with U+200B near its
/// middle. Throws TermNotFound, Unsupported (one-character terms, or no split
/// position leaves both fragments clean).
NodeOp modify_text(const DomTree& tree, const NodePath& text_node, std::string_view term,
                   const FragmentGuard& guard = {});

/// Appends `spec` as the last child of the first body (or of the root).
NodeOp add_invisible_element(const DomTree& tree, ElementSpec spec);

struct PlanOptions {
  double freq_detect_threshold = 0.05;
  FragmentGuard guard;
};

/// Throws FeatureAbsent, Unsupported (UrlFeatureUnaddable for URL kinds).
MutationPlan plan_delete_feature(const DomTree& tree, std::string_view feature,
                                 const PlanOptions& options = {});

/// Adds whatever the rule is missing so that it hits. Throws
/// UrlFeatureUnaddable when a missing feature is a URL feature, Unsupported
/// when a missing feature has no known construction.
MutationPlan plan_add_rule(const DomTree& tree, const std::vector<std::string>& features,
                           const PlanOptions& options = {});

/// Throws PathError when an op's target does not resolve.
DomTree apply(const DomTree& tree, const MutationPlan& plan);
void apply_in_place(DomTree& tree, const NodeOp& op);

struct PreservationReport {
  bool projection_equal = true;
  bool functional_equal = true;
  bool url_equal = true;
  std::vector<std::string> problems;

  bool passed() const { return projection_equal && functional_equal && url_equal; }
};

PreservationReport preservation_check(const DomTree& before, const DomTree& after);

/// `this.<name>='<value>'` assignments found in an event handler string.
std::vector<std::pair<std::string, std::string>> handler_assignments(std::string_view code);

struct AdditionPool {
  std::vector<ElementSpec> specs;
};

/// Element specs from legitimate pages, without scripts, embedded content, ids,
/// inline styles or handlers. Duplicates are dropped, first occurrence wins.
AdditionPool harvest_pool(const std::vector<DomTree>& legit_pages);

AdditionPool load_pool(const std::filesystem::path& path);
void save_pool(const AdditionPool& pool, const std::filesystem::path& path);
std::string pool_to_jsonl(const AdditionPool& pool);
AdditionPool pool_from_jsonl(std::string_view text);

}  // namespace phishlab
