#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phishlab/dom.hpp"

namespace phishlab {

enum class Label { phish, legit };

std::string_view label_name(Label label);

struct CorpusPage {
  std::string url;
  DomTree tree;
  Label label = Label::legit;
};

struct Corpus {
  std::vector<CorpusPage> pages;
  std::vector<std::string> url_list;  // URLs known without a page
};

/// JSON-lines manifest of {"url", "path", "label"} records; `path` is
/// relative to the manifest. Records without a path only contribute their
/// URL. Throws IoError, SchemaError, ParseError.
Corpus load_corpus(const std::filesystem::path& manifest);

std::vector<DomTree> pages_with_label(const Corpus& corpus, Label label);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Trimmed, non-empty lines.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace phishlab
