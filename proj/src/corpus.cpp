#include "phishlab/corpus.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "phishlab/error.hpp"
#include "phishlab/text.hpp"
#include "phishlab/url.hpp"

namespace phishlab {

std::string_view label_name(Label label) { return label == Label::phish ? "phish" : "legit"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  const std::string content = read_text_file(path);
  std::vector<std::string> out;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = text::trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

Corpus load_corpus(const std::filesystem::path& manifest) {
  using json = nlohmann::json;
  const std::string content = read_text_file(manifest);
  const auto base = manifest.parent_path();
  Corpus corpus;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank(line)) continue;
    const std::string where = manifest.string() + ":" + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError(where + ": " + e.what());
    }
    if (!rec.is_object() || !rec.contains("url") || !rec["url"].is_string()) {
      throw SchemaError(where + ": record needs a string \"url\"");
    }
    const std::string url = rec["url"].get<std::string>();
    if (!try_parse_url(url)) throw SchemaError(where + ": not an absolute URL: " + url);
    if (!rec.contains("path") || rec["path"].is_null()) {
      corpus.url_list.push_back(url);
      continue;
    }
    if (!rec["path"].is_string()) throw SchemaError(where + ": \"path\" must be a string");
    if (!rec.contains("label") || !rec["label"].is_string()) {
      throw SchemaError(where + ": page record needs a \"label\"");
    }
    const std::string label = rec["label"].get<std::string>();
    if (label != "phish" && label != "legit") {
      throw SchemaError(where + ": label must be \"phish\" or \"legit\"");
    }
    const auto page_path = base / rec["path"].get<std::string>();
    CorpusPage page;
    page.url = url;
    page.label = label == "phish" ? Label::phish : Label::legit;
    page.tree = parse_html(read_text_file(page_path), url);
    corpus.pages.push_back(std::move(page));
  }
  return corpus;
}

std::vector<DomTree> pages_with_label(const Corpus& corpus, Label label) {
  std::vector<DomTree> out;
  for (const auto& p : corpus.pages) {
    if (p.label == label) out.push_back(p.tree);
  }
  return out;
}

}  // namespace phishlab
