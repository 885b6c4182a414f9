#include "phishlab/config.hpp"

#include <charconv>

#include "phishlab/corpus.hpp"
#include "phishlab/error.hpp"
#include "phishlab/text.hpp"

namespace phishlab {

namespace {

double as_real(std::string_view key, std::string_view v, double lo, double hi) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw SchemaError("config: " + std::string(key) + " is not a number: '" + std::string(v) + "'");
  }
  if (out < lo || out > hi) {
    throw SchemaError("config: " + std::string(key) + " out of range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  return out;
}

std::uint64_t as_count(std::string_view key, std::string_view v, std::uint64_t lo) {
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw SchemaError("config: " + std::string(key) + " is not a non-negative integer: '" + std::string(v) + "'");
  }
  if (out < lo) throw SchemaError("config: " + std::string(key) + " must be at least " + std::to_string(lo));
  return out;
}

}  // namespace

Config parse_config(std::string_view text, const std::filesystem::path& base) {
  Config cfg;
  auto path_of = [&](std::string_view v) {
    const std::filesystem::path p{std::string(v)};
    return p.is_relative() && !base.empty() ? base / p : p;
  };
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw SchemaError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = text::trim(line.substr(0, eq));
    const std::string_view v = text::trim(line.substr(eq + 1));
    if (key == "model") cfg.model = path_of(v);
    else if (key == "corpus") cfg.corpus = path_of(v);
    else if (key == "pool") cfg.pool = path_of(v);
    else if (key == "whitelist") cfg.whitelist = path_of(v);
    else if (key == "blacklist") cfg.blacklist = path_of(v);
    else if (key == "store") cfg.store = path_of(v);
    else if (key == "threshold") cfg.threshold = as_real(key, v, 0.0, 1.0);
    else if (key == "freq_detect_threshold") cfg.freq_detect_threshold = as_real(key, v, 0.0, 1.0);
    else if (key == "seed") cfg.seed = as_count(key, v, 0);
    else if (key == "budget") cfg.budget = as_count(key, v, 0);
    else if (key == "batch") cfg.batch = as_count(key, v, 1);
    else if (key == "pelican.k") cfg.pelican_k = as_count(key, v, 1);
    else if (key == "pelican.h_hours") cfg.pelican_h_hours = as_real(key, v, 0.0, 1e9);
    else if (key == "pelican.detect_threshold") cfg.pelican.detect_threshold = as_real(key, v, 0.0, 1.0);
    else if (key == "pelican.layer_accept") cfg.pelican.layer_accept = as_real(key, v, 0.0, 1.0);
    else if (key == "pelican.lookahead") cfg.pelican.lookahead = as_count(key, v, 1);
    else throw SchemaError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.parent_path());
}

}  // namespace phishlab
