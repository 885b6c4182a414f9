#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "phishlab/pelican.hpp"

namespace phishlab {

/// Settings shared by the commands. Read from a flat key=value file; `#`
/// starts a comment. Command-line flags override.
struct Config {
  std::filesystem::path model;
  std::filesystem::path corpus;
  std::filesystem::path pool;
  std::filesystem::path whitelist;
  std::filesystem::path blacklist;
  std::filesystem::path store;
  std::optional<double> threshold;              // overrides the model's tau
  std::optional<double> freq_detect_threshold;  // overrides the model's value
  std::uint64_t seed = 0;
  std::size_t budget = 2000;
  std::size_t batch = 3;
  std::size_t pelican_k = 1000;
  double pelican_h_hours = 24.0;
  PelicanParams pelican;
};

/// Throws SchemaError on unknown keys, malformed lines or out-of-range values.
/// Relative paths are resolved against `base`.
Config parse_config(std::string_view text, const std::filesystem::path& base = {});
Config load_config(const std::filesystem::path& path);

}  // namespace phishlab
