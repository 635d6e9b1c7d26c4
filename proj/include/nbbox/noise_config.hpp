#pragma once

// Flat key-value config files for NoiseConfig:
//
//   # comment
//   s_min = 0.99
//   isotropic_scale = true
//   gamma = 16
//
// Keys not present keep their recommended defaults. Grid files add
// `[name]` sections; every section starts from the keys given above the
// first section header.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nbbox/transform.hpp"

namespace nbbox {

struct NamedConfig {
  std::string name;
  NoiseConfig config;
};

NoiseConfig parse_noise_config(std::string_view text, const std::string& source = "<config>");
NoiseConfig load_noise_config(const std::filesystem::path& path);

/// One entry per `[name]` section, in file order. A file without sections
/// yields a single entry named "default".
std::vector<NamedConfig> parse_noise_grid(std::string_view text,
                                          const std::string& source = "<grid>");
std::vector<NamedConfig> load_noise_grid(const std::filesystem::path& path);

/// Serializes every key; parse_noise_config() reads it back exactly.
std::string format_noise_config(const NoiseConfig& cfg);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace nbbox
