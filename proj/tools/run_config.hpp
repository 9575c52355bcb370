#pragma once

// JSON run configuration for the command-line tool. Every section is
// optional; unknown keys and mistyped values are rejected on load.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tensordict/alt_min.hpp"
#include "tensordict/conv_als.hpp"
#include "tensordict/saddle_sgd.hpp"
#include "tensordict/seq_embed.hpp"

namespace tensordict::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RunConfig {
 public:
  RunConfig() = default;
  /// Throws ConfigError naming the offending key.
  static RunConfig parse(const nlohmann::json& doc);
  static RunConfig load(const std::filesystem::path& path);

  std::optional<std::uint64_t> seed() const;
  std::optional<std::string> input() const;
  std::optional<std::string> output() const;
  std::optional<Index> components() const;
  std::optional<double> target_error() const;

  void apply(saddle::SgdConfig& cfg) const;
  void apply(conv::AlsConfig& cfg) const;
  void apply(conv::AltMinConfig& cfg) const;
  void apply(embed::EmbedConfig& cfg) const;

 private:
  nlohmann::json doc_ = nlohmann::json::object();
};

}  // namespace tensordict::cli
