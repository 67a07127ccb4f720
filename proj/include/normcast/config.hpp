#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "normcast/evaluate.hpp"
#include "normcast/norms.hpp"
#include "normcast/prediction.hpp"

namespace normcast {

/// Everything a run can be configured with. Files hold `key = value` lines;
/// values may be double-quoted and `#` starts a comment.
///
///   separation = "cumulative"
///   epsilon = 0
///   nu = 5
///   min_common = 5
///   fallback = "skip"          # skip | neutral | element_mean
///   rho = 0.5
///   mu = 0.5
///   policy = "confident"       # hard | confident | contextual
///   eps_prh = -0.25
///   eps_per = 0.25
///   threshold_table = "thresholds.csv"
///   scale = "1:5"
struct Settings {
  ExperimentConfig experiment;
  FallbackPolicy fallback = FallbackPolicy::Skip;
  std::string policy = "confident";
  HardThresholds hard;
  /// Relative paths are resolved against the settings file's directory.
  std::optional<std::filesystem::path> threshold_table;

  void validate() const;
};

/// Throws ParseError on malformed lines and unknown keys.
Settings parse_settings(std::istream& in, const std::filesystem::path& base_dir = {},
                        std::string_view source = "<settings>");
Settings load_settings(const std::filesystem::path& path);

std::unique_ptr<ThresholdPolicy> make_policy(const Settings& settings);

}  // namespace normcast
