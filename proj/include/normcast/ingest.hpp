#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "normcast/preference_model.hpp"

namespace normcast {

/// Closed answer scale of the raw input, e.g. a 1..5 Likert scale.
struct AnswerScale {
  double lo = -1.0;
  double hi = 1.0;

  /// Throws InvalidArgument unless lo < hi and both are finite.
  void validate() const;
  /// Parses "lo:hi".
  static AnswerScale parse(std::string_view s);
  std::string str() const;

  /// Length of the scale relative to [-1, 1].
  double stretch() const { return (hi - lo) / 2.0; }
};

/// Affine map [lo, hi] -> [-1, 1]. Throws OutOfScale for answers outside [lo, hi].
PreferenceValue rescale_likert(double answer, double lo, double hi);
/// Inverse of rescale_likert.
double unscale_likert(double value, double lo, double hi);

/// Reads `user_id,element_id,answer` records. Answers are rescaled when a scale
/// is given and must already lie in [-1, 1] otherwise. An empty answer registers
/// the user and element without a known preference.
PreferenceMatrix read_csv(std::istream& in, std::optional<AnswerScale> scale, std::string_view source = "<stream>");
PreferenceMatrix load_csv(const std::filesystem::path& path, std::optional<AnswerScale> scale = std::nullopt);

/// Writes the matrix in the same schema with values in [-1, 1], users in
/// registration order and each row in element order.
void write_csv(std::ostream& out, const PreferenceMatrix& m);
void dump_csv(const std::filesystem::path& path, const PreferenceMatrix& m);

struct SyntheticCohortSpec {
  std::size_t num_users = 100;
  std::size_t num_elements = 20;
  std::size_t num_clusters = 2;
  double known_fraction = 0.5;
  double noise_sd = 0.1;
  std::uint64_t seed = 0;
  /// One vector of num_elements values in [-1, 1] per cluster. Drawn
  /// uniformly from [-1, 1] when empty.
  std::vector<std::vector<double>> prototypes;

  /// Throws InvalidSpec.
  void validate() const;
};

struct SyntheticCohort {
  PreferenceMatrix ground_truth;
  PreferenceMatrix observed;
  std::vector<std::size_t> cluster_of;  // by user index
};

/// Users are assigned to clusters round-robin. Each true preference is the
/// cluster prototype plus Gaussian noise, clipped to [-1, 1]; each entry is
/// then observed with probability known_fraction. Deterministic in the seed.
SyntheticCohort generate_synthetic(const SyntheticCohortSpec& spec);

}  // namespace normcast
