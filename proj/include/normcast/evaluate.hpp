#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "normcast/confidence.hpp"
#include "normcast/ingest.hpp"
#include "normcast/norms.hpp"
#include "normcast/preference_model.hpp"
#include "normcast/similarity.hpp"

namespace normcast {

enum class Hardness {
  Regular,  // test users drawn from everyone
  Medium,   // test users drawn from those whose answers spread at least medium_min_sd
  Hard,     // the hard_top_k users with the widest answer spread
};

Hardness parse_hardness(std::string_view name);
std::string_view to_string(Hardness h);

struct ExperimentConfig {
  double test_user_fraction = 0.20;
  double test_answer_fraction = 0.20;
  double similarity_answer_fraction = 0.40;
  Hardness hardness = Hardness::Regular;
  double medium_min_sd = 1.0;  // on the answer scale
  std::size_t hard_top_k = 100;
  std::string separation = "cumulative";
  SimilarityParams similarity;
  ConfidenceParams confidence;
  RegimeThresholds regime;
  std::uint64_t seed = 0;
  /// Scale distances are reported on; predictions are mapped back onto it.
  AnswerScale scale;
  double histogram_bin_width = 0.25;

  void validate() const;
};

/// Train/test partition of a ground-truth matrix. Held-out targets are absent
/// from both derived matrices.
struct Split {
  std::vector<UserIndex> test_users;  // ascending
  std::vector<bool> is_test;          // by user index
  /// Targets to predict, sorted by (user id, element id). The split depends
  /// only on ids, values and the seed, not on registration order.
  std::vector<std::pair<UserIndex, ElementIndex>> targets;
  /// Each user's answers reduced to the similarity fraction; used for separations.
  PreferenceMatrix similarity;
  /// Every answer except the targets; supplies neighbour preferences.
  PreferenceMatrix knowledge;
};

/// Throws InvalidSplit when there would be no test user or an empty pool.
Split make_split(const PreferenceMatrix& ground, const ExperimentConfig& cfg);

struct PredictionRecord {
  UserId user;
  ElementId element;
  double predicted;  // answer scale
  double actual;     // answer scale
  double distance;   // answer scale
  std::optional<double> confidence;
  std::optional<double> mean_separation;
  std::optional<double> neighbor_sd;
  std::size_t neighbors = 0;
};

struct HistogramBin {
  double lo;
  double hi;
  std::size_t count;
};

/// Fixed-width bins from 0 up to the largest value (which falls in the last bin).
std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width);

struct ExperimentReport {
  std::string method;
  Hardness hardness = Hardness::Regular;
  std::uint64_t seed = 0;
  AnswerScale scale;
  std::string separation;
  SimilarityParams similarity;
  ConfidenceParams confidence;
  std::size_t n_test_users = 0;
  std::size_t n_targets = 0;
  std::size_t n_predictions = 0;
  double mean_distance = 0.0;  // APD on the answer scale
  double sd_distance = 0.0;    // PSD on the answer scale
  double coverage = 0.0;
  Regime regime = Regime::AnyMethod;
  std::vector<HistogramBin> histogram;
  std::vector<PredictionRecord> per_prediction;
};

/// Predicts every held-out answer with similar users and the average predictor.
/// Targets without eligible neighbours are left out and lower the coverage.
ExperimentReport run_experiment(const PreferenceMatrix& ground, const ExperimentConfig& cfg);

enum class BaselineKind {
  Random,             // uniform on the answer scale
  GlobalElementMean,  // pool mean per element
};

BaselineKind parse_baseline(std::string_view name);
std::string_view to_string(BaselineKind kind);

/// Same split as run_experiment under the same seed.
ExperimentReport run_baseline(const PreferenceMatrix& ground, const ExperimentConfig& cfg, BaselineKind kind);

/// Rank correlation with average ranks for ties. Throws UndefinedCorrelation
/// for fewer than two points or a constant input.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct TuneResult {
  double rho;
  double mu;
  double correlation;
};

/// Grid search over rho in {0, step, ..., 1} with mu = 1 - rho, minimising the
/// rank correlation between confidence and distance. Ties keep the smaller rho.
TuneResult tune_confidence(const ExperimentReport& report, double grid_step);

void write_report(std::ostream& out, const ExperimentReport& report);
ExperimentReport read_report(std::istream& in);

}  // namespace normcast
