#pragma once

#include <optional>
#include <string_view>

#include "normcast/confidence.hpp"
#include "normcast/preference_model.hpp"
#include "normcast/separation.hpp"
#include "normcast/similarity.hpp"

namespace normcast {

struct Prediction {
  UserId user;
  ElementId element;
  PreferenceValue value;
  SimilarSet neighbors;
  std::optional<double> confidence;
};

/// Mean of the neighbours' preferences on the query element.
/// Throws NoSimilarUsers on an empty set.
Prediction predict_average(const PreferenceMatrix& m, const SimilarSet& s);

class Predictor {
 public:
  virtual ~Predictor() = default;
  /// Throws NoSimilarUsers when no prediction can be made.
  virtual Prediction predict(const UserId& user, const ElementId& element) const = 0;
};

/// Similar-user selection followed by predict_average, optionally scored
/// with rho-mu confidence. Holds references: the matrix and measure must
/// outlive the predictor.
class AveragePredictor final : public Predictor {
 public:
  AveragePredictor(const PreferenceMatrix& m, const SeparationMeasure& sep, SimilarityParams params,
                   std::optional<ConfidenceParams> confidence = std::nullopt);

  Prediction predict(const UserId& user, const ElementId& element) const override;

 private:
  const PreferenceMatrix& matrix_;
  const SeparationMeasure& sep_;
  SimilarityParams params_;
  std::optional<ConfidenceParams> confidence_;
};

/// What to do with an unknown preference that cannot be predicted.
enum class FallbackPolicy {
  Skip,         // leave it unresolved
  Neutral,      // fill with 0
  ElementMean,  // fill with the mean known preference of all users on the element
};

FallbackPolicy parse_fallback(std::string_view name);
std::string_view to_string(FallbackPolicy policy);

/// Known entries are copied verbatim with confidence 1. Predicted entries carry
/// the predictor's confidence; fallback-filled entries carry confidence 0.
CompletedProfile complete_profile(const PreferenceMatrix& m, const UserId& user, const Predictor& predictor,
                                  FallbackPolicy fallback = FallbackPolicy::Skip);

}  // namespace normcast
