#include "normcast/prediction.hpp"

#include <string>

#include "normcast/error.hpp"

namespace normcast {

Prediction predict_average(const PreferenceMatrix& m, const SimilarSet& s) {
  if (s.members.empty()) {
    throw Error(ErrorCode::NoSimilarUsers, "cannot predict '" + s.element.value + "' without neighbours");
  }
  const auto sample = neighbor_sample(m, s);
  double sum = 0.0;
  for (double v : sample) sum += v;
  return Prediction{s.user, s.element, PreferenceValue(sum / static_cast<double>(sample.size())), s,
                    std::nullopt};
}

AveragePredictor::AveragePredictor(const PreferenceMatrix& m, const SeparationMeasure& sep,
                                   SimilarityParams params, std::optional<ConfidenceParams> confidence)
    : matrix_(m), sep_(sep), params_(params), confidence_(confidence) {
  params_.validate();
  if (confidence_) confidence_->validate();
}

Prediction AveragePredictor::predict(const UserId& user, const ElementId& element) const {
  auto prediction = predict_average(matrix_, similar_users(matrix_, sep_, user, element, params_));
  if (confidence_) {
    const auto sample = neighbor_sample(matrix_, prediction.neighbors);
    prediction.confidence = rho_mu_confidence(prediction.neighbors, sample, *confidence_);
  }
  return prediction;
}

FallbackPolicy parse_fallback(std::string_view name) {
  if (name == "skip") return FallbackPolicy::Skip;
  if (name == "neutral") return FallbackPolicy::Neutral;
  if (name == "element_mean") return FallbackPolicy::ElementMean;
  throw Error(ErrorCode::InvalidArgument, "unknown fallback policy '" + std::string(name) + "'");
}

std::string_view to_string(FallbackPolicy policy) {
  switch (policy) {
    case FallbackPolicy::Skip: return "skip";
    case FallbackPolicy::Neutral: return "neutral";
    case FallbackPolicy::ElementMean: return "element_mean";
  }
  return "skip";
}

namespace {

std::optional<double> element_mean(const PreferenceMatrix& m, ElementIndex x) {
  const auto knowers = m.column(x);
  if (knowers.empty()) return std::nullopt;
  double sum = 0.0;
  for (auto u : knowers) sum += *m.value(u, x);
  return sum / static_cast<double>(knowers.size());
}

}  // namespace

CompletedProfile complete_profile(const PreferenceMatrix& m, const UserId& user, const Predictor& predictor,
                                  FallbackPolicy fallback) {
  const UserIndex u = m.user_index(user);
  CompletedProfile profile{user, {}};
  profile.entries.reserve(m.element_count());
  for (ElementIndex x = 0; x < m.element_count(); ++x) {
    ProfileEntry entry{m.element(x), std::nullopt, Provenance::Unresolved, std::nullopt};
    if (auto known = m.value(u, x)) {
      entry.value = PreferenceValue(*known);
      entry.provenance = Provenance::Known;
      entry.confidence = 1.0;
      profile.entries.push_back(std::move(entry));
      continue;
    }
    try {
      auto prediction = predictor.predict(user, entry.element);
      entry.value = prediction.value;
      entry.provenance = Provenance::Predicted;
      entry.confidence = prediction.confidence;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSimilarUsers) throw;
      std::optional<double> filled;
      if (fallback == FallbackPolicy::Neutral) filled = 0.0;
      if (fallback == FallbackPolicy::ElementMean) filled = element_mean(m, x);
      if (filled) {
        entry.value = PreferenceValue(*filled);
        entry.provenance = Provenance::Predicted;
        entry.confidence = 0.0;
      }
    }
    profile.entries.push_back(std::move(entry));
  }
  return profile;
}

}  // namespace normcast
