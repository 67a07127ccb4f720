#pragma once

#include <span>
#include <vector>

#include "normcast/preference_model.hpp"
#include "normcast/similarity.hpp"

namespace normcast {

struct ConfidenceParams {
  double rho = 0.5;  // weight of the mean separation term
  double mu = 0.5;   // weight of the neighbour spread term

  /// Throws InvalidArgument unless both lie in [0, 1] and sum to 1 (within 1e-9).
  void validate() const;
};

/// Population standard deviation. Throws EmptySample on an empty input.
double sample_sd(std::span<const double> values);

/// Neighbours' preferences towards the set's query element.
std::vector<double> neighbor_sample(const PreferenceMatrix& m, const SimilarSet& s);

/// 1 - rho*min(mean_separation, 1) - mu*min(sd, 1).
double rho_mu_confidence(double mean_separation, double spread, const ConfidenceParams& p);

/// Throws NoSimilarUsers on an empty set and EmptySample on an empty sample.
double rho_mu_confidence(const SimilarSet& s, std::span<const double> sample, const ConfidenceParams& p);

}  // namespace normcast
