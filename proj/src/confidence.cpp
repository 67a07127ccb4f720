#include "normcast/confidence.hpp"

#include <algorithm>
#include <cmath>

#include "normcast/error.hpp"

namespace normcast {

void ConfidenceParams::validate() const {
  const bool in_range = rho >= 0.0 && rho <= 1.0 && mu >= 0.0 && mu <= 1.0;
  if (!in_range || std::abs(rho + mu - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "rho and mu must lie in [0, 1] and sum to 1");
  }
}

double sample_sd(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "standard deviation of an empty sample");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

std::vector<double> neighbor_sample(const PreferenceMatrix& m, const SimilarSet& s) {
  const ElementIndex x = m.element_index(s.element);
  std::vector<double> out;
  out.reserve(s.members.size());
  for (const auto& member : s.members) {
    auto v = m.value(m.user_index(member.user), x);
    if (!v) {
      throw Error(ErrorCode::NotFound,
                  "neighbour '" + member.user.value + "' has no preference on '" + s.element.value + "'");
    }
    out.push_back(*v);
  }
  return out;
}

double rho_mu_confidence(double mean_separation, double spread, const ConfidenceParams& p) {
  p.validate();
  const double conf = 1.0 - p.rho * std::min(mean_separation, 1.0) - p.mu * std::min(spread, 1.0);
  // rho + mu may exceed 1 by rounding.
  return std::clamp(conf, 0.0, 1.0);
}

double rho_mu_confidence(const SimilarSet& s, std::span<const double> sample, const ConfidenceParams& p) {
  if (s.members.empty()) throw Error(ErrorCode::NoSimilarUsers, "confidence of an empty similar set");
  return rho_mu_confidence(s.mean_separation(), sample_sd(sample), p);
}

}  // namespace normcast
