#include "normcast/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "normcast/error.hpp"

namespace normcast {

void SimilarityParams::validate() const {
  if (nu == 0) throw Error(ErrorCode::InvalidArgument, "nu must be at least 1");
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be a finite non-negative number");
  }
}

double SimilarSet::mean_separation() const {
  if (members.empty()) throw Error(ErrorCode::NoSimilarUsers, "empty similar set");
  double sum = 0.0;
  for (const auto& member : members) sum += member.separation;
  return sum / static_cast<double>(members.size());
}

std::vector<Candidate> select_similar(const PreferenceMatrix& m, std::vector<Candidate> candidates,
                                      const SimilarityParams& params) {
  params.validate();
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.separation != b.separation) return a.separation < b.separation;
    return m.user(a.index) < m.user(b.index);
  });
  // Sorted by separation, so the epsilon-close candidates form a prefix.
  const auto within = static_cast<std::size_t>(
      std::find_if(candidates.begin(), candidates.end(),
                   [&](const Candidate& c) { return c.separation > params.epsilon; }) -
      candidates.begin());
  const std::size_t keep = std::max(within, std::min(params.nu, candidates.size()));
  candidates.resize(keep);
  return candidates;
}

std::vector<UserId> knowers(const PreferenceMatrix& m, const ElementId& element) {
  std::vector<UserId> out;
  for (auto u : m.column(m.element_index(element))) out.push_back(m.user(u));
  return out;
}

SimilarSet similar_users(const PreferenceMatrix& m, const SeparationMeasure& sep, const UserId& user,
                         const ElementId& element, const SimilarityParams& params) {
  params.validate();
  const UserIndex u = m.user_index(user);
  const ElementIndex x = m.element_index(element);
  const std::size_t needed = std::max<std::size_t>(1, params.min_common);

  std::vector<Candidate> candidates;
  for (auto other : m.column(x)) {
    if (other == u) continue;
    if (common_count(m, u, other) < needed) continue;
    candidates.push_back({other, sep.evaluate(m, u, other)});
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::NoSimilarUsers,
                "no eligible similar users for '" + user.value + "' on '" + element.value + "'");
  }

  SimilarSet out{user, element, {}, params};
  for (const auto& c : select_similar(m, std::move(candidates), params)) {
    out.members.push_back({m.user(c.index), c.index, c.separation});
  }
  return out;
}

}  // namespace normcast
