#pragma once

#include <cstddef>
#include <vector>

#include "normcast/preference_model.hpp"
#include "normcast/separation.hpp"

namespace normcast {

struct SimilarityParams {
  double epsilon = 0.0;
  std::size_t nu = 5;
  /// Candidates sharing fewer known elements with the query user are ignored.
  std::size_t min_common = 5;

  /// Throws InvalidArgument on nu == 0, negative or non-finite epsilon.
  void validate() const;
};

struct SimilarMember {
  UserId user;
  UserIndex index;
  double separation;
};

/// The users selected to predict `element` for `user`, ascending by separation.
struct SimilarSet {
  UserId user;
  ElementId element;
  std::vector<SimilarMember> members;
  SimilarityParams params;

  double mean_separation() const;
};

struct Candidate {
  UserIndex index;
  double separation;
};

/// Keeps every candidate within epsilon plus the nu closest ones. Ties are
/// ordered by ascending user id, so exactly min(nu, n) members come from the
/// nu-closest rule. Returns the chosen candidates sorted by (separation, id).
std::vector<Candidate> select_similar(const PreferenceMatrix& m, std::vector<Candidate> candidates,
                                      const SimilarityParams& params);

/// Users with a known preference on `element`, in matrix order.
std::vector<UserId> knowers(const PreferenceMatrix& m, const ElementId& element);

/// Throws NoSimilarUsers when no other knower of `element` shares at least
/// max(1, min_common) known elements with `user`.
SimilarSet similar_users(const PreferenceMatrix& m, const SeparationMeasure& sep, const UserId& user,
                         const ElementId& element, const SimilarityParams& params);

}  // namespace normcast
