#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "normcast/preference_model.hpp"

namespace normcast {

/// Elements known for both users of a pair.
struct CommonElements {
  UserId first;
  UserId second;
  std::vector<ElementId> elements;  // matrix order
};

CommonElements common_elements(const PreferenceMatrix& m, const UserId& u1, const UserId& u2);

/// Sorted element indices known for both users.
std::vector<ElementIndex> common_element_indices(const PreferenceMatrix& m, UserIndex u1, UserIndex u2);
std::size_t common_count(const PreferenceMatrix& m, UserIndex u1, UserIndex u2);

/// Sorted, deduplicated element indices. An absent restriction means "all elements".
using ElementRestriction = std::optional<std::vector<ElementIndex>>;

/// A separation between two users computed only from their commonly known
/// preferences. Implementations must be non-negative, symmetric, zero exactly
/// when the common preferences agree, and satisfy the triangle inequality
/// when restricted to a pair's common elements.
class SeparationMeasure {
 public:
  virtual ~SeparationMeasure() = default;

  virtual std::string_view name() const = 0;

  /// Throws NoCommonElements when the (restricted) common set is empty.
  virtual double evaluate(const PreferenceMatrix& m, UserIndex u1, UserIndex u2,
                          const ElementRestriction& restrict_to = std::nullopt) const = 0;

  double evaluate(const PreferenceMatrix& m, const UserId& u1, const UserId& u2,
                  const std::optional<std::set<ElementId>>& restrict_to = std::nullopt) const;
};

/// Sum of absolute differences over the common elements. Not normalised.
class CumulativeSeparation final : public SeparationMeasure {
 public:
  using SeparationMeasure::evaluate;

  std::string_view name() const override { return "cumulative"; }

  double evaluate(const PreferenceMatrix& m, UserIndex u1, UserIndex u2,
                  const ElementRestriction& restrict_to = std::nullopt) const override;
};

double cumulative_separation(const PreferenceMatrix& m, const UserId& u1, const UserId& u2,
                             const std::optional<std::set<ElementId>>& restrict_to = std::nullopt);

/// Looks a measure up by its configuration name ("cumulative").
std::unique_ptr<SeparationMeasure> make_separation(std::string_view name);
std::vector<std::string> separation_names();

}  // namespace normcast
