#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace normcast {

struct UserId {
  std::string value;

  UserId() = default;
  explicit UserId(std::string v);

  auto operator<=>(const UserId&) const = default;
};

struct ElementId {
  std::string value;

  ElementId() = default;
  explicit ElementId(std::string v);

  auto operator<=>(const ElementId&) const = default;
};

/// A preference towards an element: -1 is total disapproval, 1 total approval.
class PreferenceValue {
 public:
  /// Throws OutOfRange unless -1 <= v <= 1 (NaN is rejected too).
  explicit PreferenceValue(double v);

  double value() const noexcept { return value_; }

  friend bool operator==(PreferenceValue, PreferenceValue) = default;

 private:
  double value_;
};

/// Known(v) or Unknown (nullopt).
using KnownPreference = std::optional<PreferenceValue>;

using UserIndex = std::uint32_t;
using ElementIndex = std::uint32_t;

struct Entry {
  ElementIndex element;
  double value;
};

/// Sparse users x elements table of known preferences. A missing entry is an
/// unknown preference. Users and elements keep their registration order; each
/// row is kept sorted by element index and each column by user index.
class PreferenceMatrix {
 public:
  PreferenceMatrix() = default;

  /// Same users and elements, no entries.
  static PreferenceMatrix empty_like(const PreferenceMatrix& other);

  /// Registers a user; throws DuplicateEntry if already present.
  UserIndex add_user(const UserId& id);
  UserIndex ensure_user(const UserId& id);
  ElementIndex add_element(const ElementId& id);
  ElementIndex ensure_element(const ElementId& id);

  void set(const UserId& user, const ElementId& element, double value);
  void set(UserIndex user, ElementIndex element, PreferenceValue value);
  bool erase(UserIndex user, ElementIndex element);

  KnownPreference get(const UserId& user, const ElementId& element) const;
  std::optional<double> value(UserIndex user, ElementIndex element) const;

  std::span<const Entry> row(UserIndex user) const;
  std::span<const UserIndex> column(ElementIndex element) const;

  std::size_t user_count() const noexcept { return users_.size(); }
  std::size_t element_count() const noexcept { return elements_.size(); }
  std::size_t entry_count() const noexcept { return entry_count_; }

  const std::vector<UserId>& users() const noexcept { return users_; }
  const std::vector<ElementId>& elements() const noexcept { return elements_; }
  const UserId& user(UserIndex index) const;
  const ElementId& element(ElementIndex index) const;

  /// Throw NotFound for unregistered ids.
  UserIndex user_index(const UserId& id) const;
  ElementIndex element_index(const ElementId& id) const;
  std::optional<UserIndex> find_user(const UserId& id) const;
  std::optional<ElementIndex> find_element(const ElementId& id) const;

  /// Same ids and known values, regardless of registration order.
  friend bool operator==(const PreferenceMatrix& a, const PreferenceMatrix& b);

 private:
  void check_user(UserIndex user) const;
  void check_element(ElementIndex element) const;

  std::vector<UserId> users_;
  std::vector<ElementId> elements_;
  std::unordered_map<std::string, UserIndex> user_lookup_;
  std::unordered_map<std::string, ElementIndex> element_lookup_;
  std::vector<std::vector<Entry>> rows_;
  std::vector<std::vector<UserIndex>> columns_;
  std::size_t entry_count_ = 0;
};

std::size_t known_count(const PreferenceMatrix& m, const UserId& user);

enum class Provenance { Known, Predicted, Unresolved };

struct ProfileEntry {
  ElementId element;
  KnownPreference value;
  Provenance provenance = Provenance::Unresolved;
  std::optional<double> confidence;
};

/// A user's profile over every element of a matrix: known values copied,
/// unknown ones predicted (or left unresolved when no prediction exists).
struct CompletedProfile {
  UserId user;
  std::vector<ProfileEntry> entries;

  static CompletedProfile from_values(UserId user, const std::vector<ElementId>& elements,
                                      const std::vector<double>& values);

  bool complete() const;
};

/// Euclidean distance between two complete profiles over the same element set.
double distance(const CompletedProfile& a, const CompletedProfile& b);

}  // namespace normcast
