#include "normcast/preference_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "normcast/error.hpp"

namespace normcast {

UserId::UserId(std::string v) : value(std::move(v)) {
  if (value.empty()) throw Error(ErrorCode::InvalidArgument, "empty user id");
}

ElementId::ElementId(std::string v) : value(std::move(v)) {
  if (value.empty()) throw Error(ErrorCode::InvalidArgument, "empty element id");
}

PreferenceValue::PreferenceValue(double v) : value_(v) {
  if (!(v >= -1.0 && v <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "preference " + std::to_string(v) + " outside [-1, 1]");
  }
}

PreferenceMatrix PreferenceMatrix::empty_like(const PreferenceMatrix& other) {
  PreferenceMatrix m;
  m.users_ = other.users_;
  m.elements_ = other.elements_;
  m.user_lookup_ = other.user_lookup_;
  m.element_lookup_ = other.element_lookup_;
  m.rows_.resize(other.rows_.size());
  m.columns_.resize(other.columns_.size());
  return m;
}

UserIndex PreferenceMatrix::add_user(const UserId& id) {
  if (id.value.empty()) throw Error(ErrorCode::InvalidArgument, "empty user id");
  if (user_lookup_.contains(id.value)) {
    throw Error(ErrorCode::DuplicateEntry, "user '" + id.value + "' already registered");
  }
  const auto index = static_cast<UserIndex>(users_.size());
  users_.push_back(id);
  user_lookup_.emplace(id.value, index);
  rows_.emplace_back();
  return index;
}

UserIndex PreferenceMatrix::ensure_user(const UserId& id) {
  if (auto found = find_user(id)) return *found;
  return add_user(id);
}

ElementIndex PreferenceMatrix::add_element(const ElementId& id) {
  if (id.value.empty()) throw Error(ErrorCode::InvalidArgument, "empty element id");
  if (element_lookup_.contains(id.value)) {
    throw Error(ErrorCode::DuplicateEntry, "element '" + id.value + "' already registered");
  }
  const auto index = static_cast<ElementIndex>(elements_.size());
  elements_.push_back(id);
  element_lookup_.emplace(id.value, index);
  columns_.emplace_back();
  return index;
}

ElementIndex PreferenceMatrix::ensure_element(const ElementId& id) {
  if (auto found = find_element(id)) return *found;
  return add_element(id);
}

void PreferenceMatrix::set(const UserId& user, const ElementId& element, double value) {
  const PreferenceValue checked(value);
  set(user_index(user), element_index(element), checked);
}

void PreferenceMatrix::set(UserIndex user, ElementIndex element, PreferenceValue value) {
  check_user(user);
  check_element(element);
  auto& row = rows_[user];
  auto it = std::lower_bound(row.begin(), row.end(), element,
                             [](const Entry& e, ElementIndex x) { return e.element < x; });
  if (it != row.end() && it->element == element) {
    it->value = value.value();
    return;
  }
  row.insert(it, Entry{element, value.value()});
  auto& column = columns_[element];
  column.insert(std::lower_bound(column.begin(), column.end(), user), user);
  ++entry_count_;
}

bool PreferenceMatrix::erase(UserIndex user, ElementIndex element) {
  check_user(user);
  check_element(element);
  auto& row = rows_[user];
  auto it = std::lower_bound(row.begin(), row.end(), element,
                             [](const Entry& e, ElementIndex x) { return e.element < x; });
  if (it == row.end() || it->element != element) return false;
  row.erase(it);
  auto& column = columns_[element];
  column.erase(std::lower_bound(column.begin(), column.end(), user));
  --entry_count_;
  return true;
}

KnownPreference PreferenceMatrix::get(const UserId& user, const ElementId& element) const {
  if (auto v = value(user_index(user), element_index(element))) return PreferenceValue(*v);
  return std::nullopt;
}

std::optional<double> PreferenceMatrix::value(UserIndex user, ElementIndex element) const {
  check_user(user);
  check_element(element);
  const auto& row = rows_[user];
  auto it = std::lower_bound(row.begin(), row.end(), element,
                             [](const Entry& e, ElementIndex x) { return e.element < x; });
  if (it == row.end() || it->element != element) return std::nullopt;
  return it->value;
}

std::span<const Entry> PreferenceMatrix::row(UserIndex user) const {
  check_user(user);
  return rows_[user];
}

std::span<const UserIndex> PreferenceMatrix::column(ElementIndex element) const {
  check_element(element);
  return columns_[element];
}

const UserId& PreferenceMatrix::user(UserIndex index) const {
  check_user(index);
  return users_[index];
}

const ElementId& PreferenceMatrix::element(ElementIndex index) const {
  check_element(index);
  return elements_[index];
}

UserIndex PreferenceMatrix::user_index(const UserId& id) const {
  if (auto found = find_user(id)) return *found;
  throw Error(ErrorCode::NotFound, "unknown user '" + id.value + "'");
}

ElementIndex PreferenceMatrix::element_index(const ElementId& id) const {
  if (auto found = find_element(id)) return *found;
  throw Error(ErrorCode::NotFound, "unknown element '" + id.value + "'");
}

std::optional<UserIndex> PreferenceMatrix::find_user(const UserId& id) const {
  auto it = user_lookup_.find(id.value);
  if (it == user_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<ElementIndex> PreferenceMatrix::find_element(const ElementId& id) const {
  auto it = element_lookup_.find(id.value);
  if (it == element_lookup_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const PreferenceMatrix& a, const PreferenceMatrix& b) {
  if (a.user_count() != b.user_count() || a.element_count() != b.element_count() ||
      a.entry_count() != b.entry_count()) {
    return false;
  }
  for (const auto& x : a.elements_) {
    if (!b.find_element(x)) return false;
  }
  for (UserIndex u = 0; u < a.user_count(); ++u) {
    auto other = b.find_user(a.users_[u]);
    if (!other) return false;
    for (const auto& e : a.rows_[u]) {
      if (b.value(*other, b.element_index(a.elements_[e.element])) != e.value) return false;
    }
  }
  return true;
}

void PreferenceMatrix::check_user(UserIndex user) const {
  if (user >= users_.size()) {
    throw Error(ErrorCode::NotFound, "user index " + std::to_string(user) + " out of range");
  }
}

void PreferenceMatrix::check_element(ElementIndex element) const {
  if (element >= elements_.size()) {
    throw Error(ErrorCode::NotFound, "element index " + std::to_string(element) + " out of range");
  }
}

std::size_t known_count(const PreferenceMatrix& m, const UserId& user) {
  return m.row(m.user_index(user)).size();
}

CompletedProfile CompletedProfile::from_values(UserId user, const std::vector<ElementId>& elements,
                                               const std::vector<double>& values) {
  if (elements.size() != values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "element and value counts differ");
  }
  CompletedProfile p{std::move(user), {}};
  p.entries.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    p.entries.push_back({elements[i], PreferenceValue(values[i]), Provenance::Known, std::nullopt});
  }
  return p;
}

bool CompletedProfile::complete() const {
  return std::all_of(entries.begin(), entries.end(), [](const ProfileEntry& e) { return e.value.has_value(); });
}

double distance(const CompletedProfile& a, const CompletedProfile& b) {
  if (a.entries.size() != b.entries.size()) {
    throw Error(ErrorCode::DimensionMismatch, "profiles cover different element sets");
  }
  std::map<ElementId, double> other;
  for (const auto& e : b.entries) {
    if (!e.value) throw Error(ErrorCode::IncompleteProfile, "unresolved element '" + e.element.value + "'");
    other.emplace(e.element, e.value->value());
  }
  if (other.size() != b.entries.size()) {
    throw Error(ErrorCode::DimensionMismatch, "duplicate element in profile");
  }
  double sum = 0.0;
  for (const auto& e : a.entries) {
    if (!e.value) throw Error(ErrorCode::IncompleteProfile, "unresolved element '" + e.element.value + "'");
    auto it = other.find(e.element);
    if (it == other.end()) {
      throw Error(ErrorCode::DimensionMismatch, "element '" + e.element.value + "' missing from profile");
    }
    const double d = e.value->value() - it->second;
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace normcast
