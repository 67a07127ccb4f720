#include "normcast/separation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "normcast/error.hpp"

namespace normcast {

namespace {

// Calls fn(element, v1, v2) for every element known to both rows, in order.
template <typename Fn>
void for_each_common(std::span<const Entry> a, std::span<const Entry> b, Fn&& fn) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->element < ib->element) {
      ++ia;
    } else if (ib->element < ia->element) {
      ++ib;
    } else {
      fn(ia->element, ia->value, ib->value);
      ++ia;
      ++ib;
    }
  }
}

ElementRestriction to_restriction(const PreferenceMatrix& m,
                                  const std::optional<std::set<ElementId>>& restrict_to) {
  if (!restrict_to) return std::nullopt;
  std::vector<ElementIndex> out;
  out.reserve(restrict_to->size());
  for (const auto& id : *restrict_to) out.push_back(m.element_index(id));
  std::sort(out.begin(), out.end());
  return out;
}

using Factory = std::function<std::unique_ptr<SeparationMeasure>()>;

const std::map<std::string, Factory, std::less<>>& registry() {
  static const std::map<std::string, Factory, std::less<>> r{
      {"cumulative", [] { return std::make_unique<CumulativeSeparation>(); }},
  };
  return r;
}

}  // namespace

CommonElements common_elements(const PreferenceMatrix& m, const UserId& u1, const UserId& u2) {
  CommonElements out{u1, u2, {}};
  for (auto x : common_element_indices(m, m.user_index(u1), m.user_index(u2))) {
    out.elements.push_back(m.element(x));
  }
  return out;
}

std::vector<ElementIndex> common_element_indices(const PreferenceMatrix& m, UserIndex u1, UserIndex u2) {
  std::vector<ElementIndex> out;
  for_each_common(m.row(u1), m.row(u2), [&](ElementIndex x, double, double) { out.push_back(x); });
  return out;
}

std::size_t common_count(const PreferenceMatrix& m, UserIndex u1, UserIndex u2) {
  std::size_t n = 0;
  for_each_common(m.row(u1), m.row(u2), [&](ElementIndex, double, double) { ++n; });
  return n;
}

double SeparationMeasure::evaluate(const PreferenceMatrix& m, const UserId& u1, const UserId& u2,
                                   const std::optional<std::set<ElementId>>& restrict_to) const {
  return evaluate(m, m.user_index(u1), m.user_index(u2), to_restriction(m, restrict_to));
}

double CumulativeSeparation::evaluate(const PreferenceMatrix& m, UserIndex u1, UserIndex u2,
                                      const ElementRestriction& restrict_to) const {
  double sum = 0.0;
  std::size_t used = 0;
  for_each_common(m.row(u1), m.row(u2), [&](ElementIndex x, double a, double b) {
    if (restrict_to && !std::binary_search(restrict_to->begin(), restrict_to->end(), x)) return;
    sum += std::abs(a - b);
    ++used;
  });
  if (used == 0) {
    throw Error(ErrorCode::NoCommonElements,
                "users '" + m.user(u1).value + "' and '" + m.user(u2).value + "' share no known elements");
  }
  return sum;
}

double cumulative_separation(const PreferenceMatrix& m, const UserId& u1, const UserId& u2,
                             const std::optional<std::set<ElementId>>& restrict_to) {
  return CumulativeSeparation{}.evaluate(m, u1, u2, restrict_to);
}

std::unique_ptr<SeparationMeasure> make_separation(std::string_view name) {
  const auto& r = registry();
  auto it = r.find(name);
  if (it == r.end()) {
    throw Error(ErrorCode::NotFound, "unknown separation measure '" + std::string(name) + "'");
  }
  return it->second();
}

std::vector<std::string> separation_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

}  // namespace normcast
