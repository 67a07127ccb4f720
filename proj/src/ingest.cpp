#include "normcast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "normcast/error.hpp"
#include "normcast/text.hpp"

namespace normcast {

void AnswerScale::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorCode::InvalidArgument, "answer scale needs finite lo < hi");
  }
}

AnswerScale AnswerScale::parse(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "scale must look like lo:hi, got '" + std::string(s) + "'");
  }
  auto lo = text::parse_double(s.substr(0, colon));
  auto hi = text::parse_double(s.substr(colon + 1));
  if (!lo || !hi) throw Error(ErrorCode::InvalidArgument, "bad scale '" + std::string(s) + "'");
  AnswerScale scale{*lo, *hi};
  scale.validate();
  return scale;
}

std::string AnswerScale::str() const { return text::format_double(lo) + ":" + text::format_double(hi); }

PreferenceValue rescale_likert(double answer, double lo, double hi) {
  AnswerScale{lo, hi}.validate();
  if (!(answer >= lo && answer <= hi)) {
    throw Error(ErrorCode::OutOfScale, "answer " + text::format_double(answer) + " outside [" +
                                           text::format_double(lo) + ", " + text::format_double(hi) + "]");
  }
  // Pin the endpoints so rounding can never leave [-1, 1].
  if (answer == lo) return PreferenceValue(-1.0);
  if (answer == hi) return PreferenceValue(1.0);
  return PreferenceValue(std::clamp(-1.0 + 2.0 * (answer - lo) / (hi - lo), -1.0, 1.0));
}

double unscale_likert(double value, double lo, double hi) {
  AnswerScale{lo, hi}.validate();
  return lo + (value + 1.0) * (hi - lo) / 2.0;
}

PreferenceMatrix read_csv(std::istream& in, std::optional<AnswerScale> scale, std::string_view source) {
  if (scale) scale->validate();
  const std::string where(source);
  auto fail = [&](ErrorCode code, std::size_t line_no, const std::string& what) -> Error {
    return Error(code, where + ":" + std::to_string(line_no) + ": " + what);
  };

  PreferenceMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto fields = text::split_csv(line);
    if (!fields || fields->size() != 3) throw fail(ErrorCode::ParseError, line_no, "expected 3 fields");
    if (!header_seen) {
      if (text::trim((*fields)[0]) != "user_id" || text::trim((*fields)[1]) != "element_id" ||
          text::trim((*fields)[2]) != "answer") {
        throw fail(ErrorCode::ParseError, line_no, "header must be user_id,element_id,answer");
      }
      header_seen = true;
      continue;
    }
    const auto user_text = std::string(text::trim((*fields)[0]));
    const auto element_text = std::string(text::trim((*fields)[1]));
    if (user_text.empty() || element_text.empty()) throw fail(ErrorCode::ParseError, line_no, "empty id");
    const UserIndex u = m.ensure_user(UserId(user_text));
    const ElementIndex x = m.ensure_element(ElementId(element_text));

    const auto answer_text = text::trim((*fields)[2]);
    if (answer_text.empty()) continue;
    auto answer = text::parse_double(answer_text);
    if (!answer) throw fail(ErrorCode::ParseError, line_no, "answer is not a number");
    if (m.value(u, x)) {
      throw fail(ErrorCode::DuplicateEntry, line_no, "duplicate entry for (" + user_text + ", " + element_text + ")");
    }
    double value = *answer;
    if (scale) {
      if (!(value >= scale->lo && value <= scale->hi)) {
        throw fail(ErrorCode::OutOfScale, line_no, "answer outside scale " + scale->str());
      }
      value = rescale_likert(value, scale->lo, scale->hi).value();
    } else if (!(value >= -1.0 && value <= 1.0)) {
      throw fail(ErrorCode::OutOfScale, line_no, "answer outside [-1, 1]");
    }
    m.set(u, x, PreferenceValue(value));
  }
  if (!header_seen) throw fail(ErrorCode::ParseError, line_no, "missing header");
  return m;
}

PreferenceMatrix load_csv(const std::filesystem::path& path, std::optional<AnswerScale> scale) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return read_csv(in, scale, path.string());
}

void write_csv(std::ostream& out, const PreferenceMatrix& m) {
  out << "user_id,element_id,answer\n";
  std::vector<bool> element_seen(m.element_count(), false);
  for (UserIndex u = 0; u < m.user_count(); ++u) {
    const auto row = m.row(u);
    const auto user = text::csv_field(m.user(u).value);
    if (row.empty() && m.element_count() > 0) {
      out << user << ',' << text::csv_field(m.element(0).value) << ",\n";
      element_seen[0] = true;
    }
    for (const auto& e : row) {
      out << user << ',' << text::csv_field(m.element(e.element).value) << ',' << text::format_double(e.value)
          << '\n';
      element_seen[e.element] = true;
    }
  }
  // Elements nobody knows still need registering.
  if (m.user_count() > 0) {
    for (ElementIndex x = 0; x < m.element_count(); ++x) {
      if (!element_seen[x]) {
        out << text::csv_field(m.user(0).value) << ',' << text::csv_field(m.element(x).value) << ",\n";
      }
    }
  }
}

void dump_csv(const std::filesystem::path& path, const PreferenceMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  write_csv(out, m);
  if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

void SyntheticCohortSpec::validate() const {
  auto invalid = [](const std::string& what) { return Error(ErrorCode::InvalidSpec, what); };
  if (num_users == 0 || num_elements == 0 || num_clusters == 0) throw invalid("counts must be positive");
  if (num_clusters > num_users) throw invalid("more clusters than users");
  if (!(known_fraction > 0.0 && known_fraction <= 1.0)) throw invalid("known_fraction must lie in (0, 1]");
  if (!std::isfinite(noise_sd) || noise_sd < 0.0) throw invalid("noise_sd must be finite and non-negative");
  if (!prototypes.empty()) {
    if (prototypes.size() != num_clusters) throw invalid("one prototype per cluster required");
    for (const auto& p : prototypes) {
      if (p.size() != num_elements) throw invalid("prototype length must equal num_elements");
      for (double v : p) {
        if (!(v >= -1.0 && v <= 1.0)) throw invalid("prototype values must lie in [-1, 1]");
      }
    }
  }
}

namespace {

std::string padded(char prefix, std::size_t i, std::size_t count) {
  const auto width = std::to_string(count).size();
  auto digits = std::to_string(i);
  return std::string(1, prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
}

}  // namespace

SyntheticCohort generate_synthetic(const SyntheticCohortSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  auto prototypes = spec.prototypes;
  if (prototypes.empty()) {
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    prototypes.assign(spec.num_clusters, std::vector<double>(spec.num_elements));
    for (auto& p : prototypes) {
      for (auto& v : p) v = uniform(rng);
    }
  }

  SyntheticCohort cohort;
  for (std::size_t x = 0; x < spec.num_elements; ++x) {
    cohort.ground_truth.add_element(ElementId(padded('x', x + 1, spec.num_elements)));
  }
  for (std::size_t u = 0; u < spec.num_users; ++u) {
    cohort.ground_truth.add_user(UserId(padded('u', u + 1, spec.num_users)));
    cohort.cluster_of.push_back(u % spec.num_clusters);
  }

  std::normal_distribution<double> noise(0.0, spec.noise_sd > 0.0 ? spec.noise_sd : 1.0);
  for (UserIndex u = 0; u < spec.num_users; ++u) {
    const auto& proto = prototypes[cohort.cluster_of[u]];
    for (ElementIndex x = 0; x < spec.num_elements; ++x) {
      double v = proto[x];
      if (spec.noise_sd > 0.0) v += noise(rng);
      cohort.ground_truth.set(u, x, PreferenceValue(std::clamp(v, -1.0, 1.0)));
    }
  }

  cohort.observed = PreferenceMatrix::empty_like(cohort.ground_truth);
  std::bernoulli_distribution keep(spec.known_fraction);
  for (UserIndex u = 0; u < spec.num_users; ++u) {
    for (const auto& e : cohort.ground_truth.row(u)) {
      if (spec.known_fraction >= 1.0 || keep(rng)) cohort.observed.set(u, e.element, PreferenceValue(e.value));
    }
  }
  return cohort;
}

}  // namespace normcast
