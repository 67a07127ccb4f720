#include "normcast/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include "normcast/error.hpp"
#include "normcast/prediction.hpp"
#include "normcast/separation.hpp"
#include "normcast/text.hpp"

namespace normcast {

Hardness parse_hardness(std::string_view name) {
  if (name == "regular") return Hardness::Regular;
  if (name == "medium") return Hardness::Medium;
  if (name == "hard") return Hardness::Hard;
  throw Error(ErrorCode::InvalidArgument, "unknown hardness '" + std::string(name) + "'");
}

std::string_view to_string(Hardness h) {
  switch (h) {
    case Hardness::Regular: return "regular";
    case Hardness::Medium: return "medium";
    case Hardness::Hard: return "hard";
  }
  return "regular";
}

BaselineKind parse_baseline(std::string_view name) {
  if (name == "random") return BaselineKind::Random;
  if (name == "element_mean") return BaselineKind::GlobalElementMean;
  throw Error(ErrorCode::InvalidArgument, "unknown baseline '" + std::string(name) + "'");
}

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::Random: return "random";
    case BaselineKind::GlobalElementMean: return "element_mean";
  }
  return "random";
}

void ExperimentConfig::validate() const {
  auto fraction = [](double f, const char* name) {
    if (!(f > 0.0 && f < 1.0)) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must lie in (0, 1)");
  };
  fraction(test_user_fraction, "test_user_fraction");
  fraction(test_answer_fraction, "test_answer_fraction");
  fraction(similarity_answer_fraction, "similarity_answer_fraction");
  if (!(medium_min_sd >= 0.0)) throw Error(ErrorCode::InvalidArgument, "medium_min_sd must be non-negative");
  if (hard_top_k == 0) throw Error(ErrorCode::InvalidArgument, "hard_top_k must be positive");
  if (!(histogram_bin_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "histogram_bin_width must be positive");
  similarity.validate();
  confidence.validate();
  regime.validate();
  scale.validate();
  make_separation(separation);
}

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Answer spread of one user on the answer scale.
double answer_sd(const PreferenceMatrix& m, UserIndex u, const AnswerScale& scale) {
  const auto row = m.row(u);
  if (row.empty()) return 0.0;
  std::vector<double> values;
  values.reserve(row.size());
  for (const auto& e : row) values.push_back(e.value);
  std::sort(values.begin(), values.end());  // summation order independent of registration order
  return sample_sd(values) * scale.stretch();
}

// Users by ascending id, so splits depend on content rather than registration order.
std::vector<UserIndex> users_by_id(const PreferenceMatrix& m) {
  std::vector<UserIndex> order(m.user_count());
  std::iota(order.begin(), order.end(), UserIndex{0});
  std::sort(order.begin(), order.end(), [&](UserIndex a, UserIndex b) { return m.user(a) < m.user(b); });
  return order;
}

std::size_t fraction_of(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

std::vector<UserIndex> choose_test_users(const PreferenceMatrix& ground, const ExperimentConfig& cfg,
                                         std::mt19937_64& rng) {
  const std::size_t n_users = ground.user_count();
  std::vector<UserIndex> chosen;
  switch (cfg.hardness) {
    case Hardness::Regular:
    case Hardness::Medium: {
      std::vector<UserIndex> eligible;
      for (UserIndex u : users_by_id(ground)) {
        if (cfg.hardness == Hardness::Regular || answer_sd(ground, u, cfg.scale) >= cfg.medium_min_sd) {
          eligible.push_back(u);
        }
      }
      std::shuffle(eligible.begin(), eligible.end(), rng);
      eligible.resize(std::min(eligible.size(), fraction_of(cfg.test_user_fraction, n_users)));
      chosen = std::move(eligible);
      break;
    }
    case Hardness::Hard: {
      std::vector<std::pair<double, UserIndex>> by_sd;
      for (UserIndex u : users_by_id(ground)) by_sd.emplace_back(answer_sd(ground, u, cfg.scale), u);
      std::stable_sort(by_sd.begin(), by_sd.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t i = 0; i < std::min(cfg.hard_top_k, by_sd.size()); ++i) chosen.push_back(by_sd[i].second);
      break;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

ExperimentReport empty_report(const ExperimentConfig& cfg, std::string method, const Split& split) {
  ExperimentReport r;
  r.method = std::move(method);
  r.hardness = cfg.hardness;
  r.seed = cfg.seed;
  r.scale = cfg.scale;
  r.separation = cfg.separation;
  r.similarity = cfg.similarity;
  r.confidence = cfg.confidence;
  r.n_test_users = split.test_users.size();
  r.n_targets = split.targets.size();
  return r;
}

void finish_report(ExperimentReport& r, const ExperimentConfig& cfg) {
  std::vector<double> distances;
  distances.reserve(r.per_prediction.size());
  for (const auto& p : r.per_prediction) distances.push_back(p.distance);
  r.n_predictions = distances.size();
  r.coverage = r.n_targets == 0 ? 0.0 : static_cast<double>(r.n_predictions) / static_cast<double>(r.n_targets);
  if (!distances.empty()) {
    r.mean_distance = mean_of(distances);
    r.sd_distance = sample_sd(distances);
  }
  r.histogram = histogram(distances, cfg.histogram_bin_width);
  r.regime = classify_regime(r.mean_distance / cfg.scale.stretch(), r.sd_distance / cfg.scale.stretch(), cfg.regime);
}

PredictionRecord make_record(const PreferenceMatrix& ground, const ExperimentConfig& cfg, UserIndex u,
                             ElementIndex x, double predicted) {
  const double actual = *ground.value(u, x);
  PredictionRecord rec;
  rec.user = ground.user(u);
  rec.element = ground.element(x);
  rec.predicted = unscale_likert(predicted, cfg.scale.lo, cfg.scale.hi);
  rec.actual = unscale_likert(actual, cfg.scale.lo, cfg.scale.hi);
  rec.distance = std::abs(predicted - actual) * cfg.scale.stretch();
  return rec;
}

}  // namespace

Split make_split(const PreferenceMatrix& ground, const ExperimentConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);

  Split split;
  split.test_users = choose_test_users(ground, cfg, rng);
  if (split.test_users.empty()) throw Error(ErrorCode::InvalidSplit, "no test users selected");
  if (split.test_users.size() >= ground.user_count()) throw Error(ErrorCode::InvalidSplit, "empty knowledge pool");
  split.is_test.assign(ground.user_count(), false);
  for (auto u : split.test_users) split.is_test[u] = true;

  split.similarity = PreferenceMatrix::empty_like(ground);
  split.knowledge = PreferenceMatrix::empty_like(ground);
  auto by_element_id = [&](ElementIndex a, ElementIndex b) { return ground.element(a) < ground.element(b); };
  for (UserIndex u : users_by_id(ground)) {
    const auto row = ground.row(u);
    std::vector<ElementIndex> answered;
    answered.reserve(row.size());
    for (const auto& e : row) answered.push_back(e.element);
    std::sort(answered.begin(), answered.end(), by_element_id);

    std::size_t n_targets = 0;
    if (split.is_test[u]) {
      std::shuffle(answered.begin(), answered.end(), rng);
      n_targets = std::min(answered.size(), fraction_of(cfg.test_answer_fraction, row.size()));
      for (std::size_t i = 0; i < n_targets; ++i) split.targets.emplace_back(u, answered[i]);
    }
    std::vector<ElementIndex> rest(answered.begin() + static_cast<std::ptrdiff_t>(n_targets), answered.end());
    for (auto x : rest) split.knowledge.set(u, x, PreferenceValue(*ground.value(u, x)));

    std::shuffle(rest.begin(), rest.end(), rng);
    rest.resize(std::min(rest.size(), fraction_of(cfg.similarity_answer_fraction, row.size())));
    for (auto x : rest) split.similarity.set(u, x, PreferenceValue(*ground.value(u, x)));
  }
  std::sort(split.targets.begin(), split.targets.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return ground.user(a.first) < ground.user(b.first);
    return by_element_id(a.second, b.second);
  });
  return split;
}

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "bin width must be positive");
  if (values.empty()) return {};
  const double max = *std::max_element(values.begin(), values.end());
  const auto n_bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(max / bin_width)));
  std::vector<HistogramBin> bins;
  for (std::size_t i = 0; i < n_bins; ++i) {
    bins.push_back({static_cast<double>(i) * bin_width, static_cast<double>(i + 1) * bin_width, 0});
  }
  for (double v : values) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "histogram values must be non-negative");
    auto bin = static_cast<std::size_t>(std::floor(v / bin_width));
    ++bins[std::min(bin, n_bins - 1)].count;
  }
  return bins;
}

ExperimentReport run_experiment(const PreferenceMatrix& ground, const ExperimentConfig& cfg) {
  const Split split = make_split(ground, cfg);
  const auto sep = make_separation(cfg.separation);
  const std::size_t needed = std::max<std::size_t>(1, cfg.similarity.min_common);
  ExperimentReport report = empty_report(cfg, "predictor", split);

  std::vector<std::optional<double>> separation(ground.user_count());
  UserIndex current = 0;
  bool have_current = false;
  for (const auto& [u, x] : split.targets) {
    if (!have_current || u != current) {
      current = u;
      have_current = true;
      for (UserIndex other = 0; other < ground.user_count(); ++other) {
        separation[other].reset();
        if (split.is_test[other]) continue;
        if (common_count(split.similarity, u, other) < needed) continue;
        separation[other] = sep->evaluate(split.similarity, u, other);
      }
    }

    std::vector<Candidate> candidates;
    for (auto other : split.knowledge.column(x)) {
      if (separation[other]) candidates.push_back({other, *separation[other]});
    }
    if (candidates.empty()) continue;

    SimilarSet neighbors{ground.user(u), ground.element(x), {}, cfg.similarity};
    for (const auto& c : select_similar(split.knowledge, std::move(candidates), cfg.similarity)) {
      neighbors.members.push_back({ground.user(c.index), c.index, c.separation});
    }
    const auto prediction = predict_average(split.knowledge, neighbors);
    const auto sample = neighbor_sample(split.knowledge, neighbors);

    auto rec = make_record(ground, cfg, u, x, prediction.value.value());
    rec.mean_separation = neighbors.mean_separation();
    rec.neighbor_sd = sample_sd(sample);
    rec.confidence = rho_mu_confidence(*rec.mean_separation, *rec.neighbor_sd, cfg.confidence);
    rec.neighbors = neighbors.members.size();
    report.per_prediction.push_back(std::move(rec));
  }
  finish_report(report, cfg);
  return report;
}

ExperimentReport run_baseline(const PreferenceMatrix& ground, const ExperimentConfig& cfg, BaselineKind kind) {
  const Split split = make_split(ground, cfg);
  ExperimentReport report = empty_report(cfg, std::string(to_string(kind)), split);

  std::seed_seq seq{cfg.seed, std::uint64_t{0x62617365}};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  std::map<ElementIndex, std::optional<double>> pool_mean;
  auto element_mean = [&](ElementIndex x) -> std::optional<double> {
    auto [it, inserted] = pool_mean.try_emplace(x);
    if (inserted) {
      double sum = 0.0;
      std::size_t n = 0;
      for (auto other : split.knowledge.column(x)) {
        if (split.is_test[other]) continue;
        sum += *split.knowledge.value(other, x);
        ++n;
      }
      if (n > 0) it->second = sum / static_cast<double>(n);
    }
    return it->second;
  };

  for (const auto& [u, x] : split.targets) {
    std::optional<double> predicted;
    if (kind == BaselineKind::Random) {
      predicted = uniform(rng);
    } else {
      predicted = element_mean(x);
    }
    if (!predicted) continue;
    report.per_prediction.push_back(make_record(ground, cfg, u, x, *predicted));
  }
  finish_report(report, cfg);
  return report;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::DimensionMismatch, "spearman inputs differ in length");
  if (xs.size() < 2) throw Error(ErrorCode::UndefinedCorrelation, "need at least two points");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double mx = mean_of(rx);
  const double my = mean_of(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::UndefinedCorrelation, "constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TuneResult tune_confidence(const ExperimentReport& report, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw Error(ErrorCode::InvalidArgument, "grid step must lie in (0, 1]");
  if (report.per_prediction.size() < 2) throw Error(ErrorCode::UndefinedCorrelation, "fewer than two predictions");

  std::vector<double> distances;
  for (const auto& p : report.per_prediction) {
    if (!p.mean_separation || !p.neighbor_sd) {
      throw Error(ErrorCode::InvalidArgument, "report lacks neighbour statistics");
    }
    distances.push_back(p.distance);
  }

  std::vector<double> grid;
  const auto steps = static_cast<std::size_t>(std::floor(1.0 / grid_step + 1e-9));
  // k / steps prints as 0.41 where k * 0.01 would not.
  const bool even = std::abs(static_cast<double>(steps) * grid_step - 1.0) < 1e-9;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double rho = even ? static_cast<double>(k) / static_cast<double>(steps) : static_cast<double>(k) * grid_step;
    grid.push_back(std::min(1.0, rho));
  }
  if (grid.back() < 1.0 - 1e-12) grid.push_back(1.0);

  std::optional<TuneResult> best;
  std::vector<double> conf(distances.size());
  for (double rho : grid) {
    const ConfidenceParams params{rho, 1.0 - rho};
    for (std::size_t i = 0; i < distances.size(); ++i) {
      const auto& p = report.per_prediction[i];
      conf[i] = rho_mu_confidence(*p.mean_separation, *p.neighbor_sd, params);
    }
    try {
      const double corr = spearman(conf, distances);
      if (!best || corr < best->correlation) best = TuneResult{params.rho, params.mu, corr};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UndefinedCorrelation) throw;
    }
  }
  if (!best) throw Error(ErrorCode::UndefinedCorrelation, "confidence or distance is constant at every grid point");
  return *best;
}

namespace {

constexpr std::string_view kReportMagic = "# normcast experiment report v1";
constexpr std::string_view kPredictionHeader =
    "user_id,element_id,predicted,actual,distance,confidence,mean_separation,neighbor_sd,neighbors";
constexpr std::string_view kHistogramHeader = "bin_lo,bin_hi,count";

std::string optional_field(const std::optional<double>& v) { return v ? text::format_double(*v) : std::string(); }

}  // namespace

void write_report(std::ostream& out, const ExperimentReport& r) {
  auto num = text::format_double;
  out << kReportMagic << '\n';
  out << "method=" << r.method << '\n';
  out << "hardness=" << to_string(r.hardness) << '\n';
  out << "seed=" << r.seed << '\n';
  out << "scale=" << r.scale.str() << '\n';
  out << "separation=" << r.separation << '\n';
  out << "epsilon=" << num(r.similarity.epsilon) << '\n';
  out << "nu=" << r.similarity.nu << '\n';
  out << "min_common=" << r.similarity.min_common << '\n';
  out << "rho=" << num(r.confidence.rho) << '\n';
  out << "mu=" << num(r.confidence.mu) << '\n';
  out << "n_test_users=" << r.n_test_users << '\n';
  out << "n_targets=" << r.n_targets << '\n';
  out << "n_predictions=" << r.n_predictions << '\n';
  out << "coverage=" << num(r.coverage) << '\n';
  out << "mean_distance=" << num(r.mean_distance) << '\n';
  out << "sd_distance=" << num(r.sd_distance) << '\n';
  out << "regime=" << to_string(r.regime) << '\n';
  out << "[predictions]\n" << kPredictionHeader << '\n';
  for (const auto& p : r.per_prediction) {
    out << text::csv_field(p.user.value) << ',' << text::csv_field(p.element.value) << ',' << num(p.predicted) << ','
        << num(p.actual) << ',' << num(p.distance) << ',' << optional_field(p.confidence) << ','
        << optional_field(p.mean_separation) << ',' << optional_field(p.neighbor_sd) << ',' << p.neighbors << '\n';
  }
  out << "[histogram]\n" << kHistogramHeader << '\n';
  for (const auto& b : r.histogram) out << num(b.lo) << ',' << num(b.hi) << ',' << b.count << '\n';
}

ExperimentReport read_report(std::istream& in) {
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    return Error(ErrorCode::ParseError, "report line " + std::to_string(line_no) + ": " + what);
  };
  auto number = [&](std::string_view s) {
    auto v = text::parse_double(s);
    if (!v) throw fail("expected a number, got '" + std::string(s) + "'");
    return *v;
  };
  auto count = [&](std::string_view s) {
    auto v = text::parse_int(s);
    if (!v || *v < 0) throw fail("expected a count, got '" + std::string(s) + "'");
    return static_cast<std::size_t>(*v);
  };
  auto optional_number = [&](std::string_view s) -> std::optional<double> {
    if (text::trim(s).empty()) return std::nullopt;
    return number(s);
  };

  ExperimentReport r;
  std::string line;
  enum class Section { Header, Predictions, Histogram } section = Section::Header;
  bool expect_columns = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kReportMagic) throw fail("not a normcast report");
      continue;
    }
    if (line.empty()) continue;
    if (line == "[predictions]" || line == "[histogram]") {
      section = line == "[predictions]" ? Section::Predictions : Section::Histogram;
      expect_columns = true;
      continue;
    }
    if (expect_columns) {
      const auto expected = section == Section::Predictions ? kPredictionHeader : kHistogramHeader;
      if (line != expected) throw fail("unexpected column header");
      expect_columns = false;
      continue;
    }
    if (section == Section::Header) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw fail("expected key=value");
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 1);
      if (key == "method") r.method = value;
      else if (key == "hardness") r.hardness = parse_hardness(value);
      else if (key == "seed") r.seed = count(value);
      else if (key == "scale") r.scale = AnswerScale::parse(value);
      else if (key == "separation") r.separation = value;
      else if (key == "epsilon") r.similarity.epsilon = number(value);
      else if (key == "nu") r.similarity.nu = count(value);
      else if (key == "min_common") r.similarity.min_common = count(value);
      else if (key == "rho") r.confidence.rho = number(value);
      else if (key == "mu") r.confidence.mu = number(value);
      else if (key == "n_test_users") r.n_test_users = count(value);
      else if (key == "n_targets") r.n_targets = count(value);
      else if (key == "n_predictions") r.n_predictions = count(value);
      else if (key == "coverage") r.coverage = number(value);
      else if (key == "mean_distance") r.mean_distance = number(value);
      else if (key == "sd_distance") r.sd_distance = number(value);
      else if (key == "regime") {
        static const std::map<std::string, Regime, std::less<>> regimes{
            {"any_method", Regime::AnyMethod},
            {"avoid_hard_thresholds", Regime::AvoidHardThresholds},
            {"do_not_use_predictions", Regime::DoNotUsePredictions},
            {"function_thresholds_provisional", Regime::FunctionThresholdsProvisional}};
        auto it = regimes.find(value);
        if (it == regimes.end()) throw fail("unknown regime '" + value + "'");
        r.regime = it->second;
      } else {
        throw fail("unknown key '" + key + "'");
      }
      continue;
    }
    auto fields = text::split_csv(line);
    if (!fields) throw fail("unterminated quote");
    if (section == Section::Predictions) {
      if (fields->size() != 9) throw fail("expected 9 fields");
      const auto& f = *fields;
      PredictionRecord p;
      p.user = UserId(f[0]);
      p.element = ElementId(f[1]);
      p.predicted = number(f[2]);
      p.actual = number(f[3]);
      p.distance = number(f[4]);
      p.confidence = optional_number(f[5]);
      p.mean_separation = optional_number(f[6]);
      p.neighbor_sd = optional_number(f[7]);
      p.neighbors = count(f[8]);
      r.per_prediction.push_back(std::move(p));
    } else {
      if (fields->size() != 3) throw fail("expected 3 fields");
      r.histogram.push_back({number((*fields)[0]), number((*fields)[1]), count((*fields)[2])});
    }
  }
  if (line_no == 0) throw Error(ErrorCode::ParseError, "empty report");
  if (r.per_prediction.size() != r.n_predictions) {
    throw Error(ErrorCode::ParseError, "n_predictions disagrees with the prediction table");
  }
  return r;
}

}  // namespace normcast
