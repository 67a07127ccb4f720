#include "normcast/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "normcast/error.hpp"
#include "normcast/separation.hpp"
#include "normcast/text.hpp"

namespace normcast {

void Settings::validate() const {
  experiment.validate();
  hard.validate();
  if (policy != "hard" && policy != "confident" && policy != "contextual") {
    throw Error(ErrorCode::InvalidArgument, "unknown threshold policy '" + policy + "'");
  }
  if (policy == "contextual" && !threshold_table) {
    throw Error(ErrorCode::InvalidArgument, "contextual policy needs threshold_table");
  }
}

Settings parse_settings(std::istream& in, const std::filesystem::path& base_dir, std::string_view source) {
  Settings s;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    return Error(ErrorCode::ParseError, std::string(source) + ":" + std::to_string(line_no) + ": " + what);
  };

  using Setter = std::function<void(const std::string&)>;
  auto number = [&](const std::string& v) {
    auto d = text::parse_double(v);
    if (!d) throw fail("expected a number, got '" + v + "'");
    return *d;
  };
  auto count = [&](const std::string& v) {
    auto n = text::parse_int(v);
    if (!n || *n < 0) throw fail("expected a non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(*n);
  };
  auto& e = s.experiment;
  const std::map<std::string, Setter, std::less<>> setters{
      {"separation", [&](const std::string& v) { e.separation = v; }},
      {"epsilon", [&](const std::string& v) { e.similarity.epsilon = number(v); }},
      {"nu", [&](const std::string& v) { e.similarity.nu = count(v); }},
      {"min_common", [&](const std::string& v) { e.similarity.min_common = count(v); }},
      {"fallback", [&](const std::string& v) { s.fallback = parse_fallback(v); }},
      {"rho", [&](const std::string& v) { e.confidence.rho = number(v); }},
      {"mu", [&](const std::string& v) { e.confidence.mu = number(v); }},
      {"policy", [&](const std::string& v) { s.policy = v; }},
      {"eps_prh", [&](const std::string& v) { s.hard.eps_prh = number(v); }},
      {"eps_per", [&](const std::string& v) { s.hard.eps_per = number(v); }},
      {"threshold_table", [&](const std::string& v) { s.threshold_table = base_dir / v; }},
      {"apd_cut", [&](const std::string& v) { e.regime.apd_cut = number(v); }},
      {"psd_cut", [&](const std::string& v) { e.regime.psd_cut = number(v); }},
      {"scale", [&](const std::string& v) { e.scale = AnswerScale::parse(v); }},
      {"seed", [&](const std::string& v) { e.seed = count(v); }},
      {"hardness", [&](const std::string& v) { e.hardness = parse_hardness(v); }},
      {"test_user_fraction", [&](const std::string& v) { e.test_user_fraction = number(v); }},
      {"test_answer_fraction", [&](const std::string& v) { e.test_answer_fraction = number(v); }},
      {"similarity_answer_fraction", [&](const std::string& v) { e.similarity_answer_fraction = number(v); }},
      {"medium_min_sd", [&](const std::string& v) { e.medium_min_sd = number(v); }},
      {"hard_top_k", [&](const std::string& v) { e.hard_top_k = count(v); }},
      {"histogram_bin_width", [&](const std::string& v) { e.histogram_bin_width = number(v); }},
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = std::string_view(line);
    if (auto hash = content.find('#'); hash != std::string_view::npos) content = content.substr(0, hash);
    content = text::trim(content);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) throw fail("expected key = value");
    const auto key = text::trim(content.substr(0, eq));
    auto value = text::trim(content.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    auto it = setters.find(key);
    if (it == setters.end()) throw fail("unknown key '" + std::string(key) + "'");
    try {
      it->second(std::string(value));
    } catch (const Error& err) {
      if (err.code() == ErrorCode::ParseError) throw;
      throw fail(err.what());
    }
  }
  s.validate();
  return s;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open settings '" + path.string() + "'");
  return parse_settings(in, path.parent_path(), path.string());
}

std::unique_ptr<ThresholdPolicy> make_policy(const Settings& settings) {
  if (settings.policy == "hard") return std::make_unique<HardPolicy>(settings.hard);
  if (settings.policy == "confident") return std::make_unique<ConfidentPolicy>();
  if (settings.policy == "contextual" && settings.threshold_table) {
    return std::make_unique<ContextualPolicy>(ContextualPolicy::load(*settings.threshold_table, settings.hard));
  }
  throw Error(ErrorCode::InvalidArgument, "cannot build threshold policy '" + settings.policy + "'");
}

}  // namespace normcast
