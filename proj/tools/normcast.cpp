// normcast: predict unknown preferences from similar users and turn them into norms.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "normcast/config.hpp"
#include "normcast/error.hpp"
#include "normcast/evaluate.hpp"
#include "normcast/ingest.hpp"
#include "normcast/norms.hpp"
#include "normcast/prediction.hpp"
#include "normcast/separation.hpp"
#include "normcast/text.hpp"

namespace {

using namespace normcast;

Settings settings_from(const std::string& path) { return path.empty() ? Settings{} : load_settings(path); }

// Writes to the file when a path is given, stdout otherwise.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << content;
}

// element_id,variable,value rows.
std::map<std::string, ContextVars> load_contexts(const std::string& path) {
  std::map<std::string, ContextVars> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open context file '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto fields = text::split_csv(line);
    if (!fields || fields->size() != 3) {
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line_no) + ": expected element_id,variable,value");
    }
    if (line_no == 1 && (*fields)[0] == "element_id") continue;
    out[(*fields)[0]][(*fields)[1]] = (*fields)[2];
  }
  return out;
}

CompletedProfile complete_for(const PreferenceMatrix& m, const std::string& user, const Settings& settings) {
  const auto sep = make_separation(settings.experiment.separation);
  const AveragePredictor predictor(m, *sep, settings.experiment.similarity, settings.experiment.confidence);
  return complete_profile(m, UserId(user), predictor, settings.fallback);
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Known: return "known";
    case Provenance::Predicted: return "predicted";
    case Provenance::Unresolved: return "unresolved";
  }
  return "unresolved";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative preference prediction and norm inference"};
  app.require_subcommand(1);

  std::string input, scale_text, out_path;
  auto* ingest = app.add_subcommand("ingest", "Load a user_id,element_id,answer CSV into a [-1,1] matrix file");
  ingest->add_option("--input", input, "Raw response CSV")->required();
  ingest->add_option("--scale", scale_text, "Answer scale lo:hi; values are rescaled into [-1,1]");
  ingest->add_option("--out", out_path, "Matrix file (stdout when omitted)");

  SyntheticCohortSpec synth_spec;
  std::string truth_path, observed_path;
  auto* synth = app.add_subcommand("synth", "Generate a clustered synthetic cohort");
  synth->add_option("--users", synth_spec.num_users)->capture_default_str();
  synth->add_option("--elements", synth_spec.num_elements)->capture_default_str();
  synth->add_option("--clusters", synth_spec.num_clusters)->capture_default_str();
  synth->add_option("--known-fraction", synth_spec.known_fraction)->capture_default_str();
  synth->add_option("--noise", synth_spec.noise_sd)->capture_default_str();
  synth->add_option("--seed", synth_spec.seed)->capture_default_str();
  synth->add_option("--truth", truth_path, "Ground-truth matrix output")->required();
  synth->add_option("--observed", observed_path, "Observed matrix output");

  std::string matrix_path, config_path, report_path, hardness_text, baseline_text = "none";
  std::optional<std::uint64_t> seed;
  auto* evaluate = app.add_subcommand("evaluate", "Run the held-out prediction experiment");
  evaluate->add_option("--matrix", matrix_path, "Matrix file with values in [-1,1]")->required();
  evaluate->add_option("--hardness", hardness_text, "regular | medium | hard");
  evaluate->add_option("--seed", seed, "Split seed");
  evaluate->add_option("--config", config_path, "Settings file");
  evaluate->add_option("--scale", scale_text, "Answer scale lo:hi distances are reported on");
  evaluate->add_option("--baseline", baseline_text, "none | random | element_mean")->capture_default_str();
  evaluate->add_option("--report", report_path, "Report output (stdout when omitted)");

  double step = 0.01;
  auto* tune = app.add_subcommand("tune-confidence", "Search rho/mu for the strongest confidence-distance correlation");
  tune->add_option("--report", report_path, "Report written by evaluate")->required();
  tune->add_option("--step", step, "Grid step for rho")->capture_default_str();

  std::string user, context_path;
  auto* predict = app.add_subcommand("predict", "Complete one user's profile");
  predict->add_option("--matrix", matrix_path)->required();
  predict->add_option("--user", user)->required();
  predict->add_option("--config", config_path);
  predict->add_option("--out", out_path);

  auto* infer = app.add_subcommand("infer-norms", "Infer norms for one user");
  infer->add_option("--matrix", matrix_path)->required();
  infer->add_option("--user", user)->required();
  infer->add_option("--config", config_path);
  infer->add_option("--context", context_path, "element_id,variable,value CSV for contextual thresholds");
  infer->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      std::optional<AnswerScale> scale;
      if (!scale_text.empty()) scale = AnswerScale::parse(scale_text);
      const auto m = load_csv(input, scale);
      std::ostringstream out;
      write_csv(out, m);
      emit(out_path, out.str());
      std::cerr << "ingested " << m.entry_count() << " answers from " << m.user_count() << " users over "
                << m.element_count() << " elements\n";
    } else if (synth->parsed()) {
      const auto cohort = generate_synthetic(synth_spec);
      dump_csv(truth_path, cohort.ground_truth);
      if (!observed_path.empty()) dump_csv(observed_path, cohort.observed);
    } else if (evaluate->parsed()) {
      auto settings = settings_from(config_path);
      auto& cfg = settings.experiment;
      if (!hardness_text.empty()) cfg.hardness = parse_hardness(hardness_text);
      if (seed) cfg.seed = *seed;
      if (!scale_text.empty()) cfg.scale = AnswerScale::parse(scale_text);
      const auto ground = load_csv(matrix_path);
      const auto report = baseline_text == "none" ? run_experiment(ground, cfg)
                                                  : run_baseline(ground, cfg, parse_baseline(baseline_text));
      std::ostringstream out;
      write_report(out, report);
      emit(report_path, out.str());
      std::cerr << report.method << " " << to_string(report.hardness) << ": " << report.n_predictions
                << " predictions, mean distance " << text::format_double(report.mean_distance) << ", sd "
                << text::format_double(report.sd_distance) << ", coverage " << text::format_double(report.coverage)
                << '\n';
    } else if (tune->parsed()) {
      std::ifstream in(report_path);
      if (!in) throw Error(ErrorCode::Io, "cannot open report '" + report_path + "'");
      const auto best = tune_confidence(read_report(in), step);
      std::cout << "rho=" << text::format_double(best.rho) << "\nmu=" << text::format_double(best.mu)
                << "\ncorrelation=" << text::format_double(best.correlation) << '\n';
    } else if (predict->parsed()) {
      const auto settings = settings_from(config_path);
      const auto m = load_csv(matrix_path);
      const auto profile = complete_for(m, user, settings);
      std::ostringstream out;
      out << "user_id,element_id,value,provenance,confidence\n";
      for (const auto& e : profile.entries) {
        out << text::csv_field(user) << ',' << text::csv_field(e.element.value) << ','
            << (e.value ? text::format_double(e.value->value()) : "") << ',' << provenance_name(e.provenance) << ','
            << (e.confidence ? text::format_double(*e.confidence) : "") << '\n';
      }
      emit(out_path, out.str());
    } else if (infer->parsed()) {
      const auto settings = settings_from(config_path);
      if (settings.policy == "hard" && settings.hard.degenerate()) {
        std::cerr << "warning: thresholds (0, 0) regulate every element\n";
      }
      const auto policy = make_policy(settings);
      const auto contexts = load_contexts(context_path);
      const auto m = load_csv(matrix_path);
      const auto profile = complete_for(m, user, settings);
      std::ostringstream out;
      out << "user_id,element_id,outcome,preference,confidence,prh_threshold,per_threshold\n";
      for (const auto& e : profile.entries) {
        if (!e.value) continue;
        auto ctx = contexts.find(e.element.value);
        const auto d = infer_norm(e.element, *e.value, e.confidence, *policy,
                                  ctx == contexts.end() ? ContextVars{} : ctx->second);
        out << text::csv_field(user) << ',' << text::csv_field(d.element.value) << ',' << to_string(d.outcome) << ','
            << text::format_double(d.preference) << ','
            << (d.confidence ? text::format_double(*d.confidence) : "") << ','
            << text::format_double(d.thresholds.prh) << ',' << text::format_double(d.thresholds.per) << '\n';
      }
      emit(out_path, out.str());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
