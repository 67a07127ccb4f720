#include "normcast/norms.hpp"

#include <cmath>
#include <fstream>

#include "normcast/error.hpp"
#include "normcast/text.hpp"

namespace normcast {

std::string_view to_string(NormOutcome outcome) {
  switch (outcome) {
    case NormOutcome::Prohibition: return "PRH";
    case NormOutcome::Permission: return "PER";
    case NormOutcome::NoNorm: return "NONE";
  }
  return "NONE";
}

void HardThresholds::validate() const {
  if (!(eps_prh >= -1.0 && eps_prh <= 0.0 && eps_per >= 0.0 && eps_per <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "thresholds must satisfy -1 <= eps_prh <= 0 <= eps_per <= 1");
  }
}

std::optional<Norm> NormDecision::norm() const {
  switch (outcome) {
    case NormOutcome::Prohibition: return Norm{element, Deontic::Prohibition};
    case NormOutcome::Permission: return Norm{element, Deontic::Permission};
    case NormOutcome::NoNorm: return std::nullopt;
  }
  return std::nullopt;
}

NormDecision hard_threshold_norm(const ElementId& element, PreferenceValue p, const HardThresholds& t) {
  t.validate();
  const double v = p.value();
  NormOutcome outcome = NormOutcome::NoNorm;
  if (v <= t.eps_prh) {
    outcome = NormOutcome::Prohibition;
  } else if (v >= t.eps_per) {
    outcome = NormOutcome::Permission;
  }
  return NormDecision{element, outcome, v, std::nullopt, {t.eps_prh, t.eps_per}};
}

ThresholdPair confident_thresholds(double conf) {
  if (!(conf >= 0.0 && conf <= 1.0)) {
    throw Error(ErrorCode::InvalidConfidence, "confidence " + std::to_string(conf) + " outside [0, 1]");
  }
  return {-1.0 + conf / 3.0, 1.0 - 2.0 * conf / 3.0};
}

HardPolicy::HardPolicy(HardThresholds t) : t_(t) { t_.validate(); }

ThresholdPair HardPolicy::thresholds(std::optional<double>, const ContextVars&) const {
  return {t_.eps_prh, t_.eps_per};
}

ThresholdPair ConfidentPolicy::thresholds(std::optional<double> confidence, const ContextVars&) const {
  if (!confidence) throw Error(ErrorCode::MissingConfidence, "confident thresholds need a confidence");
  return confident_thresholds(*confidence);
}

ContextualPolicy::ContextualPolicy(std::vector<Rule> rules, HardThresholds fallback)
    : rules_(std::move(rules)), fallback_(fallback) {
  fallback_.validate();
  for (const auto& rule : rules_) rule.thresholds.validate();
}

ContextualPolicy ContextualPolicy::load(const std::filesystem::path& path, HardThresholds fallback) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open threshold table '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  std::vector<Rule> rules;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto fields = text::split_csv(line);
    if (!fields || fields->size() != 4) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected 4 fields");
    }
    if (line_no == 1) {
      if ((*fields)[0] != "variable") {
        throw Error(ErrorCode::ParseError, path.string() + ": header must be variable,value,eps_prh,eps_per");
      }
      continue;
    }
    auto prh = text::parse_double((*fields)[2]);
    auto per = text::parse_double((*fields)[3]);
    if (!prh || !per) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": bad threshold");
    }
    rules.push_back({(*fields)[0], (*fields)[1], {*prh, *per}});
  }
  return ContextualPolicy(std::move(rules), fallback);
}

ThresholdPair ContextualPolicy::thresholds(std::optional<double>, const ContextVars& context) const {
  for (const auto& rule : rules_) {
    auto it = context.find(rule.variable);
    if (it != context.end() && it->second == rule.value) {
      return {rule.thresholds.eps_prh, rule.thresholds.eps_per};
    }
  }
  return {fallback_.eps_prh, fallback_.eps_per};
}

NormDecision infer_norm(const ElementId& element, PreferenceValue value, std::optional<double> confidence,
                        const ThresholdPolicy& policy, const ContextVars& context) {
  if (policy.requires_confidence() && !confidence) {
    throw Error(ErrorCode::MissingConfidence, "no confidence for '" + element.value + "'");
  }
  const auto t = policy.thresholds(confidence, context);
  auto decision = hard_threshold_norm(element, value, HardThresholds{t.prh, t.per});
  decision.confidence = confidence;
  return decision;
}

NormDecision infer_norm(const Prediction& pred, const ThresholdPolicy& policy, const ContextVars& context) {
  return infer_norm(pred.element, pred.value, pred.confidence, policy, context);
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::AnyMethod: return "any_method";
    case Regime::AvoidHardThresholds: return "avoid_hard_thresholds";
    case Regime::DoNotUsePredictions: return "do_not_use_predictions";
    case Regime::FunctionThresholdsProvisional: return "function_thresholds_provisional";
  }
  return "any_method";
}

void RegimeThresholds::validate() const {
  if (!(apd_cut > 0.0) || !(psd_cut > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "regime cuts must be positive");
  }
}

Regime classify_regime(double apd, double psd, const RegimeThresholds& cuts) {
  cuts.validate();
  if (!(apd >= 0.0) || !(psd >= 0.0)) throw Error(ErrorCode::InvalidArgument, "APD and PSD must be non-negative");
  const bool low_apd = apd < cuts.apd_cut;
  const bool low_psd = psd < cuts.psd_cut;
  if (low_apd) return low_psd ? Regime::AnyMethod : Regime::AvoidHardThresholds;
  return low_psd ? Regime::DoNotUsePredictions : Regime::FunctionThresholdsProvisional;
}

}  // namespace normcast
