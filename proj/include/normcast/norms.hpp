#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "normcast/prediction.hpp"
#include "normcast/preference_model.hpp"

namespace normcast {

enum class Deontic { Prohibition, Permission };

struct Norm {
  ElementId element;
  Deontic deontic;
};

enum class NormOutcome { Prohibition, Permission, NoNorm };

/// "PRH", "PER" or "NONE".
std::string_view to_string(NormOutcome outcome);

struct ThresholdPair {
  double prh;
  double per;
};

/// Fixed cut points splitting [-1, 1] into prohibition, no norm and permission.
struct HardThresholds {
  double eps_prh = -0.25;
  double eps_per = 0.25;

  /// Throws InvalidArgument unless -1 <= eps_prh <= 0 <= eps_per <= 1.
  void validate() const;
  /// (0, 0) regulates every element.
  bool degenerate() const { return eps_prh == 0.0 && eps_per == 0.0; }
};

struct NormDecision {
  ElementId element;
  NormOutcome outcome;
  double preference;
  std::optional<double> confidence;
  ThresholdPair thresholds;

  std::optional<Norm> norm() const;
};

/// Prohibition when p <= eps_prh, permission when p >= eps_per, otherwise no norm.
NormDecision hard_threshold_norm(const ElementId& element, PreferenceValue p, const HardThresholds& t);

/// (-1 + conf/3, 1 - 2*conf/3). Throws InvalidConfidence outside [0, 1].
ThresholdPair confident_thresholds(double conf);

using ContextVars = std::map<std::string, std::string>;

class ThresholdPolicy {
 public:
  virtual ~ThresholdPolicy() = default;

  virtual std::string_view name() const = 0;
  virtual bool requires_confidence() const { return false; }
  /// Result always satisfies prh in [-1, 0] and per in [0, 1].
  virtual ThresholdPair thresholds(std::optional<double> confidence, const ContextVars& context) const = 0;
};

class HardPolicy final : public ThresholdPolicy {
 public:
  explicit HardPolicy(HardThresholds t);

  std::string_view name() const override { return "hard"; }
  ThresholdPair thresholds(std::optional<double>, const ContextVars&) const override;

 private:
  HardThresholds t_;
};

class ConfidentPolicy final : public ThresholdPolicy {
 public:
  std::string_view name() const override { return "confident"; }
  bool requires_confidence() const override { return true; }
  ThresholdPair thresholds(std::optional<double> confidence, const ContextVars&) const override;
};

/// Thresholds looked up from the element's context variables. Rules are tried
/// in order; the first whose variable has the given value wins, otherwise the
/// default applies. E.g. a rule `sensitivity,high,-0.1,0.9` prohibits more
/// readily in sensitive contexts.
class ContextualPolicy final : public ThresholdPolicy {
 public:
  struct Rule {
    std::string variable;
    std::string value;
    HardThresholds thresholds;
  };

  ContextualPolicy(std::vector<Rule> rules, HardThresholds fallback);

  /// CSV with header `variable,value,eps_prh,eps_per`.
  static ContextualPolicy load(const std::filesystem::path& path, HardThresholds fallback);

  std::string_view name() const override { return "contextual"; }
  ThresholdPair thresholds(std::optional<double>, const ContextVars& context) const override;

  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
  HardThresholds fallback_;
};

/// Throws MissingConfidence when the policy needs a confidence the input lacks.
NormDecision infer_norm(const ElementId& element, PreferenceValue value, std::optional<double> confidence,
                        const ThresholdPolicy& policy, const ContextVars& context = {});
NormDecision infer_norm(const Prediction& pred, const ThresholdPolicy& policy, const ContextVars& context = {});

/// Quadrants over the average prediction distance (APD) and the standard
/// deviation of those distances (PSD), both on the [-1, 1] scale.
enum class Regime { AnyMethod, AvoidHardThresholds, DoNotUsePredictions, FunctionThresholdsProvisional };

std::string_view to_string(Regime regime);

struct RegimeThresholds {
  double apd_cut = 0.5;
  double psd_cut = 0.5;

  void validate() const;
};

/// "Low" means strictly below the cut.
Regime classify_regime(double apd, double psd, const RegimeThresholds& cuts);

}  // namespace normcast
