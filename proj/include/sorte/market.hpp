#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sorte/errors.hpp"
#include "sorte/numerics.hpp"

namespace sorte {

/// Finite one-period market: S scenarios with strictly positive reference
/// probabilities and one endowment row per agent. Immutable after
/// construction; all solver inputs are taken by const reference.
class MarketModel {
 public:
  static MarketModel create(std::vector<std::string> agent_ids,
                            std::vector<std::string> scenario_ids, std::vector<double> probs,
                            Matrix endowments) {
    MarketModel m;
    m.agent_ids_ = std::move(agent_ids);
    m.scenario_ids_ = std::move(scenario_ids);
    m.probs_ = std::move(probs);
    m.endowments_ = std::move(endowments);
    m.validate();
    return m;
  }

  int num_agents() const { return static_cast<int>(agent_ids_.size()); }
  int num_scenarios() const { return static_cast<int>(scenario_ids_.size()); }

  const std::vector<std::string>& agent_ids() const { return agent_ids_; }
  const std::vector<std::string>& scenario_ids() const { return scenario_ids_; }
  const std::vector<double>& probs() const { return probs_; }
  const Matrix& endowments() const { return endowments_; }

  double prob(int scenario) const { return probs_[scenario]; }
  double endowment(int agent, int scenario) const { return endowments_(agent, scenario); }

  /// Expectation under the reference measure of a scenario-indexed vector.
  double mean(const std::vector<double>& rv) const {
    if (static_cast<int>(rv.size()) != num_scenarios())
      throw DimensionError("mean: vector length does not match scenario count");
    double s = 0.0;
    for (int w = 0; w < num_scenarios(); ++w) s += probs_[w] * rv[w];
    return s;
  }

 private:
  void validate() const {
    const int n = num_agents();
    const int s = num_scenarios();
    if (n < 1) throw ValidationError("market needs at least one agent");
    if (s < 1) throw ValidationError("market needs at least one scenario");
    if (static_cast<int>(probs_.size()) != s)
      throw ValidationError("probability vector length does not match scenario count");
    double total = 0.0;
    for (double p : probs_) {
      if (!(p > 0.0)) throw ValidationError("scenario probabilities must be strictly positive");
      total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12)
      throw ValidationError("scenario probabilities must sum to 1 (within 1e-12)");
    if (endowments_.rows() != n || endowments_.cols() != s)
      throw ValidationError("endowment matrix must be agents x scenarios");
    for (double x : endowments_.data())
      if (!std::isfinite(x)) throw ValidationError("endowments must be finite");
  }

  std::vector<std::string> agent_ids_;
  std::vector<std::string> scenario_ids_;
  std::vector<double> probs_;
  Matrix endowments_;
};

/// Probability measure absolutely continuous w.r.t. the reference measure,
/// stored as the density per scenario.
struct ProbMeasure {
  std::vector<double> density;

  static ProbMeasure create(const MarketModel& model, std::vector<double> density,
                            double tol = 1e-9) {
    if (static_cast<int>(density.size()) != model.num_scenarios())
      throw DimensionError("ProbMeasure: density length does not match scenario count");
    double mass = 0.0;
    for (int w = 0; w < model.num_scenarios(); ++w) {
      if (density[w] < 0.0) throw ValidationError("ProbMeasure: density must be nonnegative");
      mass += model.prob(w) * density[w];
    }
    if (std::fabs(mass - 1.0) > tol)
      throw NormalizationError("ProbMeasure: density integrates to " + std::to_string(mass));
    return ProbMeasure{std::move(density)};
  }

  /// Reference measure itself (density identically one).
  static ProbMeasure reference(const MarketModel& model) {
    return ProbMeasure{std::vector<double>(model.num_scenarios(), 1.0)};
  }

  bool equivalent_to_reference() const {
    for (double d : density)
      if (!(d > 0.0)) return false;
    return true;
  }
};

/// One pricing measure per agent. Under cluster constraints agents of the
/// same group carry identical densities.
struct PricingVector {
  std::vector<ProbMeasure> measures;

  int size() const { return static_cast<int>(measures.size()); }
  const std::vector<double>& density(int agent) const { return measures[agent].density; }
};

/// E_Q[rv] computed as sum_w P(w) * density(w) * rv(w).
inline double expectation(const MarketModel& model, const ProbMeasure& measure,
                          const std::vector<double>& rv) {
  const int s = model.num_scenarios();
  if (static_cast<int>(rv.size()) != s)
    throw DimensionError("expectation: vector length does not match scenario count");
  if (static_cast<int>(measure.density.size()) != s)
    throw DimensionError("expectation: density length does not match scenario count");
  double acc = 0.0;
  for (int w = 0; w < s; ++w) acc += model.prob(w) * measure.density[w] * rv[w];
  return acc;
}

/// Relative entropy H(Q, P) = E[dQ/dP * ln(dQ/dP)], with 0 ln 0 := 0.
inline double relative_entropy(const MarketModel& model, const ProbMeasure& measure) {
  double acc = 0.0;
  for (int w = 0; w < model.num_scenarios(); ++w) {
    const double d = measure.density[w];
    if (d > 0.0) acc += model.prob(w) * d * std::log(d);
  }
  return acc;
}

/// Scenario-wise sum of the endowment rows listed in `group` (0-based).
inline std::vector<double> group_aggregate(const MarketModel& model,
                                           const std::vector<int>& group) {
  if (group.empty()) throw IndexError("group_aggregate: empty group");
  std::vector<double> out(model.num_scenarios(), 0.0);
  for (int n : group) {
    if (n < 0 || n >= model.num_agents())
      throw IndexError("group_aggregate: agent index out of range");
    for (int w = 0; w < model.num_scenarios(); ++w) out[w] += model.endowment(n, w);
  }
  return out;
}

/// Sum of all endowment rows.
inline std::vector<double> aggregate_endowment(const MarketModel& model) {
  std::vector<int> all(model.num_agents());
  std::iota(all.begin(), all.end(), 0);
  return group_aggregate(model, all);
}

}  // namespace sorte
