#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sorte/constraints.hpp"
#include "sorte/dual_solver.hpp"
#include "sorte/errors.hpp"
#include "sorte/market.hpp"
#include "sorte/numerics.hpp"
#include "sorte/utility.hpp"

namespace sorte {

/// Aggregates that drive every exponential closed form. For a partition into
/// groups I_m:
///   beta_m = sum_{n in I_m} 1/alpha_n,      beta = sum_n 1/alpha_n,
///   xi     = sum_n (1/alpha_n) ln(1/alpha_n),
///   R(n)   = (1/alpha_n) / beta,
///   log_E_m = ln E[exp(-Xbar_m / beta_m)]   (log-sum-exp, max-subtracted),
///   d_m    = sum_j (beta_j/beta) log_E_j - log_E_m.
struct ExpAggregates {
  std::vector<double> beta_m;
  double beta = 0.0;
  double xi = 0.0;
  std::vector<double> R;
  std::vector<double> log_E_m;
  std::vector<double> d_m;
};

namespace detail {

inline void check_exponential_inputs(const MarketModel& model, const std::vector<double>& alphas) {
  if (static_cast<int>(alphas.size()) != model.num_agents())
    throw DimensionError("exponential closed form: alphas length does not match model");
  for (double a : alphas)
    if (!(a > 0.0)) throw DomainError("exponential closed form: alphas must be positive");
}

}  // namespace detail

inline ExpAggregates exp_aggregates(const MarketModel& model, const std::vector<double>& alphas,
                                    const MeasureStructure& ms) {
  detail::check_exponential_inputs(model, alphas);
  if (ms.num_events() != 1)
    throw SpecError("exp_aggregates: closed forms exist only for scenario-independent clusters");

  ExpAggregates agg;
  agg.beta = 0.0;
  agg.xi = 0.0;
  for (double a : alphas) {
    agg.beta += 1.0 / a;
    agg.xi += (1.0 / a) * std::log(1.0 / a);
  }
  agg.R.resize(alphas.size());
  for (std::size_t n = 0; n < alphas.size(); ++n) agg.R[n] = (1.0 / alphas[n]) / agg.beta;

  agg.beta_m.resize(ms.cells.size());
  agg.log_E_m.resize(ms.cells.size());
  for (std::size_t m = 0; m < ms.cells.size(); ++m) {
    const Cell& cell = ms.cells[m];
    double bm = 0.0;
    for (int n : cell.agents) bm += 1.0 / alphas[n];
    agg.beta_m[m] = bm;

    std::vector<double> z(model.num_scenarios());
    for (int w = 0; w < model.num_scenarios(); ++w) {
      double xbar = 0.0;
      for (int n : cell.agents) xbar += model.endowment(n, w);
      z[w] = -xbar / bm;
    }
    agg.log_E_m[m] = numerics::log_sum_exp(model.probs(), z);
  }

  double weighted = 0.0;
  for (std::size_t m = 0; m < ms.cells.size(); ++m)
    weighted += agg.beta_m[m] / agg.beta * agg.log_E_m[m];
  agg.d_m.resize(ms.cells.size());
  for (std::size_t m = 0; m < ms.cells.size(); ++m) agg.d_m[m] = weighted - agg.log_E_m[m];
  return agg;
}

/// Closed-form equilibrium for exponential utilities on a cluster family:
///   Y^k   = -X^k + (1/alpha_k)(Xbar_m/beta_m - d_m)
///           + (1/alpha_k)(A/beta + ln alpha_k - E_R[ln alpha]),   k in I_m
///   dQ^k/dP = exp(-Xbar_m/beta_m) / E[exp(-Xbar_m/beta_m)]
///   a^k   = E_{Q^k}[Y^k]
/// with multiplier exp(-(mu + xi)/beta), mu = A - sum_j beta_j log_E_j, and
/// systemic value N - lambda * beta. Scenario-dependent clusterings have no
/// closed form and are routed to the dual solver.
inline EquilibriumSolution sorte_exponential(const MarketModel& model,
                                             const std::vector<double>& alphas,
                                             const ConstraintSpec& spec, double A) {
  if (spec.variant() == SharingVariant::ScenarioCluster)
    throw SpecError("sorte_exponential: no closed form for scenario-dependent clusters");
  detail::check_exponential_inputs(model, alphas);
  const MeasureStructure ms = measure_structure(spec, model);
  const ExpAggregates agg = exp_aggregates(model, alphas, ms);
  const int n_agents = model.num_agents();
  const int n_scen = model.num_scenarios();

  double er_ln_alpha = 0.0;
  for (int n = 0; n < n_agents; ++n) er_ln_alpha += agg.R[n] * std::log(alphas[n]);

  double sum_beta_logE = 0.0;
  for (std::size_t m = 0; m < ms.cells.size(); ++m)
    sum_beta_logE += agg.beta_m[m] * agg.log_E_m[m];
  const double mu = A - sum_beta_logE;
  const double lambda_hat = std::exp(-(mu + agg.xi) / agg.beta);

  EquilibriumSolution sol;
  sol.lambda = lambda_hat;
  sol.Y = Matrix(n_agents, n_scen, 0.0);

  std::vector<std::vector<double>> cell_densities(ms.cells.size());
  for (std::size_t m = 0; m < ms.cells.size(); ++m) {
    const Cell& cell = ms.cells[m];
    cell_densities[m].resize(cell.scenarios.size());
    for (std::size_t k = 0; k < cell.scenarios.size(); ++k) {
      const int w = cell.scenarios[k];
      double xbar = 0.0;
      for (int n : cell.agents) xbar += model.endowment(n, w);
      cell_densities[m][k] = std::exp(-xbar / agg.beta_m[m] - agg.log_E_m[m]);
      for (int n : cell.agents) {
        sol.Y(n, w) = -model.endowment(n, w) +
                      (xbar / agg.beta_m[m] - agg.d_m[m]) / alphas[n] +
                      (A / agg.beta + std::log(alphas[n]) - er_ln_alpha) / alphas[n];
      }
    }
  }
  sol.pricing = assemble_pricing_vector(model, ms, cell_densities, 1e-9);

  sol.a.resize(n_agents);
  for (int n = 0; n < n_agents; ++n)
    sol.a[n] = expectation(model, sol.pricing.measures[n], sol.Y.row(n));

  const UtilityProfile profile = UtilityProfile::exponential(alphas);
  sol.primal_value = systemic_utility(model, profile, sol.Y);
  sol.dual_value = static_cast<double>(n_agents) - lambda_hat * agg.beta;
  sol.diagnostics.duality_gap = sol.dual_value - sol.primal_value;
  return sol;
}

/// Maximum systemic utility, N - beta * exp(-(A + xi - sum_j beta_j log_E_j)/beta).
inline double systemic_value_exponential(const MarketModel& model,
                                         const std::vector<double>& alphas,
                                         const ConstraintSpec& spec, double A) {
  if (spec.variant() == SharingVariant::ScenarioCluster)
    throw SpecError("systemic_value_exponential: no closed form for scenario-dependent clusters");
  const MeasureStructure ms = measure_structure(spec, model);
  const ExpAggregates agg = exp_aggregates(model, alphas, ms);
  double sum_beta_logE = 0.0;
  for (std::size_t m = 0; m < ms.cells.size(); ++m)
    sum_beta_logE += agg.beta_m[m] * agg.log_E_m[m];
  return static_cast<double>(model.num_agents()) -
         agg.beta * std::exp(-(A + agg.xi - sum_beta_logE) / agg.beta);
}

struct BuhlmannEquilibrium {
  Matrix Y;
  ProbMeasure Q;                // the single equilibrium pricing measure
  std::vector<double> lambdas;  // per-agent multipliers (not equalized in general)
  double value = 0.0;
};

/// Classical risk-exchange equilibrium for exponential agents at an exogenous
/// budget vector: one pricing measure with density proportional to
/// exp(-Xbar/beta), every agent optimizing separately at budget a_n. The
/// allocation clears scenario-wise to sum(a).
inline BuhlmannEquilibrium buhlmann_equilibrium(const MarketModel& model,
                                                const std::vector<double>& alphas,
                                                const std::vector<double>& a,
                                                const SolveOptions& opts = {}) {
  detail::check_exponential_inputs(model, alphas);
  if (static_cast<int>(a.size()) != model.num_agents())
    throw DimensionError("buhlmann_equilibrium: budget vector size mismatch");

  double beta = 0.0;
  for (double al : alphas) beta += 1.0 / al;
  const std::vector<double> xbar = aggregate_endowment(model);
  std::vector<double> z(model.num_scenarios());
  for (int w = 0; w < model.num_scenarios(); ++w) z[w] = -xbar[w] / beta;
  const double log_E = numerics::log_sum_exp(model.probs(), z);

  BuhlmannEquilibrium eq;
  eq.Q.density.resize(model.num_scenarios());
  for (int w = 0; w < model.num_scenarios(); ++w) eq.Q.density[w] = std::exp(z[w] - log_E);

  PricingVector pv;
  pv.measures.assign(model.num_agents(), eq.Q);
  const UtilityProfile profile = UtilityProfile::exponential(alphas);
  ExchangeEquilibrium ex = exchange_equilibrium(model, profile, pv, a, opts);
  eq.Y = std::move(ex.Y);
  eq.lambdas = std::move(ex.lambdas);
  eq.value = ex.value;
  return eq;
}

/// Translation of the equilibrium when utilities are reweighted:
/// g_k = (1/alpha_k)(ln gamma_k - E_R[ln gamma]), summing to zero.
inline std::vector<double> weight_shift(const std::vector<double>& alphas,
                                        const std::vector<double>& gammas) {
  if (alphas.size() != gammas.size())
    throw DimensionError("weight_shift: alphas and gammas must have equal length");
  double beta = 0.0;
  for (double a : alphas) {
    if (!(a > 0.0)) throw DomainError("weight_shift: alphas must be positive");
    beta += 1.0 / a;
  }
  double er_ln_gamma = 0.0;
  for (std::size_t n = 0; n < alphas.size(); ++n) {
    if (!(gammas[n] > 0.0)) throw DomainError("weight_shift: gammas must be positive");
    er_ln_gamma += (1.0 / alphas[n]) / beta * std::log(gammas[n]);
  }
  std::vector<double> g(alphas.size());
  for (std::size_t n = 0; n < alphas.size(); ++n)
    g[n] = (std::log(gammas[n]) - er_ln_gamma) / alphas[n];
  return g;
}

/// Reweighting exponential utilities only translates the equilibrium:
/// Y and a shift by g(gamma), the pricing vector is unchanged, and the
/// multiplier scales by exp(E_R[ln gamma]). Values are re-evaluated under the
/// weighted profile.
inline EquilibriumSolution weight_translation(const MarketModel& model,
                                              const EquilibriumSolution& base,
                                              const std::vector<double>& alphas,
                                              const std::vector<double>& gammas) {
  const std::vector<double> g = weight_shift(alphas, gammas);
  double beta = 0.0;
  for (double a : alphas) beta += 1.0 / a;
  double er_ln_gamma = 0.0;
  for (std::size_t n = 0; n < alphas.size(); ++n)
    er_ln_gamma += (1.0 / alphas[n]) / beta * std::log(gammas[n]);

  EquilibriumSolution out = base;
  for (std::size_t n = 0; n < alphas.size(); ++n) {
    for (int w = 0; w < out.Y.cols(); ++w) out.Y(static_cast<int>(n), w) += g[n];
    out.a[n] += g[n];
  }
  out.lambda = base.lambda * std::exp(er_ln_gamma);

  const UtilityProfile weighted = UtilityProfile::exponential(alphas, gammas);
  out.primal_value = systemic_utility(model, weighted, out.Y);
  DualPoint point{out.lambda, out.pricing};
  // The budget A is recoverable from the clearing level of the base solution.
  double A = 0.0;
  for (std::size_t n = 0; n < base.a.size(); ++n) A += base.a[n];
  out.dual_value = dual_objective(model, weighted, A, point);
  out.diagnostics.duality_gap = out.dual_value - out.primal_value;
  return out;
}

}  // namespace sorte
