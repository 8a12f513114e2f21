#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sorte/constraints.hpp"
#include "sorte/dual_solver.hpp"
#include "sorte/errors.hpp"
#include "sorte/market.hpp"
#include "sorte/numerics.hpp"
#include "sorte/utility.hpp"

namespace sorte {

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
};

struct VerifyReport {
  bool pass = false;
  std::vector<CheckResult> checks;
  std::vector<double> agent_multipliers;  // lambda_n extracted per agent
};

struct VerifyTolerances {
  double per_agent = 1e-7;   // relative, FOC constancy
  double multiplier = 1e-7;  // relative spread of the agent multipliers
  double clearing = 1e-9;    // absolute, scenario-wise total
  double budget = 1e-10;     // absolute, a_n vs E_{Q^n}[Y^n]
  double membership = 1e-9;  // absolute, group-sum constancy
};

/// Independent check of the three defining conditions of a claimed
/// equilibrium:
///  (1) per-agent optimality: u_n'(X^n + Y^n) = lambda_n dQ^n/dP pointwise
///      for some lambda_n > 0, and E_{Q^n}[Y^n] = a_n;
///  (2) systemic budget optimality: all lambda_n coincide (equalized
///      marginal utilities of budget);
///  (3) admissibility: Y in the constraint family and sum_n Y^n = A
///      scenario-wise.
/// The report carries residuals; nothing is thrown on failure.
inline VerifyReport verify_sorte(const MarketModel& model, const UtilityProfile& profile,
                                 const ConstraintSpec& spec, double A,
                                 const EquilibriumSolution& sol,
                                 const VerifyTolerances& tol = {}) {
  VerifyReport report;
  const int n_agents = model.num_agents();
  const int n_scen = model.num_scenarios();

  // (1) per-agent optimality.
  bool agents_ok = true;
  double worst_constancy = 0.0, worst_budget = 0.0;
  report.agent_multipliers.resize(n_agents, std::numeric_limits<double>::quiet_NaN());
  for (int n = 0; n < n_agents; ++n) {
    const auto& density = sol.pricing.density(n);
    double mean_lambda = 0.0;
    bool positive = true;
    for (int w = 0; w < n_scen; ++w) {
      if (!(density[w] > 0.0)) {
        positive = false;
        break;
      }
      mean_lambda += model.prob(w) *
                     profile[n].u_prime(model.endowment(n, w) + sol.Y(n, w)) / density[w];
    }
    if (!positive) {
      agents_ok = false;
      continue;
    }
    report.agent_multipliers[n] = mean_lambda;
    for (int w = 0; w < n_scen; ++w) {
      const double lam_w =
          profile[n].u_prime(model.endowment(n, w) + sol.Y(n, w)) / density[w];
      worst_constancy = std::max(worst_constancy,
                                 std::fabs(lam_w - mean_lambda) / std::fabs(mean_lambda));
    }
    const double priced = expectation(model, sol.pricing.measures[n], sol.Y.row(n));
    worst_budget = std::max(worst_budget, std::fabs(priced - sol.a[n]));
    if (!(mean_lambda > 0.0)) agents_ok = false;
  }
  agents_ok = agents_ok && worst_constancy <= tol.per_agent && worst_budget <= tol.budget;
  report.checks.push_back({"per_agent_optimality", agents_ok,
                           std::max(worst_constancy, worst_budget),
                           "pointwise marginal-utility ratio constant per agent, budgets met"});

  // (2) common multiplier across agents.
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, mean = 0.0;
  bool have_all = true;
  for (double l : report.agent_multipliers) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      have_all = false;
      break;
    }
    lo = std::min(lo, l);
    hi = std::max(hi, l);
    mean += l;
  }
  double spread = std::numeric_limits<double>::infinity();
  if (have_all) {
    mean /= n_agents;
    spread = (hi - lo) / mean;
  }
  const bool multiplier_ok = have_all && spread <= tol.multiplier;
  report.checks.push_back({"systemic_budget_optimality", multiplier_ok, spread,
                           "marginal utilities of budget equalized across agents"});

  // (3) admissibility and clearing.
  const MembershipResult mem = membership(spec, sol.Y, tol.membership);
  double clearing = 0.0;
  for (int w = 0; w < n_scen; ++w) {
    double total = 0.0;
    for (int n = 0; n < n_agents; ++n) total += sol.Y(n, w);
    clearing = std::max(clearing, std::fabs(total - A));
  }
  const bool feasible_ok = mem.is_member && clearing <= tol.clearing;
  report.checks.push_back({"admissibility_and_clearing", feasible_ok,
                           std::max(mem.max_residual, clearing),
                           "allocation in the constraint family, total pinned to the budget"});

  report.pass = true;
  for (const CheckResult& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

enum class FeasibleSet {
  BudgetAllocations,  // admissible family with total at most A
  PricingBudget       // priced budget at most A under the solution's measures
};

namespace detail {

/// Random direction in the admissible cone with zero total: free cell
/// coordinates plus an occasional zero-sum constant transfer between two
/// agents (always admissible since the family contains all constants).
inline Matrix random_feasible_direction(const MarketModel& model, const MeasureStructure& ms,
                                        std::mt19937_64& rng) {
  const AllocationBasis basis(ms, model.num_agents(), model.num_scenarios(), 0.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> theta(basis.dim());
  for (double& t : theta) t = normal(rng);
  Matrix D = basis.to_allocation(theta);
  if (model.num_agents() >= 2) {
    std::uniform_int_distribution<int> pick(0, model.num_agents() - 1);
    const int i = pick(rng);
    int j = pick(rng);
    if (j == i) j = (i + 1) % model.num_agents();
    const double size = normal(rng);
    for (int w = 0; w < model.num_scenarios(); ++w) {
      D(i, w) += size;
      D(j, w) -= size;
    }
  }
  return D;
}

/// Random direction whose priced total under the given measures is zero.
inline Matrix random_priced_direction(const MarketModel& model, const PricingVector& pricing,
                                      std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix D(model.num_agents(), model.num_scenarios(), 0.0);
  for (int n = 0; n < model.num_agents(); ++n)
    for (int w = 0; w < model.num_scenarios(); ++w) D(n, w) = normal(rng);
  for (int n = 0; n < model.num_agents(); ++n) {
    const double priced = expectation(model, pricing.measures[n], D.row(n));
    for (int w = 0; w < model.num_scenarios(); ++w) D(n, w) -= priced;
  }
  return D;
}

}  // namespace detail

/// Randomized local Pareto check: `trials` perturbation directions inside the
/// selected feasible set, each line-searched over shrinking steps. Returns
/// false as soon as a direction weakly improves every agent's expected
/// utility and strictly improves one by more than `tol`; true when no trial
/// finds an improvement.
inline bool check_pareto(const MarketModel& model, const UtilityProfile& profile,
                         const ConstraintSpec& spec, double A, const EquilibriumSolution& sol,
                         FeasibleSet selector, int trials, std::uint64_t seed,
                         double tol = 1e-9) {
  const MeasureStructure ms = measure_structure(spec, model);
  std::mt19937_64 rng(seed);
  const int n_agents = model.num_agents();
  const int n_scen = model.num_scenarios();

  // Unspent budget dominates immediately: distributing the slack as cash
  // improves every agent at once.
  double slack = std::numeric_limits<double>::infinity();
  if (selector == FeasibleSet::BudgetAllocations) {
    for (int w = 0; w < n_scen; ++w) {
      double total = 0.0;
      for (int n = 0; n < n_agents; ++n) total += sol.Y(n, w);
      slack = std::min(slack, A - total);
    }
  } else {
    double priced = 0.0;
    for (int n = 0; n < n_agents; ++n)
      priced += expectation(model, sol.pricing.measures[n], sol.Y.row(n));
    slack = A - priced;
  }
  if (slack > std::max(tol, 1e-12)) return false;

  std::vector<double> base(n_agents, 0.0);
  for (int n = 0; n < n_agents; ++n)
    for (int w = 0; w < n_scen; ++w)
      base[n] += model.prob(w) * profile[n].u(model.endowment(n, w) + sol.Y(n, w));

  for (int trial = 0; trial < trials; ++trial) {
    const Matrix D = (selector == FeasibleSet::BudgetAllocations)
                         ? detail::random_feasible_direction(model, ms, rng)
                         : detail::random_priced_direction(model, sol.pricing, rng);
    double step = 1.0;
    for (int k = 0; k < 24; ++k, step *= 0.5) {
      bool weak = true;
      bool strict = false;
      for (int n = 0; n < n_agents && weak; ++n) {
        double val = 0.0;
        for (int w = 0; w < n_scen; ++w)
          val += model.prob(w) *
                 profile[n].u(model.endowment(n, w) + sol.Y(n, w) + step * D(n, w));
        const double delta = val - base[n];
        if (delta < -1e-13 * (1.0 + std::fabs(base[n]))) weak = false;
        if (delta > tol) strict = true;
      }
      if (weak && strict) return false;
    }
  }
  return true;
}

/// Samples random admissible allocations and checks the pricing inequality
/// sum_n E_{Q^n}[Y^n] <= sum_n Y^n (the scenario-constant total). A pricing
/// vector outside the polar of the constraint family fails on some sample.
inline bool check_fair_pricing(const MarketModel& model, const ConstraintSpec& spec,
                               const PricingVector& pricing, int samples, std::uint64_t seed,
                               double tol = 1e-9) {
  if (pricing.size() != model.num_agents())
    throw DimensionError("check_fair_pricing: pricing vector size mismatch");
  const MeasureStructure ms = measure_structure(spec, model);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (int s = 0; s < samples; ++s) {
    const double total = normal(rng);
    const AllocationBasis basis(ms, model.num_agents(), model.num_scenarios(), total);
    std::vector<double> theta(basis.dim());
    for (double& t : theta) t = normal(rng);
    const Matrix Y = basis.to_allocation(theta);

    double priced = 0.0;
    for (int n = 0; n < model.num_agents(); ++n)
      priced += expectation(model, pricing.measures[n], Y.row(n));
    if (priced > total + tol) return false;
  }
  return true;
}

struct DeterministicAllocation {
  std::vector<double> a;
  double value = 0.0;
  double multiplier = 0.0;  // the common marginal expected utility
};

/// Best deterministic split of the budget: maximize sum_n E[u_n(X^n + a_n)]
/// over real vectors with sum a_n = A by equalizing the marginal expected
/// utilities. Both nested equations are strictly monotone.
inline DeterministicAllocation deterministic_allocation(const MarketModel& model,
                                                        const UtilityProfile& profile, double A,
                                                        const SolveOptions& opts = {}) {
  const int n_agents = model.num_agents();
  const int n_scen = model.num_scenarios();

  auto marginal = [&](int n, double a) {
    double m = 0.0;
    for (int w = 0; w < n_scen; ++w)
      m += model.prob(w) * profile[n].u_prime(model.endowment(n, w) + a);
    return m;
  };
  // a_n(theta): E[u_n'(X^n + a)] = theta, decreasing in a.
  auto agent_share = [&](int n, double theta) {
    numerics::RootOptions ropts;
    ropts.rel_tol = opts.inner_tol;
    ropts.abs_tol = opts.inner_tol;
    return numerics::root_increasing_real([&](double a) { return theta - marginal(n, a); }, 0.0,
                                          1.0, ropts);
  };

  numerics::RootOptions topts;
  topts.rel_tol = opts.lambda_tol;
  const double theta = numerics::root_increasing_positive(
      [&](double th) {
        double total = 0.0;
        for (int n = 0; n < n_agents; ++n) total += agent_share(n, th);
        return A - total;  // increasing in theta since shares decrease
      },
      1.0, topts);

  DeterministicAllocation out;
  out.multiplier = theta;
  out.a.resize(n_agents);
  double value = 0.0;
  for (int n = 0; n < n_agents; ++n) {
    out.a[n] = agent_share(n, theta);
    for (int w = 0; w < n_scen; ++w)
      value += model.prob(w) * profile[n].u(model.endowment(n, w) + out.a[n]);
  }
  out.value = value;
  return out;
}

}  // namespace sorte
