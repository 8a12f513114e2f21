#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sorte/constraints.hpp"
#include "sorte/errors.hpp"
#include "sorte/market.hpp"
#include "sorte/numerics.hpp"
#include "sorte/utility.hpp"

namespace sorte {

struct SolveOptions {
  double lambda_tol = 1e-11;  // relative tolerance on the dual multiplier
  double inner_tol = 1e-13;   // relative tolerance on the nested scalar roots
  int max_iter = 240;

  // Brute-force primal oracle.
  std::uint64_t seed = 1;
  int starts = 4;
  int max_gradient_iters = 4000;
};

struct SolveDiagnostics {
  int lambda_iterations = 0;
  long long scenario_roots = 0;
  double clearing_residual = 0.0;
  double budget_residual = 0.0;
  double foc_residual = 0.0;
  double duality_gap = 0.0;
  double min_density = 0.0;
  std::vector<std::string> warnings;
};

/// A point of the dual domain: multiplier and pricing vector.
struct DualPoint {
  double lambda = 1.0;
  PricingVector pricing;
};

/// The equilibrium triple plus the dual data it came from.
struct EquilibriumSolution {
  Matrix Y;                // terminal exchanges, agents x scenarios
  PricingVector pricing;   // one measure per agent
  std::vector<double> a;   // initial-time budgets, a_n = E_{Q^n}[Y^n]
  double lambda = 0.0;     // dual multiplier of the systemic budget
  double primal_value = 0.0;
  double dual_value = 0.0;
  SolveDiagnostics diagnostics;
};

/// Density of one cell at a fixed multiplier, together with the constant of
/// its first-order condition and the mass it puts on its event.
struct CellMeasure {
  std::vector<double> density;  // over the cell's scenarios, in cell order
  double c = 0.0;               // scenario-free constant of the cell's stationarity condition
  double mass = 0.0;            // sum_w P(w) density(w) over the event
  double group_budget = 0.0;    // sum over the group of E_q[X^n + Y^n]
};

namespace detail {

inline double group_conjugate_slope(const UtilityProfile& profile, const std::vector<int>& agents,
                                    double y) {
  double s = 0.0;
  for (int n : agents) s += profile[n].v_prime(y);
  return s;
}

/// Unique q > 0 with sum_{n in group} v_n'(lambda q) = t. The left side is
/// strictly increasing with range all of R, so a bracket always exists; a
/// bracket failure signals a custom utility whose conjugate derivative does
/// not span the line.
inline double scenario_density_root(const UtilityProfile& profile, const std::vector<int>& agents,
                                    double lambda, double t, double seed, double rel_tol,
                                    long long* evals) {
  auto f = [&](double q) {
    if (evals) ++*evals;
    return group_conjugate_slope(profile, agents, lambda * q) - t;
  };
  numerics::RootOptions opts;
  opts.rel_tol = rel_tol;
  try {
    return numerics::root_increasing_positive(f, seed, opts);
  } catch (const BracketError&) {
    throw BracketError(
        "scenario density root: no bracket; conjugate derivative must span (-inf, inf)");
  }
}

struct CellContext {
  std::vector<double> xbar;   // group endowment sum over the cell's scenarios
  std::vector<double> probs;  // reference probabilities over the cell's scenarios
};

inline CellContext make_cell_context(const MarketModel& model, const Cell& cell) {
  CellContext ctx;
  ctx.xbar.reserve(cell.scenarios.size());
  ctx.probs.reserve(cell.scenarios.size());
  for (int w : cell.scenarios) {
    double s = 0.0;
    for (int n : cell.agents) s += model.endowment(n, w);
    ctx.xbar.push_back(s);
    ctx.probs.push_back(model.prob(w));
  }
  return ctx;
}

/// Solve one cell at multiplier `lambda` for a prescribed event mass: find
/// the constant c such that the scenario-wise densities q_w solving
///     sum_{n in group} v_n'(lambda q_w) = c - Xbar(w)
/// integrate to `mass_target` over the event. Both nested equations are
/// strictly monotone, so the composite solve is globally convergent.
inline CellMeasure solve_cell(const UtilityProfile& profile, const Cell& cell,
                              const CellContext& ctx, double lambda, double mass_target,
                              double rel_tol, long long* evals) {
  const std::size_t sz = cell.scenarios.size();
  std::vector<double> q(sz, std::max(mass_target, 1e-12));

  auto mass_at = [&](double c) {
    double m = 0.0;
    for (std::size_t k = 0; k < sz; ++k) {
      q[k] = scenario_density_root(profile, cell.agents, lambda, c - ctx.xbar[k],
                                   std::max(q[k], 1e-300), rel_tol, evals);
      m += ctx.probs[k] * q[k];
    }
    return m;
  };

  double spread = 1.0;
  for (double x : ctx.xbar) spread = std::max(spread, std::fabs(x));
  const double c_seed =
      ctx.xbar[0] + group_conjugate_slope(profile, cell.agents,
                                          lambda * std::max(mass_target, 1e-12));
  numerics::RootOptions copts;
  copts.rel_tol = rel_tol;
  copts.abs_tol = rel_tol;  // c can legitimately cross zero
  const double c = numerics::root_increasing_real(
      [&](double cc) { return mass_at(cc) - mass_target; }, c_seed, spread, copts);

  CellMeasure cm;
  cm.c = c;
  cm.mass = mass_at(c);  // re-evaluate so the stored densities match c exactly
  cm.density = q;
  // Group budget: sum over the group of E_q[X^n + Y^n], with the post-trade
  // wealth X^n + Y^n = -v_n'(lambda q) from the gradient formula.
  double gb = 0.0;
  for (std::size_t k = 0; k < sz; ++k) {
    double slope = group_conjugate_slope(profile, cell.agents, lambda * q[k]);
    gb += ctx.probs[k] * q[k] * (-slope);
  }
  cm.group_budget = gb;
  return cm;
}

struct StructureMeasures {
  std::vector<CellMeasure> cells;
  double kappa = 0.0;                // per-event sum of cell constants (equal across events)
  std::vector<double> event_masses;  // mass each event carries, summing to one
};

/// Inner dual minimization over the pricing vector at fixed lambda. With a
/// single event every cell carries mass one. With several events the cells of
/// an event share a common mass w_e; stationarity equalizes the per-event sum
/// of cell constants (kappa), and the masses are pinned by sum_e w_e = 1.
/// kappa doubles as the derivative of the partially minimized dual objective
/// with respect to lambda, up to the budget shift.
inline StructureMeasures solve_structure(const UtilityProfile& profile,
                                         const MeasureStructure& ms,
                                         const std::vector<CellContext>& contexts, double lambda,
                                         double rel_tol, long long* evals) {
  StructureMeasures out;
  out.cells.resize(ms.cells.size());
  const int num_events = ms.num_events();

  if (num_events == 1) {
    double kappa = 0.0;
    for (std::size_t c = 0; c < ms.cells.size(); ++c) {
      out.cells[c] =
          solve_cell(profile, ms.cells[c], contexts[c], lambda, 1.0, rel_tol, evals);
      kappa += out.cells[c].c;
    }
    out.kappa = kappa;
    out.event_masses = {1.0};
    return out;
  }

  std::vector<std::vector<int>> cells_by_event(num_events);
  for (int c = 0; c < static_cast<int>(ms.cells.size()); ++c)
    cells_by_event[ms.cells[c].event_index].push_back(c);

  std::vector<double> w_hint(num_events, 1.0 / num_events);

  // Sum of cell constants of event e at common mass w; strictly increasing in w.
  auto event_constant_sum = [&](int e, double w) {
    double sum = 0.0;
    for (int c : cells_by_event[e]) {
      out.cells[c] =
          solve_cell(profile, ms.cells[c], contexts[c], lambda, w, rel_tol, evals);
      sum += out.cells[c].c;
    }
    return sum;
  };

  auto event_mass_at = [&](int e, double kappa) {
    numerics::RootOptions wopts;
    wopts.rel_tol = rel_tol;
    const double w = numerics::root_increasing_positive(
        [&](double ww) { return event_constant_sum(e, ww) - kappa; }, w_hint[e], wopts);
    w_hint[e] = w;
    return w;
  };

  numerics::RootOptions kopts;
  kopts.rel_tol = rel_tol;
  kopts.abs_tol = rel_tol;
  const double kappa_seed = event_constant_sum(0, 1.0 / num_events) * num_events;
  const double kappa = numerics::root_increasing_real(
      [&](double k) {
        double total = 0.0;
        for (int e = 0; e < num_events; ++e) total += event_mass_at(e, k);
        return total - 1.0;
      },
      kappa_seed, 1.0 + std::fabs(kappa_seed), kopts);

  out.event_masses.resize(num_events);
  for (int e = 0; e < num_events; ++e) out.event_masses[e] = event_mass_at(e, kappa);
  out.kappa = kappa;
  return out;
}

inline PricingVector pricing_from_structure(const MarketModel& model, const MeasureStructure& ms,
                                            const StructureMeasures& sm) {
  std::vector<std::vector<double>> cell_densities(ms.cells.size());
  for (std::size_t c = 0; c < ms.cells.size(); ++c) cell_densities[c] = sm.cells[c].density;
  return assemble_pricing_vector(model, ms, cell_densities, 1e-6);
}

}  // namespace detail

/// Density of one cell at fixed multiplier, normalized to `mass_target` on
/// its event (one, unless the spec is scenario-dependent).
inline CellMeasure inner_cell_measure(const MarketModel& model, const UtilityProfile& profile,
                                      const Cell& cell, double lambda, double mass_target = 1.0,
                                      double tol = 1e-13) {
  if (!(lambda > 0.0)) throw DomainError("inner_cell_measure: lambda must be positive");
  const detail::CellContext ctx = detail::make_cell_context(model, cell);
  long long evals = 0;
  return detail::solve_cell(profile, cell, ctx, lambda, mass_target, tol, &evals);
}

/// Dual objective
///     lambda * (sum_j E_{Q^j}[X^j] + A) + sum_j E[v_j(lambda dQ^j/dP)].
/// Zero densities are evaluated through v(0) = u(+inf).
inline double dual_objective(const MarketModel& model, const UtilityProfile& profile, double A,
                             const DualPoint& point) {
  if (!(point.lambda > 0.0)) throw DomainError("dual_objective: lambda must be positive");
  if (point.pricing.size() != model.num_agents())
    throw DimensionError("dual_objective: pricing vector size mismatch");
  double value = 0.0;
  double price_of_endowments = 0.0;
  for (int n = 0; n < model.num_agents(); ++n) {
    const auto& density = point.pricing.density(n);
    if (static_cast<int>(density.size()) != model.num_scenarios())
      throw DimensionError("dual_objective: density length mismatch");
    for (int w = 0; w < model.num_scenarios(); ++w) {
      const double d = density[w];
      if (d < 0.0) throw DomainError("dual_objective: densities must be nonnegative");
      price_of_endowments += model.prob(w) * d * model.endowment(n, w);
      value += model.prob(w) * profile[n].v(point.lambda * d);
    }
  }
  return value + point.lambda * (price_of_endowments + A);
}

/// Minimize the dual over (lambda, Q). The partially minimized objective is
/// convex in lambda and its derivative equals kappa(lambda) + A with kappa
/// nondecreasing, so the stationary multiplier is found by a bracketed
/// derivative root (geometric bracket growth, then Brent). A minimizer pushed
/// to lambda -> 0 means the unconstrained utility supremum is being attained
/// and is reported as a model inconsistency.
inline DualPoint solve_lambda(const MarketModel& model, const UtilityProfile& profile,
                              const ConstraintSpec& spec, double A, const SolveOptions& opts = {},
                              SolveDiagnostics* diag = nullptr) {
  if (profile.size() != model.num_agents())
    throw DimensionError("solve_lambda: profile size does not match model");
  const MeasureStructure ms = measure_structure(spec, model);
  std::vector<detail::CellContext> contexts;
  contexts.reserve(ms.cells.size());
  for (const Cell& cell : ms.cells) contexts.push_back(detail::make_cell_context(model, cell));

  long long evals = 0;
  int lambda_iters = 0;
  auto slope = [&](double lam) {
    ++lambda_iters;
    return detail::solve_structure(profile, ms, contexts, lam, opts.inner_tol, &evals)
               .kappa +
           A;
  };

  double hi = 1.0, f_hi = slope(hi);
  double lo = hi, f_lo = f_hi;
  if (f_hi < 0.0) {
    while (f_hi < 0.0) {
      lo = hi;
      f_lo = f_hi;
      hi *= 8.0;
      if (hi > 1e12)
        throw ConvergenceError("solve_lambda: dual multiplier bracket exceeded 1e12");
      f_hi = slope(hi);
    }
  } else if (f_lo > 0.0) {
    while (f_lo > 0.0) {
      hi = lo;
      f_hi = f_lo;
      lo /= 8.0;
      if (lo < 1e-12)
        throw BoundaryError(
            "solve_lambda: dual multiplier driven to zero; the unconstrained utility supremum "
            "is attained and no interior optimum exists");
      f_lo = slope(lo);
    }
  }

  numerics::RootOptions lopts;
  lopts.rel_tol = opts.lambda_tol;
  lopts.max_iter = opts.max_iter;
  const double lambda_hat =
      (f_lo == 0.0) ? lo
                    : ((f_hi == 0.0) ? hi : numerics::brent_root(slope, lo, hi, f_lo, f_hi, lopts));

  const detail::StructureMeasures sm =
      detail::solve_structure(profile, ms, contexts, lambda_hat, opts.inner_tol, &evals);
  DualPoint point;
  point.lambda = lambda_hat;
  point.pricing = detail::pricing_from_structure(model, ms, sm);
  if (diag) {
    diag->lambda_iterations = lambda_iters;
    diag->scenario_roots = evals;
  }
  return point;
}

/// Primal optimizer from the dual optimum via the gradient formula
///     Y^j = -X^j - v_j'(lambda dQ^j/dP).
inline Matrix recover_allocation(const MarketModel& model, const UtilityProfile& profile,
                                 const DualPoint& point) {
  if (!(point.lambda > 0.0)) throw DomainError("recover_allocation: lambda must be positive");
  Matrix Y(model.num_agents(), model.num_scenarios(), 0.0);
  for (int n = 0; n < model.num_agents(); ++n) {
    const auto& density = point.pricing.density(n);
    for (int w = 0; w < model.num_scenarios(); ++w) {
      if (!(density[w] > 0.0))
        throw DomainError(
            "recover_allocation: zero pricing density; not an interior dual optimum");
      Y(n, w) = -model.endowment(n, w) - profile[n].v_prime(point.lambda * density[w]);
    }
  }
  return Y;
}

/// Expected utility of the system at allocation Y.
inline double systemic_utility(const MarketModel& model, const UtilityProfile& profile,
                               const Matrix& Y) {
  double value = 0.0;
  for (int n = 0; n < model.num_agents(); ++n)
    for (int w = 0; w < model.num_scenarios(); ++w)
      value += model.prob(w) * profile[n].u(model.endowment(n, w) + Y(n, w));
  return value;
}

/// Full equilibrium solve: dual optimum, recovered allocation, budgets,
/// values and residual diagnostics.
inline EquilibriumSolution solve_sorte(const MarketModel& model, const UtilityProfile& profile,
                                       const ConstraintSpec& spec, double A,
                                       const SolveOptions& opts = {}) {
  EquilibriumSolution sol;
  DualPoint point = solve_lambda(model, profile, spec, A, opts, &sol.diagnostics);
  sol.Y = recover_allocation(model, profile, point);
  sol.lambda = point.lambda;

  const int n_agents = model.num_agents();
  const int n_scen = model.num_scenarios();
  sol.a.resize(n_agents);
  for (int n = 0; n < n_agents; ++n) sol.a[n] = expectation(model, point.pricing.measures[n], sol.Y.row(n));

  sol.primal_value = systemic_utility(model, profile, sol.Y);
  sol.dual_value = dual_objective(model, profile, A, point);

  // Residuals.
  double clearing = 0.0;
  for (int w = 0; w < n_scen; ++w) {
    double total = 0.0;
    for (int n = 0; n < n_agents; ++n) total += sol.Y(n, w);
    clearing = std::max(clearing, std::fabs(total - A));
  }
  double budget_total = 0.0;
  for (double an : sol.a) budget_total += an;
  double foc = 0.0;
  double min_density = std::numeric_limits<double>::infinity();
  for (int n = 0; n < n_agents; ++n) {
    for (int w = 0; w < n_scen; ++w) {
      const double d = point.pricing.density(n)[w];
      min_density = std::min(min_density, d);
      const double marginal = profile[n].u_prime(model.endowment(n, w) + sol.Y(n, w));
      foc = std::max(foc, std::fabs(marginal - sol.lambda * d) / sol.lambda);
    }
  }
  sol.diagnostics.clearing_residual = clearing;
  sol.diagnostics.budget_residual = std::fabs(budget_total - A);
  sol.diagnostics.foc_residual = foc;
  sol.diagnostics.duality_gap = sol.dual_value - sol.primal_value;
  sol.diagnostics.min_density = min_density;
  if (!(min_density > 1e-14))
    sol.diagnostics.warnings.push_back(
        "pricing density not strictly positive beyond 1e-14; optimum may sit at the boundary");
  sol.pricing = std::move(point.pricing);
  return sol;
}

struct QOptimalResult {
  Matrix Y;
  std::vector<double> a;
  double value = 0.0;
  double lambda = 0.0;
};

/// Optimal allocation when the pricing vector is fixed a priori: a single
/// multiplier equates the total price of the allocation to the budget. The
/// budget map is strictly decreasing in the multiplier.
inline QOptimalResult solve_q_optimal(const MarketModel& model, const UtilityProfile& profile,
                                      const PricingVector& pricing, double A,
                                      const SolveOptions& opts = {}) {
  if (pricing.size() != model.num_agents())
    throw DimensionError("solve_q_optimal: pricing vector size mismatch");
  for (int n = 0; n < model.num_agents(); ++n)
    for (double d : pricing.density(n))
      if (!(d > 0.0)) throw DomainError("solve_q_optimal: densities must be strictly positive");

  auto total_budget = [&](double lam) {
    double acc = 0.0;
    for (int n = 0; n < model.num_agents(); ++n) {
      const auto& density = pricing.density(n);
      for (int w = 0; w < model.num_scenarios(); ++w) {
        const double d = density[w];
        acc += model.prob(w) * d *
               (-model.endowment(n, w) - profile[n].v_prime(lam * d));
      }
    }
    return acc;
  };

  numerics::RootOptions ropts;
  ropts.rel_tol = opts.lambda_tol;
  ropts.max_iter = opts.max_iter;
  const double lambda =
      numerics::root_increasing_positive([&](double lam) { return A - total_budget(lam); }, 1.0,
                                         ropts);

  QOptimalResult res;
  res.lambda = lambda;
  res.Y = Matrix(model.num_agents(), model.num_scenarios(), 0.0);
  for (int n = 0; n < model.num_agents(); ++n)
    for (int w = 0; w < model.num_scenarios(); ++w)
      res.Y(n, w) = -model.endowment(n, w) -
                    profile[n].v_prime(lambda * pricing.density(n)[w]);
  res.a.resize(model.num_agents());
  for (int n = 0; n < model.num_agents(); ++n)
    res.a[n] = expectation(model, pricing.measures[n], res.Y.row(n));
  res.value = systemic_utility(model, profile, res.Y);
  return res;
}

struct ExchangeEquilibrium {
  Matrix Y;
  std::vector<double> lambdas;  // one multiplier per agent
  double value = 0.0;
};

/// Risk-exchange equilibrium at an exogenous budget vector: every agent
/// optimizes separately under its own pricing measure with budget a_n. At the
/// equilibrium budget vector of a solved equilibrium this reproduces the
/// equilibrium allocation.
inline ExchangeEquilibrium exchange_equilibrium(const MarketModel& model,
                                                const UtilityProfile& profile,
                                                const PricingVector& pricing,
                                                const std::vector<double>& a,
                                                const SolveOptions& opts = {}) {
  if (static_cast<int>(a.size()) != model.num_agents())
    throw DimensionError("exchange_equilibrium: budget vector size mismatch");
  ExchangeEquilibrium eq;
  eq.Y = Matrix(model.num_agents(), model.num_scenarios(), 0.0);
  eq.lambdas.resize(model.num_agents());
  for (int n = 0; n < model.num_agents(); ++n) {
    const auto& density = pricing.density(n);
    for (double d : density)
      if (!(d > 0.0))
        throw DomainError("exchange_equilibrium: densities must be strictly positive");
    auto budget_at = [&](double lam) {
      double acc = 0.0;
      for (int w = 0; w < model.num_scenarios(); ++w)
        acc += model.prob(w) * density[w] *
               (-model.endowment(n, w) - profile[n].v_prime(lam * density[w]));
      return acc;
    };
    numerics::RootOptions ropts;
    ropts.rel_tol = opts.lambda_tol;
    ropts.max_iter = opts.max_iter;
    const double lam = numerics::root_increasing_positive(
        [&](double l) { return a[n] - budget_at(l); }, 1.0, ropts);
    eq.lambdas[n] = lam;
    for (int w = 0; w < model.num_scenarios(); ++w)
      eq.Y(n, w) = -model.endowment(n, w) - profile[n].v_prime(lam * density[w]);
  }
  eq.value = systemic_utility(model, profile, eq.Y);
  return eq;
}

struct PrimalResult {
  Matrix Y;
  double value = 0.0;
  int iterations = 0;
};

/// Independent primal oracle: maximize the systemic expected utility over the
/// admissible set with the total pinned to A, by eliminating the equality
/// constraints (free cell coordinates) and running gradient ascent with
/// Barzilai-Borwein steps and an Armijo backtracking safeguard from several
/// seeded starts. Desk scale only.
inline PrimalResult brute_force_primal(const MarketModel& model, const UtilityProfile& profile,
                                       const ConstraintSpec& spec, double A,
                                       const SolveOptions& opts = {}) {
  const int n_agents = model.num_agents();
  const int n_scen = model.num_scenarios();
  if (n_agents * n_scen > 64)
    throw ScaleError("brute_force_primal: instance exceeds 64 agent-scenario pairs");

  const MeasureStructure ms = measure_structure(spec, model);
  const AllocationBasis basis(ms, n_agents, n_scen, A);
  const int dim = basis.dim();

  auto objective = [&](const std::vector<double>& theta, Matrix* y_out) {
    Matrix Y = basis.to_allocation(theta);
    const double val = systemic_utility(model, profile, Y);
    if (y_out) *y_out = std::move(Y);
    return val;
  };
  auto gradient = [&](const std::vector<double>& theta) {
    Matrix Y = basis.to_allocation(theta);
    Matrix gy(n_agents, n_scen, 0.0);
    for (int n = 0; n < n_agents; ++n)
      for (int w = 0; w < n_scen; ++w)
        gy(n, w) = model.prob(w) * profile[n].u_prime(model.endowment(n, w) + Y(n, w));
    return basis.pullback_gradient(gy);
  };

  PrimalResult best;
  best.value = -std::numeric_limits<double>::infinity();
  int total_iters = 0;

  for (int start = 0; start < std::max(1, opts.starts); ++start) {
    std::vector<double> theta(dim, 0.0);
    if (start > 0) {
      std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(start));
      std::normal_distribution<double> normal(0.0, 0.5);
      for (double& t : theta) t = normal(rng);
    }
    double value = objective(theta, nullptr);
    std::vector<double> grad = gradient(theta);
    double step = 0.1;
    std::vector<double> prev_theta, prev_grad;

    for (int it = 0; it < opts.max_gradient_iters; ++it, ++total_iters) {
      double gnorm = 0.0, gdot = 0.0;
      for (double g : grad) {
        gnorm = std::max(gnorm, std::fabs(g));
        gdot += g * g;
      }
      if (gnorm <= 1e-12) break;

      // Barzilai-Borwein step from the previous pair, clamped to a sane range.
      if (!prev_theta.empty()) {
        double ss = 0.0, sy = 0.0;
        for (int i = 0; i < dim; ++i) {
          const double s = theta[i] - prev_theta[i];
          const double y = prev_grad[i] - grad[i];
          ss += s * s;
          sy += s * y;
        }
        if (sy > 1e-300) step = std::clamp(ss / sy, 1e-10, 1e8);
      }

      prev_theta = theta;
      prev_grad = grad;

      double t = step;
      std::vector<double> trial(dim);
      double trial_value = -std::numeric_limits<double>::infinity();
      for (int back = 0; back < 60; ++back) {
        for (int i = 0; i < dim; ++i) trial[i] = theta[i] + t * grad[i];
        trial_value = objective(trial, nullptr);
        if (trial_value >= value + 1e-4 * t * gdot) break;
        t *= 0.5;
      }
      if (!(trial_value > value)) break;  // no ascent possible at double precision
      theta = trial;
      value = trial_value;
      grad = gradient(theta);
    }

    if (value > best.value) {
      best.value = value;
      objective(theta, &best.Y);
    }
  }
  best.iterations = total_iters;
  return best;
}

}  // namespace sorte
