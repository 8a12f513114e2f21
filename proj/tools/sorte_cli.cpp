// Command-line front end: solve, compare, sweep and verify equilibria for
// scenario documents.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sorte/sorte.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerificationFailed = 2;

struct CommonFlags {
  std::string path;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::string format = "text";
  bool oracle = false;
};

sorte::VerifyTolerances verify_tolerances(double tol) {
  sorte::VerifyTolerances v;
  v.clearing = tol;
  v.membership = tol;
  v.budget = tol / 10.0;
  v.per_agent = 100.0 * tol;
  v.multiplier = 100.0 * tol;
  return v;
}

sorte::SolveOptions solve_options(const CommonFlags& flags) {
  sorte::SolveOptions opts;
  opts.seed = flags.seed == 0 ? 1 : flags.seed;
  return opts;
}

std::string fmt(double x) { return sorte::format_double(x); }

void print_table(const sorte::MarketModel& model, const sorte::Matrix& m, const char* header) {
  std::printf("%s\n", header);
  std::printf("%-12s", "agent");
  for (const auto& s : model.scenario_ids()) std::printf(" %14s", s.c_str());
  std::printf("\n");
  for (int n = 0; n < model.num_agents(); ++n) {
    std::printf("%-12s", model.agent_ids()[n].c_str());
    for (int w = 0; w < model.num_scenarios(); ++w) std::printf(" %14.9f", m(n, w));
    std::printf("\n");
  }
}

sorte::Matrix densities_matrix(const sorte::MarketModel& model, const sorte::PricingVector& pv) {
  sorte::Matrix d(model.num_agents(), model.num_scenarios(), 0.0);
  for (int n = 0; n < model.num_agents(); ++n)
    for (int w = 0; w < model.num_scenarios(); ++w) d(n, w) = pv.density(n)[w];
  return d;
}

json report_to_json(const sorte::VerifyReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}});
  return json{{"pass", report.pass},
              {"checks", checks},
              {"agent_multipliers", report.agent_multipliers}};
}

int run_solve(const CommonFlags& flags) {
  const sorte::ScenarioDocument doc = sorte::load_scenario_document(flags.path);
  const sorte::EquilibriumSolution sol =
      sorte::solve_sorte(doc.model, doc.profile, doc.spec, doc.budget_A, solve_options(flags));
  const sorte::VerifyReport report = sorte::verify_sorte(
      doc.model, doc.profile, doc.spec, doc.budget_A, sol, verify_tolerances(flags.tol));

  double oracle_value = 0.0, oracle_gap = 0.0;
  if (flags.oracle) {
    const sorte::PrimalResult brute = sorte::brute_force_primal(
        doc.model, doc.profile, doc.spec, doc.budget_A, solve_options(flags));
    oracle_value = brute.value;
    oracle_gap = sol.primal_value - brute.value;
  }

  if (flags.format == "json") {
    json out = sorte::solution_to_json(doc.model, sol);
    out["verification"] = report_to_json(report);
    if (flags.oracle)
      out["oracle"] = {{"value", oracle_value}, {"discrepancy", oracle_gap}};
    std::printf("%s\n", out.dump(2).c_str());
  } else if (flags.format == "csv") {
    std::string out = "quantity,id";
    for (const auto& s : doc.model.scenario_ids()) out += "," + s;
    out += "\n";
    for (int n = 0; n < doc.model.num_agents(); ++n) {
      out += "Y," + doc.model.agent_ids()[n];
      for (int w = 0; w < doc.model.num_scenarios(); ++w) out += "," + fmt(sol.Y(n, w));
      out += "\n";
    }
    for (int n = 0; n < doc.model.num_agents(); ++n) {
      out += "density," + doc.model.agent_ids()[n];
      for (int w = 0; w < doc.model.num_scenarios(); ++w)
        out += "," + fmt(sol.pricing.density(n)[w]);
      out += "\n";
    }
    for (int n = 0; n < doc.model.num_agents(); ++n)
      out += "a," + doc.model.agent_ids()[n] + "," + fmt(sol.a[n]) + "\n";
    out += "lambda,," + fmt(sol.lambda) + "\n";
    out += "primal_value,," + fmt(sol.primal_value) + "\n";
    out += "dual_value,," + fmt(sol.dual_value) + "\n";
    out += "gap,," + fmt(sol.diagnostics.duality_gap) + "\n";
    out += std::string("verification,,") + (report.pass ? "pass" : "fail") + "\n";
    std::fputs(out.c_str(), stdout);
  } else {
    std::printf("agents: %d  scenarios: %d  budget A: %s\n", doc.model.num_agents(),
                doc.model.num_scenarios(), fmt(doc.budget_A).c_str());
    std::printf("lambda:        %s\n", fmt(sol.lambda).c_str());
    std::printf("primal value:  %s\n", fmt(sol.primal_value).c_str());
    std::printf("dual value:    %s\n", fmt(sol.dual_value).c_str());
    std::printf("duality gap:   %.3e\n", sol.diagnostics.duality_gap);
    std::printf("\n");
    print_table(doc.model, sol.Y, "allocation Y");
    std::printf("\n");
    print_table(doc.model, densities_matrix(doc.model, sol.pricing), "pricing densities dQ/dP");
    std::printf("\nbudgets a_n:\n");
    for (int n = 0; n < doc.model.num_agents(); ++n)
      std::printf("%-12s %14.9f\n", doc.model.agent_ids()[n].c_str(), sol.a[n]);
    if (flags.oracle) {
      std::printf("\nbrute-force oracle value: %s  (solver - oracle = %.3e)\n",
                  fmt(oracle_value).c_str(), oracle_gap);
    }
    std::printf("\nverification (clearing tol %.1e, marginal tol %.1e):\n", flags.tol,
                100.0 * flags.tol);
    for (const auto& c : report.checks)
      std::printf("  [%s] %-28s residual=%.3e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                  c.residual);
    std::printf("overall: %s\n", report.pass ? "PASS" : "FAIL");
  }
  return report.pass ? kExitOk : kExitVerificationFailed;
}

int run_compare(const CommonFlags& flags, std::vector<double> budget_vector) {
  const sorte::ScenarioDocument doc = sorte::load_scenario_document(flags.path);
  const sorte::DeterministicAllocation det =
      sorte::deterministic_allocation(doc.model, doc.profile, doc.budget_A);
  const sorte::EquilibriumSolution sol =
      sorte::solve_sorte(doc.model, doc.profile, doc.spec, doc.budget_A, solve_options(flags));

  if (budget_vector.empty()) budget_vector = sol.a;
  if (static_cast<int>(budget_vector.size()) != doc.model.num_agents())
    throw sorte::ValidationError("--budget-vector must have one entry per agent");
  double total = 0.0;
  for (double b : budget_vector) total += b;
  if (std::fabs(total - doc.budget_A) > 1e-9)
    throw sorte::ValidationError("--budget-vector must sum to the document budget");

  // Column 1: hold the cash split, no terminal exchange. Column 2: every
  // agent trades optimally at that budget under the equilibrium measures.
  // Column 3: budgets optimized too.
  double no_exchange = 0.0;
  for (int n = 0; n < doc.model.num_agents(); ++n)
    for (int w = 0; w < doc.model.num_scenarios(); ++w)
      no_exchange +=
          doc.model.prob(w) * doc.profile[n].u(doc.model.endowment(n, w) + budget_vector[n]);

  const sorte::ExchangeEquilibrium at_user =
      sorte::exchange_equilibrium(doc.model, doc.profile, sol.pricing, budget_vector);
  const sorte::ExchangeEquilibrium at_equilibrium =
      sorte::exchange_equilibrium(doc.model, doc.profile, sol.pricing, sol.a);

  const double scale =
      1.0 + std::fabs(sol.primal_value) + std::fabs(no_exchange) + std::fabs(at_user.value);
  const bool ordering_ok =
      no_exchange <= at_user.value + 1e-9 * scale &&
      at_user.value <= sol.primal_value + 1e-9 * scale &&
      det.value <= sol.primal_value + 1e-9 * scale &&
      std::fabs(at_equilibrium.value - sol.primal_value) <= 1e-7 * scale;

  if (flags.format == "json") {
    json out{{"deterministic_value", no_exchange},
             {"exchange_value_at_budget", at_user.value},
             {"sorte_value", sol.primal_value},
             {"best_deterministic_value", det.value},
             {"budget_vector", budget_vector},
             {"ordering_ok", ordering_ok}};
    std::printf("%s\n", out.dump(2).c_str());
  } else if (flags.format == "csv") {
    std::string out = "quantity,value\n";
    out += "deterministic," + fmt(no_exchange) + "\n";
    out += "exchange_at_budget," + fmt(at_user.value) + "\n";
    out += "sorte," + fmt(sol.primal_value) + "\n";
    out += "best_deterministic," + fmt(det.value) + "\n";
    std::fputs(out.c_str(), stdout);
  } else {
    std::printf("deterministic value at a:       %s\n", fmt(no_exchange).c_str());
    std::printf("exchange equilibrium at a:      %s\n", fmt(at_user.value).c_str());
    std::printf("systemic equilibrium value:     %s\n", fmt(sol.primal_value).c_str());
    std::printf("best deterministic allocation:  %s\n", fmt(det.value).c_str());
    std::printf("ordering deterministic <= exchange-at-a <= equilibrium: %s\n",
                ordering_ok ? "PASS" : "FAIL");
  }
  return ordering_ok ? kExitOk : kExitVerificationFailed;
}

int run_sweep(const CommonFlags& flags, const std::string& param,
              const std::vector<double>& grid) {
  const sorte::ScenarioDocument doc = sorte::load_scenario_document(flags.path);
  if (grid.empty()) throw sorte::ValidationError("--grid must contain at least one value");
  if (param != "A" && param != "gamma")
    throw sorte::ValidationError("--param must be A or gamma");

  struct Point {
    double param = 0.0;
    double value = 0.0;
    double lambda = 0.0;
    std::vector<double> a;
  };

  auto solve_point = [&](double p) {
    sorte::UtilityProfile profile = doc.profile;
    double A = doc.budget_A;
    if (param == "A") {
      A = p;
    } else {
      profile = sorte::apply_weights(
          doc.profile, std::vector<double>(doc.model.num_agents(), p));
    }
    const sorte::EquilibriumSolution sol =
        sorte::solve_sorte(doc.model, profile, doc.spec, A, solve_options(flags));
    return Point{p, sol.primal_value, sol.lambda, sol.a};
  };

  // Points are independent; solve them concurrently, emit in grid order.
  std::vector<std::future<Point>> futures;
  futures.reserve(grid.size());
  for (double p : grid)
    futures.push_back(std::async(std::launch::async, solve_point, p));
  std::vector<Point> points;
  points.reserve(grid.size());
  for (auto& f : futures) points.push_back(f.get());

  bool monotone_ok = true;
  if (param == "A") {
    for (std::size_t i = 1; i < points.size(); ++i)
      if (!(points[i].value > points[i - 1].value) && grid[i] > grid[i - 1])
        monotone_ok = false;
  }

  std::string out = "param,value,lambda";
  for (const auto& id : doc.model.agent_ids()) out += ",a_" + id;
  out += "\n";
  for (const Point& pt : points) {
    out += fmt(pt.param) + "," + fmt(pt.value) + "," + fmt(pt.lambda);
    for (double a : pt.a) out += "," + fmt(a);
    out += "\n";
  }
  if (flags.format == "json") {
    json arr = json::array();
    for (const Point& pt : points)
      arr.push_back(
          {{"param", pt.param}, {"value", pt.value}, {"lambda", pt.lambda}, {"a", pt.a}});
    std::printf("%s\n", json{{"points", arr}, {"monotone_ok", monotone_ok}}.dump(2).c_str());
  } else {
    std::fputs(out.c_str(), stdout);
  }
  if (!monotone_ok) {
    std::fprintf(stderr, "sweep: systemic value is not strictly increasing in A\n");
    return kExitVerificationFailed;
  }
  return kExitOk;
}

int run_verify(const CommonFlags& flags, const std::string& solution_path) {
  const sorte::ScenarioDocument doc = sorte::load_scenario_document(flags.path);
  std::ifstream in(solution_path);
  if (!in) throw sorte::SchemaError("cannot open solution file: " + solution_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw sorte::SchemaError(std::string("solution file is not valid JSON: ") + e.what());
  }
  const sorte::EquilibriumSolution claimed = sorte::solution_from_json(doc.model, j);
  const sorte::VerifyReport report = sorte::verify_sorte(
      doc.model, doc.profile, doc.spec, doc.budget_A, claimed, verify_tolerances(flags.tol));

  if (flags.format == "json") {
    std::printf("%s\n", report_to_json(report).dump(2).c_str());
  } else {
    for (const auto& c : report.checks)
      std::printf("  [%s] %-28s residual=%.3e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                  c.residual);
    std::printf("overall: %s\n", report.pass ? "PASS" : "FAIL");
  }
  return report.pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Systemic optimal risk transfer equilibria on finite scenario spaces"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<double> budget_vector;
  std::string param = "A";
  std::vector<double> grid;
  std::string solution_path;

  auto add_common = [&](CLI::App* cmd, bool with_oracle) {
    cmd->add_option("path", flags.path, "scenario document (JSON)")->required();
    cmd->add_option("--tol", flags.tol, "verification tolerance (default 1e-9)");
    cmd->add_option("--seed", flags.seed, "seed for randomized components");
    cmd->add_option("--format", flags.format, "text | csv | json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    if (with_oracle)
      cmd->add_flag("--oracle", flags.oracle,
                    "also run the brute-force primal oracle and report the discrepancy");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve and verify the equilibrium");
  add_common(solve, true);

  CLI::App* compare = app.add_subcommand(
      "compare", "deterministic vs exchange-equilibrium vs systemic equilibrium values");
  add_common(compare, false);
  compare->add_option("--budget-vector", budget_vector,
                      "comma-separated budgets for the exchange column (default: equilibrium "
                      "budgets)")
      ->delimiter(',');

  CLI::App* sweep = app.add_subcommand("sweep", "solve across a parameter grid");
  add_common(sweep, false);
  sweep->add_option("--param", param, "A | gamma")->required();
  sweep->add_option("--grid", grid, "comma-separated grid values")
      ->delimiter(',')
      ->required();

  CLI::App* verify = app.add_subcommand("verify", "verify a claimed solution file");
  add_common(verify, false);
  verify->add_option("--solution", solution_path, "solution JSON as emitted by solve")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(solve)) return run_solve(flags);
    if (app.got_subcommand(compare)) return run_compare(flags, budget_vector);
    if (app.got_subcommand(sweep)) return run_sweep(flags, param, grid);
    if (app.got_subcommand(verify)) return run_verify(flags, solution_path);
  } catch (const sorte::SchemaError& e) {
    std::fprintf(stderr, "SchemaError: %s\n", e.what());
    return kExitError;
  } catch (const sorte::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
