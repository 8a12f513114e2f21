#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sorte/constraints.hpp"
#include "sorte/dual_solver.hpp"
#include "sorte/errors.hpp"
#include "sorte/market.hpp"
#include "sorte/utility.hpp"

namespace sorte {

/// Everything a scenario document carries: the market, the utility profile,
/// the constraint family and the systemic budget.
struct ScenarioDocument {
  MarketModel model;
  UtilityProfile profile;
  ConstraintSpec spec;
  double budget_A = 0.0;
  std::vector<double> alphas;  // retained for the exponential closed forms
  std::vector<double> gammas;
};

namespace io_detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing key: ") + key);
  return j.at(key);
}

template <class T>
T as(const nlohmann::json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("wrong type for ") + what);
  }
}

}  // namespace io_detail

/// Market part of a scenario document. Schema errors and invariant violations
/// are reported separately; zero-probability scenarios are rejected rather
/// than dropped.
inline MarketModel load_market(const nlohmann::json& doc) {
  using io_detail::as;
  using io_detail::require;
  auto agents = as<std::vector<std::string>>(require(doc, "agents"), "agents");
  auto scenarios = as<std::vector<std::string>>(require(doc, "scenarios"), "scenarios");
  auto probs = as<std::vector<double>>(require(doc, "probs"), "probs");
  auto rows = as<std::vector<std::vector<double>>>(require(doc, "endowments"), "endowments");
  if (rows.size() != agents.size())
    throw ValidationError("endowments must have one row per agent");
  for (const auto& r : rows)
    if (r.size() != scenarios.size())
      throw ValidationError("endowment rows must have one entry per scenario");
  Matrix X(static_cast<int>(agents.size()), static_cast<int>(scenarios.size()), 0.0);
  for (std::size_t n = 0; n < rows.size(); ++n)
    for (std::size_t w = 0; w < rows[n].size(); ++w)
      X(static_cast<int>(n), static_cast<int>(w)) = rows[n][w];
  return MarketModel::create(std::move(agents), std::move(scenarios), std::move(probs),
                             std::move(X));
}

inline UtilityProfile parse_utility(const nlohmann::json& block, int num_agents,
                                    std::vector<double>* alphas_out,
                                    std::vector<double>* gammas_out) {
  using io_detail::as;
  using io_detail::require;
  const auto family = as<std::string>(require(block, "family"), "utility.family");
  if (family != "exponential")
    throw SchemaError("utility.family: only \"exponential\" is accepted in documents; custom "
                      "families are registered through the API");
  auto alphas = as<std::vector<double>>(require(block, "alphas"), "utility.alphas");
  if (static_cast<int>(alphas.size()) != num_agents)
    throw ValidationError("utility.alphas must have one entry per agent");
  std::vector<double> gammas;
  if (block.contains("gammas")) {
    gammas = as<std::vector<double>>(block.at("gammas"), "utility.gammas");
    if (static_cast<int>(gammas.size()) != num_agents)
      throw ValidationError("utility.gammas must have one entry per agent");
  }
  for (double a : alphas)
    if (!(a > 0.0)) throw ValidationError("utility.alphas must be positive");
  for (double g : gammas)
    if (!(g > 0.0)) throw ValidationError("utility.gammas must be positive");
  if (alphas_out) *alphas_out = alphas;
  if (gammas_out) *gammas_out = gammas;
  return UtilityProfile::exponential(alphas, gammas);
}

inline ConstraintSpec parse_constraints(const nlohmann::json& block) {
  using io_detail::as;
  using io_detail::require;
  const auto variant = as<std::string>(require(block, "variant"), "constraints.variant");
  if (variant == "full") return ConstraintSpec::full_sharing();
  if (variant == "none") return ConstraintSpec::no_sharing();
  if (variant == "cluster") {
    auto groups =
        as<std::vector<std::vector<int>>>(require(block, "groups"), "constraints.groups");
    return ConstraintSpec::cluster(std::move(groups));
  }
  if (variant == "scenario_cluster") {
    auto events =
        as<std::vector<std::vector<int>>>(require(block, "events"), "constraints.events");
    auto event_groups = as<std::vector<std::vector<std::vector<int>>>>(
        require(block, "event_groups"), "constraints.event_groups");
    return ConstraintSpec::scenario_cluster(std::move(events), std::move(event_groups));
  }
  throw SchemaError("constraints.variant must be one of full, none, cluster, scenario_cluster; "
                    "general convex cones are not representable");
}

inline ScenarioDocument parse_scenario_document(const nlohmann::json& doc) {
  using io_detail::as;
  using io_detail::require;
  ScenarioDocument out{.model = load_market(doc),
                       .profile = {},
                       .spec = ConstraintSpec::full_sharing(),
                       .budget_A = 0.0,
                       .alphas = {},
                       .gammas = {}};
  out.profile = parse_utility(require(doc, "utility"), out.model.num_agents(), &out.alphas,
                              &out.gammas);
  out.spec = parse_constraints(require(doc, "constraints"));
  out.budget_A = as<double>(require(doc, "budget_A"), "budget_A");
  // Resolve now so malformed partitions surface at load time.
  measure_structure(out.spec, out.model);
  return out;
}

inline ScenarioDocument load_scenario_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario document: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("scenario document is not valid JSON: ") + e.what());
  }
  return parse_scenario_document(doc);
}

/// Shortest round-trippable decimal representation.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// CSV with a header row of scenario labels; one data row per agent row of
/// the matrix.
inline std::string to_csv(const std::vector<std::string>& scenario_labels, const Matrix& m,
                          const std::vector<std::string>& row_labels = {}) {
  if (static_cast<int>(scenario_labels.size()) != m.cols())
    throw DimensionError("to_csv: label count does not match columns");
  std::string out;
  if (!row_labels.empty()) out += "id,";
  for (std::size_t i = 0; i < scenario_labels.size(); ++i) {
    out += scenario_labels[i];
    out += (i + 1 < scenario_labels.size()) ? ',' : '\n';
  }
  for (int r = 0; r < m.rows(); ++r) {
    if (!row_labels.empty()) {
      out += row_labels[r];
      out += ',';
    }
    for (int c = 0; c < m.cols(); ++c) {
      out += format_double(m(r, c));
      out += (c + 1 < m.cols()) ? ',' : '\n';
    }
  }
  return out;
}

inline std::string to_csv(const std::vector<std::string>& scenario_labels,
                          const std::vector<double>& v) {
  Matrix m(1, static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(0, static_cast<int>(i)) = v[i];
  return to_csv(scenario_labels, m);
}

inline nlohmann::json solution_to_json(const MarketModel& model, const EquilibriumSolution& sol) {
  nlohmann::json j;
  j["lambda"] = sol.lambda;
  j["primal_value"] = sol.primal_value;
  j["dual_value"] = sol.dual_value;
  j["a"] = sol.a;
  std::vector<std::vector<double>> y(model.num_agents());
  std::vector<std::vector<double>> dens(model.num_agents());
  for (int n = 0; n < model.num_agents(); ++n) {
    y[n] = sol.Y.row(n);
    dens[n] = sol.pricing.density(n);
  }
  j["Y"] = y;
  j["densities"] = dens;
  j["diagnostics"] = {{"clearing_residual", sol.diagnostics.clearing_residual},
                      {"budget_residual", sol.diagnostics.budget_residual},
                      {"foc_residual", sol.diagnostics.foc_residual},
                      {"duality_gap", sol.diagnostics.duality_gap},
                      {"min_density", sol.diagnostics.min_density},
                      {"lambda_iterations", sol.diagnostics.lambda_iterations},
                      {"scenario_roots", sol.diagnostics.scenario_roots},
                      {"warnings", sol.diagnostics.warnings}};
  return j;
}

/// Re-ingest a claimed solution (as emitted by solution_to_json) so it can be
/// verified independently.
inline EquilibriumSolution solution_from_json(const MarketModel& model,
                                              const nlohmann::json& j) {
  using io_detail::as;
  using io_detail::require;
  EquilibriumSolution sol;
  sol.lambda = as<double>(require(j, "lambda"), "lambda");
  sol.primal_value = as<double>(require(j, "primal_value"), "primal_value");
  sol.dual_value = as<double>(require(j, "dual_value"), "dual_value");
  sol.a = as<std::vector<double>>(require(j, "a"), "a");
  auto y = as<std::vector<std::vector<double>>>(require(j, "Y"), "Y");
  auto dens = as<std::vector<std::vector<double>>>(require(j, "densities"), "densities");
  if (static_cast<int>(y.size()) != model.num_agents() ||
      static_cast<int>(dens.size()) != model.num_agents())
    throw ValidationError("claimed solution does not match the model's agent count");
  sol.Y = Matrix(model.num_agents(), model.num_scenarios(), 0.0);
  sol.pricing.measures.resize(model.num_agents());
  for (int n = 0; n < model.num_agents(); ++n) {
    if (static_cast<int>(y[n].size()) != model.num_scenarios() ||
        static_cast<int>(dens[n].size()) != model.num_scenarios())
      throw ValidationError("claimed solution does not match the model's scenario count");
    for (int w = 0; w < model.num_scenarios(); ++w) sol.Y(n, w) = y[n][w];
    sol.pricing.measures[n].density = dens[n];
  }
  if (static_cast<int>(sol.a.size()) != model.num_agents())
    throw ValidationError("claimed solution budget vector has wrong length");
  return sol;
}

}  // namespace sorte
