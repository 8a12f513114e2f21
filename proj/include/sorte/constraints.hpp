#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sorte/errors.hpp"
#include "sorte/market.hpp"
#include "sorte/numerics.hpp"

namespace sorte {

enum class SharingVariant { FullSharing, Cluster, ScenarioCluster, NoSharing };

/// Admissible-allocation family: allocations whose within-group scenario sums
/// are deterministic, for an agent partition that may depend on a scenario
/// partition (events). Full sharing is one group; no sharing is all
/// singletons; both are canonicalized to the cluster form on resolution, so
/// every downstream code path is identical for equivalent specifications.
///
/// Arbitrary convex cones are rejected by construction: only these families
/// are representable.
class ConstraintSpec {
 public:
  static ConstraintSpec full_sharing() {
    ConstraintSpec s;
    s.variant_ = SharingVariant::FullSharing;
    return s;
  }

  static ConstraintSpec no_sharing() {
    ConstraintSpec s;
    s.variant_ = SharingVariant::NoSharing;
    return s;
  }

  static ConstraintSpec cluster(std::vector<std::vector<int>> groups) {
    ConstraintSpec s;
    s.variant_ = SharingVariant::Cluster;
    s.groups_ = std::move(groups);
    check_groups_disjoint(s.groups_);
    return s;
  }

  static ConstraintSpec scenario_cluster(std::vector<std::vector<int>> events,
                                         std::vector<std::vector<std::vector<int>>> event_groups) {
    if (events.empty()) throw ValidationError("scenario_cluster: needs at least one event");
    if (events.size() != event_groups.size())
      throw ValidationError("scenario_cluster: one agent partition per event required");
    ConstraintSpec s;
    s.variant_ = SharingVariant::ScenarioCluster;
    s.events_ = std::move(events);
    s.event_groups_ = std::move(event_groups);
    for (const auto& g : s.event_groups_) check_groups_disjoint(g);
    return s;
  }

  SharingVariant variant() const { return variant_; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }
  const std::vector<std::vector<int>>& events() const { return events_; }
  const std::vector<std::vector<std::vector<int>>>& event_groups() const { return event_groups_; }

 private:
  static void check_groups_disjoint(const std::vector<std::vector<int>>& groups) {
    std::vector<int> seen;
    for (const auto& g : groups) {
      if (g.empty()) throw ValidationError("constraint groups must be nonempty");
      for (int n : g) {
        if (std::find(seen.begin(), seen.end(), n) != seen.end())
          throw ValidationError("constraint groups must be disjoint");
        seen.push_back(n);
      }
    }
  }

  SharingVariant variant_ = SharingVariant::FullSharing;
  std::vector<std::vector<int>> groups_;                    // Cluster
  std::vector<std::vector<int>> events_;                    // ScenarioCluster
  std::vector<std::vector<std::vector<int>>> event_groups_; // ScenarioCluster
};

/// One cell = (event, agent group). Within a cell all agents of the group
/// share a single pricing density on the cell's scenarios.
struct Cell {
  int event_index = 0;
  std::vector<int> scenarios;  // scenario indices of the event
  int group_index = 0;
  std::vector<int> agents;     // agent indices of the group
};

/// Cell decomposition of the pricing-vector set induced by a constraint
/// specification.
struct MeasureStructure {
  std::vector<std::vector<int>> events;  // partition of scenario indices
  std::vector<Cell> cells;               // ordered by (event, group)
  bool constant_total_required = false;  // multi-event specs also pin the total

  int num_events() const { return static_cast<int>(events.size()); }

  /// Index into `cells` of the cell containing (agent, event).
  int cell_of(int agent, int event_index) const {
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
      const Cell& cell = cells[c];
      if (cell.event_index != event_index) continue;
      if (std::find(cell.agents.begin(), cell.agents.end(), agent) != cell.agents.end()) return c;
    }
    throw IndexError("MeasureStructure: agent not covered on event");
  }
};

namespace detail {

inline void check_partition_of(const std::vector<std::vector<int>>& parts, int count,
                               const char* what) {
  std::vector<char> seen(count, 0);
  for (const auto& part : parts) {
    if (part.empty()) throw ValidationError(std::string(what) + ": empty part");
    for (int i : part) {
      if (i < 0 || i >= count) throw ValidationError(std::string(what) + ": index out of range");
      if (seen[i]) throw ValidationError(std::string(what) + ": parts overlap");
      seen[i] = 1;
    }
  }
  for (char c : seen)
    if (!c) throw ValidationError(std::string(what) + ": parts do not cover the index set");
}

inline std::vector<std::vector<int>> singleton_groups(int n) {
  std::vector<std::vector<int>> g(n);
  for (int i = 0; i < n; ++i) g[i] = {i};
  return g;
}

inline std::vector<int> all_indices(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace detail

/// Cell decomposition for a spec on a market of `num_agents` x
/// `num_scenarios`. Full sharing and no sharing canonicalize to one-event
/// cluster structures.
inline MeasureStructure measure_structure(const ConstraintSpec& spec, int num_agents,
                                          int num_scenarios) {
  std::vector<std::vector<int>> events;
  std::vector<std::vector<std::vector<int>>> partitions;
  switch (spec.variant()) {
    case SharingVariant::FullSharing:
      events = {detail::all_indices(num_scenarios)};
      partitions = {{detail::all_indices(num_agents)}};
      break;
    case SharingVariant::NoSharing:
      events = {detail::all_indices(num_scenarios)};
      partitions = {detail::singleton_groups(num_agents)};
      break;
    case SharingVariant::Cluster:
      events = {detail::all_indices(num_scenarios)};
      partitions = {spec.groups()};
      break;
    case SharingVariant::ScenarioCluster:
      events = spec.events();
      partitions = spec.event_groups();
      break;
  }
  detail::check_partition_of(events, num_scenarios, "scenario events");
  for (const auto& p : partitions) detail::check_partition_of(p, num_agents, "agent groups");

  MeasureStructure ms;
  ms.events = events;
  ms.constant_total_required = events.size() > 1;
  for (int e = 0; e < static_cast<int>(events.size()); ++e) {
    for (int g = 0; g < static_cast<int>(partitions[e].size()); ++g) {
      Cell cell;
      cell.event_index = e;
      cell.scenarios = events[e];
      cell.group_index = g;
      cell.agents = partitions[e][g];
      ms.cells.push_back(std::move(cell));
    }
  }
  return ms;
}

inline MeasureStructure measure_structure(const ConstraintSpec& spec, const MarketModel& model) {
  return measure_structure(spec, model.num_agents(), model.num_scenarios());
}

struct MembershipResult {
  bool is_member = false;
  std::vector<double> group_sums;  // one constant per cell (scenario mean of the group sum)
  double total = 0.0;              // scenario mean of the total allocation
  double max_residual = 0.0;
};

/// Whether Y lies in the admissible family: every cell's group sum is
/// scenario-constant on its event within `tol`, and for multi-event specs the
/// total allocation is one constant across all scenarios.
inline MembershipResult membership(const ConstraintSpec& spec, const Matrix& Y,
                                   double tol = 1e-9) {
  for (double v : Y.data())
    if (!std::isfinite(v)) throw DimensionError("membership: allocation entries must be finite");
  const MeasureStructure ms = measure_structure(spec, Y.rows(), Y.cols());

  MembershipResult res;
  res.is_member = true;
  for (const Cell& cell : ms.cells) {
    double mean = 0.0;
    for (int w : cell.scenarios) {
      double sum = 0.0;
      for (int n : cell.agents) sum += Y(n, w);
      mean += sum;
    }
    mean /= static_cast<double>(cell.scenarios.size());
    for (int w : cell.scenarios) {
      double sum = 0.0;
      for (int n : cell.agents) sum += Y(n, w);
      res.max_residual = std::max(res.max_residual, std::fabs(sum - mean));
    }
    res.group_sums.push_back(mean);
  }
  {
    double mean = 0.0;
    for (int w = 0; w < Y.cols(); ++w) {
      double sum = 0.0;
      for (int n = 0; n < Y.rows(); ++n) sum += Y(n, w);
      mean += sum;
    }
    mean /= static_cast<double>(Y.cols());
    res.total = mean;
    if (ms.constant_total_required) {
      for (int w = 0; w < Y.cols(); ++w) {
        double sum = 0.0;
        for (int n = 0; n < Y.rows(); ++n) sum += Y(n, w);
        res.max_residual = std::max(res.max_residual, std::fabs(sum - mean));
      }
    }
  }
  res.is_member = res.max_residual <= tol;
  return res;
}

/// Glue per-cell densities into a full pricing vector. `cell_densities[c]`
/// runs over cell c's scenarios in the order listed in the cell. Each agent's
/// glued density must be nonnegative and integrate to one.
inline PricingVector assemble_pricing_vector(const MarketModel& model,
                                             const MeasureStructure& ms,
                                             const std::vector<std::vector<double>>& cell_densities,
                                             double tol = 1e-9) {
  if (cell_densities.size() != ms.cells.size())
    throw DimensionError("assemble_pricing_vector: one density per cell required");
  for (std::size_t c = 0; c < ms.cells.size(); ++c) {
    if (cell_densities[c].size() != ms.cells[c].scenarios.size())
      throw DimensionError("assemble_pricing_vector: cell density has wrong length");
    for (double d : cell_densities[c])
      if (d < 0.0) throw ValidationError("assemble_pricing_vector: densities must be nonnegative");
  }

  PricingVector pv;
  pv.measures.resize(model.num_agents());
  for (int n = 0; n < model.num_agents(); ++n)
    pv.measures[n].density.assign(model.num_scenarios(), 0.0);

  for (std::size_t c = 0; c < ms.cells.size(); ++c) {
    const Cell& cell = ms.cells[c];
    for (int n : cell.agents)
      for (std::size_t k = 0; k < cell.scenarios.size(); ++k)
        pv.measures[n].density[cell.scenarios[k]] = cell_densities[c][k];
  }

  for (int n = 0; n < model.num_agents(); ++n) {
    double mass = 0.0;
    for (int w = 0; w < model.num_scenarios(); ++w)
      mass += model.prob(w) * pv.measures[n].density[w];
    if (std::fabs(mass - 1.0) > tol)
      throw NormalizationError("assemble_pricing_vector: agent " + std::to_string(n) +
                               " density integrates to " + std::to_string(mass));
  }
  return pv;
}

/// Coordinates for the admissible set with total allocation pinned to A:
/// per cell, all but the last agent's values are free on the cell's
/// scenarios; per event, all but the last cell's constants are free. The last
/// agent of a cell absorbs the group-sum constraint and the last cell of each
/// event absorbs the budget. Used by the brute-force primal optimizer and by
/// the feasibility samplers.
class AllocationBasis {
 public:
  AllocationBasis(const MeasureStructure& ms, int num_agents, int num_scenarios, double total)
      : ms_(ms), num_agents_(num_agents), num_scenarios_(num_scenarios), total_(total) {
    dim_ = 0;
    for (const Cell& cell : ms_.cells)
      dim_ += static_cast<int>((cell.agents.size() - 1) * cell.scenarios.size());
    for (int e = 0; e < ms_.num_events(); ++e) dim_ += cells_of_event(e) - 1;
  }

  int dim() const { return dim_; }

  Matrix to_allocation(const std::vector<double>& theta) const {
    if (static_cast<int>(theta.size()) != dim_)
      throw DimensionError("AllocationBasis: parameter vector has wrong length");
    Matrix Y(num_agents_, num_scenarios_, 0.0);
    int t = 0;
    // Free agent coordinates.
    for (const Cell& cell : ms_.cells) {
      const int g = static_cast<int>(cell.agents.size());
      for (int j = 0; j + 1 < g; ++j)
        for (int w : cell.scenarios) Y(cell.agents[j], w) = theta[t++];
    }
    // Cell constants: free for all but the last cell of each event.
    std::vector<double> d(ms_.cells.size(), 0.0);
    for (int e = 0; e < ms_.num_events(); ++e) {
      double used = 0.0;
      int last = -1;
      for (int c = 0; c < static_cast<int>(ms_.cells.size()); ++c) {
        if (ms_.cells[c].event_index != e) continue;
        last = c;
      }
      for (int c = 0; c < static_cast<int>(ms_.cells.size()); ++c) {
        if (ms_.cells[c].event_index != e || c == last) continue;
        d[c] = theta[t++];
        used += d[c];
      }
      d[last] = total_ - used;
    }
    // Last agent of each cell absorbs the group-sum constraint.
    for (std::size_t c = 0; c < ms_.cells.size(); ++c) {
      const Cell& cell = ms_.cells[c];
      const int g = static_cast<int>(cell.agents.size());
      for (int w : cell.scenarios) {
        double sum = 0.0;
        for (int j = 0; j + 1 < g; ++j) sum += Y(cell.agents[j], w);
        Y(cell.agents[g - 1], w) = d[c] - sum;
      }
    }
    return Y;
  }

  /// Pull back a gradient on allocations (dObj/dY) to the free coordinates.
  std::vector<double> pullback_gradient(const Matrix& grad_y) const {
    std::vector<double> g(dim_, 0.0);
    int t = 0;
    for (const Cell& cell : ms_.cells) {
      const int gsz = static_cast<int>(cell.agents.size());
      const int last_agent = cell.agents[gsz - 1];
      for (int j = 0; j + 1 < gsz; ++j)
        for (int w : cell.scenarios)
          g[t++] = grad_y(cell.agents[j], w) - grad_y(last_agent, w);
    }
    for (int e = 0; e < ms_.num_events(); ++e) {
      int last = -1;
      for (int c = 0; c < static_cast<int>(ms_.cells.size()); ++c)
        if (ms_.cells[c].event_index == e) last = c;
      const Cell& last_cell = ms_.cells[last];
      const int last_cell_agent = last_cell.agents.back();
      for (int c = 0; c < static_cast<int>(ms_.cells.size()); ++c) {
        if (ms_.cells[c].event_index != e || c == last) continue;
        const int cell_agent = ms_.cells[c].agents.back();
        double acc = 0.0;
        for (int w : ms_.cells[c].scenarios) acc += grad_y(cell_agent, w);
        for (int w : last_cell.scenarios) acc -= grad_y(last_cell_agent, w);
        g[t++] = acc;
      }
    }
    return g;
  }

 private:
  int cells_of_event(int e) const {
    int count = 0;
    for (const Cell& cell : ms_.cells)
      if (cell.event_index == e) ++count;
    return count;
  }

  MeasureStructure ms_;
  int num_agents_;
  int num_scenarios_;
  double total_;
  int dim_;
};

}  // namespace sorte
