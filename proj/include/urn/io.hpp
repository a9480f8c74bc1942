#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "urn/dynamics.hpp"
#include "urn/ensemble.hpp"
#include "urn/graph.hpp"
#include "urn/spectral.hpp"

namespace urn {

/// 17 significant digits, '.' decimal point, independent of the C locale.
std::string format_double(double v);

/// {"n": int, "edges": [[i, j], ...]}
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

/// Builds a graph from `<name>:<params>` shorthand: path:N, cycle:N,
/// complete:N, gnp:N:P:SEED. Anything else is read as a path to a graph JSON
/// file. Throws InvalidConfig on malformed input.
Graph parse_graph_spec(std::string_view spec);

nlohmann::json spectrum_to_json(const InfluenceSpectrum& s);

/// Header `t,x_0..x_{n-1},g_0..g_{n-1}`, one row per snapshot.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec);
nlohmann::json trajectory_metadata(const TrajectoryRecord& rec);

/// Header `t,mean_z_sq,mean_a,var_a,n`.
void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats);

}  // namespace urn
