#include "urn/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "urn/error.hpp"

namespace urn {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.lo, e.hi});
  return {{"n", g.n_vertices()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidConfig, "graph JSON must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "n" && key != "edges") throw Error(Errc::InvalidConfig, "unknown graph JSON key '" + key + "'");
  }
  if (!j.contains("n") || !j.at("n").is_number_unsigned()) {
    throw Error(Errc::InvalidConfig, "graph JSON field 'n' must be a nonnegative integer");
  }
  if (!j.contains("edges") || !j.at("edges").is_array()) {
    throw Error(Errc::InvalidConfig, "graph JSON field 'edges' must be an array");
  }
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      throw Error(Errc::InvalidConfig, "graph JSON field 'edges' entry " + e.dump() + " is not a vertex pair");
    }
    pairs.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
  }
  return build_graph(j.at("n").get<std::size_t>(), pairs);
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(const std::string& text, std::string_view what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(Errc::InvalidConfig, "--graph: cannot parse " + std::string(what) + " from '" + text + "'");
  }
  return value;
}

}  // namespace

Graph parse_graph_spec(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string& name = parts[0];
  auto arity = [&](std::size_t expected) {
    if (parts.size() != expected + 1) {
      throw Error(Errc::InvalidConfig, "--graph: '" + name + "' takes " + std::to_string(expected) + " parameter(s)");
    }
  };
  if (name == "path") {
    arity(1);
    return path_graph(parse_number<std::size_t>(parts[1], "vertex count"));
  }
  if (name == "cycle") {
    arity(1);
    return cycle_graph(parse_number<std::size_t>(parts[1], "vertex count"));
  }
  if (name == "complete") {
    arity(1);
    return complete_graph(parse_number<std::size_t>(parts[1], "vertex count"));
  }
  if (name == "gnp") {
    arity(3);
    return erdos_renyi(parse_number<std::size_t>(parts[1], "vertex count"),
                       parse_number<double>(parts[2], "edge probability"),
                       parse_number<std::uint64_t>(parts[3], "seed"));
  }
  std::ifstream in{std::string(spec)};
  if (!in) {
    throw Error(Errc::InvalidConfig, "--graph: '" + std::string(spec) + "' is neither a generator nor a readable file");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, "--graph: " + std::string(spec) + ": " + e.what());
  }
  return graph_from_json(j);
}

nlohmann::json spectrum_to_json(const InfluenceSpectrum& s) {
  nlohmann::json L = nlohmann::json::array();
  for (std::size_t r = 0; r < s.L.rows(); ++r) L.push_back(Vector(s.L.row(r).begin(), s.L.row(r).end()));
  return {{"L", L}, {"eigenvalues", s.eigenvalues}, {"lambda", s.gap}, {"p", s.p}};
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec) {
  const std::size_t n = rec.graph.n_vertices();
  out << 't';
  for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
  for (std::size_t i = 0; i < n; ++i) out << ",g_" << i;
  out << '\n';
  for (const Snapshot& s : rec.snapshots) {
    out << s.t;
    for (double v : s.x) out << ',' << format_double(v);
    for (double v : s.g) out << ',' << format_double(v);
    out << '\n';
  }
}

nlohmann::json trajectory_metadata(const TrajectoryRecord& rec) {
  return {{"seed", rec.seed},
          {"rng", std::string(Rng::kAlgorithm)},
          {"graph_hash", graph_hash(rec.graph)},
          {"graph", graph_to_json(rec.graph)},
          {"u0", rec.u0},
          {"g0", rec.g0},
          {"n_steps", rec.n_steps}};
}

void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats) {
  out << "t,mean_z_sq,mean_a,var_a,n\n";
  for (std::size_t k = 0; k < stats.sample_times.size(); ++k) {
    out << stats.sample_times[k] << ',' << format_double(stats.mean_z_sq[k]) << ','
        << format_double(stats.mean_a[k]) << ',' << format_double(stats.var_a[k]) << ',' << stats.n_trajectories
        << '\n';
  }
}

}  // namespace urn
