// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#include "netclust/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace netclust::io {

namespace {

EdgeKind parse_kind(const std::string& text) {
  if (text == "damper") return EdgeKind::Damper;
  if (text == "spring") return EdgeKind::Spring;
  throw InputError("unknown edge kind '" + text + "' (expected damper or spring)");
}

int to_internal(int id, int n, const char* what) {
  if (id < 1 || id > n)
    throw InputError(std::string(what) + " id " + std::to_string(id) + " out of range 1.." +
                     std::to_string(n));
  return id - 1;
}

double number_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw InputError(std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

int int_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw InputError(std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

}  // namespace

NetworkGraph parse_network(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw InputError("network file needs a 'vertices' array");
  const auto& vertices = j["vertices"];
  const int n = static_cast<int>(vertices.size());

  NetworkGraph g;
  g.n = n;
  g.masses = Vector::Zero(n);
  std::vector<bool> seen(n, false);
  for (const auto& v : vertices) {
    const int id = int_field(v, "id");
    const int idx = to_internal(id, n, "vertex");
    if (seen[idx]) throw InputError("duplicate vertex id " + std::to_string(id));
    seen[idx] = true;
    g.masses[idx] = number_field(v, "mass");
  }

  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw InputError("'edges' must be an array");
    for (const auto& e : j["edges"]) {
      Edge edge;
      edge.tail = to_internal(int_field(e, "tail"), n, "edge tail");
      edge.head = to_internal(int_field(e, "head"), n, "edge head");
      edge.weight = number_field(e, "weight");
      edge.kind = e.contains("kind") ? parse_kind(e["kind"].get<std::string>())
                                     : EdgeKind::Damper;
      g.edges.push_back(edge);
    }
  }
  if (j.contains("inputs")) {
    if (!j["inputs"].is_array()) throw InputError("'inputs' must be an array");
    for (const auto& v : j["inputs"]) {
      if (!v.is_number_integer()) throw InputError("'inputs' must hold vertex ids");
      g.forced.push_back(to_internal(v.get<int>(), n, "input vertex"));
    }
  }
  g.validate();
  return g;
}

NetworkGraph parse_network_string(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("network file is not valid JSON");
  return parse_network(j);
}

NetworkGraph load_network(const std::string& path) {
  return parse_network_string(read_file(path));
}

Json network_to_json(const NetworkGraph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (int v = 0; v < g.n; ++v)
    j["vertices"].push_back({{"id", v + 1}, {"mass", g.masses[v]}});
  j["edges"] = Json::array();
  for (const Edge& e : g.edges) {
    j["edges"].push_back({{"tail", e.tail + 1},
                          {"head", e.head + 1},
                          {"weight", e.weight},
                          {"kind", to_string(e.kind)}});
  }
  j["inputs"] = Json::array();
  for (int v : g.forced) j["inputs"].push_back(v + 1);
  return j;
}

Partition parse_partition(const Json& j, int n) {
  if (!j.is_object() || !j.contains("cells") || !j["cells"].is_array())
    throw InputError("partition file needs a 'cells' array");
  std::vector<std::vector<int>> cells;
  for (const auto& cell : j["cells"]) {
    if (!cell.is_array()) throw InputError("each cell must be an array of vertex ids");
    std::vector<int> members;
    for (const auto& v : cell) {
      if (!v.is_number_integer()) throw InputError("cells must hold vertex ids");
      members.push_back(to_internal(v.get<int>(), n, "cell vertex"));
    }
    cells.push_back(std::move(members));
  }
  return Partition::of(std::move(cells), n);
}

Partition load_partition(const std::string& path, int n) {
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw InputError("partition file is not valid JSON");
  return parse_partition(j, n);
}

Json partition_to_json(const Partition& part) {
  Json j;
  j["cells"] = Json::array();
  for (const auto& cell : part.cells) {
    Json c = Json::array();
    for (int v : cell) c.push_back(v + 1);
    j["cells"].push_back(std::move(c));
  }
  return j;
}

QuotientSpec parse_quotient_spec(const Json& j) {
  if (!j.is_object() || !j.contains("cells") || !j["cells"].is_array())
    throw InputError("quotient spec needs a 'cells' array");
  QuotientSpec spec;
  for (const auto& c : j["cells"]) {
    QuotientSpec::CellSpec cell;
    if (c.contains("masses")) {
      for (const auto& mv : c["masses"]) cell.masses.push_back(mv.get<double>());
    } else {
      const int size = int_field(c, "size");
      const double mass = number_field(c, "mass");
      cell.masses.assign(size, mass);
    }
    spec.cells.push_back(std::move(cell));
  }
  const int ncells = static_cast<int>(spec.cells.size());
  if (j.contains("inter")) {
    for (const auto& e : j["inter"]) {
      QuotientSpec::InterEdge ie;
      ie.p = to_internal(int_field(e, "p"), ncells, "inter cell");
      ie.q = to_internal(int_field(e, "q"), ncells, "inter cell");
      ie.weight = number_field(e, "weight");
      ie.kind = e.contains("kind") ? parse_kind(e["kind"].get<std::string>())
                                   : EdgeKind::Damper;
      spec.inter.push_back(ie);
    }
  }
  if (j.contains("intra")) {
    for (const auto& e : j["intra"]) {
      QuotientSpec::IntraEdge ia;
      ia.cell = to_internal(int_field(e, "cell"), ncells, "intra cell");
      const int size = static_cast<int>(spec.cells[ia.cell].masses.size());
      ia.i = to_internal(int_field(e, "i"), size, "intra vertex");
      ia.j = to_internal(int_field(e, "j"), size, "intra vertex");
      ia.weight = number_field(e, "weight");
      ia.kind = e.contains("kind") ? parse_kind(e["kind"].get<std::string>())
                                   : EdgeKind::Damper;
      spec.intra.push_back(ia);
    }
  }
  if (j.contains("inputs")) {
    int total = 0;
    for (const auto& c : spec.cells) total += static_cast<int>(c.masses.size());
    for (const auto& v : j["inputs"])
      spec.inputs.push_back(to_internal(v.get<int>(), total, "input vertex"));
  }
  return spec;
}

QuotientSpec load_quotient_spec(const std::string& path) {
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw InputError("quotient spec is not valid JSON");
  return parse_quotient_spec(j);
}

Json witness_to_json(const AepWitness& w) {
  Json j;
  j["verdict"] = w.verdict;
  j["tol"] = w.tol;
  j["max_relative_spread"] = w.max_relative_spread;
  j["subspace_residual"] = w.subspace_residual;
  j["pairs"] = Json::array();
  for (const auto& p : w.pairs) {
    j["pairs"].push_back({{"p", p.p + 1},
                          {"q", p.q + 1},
                          {"w_pq", p.value},
                          {"min_sum", p.min_sum},
                          {"max_sum", p.max_sum},
                          {"spread", p.spread}});
  }
  return j;
}

Json report_to_json(const H2Report& report) {
  Json j;
  j["h2_full_closed"] = report.h2_full_closed;
  if (report.h2_full_oracle) j["h2_full_oracle"] = *report.h2_full_oracle;
  if (report.h2_reduced_closed) j["h2_reduced_closed"] = *report.h2_reduced_closed;
  if (report.h2_reduced_oracle) j["h2_reduced_oracle"] = *report.h2_reduced_oracle;
  if (report.xi_formula) j["xi_formula"] = *report.xi_formula;
  if (report.xi_oracle) j["xi_oracle"] = *report.xi_oracle;
  if (report.pythagoras_residual) j["pythagoras_residual"] = *report.pythagoras_residual;
  j["forced_vertices"] = Json::array();
  for (const auto& term : report.forced_terms) {
    Json t = {{"vertex", term.vertex + 1}, {"mass", term.mass}};
    if (term.cell_mass) t["cell_mass"] = *term.cell_mass;
    j["forced_vertices"].push_back(std::move(t));
  }
  if (report.h2_reduced_closed) {
    j["aep"] = {{"definition", report.aep_definition},
                {"subspace", report.aep_subspace}};
    j["xi_is_error_guarantee"] = report.xi_is_error_guarantee;
  }
  return j;
}

Json reduction_map_to_json(const ReductionResult& rr) {
  Json j;
  j["vertex_to_cell"] = Json::array();
  for (int c : rr.vertex_to_cell) j["vertex_to_cell"].push_back(c + 1);
  j["edges"] = Json::array();
  for (size_t e = 0; e < rr.edge_map.size(); ++e) {
    Json entry = {{"index", static_cast<int>(e) + 1}};
    if (rr.edge_map[e])
      entry["reduced_index"] = *rr.edge_map[e] + 1;
    else
      entry["reduced_index"] = nullptr;
    j["edges"].push_back(std::move(entry));
  }
  return j;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t";
  for (int c = 0; c < traj.states.cols(); ++c) out << ",state_" << (c + 1);
  for (int c = 0; c < traj.outputs.cols(); ++c) out << ",y_" << (c + 1);
  out << ",energy\n";
  char buf[40];
  auto emit = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.15g", x);
    out << buf;
  };
  for (long s = 0; s < traj.times.size(); ++s) {
    emit(traj.times[s]);
    for (int c = 0; c < traj.states.cols(); ++c) {
      out << ',';
      emit(traj.states(s, c));
    }
    for (int c = 0; c < traj.outputs.cols(); ++c) {
      out << ',';
      emit(traj.outputs(s, c));
    }
    out << ',';
    emit(traj.energies[s]);
    out << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace netclust::io
