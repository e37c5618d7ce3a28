// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "netclust/h2analysis.hpp"
#include "netclust/netgraph.hpp"
#include "netclust/partition.hpp"
#include "netclust/reduction.hpp"
#include "netclust/simulate.hpp"
#include "netclust/types.hpp"

namespace netclust::io {

using Json = nlohmann::ordered_json;

// Network files: {"vertices":[{"id":1,"mass":1.0},...],
//                 "edges":[{"tail":1,"head":2,"weight":1.0,"kind":"damper"},...],
//                 "inputs":[1,...]}
// Ids are 1-based and contiguous.
NetworkGraph parse_network(const Json& j);
NetworkGraph parse_network_string(const std::string& text);
NetworkGraph load_network(const std::string& path);
Json network_to_json(const NetworkGraph& g);

// Partition files: {"cells":[[1,3],[2]]} with 1-based vertex ids.
Partition parse_partition(const Json& j, int n);
Partition load_partition(const std::string& path, int n);
Json partition_to_json(const Partition& part);

// Quotient synthesis spec, the input of the synth command.
QuotientSpec parse_quotient_spec(const Json& j);
QuotientSpec load_quotient_spec(const std::string& path);

Json witness_to_json(const AepWitness& w);
Json report_to_json(const H2Report& report);
Json reduction_map_to_json(const ReductionResult& rr);

/// CSV with header t,state_1..,y_1..,energy and 15 significant digits.
std::string trajectory_to_csv(const Trajectory& traj);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Canonical serialization used everywhere: two-space indent plus trailing
/// newline, so repeated runs are byte-identical.
std::string dump(const Json& j);

}  // namespace netclust::io
