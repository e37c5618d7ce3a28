// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#include "netclust/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "netclust/h2analysis.hpp"
#include "netclust/io.hpp"
#include "netclust/netgraph.hpp"
#include "netclust/partition.hpp"
#include "netclust/reduction.hpp"
#include "netclust/second_order.hpp"
#include "netclust/simulate.hpp"

namespace netclust {

namespace {

KindFilter parse_filter(const std::string& text) {
  if (text == "damper") return KindFilter::Damper;
  if (text == "spring") return KindFilter::Spring;
  if (text == "all") return KindFilter::All;
  throw InputError("unknown kind filter '" + text + "'");
}

InputSignal parse_input_spec(const std::string& text) {
  if (text == "zero") return InputSignal::zero();
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  int channel = 1;
  if (colon != std::string::npos) {
    try {
      channel = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw InputError("bad input channel in '" + text + "'");
    }
  }
  if (channel < 1) throw InputError("input channels are 1-based");
  if (name == "impulse") return InputSignal::impulse(channel - 1);
  if (name == "step") return InputSignal::step(channel - 1);
  throw InputError("unknown input signal '" + text + "' (zero|impulse:CH|step:CH)");
}

struct CliState {
  std::ostream& out;
  std::ostream& err;
  int exit_code = 0;
};

void cmd_check_aep(CliState& state, const std::string& network_path,
                   const std::string& partition_path, const std::string& kind,
                   double tol) {
  const NetworkGraph g = io::load_network(network_path);
  const Partition part = io::load_partition(partition_path, g.n);
  const KindFilter filter = parse_filter(kind);
  const AepWitness def = check_aep_definition(g, part, filter, tol);
  const AepWitness sub = check_aep_subspace(g, part, filter, tol);

  io::Json j;
  j["aep"] = def.verdict && sub.verdict;
  j["definition"] = io::witness_to_json(def);
  j["subspace"] = io::witness_to_json(sub);
  state.out << io::dump(j);
  state.exit_code = (def.verdict && sub.verdict) ? 0 : 1;
}

void cmd_reduce(CliState& state, const std::string& network_path,
                const std::string& partition_path, int order,
                const std::string& out_path, std::string map_path) {
  (void)order;  // the graph quotient is identical for both model orders
  const NetworkGraph g = io::load_network(network_path);
  const Partition part = io::load_partition(partition_path, g.n);
  const ReductionResult rr = reduce_graph(g, part);
  if (map_path.empty()) map_path = out_path + ".map.json";
  io::write_file(out_path, io::dump(io::network_to_json(rr.reduced)));
  io::write_file(map_path, io::dump(io::reduction_map_to_json(rr)));
  io::Json j;
  j["reduced"] = out_path;
  j["map"] = map_path;
  j["vertices"] = rr.reduced.n;
  j["edges"] = rr.reduced.edges.size();
  state.out << io::dump(j);
}

void cmd_h2(CliState& state, const std::string& network_path,
            const std::string& partition_path, int order, bool oracle, double tol) {
  const NetworkGraph g = io::load_network(network_path);
  std::optional<Partition> part;
  if (!partition_path.empty()) part = io::load_partition(partition_path, g.n);

  if (order == 1) {
    const H2Report report = build_report(g, part, oracle, tol);
    state.out << io::dump(io::report_to_json(report));
    return;
  }
  if (!part)
    throw InputError("a second-order H2 report needs a partition (the error claim "
                     "concerns the reduction)");
  io::Json j;
  j["xi_formula"] = reduction_error_formula(g, *part);
  const auto [damper_w, spring_w] = check_joint_aep(g, *part, tol);
  j["joint_aep"] = {{"damper", damper_w.verdict},
                    {"spring", spring_w.verdict},
                    {"joint", damper_w.verdict && spring_w.verdict}};
  j["xi_is_error_guarantee"] = damper_w.verdict && spring_w.verdict;
  if (oracle) {
    SecondOrderH2Options opts;
    opts.tol = tol;
    const SecondOrderErrorResult res = h2_error_second_order(g, *part, opts);
    j["xi_oracle"] = res.xi_oracle;
    j["deflated_modes"] = res.deflated_modes;
  }
  state.out << io::dump(j);
}

void cmd_enumerate(CliState& state, const std::string& network_path,
                   const std::string& kind, int max_n, double tol) {
  const NetworkGraph g = io::load_network(network_path);
  std::vector<Partition> aeps = enumerate_aeps(g, parse_filter(kind), tol, max_n);

  std::vector<std::pair<double, const Partition*>> ranked;
  ranked.reserve(aeps.size());
  for (const Partition& p : aeps) ranked.emplace_back(reduction_error_formula(g, p), &p);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first < b.first;
                     return partition_less(*a.second, *b.second);
                   });

  io::Json j;
  j["count"] = ranked.size();
  j["aeps"] = io::Json::array();
  for (const auto& [xi, p] : ranked) {
    io::Json entry;
    entry["cells"] = io::partition_to_json(*p)["cells"];
    entry["xi"] = xi;
    j["aeps"].push_back(std::move(entry));
  }
  state.out << io::dump(j);
}

void cmd_simulate(CliState& state, const std::string& network_path,
                  const std::string& partition_path, int order,
                  const std::string& input_spec, double t_end, double dt,
                  const std::string& csv_path, std::string csv_reduced_path) {
  const NetworkGraph g = io::load_network(network_path);
  const InputSignal input = parse_input_spec(input_spec);

  LinearModel full_model;
  std::optional<ReductionResult> rr;
  if (!partition_path.empty()) rr = reduce_graph(g, io::load_partition(partition_path, g.n));

  LinearModel reduced_model;
  if (order == 1) {
    full_model = linear_model(assemble_first_order(g, Coords::MomentumX));
    if (rr) reduced_model = linear_model(assemble_first_order(rr->reduced, Coords::MomentumX));
  } else {
    full_model = linear_model(assemble_second_order(g));
    if (rr) reduced_model = linear_model(assemble_second_order(rr->reduced));
  }

  const Trajectory full_traj = integrate(full_model, input, Vector(), t_end, dt);
  io::write_file(csv_path, io::trajectory_to_csv(full_traj));

  io::Json j;
  j["csv"] = csv_path;
  if (rr) {
    const Trajectory reduced_traj = integrate(reduced_model, input, Vector(), t_end, dt);
    if (csv_reduced_path.empty()) csv_reduced_path = csv_path + ".reduced.csv";
    io::write_file(csv_reduced_path, io::trajectory_to_csv(reduced_traj));
    const CompareMetrics metrics =
        compare(full_traj, reduced_traj, channel_map(g, *rr, KindFilter::Damper));
    j["csv_reduced"] = csv_reduced_path;
    j["compare"] = {{"l2_error_sq", metrics.l2_error_sq},
                    {"linf_error", metrics.linf_error},
                    {"channels", metrics.channels}};
  }
  state.out << io::dump(j);
}

void cmd_synth(CliState& state, const std::string& spec_path,
               const std::string& network_out, const std::string& partition_out) {
  const QuotientSpec spec = io::load_quotient_spec(spec_path);
  const auto [g, part] = synthesize_aep_graph(spec);
  io::write_file(network_out, io::dump(io::network_to_json(g)));
  io::write_file(partition_out, io::dump(io::partition_to_json(part)));
  io::Json j;
  j["network"] = network_out;
  j["partition"] = partition_out;
  j["vertices"] = g.n;
  j["edges"] = g.edges.size();
  state.out << io::dump(j);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliState state{out, err};
  CLI::App app{"Clustering-based model reduction of physical network systems", "netclust"};
  app.require_subcommand(1);

  // Shared option storage; each subcommand registers what it uses.
  std::string network_path, partition_path, kind = "all", input_spec = "zero";
  std::string out_path, map_path, csv_path, csv_reduced_path, spec_path;
  std::string network_out, partition_out;
  double tol = kDefaultTol;
  double t_end = 10.0, dt = 1e-3;
  int order = 1, max_n = 12;

  // NETCLUST_TOL overrides the default; an explicit --tol wins. A value that
  // does not parse is an error rather than a silent fallback.
  if (const char* env_tol = std::getenv("NETCLUST_TOL")) {
    char* end = nullptr;
    const double parsed = std::strtod(env_tol, &end);
    if (end == env_tol || *end != '\0' || !(parsed > 0.0)) {
      err << "error: NETCLUST_TOL='" << env_tol << "' is not a positive number\n";
      return 2;
    }
    tol = parsed;
  }

  auto add_tol = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tol, "tolerance for partition checks")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* check = app.add_subcommand(
      "check-aep", "Test a partition for almost equitability (both criteria)");
  check->add_option("network", network_path)->required();
  check->add_option("partition", partition_path)->required();
  check->add_option("--kind", kind)->check(CLI::IsMember({"damper", "spring", "all"}));
  add_tol(check);
  check->callback([&] { cmd_check_aep(state, network_path, partition_path, kind, tol); });

  CLI::App* reduce = app.add_subcommand("reduce", "Write the clustered (quotient) network");
  reduce->add_option("network", network_path)->required();
  reduce->add_option("partition", partition_path)->required();
  reduce->add_option("--order", order)->check(CLI::IsMember({1, 2}));
  reduce->add_option("--out", out_path, "reduced network file")->required();
  reduce->add_option("--map", map_path, "vertex/edge mapping file");
  reduce->callback(
      [&] { cmd_reduce(state, network_path, partition_path, order, out_path, map_path); });

  CLI::App* h2 = app.add_subcommand("h2", "Closed-form H2 norms and reduction error");
  h2->add_option("network", network_path)->required();
  h2->add_option("partition", partition_path);
  h2->add_option("--order", order)->check(CLI::IsMember({1, 2}));
  bool oracle = false;
  h2->add_flag("--oracle", oracle, "also run the numerical cross-checks");
  add_tol(h2);
  h2->callback(
      [&] { cmd_h2(state, network_path, partition_path, order, oracle, tol); });

  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "List all almost equitable partitions ranked by reduction error");
  enumerate->add_option("network", network_path)->required();
  enumerate->add_option("--kind", kind)->check(CLI::IsMember({"damper", "spring", "all"}));
  enumerate->add_option("--max-n", max_n, "vertex-count cap for exhaustive search");
  add_tol(enumerate);
  enumerate->callback([&] { cmd_enumerate(state, network_path, kind, max_n, tol); });

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Integrate the network (and its reduction) over time");
  simulate->add_option("network", network_path)->required();
  simulate->add_option("partition", partition_path);
  simulate->add_option("--order", order)->check(CLI::IsMember({1, 2}));
  simulate->add_option("--input", input_spec,
                       "zero | impulse:CH | step:CH (impulse = state jump x0 + B e_ch)");
  simulate->add_option("--t-end", t_end)->check(CLI::PositiveNumber);
  simulate->add_option("--dt", dt)->check(CLI::PositiveNumber);
  simulate->add_option("--out-csv", csv_path)->required();
  simulate->add_option("--out-csv-reduced", csv_reduced_path);
  simulate->callback([&] {
    cmd_simulate(state, network_path, partition_path, order, input_spec, t_end, dt,
                 csv_path, csv_reduced_path);
  });

  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a network with an almost equitable partition from a quotient spec");
  synth->add_option("spec", spec_path)->required();
  synth->add_option("--out-network", network_out)->required();
  synth->add_option("--out-partition", partition_out)->required();
  synth->callback([&] { cmd_synth(state, spec_path, network_out, partition_out); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return state.exit_code;
}

}  // namespace netclust
