#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "georoute/bounds.hpp"
#include "georoute/harness.hpp"

namespace {

using namespace georoute;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

std::vector<std::vector<double>> parse_hop_thetas(const std::string& spec) {
  // "0.5,0.25;0.6,0.3" -> one vector per hop
  std::vector<std::vector<double>> hops;
  std::stringstream hop_stream(spec);
  std::string hop;
  while (std::getline(hop_stream, hop, ';')) {
    std::vector<double> thetas;
    std::stringstream link_stream(hop);
    std::string tok;
    while (std::getline(link_stream, tok, ',')) thetas.push_back(std::stod(tok));
    hops.push_back(std::move(thetas));
  }
  return hops;
}

int cmd_simulate(const std::string& config_path, const std::string& out,
                 std::uint64_t* seed, std::uint64_t* packets, int* runs,
                 int* workers, const std::vector<std::string>& policies) {
  ExperimentConfig cfg = load_config_file(config_path);
  if (seed) cfg.seed = *seed;
  if (packets) cfg.packets = *packets;
  if (runs) cfg.runs = *runs;
  if (workers) cfg.workers = *workers;
  if (!policies.empty()) {
    cfg.policies.clear();
    for (const auto& name : policies)
      cfg.policies.push_back(parse_policy_kind(name));
  }
  if (!out.empty()) cfg.out = out;
  cfg.validate();

  ExperimentResult result = run_experiment(cfg);
  write_output(cfg.out, experiment_csv(cfg, result));

  // Hop-by-hop policies additionally record deliveries against slots.
  bool any_hbh = false;
  for (const auto& pr : result.policies)
    if (is_hop_by_hop(pr.kind)) any_hbh = true;
  if (any_hbh && !cfg.out.empty()) {
    std::ostringstream os;
    os << "policy,run,slot,throughput_regret\n";
    for (const auto& pr : result.policies) {
      if (!is_hop_by_hop(pr.kind)) continue;
      for (std::size_t run = 0; run < pr.throughput.size(); ++run) {
        const ThroughputTrace& t = pr.throughput[run];
        for (std::size_t k = 0; k < t.slot_checkpoints.size(); ++k) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "%.12g", t.regret[k]);
          os << policy_name(pr.kind) << ',' << run << ','
             << t.slot_checkpoints[k] << ',' << buf << '\n';
        }
      }
    }
    write_output(cfg.out + ".throughput.csv", os.str());
  }
  return 0;
}

int cmd_bounds_line(const std::string& theta_spec, double tail_eps,
                    const std::string& out) {
  LineNetwork net;
  net.hop_thetas = parse_hop_thetas(theta_spec);
  double c2 = c2_line(net);
  C1Result c1 = c1_line(net, tail_eps);
  std::ostringstream os;
  os << "hops,C2,C1,ratio,max_rel_truncation_error\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.3g\n", net.hops(),
                c2, c1.value, c2 > 0.0 ? c1.value / c2 : 1.0,
                c1.max_rel_truncation_error);
  os << buf;
  write_output(out, os.str());
  return 0;
}

int cmd_bounds_ratio(int h_min, int h_max, int links, int draws, double lo,
                     double hi, std::uint64_t seed, const std::string& out) {
  auto rows = ratio_experiment(h_min, h_max, links, draws, lo, hi, seed);
  write_output(out, ratio_csv(links, lo, hi, seed, rows));
  return 0;
}

int cmd_paths(const std::string& config_path, std::size_t cap) {
  ExperimentConfig cfg = load_config_file(config_path);
  NetworkTopology topo = cfg.topology.build();
  auto paths = enumerate_paths(topo, cap == 0 ? cfg.path_cap : cap);
  LinkParams params = cfg.theta.realize(topo, &paths, cfg.seed);
  std::printf("topology: %s\n", cfg.topology.describe().c_str());
  std::printf("paths: %zu, max hops H=%d\n", paths.size(), max_hops(paths));
  for (std::size_t i = 0; i < paths.size(); ++i) {
    double cost = 0.0;
    std::string seq;
    for (LinkId id : paths[i].links) {
      if (!seq.empty()) seq += "-";
      seq += std::to_string(id);
      cost += 1.0 / params.theta(id);
    }
    std::printf("%4zu  h=%d  links=%s  expected_delay=%.6g\n", i,
                paths[i].hops(), seq.c_str(), cost);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online shortest-path routing simulator under geometric link delays"};
  app.require_subcommand(1);

  // simulate
  std::string sim_config, sim_out;
  std::uint64_t sim_seed = 0, sim_packets = 0;
  int sim_runs = 0, sim_workers = 0;
  std::vector<std::string> sim_policies;
  auto* sim = app.add_subcommand("simulate", "run a regret experiment from a config file");
  sim->add_option("--config", sim_config, "JSON config file")->required();
  sim->add_option("--out", sim_out, "output CSV path (default from config)");
  auto* opt_seed = sim->add_option("--seed", sim_seed, "override master seed");
  auto* opt_packets = sim->add_option("--packets", sim_packets, "override packet count");
  auto* opt_runs = sim->add_option("--runs", sim_runs, "override replication count");
  auto* opt_workers = sim->add_option("--workers", sim_workers, "override worker threads");
  sim->add_option("--policies", sim_policies, "override policy list")->delimiter(',');

  // bounds
  auto* bounds = app.add_subcommand("bounds", "line-network regret lower bounds");
  std::string line_theta;
  double tail_eps = 1e-10;
  auto* line = bounds->add_subcommand("line", "C1/C2 for an explicit line network");
  std::string line_out;
  line->add_option("--theta", line_theta, "per-hop thetas, e.g. \"0.5,0.25;0.6,0.3\"")
      ->required();
  line->add_option("--tail-eps", tail_eps, "pmf truncation tail bound");
  line->add_option("--out", line_out, "output CSV path (default stdout)");
  int r_hmin = 1, r_hmax = 6, r_links = 2, r_draws = 1000;
  double r_lo = 0.1, r_hi = 0.99;
  std::uint64_t r_seed = 1;
  std::string r_out;
  auto* ratio = bounds->add_subcommand("ratio", "mean C1/C2 sweep over random networks");
  ratio->add_option("--hop-min", r_hmin, "smallest hop count");
  ratio->add_option("--hop-max", r_hmax, "largest hop count");
  ratio->add_option("--links", r_links, "links per hop");
  ratio->add_option("--draws", r_draws, "random draws per hop count");
  ratio->add_option("--lo", r_lo, "uniform law lower end");
  ratio->add_option("--hi", r_hi, "uniform law upper end");
  ratio->add_option("--seed", r_seed, "master seed");
  ratio->add_option("--out", r_out, "output CSV path (default stdout)");
  bounds->require_subcommand(1);

  // paths
  std::string paths_config;
  std::size_t paths_cap = 0;
  auto* paths_cmd = app.add_subcommand("paths", "enumerate and inspect the path set");
  paths_cmd->add_option("--config", paths_config, "JSON config file")->required();
  paths_cmd->add_option("--cap", paths_cap, "enumeration cap override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return cmd_simulate(sim_config, sim_out,
                          opt_seed->count() ? &sim_seed : nullptr,
                          opt_packets->count() ? &sim_packets : nullptr,
                          opt_runs->count() ? &sim_runs : nullptr,
                          opt_workers->count() ? &sim_workers : nullptr,
                          sim_policies);
    }
    if (bounds->parsed()) {
      if (line->parsed()) return cmd_bounds_line(line_theta, tail_eps, line_out);
      return cmd_bounds_ratio(r_hmin, r_hmax, r_links, r_draws, r_lo, r_hi,
                              r_seed, r_out);
    }
    if (paths_cmd->parsed()) return cmd_paths(paths_config, paths_cap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
