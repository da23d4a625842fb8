// Command-line entry point: run, oracle, validate, export-trace.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "mau/bench/journey.hpp"
#include "mau/bench/matrix.hpp"
#include "mau/bench/scenario.hpp"
#include "mau/mobility/map.hpp"

namespace {

using namespace mau;

contact::ScanKernel parse_kernel(const std::string& name) {
  if (name == "reference") return contact::ScanKernel::kReference;
  if (name == "pruned") return contact::ScanKernel::kPruned;
  if (name == "parallel") return contact::ScanKernel::kPrunedParallel;
  throw CLI::ValidationError("--kernel", "expected reference, pruned or parallel");
}

void print_warnings(const bench::Scenario& s) {
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  if (path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*f) throw std::runtime_error("cannot write " + path);
  return f;
}

struct RunArgs {
  std::string scenario;
  std::string protocols, ttls, seeds;
  int jobs = 1;
  std::string out;
  std::string kernel = "pruned";
  std::string event_logs;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  bench::Scenario s = bench::load_scenario(a.scenario);
  if (!a.protocols.empty()) s.protocols = bench::parse_protocol_list(a.protocols, "--protocols");
  if (!a.ttls.empty()) s.ttls = bench::parse_ttl_list(a.ttls, "--ttls");
  if (!a.seeds.empty()) s.seeds = bench::parse_seed_list(a.seeds, "--seeds");
  bench::validate(s);
  print_warnings(s);

  bench::MatrixOptions opt;
  opt.jobs = a.jobs;
  opt.kernel = parse_kernel(a.kernel);
  opt.progress = a.quiet ? nullptr : &std::cerr;
  opt.event_log_dir = a.event_logs;
  const auto result = bench::run_matrix(s, opt);
  const std::filesystem::path dir = a.out.empty() ? std::filesystem::path("results") / s.name : std::filesystem::path(a.out);
  bench::write_outputs(dir, s, result);
  std::cerr << result.reports.size() << " cells done, " << result.failures << " failed; reports in " << dir.string()
            << '\n';
  return result.failures == 0 ? 0 : 3;
}

struct OracleArgs {
  std::string trace;
  int src = 0, dst = 0;
  std::string depart, ttl;
};

int cmd_oracle(const OracleArgs& a) {
  std::ifstream in(a.trace);
  if (!in) throw std::runtime_error("cannot open " + a.trace);
  const auto trace = contact::read_trace(in);
  bench::JourneyQuery q{a.src, a.dst, SimTime{} + parse_duration(a.depart)};
  const auto arrival = bench::foremost_journey(trace, q, parse_duration(a.ttl));
  if (arrival) {
    std::cout << "arrival_ms " << to_ms(*arrival) << " latency_ms " << to_ms(*arrival - q.depart) << '\n';
  } else {
    std::cout << "unreachable\n";
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  const auto s = bench::load_scenario(path);
  bench::write_canonical(std::cout, s);
  std::cout << "# nodes=" << s.node_count() << " scenario_hash=" << bench::hash_hex(bench::scenario_hash(s)) << '\n';
  print_warnings(s);
  return 0;
}

struct ExportArgs {
  std::string scenario;
  std::uint64_t seed = 1;
  std::string out, plan, mobility, event_log, map, kernel = "pruned";
};

int cmd_export(const ExportArgs& a) {
  const auto s = bench::load_scenario(a.scenario);
  print_warnings(s);
  auto mobility = open_out(a.mobility);
  auto events = open_out(a.event_log);
  contact::GenerationOptions opt;
  opt.kernel = parse_kernel(a.kernel);
  opt.mobility_trace = mobility.get();
  opt.event_log = events.get();
  const auto inputs = bench::prepare_seed(s, a.seed, opt);
  if (auto f = open_out(a.out)) {
    contact::write_trace(*f, inputs.trace);
  } else {
    contact::write_trace(std::cout, inputs.trace);
  }
  if (auto f = open_out(a.plan)) workload::write_plan(*f, inputs.plan);
  if (auto f = open_out(a.map)) mobility::write_map(*f, mobility::build_map(s.mobility));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opportunistic routing simulator and benchmark harness"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run the protocol x TTL x seed matrix");
  run_cmd->add_option("scenario", run.scenario, "Scenario file or preset name")->required();
  run_cmd->add_option("--protocols", run.protocols, "Comma list: epidemic,prophet,snw,bubble or all");
  run_cmd->add_option("--ttls", run.ttls, "Comma list of durations, e.g. 1h,6h,2d");
  run_cmd->add_option("--seeds", run.seeds, "Comma list of seeds or ranges, e.g. 1..10");
  run_cmd->add_option("--jobs", run.jobs, "Cells run in parallel")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "Output directory (default results/<scenario name>)");
  run_cmd->add_option("--kernel", run.kernel, "Contact kernel: reference, pruned, parallel");
  run_cmd->add_option("--event-logs", run.event_logs, "Write one routing event log per cell here");
  run_cmd->add_flag("--quiet", run.quiet, "No per-cell progress");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Foremost journey over a contact trace");
  oracle_cmd->add_option("trace", oracle.trace)->required();
  oracle_cmd->add_option("src", oracle.src)->required();
  oracle_cmd->add_option("dst", oracle.dst)->required();
  oracle_cmd->add_option("depart", oracle.depart, "Duration, bare numbers are ms")->required();
  oracle_cmd->add_option("ttl", oracle.ttl, "Duration, bare numbers are ms")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario and print its resolved form");
  validate_cmd->add_option("scenario", validate_path)->required();

  ExportArgs exp;
  auto* export_cmd = app.add_subcommand("export-trace", "Generate the contact trace of one seed");
  export_cmd->add_option("scenario", exp.scenario)->required();
  export_cmd->add_option("--seed", exp.seed)->required();
  export_cmd->add_option("--out", exp.out, "Trace file (default stdout)");
  export_cmd->add_option("--plan", exp.plan, "Also write the traffic plan");
  export_cmd->add_option("--mobility", exp.mobility, "Also write node positions once a minute");
  export_cmd->add_option("--event-log", exp.event_log, "Also write the generation event log");
  export_cmd->add_option("--map", exp.map, "Also write the map");
  export_cmd->add_option("--kernel", exp.kernel, "Contact kernel: reference, pruned, parallel");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return cmd_run(run);
    if (*oracle_cmd) return cmd_oracle(oracle);
    if (*validate_cmd) return cmd_validate(validate_path);
    if (*export_cmd) return cmd_export(exp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
