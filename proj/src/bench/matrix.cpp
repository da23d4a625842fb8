#include "mau/bench/matrix.hpp"

#include <omp.h>

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "mau/bench/plots.hpp"

namespace mau::bench {

SeedInputs prepare_seed(const Scenario& scenario, std::uint64_t seed, const contact::GenerationOptions& options) {
  SeedInputs in;
  in.seed = seed;
  if (!scenario.contact_trace.empty()) {
    std::ifstream file(scenario.contact_trace);
    if (!file) throw ConfigError("cannot open '" + scenario.contact_trace + "'", "contact.trace");
    in.trace = contact::read_trace(file);
  } else {
    in.trace = contact::generate_contacts(scenario.mobility, scenario.link, scenario.duration, seed, options);
  }
  in.plan = workload::generate_plan(scenario.traffic, scenario.node_count(), scenario.duration, seed);
  in.messages = workload::to_messages(in.plan);
  return in;
}

CellResult run_cell(const Scenario& scenario, const SeedInputs& inputs, routing::ProtocolKind protocol,
                    Duration ttl, std::ostream* event_log) {
  CellResult cell;
  cell.protocol = protocol;
  cell.ttl = ttl;
  cell.seed = inputs.seed;
  try {
    routing::SimulationConfig config;
    config.routing = scenario.routing;
    config.link = scenario.link;
    config.ttl = ttl;
    config.end = scenario.end();
    auto router = routing::make_protocol(protocol, scenario.routing);
    const auto result = routing::simulate(inputs.trace, inputs.messages, config, *router, event_log);
    cell.audit = result.audit;
    cell.report = workload::make_report(std::string(routing::to_string(protocol)), ttl, inputs.seed,
                                        inputs.messages, result, scenario.warm_up_end());
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

MatrixResult run_matrix(const Scenario& scenario, const MatrixOptions& options) {
  const auto& protocols = options.protocols.empty() ? scenario.protocols : options.protocols;
  const auto& ttls = options.ttls.empty() ? scenario.ttls : options.ttls;
  const auto& seeds = options.seeds.empty() ? scenario.seeds : options.seeds;
  const std::size_t np = protocols.size(), nt = ttls.size(), ns = seeds.size();

  MatrixResult out;
  out.cells.resize(np * nt * ns);
  std::size_t finished = 0;
  const std::size_t total = out.cells.size();

  if (!options.event_log_dir.empty()) std::filesystem::create_directories(options.event_log_dir);
  contact::GenerationOptions gen;
  gen.kernel = options.kernel;
  for (std::size_t si = 0; si < ns; ++si) {
    SeedInputs inputs;
    std::string failure;
    try {
      inputs = prepare_seed(scenario, seeds[si], gen);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const auto cells_per_seed = static_cast<std::int64_t>(np * nt);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, options.jobs))
    for (std::int64_t k = 0; k < cells_per_seed; ++k) {
      const std::size_t pi = static_cast<std::size_t>(k) / nt;
      const std::size_t ti = static_cast<std::size_t>(k) % nt;
      CellResult cell;
      if (failure.empty()) {
        if (options.event_log_dir.empty()) {
          cell = run_cell(scenario, inputs, protocols[pi], ttls[ti]);
        } else {
          const auto name = std::string(routing::to_string(protocols[pi])) + "_" +
                            workload::format_ttl_seconds(ttls[ti]) + "_" + std::to_string(seeds[si]) + ".log";
          std::ofstream log(options.event_log_dir / name, std::ios::binary);
          cell = run_cell(scenario, inputs, protocols[pi], ttls[ti], &log);
        }
      } else {
        cell.protocol = protocols[pi];
        cell.ttl = ttls[ti];
        cell.seed = seeds[si];
        cell.error = "seed preparation failed: " + failure;
      }
      const std::size_t slot = (pi * nt + ti) * ns + si;
#pragma omp critical(mau_matrix_progress)
      {
        ++finished;
        if (options.progress) {
          *options.progress << '[' << finished << '/' << total << "] " << routing::to_string(cell.protocol)
                            << " ttl=" << format_duration(cell.ttl) << " seed=" << cell.seed;
          if (cell.report) {
            *options.progress << " delivery=" << workload::format_number(workload::delivery_probability(*cell.report), 3);
          } else {
            *options.progress << " FAILED: " << cell.error;
          }
          *options.progress << '\n' << std::flush;
        }
      }
      out.cells[slot] = std::move(cell);
    }
  }

  for (const auto& cell : out.cells) {
    if (cell.report) {
      out.reports.push_back(*cell.report);
    } else {
      ++out.failures;
    }
  }
  out.summaries = workload::summarize(out.reports, scenario.cost_mode);
  return out;
}

std::vector<std::string> report_comments(const Scenario& scenario) {
  std::vector<std::string> c;
  c.push_back("scenario=" + scenario.name);
  c.push_back("scenario_hash=" + hash_hex(scenario_hash(scenario)));
  c.push_back("cost_mode=" + std::string(workload::to_string(scenario.cost_mode)));
  c.push_back("drop_policy=" + scenario.drop_policy);
  for (const auto& w : scenario.warnings) c.push_back("warning: " + w);
  return c;
}

void write_outputs(const std::filesystem::path& dir, const Scenario& scenario, const MatrixResult& result) {
  std::filesystem::create_directories(dir);
  const auto comments = report_comments(scenario);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("report.csv");
    workload::write_report_csv(f, result.reports, scenario.cost_mode, comments);
  }
  {
    auto f = open("summary.csv");
    workload::write_summary_csv(f, result.summaries, comments);
  }
  emit_plots(dir, result.summaries);
  const auto stale = dir / "failures.txt";
  if (result.failures == 0) {
    std::filesystem::remove(stale);
    return;
  }
  auto f = open("failures.txt");
  for (const auto& cell : result.cells) {
    if (!cell.report) {
      f << routing::to_string(cell.protocol) << ',' << workload::format_ttl_seconds(cell.ttl) << ',' << cell.seed
        << ',' << cell.error << '\n';
    }
  }
}

}  // namespace mau::bench
