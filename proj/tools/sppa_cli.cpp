// Batch experiment runner: parse a JSON config, build the problem, execute
// seeded replicas, write per-replica trace CSVs and a summary CSV.

#include <atomic>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "sppa/config.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCertificate = 4;

std::string replica_trace_name(long r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trace_%03ld.csv", r);
  return buf;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<uint64_t> seed_override, std::optional<long> iters_override) {
  sppa::ExperimentConfig config;
  sppa::ProblemInstance problem;
  try {
    config = sppa::load_config(config_path);
    if (seed_override) config.master_seed = *seed_override;
    if (iters_override) {
      if (*iters_override < 1) throw sppa::ConfigError("config field 'iterations': must be >= 1");
      config.iterations = *iters_override;
    }
    problem = sppa::build_problem(config.problem);
    sppa::require_dim(config.x0, problem.family.dim, "x0");
  } catch (const sppa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << out_dir << "\n";
    return kExitIo;
  }

  sppa::DiagnosticsConfig diag = sppa::default_diagnostics(problem);
  diag.stride = config.trace_stride;

  const long R = config.replicas;
  std::vector<sppa::RunReport> reports(static_cast<size_t>(R));
  std::vector<std::string> errors(static_cast<size_t>(R));
  std::atomic<long> next{0};
  std::atomic<bool> io_failed{false};

  long pool = config.workers > 0 ? config.workers
                                 : static_cast<long>(std::thread::hardware_concurrency());
  pool = std::max(1L, std::min(pool, R));

  auto worker = [&] {
    for (long r = next.fetch_add(1); r < R; r = next.fetch_add(1)) {
      try {
        auto stream = sppa::SampleStream::for_replica(config.master_seed, static_cast<uint64_t>(r));
        reports[static_cast<size_t>(r)] = sppa::run(problem.family, config.schedule, config.x0,
                                                    config.iterations, stream, diag);
        std::ofstream out(fs::path(out_dir) / replica_trace_name(r), std::ios::binary);
        if (!out) {
          io_failed = true;
          continue;
        }
        sppa::write_trace_csv(out, reports[static_cast<size_t>(r)]);
        if (!out.good()) io_failed = true;
      } catch (const std::exception& e) {
        errors[static_cast<size_t>(r)] = e.what();
      }
    }
  };
  std::vector<std::thread> threads;
  for (long t = 0; t < pool; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  for (long r = 0; r < R; ++r)
    if (!errors[static_cast<size_t>(r)].empty()) {
      std::cerr << "error: replica " << r << ": " << errors[static_cast<size_t>(r)] << "\n";
      return kExitNumeric;
    }
  if (io_failed) {
    std::cerr << "error: failed writing trace files under " << out_dir << "\n";
    return kExitIo;
  }

  std::ofstream summary(fs::path(out_dir) / "summary.csv", std::ios::binary);
  if (!summary) {
    std::cerr << "error: cannot write summary.csv\n";
    return kExitIo;
  }
  summary << "replica,seed,iterations,final_norm_x,final_norm_xbar,final_dist_to_solution,"
             "final_dist_avg_to_feasible,final_objective_avg,wall_seconds\n";
  for (long r = 0; r < R; ++r) {
    const sppa::RunReport& rep = reports[static_cast<size_t>(r)];
    const sppa::TraceRow& last = rep.rows.back();
    auto opt = [](const std::optional<double>& v) {
      return v ? sppa::format_g17(*v) : std::string();
    };
    summary << r << ',' << rep.seed << ',' << rep.iterations << ','
            << sppa::format_g17(rep.final_x.norm()) << ','
            << sppa::format_g17(rep.final_xbar.norm()) << ',' << opt(last.dist_to_solution) << ','
            << opt(last.dist_avg_to_feasible) << ',' << opt(last.objective_avg) << ','
            << sppa::format_g17(rep.wall_seconds) << "\n";
  }
  if (!summary.good()) return kExitIo;
  return kExitOk;
}

int cmd_verify(const std::string& config_path) {
  try {
    const sppa::ExperimentConfig config = sppa::load_config(config_path);
    const sppa::ProblemInstance problem = sppa::build_problem(config.problem);
    if (problem.known_solution) {
      const double res = sppa::certificate_residual(problem);
      std::cout << "known solution x* = [" << problem.known_solution->transpose() << "]\n";
      std::cout << "certificate residual = " << sppa::format_g17(res) << "\n";
      if (!(res <= 1e-9)) {
        std::cerr << "error: certificate residual exceeds 1e-9\n";
        return kExitCertificate;
      }
    } else if (problem.feasible_set) {
      const auto proj = sppa::dykstra_project(*problem.feasible_set, config.x0);
      double infeas = 0.0;
      for (const sppa::ConvexSet& s : problem.feasible_set->members)
        infeas = std::max(infeas, (proj.point - sppa::project(s, proj.point)).norm());
      std::cout << "feasible point = [" << proj.point.transpose() << "]\n";
      std::cout << "feasibility residual = " << sppa::format_g17(infeas) << "\n";
      if (!(infeas <= 1e-9)) {
        std::cerr << "error: feasibility residual exceeds 1e-9\n";
        return kExitCertificate;
      }
    } else {
      std::cout << "no certificate recorded for this problem kind\n";
    }
    return kExitOk;
  } catch (const sppa::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sppa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCertificate;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic proximal point experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<uint64_t> seed_override;
  std::optional<long> iters_override;

  CLI::App* run = app.add_subcommand("run", "execute seeded replicas and write traces");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", seed_override, "override master_seed");
  run->add_option("--iters", iters_override, "override iteration count");

  CLI::App* verify = app.add_subcommand("verify", "check solution certificates only");
  verify->add_option("--config", config_path, "experiment config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(run)) return cmd_run(config_path, out_dir, seed_override, iters_override);
  return cmd_verify(config_path);
}
