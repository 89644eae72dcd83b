#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bigd/bench.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<int> split_csv_int(const std::string& s) {
  std::vector<int> out;
  for (const auto& w : split_csv(s)) out.push_back(std::stoi(w));
  return out;
}

std::vector<std::uint64_t> split_csv_u64(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& w : split_csv(s)) out.push_back(std::stoull(w));
  return out;
}

int finish(const std::vector<bigd::ResultRow>& rows) {
  bool ok = true;
  for (const auto& r : rows) {
    std::printf("%-20s n=%-4d %-15s seed=%-3llu %-15s f=%.6e gap=%.3e iters=%ld "
                "fev=%ld gev=%ld time=%.2fs\n",
                r.problem.c_str(), r.dim, r.algorithm.c_str(),
                static_cast<unsigned long long>(r.seed), r.status.c_str(),
                r.final_obj, r.gap, r.iterations, r.func_evals, r.grad_evals,
                r.time_s);
    if (r.status.rfind("Failed", 0) == 0) ok = false;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for branch-information-driven solvers"};
  app.require_subcommand(1);

  std::string problems_csv, dims_csv = "25", algos_csv = "bigd-practical";
  std::string init = "preset", seeds_csv = "0", out_dir;
  double time_limit = 300.0;
  int jobs = 1, trace_every = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--init", init, "Initial point mode: preset or random")
        ->check(CLI::IsMember({"preset", "random"}));
    cmd->add_option("--time-limit", time_limit, "Per-run time limit in seconds");
    cmd->add_option("--out", out_dir,
                    "Output directory (default: $BENCH_OUT_DIR or bench_out)");
    cmd->add_option("--trace-every", trace_every,
                    "Keep every k-th trace row (0 disables traces)");
  };

  CLI::App* run = app.add_subcommand("run", "Run a problem/dim/algo/seed grid");
  run->add_option("--problems", problems_csv, "Comma-separated problem names")
      ->required();
  run->add_option("--dims", dims_csv, "Comma-separated dimensions");
  run->add_option("--algos", algos_csv,
                  "Comma-separated algorithms: bigd,bigd-practical,ebigd,gs");
  run->add_option("--seeds", seeds_csv, "Comma-separated seeds");
  run->add_option("--jobs", jobs, "Concurrent runs (results stay in grid order)");
  add_common(run);

  CLI::App* trace = app.add_subcommand("trace", "Run and trace a single instance");
  std::string problem, algo = "bigd-practical";
  int dim = 25;
  std::uint64_t seed = 0;
  trace->add_option("--problem", problem, "Problem name")->required();
  trace->add_option("--dim", dim, "Dimension");
  trace->add_option("--algo", algo, "Algorithm");
  trace->add_option("--seed", seed, "Seed");
  add_common(trace);

  CLI11_PARSE(app, argc, argv);

  try {
    bigd::BenchConfig cfg;
    cfg.init = bigd::parse_init_mode(init);
    cfg.time_limit_s = time_limit;
    cfg.out_dir = out_dir;
    cfg.trace_every = trace_every;
    if (run->parsed()) {
      cfg.problems = split_csv(problems_csv);
      cfg.dims = split_csv_int(dims_csv);
      cfg.algorithms = split_csv(algos_csv);
      cfg.seeds = split_csv_u64(seeds_csv);
      cfg.jobs = jobs;
      return finish(bigd::run_benchmark(cfg));
    }
    cfg.problems = {problem};
    cfg.dims = {dim};
    cfg.algorithms = {algo};
    cfg.seeds = {seed};
    if (cfg.trace_every < 1) cfg.trace_every = 1;
    return finish(bigd::run_benchmark(cfg));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
