#pragma once

#include <string>
#include <vector>

#include "bigd/bigd.hpp"
#include "bigd/ebigd.hpp"
#include "bigd/gs.hpp"
#include "bigd/problems.hpp"

namespace bigd {

// Environment variable consulted when no output directory is configured.
inline constexpr const char* kOutDirEnvVar = "BENCH_OUT_DIR";

struct BenchConfig {
  std::vector<std::string> problems;
  std::vector<int> dims;
  std::vector<std::string> algorithms;  // of {bigd, bigd-practical, ebigd, gs}
  InitMode init = InitMode::kPreset;
  std::vector<std::uint64_t> seeds = {0};
  double time_limit_s = 300.0;
  std::string out_dir;  // empty: $BENCH_OUT_DIR, else "bench_out"
  int trace_every = 1;  // 0 disables trace files
  int jobs = 1;

  PracticalConfig practical;
  BigdConfig bigd;
  EbigdConfig ebigd;
  GsConfig gs;

  void validate() const;
  std::string resolved_out_dir() const;
};

struct ResultRow {
  std::string problem;
  int dim = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::string status;
  double time_s = 0.0;
  long iterations = 0;
  double final_obj = 0.0;
  double gap = 0.0;  // final_obj - f_star
  long func_evals = 0;
  long grad_evals = 0;
  double qp_time_s = 0.0;
  double eval_time_s = 0.0;
};

// One solve, dispatched by algorithm name, with the seed driving the random
// initial point and/or the sampler.
SolverRun run_single(const BenchConfig& cfg, const Problem& problem,
                     const std::string& algorithm, std::uint64_t seed);

// Executes the problems x dims x algorithms x seeds grid (optionally with
// several worker threads), writes results.csv, config.json and per-run
// trace files under the output directory, and returns the rows in grid
// order. Per-run failures become "Failed: ..." statuses.
std::vector<ResultRow> run_benchmark(const BenchConfig& cfg);

// One row per recorded iteration:
// iter,wall_s,f,gap,d_norm,n_effective_branches,n_visited_branches,
// func_evals_cum,grad_evals_cum
void emit_trace(const SolverRun& run, const std::string& path, int every = 1);

void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path);

std::string trace_filename(const std::string& problem, int dim,
                           const std::string& algorithm, InitMode init,
                           std::uint64_t seed);

}  // namespace bigd
