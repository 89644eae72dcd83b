#include "bigd/bench.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace bigd {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void BenchConfig::validate() const {
  require(!problems.empty(), "problem list must be nonempty");
  require(!dims.empty(), "dimension list must be nonempty");
  require(!algorithms.empty(), "algorithm list must be nonempty");
  require(!seeds.empty(), "seed list must be nonempty");
  require(time_limit_s > 0, "time limit must be positive");
  require(jobs >= 1, "jobs must be positive");
  for (const std::string& p : problems) {
    bool known = false;
    for (const std::string& n : problem_names()) known |= n == p;
    require(known, "unknown problem name: " + p);
  }
  for (const std::string& a : algorithms)
    require(a == "bigd" || a == "bigd-practical" || a == "ebigd" || a == "gs",
            "unknown algorithm: " + a);
  for (int d : dims) require(d >= 1, "dimensions must be positive");
}

std::string BenchConfig::resolved_out_dir() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv(kOutDirEnvVar); env && *env) return env;
  return "bench_out";
}

SolverRun run_single(const BenchConfig& cfg, const Problem& problem,
                     const std::string& algorithm, std::uint64_t seed) {
  const Vector x0 = cfg.init == InitMode::kPreset
                        ? problem.spec.preset_x0
                        : initial_point(problem.spec.name, problem.spec.dimension,
                                        InitMode::kRandom, seed);
  SolverRun run;
  if (algorithm == "bigd") {
    BigdConfig c = cfg.bigd;
    c.time_limit_s = cfg.time_limit_s;
    run = solve_bigd(problem.fn, x0, c);
  } else if (algorithm == "bigd-practical") {
    PracticalConfig c = cfg.practical;
    c.time_limit_s = cfg.time_limit_s;
    run = solve_practical(problem.fn, x0, c);
  } else if (algorithm == "ebigd") {
    EbigdConfig c = cfg.ebigd;
    c.time_limit_s = cfg.time_limit_s;
    run = solve_ebigd(problem.fn, x0, c);
  } else if (algorithm == "gs") {
    GsConfig c = cfg.gs;
    c.time_limit_s = cfg.time_limit_s;
    c.seed = seed;
    const BlackBoxFunction bb(problem.fn);
    run = solve_gs(bb, x0, c);
  } else {
    throw std::invalid_argument("unknown algorithm: " + algorithm);
  }
  run.f_star = problem.spec.f_star;
  return run;
}

std::string trace_filename(const std::string& problem, int dim,
                           const std::string& algorithm, InitMode init,
                           std::uint64_t seed) {
  std::ostringstream os;
  os << "trace_" << problem << "_n" << dim << "_" << algorithm << "_"
     << (init == InitMode::kPreset ? "preset" : "random") << seed << ".csv";
  return os.str();
}

void emit_trace(const SolverRun& run, const std::string& path, int every) {
  if (every < 1) every = 1;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file " + path);
  out << "iter,wall_s,f,gap,d_norm,n_effective_branches,n_visited_branches,"
         "func_evals_cum,grad_evals_cum\n";
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    if (i % static_cast<std::size_t>(every) != 0 && i + 1 != run.trace.size())
      continue;
    const IterationRecord& r = run.trace[i];
    out << r.iter << ',' << fmt(r.wall_s) << ',' << fmt(r.f) << ','
        << fmt(r.f - run.f_star) << ',' << fmt(r.d_norm) << ',' << r.n_effective
        << ',' << r.n_visited << ',' << r.func_evals << ',' << r.grad_evals << '\n';
  }
  if (!out) throw std::runtime_error("trace write failed: " + path);
}

void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open results file " + path);
  out << "problem,dim,algorithm,seed,status,time_s,iterations,final_obj,gap,"
         "func_evals,grad_evals,qp_time_s,eval_time_s\n";
  for (const ResultRow& r : rows) {
    out << r.problem << ',' << r.dim << ',' << r.algorithm << ',' << r.seed << ','
        << r.status << ',' << fmt(r.time_s) << ',' << r.iterations << ','
        << fmt(r.final_obj) << ',' << fmt(r.gap) << ',' << r.func_evals << ','
        << r.grad_evals << ',' << fmt(r.qp_time_s) << ',' << fmt(r.eval_time_s)
        << '\n';
  }
  if (!out) throw std::runtime_error("results write failed: " + path);
}

std::vector<ResultRow> run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  const std::string out_dir = cfg.resolved_out_dir();
  std::filesystem::create_directories(out_dir);

  struct Task {
    std::string problem;
    int dim;
    std::string algorithm;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& p : cfg.problems)
    for (int d : cfg.dims)
      for (const auto& a : cfg.algorithms)
        for (std::uint64_t s : cfg.seeds) tasks.push_back({p, d, a, s});

  std::vector<ResultRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      ResultRow row;
      row.problem = t.problem;
      row.dim = t.dim;
      row.algorithm = t.algorithm;
      row.seed = t.seed;
      try {
        const Problem problem = make_problem(t.problem, t.dim);
        const SolverRun run = run_single(cfg, problem, t.algorithm, t.seed);
        row.status = to_string(run.status);
        row.time_s = run.wall_time_s;
        row.iterations = run.iterations;
        row.final_obj = run.final_value;
        row.gap = run.final_value - problem.spec.f_star;
        row.func_evals = run.func_evals;
        row.grad_evals = run.grad_evals;
        row.qp_time_s = run.qp_time_s;
        row.eval_time_s = run.eval_time_s;
        if (cfg.trace_every > 0) {
          emit_trace(run,
                     out_dir + "/" +
                         trace_filename(t.problem, t.dim, t.algorithm, cfg.init,
                                        t.seed),
                     cfg.trace_every);
        }
      } catch (const std::exception& e) {
        row.status = std::string("Failed: ") + e.what();
      }
      rows[i] = std::move(row);
    }
  };

  if (cfg.jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < cfg.jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  write_results_csv(rows, out_dir + "/results.csv");

  nlohmann::json j;
  j["problems"] = cfg.problems;
  j["dims"] = cfg.dims;
  j["algorithms"] = cfg.algorithms;
  j["init"] = cfg.init == InitMode::kPreset ? "preset" : "random";
  j["seeds"] = cfg.seeds;
  j["time_limit_s"] = cfg.time_limit_s;
  j["out_dir"] = out_dir;
  j["trace_every"] = cfg.trace_every;
  j["jobs"] = cfg.jobs;
  std::ofstream jc(out_dir + "/config.json");
  jc << j.dump(2) << '\n';

  return rows;
}

}  // namespace bigd
