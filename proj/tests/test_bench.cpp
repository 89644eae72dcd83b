#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bigd/bench.hpp"

using namespace bigd;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("gs config validation rejects a zero sample size") {
  GsConfig cfg;
  cfg.sample_size = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.sample_size = -1;
  CHECK(cfg.resolved_sample_size(8) == 16);
}

TEST_CASE("gradient sampling solves the small quadratic max") {
  const Problem p = make_problem("gen_MAXQ", 2);
  Vector x0(2);
  x0 << 1.0, 2.0;
  const BlackBoxFunction bb(p.fn);
  GsConfig cfg;
  cfg.seed = 3;
  const SolverRun run = solve_gs(bb, x0, cfg);
  CHECK(run.final_value <= 1e-6);
  for (const IterationRecord& r : run.trace) CHECK(r.n_visited == 0);
}

TEST_CASE("gradient sampling is deterministic per seed") {
  const Problem p = make_problem("Chained_CB3_II", 5);
  GsConfig cfg;
  cfg.seed = 42;
  cfg.max_iter = 400;
  const BlackBoxFunction a(p.fn);
  const SolverRun ra = solve_gs(a, p.spec.preset_x0, cfg);
  const BlackBoxFunction b(p.fn);
  const SolverRun rb = solve_gs(b, p.spec.preset_x0, cfg);
  CHECK(ra.final_value == rb.final_value);
  CHECK(ra.iterations == rb.iterations);
  CHECK(ra.func_evals == rb.func_evals);
  CHECK(ra.final_point == rb.final_point);
  cfg.seed = 43;
  const BlackBoxFunction c(p.fn);
  const SolverRun rc = solve_gs(c, p.spec.preset_x0, cfg);
  CHECK(ra.func_evals != rc.func_evals);
}

TEST_CASE("black-box wrapper counts value and gradient queries") {
  const Problem p = make_problem("gen_MAXQ", 3);
  const BlackBoxFunction bb(p.fn);
  (void)bb.value(p.spec.preset_x0);
  (void)bb.gradient(p.spec.preset_x0);
  CHECK(bb.func_evals() == 2);
  CHECK(bb.grad_evals() == 1);
}

TEST_CASE("benchmark grid: files, columns and determinism") {
  const std::string dir = "bench_test_out";
  std::filesystem::remove_all(dir);
  BenchConfig cfg;
  cfg.problems = {"gen_MAXQ"};
  cfg.dims = {5};
  cfg.algorithms = {"bigd-practical", "gs"};
  cfg.seeds = {1, 2};
  cfg.time_limit_s = 30.0;
  cfg.out_dir = dir;

  const auto rows = run_benchmark(cfg);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.status == "ToleranceMet");
    CHECK(r.gap >= -1e-9);  // convex problem
    CHECK(r.func_evals > 0);
  }
  // Grid order: algorithms vary before seeds.
  CHECK(rows[0].algorithm == "bigd-practical");
  CHECK(rows[0].seed == 1);
  CHECK(rows[1].seed == 2);

  CHECK(first_line(read_file(dir + "/results.csv")) ==
        "problem,dim,algorithm,seed,status,time_s,iterations,final_obj,gap,"
        "func_evals,grad_evals,qp_time_s,eval_time_s");
  CHECK(std::filesystem::exists(dir + "/config.json"));
  const std::string trace_path =
      dir + "/" + trace_filename("gen_MAXQ", 5, "bigd-practical", cfg.init, 1);
  const std::string trace = read_file(trace_path);
  CHECK(first_line(trace) ==
        "iter,wall_s,f,gap,d_norm,n_effective_branches,n_visited_branches,"
        "func_evals_cum,grad_evals_cum");

  const auto again = run_benchmark(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].final_obj == again[i].final_obj);
    CHECK(rows[i].iterations == again[i].iterations);
    CHECK(rows[i].func_evals == again[i].func_evals);
    CHECK(rows[i].grad_evals == again[i].grad_evals);
    CHECK(rows[i].status == again[i].status);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("trace invariants on a practical run") {
  const Problem p = make_problem("Chained_CB3_I", 10);
  PracticalConfig cfg;
  SolverRun run = solve_practical(p.fn, p.spec.preset_x0, cfg);
  run.f_star = p.spec.f_star;
  const std::string path = "trace_tmp.csv";
  emit_trace(run, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  int prev_visited = 0;
  double first_gap = 0.0, last_gap = 0.0;
  bool first = true;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 9);
    const double gap = std::stod(cells[3]);
    const int eff = std::stoi(cells[5]);
    const int visited = std::stoi(cells[6]);
    CHECK(visited >= prev_visited);  // the store only grows
    CHECK(eff <= visited);
    prev_visited = visited;
    if (first) {
      first_gap = gap;
      first = false;
    }
    last_gap = gap;
  }
  CHECK(last_gap <= first_gap);
  std::remove(path.c_str());
}

TEST_CASE("benchmark config validation") {
  BenchConfig cfg;
  CHECK_THROWS_AS((void)run_benchmark(cfg), std::invalid_argument);  // empty grid
  cfg.problems = {"gen_MAXQ"};
  cfg.dims = {4};
  cfg.algorithms = {"nope"};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.algorithms = {"bigd"};
  cfg.time_limit_s = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("concurrent grid execution preserves grid order") {
  BenchConfig cfg;
  cfg.problems = {"gen_MAXQ", "Chained_CB3_II"};
  cfg.dims = {5};
  cfg.algorithms = {"bigd-practical"};
  cfg.seeds = {1};
  cfg.out_dir = "bench_jobs_out";
  cfg.trace_every = 0;
  cfg.jobs = 1;
  const auto serial = run_benchmark(cfg);
  cfg.jobs = 4;
  const auto parallel = run_benchmark(cfg);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].problem == parallel[i].problem);
    CHECK(serial[i].final_obj == parallel[i].final_obj);
  }
  std::filesystem::remove_all("bench_jobs_out");
}
