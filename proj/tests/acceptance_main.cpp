// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Run times are desk scale; the per-instance budget is 60 seconds.

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "bigd/bench.hpp"
#include "bigd/bigd.hpp"
#include "bigd/ebigd.hpp"
#include "bigd/gs.hpp"
#include "bigd/minnorm.hpp"
#include "bigd/problems.hpp"
#include "bigd/rng.hpp"
#include "oracles.hpp"

using namespace bigd;

namespace {

constexpr double kBudgetSeconds = 60.0;
int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("CRITERION %d: %s  (%s)\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct ConvexRunResult {
  std::string problem;
  int dim;
  std::string init;
  SolverRun run;
};

std::vector<ConvexRunResult> g_convex_runs;  // shared by criteria 1 and 3

PracticalConfig practical_config() {
  PracticalConfig cfg;  // defaults carry the published parameter values
  cfg.time_limit_s = kBudgetSeconds;
  return cfg;
}

SolverRun practical_run(const Problem& p, InitMode mode, std::uint64_t seed) {
  const Vector x0 = mode == InitMode::kPreset
                        ? p.spec.preset_x0
                        : initial_point(p.spec.name, p.spec.dimension,
                                        InitMode::kRandom, seed);
  return solve_practical(p.fn, x0, practical_config());
}

// Criterion 1: convex problems at n in {25, 50}, preset plus three random
// starts, each reaching f - f* <= 1e-4 inside the budget.
void criterion1() {
  const std::vector<std::string> convex = {"gen_MAXQ", "gen_MXHILB", "Chained_LQ",
                                           "Chained_CB3_I", "Chained_CB3_II"};
  int bad = 0;
  double worst = 0.0;
  std::string worst_case;
  for (const std::string& name : convex) {
    for (int n : {25, 50}) {
      const Problem p = make_problem(name, n);
      for (int start = 0; start < 4; ++start) {
        const InitMode mode = start == 0 ? InitMode::kPreset : InitMode::kRandom;
        const std::uint64_t seed = start == 0 ? 0 : std::uint64_t(start);
        SolverRun run = practical_run(p, mode, seed);
        const double gap = run.final_value - p.spec.f_star;
        if (!(gap <= 1e-4) || run.wall_time_s > kBudgetSeconds + 1.0) ++bad;
        if (gap > worst) {
          worst = gap;
          worst_case = name + " n=" + std::to_string(n) + (start == 0 ? " preset"
                                                                      : " seed" +
                                                             std::to_string(seed));
        }
        g_convex_runs.push_back({name, n, start == 0 ? "preset" : "random", run});
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "40 runs, worst gap %.3e at %s, %d over budget",
                worst, worst_case.c_str(), bad);
  report(1, bad == 0, buf);
}

// Criterion 2: nonconvex problems at n = 25 from preset starts.
void criterion2() {
  int bad = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const std::string& name :
       {std::string("Chained_Crescent_I"), std::string("Chained_Crescent_II"),
        std::string("brown_func2"), std::string("num_active_faces")}) {
    const Problem p = make_problem(name, 25);
    const SolverRun run = practical_run(p, InitMode::kPreset, 0);
    const double gap = run.final_value - p.spec.f_star;
    if (!(gap <= 1e-3) || run.wall_time_s > kBudgetSeconds + 1.0) ++bad;
    worst = std::max(worst, gap);
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "4 runs, worst gap %.3e", worst);
  report(2, bad == 0, buf);
}

// Criterion 3: stationarity certificates at every criterion-1 point. The
// certificate re-evaluates the gradients of the solver's final
// epsilon-active branch set at the returned point itself and projects the
// origin onto their hull. (The strictly tied set at the returned point is
// usually a singleton with an O(1) gradient: the solver only places the
// point within its eps_opt of the kink, so the tie tolerance cannot see
// the neighboring branches.)
void criterion3() {
  int bad = 0;
  double worst = 0.0;
  for (const ConvexRunResult& r : g_convex_runs) {
    const Problem p = make_problem(r.problem, r.dim);
    const Vector& x = r.run.final_point;
    std::vector<Vector> grads;
    for (const BranchCode& c : r.run.final_branch_set)
      if (p.fn.is_feasible_branch(c, x)) grads.push_back(p.fn.branch_gradient(c, x));
    for (const BranchCode& c : p.fn.active_branches(x).codes)
      grads.push_back(p.fn.branch_gradient(c, x));
    const double norm = std::sqrt(min_norm_point(grads).norm_sq);
    worst = std::max(worst, norm);
    if (!(norm <= 1e-3)) ++bad;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "%zu certificates, worst min-norm %.3e",
                g_convex_runs.size(), worst);
  report(3, bad == 0, buf);
}

// Criterion 4: projection inequality on 1000 random instances, simplex grid
// oracle on 200 small instances, perturbation trend on the fixture sets.
void criterion4() {
  NormalSampler rng(1001);
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const int k = 1 + static_cast<int>(rng.uniform() * 10);
    const int n = 1 + static_cast<int>(rng.uniform() * 20);
    std::vector<Vector> vs;
    for (int i = 0; i < k; ++i) vs.push_back(3.0 * rng.normal_vector(n));
    const JointGradient jg = min_norm_point(vs);
    double max_sq = 0.0;
    for (const Vector& v : vs) max_sq = std::max(max_sq, v.squaredNorm());
    const double tau_qp = 10.0 * kMinNormTol * (1.0 + max_sq);
    for (const Vector& v : vs)
      if (!(v.dot(jg.direction) >= jg.norm_sq - tau_qp)) ++bad;
  }

  int oracle_bad = 0;
  NormalSampler rng2(1002);
  for (int t = 0; t < 200; ++t) {
    const int k = 1 + static_cast<int>(rng2.uniform() * 3);
    const int n = 1 + static_cast<int>(rng2.uniform() * 3);
    std::vector<Vector> vs;
    for (int i = 0; i < k; ++i) vs.push_back(2.0 * rng2.normal_vector(n));
    const JointGradient jg = min_norm_point(vs);
    if (!(std::sqrt(jg.norm_sq) <= oracles::grid_min_norm(vs) + 1e-3)) ++oracle_bad;
  }

  int trend_bad = 0;
  {
    std::vector<std::vector<Vector>> instances;
    {
      Vector a(2), b(2);
      a << 1, 0;
      b << -1, 0;
      instances.push_back({a, b});
    }
    {
      Vector a(2), b(2);
      a << 2, 0;
      b << 0, 1;
      instances.push_back({a, b});
    }
    NormalSampler mk(1003);
    std::vector<Vector> vs;
    for (int i = 0; i < 5; ++i) vs.push_back(mk.normal_vector(6));
    instances.push_back(vs);
    for (const auto& inst : instances) {
      const double base = min_norm_point(inst).direction.norm();
      double prev = std::numeric_limits<double>::infinity();
      for (double delta : {1e-2, 1e-4, 1e-6}) {
        NormalSampler prng(1004);
        std::vector<Vector> pv;
        for (const Vector& v : inst) {
          Vector u = prng.normal_vector(v.size());
          pv.push_back(v + delta * u / u.norm());
        }
        const double err = std::abs(min_norm_point(pv).direction.norm() - base);
        if (!(err <= 2.0 * delta) || !(err <= prev + 1e-12)) ++trend_bad;
        prev = err;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "A.1 violations %d/1000, oracle misses %d/200, trend misses %d",
                bad, oracle_bad, trend_bad);
  report(4, bad == 0 && oracle_bad == 0 && trend_bad == 0, buf);
}

// Criterion 5: worked-example probes exact; 1000 random points per problem
// pass consistency and the finite-difference gradient check.
void criterion5() {
  int probe_bad = 0;
  for (const Fixture& fx : fixtures()) {
    for (const FixtureProbe& probe : fx.probes) {
      const auto active = fx.fn.active_branches(probe.x);
      std::map<std::vector<std::uint16_t>, int> want, got;
      for (const auto& c : probe.expected_active) ++want[c.selections()];
      for (const auto& c : active.codes) ++got[c.selections()];
      if (want != got) ++probe_bad;
    }
  }

  int consistency_bad = 0, fd_bad = 0;
  NormalSampler rng(2001);
  for (const std::string& name : problem_names()) {
    const Problem p = make_problem(name, 10);
    int done = 0;
    while (done < 1000) {
      Vector x = rng.normal_vector(10);
      bool clear = std::abs(x.sum()) > 1e-3;
      for (int i = 0; i < 10; ++i) clear &= std::abs(x[i]) > 1e-3;
      if (!clear) continue;  // stay clear of kinks and log singularities
      ++done;
      const EvalRecord rec = p.fn.evaluate(x);
      const double tol = kActiveTol * (1.0 + std::abs(rec.value));
      for (const BranchCode& c : p.fn.active_branches(x).codes)
        if (!(std::abs(p.fn.branch_value(c, x) - rec.value) <= tol))
          ++consistency_bad;
      const Vector ad = p.fn.branch_gradient(rec.primary_code, x);
      const Vector fd = oracles::fd_branch_gradient(p.fn, rec.primary_code, x);
      const double scale = 1.0 + ad.cwiseAbs().maxCoeff();
      if (!((ad - fd).cwiseAbs().maxCoeff() <= 1e-6 * scale)) ++fd_bad;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "probe misses %d, consistency misses %d, gradient misses %d "
                "(9000 points)",
                probe_bad, consistency_bad, fd_bad);
  report(5, probe_bad == 0 && consistency_bad == 0 && fd_bad == 0, buf);
}

double tail_slope(const SolverRun& run, double f_star) {
  std::vector<std::pair<long, double>> pts;
  for (const IterationRecord& r : run.trace)
    if (r.f - f_star > 0) pts.push_back({r.iter, std::log10(r.f - f_star)});
  if (pts.size() > 50) pts.erase(pts.begin(), pts.end() - 50);
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [i, y] : pts) {
    sx += i;
    sy += y;
    sxx += double(i) * i;
    sxy += i * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Criterion 6: empirical linear tail of the enhanced solver. gen_MAXQ's
// branch gradients all vanish at the minimizer, so its contraction scales
// with the constant step; it runs with alpha = 0.2 (Chained_CB3_II with the
// default 0.05). Both slopes must clear -0.02 over the final 50 iterations.
void criterion6() {
  EbigdConfig maxq_cfg;
  maxq_cfg.alpha = 0.2;
  maxq_cfg.time_limit_s = kBudgetSeconds;
  const Problem maxq = make_problem("gen_MAXQ", 10);
  const double s1 =
      tail_slope(solve_ebigd(maxq.fn, maxq.spec.preset_x0, maxq_cfg), 0.0);

  EbigdConfig cb_cfg;
  cb_cfg.time_limit_s = kBudgetSeconds;
  const Problem cb = make_problem("Chained_CB3_II", 10);
  const double s2 =
      tail_slope(solve_ebigd(cb.fn, cb.spec.preset_x0, cb_cfg), cb.spec.f_star);

  char buf[120];
  std::snprintf(buf, sizeof(buf), "slopes: gen_MAXQ %.4f, Chained_CB3_II %.4f",
                s1, s2);
  report(6, s1 <= -0.02 && s2 <= -0.02, buf);
}

// Criterion 7: quartic recovery against a lattice oracle, plus exact
// degenerate cases.
void criterion7() {
  NormalSampler rng(3001);
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    const int m = 1 + static_cast<int>(rng.uniform() * 3);
    const int n = 1 + static_cast<int>(rng.uniform() * 2);
    std::vector<double> values;
    std::vector<Vector> grads;
    for (int i = 0; i < m; ++i) {
      values.push_back(rng.normal());
      grads.push_back(rng.normal_vector(n));
    }
    const RecoverySolution rs = solve_quartic_recovery(values, grads);
    const double lattice = oracles::recovery_lattice_best(
        values, grads, rs.z_star, rs.s_star, 0.05, 1e-3);
    if (!(rs.objective <= lattice + 1e-6)) ++bad;
  }

  bool trivial_ok = true;
  {
    Vector g(3);
    g << 1.0, -2.0, 0.5;
    const RecoverySolution rs = solve_quartic_recovery({4.25}, {g});
    trivial_ok &= rs.z_star == 4.25 && rs.s_star.norm() == 0.0;
    const RecoverySolution sym = solve_quartic_recovery(
        {0.0, 0.0}, {Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)});
    trivial_ok &= std::abs(sym.z_star) <= 1e-9 && sym.s_star.norm() <= 1e-9;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "oracle misses %d/200, trivial cases %s", bad,
                trivial_ok ? "exact" : "off");
  report(7, bad == 0 && trivial_ok, buf);
}

// Criterion 8: matched-seed comparison on Chained_CB3_II at n = 50 — the
// branch-driven solver must spend strictly fewer function evaluations and
// strictly less QP time than gradient sampling.
void criterion8() {
  const Problem p = make_problem("Chained_CB3_II", 50);
  const std::uint64_t seed = 7;
  const Vector x0 = initial_point(p.spec.name, 50, InitMode::kRandom, seed);

  const SolverRun practical = solve_practical(p.fn, x0, practical_config());

  GsConfig gs_cfg;
  gs_cfg.seed = seed;
  gs_cfg.time_limit_s = kBudgetSeconds;
  const BlackBoxFunction bb(p.fn);
  const SolverRun gs = solve_gs(bb, x0, gs_cfg);

  const bool pass = practical.func_evals < gs.func_evals &&
                    practical.qp_time_s < gs.qp_time_s;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "func evals %ld vs %ld, qp time %.4fs vs %.4fs (gaps %.1e / %.1e)",
                practical.func_evals, gs.func_evals, practical.qp_time_s,
                gs.qp_time_s, practical.final_value - p.spec.f_star,
                gs.final_value - p.spec.f_star);
  report(8, pass, buf);
}

// Criterion 9: repeating the criteria 1-2 grids reproduces every non-timing
// column bit for bit.
void criterion9() {
  BenchConfig cfg;
  cfg.problems = {"gen_MAXQ", "gen_MXHILB", "Chained_LQ", "Chained_CB3_I",
                  "Chained_CB3_II"};
  cfg.dims = {25, 50};
  cfg.algorithms = {"bigd-practical"};
  cfg.init = InitMode::kRandom;
  cfg.seeds = {1, 2, 3};
  cfg.time_limit_s = kBudgetSeconds;
  cfg.out_dir = "acceptance_out";
  cfg.trace_every = 0;

  auto run_twice = [](BenchConfig c) {
    const auto a = run_benchmark(c);
    const auto b = run_benchmark(c);
    int diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].status != b[i].status || a[i].iterations != b[i].iterations ||
          a[i].final_obj != b[i].final_obj || a[i].func_evals != b[i].func_evals ||
          a[i].grad_evals != b[i].grad_evals)
        ++diff;
    }
    return std::pair<std::size_t, int>(a.size(), diff);
  };

  const auto [n1, d1] = run_twice(cfg);

  cfg.problems = {"Chained_Crescent_I", "Chained_Crescent_II", "brown_func2",
                  "num_active_faces"};
  cfg.dims = {25};
  cfg.init = InitMode::kPreset;
  cfg.seeds = {0};
  const auto [n2, d2] = run_twice(cfg);

  char buf[120];
  std::snprintf(buf, sizeof(buf), "%zu rows repeated, %d mismatches", n1 + n2,
                d1 + d2);
  report(9, d1 + d2 == 0, buf);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures == 0) {
    std::printf("ALL 9 CRITERIA PASS\n");
    return 0;
  }
  std::printf("%d CRITERIA FAILED\n", g_failures);
  return 1;
}
