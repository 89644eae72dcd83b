#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bigd/bench.hpp"
#include "bigd/bigd.hpp"
#include "bigd/ebigd.hpp"
#include "bigd/gs.hpp"
#include "bigd/minnorm.hpp"
#include "bigd/problems.hpp"
#include "bigd/serialize.hpp"

namespace py = pybind11;
using namespace bigd;

namespace {

py::list run_trace(const SolverRun& run) {
  py::list rows;
  for (const IterationRecord& r : run.trace) {
    py::dict d;
    d["iter"] = r.iter;
    d["wall_s"] = r.wall_s;
    d["f"] = r.f;
    d["d_norm"] = r.d_norm;
    d["n_effective"] = r.n_effective;
    d["n_visited"] = r.n_visited;
    d["func_evals"] = r.func_evals;
    d["grad_evals"] = r.grad_evals;
    d["accepted"] = r.accepted;
    rows.append(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Branch-encoded piecewise-differentiable functions and solvers";

  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<InfeasibleBranchError>(m, "InfeasibleBranchError");
  py::register_exception<IterationCapError>(m, "IterationCapError");

  py::class_<BranchCode>(m, "BranchCode")
      .def(py::init([](const std::vector<int>& sels) {
        std::vector<std::uint16_t> s(sels.begin(), sels.end());
        return BranchCode(std::move(s));
      }))
      .def("__len__", &BranchCode::size)
      .def("__eq__", &BranchCode::operator==)
      .def("__hash__", &BranchCode::hash)
      .def("__repr__", &BranchCode::to_string)
      .def_property_readonly("selections", [](const BranchCode& c) {
        return std::vector<int>(c.selections().begin(), c.selections().end());
      });

  py::class_<EvalRecord>(m, "EvalRecord")
      .def_readonly("value", &EvalRecord::value)
      .def_readonly("primary_code", &EvalRecord::primary_code)
      .def_readonly("per_site_margins", &EvalRecord::per_site_margins);

  py::class_<ActiveBranches>(m, "ActiveBranches")
      .def_readonly("codes", &ActiveBranches::codes)
      .def_readonly("truncated", &ActiveBranches::truncated);

  py::class_<EncodableFunction>(m, "EncodableFunction")
      .def_property_readonly("dimension", &EncodableFunction::dimension)
      .def_property_readonly("num_sites", &EncodableFunction::num_sites)
      .def("site_arity", &EncodableFunction::site_arity)
      .def("evaluate", &EncodableFunction::evaluate, py::arg("x"))
      .def("__call__",
           [](const EncodableFunction& f, const Vector& x) {
             return f.evaluate(x).value;
           })
      .def("active_branches", &EncodableFunction::active_branches, py::arg("x"),
           py::arg("cap") = kDefaultBranchCap)
      .def("branch_value", &EncodableFunction::branch_value)
      .def("branch_gradient", &EncodableFunction::branch_gradient)
      .def("is_feasible_branch", &EncodableFunction::is_feasible_branch)
      .def("to_text", [](const EncodableFunction& f) { return to_text(f); });

  m.def("parse_function", &parse_function, py::arg("text"));
  m.def("load_function", &load_function, py::arg("path"));

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def_readonly("name", &ProblemSpec::name)
      .def_readonly("dimension", &ProblemSpec::dimension)
      .def_readonly("f_star", &ProblemSpec::f_star)
      .def_readonly("convex", &ProblemSpec::convex)
      .def_readonly("preset_x0", &ProblemSpec::preset_x0);

  py::class_<Problem>(m, "Problem")
      .def_readonly("fn", &Problem::fn)
      .def_readonly("spec", &Problem::spec);

  m.def("problem_names", [] { return problem_names(); });
  m.def("make_problem", &make_problem, py::arg("name"), py::arg("n"));
  m.def(
      "initial_point",
      [](const std::string& name, int n, const std::string& mode, std::uint64_t seed) {
        return initial_point(name, n, parse_init_mode(mode), seed);
      },
      py::arg("name"), py::arg("n"), py::arg("mode") = "preset", py::arg("seed") = 0);

  py::class_<JointGradient>(m, "JointGradient")
      .def_readonly("weights", &JointGradient::weights)
      .def_readonly("direction", &JointGradient::direction)
      .def_readonly("norm_sq", &JointGradient::norm_sq);

  m.def(
      "min_norm_point",
      [](const std::vector<Vector>& vs, double tol) { return min_norm_point(vs, tol); },
      py::arg("vectors"), py::arg("tol") = kMinNormTol);

  py::class_<RecoverySolution>(m, "RecoverySolution")
      .def_readonly("z_star", &RecoverySolution::z_star)
      .def_readonly("s_star", &RecoverySolution::s_star)
      .def_readonly("objective", &RecoverySolution::objective)
      .def_readonly("newton_iters", &RecoverySolution::newton_iters);

  m.def("solve_quartic_recovery", &solve_quartic_recovery, py::arg("values"),
        py::arg("gradients"), py::arg("tau_rec") = 1e-10);

  py::class_<SolverRun>(m, "SolverRun")
      .def_property_readonly("status",
                             [](const SolverRun& r) { return to_string(r.status); })
      .def_readonly("final_point", &SolverRun::final_point)
      .def_readonly("final_value", &SolverRun::final_value)
      .def_readonly("f_star", &SolverRun::f_star)
      .def_readonly("final_branch_set", &SolverRun::final_branch_set)
      .def_readonly("iterations", &SolverRun::iterations)
      .def_readonly("func_evals", &SolverRun::func_evals)
      .def_readonly("grad_evals", &SolverRun::grad_evals)
      .def_readonly("qp_time_s", &SolverRun::qp_time_s)
      .def_readonly("eval_time_s", &SolverRun::eval_time_s)
      .def_readonly("wall_time_s", &SolverRun::wall_time_s)
      .def_readonly("note", &SolverRun::note)
      .def_property_readonly("trace", &run_trace);

  py::class_<BigdConfig>(m, "BigdConfig")
      .def(py::init<>())
      .def_readwrite("r0", &BigdConfig::r0)
      .def_readwrite("alpha_max", &BigdConfig::alpha_max)
      .def_readwrite("rho0", &BigdConfig::rho0)
      .def_readwrite("mu_dec", &BigdConfig::mu_dec)
      .def_readwrite("branch_cap", &BigdConfig::branch_cap)
      .def_readwrite("max_outer", &BigdConfig::max_outer)
      .def_readwrite("time_limit_s", &BigdConfig::time_limit_s)
      .def_readwrite("tol_stat", &BigdConfig::tol_stat);

  py::class_<PracticalConfig>(m, "PracticalConfig")
      .def(py::init<>())
      .def_readwrite("eps0", &PracticalConfig::eps0)
      .def_readwrite("nu0", &PracticalConfig::nu0)
      .def_readwrite("gamma", &PracticalConfig::gamma)
      .def_readwrite("eps_opt", &PracticalConfig::eps_opt)
      .def_readwrite("nu_opt", &PracticalConfig::nu_opt)
      .def_readwrite("theta_eps", &PracticalConfig::theta_eps)
      .def_readwrite("theta_nu", &PracticalConfig::theta_nu)
      .def_readwrite("rho0", &PracticalConfig::rho0)
      .def_readwrite("branch_cap", &PracticalConfig::branch_cap)
      .def_readwrite("max_iter", &PracticalConfig::max_iter)
      .def_readwrite("time_limit_s", &PracticalConfig::time_limit_s);

  py::class_<EbigdConfig>(m, "EbigdConfig")
      .def(py::init<>())
      .def_readwrite("rho0", &EbigdConfig::rho0)
      .def_readwrite("alpha", &EbigdConfig::alpha)
      .def_readwrite("gamma", &EbigdConfig::gamma)
      .def_readwrite("max_iter", &EbigdConfig::max_iter)
      .def_readwrite("time_limit_s", &EbigdConfig::time_limit_s)
      .def_readwrite("tau_rec", &EbigdConfig::tau_rec)
      .def_readwrite("branch_cap", &EbigdConfig::branch_cap)
      .def_readwrite("tol_stat", &EbigdConfig::tol_stat);

  py::class_<GsConfig>(m, "GsConfig")
      .def(py::init<>())
      .def_readwrite("sample_size", &GsConfig::sample_size)
      .def_readwrite("eps0", &GsConfig::eps0)
      .def_readwrite("eps_shrink", &GsConfig::eps_shrink)
      .def_readwrite("nu0", &GsConfig::nu0)
      .def_readwrite("nu_shrink", &GsConfig::nu_shrink)
      .def_readwrite("eps_opt", &GsConfig::eps_opt)
      .def_readwrite("nu_opt", &GsConfig::nu_opt)
      .def_readwrite("armijo_beta", &GsConfig::armijo_beta)
      .def_readwrite("backtrack", &GsConfig::backtrack)
      .def_readwrite("seed", &GsConfig::seed)
      .def_readwrite("max_iter", &GsConfig::max_iter)
      .def_readwrite("time_limit_s", &GsConfig::time_limit_s);

  m.def(
      "solve_bigd",
      [](const EncodableFunction& f, const Vector& x0, const BigdConfig& cfg) {
        return solve_bigd(f, x0, cfg);
      },
      py::arg("f"), py::arg("x0"), py::arg("cfg") = BigdConfig{});
  m.def(
      "solve_practical",
      [](const EncodableFunction& f, const Vector& x0, const PracticalConfig& cfg) {
        return solve_practical(f, x0, cfg);
      },
      py::arg("f"), py::arg("x0"), py::arg("cfg") = PracticalConfig{});
  m.def(
      "solve_ebigd",
      [](const EncodableFunction& f, const Vector& x0, const EbigdConfig& cfg) {
        return solve_ebigd(f, x0, cfg);
      },
      py::arg("f"), py::arg("x0"), py::arg("cfg") = EbigdConfig{});
  m.def(
      "solve_gs",
      [](const EncodableFunction& f, const Vector& x0, const GsConfig& cfg) {
        const BlackBoxFunction bb(f);
        return solve_gs(bb, x0, cfg);
      },
      py::arg("f"), py::arg("x0"), py::arg("cfg") = GsConfig{});

  py::class_<Fixture>(m, "Fixture")
      .def_readonly("name", &Fixture::name)
      .def_readonly("fn", &Fixture::fn);
  m.def("fixtures", [] { return fixtures(); });
}
