#include <complex>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdel/analysis.hpp"
#include "qdel/deletion.hpp"
#include "qdel/errors.hpp"
#include "qdel/machine.hpp"
#include "qdel/report.hpp"
#include "qdel/selftest.hpp"
#include "qdel/sweep.hpp"

namespace py = pybind11;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752;

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

qdel::MachineParams make_params(double lambda, double y, double m1, std::complex<double> m2) {
  return qdel::MachineParams{lambda, y, m1, m2};
}

py::dict reduced_dict(const qdel::PipelineResult& r) {
  py::dict d;
  d["joint"] = r.joint.matrix();
  d["rho1"] = r.retained.matrix();
  d["rho2"] = r.deleted.matrix();
  d["rho3"] = r.machine.matrix();
  d["transformed"] = r.transformed;
  return d;
}

py::dict class_dict(const qdel::MachineClass& c) {
  py::dict d;
  d["kind"] = qdel::classification_name(c.kind);
  d["spread_a"] = c.spread_a;
  d["spread_b"] = c.spread_b;
  d["spread_c"] = c.spread_c;
  d["mean_a"] = c.mean_a;
  d["mean_b"] = c.mean_b;
  d["note"] = c.optimality_note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Universal quantum deletion machine simulator.";

  py::register_exception<qdel::Infeasible>(m, "Infeasible", PyExc_ValueError);
  py::register_exception<qdel::InvalidInput>(m, "InvalidInput", PyExc_ValueError);

  m.def(
      "gram",
      [](double lambda, double y) {
        qdel::MachineParams p{lambda, y};
        p.check_ranges();
        return qdel::GramEntries(qdel::build_gram(p).entries);
      },
      py::arg("lam"), py::arg("y") = 0.0, "7x7 Gram matrix of A, A0, A1, B0, B1, C0, D0.");

  m.def(
      "check_feasible",
      [](double lambda, double y) {
        qdel::MachineParams p{lambda, y};
        p.check_ranges();
        const auto rec = qdel::check_feasible(qdel::build_gram(p));
        py::dict d;
        d["feasible"] = rec.feasible;
        d["analytic_feasible"] = rec.analytic_feasible;
        d["min_eigenvalue"] = rec.min_eigenvalue;
        d["rank"] = rec.rank;
        return d;
      },
      py::arg("lam"), py::arg("y") = 0.0);

  m.def(
      "realize",
      [](double lambda, double y) {
        qdel::MachineParams p{lambda, y};
        p.validate();
        const auto basis = qdel::realize_vectors(qdel::build_gram(p));
        py::dict d;
        for (std::size_t v = 0; v < qdel::kMachineVectorCount; ++v) {
          d[qdel::machine_vector_name(static_cast<qdel::MachineVector>(v))] = basis.vectors[v];
        }
        return d;
      },
      py::arg("lam"), py::arg("y") = 0.0, "Machine vectors realizing the Gram matrix.");

  m.def(
      "run_pipeline",
      [](double lambda, double alpha2, double y, double m1, std::complex<double> m2,
         double beta_phase, bool transform) {
        const auto input = qdel::QubitState::from_alpha2(alpha2, beta_phase);
        return reduced_dict(qdel::run_pipeline(input, make_params(lambda, y, m1, m2), transform));
      },
      py::arg("lam"), py::arg("alpha2"), py::arg("y") = 0.0, py::arg("m1") = kInvSqrt2,
      py::arg("m2") = std::complex<double>(kInvSqrt2, 0.0), py::arg("beta_phase") = 0.0,
      py::arg("transform") = false, "Joint and reduced density matrices.");

  m.def(
      "evaluate",
      [](double lambda, double alpha2, double y, double m1, std::complex<double> m2,
         double beta_phase, bool transform) {
        const auto input = qdel::QubitState::from_alpha2(alpha2, beta_phase);
        return to_python(
            qdel::to_json(qdel::evaluate(make_params(lambda, y, m1, m2), input, transform)));
      },
      py::arg("lam"), py::arg("alpha2"), py::arg("y") = 0.0, py::arg("m1") = kInvSqrt2,
      py::arg("m2") = std::complex<double>(kInvSqrt2, 0.0), py::arg("beta_phase") = 0.0,
      py::arg("transform") = false, "Fidelity report as a dict.");

  m.def(
      "classify",
      [](double lambda, double y, double m1, std::complex<double> m2, bool transform) {
        return class_dict(qdel::classify_machine(make_params(lambda, y, m1, m2), transform));
      },
      py::arg("lam"), py::arg("y") = 0.0, py::arg("m1") = kInvSqrt2,
      py::arg("m2") = std::complex<double>(kInvSqrt2, 0.0), py::arg("transform") = false);

  m.def("closed_F1", &qdel::closed_F1, py::arg("alpha2"), py::arg("lam"));
  m.def(
      "closed_F2",
      [](double lambda, double m1, std::complex<double> m2) {
        return qdel::closed_F2(lambda, qdel::standard_state(m1, m2));
      },
      py::arg("lam"), py::arg("m1") = kInvSqrt2,
      py::arg("m2") = std::complex<double>(kInvSqrt2, 0.0));
  m.def("closed_F3", &qdel::closed_F3, py::arg("alpha"), py::arg("beta"));
  m.def(
      "closed_F4",
      [](double alpha2, double beta_phase, double lambda, double m1, std::complex<double> m2) {
        return qdel::closed_F4(alpha2, beta_phase, lambda, qdel::standard_state(m1, m2));
      },
      py::arg("alpha2"), py::arg("beta_phase"), py::arg("lam"), py::arg("m1") = kInvSqrt2,
      py::arg("m2") = std::complex<double>(kInvSqrt2, 0.0));
  m.def(
      "closed_rho1", [](double alpha2, double lambda) {
        return qdel::CMatrix(qdel::closed_rho1(alpha2, lambda).matrix());
      },
      py::arg("alpha2"), py::arg("lam"));
  m.def(
      "closed_rho2",
      [](double alpha2, double lambda, double m1, std::complex<double> m2) {
        return qdel::CMatrix(
            qdel::closed_rho2(alpha2, lambda, qdel::standard_state(m1, m2)).matrix());
      },
      py::arg("alpha2"), py::arg("lam"), py::arg("m1") = kInvSqrt2,
      py::arg("m2") = std::complex<double>(kInvSqrt2, 0.0));

  m.def(
      "average_fidelity",
      [](const std::function<double(double)>& f, int nodes) {
        return qdel::average_fidelity(f, nodes);
      },
      py::arg("f"), py::arg("nodes") = qdel::kDefaultQuadNodes,
      "Integral of f(alpha2) over [0, 1].");

  m.def(
      "sweep",
      [](const std::string& param, double from, double to, int steps, double lambda,
         double alpha2, double y, double m1, std::complex<double> m2, double beta_phase,
         bool transform) {
        const auto swept = qdel::parse_swept_param(param);
        if (!swept) throw qdel::InvalidInput("unknown sweep parameter '" + param + "'");
        qdel::SweepSpec spec;
        spec.param = *swept;
        spec.from = from;
        spec.to = to;
        spec.steps = steps;
        spec.fixed = make_params(lambda, y, m1, m2);
        spec.alpha2 = alpha2;
        spec.beta_phase = beta_phase;
        spec.transformer = transform;
        spec.format = qdel::OutputFormat::json;
        spec.validate();
        return to_python(qdel::sweep_json(spec, qdel::run_sweep(spec)));
      },
      py::arg("param"), py::arg("start"), py::arg("stop"), py::arg("steps"),
      py::arg("lam") = 0.0, py::arg("alpha2") = 0.5, py::arg("y") = 0.0,
      py::arg("m1") = kInvSqrt2, py::arg("m2") = std::complex<double>(kInvSqrt2, 0.0),
      py::arg("beta_phase") = 0.0, py::arg("transform") = false);

  m.def(
      "limit",
      [](std::vector<double> eps, double alpha2, double beta_phase, double m1,
         std::complex<double> m2) {
        qdel::LimitSpec spec;
        if (!eps.empty()) spec.eps = std::move(eps);
        spec.alpha2 = alpha2;
        spec.beta_phase = beta_phase;
        spec.m1 = m1;
        spec.m2 = m2;
        return to_python(qdel::to_json(qdel::run_limit(spec)));
      },
      py::arg("eps") = std::vector<double>{}, py::arg("alpha2") = 0.5,
      py::arg("beta_phase") = 0.0, py::arg("m1") = kInvSqrt2,
      py::arg("m2") = std::complex<double>(kInvSqrt2, 0.0));

  m.def(
      "selftest",
      [](const std::string& inject) {
        qdel::SelfTestOptions opt;
        opt.quad_nodes = qdel::default_quad_nodes();
        if (inject == "transformer-swap") {
          opt.swap_transformer_columns = true;
        } else if (inject == "gram-corrupt") {
          opt.corrupt_gram = true;
        } else if (inject != "none") {
          throw qdel::InvalidInput("unknown fault '" + inject + "'");
        }
        const auto rep = qdel::run_selftest(opt);
        py::list checks;
        for (const auto& c : rep.checks) {
          py::dict d;
          d["id"] = c.id;
          d["name"] = c.name;
          d["pass"] = c.pass;
          d["gating"] = c.gating;
          d["observed"] = c.observed;
          checks.append(d);
        }
        py::dict d;
        d["pass"] = rep.pass();
        d["checks"] = checks;
        d["text"] = qdel::format_selftest(rep);
        return d;
      },
      py::arg("inject") = "none");
}
