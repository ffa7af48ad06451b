#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "ewave/claims.hpp"
#include "ewave/config.hpp"
#include "ewave/errors.hpp"
#include "ewave/harness.hpp"
#include "ewave/hashing.hpp"
#include "ewave/metrology.hpp"
#include "ewave/norms.hpp"
#include "ewave/profiles.hpp"
#include "ewave/propagator.hpp"
#include "ewave/selftest.hpp"
#include "ewave/snapshot.hpp"
#include "ewave/symbols.hpp"

namespace py = pybind11;
using namespace ewave;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Arrays are shaped (3, n, n, n) and indexed [component, z, y, x].
VectorField field_from_array(const FrequencyLattice& lat, const RealArray& a) {
  const auto n = static_cast<py::ssize_t>(lat.n());
  if (a.ndim() != 4 || a.shape(0) != 3 || a.shape(1) != n || a.shape(2) != n || a.shape(3) != n)
    throw py::value_error("field must have shape (3, n, n, n)");
  VectorField f(lat, Representation::physical);
  const double* src = a.data();
  for (std::size_t i = 0; i < f.data().size(); ++i) f.data()[i] = src[i];
  return f;
}

RealArray array_from_field(const VectorField& field) {
  const VectorField f = as_physical(field);
  const auto n = static_cast<py::ssize_t>(f.lattice().n());
  RealArray out({py::ssize_t{3}, n, n, n});
  double* dst = out.mutable_data();
  for (std::size_t i = 0; i < f.data().size(); ++i) dst[i] = f.data()[i].real();
  return out;
}

std::vector<Sample> samples_from(const std::vector<double>& ts, const std::vector<double>& vs) {
  if (ts.size() != vs.size()) throw py::value_error("times and values differ in length");
  std::vector<Sample> s;
  for (std::size_t i = 0; i < ts.size(); ++i) s.push_back({ts[i], vs[i]});
  return s;
}

py::dict report_dict(const DecayReport& r) {
  py::dict d;
  d["claim"] = r.claim_id;
  d["label"] = r.label;
  d["p"] = r.p;
  d["alpha"] = r.alpha;
  d["ell"] = r.ell;
  d["comparison"] = to_string(r.comparison);
  d["fitted"] = r.fitted_slope;
  d["theoretical"] = r.theoretical_slope;
  d["tolerance"] = r.tolerance;
  d["window"] = py::make_tuple(r.window_lo, r.window_hi);
  d["pass"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ewave, m) {
  m.doc() = "Damped elastic wave kernels, solver and decay-rate metrology";

  py::register_exception<BlowUpError>(m, "BlowUpError");
  py::register_exception<InsufficientHorizon>(m, "InsufficientHorizon");
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<MaterialParams>(m, "Material")
      .def(py::init([](double lambda, double mu, double nu) { return make_material(lambda, mu, nu); }),
           py::arg("lam") = 0.0, py::arg("mu") = 1.0, py::arg("nu") = 1.0)
      .def_readonly("lam", &MaterialParams::lambda)
      .def_readonly("mu", &MaterialParams::mu)
      .def_readonly("nu", &MaterialParams::nu)
      .def_property_readonly("slow_speed", &MaterialParams::slow_speed)
      .def_property_readonly("fast_speed", &MaterialParams::fast_speed)
      .def("__repr__", [](const MaterialParams& p) {
        return "Material(lam=" + format_number(p.lambda) + ", mu=" + format_number(p.mu) +
               ", nu=" + format_number(p.nu) + ")";
      });

  py::class_<FrequencyLattice>(m, "Lattice")
      .def(py::init(&make_lattice), py::arg("n"), py::arg("box_length"))
      .def_property_readonly("n", &FrequencyLattice::n)
      .def_property_readonly("box_length", &FrequencyLattice::box_length)
      .def_property_readonly("spacing", &FrequencyLattice::spacing)
      .def_property_readonly("frequency_step", &FrequencyLattice::frequency_step)
      .def("axis_frequencies", [](const FrequencyLattice& l) {
        const auto s = l.axis_frequencies();
        return std::vector<double>(s.begin(), s.end());
      })
      .def("coordinates", [](const FrequencyLattice& l) {
        std::vector<double> x(static_cast<std::size_t>(l.n()));
        for (int i = 0; i < l.n(); ++i) x[i] = -0.5 * l.box_length() + i * l.spacing();
        return x;
      });

  m.def("characteristic_roots",
        [](const MaterialParams& p, double beta, double r) {
          const auto c = characteristic_roots(p, beta, r);
          return py::make_tuple(c.sigma_plus, c.sigma_minus);
        },
        py::arg("material"), py::arg("beta"), py::arg("r"));
  m.def("kernel_multipliers",
        [](const MaterialParams& p, double beta, double r, double t) {
          const auto k = kernel_multipliers(p, beta, r, t);
          return py::dict(py::arg("K0") = k.K0, py::arg("K1") = k.K1, py::arg("dtK0") = k.dtK0,
                          py::arg("dtK1") = k.dtK1);
        },
        py::arg("material"), py::arg("beta"), py::arg("r"), py::arg("t"));
  m.def("diffusion_multipliers",
        [](const MaterialParams& p, double beta, double r, double t) {
          const auto d = diffusion_multipliers(p, beta, r, t);
          return py::make_tuple(d.G0, d.G1);
        },
        py::arg("material"), py::arg("beta"), py::arg("r"), py::arg("t"));

  m.def("linear_evolve",
        [](const MaterialParams& p, const FrequencyLattice& lat, const RealArray& f0, const RealArray& f1, double t,
           const std::string& band) {
          const LinearFlow flow(p, lat, band_from_string(band));
          const auto out = linear_evolve(flow, field_from_array(lat, f0), field_from_array(lat, f1), t);
          return py::make_tuple(array_from_field(out.u), array_from_field(out.ut));
        },
        py::arg("material"), py::arg("lattice"), py::arg("f0"), py::arg("f1"), py::arg("t"), py::arg("band") = "all");

  m.def("run",
        [](const MaterialParams& p, const FrequencyLattice& lat, const RealArray& f0, const RealArray& f1,
           const std::vector<double>& schedule, const std::string& form, double h) {
          RunOptions opts;
          opts.h = h;
          std::vector<SolverState> traj;
          {
            py::gil_scoped_release release;
            traj = run(p, field_from_array(lat, f0), field_from_array(lat, f1), nonlinearity_from_string(form),
                       schedule, opts);
          }
          py::list out;
          for (const auto& s : traj)
            out.append(py::make_tuple(s.t, array_from_field(s.u_hat), array_from_field(s.ut_hat)));
          return out;
        },
        py::arg("material"), py::arg("lattice"), py::arg("f0"), py::arg("f1"), py::arg("schedule"),
        py::arg("form") = "grad_grad2", py::arg("h") = 0.0);

  m.def("lp_norm",
        [](const FrequencyLattice& lat, const RealArray& f, double p) { return lp_norm(field_from_array(lat, f), p); },
        py::arg("lattice"), py::arg("field"), py::arg("p"));
  m.def("derivative_norm",
        [](const FrequencyLattice& lat, const RealArray& f, int order, double p, bool remove_mean) {
          return derivative_norm(field_from_array(lat, f), order, p, remove_mean);
        },
        py::arg("lattice"), py::arg("field"), py::arg("order"), py::arg("p"), py::arg("remove_mean") = false);

  m.def("claim_ids", [] {
    std::vector<std::string> ids;
    for (const auto& c : claim_registry()) ids.push_back(c.id);
    return ids;
  });
  m.def("theoretical_exponent",
        py::overload_cast<const std::string&, double, double, int>(&theoretical_exponent), py::arg("claim"),
        py::arg("p"), py::arg("alpha"), py::arg("ell") = 0);
  m.def("fit_rate",
        [](const std::vector<double>& ts, const std::vector<double>& vs) {
          const auto f = fit_rate(samples_from(ts, vs));
          return py::dict(py::arg("slope") = f.slope, py::arg("intercept") = f.intercept,
                          py::arg("residual") = f.residual, py::arg("count") = f.count);
        },
        py::arg("times"), py::arg("values"));
  m.def("make_report",
        [](const std::string& claim, double p, double alpha, int ell, const std::vector<double>& ts,
           const std::vector<double>& vs, double tolerance, double t_min) {
          VerifyOptions o;
          o.tolerance = tolerance;
          o.t_min = t_min;
          return report_dict(make_report(find_claim(claim), p, alpha, ell, samples_from(ts, vs), o));
        },
        py::arg("claim"), py::arg("p"), py::arg("alpha"), py::arg("ell"), py::arg("times"), py::arg("values"),
        py::arg("tolerance") = 0.15, py::arg("t_min") = 5.0);

  m.def("kernel_selftest",
        [](std::size_t draws, std::uint64_t seed) {
          KernelSelftestOptions o;
          o.draws = draws;
          o.near_double = std::min<std::size_t>(o.near_double, draws);
          o.seed = seed;
          KernelSelftestResult r;
          {
            py::gil_scoped_release release;
            r = kernel_selftest(o);
          }
          return py::dict(py::arg("draws") = r.draws, py::arg("worst_error") = r.worst_error,
                          py::arg("pass") = r.pass, py::arg("summary") = r.summary());
        },
        py::arg("draws") = 1000, py::arg("seed") = 20240601);
  m.def("semigroup_defect", &semigroup_defect, py::arg("draws") = 1000, py::arg("seed") = 1);

  m.def("parse_config", [](const std::string& text) { return config_echo(parse_config(text)); }, py::arg("text"),
        "Validates a config and returns its canonical echo.");
  m.def("run_experiment",
        [](const std::filesystem::path& path, const std::string& mode) {
          const ExperimentConfig cfg = load_config(path);
          if (mode != "verify" && mode != "simulate") throw py::value_error("mode must be 'verify' or 'simulate'");
          RunOutcome out;
          {
            py::gil_scoped_release release;
            out = run_experiment(cfg, mode == "verify" ? HarnessMode::verify : HarnessMode::simulate);
          }
          py::list reports;
          for (const auto& r : out.reports) reports.append(report_dict(r));
          return py::dict(py::arg("exit_code") = out.exit_code, py::arg("dir") = out.dir.string(),
                          py::arg("error") = out.error, py::arg("reports") = reports);
        },
        py::arg("config"), py::arg("mode") = "verify");

  m.def("read_snapshot", [](const std::filesystem::path& path) {
    const Snapshot s = read_snapshot(path);
    return py::dict(py::arg("time") = s.time, py::arg("n") = s.field.lattice().n(),
                    py::arg("box_length") = s.field.lattice().box_length(), py::arg("material") = s.params,
                    py::arg("field") = array_from_field(s.field));
  });
  m.def("git_blob_hash", [](const py::bytes& b) { return git_blob_hash(std::string(b)); });
}
