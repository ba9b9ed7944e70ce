#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dbar/dbar.hpp"
#include "dbar/errors.hpp"
#include "dbar/experiments.hpp"
#include "dbar/green.hpp"
#include "dbar/io.hpp"

namespace py = pybind11;
using namespace dbar;

namespace {

Energy to_energy(const py::object& e) {
  if (py::isinstance<Energy>(e)) return e.cast<Energy>();
  return Energy(e.cast<cplx>());
}

py::dict scan_to_dict(const ScanResult& r) {
  const auto na = static_cast<Eigen::Index>(r.alphas.size());
  const auto nl = static_cast<Eigen::Index>(r.lambda_abs.size());
  Eigen::MatrixXd t(na, nl), mu(na, nl);
  Eigen::MatrixXi it(na, nl), flagged(na, nl);
  for (Eigen::Index a = 0; a < na; ++a)
    for (Eigen::Index l = 0; l < nl; ++l) {
      const ScanCell& c = r.at(static_cast<std::size_t>(a), static_cast<std::size_t>(l));
      t(a, l) = c.t;
      mu(a, l) = c.mu_max;
      it(a, l) = c.iterations;
      flagged(a, l) = c.flagged;
    }
  py::dict d;
  d["alpha"] = r.alphas;
  d["lambda_abs"] = r.lambda_abs;
  d["t"] = t;
  d["mu_max"] = mu;
  d["iterations"] = it;
  d["flagged"] = flagged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "D-bar inverse scattering at negative energy";
  m.attr("__version__") = library_version();

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", PyExc_RuntimeError);
  py::register_exception<WellPosednessViolation>(m, "WellPosednessViolation", PyExc_RuntimeError);

  py::class_<Energy>(m, "Energy")
      .def(py::init<double>())
      .def(py::init<cplx>())
      .def_property_readonly("value", &Energy::value)
      .def("sqrt", &Energy::sqrt)
      .def("kappa", &Energy::kappa)
      .def("__repr__", [](const Energy& e) { return "Energy(" + py::repr(py::cast(e.value())).cast<std::string>() + ")"; });

  py::class_<PeriodicGrid>(m, "PeriodicGrid")
      .def(py::init<int, double>(), py::arg("exponent"), py::arg("half_width"))
      .def_property_readonly("n", &PeriodicGrid::n)
      .def_property_readonly("spacing", &PeriodicGrid::spacing)
      .def_property_readonly("half_width", &PeriodicGrid::half_width)
      .def("node", py::overload_cast<std::size_t>(&PeriodicGrid::node, py::const_));

  m.def("green_reduced", [](double x1, double x2, double k1, double k2) { return green_reduced(x1, x2, k1, k2); },
        py::arg("x1"), py::arg("x2"), py::arg("k1"), py::arg("k2"));

  py::class_<FaddeevGreen>(m, "FaddeevGreen")
      .def(py::init([](cplx lambda, const py::object& e, double guard) {
             GreenConfig c;
             c.guard_band = guard;
             return FaddeevGreen(lambda, to_energy(e), c);
           }),
           py::arg("lambda_"), py::arg("energy") = -1.0, py::arg("guard_band") = 0.05)
      .def("g", &FaddeevGreen::g)
      .def("G", &FaddeevGreen::G)
      .def("region", [](const FaddeevGreen& g, cplx z) { return std::string(to_string(g.region(z))); })
      .def("g_many", [](const FaddeevGreen& g, const Eigen::VectorXcd& z) {
        Eigen::VectorXcd out(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = g.g(z(i));
        return out;
      });

  py::class_<DNMatrix>(m, "DNMatrix")
      .def_readonly("n_modes", &DNMatrix::n_modes)
      .def_readonly("entries", &DNMatrix::entries)
      .def("__call__", &DNMatrix::operator());

  m.def("dn_homogeneous", [](const py::object& e, int n) { return dn_homogeneous(to_energy(e), n); },
        py::arg("energy"), py::arg("n_modes") = 16);
  m.def("dn_radial", &dn_radial, py::arg("q"), py::arg("n_modes") = 16,
        "DN matrix of -Δ + q for radial q(r), by shooting.");
  m.def(
      "dn_fem",
      [](const std::function<cplx(cplx)>& q, int n, std::size_t triangles) {
        return assemble_dn(q, n, build_disk_mesh(rings_for_triangles(triangles)));
      },
      py::arg("q"), py::arg("n_modes") = 16, py::arg("triangles") = 260000,
      "FEM DN matrix of -Δ + q, q(z) complex.");
  m.def("add_noise", &add_noise, py::arg("dn"), py::arg("level"), py::arg("seed") = 1);

  py::class_<RadialProfile>(m, "RadialProfile")
      .def("value", &RadialProfile::value)
      .def("laplacian", &RadialProfile::laplacian)
      .def_readonly("offset", &RadialProfile::offset);
  m.def("case_potential", &case_potential);
  m.def("case_conductivity", &case_conductivity);
  m.def("validation_potential", &validation_potential);
  m.def("conductivity_potential", &conductivity_potential);

  m.def(
      "radial_scattering_ls",
      [](const std::function<double(double)>& q0, const std::vector<double>& radii, const py::object& e, int m_,
         double s) { return radial_scattering_ls(q0, radii, to_energy(e), m_, s); },
      py::arg("q0"), py::arg("radii"), py::arg("energy") = -1.0, py::arg("z_exponent") = 7,
      py::arg("z_half_width") = 2.1);

  m.def(
      "validate_green",
      [](const std::function<double(double)>& q0, const std::vector<double>& lambdas, const py::object& e, int m_,
         double dl) {
        std::vector<std::tuple<double, double, double, double>> out;
        for (const auto& p : validate_green(q0, lambdas, to_energy(e), m_, dl))
          out.emplace_back(p.lambda_abs, p.t, p.residual, p.mu_norm);
        return out;
      },
      py::arg("q0"), py::arg("lambda_abs"), py::arg("energy") = -1.0, py::arg("z_exponent") = 6,
      py::arg("d_lambda") = 1e-4, "Rows of (|lambda|, t, residual, mu_norm).");

  m.def(
      "scan_exceptional",
      [](const std::string& family, const std::vector<double>& alphas, const std::vector<double>& lambdas,
         const py::object& e, int m_, int threads, double blowup) {
        PotentialFamily f;
        f.kind = parse_potential_kind(family);
        ScanOptions o;
        o.z_exponent = m_;
        o.threads = threads;
        o.blowup_threshold = blowup;
        const Energy energy = to_energy(e);
        ScanResult r;
        {
          py::gil_scoped_release release;
          r = scan_exceptional(f, alphas, lambdas, energy, o);
        }
        return scan_to_dict(r);
      },
      py::arg("family"), py::arg("alphas"), py::arg("lambda_abs"), py::arg("energy") = -1.0,
      py::arg("z_exponent") = 8, py::arg("threads") = 1, py::arg("blowup") = 1e3);

  m.def("radial_relative_l2", &radial_relative_l2);
  m.def("sigma_from_radial_potential", &sigma_from_radial_potential, py::arg("r"), py::arg("q"),
        py::arg("boundary_value"));

  py::class_<DotScene>(m, "DotScene")
      .def(py::init<>())
      .def_static("standard", &DotScene::standard)
      .def_readwrite("mu_a", &DotScene::mu_a)
      .def_readwrite("mu_s", &DotScene::mu_s)
      .def_readwrite("anisotropy", &DotScene::anisotropy)
      .def_readwrite("omega", &DotScene::omega)
      .def_readwrite("c_medium", &DotScene::c_medium)
      .def("validate", &DotScene::validate)
      .def("diffusion", &DotScene::diffusion)
      .def("boundary_diffusion", &DotScene::boundary_diffusion)
      .def("energy", [](const DotScene& s) { return s.energy().value(); })
      .def("q0", &DotScene::q0);

  m.def(
      "dot_pipeline",
      [](const DotScene& scene, double noise, std::size_t triangles, double a, double b, double phi, bool use_omega) {
        DotOptions o;
        o.noise = noise;
        o.triangles = triangles;
        o.truncation = {a, b, phi, 1.05};
        o.use_omega = use_omega;
        DotReport r = [&] {
          py::gil_scoped_release release;
          return dot_pipeline(scene, o);
        }();
        py::dict d;
        d["energy"] = r.energy.value();
        d["d"] = r.d;
        d["relative_l2"] = r.relative_l2;
        d["z"] = r.reconstruction.z_nodes;
        std::vector<double> v;
        for (cplx x : r.reconstruction.values) v.push_back(x.real());
        d["diffusion"] = v;
        d["valid"] = r.reconstruction.valid;
        return d;
      },
      py::arg("scene"), py::arg("noise") = 0.0, py::arg("triangles") = 260000, py::arg("a") = 11.0,
      py::arg("b") = 13.0, py::arg("phi") = pi / 2, py::arg("use_omega") = true);
}
