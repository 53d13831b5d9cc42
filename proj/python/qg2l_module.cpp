#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qg2l/bounds.hpp"
#include "qg2l/config.hpp"
#include "qg2l/diagnostics.hpp"
#include "qg2l/jacobian.hpp"
#include "qg2l/linstab.hpp"
#include "qg2l/pv_inversion.hpp"
#include "qg2l/stepper.hpp"
#include "qg2l/version.hpp"

namespace py = pybind11;
using namespace qg2l;

namespace {

using carray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

SpectralField field_from_array(const carray& a, const Lattice& lat) {
  const int n = lat.modes_per_axis();
  if (a.ndim() != 2 || a.shape(0) != n || a.shape(1) != n)
    throw py::value_error("expected a (2K+1, 2K+1) complex array");
  SpectralField u(lat);
  std::copy(a.data(), a.data() + u.size(), u.data());
  return u;
}

carray array_from_field(const SpectralField& u) {
  const int n = u.lattice().modes_per_axis();
  carray a({n, n});
  std::copy(u.data(), u.data() + u.size(), a.mutable_data());
  return a;
}

ModelParams params_from_kwargs(double beta, double kappa_T, double kappa_M, double nu, double m,
                               double L) {
  ModelParams p{beta, kappa_T, kappa_M, nu, m, L};
  p.validate();
  return p;
}

py::dict ledger_dict(const ConstantsLedger& led) {
  py::dict d;
  d["C"] = led.C;
  d["C_lt"] = led.C_lt;
  d["M"] = led.M;
  d["C1"] = led.C1;
  d["C2"] = led.C2;
  d["C3"] = led.C3;
  d["C4"] = led.C4;
  d["C5"] = led.C5;
  d["C6"] = led.C6;
  d["C7"] = led.C7;
  d["gamma_bar"] = led.gamma_bar;
  d["rho_sq"] = led.rho_sq;
  d["zeta"] = led.zeta;
  d["B"] = led.B;
  d["d"] = led.d;
  d["d_fractal"] = led.d_fractal;
  d["computable"] = led.computable;
  d["flags"] = led.flags;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qg2l, mod) {
  mod.doc() = "two-layer quasi-geostrophic spectral core";
  mod.attr("__version__") = version;

  py::class_<Lattice>(mod, "Lattice")
      .def(py::init([](double L, int K, int N) { return wavenumber_lattice(L, K, N); }),
           py::arg("L"), py::arg("K"), py::arg("N") = 0)
      .def_readonly("L", &Lattice::L)
      .def_readonly("K", &Lattice::K)
      .def_readonly("N", &Lattice::N)
      .def("mu", &Lattice::mu)
      .def("__repr__", [](const Lattice& lat) {
        return "Lattice(L=" + std::to_string(lat.L) + ", K=" + std::to_string(lat.K) +
               ", N=" + std::to_string(lat.N) + ")";
      });

  mod.def(
      "invert_pv",
      [](const carray& q1, const carray& q2, const Lattice& lat) {
        const StreamPair s = invert_pv(field_from_array(q1, lat), field_from_array(q2, lat));
        return py::make_tuple(array_from_field(s.psi1), array_from_field(s.psi2));
      },
      py::arg("q1"), py::arg("q2"), py::arg("lattice"),
      "streamfunctions (psi1, psi2) from layer potential vorticities");

  mod.def(
      "pv_from_streamfunction",
      [](const carray& psi1, const carray& psi2, const Lattice& lat) {
        const auto [q1, q2] =
            pv_from_streamfunction(field_from_array(psi1, lat), field_from_array(psi2, lat));
        return py::make_tuple(array_from_field(q1), array_from_field(q2));
      },
      py::arg("psi1"), py::arg("psi2"), py::arg("lattice"));

  mod.def(
      "jacobian",
      [](const carray& psi, const carray& q, const Lattice& lat) {
        return array_from_field(jacobian(field_from_array(psi, lat), field_from_array(q, lat)));
      },
      py::arg("psi"), py::arg("q"), py::arg("lattice"), "dealiased J(psi, q)");

  mod.def(
      "sobolev_norm",
      [](const carray& u, const Lattice& lat, double s) {
        return sobolev_norm(field_from_array(u, lat), s);
      },
      py::arg("u"), py::arg("lattice"), py::arg("s") = 0.0);

  mod.def(
      "growth_rate",
      [](int k1, int k2, double beta, double kappa_T, double kappa_M, double nu, double m,
         double L) {
        return growth_rate(k1, k2, params_from_kwargs(beta, kappa_T, kappa_M, nu, m, L));
      },
      py::arg("k1"), py::arg("k2"), py::arg("beta"), py::arg("kappa_T"), py::arg("kappa_M"),
      py::arg("nu"), py::arg("m") = 3.0, py::arg("L") = 2.0 * pi);

  mod.def(
      "instability_scan",
      [](double beta, double kappa_T, double kappa_M, double nu, double m, double L, int K) {
        const ScanResult r =
            instability_scan(params_from_kwargs(beta, kappa_T, kappa_M, nu, m, L), K);
        py::list rows;
        for (const ScanRow& row : r.rows)
          rows.append(py::make_tuple(row.k1, row.k2, row.re_lambda_max, row.im_lambda_max));
        py::dict d;
        d["rows"] = rows;
        d["sigma_star"] = r.sigma_star;
        d["k_star"] = py::make_tuple(r.k1_star, r.k2_star);
        return d;
      },
      py::arg("beta"), py::arg("kappa_T"), py::arg("kappa_M"), py::arg("nu"), py::arg("m") = 3.0,
      py::arg("L") = 2.0 * pi, py::arg("K") = 16);

  mod.def(
      "constants_ledger",
      [](double beta, double kappa_T, double kappa_M, double nu, double m, double L, double C,
         double C_lt) {
        return ledger_dict(
            constants_ledger(params_from_kwargs(beta, kappa_T, kappa_M, nu, m, L), C, C_lt));
      },
      py::arg("beta"), py::arg("kappa_T"), py::arg("kappa_M"), py::arg("nu"), py::arg("m") = 3.0,
      py::arg("L") = 2.0 * pi, py::arg("C") = 1.0, py::arg("C_lt") = 1.0);

  mod.def(
      "build_background",
      [](double L, double m, double nu, double C) {
        const BackgroundShift bg = build_background(L, m, nu, C);
        py::dict d;
        d["M"] = bg.M;
        d["l2_sq"] = bg.l2_sq;
        d["h1_sq"] = bg.h1_sq;
        d["hm_sq"] = bg.hm_sq;
        return d;
      },
      py::arg("L"), py::arg("m"), py::arg("nu"), py::arg("C") = 1.0);

  mod.def(
      "run",
      [](const std::string& config_json) {
        const RunConfig cfg = parse_config(config_json);
        const Lattice lat = cfg.make_lattice();
        const LayerState q0 = initial_state(lat, cfg.model, cfg.stepper);
        const RunSummary sum = run(q0, cfg.model, lat, cfg.stepper);
        const std::size_t n = sum.records.size();
        py::array_t<double> t(n), E(n), W(n), h1(n);
        for (std::size_t i = 0; i < n; ++i) {
          t.mutable_at(i) = sum.records[i].t;
          E.mutable_at(i) = sum.records[i].E;
          W.mutable_at(i) = sum.records[i].W;
          h1.mutable_at(i) = sum.records[i].h1_q;
        }
        py::dict d;
        d["t"] = t;
        d["E"] = E;
        d["W"] = W;
        d["h1_q"] = h1;
        d["steps"] = sum.steps;
        d["sup_W"] = sum.sup_W;
        d["mean_W_final_third"] = sum.mean_W_final_third;
        d["blowup"] = sum.blowup.has_value();
        d["q1"] = array_from_field(sum.final_state.q1);
        d["q2"] = array_from_field(sum.final_state.q2);
        return d;
      },
      py::arg("config_json"),
      "integrate a run configuration (JSON text), in memory; returns diagnostics arrays");
}
