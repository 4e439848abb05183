#include <memory>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kahlerflow/blu.hpp"
#include "kahlerflow/geodesic.hpp"
#include "kahlerflow/models.hpp"
#include "kahlerflow/potential.hpp"
#include "kahlerflow/tstark.hpp"

namespace py = pybind11;
using namespace kahlerflow;

namespace {

Point to_point(const std::map<std::string, Complex>& values) {
    Point p;
    for (const auto& [k, v] : values) p.set(k, v);
    return p;
}

std::map<std::string, Complex> from_point(const Point& p) { return p.values(); }

GridSpec to_grid(const std::vector<std::tuple<std::string, double, double, int>>& axes) {
    GridSpec g;
    for (const auto& [name, lo, hi, count] : axes) g.axes.push_back({name, lo, hi, count});
    g.validate();
    return g;
}

struct SystemHandle {
    std::shared_ptr<HamSystem> sys;
};

struct EvolvedHandle {
    std::shared_ptr<HamSystem> sys;
    std::shared_ptr<EvolvedStructure> es;
    std::shared_ptr<PotentialFlow> pf;
};

struct ProbeHandle {
    std::shared_ptr<HamSystem> sys;
    std::shared_ptr<GeodesicProbe> probe;
};

EvolvedHandle evolve_handle(const SystemHandle& s, int order) {
    return {s.sys, std::make_shared<EvolvedStructure>(*s.sys, order),
            std::make_shared<PotentialFlow>(*s.sys, order)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "complex-time Hamiltonian flows acting on Kahler structures";

    py::register_exception<Error>(m, "KahlerflowError");

    py::class_<Expr>(m, "Expr")
        .def("__repr__", [](const Expr& e) { return e.str(); })
        .def("differentiate",
             [](const Expr& e, const std::string& coord) { return differentiate(e, coord); })
        .def("substitute",
             [](const Expr& e, const std::map<std::string, Expr>& b) { return substitute(e, b); })
        .def("evaluate",
             [](const Expr& e, const std::map<std::string, Complex>& p) {
                 return evaluate(e, to_point(p));
             })
        .def("normalize", [](const Expr& e) { return normalize(e); })
        .def("equivalent", [](const Expr& a, const Expr& b) { return equivalent(a, b); });
    m.def("parse_expr", &parse_expr, "parse the infix expression syntax");

    py::class_<SystemHandle>(m, "System")
        .def_property_readonly("coords", [](const SystemHandle& s) { return s.sys->coords(); })
        .def_property_readonly("n", [](const SystemHandle& s) { return s.sys->n(); })
        .def("validate", [](const SystemHandle& s, double tol) { s.sys->validate(tol); },
             py::arg("tol") = 1e-10)
        .def("evolve", &evolve_handle, py::arg("order") = 12)
        .def("hamiltonian",
             [](const SystemHandle& s, const std::map<std::string, Complex>& p) {
                 return evaluate(s.sys->h, to_point(p));
             })
        .def("kappa0", [](const SystemHandle& s, const std::map<std::string, Complex>& p) {
            return evaluate(s.sys->kappa0, to_point(p)).real();
        });

    m.def("linear_model",
          [](Complex tau0) {
              return SystemHandle{std::make_shared<HamSystem>(linear_model(RationalComplex(tau0)))};
          },
          py::arg("tau0") = Complex(0, 1));
    m.def("quartic_model",
          [] { return SystemHandle{std::make_shared<HamSystem>(quartic_model())}; });
    m.def("separable_model", [](const std::string& h) {
        return SystemHandle{std::make_shared<HamSystem>(separable_model(parse_expr(h)))};
    });
    m.def("torus_model", [](const std::string& h) {
        return SystemHandle{std::make_shared<HamSystem>(torus_model(parse_expr(h)))};
    });
    m.def("standard_system", [](int n, const std::string& h,
                                const std::vector<std::tuple<std::string, double, double, int>>& axes) {
        return SystemHandle{std::make_shared<HamSystem>(standard_system(n, parse_expr(h), to_grid(axes)))};
    });

    py::class_<EvolvedHandle>(m, "Evolved")
        .def("chart",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 Eigen::VectorXcd v = h.es->chart_value(tau, to_point(p));
                 return std::vector<Complex>(v.data(), v.data() + v.size());
             })
        .def("classify",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 return to_string(classify(*h.es, tau, to_point(p)).tag);
             })
        .def("metric",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 HermitianMetric m = metric_at(*h.es, tau, to_point(p));
                 return py::make_tuple(m.valid, m.valid ? py::cast(m.g) : py::none(),
                                       to_string(m.cls.tag));
             })
        .def("riemannian_metric",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 return riemannian_metric_at(*h.es, tau, to_point(p));
             })
        .def("kappa",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 return h.pf->kappa(tau, to_point(p));
             })
        .def("psi",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 return h.pf->psi_value(tau, to_point(p));
             })
        .def("prequantum_section",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 return std::exp(Complex(0, 1) * h.pf->psi_value(tau, to_point(p)));
             })
        .def("canonical_form",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 CanonicalForm c = evolve_canonical_form(*h.es, tau, to_point(p));
                 return py::make_tuple(
                     std::vector<Complex>(c.coeffs.data(), c.coeffs.data() + c.coeffs.size()),
                     c.holomorphic_det);
             })
        .def("flow_forward",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 return from_point(flow_forward(*h.es, tau, to_point(p)));
             })
        .def("flow_inverse",
             [](const EvolvedHandle& h, Complex tau, const std::map<std::string, Complex>& p) {
                 return from_point(flow_inverse(*h.es, tau, to_point(p)));
             })
        .def("radius_estimate",
             [](const EvolvedHandle& h, int i, const std::map<std::string, Complex>& p) {
                 return estimate_radius(h.es->chart_series(i), to_point(p));
             })
        .def("verify_potential",
             [](const EvolvedHandle& h, Complex tau,
                const std::vector<std::tuple<std::string, double, double, int>>& axes,
                double fd_step) {
                 PotentialVerification v =
                     verify_potential(*h.sys, *h.es, tau, to_grid(axes), fd_step);
                 py::dict out;
                 out["max_residual"] = v.max_residual;
                 out["checked"] = v.checked;
                 out["skipped"] = v.skipped;
                 return out;
             },
             py::arg("tau"), py::arg("grid"), py::arg("fd_step") = 1e-3)
        .def("cocycle_check",
             [](const EvolvedHandle& h, Complex tau, double s,
                const std::vector<std::tuple<std::string, double, double, int>>& axes) {
                 return real_time_cocycle_check(*h.sys, h.es->order(), tau, s, to_grid(axes));
             })
        .def("blu_forward",
             [](const EvolvedHandle& h, Complex tau, double t,
                const std::map<std::string, Complex>& p, double ode_tol) {
                 FlowOptions opts;
                 opts.tol = ode_tol;
                 return from_point(blu_forward(*h.es, tau, t, to_point(p), opts));
             },
             py::arg("tau"), py::arg("t"), py::arg("point"), py::arg("ode_tol") = 1e-10)
        .def("varphi_via_pi0",
             [](const EvolvedHandle& h, Complex tau, double t,
                const std::map<std::string, Complex>& p, double ode_tol) {
                 FlowOptions opts;
                 opts.tol = ode_tol;
                 return from_point(varphi_via_pi0(*h.es, tau, t, to_point(p), opts));
             },
             py::arg("tau"), py::arg("t"), py::arg("point"), py::arg("ode_tol") = 1e-10)
        .def("diagram_check",
             [](const EvolvedHandle& h, Complex tau, double t,
                const std::vector<std::tuple<std::string, double, double, int>>& axes,
                double ode_tol) {
                 FlowOptions opts;
                 opts.tol = ode_tol;
                 return diagram_check(*h.es, tau, t, to_grid(axes), opts);
             },
             py::arg("tau"), py::arg("t"), py::arg("grid"), py::arg("ode_tol") = 1e-10);

    py::class_<ProbeHandle>(m, "GeodesicProbe")
        .def("validate", [](const ProbeHandle& h) { h.probe->validate(); })
        .def("path_value",
             [](const ProbeHandle& h, double t, const std::map<std::string, Complex>& q) {
                 return mabuchi_path_value(*h.probe, t, to_point(q));
             })
        .def("velocity_residual",
             [](const ProbeHandle& h, double t, const std::map<std::string, Complex>& q) {
                 return velocity_check(*h.probe, t, to_point(q));
             })
        .def("geodesic_residual",
             [](const ProbeHandle& h, double t, const std::map<std::string, Complex>& q) {
                 GeodesicResidual r = geodesic_residual(*h.probe, t, to_point(q));
                 return py::make_tuple(r.residual, r.ddot_phi, r.grad_term);
             })
        .def("refinement",
             [](const ProbeHandle& h, double t, const std::map<std::string, Complex>& q) {
                 RefinementReport r = geodesic_refinement(*h.probe, t, to_point(q));
                 return py::make_tuple(r.coarse, r.fine, r.observed_order);
             });
    m.def("geodesic_probe",
          [](const SystemHandle& s, const std::vector<double>& ts,
             const std::vector<std::tuple<std::string, double, double, int>>& axes, int order,
             double dt, double dx) {
              return ProbeHandle{
                  s.sys, std::make_shared<GeodesicProbe>(*s.sys, ts, to_grid(axes), order, dt, dx)};
          },
          py::arg("system"), py::arg("t_samples"), py::arg("grid"), py::arg("order") = 12,
          py::arg("dt") = 1e-3, py::arg("dx") = 1e-3);

    // cotangent bundle of a compact group: closed form vs Lie series
    m.def("su2_algebra",
          [](const Eigen::VectorXd& u) -> Eigen::MatrixXcd {
              if (u.size() != 3) throw Error("su2_algebra expects 3 coordinates");
              return Su2Rep::algebra(Eigen::Vector3d(u(0), u(1), u(2)));
          },
          "representation matrix of algebra coordinates");
    m.def("expm", &expm);
    m.def("tstark_closed_form", &tstark_closed_form);
    m.def("tstark_lie_series", &tstark_lie_series);
    m.def("tstark_kappa", [](const Eigen::VectorXd& y, Complex tau) {
        return tstark_kappa(quadratic_algebra_hamiltonian(), y, tau);
    });
    m.def("tstark_potential_check", [](const Eigen::VectorXd& y, Complex tau) {
        return tstark_potential_check(quadratic_algebra_hamiltonian(), y, tau);
    });
    m.def("tstark_classification", [](const Eigen::VectorXd& y, Complex tau) {
        return to_string(tstark_classification(quadratic_algebra_hamiltonian(), y, tau));
    });
}
