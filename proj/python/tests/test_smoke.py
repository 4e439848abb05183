import cmath
import math

import numpy as np
import pytest

import kahlerflow as kf


def test_expression_kernel():
    e = kf.parse_expr("x + (1/2)*i*y^2")
    assert abs(e.evaluate({"x": 1.0, "y": 2.0}) - (1 + 2j)) < 1e-15
    d = e.differentiate("y")
    assert d.equivalent(kf.parse_expr("i*y"))
    assert kf.parse_expr("x*y - y*x").normalize().equivalent(kf.parse_expr("0"))
    with pytest.raises(kf.KahlerflowError):
        e.evaluate({"x": 1.0})


def test_linear_model_chart_value():
    sys = kf.linear_model(1j)
    sys.validate()
    ev = sys.evolve(order=8)
    # x + (tau0 + tau) y at tau0 = i, tau = 1: 1 + (i+1)*2 = 3 + 2i
    z = ev.chart(1.0 + 0j, {"x": 1.0, "y": 2.0})
    assert abs(z[0] - (3 + 2j)) < 1e-14
    assert ev.classify(0.5j, {"x": 0.3, "y": 0.4}) == "kahler"
    assert ev.classify(-1.0j, {"x": 0.3, "y": 0.4}) == "real"
    assert ev.classify(-1.5j, {"x": 0.3, "y": 0.4}) == "pseudo_kahler"


def test_quartic_closed_forms():
    sys = kf.quartic_model()
    ev = sys.evolve(order=12)
    t, x, y = 0.3, 0.7, -0.5
    z = ev.chart(t * 1j, {"x": x, "y": y})[0]
    want = cmath.exp(1j * t * x * y) * x + 1j * cmath.exp(-1j * t * x * y) * y
    assert abs(z - want) < 1e-10

    kappa = ev.kappa(t * 1j, {"x": x, "y": y})
    want_kappa = 0.5 * math.cos(2 * t * x * y) * (x * x + y * y) + t * x * x * y * y
    assert abs(kappa - want_kappa) < 1e-9

    ok, g, cls = ev.metric(t * 1j, {"x": x, "y": y})
    assert ok and cls == "kahler"
    inv_g = 2 * t * (x * x + y * y - 2 * x * y * math.sin(2 * t * x * y)) + 2 * math.cos(
        2 * t * x * y
    )
    assert abs(1.0 / g[0, 0].real - inv_g) < 1e-9

    report = ev.verify_potential(0.1j, [("x", -0.4, 0.4, 3), ("y", -0.4, 0.4, 3)])
    assert report["max_residual"] < 1e-5
    assert report["checked"] == 9


def test_geodesic_residuals():
    sys = kf.quartic_model()
    probe = kf.geodesic_probe(sys, [0.1], [("x", -0.4, 0.4, 3), ("y", -0.4, 0.4, 3)])
    probe.validate()
    res, ddot, grad = probe.geodesic_residual(0.1, {"x": 0.3, "y": -0.2})
    assert res < 1e-4
    assert abs(ddot - grad) == res
    assert probe.velocity_residual(0.1, {"x": 0.3, "y": -0.2}) < 1e-5


def test_blu_roundtrip_and_diagnostic():
    sys = kf.linear_model(1j)
    ev = sys.evolve(order=8)
    assert ev.diagram_check(1 + 1j, 0.1, [("x", -1, 1, 3), ("y", -1, 1, 3)]) < 1e-8
    with pytest.raises(kf.KahlerflowError):
        ev.blu_forward(-10j, 0.1, {"x": 0.5, "y": 0.25})


def test_separable_and_torus_models():
    sep = kf.separable_model("y^2/2 + y^4/12")
    sep.validate()
    ev = sep.evolve(order=6)
    # chart terminates: the evolved value is x + tau h'(y) + i y for any tau
    tau = 0.7 + 0.4j
    y0 = 0.8
    hprime = y0 + y0**3 / 3
    z = ev.chart(tau, {"x": 0.2, "y": y0})[0]
    assert abs(z - (0.2 + tau * hprime + 1j * y0)) < 1e-13

    tor = kf.torus_model("y^2/2")
    tor.validate()
    tv = tor.evolve(order=8)
    # kappa_tau = (1 + Im tau) y^2 for the quadratic Hamiltonian
    got = tv.kappa(0.3 + 0.5j, {"q": 0.4, "y": 1.2})
    assert abs(got - 1.5 * 1.2**2) < 1e-12


def test_tstark_identities():
    y = np.array([0.4, -0.3, 0.5])
    u = kf.su2_algebra(y)  # quadratic h: u(Y) = Y
    x = np.eye(2, dtype=complex)
    tau = 0.2 - 0.3j
    closed = kf.tstark_closed_form(x, u, tau, np.eye(2, dtype=complex))
    series = kf.tstark_lie_series(x, u, tau, np.eye(2, dtype=complex), 14)
    assert abs(closed - series) < 1e-8
    assert kf.tstark_potential_check(y, tau) < 1e-12
    assert kf.tstark_classification(y, -1j) == "real"
    assert abs(kf.tstark_kappa(y, 0.5j) - 2 * 1.5 * 0.5 * float(y @ y)) < 1e-13
