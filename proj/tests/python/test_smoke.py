import math

import numpy as np
import pytest

import fdpr


def line(n):
    return fdpr.generate_grid([-1.0], [1.0], [n])


def test_grid_geometry():
    nodes = line(11)
    assert len(nodes) == 11
    assert nodes.separation_radius == pytest.approx(0.1)
    assert nodes.fill_distance == pytest.approx(0.1)
    assert nodes.points.shape == (11, 1)
    square = fdpr.generate_grid([0.0, 0.0], [1.0, 1.0], [5, 5])
    assert square.dim == 2
    assert square.fill_distance == pytest.approx(math.sqrt(2) / 8)


@pytest.mark.parametrize("kind", ["mls", "l1-cold", "l1-warm", "l1-colgen"])
def test_reproduces_linear_polynomials(kind):
    nodes = fdpr.perturb(line(15), 0.3, 4)
    engine = fdpr.Engine(nodes, kind=kind, degree=2)
    pts = fdpr.uniform_grid([-1.0], [1.0], [57])
    samples = 1.0 - 2.0 * nodes.points[:, 0] + 0.5 * nodes.points[:, 0] ** 2
    exact = 1.0 - 2.0 * pts[:, 0] + 0.5 * pts[:, 0] ** 2
    assert np.max(np.abs(engine.approximate(samples, pts) - exact)) < 1e-9
    assert engine.reproduction_residual(pts, trials=5) < 1e-9


def test_lp_vertex_is_sparse():
    nodes = fdpr.generate_grid([0.0, 0.0], [1.0, 1.0], [6, 6])
    engine = fdpr.Engine(nodes, kind="l1-warm", degree=2, family="monomial")
    a = engine.coefficients(np.array([0.31, 0.77]))
    assert a.shape == (36,)
    assert np.count_nonzero(a) <= 6
    assert a.sum() == pytest.approx(1.0)


def test_shepard_lebesgue_is_one():
    nodes = fdpr.perturb(line(9), 0.3, 2)
    engine = fdpr.Engine(nodes, kind="shepard", degree=0)
    leb = engine.lebesgue(fdpr.uniform_grid([-1.0], [1.0], [101]))
    assert np.allclose(leb, 1.0, atol=1e-14)


def test_targets_and_franke():
    assert fdpr.franke(0.5, 0.5) == pytest.approx(0.3257620893, rel=1e-9)
    v = fdpr.target("sin-pi", np.array([[0.5], [1.0]]))
    assert v == pytest.approx([1.0, 0.0], abs=1e-15)


def test_theory_and_stability():
    k = fdpr.stability_bound(1.0, "exponential:nu=%r" % math.log(2), 1)
    assert k["K"] == pytest.approx(6.0, rel=1e-10)
    tc = fdpr.theory_constants(math.pi / 5, 1.0, 1)
    assert tc["C1"] == 2.0
    assert tc["C2"] == pytest.approx(38.9, rel=1e-2)
    with pytest.raises(fdpr.DivergentSeries):
        fdpr.stability_bound(1.0, "algebraic:k=1.5", 1)
    with pytest.raises(fdpr.UnsupportedAngle):
        fdpr.theory_constants(1.0, 1.0, 1)


def test_admissibility_and_errors():
    assert fdpr.admissibility("algebraic:k=6.2", 1, 1, "mls") == (True, pytest.approx(0.1))
    assert not fdpr.admissibility("algebraic:k=3.0", 1, 1, "l1")[0]
    with pytest.raises(ValueError):
        fdpr.Engine(line(5), kind="shepard", degree=1)
    with pytest.raises(fdpr.ConfigError):
        fdpr.run("command = converge\nnodes = 8\n")
    with pytest.raises(fdpr.AdmissibilityError):
        fdpr.run("command = converge\nweight = algebraic:k=5\nnodes = 8,16,32\n")


def test_run_matches_config_roundtrip():
    cfg = "command = lebesgue\nnodes = 5,9\ngrid = 41\nengine = l1-cold\n"
    out = fdpr.run(cfg)
    assert "N,h,q,delta,sup_error,lebesgue,slope_running" in out
    assert out == fdpr.run(fdpr.serialize_config(cfg))
