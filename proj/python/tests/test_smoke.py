"""Smoke tests for the python module."""

import json
import math

import pytest

import kokomesh as km


def symmetric_mesh():
    m = km.Mesh()
    m.quads = [km.Quad(-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0) for _ in range(4)]
    m.f = [0.0, 0.0, 0.0, 0.0]
    return m


def test_validate_and_classify_quad():
    ok, violated = km.validate(km.Quad(-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0))
    assert ok and violated == ""
    ok, violated = km.validate(km.Quad(1.0, 0.0, 0.0, -6.0))
    assert not ok and "|b+c-a-e|" in violated

    info = km.classify_quad(km.Quad(-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0))
    assert info["shape"] == "isogram" and not info["singular"] and info["reducible"]


def test_symmetric_anchor_traces_closed():
    rep = km.trace(symmetric_mesh(), samples=400, tol=1e-9)
    assert rep["flexible"]
    assert rep["closure_fraction"] >= 0.999

    sc = km.scalar_check(symmetric_mesh())
    assert sc["scalar"]

    assert km.classify_mesh(symmetric_mesh()) == "isogonal"


def test_constructors_and_verification():
    mesh = km.construct("isogonal", seed=3)
    assert mesh.class_tag == "isogonal"
    rep = km.trace(mesh, samples=400)
    assert rep["flexible"]
    assert km.gcd_check(mesh)

    const = km.construct("constant", seed=5, params={"j": 2})
    rep = km.trace(const, samples=400)
    assert rep["flexible"]
    assert any(fr["coordinate"] == 2 for fr in rep["frozen"])
    with pytest.raises(km.HypothesisViolated):
        km.gcd_check(const)


def test_construct_is_deterministic():
    a = km.to_json(km.construct("opposite", seed=11))
    b = km.to_json(km.construct("opposite", seed=11))
    assert a == b


def test_json_round_trip():
    mesh = km.construct("adjacent", seed=2, params={"system": 2})
    text = km.to_json(mesh)
    parsed = json.loads(text)
    assert len(parsed["quads"]) == 4 and len(parsed["f"]) == 4
    back = km.from_json(text)
    assert km.to_json(back) == text


def test_angle_round_trip():
    q = km.coeffs_from_angles(math.pi / 2, math.atan(0.75), math.atan(0.75), math.pi / 2)
    assert abs(q.a + 2.0 / 3.0) < 1e-12 and abs(q.e - 2.0 / 3.0) < 1e-12
    lam, gam, dlt, mu = km.recover_angles(q)
    assert abs(lam - math.pi / 2) < 1e-9 and abs(mu - math.pi / 2) < 1e-9


def test_half_angle():
    f = km.solve_half_angle(2.0)
    assert abs(2 * f / (1 - f * f) - 2.0) < 1e-12
    assert km.solve_half_angle(0.0, infinite=True) == 1.0


def test_normalize_moves_anti_quads():
    m = symmetric_mesh()
    m.quads = [km.Quad(0.0, 0.2, 0.3, 0.0)] + list(m.quads)[1:]
    n, rec = km.normalize(m)
    assert rec["flips"][0] == "y"
    assert abs(n.quads[0].a + 0.2) < 1e-15


def test_geometry_sweep(tmp_path):
    frame = km.linkage_frame(symmetric_mesh(), math.pi / 2)
    assert frame["residual"] < 1e-7
    written = km.sweep_obj(symmetric_mesh(), str(tmp_path), tau1=0.0, frames=8)
    assert written >= 6
    objs = list(tmp_path.glob("*.obj"))
    assert len(objs) == written
    head = objs[0].read_text().splitlines()
    assert sum(1 for line in head if line.startswith("v ")) == 12
