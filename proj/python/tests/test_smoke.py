import json
import math
import os
import subprocess

import numpy as np
import pytest

import chernlab


def test_builtins_listed():
    assert set(chernlab.builtin_names()) == {"hopf_boothby", "flat_torus", "iwasawa", "conformal_torus"}


def test_boothby_scalar_curvature():
    for n in (2, 3):
        g = chernlab.Geometry(chernlab.builtin("hopf_boothby", n=n))
        for p in g.sample(20, seed=3):
            s, s_hat = g.scalar_curvatures(p)
            assert s == pytest.approx(n * (n - 1) / 4, abs=1e-12)
            assert s_hat == pytest.approx(s / n, abs=1e-12)
            assert g.pf_residual(p) < 1e-12


def test_curvature_array_shape_and_symmetry():
    g = chernlab.Geometry(chernlab.builtin("hopf_boothby", n=2))
    theta = g.curvature([0.6 + 0.1j, -0.2j])
    assert theta.shape == (2, 2, 2, 2)
    # Theta_{i jbar k lbar} = conj(Theta_{j ibar l kbar})
    assert np.allclose(theta, np.conj(theta.transpose(1, 0, 3, 2)), atol=1e-12)
    r1 = g.ricci([0.6 + 0.1j, -0.2j], kind=1)
    assert np.allclose(r1, np.einsum("ji,ijkl->kl", np.linalg.inv(g.metric([0.6 + 0.1j, -0.2j])), theta))


def test_iwasawa_is_chern_flat():
    g = chernlab.Geometry(chernlab.builtin("iwasawa", n=3))
    assert np.abs(g.curvature([0.3, 0.2 + 0.5j, 0.7])).max() < 1e-12


def test_classification():
    assert chernlab.classify(chernlab.builtin("hopf_boothby"), samples=30)["class"] == "positive"
    assert chernlab.classify(chernlab.builtin("iwasawa", n=3), samples=30)["class"] == "zero"
    bumped = chernlab.parse_spec(
        '{"dimension": 2, "metric": {"1,1": "1 + z1*conj(z1)", "2,2": "1"},'
        ' "domain": {"type": "torus", "periods": [1, 1, 1, 1]}}'
    )
    r = chernlab.classify(bumped, samples=30)
    assert r["class"] == "not-projectively-flat"
    assert r["integral_s_dV"] is None
    assert r["conditions"]["projectively_flat"]["verdict"] == "fails"


def test_boothby_degree_integral():
    r = chernlab.classify(chernlab.builtin("hopf_boothby"), samples=20)
    # s = 1/2 and det h = 16/|z|^4 on the shell 1/2 < |z| <= 1: 8 area(S^3) log 2.
    assert r["integral_s_dV"] == pytest.approx(8 * 2 * math.pi**2 * math.log(2), rel=1e-12)


def test_conformal_change_keeps_projective_flatness():
    spec = chernlab.builtin("flat_torus").conformal("0.2*(z1*conj(z2) + z2*conj(z1))")
    g = chernlab.Geometry(spec)
    assert all(g.pf_residual(p) < 1e-10 for p in g.sample(10))
    with pytest.raises(ValueError):
        chernlab.builtin("flat_torus").conformal("z1")


def test_errors():
    with pytest.raises(chernlab.ParseError):
        chernlab.parse_spec('{"dimension": 2, "metric": {"1,1": "1 +"}}')
    assert issubclass(chernlab.ParseError, ValueError)
    with pytest.raises(chernlab.ChartSingularity):
        chernlab.Geometry(chernlab.builtin("hopf_boothby")).curvature([0.0, 0.0])
    with pytest.raises(ValueError):
        chernlab.Geometry(chernlab.builtin("flat_torus")).curvature([0.1])


def test_spec_round_trip():
    spec = chernlab.builtin("conformal_torus")
    back = chernlab.parse_spec(spec.to_json())
    assert back.to_json() == spec.to_json()
    assert json.loads(spec.to_json())["dimension"] == 2


@pytest.mark.skipif("CHERNLAB_CLI" not in os.environ, reason="command-line tool not available")
def test_report_matches_cli():
    text = chernlab.analyze_report(chernlab.builtin("hopf_boothby"), points=12, seed=5)
    out = subprocess.run(
        [os.environ["CHERNLAB_CLI"], "analyze", "hopf_boothby", "--points", "12", "--seed", "5"],
        check=True, capture_output=True, text=True,
    ).stdout
    assert text == out
