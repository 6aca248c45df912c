import math

import numpy as np
import pytest

import qdel


def test_deletion_fidelity_is_half():
    rep = qdel.evaluate(0.3, 0.4, y=0.1, m1=0.6, m2=0.8j, beta_phase=1.0)
    assert rep["conventional"]["F2"]["numeric"] == pytest.approx(0.5, abs=1e-10)
    assert rep["conventional"]["Fc"]["numeric"] == pytest.approx(0.01, abs=1e-10)
    assert rep["inputs"]["lambda"] == 0.3


def test_gram_and_realize_round_trip():
    g = qdel.gram(0.25, 0.1)
    assert g.shape == (7, 7)
    assert np.allclose(np.diag(g).real, [1, 0.5, 0.5, 0.25, 0.25, 0.5, 0.5])
    vecs = qdel.realize(0.25, 0.1)
    names = ["A", "A0", "A1", "B0", "B1", "C0", "D0"]
    v = np.column_stack([vecs[n] for n in names])
    assert np.max(np.abs(v.conj().T @ v - g)) < 1e-12


def test_infeasible_raises():
    with pytest.raises(qdel.Infeasible):
        qdel.evaluate(0.4, 0.5, y=0.3)
    assert not qdel.check_feasible(0.4, 0.3)["feasible"]


def test_pipeline_matrices():
    r = qdel.run_pipeline(0.5, 1.0, transform=True)
    c = 1 / (2 * math.sqrt(2))
    assert np.allclose(r["rho1"], [[0.25, c], [c, 0.75]], atol=1e-12)
    assert r["rho3"].shape[0] == r["rho3"].shape[1]


def test_closed_forms_and_average():
    assert qdel.closed_F3(1.0, 0.0) == pytest.approx(0.25)
    assert qdel.closed_F4(0.3, 0.0, 0.5) == pytest.approx(0.75)
    avg = qdel.average_fidelity(lambda a2: qdel.closed_F1(a2, 0.0))
    assert avg == pytest.approx(2 / 3, abs=1e-9)


def test_classify():
    assert qdel.classify(0.5)["kind"] == "ideal"
    assert qdel.classify(0.2)["kind"] == "universal"


def test_sweep_and_limit():
    rows = qdel.sweep("lambda", 0.0, 0.49, 5, alpha2=0.3)
    assert len(rows) == 5
    assert all(abs(r["conventional"]["F2"]["numeric"] - 0.5) < 1e-10 for r in rows)
    lim = qdel.limit()
    assert lim["exact_matches_closed"]


def test_selftest_fault_injection():
    rep = qdel.selftest("transformer-swap")
    assert not rep["pass"]
    by_id = {c["id"]: c for c in rep["checks"]}
    assert by_id["1"]["pass"]
    assert not by_id["4a"]["pass"]
