import math

import numpy as np
import pytest

import bellopt


def test_multiport_table_is_normalized():
    s = bellopt.PhaseSettings([[0.0, 0.4, 1.1], [0.0, 2.0, 0.3]], [[0.0, 0.7, 0.2], [0.0, 1.5, 2.5]])
    t = bellopt.probability_table_multiport(s)
    arr = t.to_array()
    assert arr.shape == (2, 2, 3, 3)
    np.testing.assert_allclose(arr.sum(axis=(2, 3)), 1.0, atol=1e-12)
    np.testing.assert_allclose(arr.sum(axis=3), 1.0 / 3, atol=1e-10)
    assert t(1, 0, 2, 1) == pytest.approx(arr[1, 0, 2, 1])


def test_bell_multiport_is_unitary():
    u = bellopt.bell_multiport(5)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)


def test_chsh_threshold():
    s = bellopt.PhaseSettings([[0, 0], [0, math.pi / 2]], [[0, -math.pi / 4], [0, math.pi / 4]])
    t = bellopt.probability_table_multiport(s)
    res = bellopt.critical_noise_fraction(t)
    assert res.f_min == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-9)
    assert res.residual < 1e-8
    assert len(res.hidden) == 16
    assert bellopt.chsh_oracle_threshold(t) == pytest.approx(res.f_min, abs=1e-9)
    engine = bellopt.ThresholdEngine(2)
    assert engine.threshold(t) == pytest.approx(res.f_min, abs=1e-9)


def test_general_table_from_numpy_unitaries():
    u = bellopt.unitary_from_params(3, list(np.linspace(0.1, 0.8, 8)))
    t = bellopt.probability_table_general(u, u, u, u)
    assert t.normalization_defect() < 1e-12


def test_optimize_n3():
    r = bellopt.optimize("multiport", 3, restarts=5, seed=42)
    assert r.best_f == pytest.approx((11 - 6 * math.sqrt(3)) / 2, abs=1e-4)
    assert r.best_f == max(r.restart_bests)
    assert r.family == "multiport"
    t = bellopt.table_for_settings("multiport", 3, r.settings)
    assert bellopt.critical_noise_fraction(t).f_min == pytest.approx(r.best_f, abs=1e-7)


def test_records_round_trip_and_verify():
    r = bellopt.optimize("multiport", 2, restarts=3, seed=1)
    rec = bellopt.make_record(r, 0.5)
    assert rec.separability_bound == pytest.approx(2 / 3)
    for text in (bellopt.to_csv([rec]), bellopt.to_json([rec])):
        back = bellopt.parse_records(text)
        assert back == [rec]
    ok, lines = bellopt.verify_records([rec])
    assert ok and len(lines) == 1
    rec.f_max += 0.01
    ok, _ = bellopt.verify_records([rec])
    assert not ok


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        bellopt.bell_multiport(1)
    with pytest.raises(ValueError):
        bellopt.optimize("tritter", 3)
    with pytest.raises(IndexError):
        bellopt.ProbabilityTable.uniform(2)(0, 0, 2, 0)
