import math

import pytest

import aniso_emit as ae


def test_isotropic_rate_is_the_index():
    r = ae.rate_numeric([4.0, 4.0, 4.0], [1.0, 2.0, 2.0])
    assert r["gamma_normalized"] == pytest.approx(2.0, rel=1e-10)
    assert r["method"] == "quadrature"
    assert sum(g for _, g in r["branches"]) == pytest.approx(r["gamma_normalized"], rel=1e-14)
    assert r["quadrature"]["est_rel_error"] < 1e-10


def test_uniaxial_closed_form():
    assert ae.rate_uniaxial(7.0, 1.0, 0.0)["gamma_normalized"] == pytest.approx(1.0, rel=1e-15)
    assert ae.rate_numeric([7.0, 1.0, 1.0], [1.0, 0.0, 0.0])["gamma_normalized"] == pytest.approx(1.0, rel=1e-8)
    assert ae.random_orientation_rate(1.0, 4.0) == pytest.approx(1.75, rel=1e-15)


def test_interpolation_model():
    b = ae.interp_breakdown([1.5, 3.0, 5.0])
    assert b["gamma_model"] == pytest.approx(1.5061034949221839, rel=1e-15)
    assert b["gamma_a"] == pytest.approx(math.sqrt(1.5), rel=1e-15)
    numeric = ae.rate_numeric([1.5, 3.0, 5.0])["gamma_normalized"]
    assert abs(b["gamma_model"] - numeric) / numeric < 0.02


def test_modes_and_routes():
    modes = ae.solve_modes([2.0, 3.0, 4.0], [1.0, 1.0, 1.0])
    assert modes[0][0] == pytest.approx(36.0 / (13.0 - math.sqrt(7.0)), rel=1e-14)
    assert ae.completeness_defect([2.0, 3.0, 4.0], [0.0, 0.0, 1.0]) < 1e-12
    g = ae.greens_rate([2.0, 3.0, 4.0], [1.0, 0.0, 0.0])
    f = ae.rate_numeric([2.0, 3.0, 4.0], [1.0, 0.0, 0.0])["gamma_normalized"]
    assert abs(g - f) / f < 1e-9


def test_angular_and_peaks():
    assert ae.angular_distribution(1.0, 1.0, math.pi / 2) == pytest.approx(1.0)
    low, high = ae.peak_emission_angles(1.0, 7.0)
    assert low + high == pytest.approx(math.pi, rel=1e-14)


def test_local_field():
    r = ae.rate_local_field([7.0, 1.0, 1.0], [1.0, 0.0, 0.0], [1.2, 1.0, 1.0])
    assert r["gamma_normalized"] == pytest.approx(1.44, rel=1e-8)


def test_errors():
    with pytest.raises(ValueError):
        ae.rate_numeric([0.0, 1.0, 1.0])
    with pytest.raises(ae.ToleranceNotReached):
        ae.rate_numeric([1.5, 3.0, 5.0], max_order=64)


def test_cli_in_process():
    code, out, _ = ae.run_cli(["angular", "--eps", "1,7,7", "--samples", "5"])
    assert code == 0
    assert out.splitlines()[0] == "theta_rad,f_theta"
    assert len(out.splitlines()) == 6
    code, _, err = ae.run_cli(["rate", "--eps", "1,2,3", "--method", "closed"])
    assert code == 2
    assert "error" in err
