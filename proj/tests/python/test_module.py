import math

import jsonschema
import pytest

import morsecone as mc


def test_critical_exponent():
    assert mc.critical_exponent(3) == pytest.approx(5.0)


def test_lane_emden_solution():
    s = mc.solve_lane_emden(3, 3.0)
    assert s.peak == pytest.approx(6.8968486193827525, rel=1e-9)
    assert abs(s.value(1.0)) < 1e-10
    assert len(s.r) == 4096
    assert mc.ode_residual(s) < 1e-7


def test_singular_spectrum_document(schemas):
    doc = mc.singular_spectrum(3, 3.0)
    jsonschema.validate(doc, schemas["singular_spectrum"])
    assert doc["radial_morse_index"] == 1
    assert doc["eigenvalues"][0]["value"] == pytest.approx(-1.8024279913, abs=1e-9)


def test_cap_spectrum_half_sphere(schemas):
    doc = mc.cap_spectrum(4, math.pi / 2, 4.0)
    jsonschema.validate(doc, schemas["cap_spectrum"])
    first = doc["entries"][1]
    assert first["lambda"] == pytest.approx(3.0, abs=1e-8)
    assert first["multiplicity"] == 3


def test_morse_and_bubble(schemas):
    cap = mc.cap_spectrum(3, 2 * math.pi / 3, 4.0)
    report = mc.morse_report(3, 3.0, cap)
    jsonschema.validate(report, schemas["morse_report"])
    assert report["m"] == report["formula_m"] == 3
    assert mc.bubble_morse(3, cap) == 3
    counts = mc.count_equality(3, 3.0, 2 * math.pi / 3)
    assert counts["equal"]


def test_threshold(schemas):
    cap = mc.cap_spectrum(3, 2 * math.pi / 3, 2.0)
    result = mc.threshold(3, cap, tol=1e-4, jobs=2)
    jsonschema.validate(result, schemas["threshold_result"])
    assert result["status"] == "threshold-found"
    assert result["p0"] == pytest.approx(2.528145, abs=1e-4)


def test_bubble_and_eta():
    for n in (3, 4, 5):
        assert abs(mc.bubble_residual(n, 1.0, 0.7)) < 1e-10
        assert abs(mc.eta_residual(n, 0.7)) < 1e-8
        assert mc.eta_rayleigh_quotient(n) == pytest.approx(-(n - 1), abs=1e-6)
    assert mc.q_u_on_bubble(3, math.pi / 2) == pytest.approx(-math.pi**2 * 3**1.5 / 2, rel=1e-9)


def test_errors_name_their_class():
    with pytest.raises(mc.MorseconeError, match="InvalidArgument"):
        mc.solve_lane_emden(3, 5.5)
    with pytest.raises(mc.MorseconeError, match="SpectrumFormat"):
        mc.bubble_morse(3, '{"N": 3, "entries": [{"lambda": 1, "multiplicity": 1}]}')
