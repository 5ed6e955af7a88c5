import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from s3flat.verify import Check, VerificationReport, angle_gap, verify_helicoidal, verify_theorem1


@given(st.floats(-50, 50), st.integers(-5, 5), st.floats(-1, 1))
def test_angle_gap_ignores_full_turns(x, k, d):
    assert angle_gap(x + 2 * np.pi * k + d, x) == pytest.approx(abs(d), abs=1e-9)


def test_non_finite_residual_fails_and_serializes():
    c = Check("k", float("nan"), 1.0)
    assert not c.passed
    rep = VerificationReport("t", {}, [c])
    assert json.loads(rep.to_json())["checks"][0]["max_abs_residual"] == "nan"


def test_suite_reports_singular_points():
    rep = verify_theorem1(2.0, 3.0)
    assert rep.passed
    assert "singular" in rep.check("flatness").detail


@pytest.mark.parametrize("scale,passed", [(1.0, True), (1.2, False), (0.9, False)])
def test_helicoidal_control(scale, passed):
    rep = verify_helicoidal(5.0, 35.0, math.pi / 4, scale)
    assert rep.passed is passed
    assert rep.failed == ([] if passed else ["profile_arc_length"])
