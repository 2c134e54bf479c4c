from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hierarchy_collapse.config import reset_limits

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def rationals(lo=-5, hi=5, max_denominator=12):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=max_denominator)


def open_unit(max_denominator=30):
    return st.fractions(min_value=0, max_value=1, max_denominator=max_denominator).filter(
        lambda v: 0 < v < 1
    )


def unit(max_denominator=12):
    return st.fractions(min_value=0, max_value=1, max_denominator=max_denominator)


@pytest.fixture(autouse=True)
def _fresh_limits():
    reset_limits()
    yield
    reset_limits()


F = Fraction
