import json
import math
from decimal import Decimal

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzsweep.analytic import SineMode
from lzsweep.config import build_scenario, parse_sine_mode, parse_text, split_scan
from lzsweep.errors import InputError
from lzsweep.fileio import csv_text, fmt, json_text, matrix_text, parse_matrix, write_atomic
from lzsweep.sweep import Sinusoidal, Tabulated

BASE = """
name = demo
system.n = 2
system.couplings = 0.2   # shared
profile.kind = linear
profile.alpha = 0.05
grid.t0 = -10
grid.t1 = 10
grid.steps = 100
"""


def test_fmt_examples():
    assert fmt(0.5) == "0.500000000000"
    assert fmt(1.0) == "1.00000000000"
    assert fmt(-0.25) == "-0.250000000000"
    assert fmt(0.0) == fmt(-0.0) == "0.00000000000"
    assert fmt(math.nan) == ""
    assert fmt(123.4) == "123.400000000"
    assert fmt(1e-5) == "0.0000100000000000"
    assert fmt(2.5e13) == "25000000000000.0"
    assert "e" not in fmt(1e-30)


@settings(max_examples=300)
@given(x=st.floats(allow_nan=False, allow_infinity=False, min_value=-1e15, max_value=1e15))
def test_fmt_twelve_significant_digits(x):
    s = fmt(x)
    assert "e" not in s and "." in s
    if x == 0:
        return
    # the value parses back to x rounded to 12 significant digits
    ref = Decimal(x)
    assert Decimal(s) == Decimal(f"{x:.11e}")
    digits = s.lstrip("-").replace(".", "").lstrip("0")
    if abs(x) < 1e11:
        assert len(digits) == 12
    assert abs(Decimal(s) - ref) <= abs(ref) * Decimal("1e-11")


def test_csv_and_json_text():
    text = csv_text(["a", "b"], [[1.0, math.nan], [0.5, 2.0]])
    assert text == "a,b\n1.00000000000,\n0.500000000000,2.00000000000\n"
    assert json_text({"b": 1, "a": [1, 2]}) == json.dumps({"a": [1, 2], "b": 1}, indent=2) + "\n"


def test_write_atomic_replaces(tmp_path):
    target = tmp_path / "x.txt"
    write_atomic(target, "one\n")
    write_atomic(target, "two\n")
    assert target.read_bytes() == b"two\n"
    assert [p.name for p in tmp_path.iterdir()] == ["x.txt"]


def test_matrix_round_trip():
    m = np.array([[1 + 2j, -0.5], [0.25j, 3.0]])
    np.testing.assert_allclose(parse_matrix(matrix_text(m)), m, rtol=1e-11)
    for bad in ("", "2 2\n1,0 0,0\n", "1 2\n1,0\n", "1 1\n1;0\n", "x y\n"):
        with pytest.raises(InputError):
            parse_matrix(bad)


def test_parse_text_rules():
    cfg = parse_text(BASE)
    assert cfg["system.couplings"] == "0.2"
    with pytest.raises(InputError):
        parse_text("a = 1\na = 2\n")
    with pytest.raises(InputError):
        parse_text("just words\n")


def test_build_scenario_defaults():
    sc = build_scenario(parse_text(BASE))
    assert sc.name == "demo"
    assert sc.system.n == 2 and sc.grid.steps == 100
    assert sc.method.value == "rk4" and sc.initial_level == 0
    assert sc.outputs == ["trajectory"]
    assert sc.figure1b["mode"] is SineMode.ABS_RATE


def test_build_scenario_profiles():
    cfg = parse_text(BASE)
    cfg.update({"profile.kind": "sinusoidal", "profile.amplitude": "2", "profile.omega": "3"})
    del cfg["profile.alpha"]
    assert build_scenario(cfg).profile == Sinusoidal(2.0, 3.0)
    cfg.update({"profile.kind": "tabulated", "profile.t0": "-10", "profile.t1": "10",
                "profile.samples": "-1, 0, 1"})
    del cfg["profile.amplitude"], cfg["profile.omega"]
    assert isinstance(build_scenario(cfg).profile, Tabulated)


@pytest.mark.parametrize("key,value", [
    ("grid.steps", "-5"), ("grid.steps", "x"), ("grid.t1", "-20"), ("profile.kind", "cubic"),
    ("system.couplings", "0.1, 0.2"), ("system.couplings", "-0.1"), ("system.signs", "1, 2"),
    ("integrator.method", "euler"), ("integrator.drift_tol", "1e-12"), ("initial.level", "3"),
    ("initial.basis", "dressed"), ("outputs", "trajectory, movie"), ("bogus.key", "1"),
    ("system.hermiticity", "nope"), ("name", "a/b"), ("profile.alpha", "nan"),
])
def test_build_scenario_fails_fast(key, value):
    cfg = parse_text(BASE)
    cfg[key] = value
    with pytest.raises(InputError):
        build_scenario(cfg)


def test_midpoint_and_adiabatic_need_hermitian():
    cfg = parse_text(BASE)
    cfg["system.hermiticity"] = "paper_literal"
    build_scenario(cfg)
    with pytest.raises(InputError):
        build_scenario({**cfg, "integrator.method": "midpoint"})
    with pytest.raises(InputError):
        build_scenario({**cfg, "outputs": "adiabatic"})


def test_sine_mode_aliases():
    assert parse_sine_mode("abs") is SineMode.ABS_RATE
    assert parse_sine_mode(" Literal ") is SineMode.LITERAL_COS
    with pytest.raises(InputError):
        parse_sine_mode("sign")


def test_split_scan():
    cfg = parse_text("""
scenarios = b, a
defaults.grid.steps = 10
a.grid.steps = 20
b.profile.kind = linear
""")
    items = split_scan(cfg)
    assert [n for n, _ in items] == ["b", "a"]
    assert items[0][1]["grid.steps"] == "10" and items[1][1]["grid.steps"] == "20"
    assert items[1][1]["name"] == "a"
    for bad in ("scenarios = \n", "scenarios = a, a\n", "scenarios = a\nc.grid.steps = 1\n"):
        with pytest.raises(InputError):
            split_scan(parse_text(bad))
