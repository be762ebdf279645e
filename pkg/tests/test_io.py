import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copreg.errors import ConfigError
from copreg.experiments import DgpSpec, simulate_dgp
from copreg.io import format_value, load_dataset, write_csv, write_dataset


@pytest.mark.parametrize("model,d", [("m1", 1), ("m3", 2)])
def test_round_trip(tmp_path, model, d):
    data = simulate_dgp(DgpSpec(model, 25, seed=1))
    path = write_dataset(tmp_path / "d.csv", data)
    back = load_dataset(path)
    assert np.array_equal(back, data) and back.shape[1] == d + 1


@settings(max_examples=100, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_format_round_trips(x):
    assert float(format_value(x)) == x


def test_format_specials():
    assert format_value(True) == "true" and format_value(np.False_) == "false"
    assert format_value(math.nan) == "nan" and format_value(-math.inf) == "-inf"
    assert format_value(np.int64(3)) == "3" and format_value(0.1) == "0.1"


def test_write_is_byte_stable(tmp_path):
    rows = [(0.1, 1 / 3, True), (2.0, math.nan, False)]
    a = write_csv(tmp_path / "a.csv", ["x", "y", "flag"], rows).read_bytes()
    b = write_csv(tmp_path / "sub" / "b.csv", ["x", "y", "flag"], rows).read_bytes()
    assert a == b == b"x,y,flag\n0.1,0.3333333333333333,true\n2.0,nan,false\n"


@pytest.mark.parametrize(
    "content,match",
    [
        ("", "empty"),
        ("a,b\n1,2\n", "header"),
        ("y,x1\n", "no data"),
        ("y,x1\n1.0,2.0\n3.0\n", ":3:"),
        ("y,x1,x2\n1,2,3\n1,x,3\n", ":3: non-numeric"),
        ("y,x1\n1,inf\n", "non-finite"),
    ],
)
def test_malformed(tmp_path, content, match):
    path = tmp_path / "bad.csv"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigError, match=match):
        load_dataset(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_dataset(tmp_path / "nope.csv")
