import json
import xml.etree.ElementTree as ET

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from cascade_jcm import output
from cascade_jcm.core import JcmParams, PopulationSeries, TimeGrid
from cascade_jcm.jcm import JcmCase, population_series

unit = st.floats(0.0, 1.0, allow_nan=False)


def _series(rows):
    arr = np.array(rows, dtype=float).reshape(-1, 4)
    return PopulationSeries(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])


@given(st.lists(st.tuples(st.floats(0, 1e6), unit, unit, unit), min_size=1, max_size=30))
def test_csv_round_trip_is_exact(rows):
    s = _series(rows)
    back = output.from_csv(output.to_csv(s))
    assert np.array_equal(back.as_array(), s.as_array())
    assert np.array_equal(back.times, s.times)


def test_csv_layout():
    s = population_series(JcmParams(0.1, 0.0, 1), JcmCase.CASE_IV, TimeGrid(0, 10, 5))
    text = output.to_csv(s)
    assert text.startswith("t,p_upper,p_middle,p_lower\n")
    assert "\r" not in text and text.endswith("\n")
    assert len(text.splitlines()) == 6


def test_clamping_only_at_emission():
    s = _series([[0.0, -1e-17, 0.5, 1 + 2e-16]])
    back = output.from_csv(output.to_csv(s))
    assert back.p_upper[0] == 0.0 and back.p_lower[0] == 1.0
    assert s.p_upper[0] < 0  # the source series is untouched


def test_json_round_trip():
    s = population_series(JcmParams(0.1, 0.0, 3), JcmCase.CASE_V, TimeGrid(0, 50, 17))
    params = {"command": "jcm-number", "g": 0.1, "n": 3}
    text = output.to_json(s, params)
    back, echoed = output.from_json(text)
    assert echoed == params
    assert np.array_equal(back.as_array(), output.clamped(s).as_array())
    assert sorted(json.loads(text)) == ["p_lower", "p_middle", "p_upper", "params", "t"]


def test_svg_structure():
    s = population_series(JcmParams(0.1, 0.0, 1), JcmCase.CASE_IV, TimeGrid(0, 100, 201))
    svg = output.to_svg(s, title="a < b & c")
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    lines = root.findall(f"{ns}polyline")
    assert len(lines) == 3
    dashes = [pl.get("stroke-dasharray") for pl in lines]
    assert dashes == [None, "8,5", "2,3"]
    assert all(len(pl.get("points").split()) == 201 for pl in lines)
    texts = "".join(t.text or "" for t in root.iter(f"{ns}text"))
    assert "upper" in texts and "middle" in texts and "lower" in texts
    assert "a < b & c" in texts


def test_svg_single_point():
    svg = output.to_svg(_series([[0.0, 0.0, 1.0, 0.0]]))
    ET.fromstring(svg)
