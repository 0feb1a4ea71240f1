import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from thetaframe.frame import CoeffGrid
from thetaframe.render import DEFAULT_GRAYS, RenderStyle, fmt, render_curve, render_grid

SVG = "{http://www.w3.org/2000/svg}"
MARKER = re.compile(r'<g transform="translate\(([^,]+),([^)]+)\) rotate\(-([^)]+)\)">')


def _grid(M=2, N=2, **sites):
    v = np.zeros((2 * M + 1, 2 * N + 1), dtype=complex)
    for key, val in sites.items():
        m, n = (int(x) for x in key[1:].replace("m", "-").split("_"))
        v[m + M, n + N] = val
    return CoeffGrid(M, N, v)


def _markers(svg):
    return MARKER.findall(svg)


def test_fmt():
    assert fmt(0.0) == "0"
    assert fmt(-0.0) == "0"
    assert fmt(1.0) == "1"
    assert fmt(123.4567891) == "123.457"
    assert fmt(1e-7) == "0.0000001"
    assert fmt(float("nan")) == "0"


def test_parses_as_svg():
    root = ET.fromstring(render_grid(_grid(s0_0=1.0)).encode())
    assert root.tag == SVG + "svg"
    assert root.find(f"{SVG}defs/{SVG}clipPath").get("id") == "lower"


def test_zero_grid_has_no_markers():
    svg = render_grid(CoeffGrid.zeros(3, 3))
    assert _markers(svg) == []
    # background cells are still there
    assert svg.count('<rect x=') == 2 + 49  # clip rect, background, cells


def test_unit_coefficient_marker():
    style = RenderStyle()
    svg = render_grid(_grid(s0_0=1.0), style)
    (x, y, deg), = _markers(svg)
    assert deg == "0"
    c = style.cell_px
    assert float(x) == pytest.approx(c + 2.5 * c)
    assert float(y) == pytest.approx(c + 2.5 * c)
    assert f'r="{fmt(0.5 * c)}"' in svg


def test_black_half_is_below_at_zero_phase():
    svg = render_grid(_grid(s0_0=1.0))
    rect = re.search(r'<clipPath[^>]*><rect x="([^"]+)" y="([^"]+)" width="([^"]+)" height="([^"]+)"', svg)
    # clip region runs from the centre downward (positive SVG y)
    assert float(rect.group(2)) == 0 and float(rect.group(4)) > 0
    assert 'fill="#000000" clip-path="url(#lower)"' in svg


@pytest.mark.parametrize("z, deg", [(1j, "90"), (-1, "180"), (-1j, "270"), (np.exp(0.25j * np.pi), "45")])
def test_phase_rotates_counterclockwise(z, deg):
    (_, _, got), = _markers(render_grid(_grid(s0_0=z)))
    assert got == deg


def test_marker_positions_follow_m_right_n_up():
    svg = render_grid(_grid(s1_0=1.0, s0_1=1.0))
    pts = {(float(x), float(y)) for x, y, _ in _markers(svg)}
    c = RenderStyle().cell_px
    o = c + 2.5 * c
    assert pts == {(o + c, o), (o, o - c)}


def test_deterministic():
    rng = np.random.default_rng(4)
    v = rng.normal(size=(5, 7)) + 1j * rng.normal(size=(5, 7))
    g = CoeffGrid(2, 3, v * 0.3)
    assert render_grid(g) == render_grid(CoeffGrid(2, 3, v * 0.3))


def test_global_phase_rotates_every_marker():
    rng = np.random.default_rng(5)
    v = 0.3 * (rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)))
    a = _markers(render_grid(CoeffGrid(2, 2, v)))
    b = _markers(render_grid(CoeffGrid(2, 2, v * 1j)))
    assert len(a) == len(b) == 25
    for (xa, ya, da), (xb, yb, db) in zip(a, b):
        assert (xa, ya) == (xb, yb)
        assert (float(db) - float(da)) % 360 == pytest.approx(90, abs=2e-3)


def test_marker_count_matches_floor():
    v = np.array([[0, 5e-5, 2e-4], [1e-4, 0.3, 0], [1e-5, 0, 1]], dtype=complex)
    assert len(_markers(render_grid(CoeffGrid(1, 1, v)))) == 4


def test_floor_is_not_scaled_by_magnify():
    v = np.array([[0, 5e-5, 0], [0, 0.3, 0], [0, 0, 0]], dtype=complex)
    assert len(_markers(render_grid(CoeffGrid(1, 1, v), RenderStyle(magnify=1000)))) == 1


def test_clipping_warning():
    svg = render_grid(_grid(s0_0=3.0))
    assert "WARNING: 1 marker(s) clipped" in svg
    assert f'r="{fmt(RenderStyle().cell_px)}"' in svg
    assert "WARNING" not in render_grid(_grid(s0_0=1.0))


def test_magnify_changes_only_radii():
    g = _grid(s0_0=0.9, s1_1=0.01j, sm1_2=-0.002)
    a = ET.fromstring(render_grid(g).encode())
    b = ET.fromstring(render_grid(g, RenderStyle(magnify=30)).encode())
    ea, eb = list(a.iter()), list(b.iter())
    assert len(ea) == len(eb)
    changed = 0
    for x, y in zip(ea, eb):
        assert x.tag == y.tag
        assert (x.text or "").strip() == (y.text or "").strip()
        ax = {k: v for k, v in x.attrib.items() if k != "r"}
        ay = {k: v for k, v in y.attrib.items() if k != "r"}
        assert ax == ay
        changed += x.get("r") != y.get("r")
    assert changed > 0


def test_gray_levels_distinct_and_by_parity():
    svg = render_grid(CoeffGrid.zeros(1, 1))
    fills = re.findall(r'<rect x="[^"]+" y="[^"]+" width="40" height="40" fill="(#[0-9a-f]{6})"/>', svg)
    assert len(fills) == 9
    assert len(set(fills)) == 4
    # (m, n) = (-1, -1), (-1, 0), ... row-major; m=-1 is odd
    assert fills[4] == "#%02x%02x%02x" % ((round(255 * DEFAULT_GRAYS[(0, 0)]),) * 3)


def test_style_validation():
    with pytest.raises(ValueError, match="distinct"):
        RenderStyle(grayscale={(0, 0): .9, (0, 1): .9, (1, 0): .7, (1, 1): .6})
    with pytest.raises(ValueError):
        RenderStyle(cell_px=0)
    with pytest.raises(ValueError):
        RenderStyle(magnify=-1)


def test_metadata_comments():
    svg = render_grid(_grid(s0_0=1.0), meta={"command": "thetaframe plot --coeffs x.json"})
    assert "M=2 N=2" in svg
    assert "<!-- command: thetaframe plot - -coeffs x.json -->" in svg
    ET.fromstring(svg.encode())


def test_curve_two_points_one_segment():
    svg = render_curve([(0, 0), (1, -10)])
    assert svg.count("<polyline") == 1
    pts = re.search(r'points="([^"]+)"', svg).group(1).split()
    assert len(pts) == 2


def test_curve_gap_at_neg_inf():
    svg = render_curve([(0, 0), (1, -1), (2, -np.inf), (3, -2), (4, -3)])
    assert svg.count("<polyline") == 2


def test_curve_y_min_clamps():
    svg = render_curve([(0, 0), (1, -500)], y_min=-200)
    assert "y=[-200,0]" in svg


def test_curve_overlays_dashed():
    svg = render_curve([(0, 0), (1, -1)], overlays={"gaussian": [(0, 0), (1, -2)], "approx2": [(0, 0), (1, -3)]})
    main = re.search(r'<g id="main">\s*<polyline[^>]*>', svg).group(0)
    assert "stroke-dasharray" not in main
    dashes = re.findall(r'stroke-dasharray="([^"]+)"', svg)
    assert len(dashes) == 2 and len(set(dashes)) == 2
    ET.fromstring(svg.encode())


def test_curve_needs_two_points():
    with pytest.raises(ValueError):
        render_curve([(0, 0), (1, -np.inf)])
