import math
import warnings

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial.hermite import hermval

from thetaframe import (QuadratureSpec, SampledSignal, SignalSpec, atom_mn, default_grid, displace,
                        fourier_transform, hermite_fn, hermite_poly, modulate, parse_signal_spec,
                        sample, translate)
from thetaframe.signals import EdgeDecayWarning, read_signal_csv, write_signal_csv

SQRT_PI = math.sqrt(math.pi)


# -- Hermite family ----------------------------------------------------------

def test_hermite_poly_small_cases():
    assert hermite_poly(0, 3.3) == 1.0
    assert hermite_poly(2, 1.5) == 7.0
    assert hermite_poly(5, 0.0) == 0.0


@pytest.mark.parametrize("l", range(0, 9))
def test_hermite_poly_rodrigues(l):
    x = sympy.Symbol("x")
    rod = sympy.expand(sympy.simplify((-1) ** l * sympy.exp(x ** 2) * sympy.diff(sympy.exp(-x ** 2), x, l)))
    f = sympy.lambdify(x, rod, "numpy")
    t = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(hermite_poly(l, t), f(t) * np.ones_like(t), rtol=1e-12, atol=1e-9)


@pytest.mark.parametrize("l", [0, 1, 7, 20, 40])
def test_hermite_poly_vs_numpy(l):
    t = np.linspace(-2, 2, 17)
    c = np.zeros(l + 1)
    c[l] = 1
    np.testing.assert_allclose(hermite_poly(l, t), hermval(t, c), rtol=1e-10, atol=1e-10 * abs(hermval(2, c)))


def test_hermite_fn_values():
    assert hermite_fn(0, 0.0) == pytest.approx(math.pi ** -0.25, abs=1e-12)
    assert hermite_fn(1, 0.0) == 0.0


@pytest.mark.parametrize("l", [0, 1, 2, 3, 5, 10])
def test_hermite_fn_matches_factorial_formula(l):
    t = np.linspace(-4, 4, 33)
    ref = hermite_poly(l, t) * np.exp(-t * t / 2) / math.sqrt(math.factorial(l) * 2 ** l * math.sqrt(math.pi))
    np.testing.assert_allclose(hermite_fn(l, t), ref, rtol=1e-12, atol=1e-15)


def test_hermite_fn_high_order_no_overflow():
    t = np.linspace(-16, 16, 4001)
    v = hermite_fn(60, t)
    assert np.all(np.isfinite(v))
    assert (t[1] - t[0]) * np.sum(v * v) == pytest.approx(1, abs=1e-8)


def test_hermite_order_range():
    with pytest.raises(ValueError):
        hermite_fn(61, 0.0)
    with pytest.raises(ValueError):
        hermite_poly(-1, 0.0)


def test_hermite_fn3_unit_norm(grid):
    v = hermite_fn(3, grid.t)
    assert abs(grid.dt * np.sum(v * v) - 1) < 1e-10


def test_hermite_gram(grid):
    U = np.array([hermite_fn(l, grid.t) for l in range(7)])
    G = grid.dt * U @ U.T
    assert np.max(np.abs(G - np.eye(7))) < 1e-9


@pytest.mark.parametrize("l", range(7))
def test_hermite_parity(grid, l):
    f = sample(f"hermite:{l}", grid).samples
    assert np.max(np.abs(f[::-1] - (-1) ** l * f)) < 1e-12


@pytest.mark.parametrize("l", range(7))
def test_fourier_eigenrelation(grid, l):
    f = sample(f"hermite:{l}", grid)
    assert fourier_transform(f).distance(f * (-1j) ** l) < 1e-8


# -- sampling ----------------------------------------------------------------

def test_gaussian_is_hermite0(grid):
    assert np.array_equal(sample("gaussian", grid).samples, sample("hermite:0", grid).samples)


def test_monocycle_is_hermite1(grid):
    assert np.array_equal(sample("monocycle", grid).samples, sample("hermite:1", grid).samples)


def test_diff_is_unit_energy(grid):
    assert abs(sample("diff:atom,gaussian", grid).energy() - 1) < 1e-10


def test_diff_direction(grid):
    d = sample("diff:atom,gaussian", grid)
    raw = sample("atom", grid) - sample("gaussian", grid)
    assert d.inner(raw) == pytest.approx(raw.norm(), rel=1e-12)


def test_displaced_sample(w, grid):
    xi, eta = 0.3, -1.1
    f = sample(SignalSpec("displaced", (xi, eta)), grid, w)
    expected = np.exp(1j * eta * (grid.t + xi / 2)) * w(grid.t + xi)
    np.testing.assert_allclose(f.samples, expected, atol=1e-15)


@pytest.mark.parametrize("text, kind, params", [
    ("atom", "atom", ()),
    ("hermite:4", "hermite", (4,)),
    ("displaced:0.5,-1", "displaced", (0.5, -1.0)),
    ("file:/tmp/x.csv", "file", ("/tmp/x.csv",)),
])
def test_parse_spec(text, kind, params):
    s = parse_signal_spec(text)
    assert (s.kind, s.params) == (kind, params)


def test_parse_nested_diff():
    s = parse_signal_spec("diff:displaced:1,2,hermite:3")
    a, b = s.params
    assert a == SignalSpec("displaced", (1.0, 2.0))
    assert b == SignalSpec("hermite", (3,))
    assert parse_signal_spec(str(s)) == s


@pytest.mark.parametrize("bad", ["", "square", "hermite:x", "displaced:1", "diff:atom", "atom:3", "hermite:-2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_signal_spec(bad)


# -- operators ---------------------------------------------------------------

def _random_signal(grid, seed):
    rng = np.random.default_rng(seed)
    return SampledSignal.on(grid, rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size))


def test_translate_identity(grid):
    f = _random_signal(grid, 0)
    assert np.array_equal(translate(f, 0).samples, f.samples)


def test_translate_inverse_pair(grid):
    f = _random_signal(grid, 1)
    back = translate(translate(f, SQRT_PI), -SQRT_PI)
    k = grid.subdivision
    assert np.array_equal(back.samples[k:], f.samples[k:])
    assert np.all(back.samples[:k] == 0)


def test_translate_matches_atom(w, grid):
    moved = translate(sample("atom", grid, w), SQRT_PI)
    assert np.max(np.abs(moved.samples - atom_mn(grid.t, 1, 0, w))) < 1e-12


def test_translate_rejects_fractional(grid):
    with pytest.raises(ValueError):
        translate(_random_signal(grid, 2), 0.5 * grid.dt)


def test_translate_beyond_grid(grid):
    f = _random_signal(grid, 3)
    assert np.all(translate(f, grid.dt * (grid.size + 5)).samples == 0)


def test_modulate_identity_and_modulus(grid):
    f = _random_signal(grid, 4)
    assert np.array_equal(modulate(f, 0).samples, f.samples)
    np.testing.assert_allclose(np.abs(modulate(f, SQRT_PI).samples), np.abs(f.samples), rtol=1e-14)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_anticommutation(seed):
    grid = default_grid()
    f = _random_signal(grid, seed)
    ab = translate(modulate(f, SQRT_PI), SQRT_PI)
    ba = modulate(translate(f, SQRT_PI), SQRT_PI)
    assert np.max(np.abs((ab + ba).samples)) < 1e-12


def test_displace_identity(grid):
    f = _random_signal(grid, 5)
    assert np.array_equal(displace(f, 0, 0).samples, f.samples)


def test_displace_matches_atom(w, grid):
    d = displace(sample("atom", grid, w), 2 * SQRT_PI, 0)
    assert np.max(np.abs(d.samples - atom_mn(grid.t, 2, 0, w))) < 1e-12


def test_displace_preserves_energy(w, grid):
    f = sample("gaussian", grid)
    d = displace(f, 13 * grid.dt, 2.2)
    assert abs(d.energy() - f.energy()) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(-200, 200), st.floats(-5, 5))
def test_displacement_composition(k, eta):
    grid = default_grid()
    f = sample("hermite:2", grid)
    xi = k * grid.dt
    two_step = displace(displace(f, xi, 0), 0, eta)
    one_step = displace(f, xi, eta)
    np.testing.assert_allclose(two_step.samples * np.exp(1j * eta * xi / 2), one_step.samples, atol=1e-14)


def test_parseval(grid):
    f = sample("hermite:3", grid)
    assert abs(fourier_transform(f).energy() - f.energy()) < 1e-9


def test_fourier_warns_on_edge(grid):
    f = SampledSignal.on(grid, np.ones(grid.size))
    with pytest.warns(EdgeDecayWarning):
        fourier_transform(f, QuadratureSpec.symmetric(1))


def test_fourier_quiet_when_decayed(grid):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fourier_transform(sample("gaussian", grid), QuadratureSpec.symmetric(1))


# -- grids and CSV -----------------------------------------------------------

def test_quadrature_spec_contract():
    q = QuadratureSpec.symmetric(2, 32)
    assert q.size == 129
    assert q.t[64] == 0.0
    with pytest.raises(ValueError):
        QuadratureSpec(-1, 1, 0.01)
    with pytest.raises(ValueError):
        QuadratureSpec(-1, 1, SQRT_PI / 16)


def test_default_grid_layout():
    q = default_grid(8)
    assert q.subdivision == 64
    assert q.t_max == pytest.approx(18 * SQRT_PI)
    assert q.t[q.size // 2] == 0.0


def test_csv_round_trip(tmp_path, grid):
    f = sample("displaced:0.5,1.5", grid)
    p = tmp_path / "s.csv"
    write_signal_csv(p, f, header=["made by a test"])
    g = read_signal_csv(p)
    assert g.dt == pytest.approx(f.dt, rel=1e-12)
    np.testing.assert_array_equal(g.samples, f.samples)
    assert p.read_text().splitlines()[1] == "t,re,im"


def test_csv_without_imag(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("t,re\n0,1\n0.5,2\n1.0,3\n")
    g = read_signal_csv(p)
    np.testing.assert_array_equal(g.samples, [1, 2, 3])
    assert sample(f"file:{p}").energy() == g.energy()


@pytest.mark.parametrize("body", [
    "x,y\n0,1\n1,2\n",
    "t,re,im\n0,1,0\n",
    "t,re,im\n0,1,0\n0.5,1,0\n1.5,1,0\n",
    "t,re,im\n0,1,0\n0.5,oops,0\n",
    "",
])
def test_csv_rejects(tmp_path, body):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(ValueError):
        read_signal_csv(p)


def test_csv_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        sample(f"file:{tmp_path / 'missing.csv'}")


def test_sampled_signal_validation():
    with pytest.raises(ValueError):
        SampledSignal(0, 0.1, [1.0])
    with pytest.raises(ValueError):
        SampledSignal(0, 0.0, [1.0, 2.0])
    s = SampledSignal(0, 0.1, [1.0, 2.0])
    with pytest.raises(ValueError):
        s.samples[0] = 3
