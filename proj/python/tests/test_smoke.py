import math

import numpy as np
import pytest

import amod


def gaussian(grid, a=1.0):
    x = grid.nodes()
    mesh = np.meshgrid(*([x] * grid.dim), indexing="ij")
    return np.exp(-a * sum(m * m for m in mesh)).astype(complex)


def test_grid():
    g = amod.Grid(1, 16.0, 256)
    assert g.step == pytest.approx(0.125)
    assert g.nyquist == pytest.approx(math.pi / 0.125)
    assert np.array_equal(g.nodes(), -16.0 + 0.125 * np.arange(256))
    assert np.array_equal(g.frequencies(), (np.arange(256) - 128) * (math.pi / 16.0))
    assert g == amod.desk_grid(1)
    with pytest.raises(ValueError):
        amod.Grid(1, 16.0, 255)


def test_transform_round_trip_and_normalization():
    g = amod.Grid(1, 16.0, 256)
    f = gaussian(g)
    F = amod.forward_transform(g, f)
    # the transform of exp(-x^2) is exp(-xi^2/4)/sqrt(2)
    assert np.max(np.abs(F - np.exp(-g.frequencies() ** 2 / 4) / math.sqrt(2))) <= 1e-12
    assert np.max(np.abs(amod.inverse_transform(g, F) - f)) <= 1e-12


def test_mixed_norm_closed_form():
    g = amod.desk_grid(2)
    exact = (math.pi / 2) ** 0.25 * (math.pi / 4) ** 0.125
    assert amod.mixed_norm(g, gaussian(g), [2.0, 4.0]) == pytest.approx(exact, rel=1e-6)


def test_maximal_dominates():
    g = amod.Grid(2, 2.0, 16)
    rng = np.random.default_rng(3)
    f = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    # built-in abs matches the library's complex magnitude bit for bit
    mag = np.array([abs(v) for v in f.flat]).reshape(f.shape)
    for theta in (0.5, 1.0, 2.0):
        assert np.all(amod.iterated_maximal(g, f, theta) >= mag)


def test_partition_and_norm():
    g = amod.desk_grid(1)
    for alpha in (0.0, 0.5, 1.0):
        assert amod.partition_deviation(g, alpha) <= 1e-12
    f = gaussian(g)
    n2 = amod.modulation_norm(g, f, alpha=0.5, s=1.0)
    n1 = amod.modulation_norm(g, f, alpha=0.5, s=1.0, q=1.0)
    assert n1 >= n2 > 0
    rows = amod.band_profile(g, f, alpha=0.5, s=1.0)
    assert math.sqrt(sum(r[3] ** 2 for r in rows)) == pytest.approx(n2, rel=1e-12)
    assert amod.modulation_norm(g, np.zeros(256), alpha=0.5) == 0.0


def test_apply_and_guards():
    g = amod.desk_grid(1)
    f = gaussian(g)
    up = amod.apply("bessel(b=2)", g, f)
    assert np.max(np.abs(amod.apply("bessel(b=-2)", g, up) - f)) <= 1e-10
    assert np.max(np.abs(amod.bessel_lift(g, f, 2.0) - up)) <= 1e-12
    assert amod.plan("smooth_coefficient", g) == ("separable", 256.0)
    assert "oscillatory" in amod.symbols()
    with pytest.raises(amod.ConfigError):
        amod.apply("nope", g, f)
    with pytest.raises(amod.ResourceGuard):
        amod.plan("oscillatory(rho=0.5)", amod.Grid(2, 12.0, 512), "general")
    near_nyquist = np.exp(1j * (g.samples // 2 - 2) * g.freq_step * g.nodes())
    with pytest.raises(amod.GuardViolation):
        amod.modulation_norm(g, near_nyquist, alpha=0.5)
    with pytest.raises(ValueError):
        amod.apply("identity", g, np.zeros(128))


def test_field_io(tmp_path):
    g = amod.Grid(2, 3.0, 8)
    f = gaussian(g) * (1 + 0.5j)
    amod.write_field(str(tmp_path / "f.bin"), g, f)
    g2, back = amod.read_field(str(tmp_path / "f.bin"))
    assert g2 == g
    assert np.array_equal(back, f)


def test_lifting_experiment_identity_row():
    rep = amod.lifting_experiment(0.0)
    assert rep["passed"]
    assert len(rep["rows"]) == 12
    assert all(abs(r["ratio"] - 1.0) <= 1e-10 for r in rep["rows"])
    assert amod.calibration.lifting_spread > 1.0
