"""Smoke tests for the python bindings (the heavy verification lives in ctest)."""

import math

import pytest

import betalab as bl


def test_version():
    assert bl.__version__


def test_specfun_basics():
    density, tail = bl.semicircle(0.0)
    assert density == pytest.approx(2.0 / math.pi)
    assert tail == pytest.approx(0.5)
    assert bl.joukowsky(0.0) == pytest.approx(-1j)
    ai, aip = bl.airy_ai(0.0)
    assert ai == pytest.approx(0.3550280538878172, abs=1e-12)
    assert aip == pytest.approx(-0.2588194037928068, abs=1e-12)


def test_noise_determinism():
    s1 = bl.NoiseStream(2.0, seed=5, replicate=1)
    s2 = bl.NoiseStream(2.0, seed=5, replicate=1)
    assert s1.entry(7) == s2.entry(7)
    assert s1.entry(7) != bl.NoiseStream(2.0, seed=5, replicate=2).entry(7)


def test_recursion_and_counting():
    s = bl.NoiseStream(2.0, seed=11)
    N, z = 512, 0.3
    traj = bl.run_recursion(s, N, z)
    phase = bl.phase_trajectory(s, z, N)
    n = N
    counted = math.floor((phase.phi(n) + math.pi / 2.0) / math.pi)
    assert counted == bl.sturm_count(traj, n)
    # Re(exp psi_N) reproduces Phi_N
    psi = phase.psi_at(N)
    assert math.cos(psi.imag) * math.exp(psi.real) == pytest.approx(traj.phi(N), rel=1e-7)


def test_eigen_oracle_agrees_with_numpy():
    numpy = pytest.importorskip("numpy")
    s = bl.NoiseStream(2.0, seed=3)
    n, N, beta = 12, 40, 2.0
    ev = bl.eigen_oracle(s, n, N)
    b = [s.b1()] + [s.entry(k)[0] for k in range(1, n)]
    a = [math.sqrt(s.entry(k)[1]) for k in range(1, n)]
    A = numpy.diag(b) + numpy.diag(a[: n - 1], 1) + numpy.diag(a[: n - 1], -1)
    ref = numpy.linalg.eigvalsh(A / math.sqrt(4 * N * beta))
    assert numpy.allclose(ev, ref, atol=1e-9)


def test_sine_path_shape():
    p = bl.solve_sine(2.0, [0.0, 1.0], 1.0, 1500, 9)
    assert p.omega[0][-1] == 0.0
    assert p.omega[1][-1].imag > -20.0
    z = bl.zeta_eval(p, 0.3)
    assert z[0] == pytest.approx(1.0)


def test_airy_path():
    p = bl.solve_sai(bl.BETA_INF, 0.0, 8.0, -5.0, 15000, 0)
    ai, _ = bl.airy_ai(-2.0)
    assert p.sai_at(-2.0) == pytest.approx(ai, abs=1e-4)


def test_experiment_runner(tmp_path):
    cfg = (
        "kind = sine-sim\nbeta = 2\nlambda-list = 0.5\nreplicates = 20\n"
        f"steps = 1200\nseed = 3\nout = {tmp_path}/run\n"
    )
    assert bl.run_experiment_text(cfg) == 0
    assert (tmp_path / "run" / "sine_sim.csv").exists()
    assert (tmp_path / "run" / "manifest.json").exists()
