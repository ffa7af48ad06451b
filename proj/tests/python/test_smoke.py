import math

import numpy as np
import pytest

import ewave


def gaussian(lat, width, amp=1.0):
    x = np.asarray(lat.coordinates())
    z, y, xx = np.meshgrid(x, x, x, indexing="ij")
    g = amp * np.exp(-(xx**2 + y**2 + z**2) / (2 * width**2))
    return np.stack([g, 0.5 * g, -0.25 * g])


def test_material_validation():
    m = ewave.Material(lam=1.0, mu=1.0, nu=1.0)
    assert m.fast_speed == pytest.approx(math.sqrt(3.0))
    with pytest.raises(ValueError):
        ewave.Material(mu=-1.0)


def test_kernels_at_double_root():
    m = ewave.Material(0.0, 1.0, 2.0)
    k = ewave.kernel_multipliers(m, 1.0, 1.0, 1.0)
    assert k["K1"] == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert k["K0"] == pytest.approx(2 * math.exp(-1.0), rel=1e-14)
    sp, sm = ewave.characteristic_roots(m, 1.0, 1.0)
    assert sp == pytest.approx(-1.0)
    assert sm == pytest.approx(-1.0)


def test_selftest_and_semigroup():
    r = ewave.kernel_selftest(draws=200, seed=3)
    assert r["pass"], r["summary"]
    assert ewave.semigroup_defect(200, 5) <= 1e-10


def test_linear_evolve_round_trip():
    lat = ewave.Lattice(16, 12.0)
    m = ewave.Material()
    f0 = gaussian(lat, 1.5)
    f1 = np.zeros_like(f0)
    u, ut = ewave.linear_evolve(m, lat, f0, f1, 0.0)
    assert np.allclose(u, f0, atol=1e-14)
    assert np.allclose(ut, 0.0, atol=1e-14)
    u, _ = ewave.linear_evolve(m, lat, f0, f1, 1.0)
    assert ewave.lp_norm(lat, u, 2.0) < ewave.lp_norm(lat, f0, 2.0)
    with pytest.raises(ValueError):
        ewave.linear_evolve(m, lat, f0[:, :8], f1, 1.0)


def test_nonlinear_run_stays_close_to_linear():
    lat = ewave.Lattice(16, 16.0)
    m = ewave.Material()
    f0 = gaussian(lat, 1.5, 1e-3)
    f1 = np.zeros_like(f0)
    traj = ewave.run(m, lat, f0, f1, [0.5, 1.0])
    assert [t for t, _, _ in traj] == [0.5, 1.0]
    u_lin, _ = ewave.linear_evolve(m, lat, f0, f1, 1.0)
    rel = np.abs(traj[-1][1] - u_lin).max() / np.abs(u_lin).max()
    assert rel < 1e-2


def test_exponents_and_fits():
    assert ewave.theoretical_exponent("u_decay", 2.0, 1.0) == pytest.approx(-0.75)
    assert "ut_profile" in ewave.claim_ids()
    with pytest.raises(IndexError):
        ewave.theoretical_exponent("u_decay", 2.0, 0.0)
    ts = [1.0, 2.0, 4.0, 8.0, 16.0]
    fit = ewave.fit_rate(ts, [3 * t**-0.75 for t in ts])
    assert fit["slope"] == pytest.approx(-0.75)
    rep = ewave.make_report("u_decay", 2.0, 1.0, 0, ts, [t**-0.75 for t in ts], t_min=1.0)
    assert rep["pass"]


def test_config_errors_carry_the_constraint():
    with pytest.raises(ValueError, match="mu > 0"):
        ewave.parse_config("material.mu = -1\n")
    echo = ewave.parse_config("time.end = 2\n")
    assert "lattice.n = 64" in echo


def test_verify_run(tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text(
        "[lattice]\nn = 16\nbox_length = 32\n"
        "[data]\nf0 = gaussian\nf0.width = 1.5\n"
        "[time]\nend = 4\nsamples = 9\n"
        "[verify]\nclaims = u_decay:2:1:0\nt_min = 1\n"
        f"[output]\ndir = {tmp_path / 'out'}\nsnapshots = final\n"
    )
    out = ewave.run_experiment(str(cfg), "verify")
    assert out["exit_code"] in (0, 1), out["error"]
    assert len(out["reports"]) == 1
    snap = ewave.read_snapshot(tmp_path / "out" / "snapshots" / "u_0008.ewsp")
    assert snap["time"] == pytest.approx(4.0)
    assert snap["field"].shape == (3, 16, 16, 16)


def test_blob_hash():
    assert ewave.git_blob_hash(b"") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391"
