"""Acceptance suite; each test prints one PASS/FAIL line in the terminal summary."""
import json
import math
import time

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from casimir_torque import (
    CavityConfig,
    ConstantPair,
    LossyPolarizer,
    PerfectPolarizer,
    greens,
    scan_distance,
    small_r_approx,
    torque,
    torque_lossy,
    torque_perfect_polarizers,
)
from casimir_torque.cli import (
    VALIDATION_ANGLES,
    VALIDATION_FAMILIES,
    VALIDATION_KAPPA_L,
    main,
    parse_table,
    render_table,
    to_si,
)
from casimir_torque.config import parse_config
from casimir_torque.torque import NORM_HBAR_C_OVER_L

acceptance = pytest.mark.acceptance

# 25 points on each side, clear of the zeros at 0 and +-pi/2
GAMMAS = np.concatenate((
    np.linspace(-math.pi / 2 + 1e-3, -1e-3, 25),
    np.linspace(1e-3, math.pi / 2 - 1e-3, 25),
))


def _cavity(mirror, gamma=math.pi / 4, L=1.0):
    return CavityConfig(L, gamma, mirror, mirror)


def _worst_relative(mirror, exact):
    worst = 0.0
    for g in GAMMAS:
        tau = torque(_cavity(mirror, g)).tau
        ref = exact(g)
        worst = max(worst, abs(tau - ref) / abs(ref))
    return worst


@acceptance(1, "perfect polarizers vs closed form, 50 angles")
def test_perfect_polarizer_closed_form(record_property):
    torque(_cavity(PerfectPolarizer()))  # compile outside the timed region
    start = time.perf_counter()
    worst = _worst_relative(PerfectPolarizer(), torque_perfect_polarizers)
    elapsed = time.perf_counter() - start
    record_property("max_rel", f"{worst:.2e}")
    record_property("seconds", f"{elapsed:.3f}")
    assert len(GAMMAS) == 50
    assert worst <= 1e-8
    assert elapsed < 5.0


@acceptance("2a", "lossy mirrors vs closed form, |r| in 0.6..1.0")
def test_lossy_closed_form(record_property):
    worst = 0.0
    for r in (0.6, 0.7, 0.8, 0.9, 1.0):
        worst = max(worst, _worst_relative(LossyPolarizer(r), lambda g: torque_lossy(g, 1.0, r)))
    record_property("max_rel", f"{worst:.2e}")
    assert worst <= 1e-8


@acceptance("2b", "|r| = 0.6 within 3% of the small-r sinusoid at pi/4")
def test_lossy_small_r_sinusoid(record_property):
    tau = torque(_cavity(LossyPolarizer(0.6))).tau
    approx = small_r_approx(math.pi / 4, 1.0, 0.6)
    rel = abs(tau - approx) / abs(approx)
    record_property("tau", f"{tau:.6f}")
    record_property("sinusoid", f"{approx:.6f}")
    record_property("rel", f"{rel:.4f}")
    assert rel <= 0.03


@acceptance(3, "Green's-function kernel matches integrand on 3x3x3 lattice")
def test_greens_cross_validation(record_property):
    c0s, worst, spread = set(), 0.0, 0.0
    for _, mirror in VALIDATION_FAMILIES:
        for g in VALIDATION_ANGLES:
            cfg = _cavity(mirror, g)
            report = greens.validate(cfg, VALIDATION_KAPPA_L)
            c0s.add(report.c0)
            worst = max(worst, report.max_deviation)
            for kl in VALIDATION_KAPPA_L:
                spread = max(spread, greens.kernel_spread(kl, cfg))
    record_property("c0", c0s.copy().pop())
    record_property("max_dev", f"{worst:.2e}")
    record_property("z_spread", f"{spread:.2e}")
    assert len(c0s) == 1
    assert worst <= 1e-8
    assert spread <= 1e-9


@acceptance(4, "perfect-polarizer angle dependence: periodic, odd, extremum")
def test_angle_structure(record_property):
    def tau(g):
        return torque(_cavity(PerfectPolarizer(), g)).tau

    gs = np.linspace(-1.5, 1.5, 13)
    periodic = max(abs(tau(g + math.pi) - tau(g)) for g in gs)
    odd = max(abs(tau(-g) + tau(g)) for g in gs)
    zeros = [tau(g) for g in (0.0, math.pi / 2, -math.pi / 2)]
    res = minimize_scalar(tau, bounds=(0.1, 1.2), method="bounded", options={"xatol": 1e-8})
    g_star, peak = res.x, abs(res.fun)
    record_property("periodic", f"{periodic:.1e}")
    record_property("odd", f"{odd:.1e}")
    record_property("extremum", f"{peak:.5f}")
    record_property("at", f"{g_star:.5f}")
    assert periodic <= 1e-10
    assert odd <= 1e-10
    assert zeros == [0.0, 0.0, 0.0]
    assert abs(peak - 0.128) <= 0.001
    assert abs(g_star - 0.468) <= 0.005
    assert abs(g_star - math.pi / 4) > 0.05


@acceptance(5, "dichroic Lorentz mirrors: plateau at small L, 1/L at large L")
def test_dispersive_regimes(dichroic, record_property):
    template = _cavity(dichroic)
    scan_distance(template, [1.0])  # compile outside the timed region
    grid = np.geomspace(0.01, 100.0, 60)
    start = time.perf_counter()
    rows = scan_distance(template, grid)
    elapsed = time.perf_counter() - start
    L = np.array([r.separation for r in rows])
    mag = np.abs([r.torque for r in rows])

    near = mag[(L >= 0.01) & (L <= 0.05)]
    plateau = (near.max() - near.min()) / (near.max() + near.min())
    far = (L >= 10.0) & (L <= 100.0)
    slope = np.polyfit(np.log(L[far]), np.log(mag[far]), 1)[0]
    record_property("plateau_dev", f"{plateau:.4f}")
    record_property("slope", f"{slope:.4f}")
    record_property("seconds", f"{elapsed:.3f}")
    assert all(r.error is None for r in rows)
    assert plateau <= 0.02
    assert abs(slope + 1.0) <= 0.02
    assert elapsed < 30.0


@acceptance(6, "tau * L independent of L for kappa-independent mirrors")
def test_scaling_law(record_property):
    pairs = [
        (PerfectPolarizer(), PerfectPolarizer()),
        (LossyPolarizer(0.8), LossyPolarizer(0.6)),
        (ConstantPair(-0.9, 0.2), ConstantPair(0.5, -0.4)),
        (PerfectPolarizer(-1), LossyPolarizer(0.9)),
    ]
    worst = 0.0
    for m1, m2 in pairs:
        values = []
        for L in (0.1, 1.0, 10.0):
            res = torque(CavityConfig(L, 0.7, m1, m2))
            assert res.normalization == NORM_HBAR_C_OVER_L
            # tau already carries the factor L / (hbar c)
            values.append(res.tau)
        ref = values[1]
        worst = max(worst, max(abs(v - ref) / abs(ref) for v in values))
    record_property("max_rel", f"{worst:.1e}")
    assert worst <= 1e-9


@acceptance(7, "0.1 hbar c / L at L = 10 nm is 3.2e-19 N m within 1%")
def test_si_estimate(record_property):
    value = to_si(0.1, NORM_HBAR_C_OVER_L, separation_m=10e-9)
    rel = abs(value - 3.2e-19) / 3.2e-19
    record_property("value", f"{value:.5e}")
    record_property("rel", f"{rel:.4f}")
    assert rel <= 0.01


@acceptance(8, "repeated runs byte-identical; parse(emit(x)) == x")
def test_determinism_round_trip(tmp_path, capsys, dichroic, record_property):
    configs = [
        {"command": "angle-scan", "mirror1": {"type": "lossy", "r": 0.8},
         "grid": {"start": -3.0, "stop": 3.0, "count": 13}},
        {"command": "distance-scan", "mirror1": {"type": "lorentz",
                                                 "x": {"omega0": 1.0, "omega_p": 1.0},
                                                 "y": {"omega0": math.sqrt(2), "omega_p": 1.0}},
         "grid": {"start": 0.1, "stop": 10.0, "count": 5}},
        {"command": "integrand-dump", "mirror1": {"type": "slab", "thickness": 0.3,
                                                  "x": {"omega0": 0.0, "omega_p": 2.0, "inv_tau": 0.1},
                                                  "y": {"omega0": 1.0, "omega_p": 0.5}},
         "grid": {"count": 7}},
    ]
    for i, doc in enumerate(configs):
        path = tmp_path / f"c{i}.json"
        path.write_text(json.dumps(doc))
        outputs = []
        for k in range(2):
            out = tmp_path / f"c{i}_{k}.csv"
            assert main(["--config", str(path), "--output", str(out), "--quiet"]) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

        cfg = parse_config(doc)
        comments, header, rows = parse_table(outputs[0].decode())
        reemitted = render_table(cfg, header, rows, comments[2:])
        assert reemitted.encode() == outputs[0]
        _, header2, rows2 = parse_table(reemitted)
        assert (header2, rows2) == (header, rows)
    record_property("configs", len(configs))
