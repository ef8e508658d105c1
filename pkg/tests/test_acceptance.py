"""Exit criteria. Each test prints one PASS/FAIL line (collected in the summary)."""

import math
import time

import numpy as np
import pytest

from avatartime.allocation import REGIME_A, REGIME_B, AllocationProblem, build_lp, solve
from avatartime.cli import main
from avatartime.egonet import (
    DEFAULT_LAYERS,
    PUBLISHED_LAYER_TOTALS,
    Alter,
    EgoNetwork,
    generate,
    load_fixture,
)
from avatartime.experiments import reinvest_capacity, run_sweep, sweep_config_for
from avatartime.params import (
    ModelParams,
    beta_from_presence_scores,
    gamma_from_cues,
    zmax_from_attention,
)
from avatartime.simplex import solve_lp
from avatartime.verification import random_problem, verify_oracle

# frozen from the closed form (1/1.29 - 0.3) * min{2576, 300/0.3, 1.29*1288}
FIG4_SPOT = 475.19379844961236


def test_ac1_beta(report):
    beta = beta_from_presence_scores(4.182, 3.236)
    ok = abs(beta - 1.2923) <= 1e-6
    report("AC1a beta = 4.182/3.236 within 1e-6 of 1.2923", ok,
           f"beta = {beta!r}, |beta - 1.2923| = {abs(beta - 1.2923):.3e}")
    assert ok


def test_ac1_gamma_zmax_expected_time(report):
    gamma = gamma_from_cues(0.54, 7 / 6)
    zmax = zmax_from_attention(50, 365)
    x_tilde = ModelParams().x_tilde_total_expected
    ok = abs(gamma - 0.63) <= 1e-9 and abs(zmax - 304) <= 0.2 and x_tilde == 1752.0
    report("AC1b gamma, Z_max, E[X~]", ok,
           f"gamma = {gamma!r}, Z_max = {zmax:.4f}, E[X~] = {x_tilde!r}")
    assert ok


def test_ac2_fig3(report):
    net = load_fixture("fig3")
    problem = AllocationProblem(net, ModelParams(
        avatar_capacity_Y=45, debrief_budget_Z=45, gamma_override=0.63))
    t0 = time.perf_counter()
    plan = solve(problem)
    t_closed = time.perf_counter() - t0
    t0 = time.perf_counter()
    sol = solve_lp(build_lp(problem))
    t_lp = time.perf_counter() - t0
    lp_y = float(sol.variable_values[2:].sum())
    lp_spare = net.total_x_tilde - sol.objective
    ok = (
        abs(plan.Y_used - 45) <= 1e-6 and abs(plan.spare_time - 6.75) <= 1e-6
        and abs(lp_y - 45) <= 1e-6 and abs(lp_spare - 6.75) <= 1e-6
        and t_closed < 0.01 and t_lp < 0.01
    )
    report("AC2 two-alter instance", ok,
           f"closed form: sum y = {plan.Y_used:.9f}, spare = {plan.spare_time:.9f} "
           f"({t_closed * 1e3:.2f} ms); simplex: sum y = {lp_y:.9f}, spare = {lp_spare:.9f} "
           f"({t_lp * 1e3:.2f} ms)")
    assert ok


def test_ac3_oracle_equivalence(report):
    t0 = time.perf_counter()
    rep = verify_oracle(instances=1000, seed=20240501, max_n=200)
    elapsed = time.perf_counter() - t0
    ok = (rep.ok and rep.worst_residual <= 1e-9 and rep.worst_relative_gap <= 1e-6
          and rep.regimes.get(REGIME_A, 0) > 0 and rep.regimes.get(REGIME_B, 0) > 0
          and elapsed < 30)
    report("AC3 oracle equivalence", ok,
           f"{rep.instances} instances {rep.regimes}, failures {rep.failures}, "
           f"worst rel gap {rep.worst_relative_gap:.2e}, worst residual "
           f"{rep.worst_residual:.2e}, {elapsed:.1f} s")
    assert ok


def test_ac4_regime_dichotomy(report):
    rng = np.random.default_rng(7)
    n_a = n_b = 0
    worst = 0.0
    bad = 0
    for _ in range(1000):
        p = random_problem(rng)
        plan = solve(p)
        beta = p.network.beta
        gamma = p.params.gamma
        if gamma > np.max(1 / beta):
            n_b += 1
            bad += not (plan.Y_used == 0 and plan.spare_time == 0)
        elif plan.regime == REGIME_A:
            n_a += 1
            helped = 1 / beta - gamma > 0
            target = min(p.params.avatar_capacity_Y, p.params.debrief_limited_avatar_time,
                         math.fsum((beta * p.network.x_tilde)[helped]))
            err = abs(plan.Y_used - target)
            worst = max(worst, err)
            bad += err > 1e-9
    ok = bad == 0 and n_a + n_b >= 500 and n_b > 0 and n_a > 0
    report("AC4 regime dichotomy", ok,
           f"{n_a} case-A and {n_b} case-B instances, violations {bad}, "
           f"worst |sum y - budget| {worst:.2e}")
    assert ok


def test_ac5_fig4_shape(report):
    net = load_fixture("fig4")
    config = sweep_config_for(net, beta=1.29, Z=300.0)
    records = run_sweep(config, net)
    curves: dict[float, list] = {}
    for r in records:
        curves.setdefault(r.Y, []).append(r)
    X = net.total_x_tilde
    half, one, two = (curves[m * X] for m in (0.5, 1.0, 2.0))
    monotone = all(
        all(b.spare_time <= a.spare_time for a, b in zip(c, c[1:])) for c in curves.values()
    )
    tail = max(c[-1].spare_time for c in curves.values())
    ordered = all(t.spare_time >= o.spare_time >= h.spare_time for h, o, t in zip(half, one, two))
    spot = run_sweep(config.__class__((0.3,), (2 * X,), Z=300.0, beta=1.29), net)[0].spare_time
    ok = (len(net) == 117 and abs(X - 1288) <= 1e-9 and all(len(c) == 40 for c in curves.values())
          and monotone and tail < 1.0 and ordered and abs(spot - FIG4_SPOT) <= 1e-3)
    report("AC5 spare-time curves", ok,
           f"|V| = {len(net)}, X~ = {X:.6f}, non-increasing = {monotone}, "
           f"last-point spare = {tail:.2e} h, Y-ordered = {ordered}, "
           f"spare(0.3, 2X~) = {spot:.6f} (closed form {FIG4_SPOT:.6f})")
    assert ok


def test_ac6_generator_statistics(report):
    t0 = time.perf_counter()
    names = [s.name for s in DEFAULT_LAYERS]
    sizes = np.zeros(3)
    time_sum = np.zeros(3)
    totals = 0.0
    seeds = 10_000
    for seed in range(seeds):
        net = generate(seed)
        for a in net.alters:
            i = names.index(a.layer)
            sizes[i] += 1
            time_sum[i] += a.x_tilde
        totals += net.total_x_tilde
    elapsed = time.perf_counter() - t0
    cumulative = np.cumsum(sizes) / seeds
    per_alter = time_sum / sizes
    mean_total = totals / seeds
    target_cum = np.array([4.6, 14.3, 132.5])
    target_t = np.array([74.0, 38.72, 8.81])
    expected_total = 4.6 * 74 + 9.7 * 38.72 + 118.2 * 8.81
    ok = (np.all(np.abs(cumulative / target_cum - 1) <= 0.05)
          and np.all(np.abs(per_alter / target_t - 1) <= 0.05)
          and abs(mean_total / expected_total - 1) <= 0.05 and elapsed < 60)
    report("AC6 generator statistics", ok,
           f"cumulative sizes {np.round(cumulative, 3).tolist()}, per-alter hours "
           f"{np.round(per_alter, 3).tolist()}, mean X~ {mean_total:.2f} "
           f"(expected {expected_total:.2f}), {elapsed:.1f} s")
    assert ok


def test_ac7_reinvestment(report):
    t_active = DEFAULT_LAYERS[2].per_alter_time_mean
    ratio = PUBLISHED_LAYER_TOTALS["active_network"] / t_active
    active_size = DEFAULT_LAYERS[2].cumulative_size_mean - DEFAULT_LAYERS[1].cumulative_size_mean
    new = reinvest_capacity(1000.0)["active_network"]
    ok = abs(ratio - 118.2) <= 0.5 and abs(new - active_size) <= 0.1 * active_size
    report("AC7 reinvestment", ok,
           f"T_active/t_active = {ratio:.3f}, 1000 h buys {new} active alters "
           f"(layer size {active_size:.1f})")
    assert ok


def test_ac8_determinism(tmp_path, report):
    outputs = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        codes = [
            main(["generate", "--seed", "13", "--out", str(d / "net.json")]),
            main(["solve", "--network", str(d / "net.json"), "--gamma", "0.4",
                  "--Y", "1000", "--Z", "300", "--out", str(d / "plan.json")]),
            main(["sweep", "--seed", "13", "--out-dir", str(d / "sweep")]),
        ]
        assert codes == [0, 0, 0]
        outputs.append([(d / f).read_bytes() for f in
                        ("net.json", "plan.json", "sweep/sweep.csv", "sweep/reinvestment.csv")])
    ok = outputs[0] == outputs[1]
    report("AC8 determinism", ok,
           "network, plan and CSV files byte-identical across two runs" if ok
           else "outputs differ between runs")
    assert ok
