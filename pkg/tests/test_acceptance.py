"""Acceptance gate: one check per criterion, each at its stated scale and tolerance.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
Either way one PASS/FAIL line is printed per criterion.
"""
import io
import os
import sys
import time
from contextlib import redirect_stdout, redirect_stderr
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))
from conftest import ACCEPTANCE_RESULTS  # noqa: E402

from randcantor import exact_qn  # noqa: E402
from randcantor.cli import main  # noqa: E402
from randcantor.mc_harness import (CATALOG, WITHIN, ExperimentSpec, check_path_pushforward,  # noqa: E402
                                   check_support_equality, gw_digit_distribution,
                                   gw_tree_distribution, run_experiment,
                                   zeros_tree_distribution)

WORKERS = 4
SUITE_START = time.perf_counter()


def report(n, ok, detail):
    ACCEPTANCE_RESULTS[n] = (bool(ok), detail)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def overlaps(ci, lo, hi):
    return ci[0] <= hi and lo <= ci[1]


def cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue()


def test_criterion_01_certified_q_table():
    t0 = time.perf_counter()
    exact_qn.q_table.cache_clear()
    code, out = cli(["verify", "qn-bounds", "--n", "30", "--precision", "256",
                     "--power-n", "12", "--format", "csv"])
    rows = out.strip().splitlines()[1:]
    all_true = code == 0 and len(rows) == 30 and "Certified-False" not in out \
        and "Inconclusive" not in out
    q1 = exact_qn.q1_enclosure(256)
    q1_ok = (abs(float(q1.lo) - 0.8541019662) < 5e-11 and abs(float(q1.hi) - 0.8541019662) < 5e-11
             and q1.width_log2() <= -100)
    dt = time.perf_counter() - t0
    report(1, all_true and q1_ok and dt < 5,
           f"30 rows all Certified-True={all_true}, q1 width 2^{q1.width_log2():.0f}, {dt:.2f}s")


def test_criterion_02_f_values():
    import mpmath
    t0 = time.perf_counter()
    vals = exact_qn.compute_f_values(100)
    dt = time.perf_counter() - t0
    with mpmath.workdps(60):
        want = [int(mpmath.ceil(32 * n * mpmath.log(2))) for n in range(1, 101)]
    ok = vals == want and vals[0] == 23 and vals[1] == 45 and dt < 1
    report(2, ok, f"f(1)={vals[0]} f(2)={vals[1]}, 100 values match, {dt:.2f}s")


def test_criterion_03_exact_pushforwards():
    t0 = time.perf_counter()
    path = check_path_pushforward(3)
    digits = gw_digit_distribution() == [Fraction(2, 9), Fraction(2, 9), Fraction(4, 9),
                                         Fraction(1, 9)]
    trees = zeros_tree_distribution(2) == gw_tree_distribution(2)
    dt = time.perf_counter() - t0
    ok = path["ok"] and digits and trees and dt < 10
    report(3, ok, f"path {path['summary']!r}, digit law {digits}, depth-2 trees {trees}, "
                  f"{dt:.2f}s")


def test_criterion_04_support_equality():
    t0 = time.perf_counter()
    r = check_support_equality(1000, 12)
    dt = time.perf_counter() - t0
    ok = r["equal"] == 1000 and r["undetermined"] == 0 and dt < 30
    report(4, ok, f"{r['equal']}/1000 equal, {r['undetermined']} undetermined, {dt:.1f}s")


def test_criterion_05_third_pushforward():
    t0 = time.perf_counter()
    rec = run_experiment(ExperimentSpec("third_pushforward", trials=4000,
                                        params={"k_bits": 32, "levels": 8}), WORKERS)
    dt = time.perf_counter() - t0
    digits = rec.details["digits"]
    und = rec.details.get("undetermined", 0)
    in_ci = all(d["ci"][0] <= 1 / 3 <= d["ci"][1] for d in rec.details["per_digit"])
    ok = digits >= 100_000 and in_ci and und < 10 and dt < 60
    freqs = ", ".join(f"{d['frequency']:.4f}" for d in rec.details["per_digit"])
    report(5, ok, f"{digits} digits, frequencies {freqs}, {und} undetermined, {dt:.1f}s")


def test_criterion_06_mc_vs_recursion():
    t0 = time.perf_counter()
    t = exact_qn.q_table(10, 256)
    q1, q4, q10 = t.q(1), t.q(4), t.q(10)
    hit = run_experiment(ExperimentSpec("hit_prob", trials=100_000, depth=60,
                                        params={"target": "0"}), WORKERS)
    hit_ok = all(overlaps(hit.bracket[k]["ci"], float(q1.lo), float(q1.hi))
                 for k in ("lower", "upper"))
    cover = run_experiment(ExperimentSpec("cover_mean", trials=10_000, depth=60,
                                          params={"n": 4}), WORKERS)
    cover_ok = overlaps(cover.ci, float(q4.lo), float(q4.hi))
    fixed = run_experiment(ExperimentSpec("hit_prob_fixed_y", trials=10_000, depth=60,
                                          params={"n": 10}), WORKERS)
    fixed_ok = overlaps(fixed.ci, 0.75, float(q10.hi))
    dt = time.perf_counter() - t0
    report(6, hit_ok and cover_ok and fixed_ok and dt < 300,
           f"hit {hit.bracket['lower']['estimate']:.4f}..{hit.bracket['upper']['estimate']:.4f}"
           f" vs q1 {float(q1.lo):.4f} ({hit_ok}); cover {cover.estimate:.4f} vs q4 "
           f"{float(q4.lo):.4f} ({cover_ok}); fixed-y {fixed.estimate:.4f} ({fixed_ok}); "
           f"{dt:.1f}s")


def test_criterion_07_barycenter():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for k in range(1, 5):
        rec = run_experiment(ExperimentSpec("barycenter", trials=10_000, depth=60,
                                            params={"target": "0" * k}), WORKERS)
        lo, hi = rec.bracket["lower"]["ci"][0], rec.bracket["upper"]["ci"][1]
        inside = lo <= 2.0 ** -k <= hi
        ok &= inside
        parts.append(f"|s|={k}: [{lo:.4f}, {hi:.4f}] {inside}")
    s_ok = all(exact_qn.s_equation_holds(n) for n in range(21))
    dt = time.perf_counter() - t0
    report(7, ok and s_ok and dt < 300, "; ".join(parts) + f"; s-equation {s_ok}; {dt:.1f}s")


def test_criterion_08_surjectivity():
    t0 = time.perf_counter()
    t = exact_qn.q_table(10, 256)
    u_rows = exact_qn.verify_u_measure(t, 10)
    u_ok = len(u_rows) == 10 and all(r["exp_bound"] is exact_qn.Verdict.CERTIFIED_TRUE
                                     for _, r in u_rows)
    u2 = exact_qn.u_measure(2, t)
    onto = run_experiment(ExperimentSpec("onto_level", trials=100_000, depth=60,
                                         params={"n": 2}), WORKERS)
    onto_ok = onto.bracket["lower"]["ci"][0] <= float(u2.hi)
    empty = run_experiment(ExperimentSpec("empty_cylinder", trials=10_000, depth=60,
                                          params={"n": 8}), WORKERS)
    empty_ok = empty.estimate >= 0.99
    dt = time.perf_counter() - t0
    report(8, u_ok and onto_ok and empty_ok and dt < 300,
           f"u(n) <= e^(-n/32) for n<=10: {u_ok}; onto(2) {onto.estimate:.4f} vs u(2) "
           f"{float(u2.hi):.4f} ({onto_ok}); empty_cylinder(8) {empty.estimate:.4f} "
           f"needs >= 0.99 ({empty_ok}); {dt:.1f}s")


def test_criterion_09_gw_statistics():
    t0 = time.perf_counter()
    size = run_experiment(ExperimentSpec("gw_level_size", trials=10_000, depth=8), WORKERS)
    alive = run_experiment(ExperimentSpec("gw_extinction", trials=10_000, depth=12), WORKERS)
    cover = run_experiment(ExperimentSpec("closed_set_cover", trials=10_000, depth=8), WORKERS)
    dt = time.perf_counter() - t0
    verdicts = [r.verdict for r in (size, alive, cover)]
    report(9, all(v == WITHIN for v in verdicts) and dt < 60,
           f"level size {size.estimate:.3f} vs {float(Fraction(4, 3) ** 8):.3f}, survival "
           f"{alive.estimate:.4f} vs {alive.reference[0]:.4f}, cover {cover.estimate:.5f} vs "
           f"{float(Fraction(2, 3) ** 8):.5f}: {verdicts}; {dt:.1f}s")


DETERMINISM_TRIALS = {"empty_cylinder": 200, "support_equality": 200,
                      "composition_demo": 200, "third_pushforward": 500}


def test_criterion_10_determinism():
    mismatched = []
    runs = 0
    for name in sorted(CATALOG):
        trials = DETERMINISM_TRIALS.get(name, 2000)
        base = ["estimate", name, "--trials", str(trials), "--seed", "5"]
        outs = [cli(base + ["--workers", str(w)])[1] for w in (1, 1, 4, 4)]
        runs += len(outs)
        if len(set(outs)) != 1 or not outs[0]:
            mismatched.append(name)
    for kind in ("closed-set", "gw-tree", "function", "measure"):
        argv = ["sample", kind, "--seed", "5", "--depth", "6"]
        outs = [cli(argv)[1] for _ in range(2)]
        runs += 2
        if len(set(outs)) != 1 or not outs[0]:
            mismatched.append(kind)
    total = time.perf_counter() - SUITE_START
    report(10, not mismatched and total < 900,
           f"{runs} invocations, mismatched {mismatched or 'none'}; acceptance suite "
           f"{total:.0f}s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
