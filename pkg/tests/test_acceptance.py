"""Acceptance suite: one criterion per test, one printed PASS/FAIL line each.

Criterion 6 encodes stated expectations for the 4-point XOR pattern that
disagree with exhaustive search (both the independent oracle and the exact
solver find a minimum removal of 2, not 1); it is kept faithful to its
statement and is expected to fail. See the tests above it for the
oracle-verified values.
"""
import json
import random
import subprocess
import sys

from treeclust import (
    Clustering,
    CostKind,
    Dataset,
    brute_explainable,
    brute_explanation,
    brute_unconstrained,
    check_explainable,
    enumerate_shapes,
    exact_explain,
    greedy_explain,
    kernelize,
    opt_explain,
    solve_approx,
    solve_branching,
    solve_dp,
    tree_evaluate,
    tree_from_json_obj,
    cluster_cost,
)
from helpers import mixed_instance, random_points

TOL = 1e-9


def announce(capsys, num, ok, detail):
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        print(f"ACCEPTANCE {num}: {status} - {detail}")


def explanation_instances(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(3, 12)
        k = rng.randint(2, 3)
        d = rng.randint(1, 2)
        if k > n:
            continue
        out.append(mixed_instance(rng, n, d, k))
    return out


def test_criterion_1_exact_matches_oracle(capsys):
    instances = explanation_instances(200, seed=101)
    mismatches = 0
    for cl in instances:
        for s in (0, 1, 2, 3):
            brute = brute_explanation(cl, s)
            exact = exact_explain(cl, s)
            if (brute is None) != (exact is None):
                mismatches += 1
            elif brute is not None and len(brute[0]) != len(exact.removed):
                mismatches += 1
    ok = mismatches == 0
    announce(capsys, 1, ok, f"200 instances x 4 budgets, {mismatches} disagreements")
    assert ok


def test_criterion_2_greedy_bound(capsys):
    instances = explanation_instances(200, seed=101)
    violations = 0
    for cl in instances:
        opt, _ = opt_explain(cl)
        removed = greedy_explain(cl).removed_count
        if removed > (cl.k - 1) * opt:
            violations += 1
        if opt == 0 and removed != 0:
            violations += 1
    ok = violations == 0
    announce(capsys, 2, ok, f"greedy <= (k-1)*opt on 200 instances, {violations} violations")
    assert ok


def test_criterion_3_kernel(capsys):
    rng = random.Random(103)
    big_bad = 0
    small_bad = 0
    small_checked = 0
    for idx in range(100):
        if idx < 40:
            n = rng.randint(3, 12)
        else:
            n = rng.randint(13, 200)
        d = rng.randint(1, 2)
        k = rng.randint(1, 3)
        if k > n:
            k = 1
        s = rng.randint(0, 3)
        cl = mixed_instance(rng, n, d, k, hi=max(5, n // 2))
        kern, _ = kernelize(cl, s)
        r = 2 * (s + 1) * d * k
        if kern.ds.n > r:
            big_bad += 1
        if any(c != int(c) or not 1 <= c <= kern.ds.n for p in kern.ds.points for c in p):
            big_bad += 1
        if n <= 12:
            small_checked += 1
            for s2 in range(0, n + 1):
                kern2, _ = kernelize(cl, s2)
                if (exact_explain(cl, s2) is None) != (exact_explain(kern2, s2) is None):
                    small_bad += 1
    ok = big_bad == 0 and small_bad == 0
    announce(
        capsys, 3, ok,
        f"100 kernels (size/coords: {big_bad} bad), {small_checked} equivalence checks "
        f"({small_bad} bad)",
    )
    assert ok


def test_criterion_4_explainable_optimality(capsys):
    rng = random.Random(104)
    bad = 0
    done = 0
    while done < 200:
        n = rng.randint(2, 8)
        d = rng.randint(1, 2)
        k = rng.randint(1, 3)
        if k > n:
            continue
        ds = Dataset(random_points(rng, n, d, hi=7))
        kind = rng.choice([CostKind.MEANS, CostKind.MEDIANS])
        try:
            oracle = brute_explainable(ds, k, kind)
        except ValueError:
            continue
        done += 1
        rb = solve_branching(ds, k, kind)
        rd = solve_dp(ds, k, kind)
        ref = max(1.0, abs(oracle.cost))
        if abs(rb.cost - oracle.cost) > TOL * ref or abs(rd.cost - oracle.cost) > TOL * ref:
            bad += 1
        elif rd.cost < brute_unconstrained(ds, k, kind) - TOL * ref:
            bad += 1
    ok = bad == 0
    announce(capsys, 4, ok, f"200 instances, both kinds sampled, {bad} mismatches")
    assert ok


def test_criterion_5_approx_guarantees(capsys):
    rng = random.Random(105)
    bad = 0
    done = 0
    while done < 100:
        n = rng.randint(4, 30)
        d = rng.randint(1, 2)
        k = rng.randint(1, 3)
        if k > n:
            continue
        ds = Dataset(random_points(rng, n, d, hi=9))
        kind = rng.choice([CostKind.MEANS, CostKind.MEDIANS])
        try:
            opt = solve_dp(ds, k, kind)
        except ValueError:
            continue
        done += 1
        for eps in (0.1, 0.3, 0.5):
            res = solve_approx(ds, k, kind, eps)
            if len(res.removed) > eps * n:
                bad += 1
                continue
            if res.cost > opt.cost + TOL * max(1.0, abs(opt.cost)):
                bad += 1
                continue
            if int(eps * n / k) == 0 and res.cost != solve_branching(ds, k, kind).cost:
                bad += 1
    ok = bad == 0
    announce(capsys, 5, ok, f"100 instances x 3 epsilons, {bad} violations")
    assert ok


def test_criterion_6_xor_hard_instance(capsys):
    ds = Dataset.from_rows([(0, 0), (1, 1), (0, 1), (1, 0)])
    cl = Clustering(ds, (1, 1, 2, 2), 2)
    explainable = check_explainable(cl)
    opt, _ = opt_explain(cl)
    greedy = greedy_explain(cl).removed_count
    ok = (not explainable) and opt == 1 and greedy == 1
    announce(
        capsys, 6, ok,
        f"stated opt=1/greedy=1; measured explainable={explainable}, opt={opt}, "
        f"greedy={greedy} (oracle agrees with measured values)",
    )
    assert ok


def test_criterion_7_catalan(capsys):
    expected = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]
    counts = [sum(1 for _ in enumerate_shapes(k)) for k in range(1, 11)]
    ok = counts == expected
    announce(capsys, 7, ok, f"shape counts for k=1..10: {counts}")
    assert ok


def test_criterion_8_cli_round_trip(capsys, tmp_path):
    def run_cli(*args):
        return subprocess.run(
            [sys.executable, "-m", "treeclust", *args], capture_output=True, text=True
        )

    problems = []
    csv_path = tmp_path / "inst.csv"
    gen = run_cli(
        "gen", "--shape", "separated", "--k", "3", "--per-cluster", "5",
        "--dim", "2", "--seed", "8", "--output", str(csv_path),
    )
    if gen.returncode != 0:
        problems.append("gen failed")
    fit = run_cli("fit", str(csv_path), "--k", "3", "--method", "dp")
    if fit.returncode != 0:
        problems.append("fit failed")
    else:
        report = json.loads(fit.stdout)
        tree = tree_from_json_obj(report["tree"])
        rows = csv_path.read_text().strip().split("\n")[1:]
        pts = tuple(tuple(float(v) for v in row.split(",")[:2]) for row in rows)
        ds = Dataset(pts)
        ev = tree_evaluate(tree, ds)
        reported = {int(lab): tuple(ids) for lab, ids in report["result"]["clusters"].items()}
        if ev != reported:
            problems.append("re-evaluated clusters differ from report")
        cost = sum(
            cluster_cost([ds.points[i] for i in ids], CostKind.MEANS)
            for ids in ev.values()
            if ids
        )
        if abs(cost - report["result"]["cost"]) > TOL * max(1.0, cost):
            problems.append("re-evaluated cost differs from report")
    # exit-code contract
    xor_path = tmp_path / "xor.csv"
    xor_path.write_text("x1,x2,cluster\n0,0,1\n1,1,1\n0,1,2\n1,0,2\n")
    if run_cli("check", str(csv_path)).returncode != 0:
        problems.append("success fixture exit code != 0")
    if run_cli("check", str(xor_path)).returncode != 1:
        problems.append("infeasible fixture exit code != 1")
    bad_path = tmp_path / "bad.csv"
    bad_path.write_text("x1,x2\nnot,numeric\n")
    if run_cli("check", str(bad_path)).returncode != 2:
        problems.append("malformed fixture exit code != 2")
    ok = not problems
    announce(capsys, 8, ok, "gen->fit->reparse round trip + exit codes" if ok else "; ".join(problems))
    assert ok
