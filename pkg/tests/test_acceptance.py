"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import csv
import dataclasses
import io
import time


from oracles import grover_probability, pred, succ
from qas.arithmetic import plus, plus_adjoint, times
from qas.axioms import (
    abstract_model,
    axioms_passed,
    canonical_family,
    check_arithmetic_axioms,
    check_family,
    construct_numbering,
    counterexample_families,
    derive_ordering,
)
from qas.grover import grover_iterate, parse_target
from qas.permutation import power
from qas.physical import (
    LabelModel,
    LabelSets,
    enumerate_models,
    induce_operator,
    induced_successor_direct,
    physical_model,
    w_inverse,
    w_map,
)
from qas.register import RegisterShape, encode
from qas.resources import count_naive_successor_power, count_plus, count_successor, plus_bound, scaling_report
from qas.shor import default_labels, register_size, shor_pipeline
from qas.successor import successor_adjoint, successor_explicit, successor_implicit

GRID = [(k, L) for k in (2, 3) for L in (1, 2, 3, 4)]


def verdict(capsys, label, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else "")
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line


def test_criterion_01_successor(capsys):
    t0 = time.perf_counter()
    bad = 0
    for k, L in GRID:
        shape = RegisterShape(k, L)
        for j in range(1, L + 1):
            imp, exp = successor_implicit(shape, j), successor_explicit(shape, j)
            for n in range(shape.dimension):
                bad += imp(n) != succ(n, j, k, L) or exp(n) != imp(n)
    dt = time.perf_counter() - t0
    verdict(capsys, "1 successor correctness", bad == 0 and dt < 5, f"{bad} mismatches, {dt:.2f}s (limit 5s)")


def test_criterion_02_power_chain(capsys):
    bad = []
    for k, L in GRID:
        shape = RegisterShape(k, L)
        for j in range(1, L):
            if power(successor_implicit(shape, j), k) != successor_implicit(shape, j + 1):
                bad.append((k, L, j))
        if not power(successor_implicit(shape, L), k).is_identity():
            bad.append((k, L, L))
    verdict(capsys, "2 k-th power chain", not bad, f"failures {bad}" if bad else "exact on k in {2,3}, L in 1..4")


def test_criterion_03_adjoint(capsys):
    bad = 0
    for k, L in GRID:
        shape = RegisterShape(k, L)
        for j in range(1, L + 1):
            adj, fwd = successor_adjoint(shape, j), successor_implicit(shape, j)
            bad += adj != fwd.inverse()
            bad += not (adj @ fwd).is_identity()
            bad += sum(adj(n) != pred(n, j, k, L) for n in range(shape.dimension))
    verdict(capsys, "3 adjoint is inverse", bad == 0, f"{bad} mismatches")


def test_criterion_04_plus_times(capsys):
    t0 = time.perf_counter()
    bad = pairs = 0
    for k, L in [(2, 3), (3, 2)]:
        N = k**L
        s2, s4 = RegisterShape(k, L, 2), RegisterShape(k, L, 4)
        P, T = plus(s2), times(s4)
        for s in range(N):
            for w in range(N):
                pairs += 1
                bad += s2.split(P(s2.join([s, w]))) != (s, (s + w) % N)
                bad += s4.split(T(s4.join([s, w, 0, 0]))) != (s, w, 0, (s * w) % N)
    dt = time.perf_counter() - t0
    ok = bad == 0 and pairs == 64 + 81 and dt < 30
    verdict(capsys, "4 plus/times oracle equivalence", ok, f"{pairs} operand pairs through plus and times, {bad} mismatches, {dt:.2f}s (limit 30s)")


def test_criterion_05_axioms(capsys):
    model = abstract_model(2, 3)
    results = check_arithmetic_axioms(model)
    corrupt = dataclasses.replace(model, plus=plus_adjoint(RegisterShape(2, 3, 2)), name="corrupt")
    bad = check_arithmetic_axioms(corrupt)
    witnesses = {n: r.witness for n, r in bad.items() if not r.passed}
    ok = axioms_passed(results) and witnesses and all(w is not None for w in witnesses.values())
    verdict(capsys, "5 axiom suite", ok, f"{len(results)} axioms pass; corrupted model fails {sorted(witnesses)}")


def test_criterion_06_family(capsys):
    f = canonical_family(2, 3)
    report = check_family(f)
    order_ok = derive_ordering(f) == ("a1", "a2", "a3")
    num = construct_numbering(f, 0)
    number_ok = all(num(encode(n, (2, 3))) == n for n in range(8))
    cex = {name: (check_family(fam).failed(), prop) for name, (fam, prop) in counterexample_families().items()}
    cex_ok = len(cex) == 3 and all(failed == [prop] for failed, prop in cex.values())
    ok = report.passed and order_ok and number_ok and cex_ok
    verdict(capsys, "6 family checker", ok, f"canonical passes 1-6, counterexamples fail {cex}")


def test_criterion_07_physical(capsys):
    labels = LabelSets(("x", "y", "z"), ("down", "up"))
    models = enumerate_models(labels)
    shape = labels.shape()
    bad = []
    for m in models:
        trip = all(w_inverse(m, w_map(m, encode(n, (2, 3)))) == encode(n, (2, 3)) for n in range(8))
        direct = all(
            induced_successor_direct(m, j) == induce_operator(m, successor_implicit(shape, j)) for j in (1, 2, 3)
        )
        axioms = axioms_passed(check_arithmetic_axioms(physical_model(m)))
        if not (trip and direct and axioms):
            bad.append((m.g, m.d, trip, direct, axioms))
    verdict(capsys, "7 physical transport", len(models) == 12 and not bad, f"{len(models)} models, failures {bad}")


def test_criterion_08_grover(capsys):
    worst = 0.0
    for L in (2, 3, 4):
        labels = default_labels(L)
        run = grover_iterate(labels, parse_target(labels, "1" * L), 4)
        worst = max(worst, max(abs(p - grover_probability(L, r)) for r, p in enumerate(run.probabilities)))
    l3 = grover_iterate(default_labels(3), parse_target(default_labels(3), "101"), 2).success_probability
    labels = LabelSets(("x", "y", "z"), ("up", "down"))
    target = parse_target(labels, "110")
    seqs = {grover_iterate(labels, target, 4, m).probabilities for m in enumerate_models(labels)}
    ok = worst <= 1e-9 and abs(l3 - 0.9453125) <= 1e-9 and len(seqs) == 1
    verdict(capsys, "8 Grover", ok, f"max deviation {worst:.1e}, L=3 r=2 -> {l3:.10f}, {len(seqs)} distinct sequences over 12 models")


def test_criterion_09a_shor_matching(capsys):
    t0 = time.perf_counter()
    run = shor_pipeline(7, 15, seed=0, trials=100)
    hits = sum(p is not None and pow(7, p, 15) == 1 for p in run.periods)
    dt = time.perf_counter() - t0
    ok = (
        register_size(15) == 8
        and run.factors == (3, 5)
        and hits >= 40
        and run.factor_rate >= 0.4
        and run.exact_verified_probability >= 0.4
        and dt < 60
    )
    verdict(
        capsys,
        "9a Shor, matching decode",
        ok,
        f"{hits}/100 verified, exact {run.exact_verified_probability:.4f}, factors {run.factors}, {dt:.2f}s (limit 60s)",
    )


def test_criterion_09b_shor_bit_flip(capsys):
    plain = LabelModel.identity(default_labels(8))
    run = shor_pipeline(7, 15, plain, plain.with_d((1, 0)), seed=0, trials=100)
    ok = run.verified_rate < 0.10 and run.exact_verified_probability < 0.10
    verdict(
        capsys,
        "9b Shor, bit-flipped decode below 10%",
        ok,
        f"sampled {run.verified_rate:.2f}, exact {run.exact_verified_probability:.4f}",
    )


def test_criterion_10_efficiency(capsys, tmp_path):
    succ_bad = [
        (L, j) for L in range(1, 11) for j in range(1, L + 1) if count_successor(j, 2, L).worst != L - j + 1
    ]
    plus_bad = [(k, L) for k, L in [(2, l) for l in range(1, 7)] + [(3, l) for l in range(1, 5)] if count_plus(k, L).worst > plus_bound(k, L)]
    naive_bad = [(k, j) for k in (2, 3) for j in range(1, 21) if count_naive_successor_power(j, k) != k ** (j - 1)]
    out = tmp_path / "scaling.csv"
    out.write_text(scaling_report(3, 4).to_csv())
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    csv_ok = {r["classification"] for r in rows if r["operation"] == "naive_power"} == {"exponential"} and all(
        r["classification"] == "polynomial" for r in rows if r["operation"] != "naive_power"
    )
    ok = not succ_bad and not plus_bad and not naive_bad and csv_ok
    verdict(capsys, "10 efficiency", ok, f"successor {succ_bad}, plus {plus_bad}, naive {naive_bad}, csv rows {len(rows)}")


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            args = (None, Path(tempfile.mkdtemp())) if "tmp_path" in fn.__code__.co_varnames else (None,)
            try:
                fn(*args)
            except AssertionError:
                pass
