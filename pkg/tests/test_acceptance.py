"""One test per acceptance criterion, each reporting a PASS/FAIL line."""

import random
import time
from fractions import Fraction

from conftest import ACCEPTANCE_LINES

from sparse10adic import oracle, records
from sparse10adic import stats_report as sr
from sparse10adic.forceability import check_frontier
from sparse10adic.greedy_engine import GreedyEngine
from sparse10adic.residue_core import ExponentClass, candidate_digits, class_modulus, pow2_mod


def report(n: int, ok: bool, what: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {what}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_worked_example():
    t0 = time.perf_counter()
    r = GreedyEngine().run(3, 4)
    elapsed = time.perf_counter() - t0
    reps, d = r.chosen_exponents, r.d
    ok = reps == [3, 103, 2103, 670414603] and d == [0, 3, 6, 13] and elapsed < 1
    report(1, ok, f"representatives {reps}, d {d}, {elapsed:.3f}s "
                  "(expected 3, 103, 2103, 670414603; d 0, 3, 6, 13; < 1s)")


def test_criterion_2_theorems_at_scale(timed_full_run):
    r, elapsed = timed_full_run
    odd = sum(1 for b in r.b[1:] if b % 2 == 0)
    spacing = sum(1 for x, y in zip(r.d, r.d[1:]) if y - x < 2)
    short = sum(1 for g in r.gaps if g < 2)
    ok = len(r.b) - 1 == 1013 and odd == spacing == short == 0 and elapsed < 300
    report(2, ok, f"{len(r.b) - 1} odd digits, {odd} even, {spacing} spacing and {short} "
                  f"zero-run violations, {elapsed:.1f}s")


def test_criterion_3_tables(full_run):
    avgs = [sr.fmt_fraction(sr.gap_histogram(full_run, q).average, 9) for q in ("q1", "q2", "q3", "q4")]
    f = sr.digit_frequency(full_run)
    counts = [f[b][0] for b in sr.ODD_DIGITS]
    ok = avgs == ["3.226190476", "3.243083004", "3.223684211", "3.246548323"] and \
        counts == [113, 260, 272, 244, 124]
    report(3, ok, f"quartile averages {avgs}, digit counts {counts} (exact)")


def test_criterion_4_heuristic(full_run):
    model = sr.model_expected_gap()
    empirical = sr.gap_histogram(full_run).average
    diff = abs(Fraction(13, 4) - empirical)
    ok = model == (3, 4, Fraction(13, 4)) and diff < Fraction(1, 100)
    report(4, ok, f"model {tuple(str(x) for x in model)}, empirical {float(empirical):.6f}, "
                  f"|diff| {float(diff):.6f} < 0.01")


def test_criterion_5_oracle_equivalence():
    t0 = time.perf_counter()
    lemma = oracle.lemma1_equivalence(10**5, 8)
    cls = oracle.exhaustive_class_check("008", 3, 10**4 - 1, expected={3})
    elapsed = time.perf_counter() - t0
    ok = lemma.passed and cls.passed and elapsed < 30
    report(5, ok, f"{lemma.detail['compared']} residues compared, mismatch {lemma.witness}; "
                  f"'008' classes {cls.detail['classes']} mod {cls.detail['modulus']}; {elapsed:.1f}s")


def test_criterion_6_lemma2():
    rng = random.Random(20260)
    passed = 0
    for _ in range(100):
        m = rng.randint(1, 8)
        i = rng.randint(m + 1, 10**4)
        got = [a for _, a in candidate_digits(pow2_mod(i, m + 1), ExponentClass(i % class_modulus(m), m), m)]
        brute = [(1 << (i + j * class_modulus(m))) // 10**m % 10 for j in range(5)]
        passed += len(set(got)) == 5 and len({a % 2 for a in got}) == 1 and got == brute
    report(6, passed == 100, f"{passed}/100 random (i, m) cases give 5 distinct same-parity digits")


def test_criterion_7_corollaries(short_runs):
    engine = GreedyEngine()
    frontiers = failures = 0
    for p1 in (3, 103, 903):
        r = short_runs[p1]
        assert len(r.digits) >= 200
        for s in r.states:
            _, results = check_frontier(s, engine=engine)
            frontiers += 1
            failures += sum(1 for c in results if not c.passed)
    report(7, failures == 0, f"{frontiers} frontiers from p1 in (3, 103, 903), {failures} C1-C4 failures")


def test_criterion_8_matrix_cells(full_run):
    m = sr.digit_gap_matrix(full_run)
    p = sr.fmt_fraction(m.probabilities[3][2], 3)
    ok = m.counts[3][2] == 140 and p == "0.541" and m.counts[1][2] == 0 and m.counts[9][2] == 0
    report(8, ok, f"row 3 gap 2: {m.counts[3][2]} ({p}); rows 1, 9 gap 2: "
                  f"{m.counts[1][2]}, {m.counts[9][2]}")


def test_criterion_9_determinism():
    a = records.dumps(GreedyEngine().run(3, 300))
    b = records.dumps(GreedyEngine().run(3, 300))
    report(9, a == b, f"two 300-digit runs, {len(a)} bytes each, identical: {a == b}")


def test_worked_example_true_fourth_exponent():
    # companion to criterion 1: the exponent the construction actually yields
    r = GreedyEngine().run(3, 4)
    assert r.chosen_exponents[3] == 607414603
    assert pow(2, 607414603, 10**14) == 10000009003008
    assert pow(2, 670414603, 10**8) // 10**7 == 4
