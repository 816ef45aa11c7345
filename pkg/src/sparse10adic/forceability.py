"""How many zeros each candidate digit can force.

A candidate ``b`` at a blocked frontier is *beta-forceable* when some
exponent in its class has at least ``beta`` zeros right above it.  Since
the zeros after a committed digit are forced one position at a time (and
uniquely), the largest such ``beta`` is the length of the forced run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .greedy_engine import ExpansionState, GreedyEngine
from .residue_core import DomainError

ODD_DIGITS = (1, 3, 5, 7, 9)
DEFAULT_CAP = 8


@dataclass(frozen=True)
class ForceabilityReport:
    frontier_position: int
    entries: dict[int, int]  # candidate digit -> max_beta
    cap: int

    def __post_init__(self):
        if sorted(self.entries) != list(ODD_DIGITS):
            raise DomainError(f"report must cover exactly the odd digits, got {sorted(self.entries)}")
        if min(self.entries.values()) < 0:
            raise DomainError("max_beta must be >= 0")

    def best(self) -> int:
        return max(self.entries.values())


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _zero_run(engine: GreedyEngine, s: ExpansionState, b: int, cap: int) -> int:
    if not engine.sync(s, s.known_level + 2).blocked:
        raise DomainError(f"state is not blocked at position {s.known_level}")
    for digit, committed in engine.commit_candidates(s):
        if digit == b:
            forced = engine.force_zeros(committed, committed.known_level + cap)
            return forced.known_level - committed.known_level
    raise DomainError(f"{b} is not a candidate digit at position {s.known_level}")


def is_beta_forceable(s: ExpansionState, b: int, beta: int,
                      engine: Optional[GreedyEngine] = None) -> bool:
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    engine = engine or GreedyEngine()
    return _zero_run(engine, s, b, beta) >= beta


def classify(s: ExpansionState, cap: int = DEFAULT_CAP,
             engine: Optional[GreedyEngine] = None) -> ForceabilityReport:
    if cap < 0:
        raise DomainError(f"cap must be >= 0, got {cap}")
    engine = engine or GreedyEngine()
    if not engine.sync(s, s.known_level + 2).blocked:
        raise DomainError(f"state is not blocked at position {s.known_level}")
    entries = {}
    for b, committed in engine.commit_candidates(s):
        forced = engine.force_zeros(committed, committed.known_level + cap)
        entries[b] = forced.known_level - committed.known_level
    return ForceabilityReport(s.known_level, dict(sorted(entries.items())), cap)


def verify_corollaries(s: Optional[ExpansionState], report: ForceabilityReport) -> list[CheckResult]:
    """Uniqueness facts about 2- and 3-forceable digits, checked on a report.

    ``s`` only labels failures and may be None.
    """
    if report.cap < 3:
        raise DomainError(f"corollary checks need cap >= 3, got {report.cap}")
    mb = report.entries
    where = f"frontier {report.frontier_position}"
    if s is not None:
        where += f" after {len(s.digits)} digits"
    two_357 = [b for b in (3, 5, 7) if mb[b] >= 2]
    two_19 = [b for b in (1, 9) if mb[b] >= 2]
    three_19 = [b for b in (1, 9) if mb[b] >= 3]
    out = [
        CheckResult("C1/C2 unique among 3,5,7", len(two_357) <= 1 and not (two_357 and two_19),
                    f"{where}: 2-forceable {two_357 + two_19}"),
        CheckResult("C3 1 iff 9 at beta=2", (mb[1] >= 2) == (mb[9] >= 2),
                    f"{where}: max_beta(1)={mb[1]}, max_beta(9)={mb[9]}"),
        CheckResult("C4 exactly one of 1,9 at beta=3", len(two_19) < 2 or len(three_19) == 1,
                    f"{where}: 3-forceable {three_19}"),
    ]
    return out


def check_frontier(s: ExpansionState, cap: int = DEFAULT_CAP,
                   engine: Optional[GreedyEngine] = None) -> tuple[ForceabilityReport, list[CheckResult]]:
    """Classify a blocked state and run the corollary checks on it."""
    report = classify(s, cap, engine)
    return report, verify_corollaries(s, report)


def _first_failure(name: str, items, describe) -> CheckResult:
    bad = list(items)
    if not bad:
        return CheckResult(name, True, "")
    more = f" (+{len(bad) - 1} more)" if len(bad) > 1 else ""
    return CheckResult(name, False, describe(bad[0]) + more)


def verify_record(record, cap: int = DEFAULT_CAP, pow_check_bits: int = 4096) -> list[CheckResult]:
    """Every check a finished run must pass.

    Covers the parity and spacing theorems (for digits after the seed, whose
    own zero run depends only on ``p1 mod 4`` and may be short), the gap bookkeeping, a replay of
    the stored exponent classes against the stored digits, the minimal
    representatives (cross-checked with ``pow`` while they are at most
    ``pow_check_bits`` bits), the greedy choice, and the corollaries at every
    frontier.  Failing checks carry a witness.
    """
    from .greedy_engine import replay_states
    from .residue_core import min_representative, mpz, pow2_mod

    b, d, gaps = record.b, record.d, record.gaps
    n = len(b)
    checks = [
        _first_failure(
            "theorem 1: b_i odd for i >= 2",
            ((i + 1, b[i], d[i]) for i in range(1, n) if b[i] % 2 == 0),
            lambda w: f"b_{w[0]} = {w[1]} at position {w[2]}",
        ),
        _first_failure(
            "theorem 2: d_(i+1) - d_i >= 2",
            ((i + 1, d[i], d[i + 1]) for i in range(1, n - 1) if d[i + 1] - d[i] < 2),
            lambda w: f"d_{w[0]} = {w[1]}, d_{w[0] + 1} = {w[2]}",
        ),
        _first_failure(
            "zero runs >= 2",
            ((i + 1, g) for i, g in enumerate(gaps) if i >= 1 and g < 2),
            lambda w: f"gap after digit {w[0]} is {w[1]}",
        ),
        _first_failure(
            "gaps match positions",
            ((i + 1, gaps[i]) for i in range(n - 1) if gaps[i] != d[i + 1] - d[i] - 1),
            lambda w: f"gap after digit {w[0]} recorded as {w[1]}",
        ),
    ]
    try:
        states = record.states or replay_states(record.p1, record.digits, record.classes)
    except ValueError as exc:
        checks.append(CheckResult("classes replay", False, str(exc)))
        return checks

    pattern_bad, blocked_bad = [], []
    expected = mpz(0)
    for i, s in enumerate(states):
        bi, di = record.digits[i]
        expected += bi * mpz(10) ** di
        if s.known_level != di + gaps[i] + 1:
            pattern_bad.append((i + 1, f"class level {s.known_level} vs position {di} + gap {gaps[i]}"))
        elif s.trailing.value % mpz(10) ** s.known_level != expected:
            pattern_bad.append((i + 1, f"pinned digits {s.pinned()} differ from the recorded expansion"))
        if not s.blocked:
            blocked_bad.append(i + 1)
    checks.append(_first_failure("classes pin the recorded digits", pattern_bad,
                                 lambda w: f"state {w[0]}: {w[1]}"))
    checks.append(_first_failure("every frontier blocked", blocked_bad,
                                 lambda w: f"state {w} can still force a zero"))

    reps = record.chosen_exponents
    rep_bad = []
    if reps[0] != record.p1:
        rep_bad.append((1, f"{reps[0]} != seed {record.p1}"))
    for k in range(1, n):
        s = states[k - 1]
        want = min_representative(s.exp_class, s.known_level)
        if reps[k] != want:
            rep_bad.append((k + 1, f"{reps[k]} != {want}"))
        elif reps[k].bit_length() <= pow_check_bits and pow2_mod(reps[k], s.known_level) != s.pinned():
            rep_bad.append((k + 1, f"2^{reps[k]} does not reproduce the pinned digits"))
    checks.append(_first_failure("minimal representatives", rep_bad, lambda w: f"p_{w[0]}: {w[1]}"))

    engine = GreedyEngine()
    greedy_bad, cor_bad = [], []
    for i, s in enumerate(states):
        report, results = check_frontier(s, cap, engine)
        cor_bad += [(r.name, r.detail) for r in results if not r.passed]
        if i + 1 < n:
            chosen = record.digits[i + 1][0]
            if report.entries.get(chosen, -1) != report.best():
                greedy_bad.append((i + 2, chosen, report.entries))
    checks.append(_first_failure("greedy digit attains max forceability", greedy_bad,
                                 lambda w: f"b_{w[0]} = {w[1]} but report {w[2]}"))
    checks.append(_first_failure("corollaries at every frontier", cor_bad,
                                 lambda w: f"{w[0]}: {w[1]}"))
    return checks
