"""Brute-force cross-checks at small scale.

Everything here works from whole integers ``2**n`` or from builtin
``pow`` on concrete exponents, never from the step-factor machinery it
is meant to check.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .residue_core import DecimalResidue, DomainError, class_modulus, pow2_mod

DEFAULT_BOUND = 10**5
MAX_K = 64


@dataclass(frozen=True)
class OracleCheck:
    name: str
    params: dict
    passed: bool
    witness: Optional[str] = None
    detail: dict = field(default_factory=dict, compare=False)


@dataclass
class OracleReport:
    checks: list[OracleCheck]
    scope: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def sorted(self) -> "OracleReport":
        return OracleReport(sorted(self.checks, key=lambda c: (c.name, repr(sorted(c.params.items())))), self.scope)


def brute_trailing_digits(n: int, k: int, bound: int = DEFAULT_BOUND) -> DecimalResidue:
    """Last ``k`` digits of the full integer ``2**n``."""
    if not 0 <= n <= bound:
        raise DomainError(f"exponent {n} outside oracle bound {bound}")
    if not 1 <= k <= MAX_K:
        raise DomainError(f"k must be in 1..{MAX_K}, got {k}")
    return DecimalResidue((1 << n) % 10**k, k)


def _matches(value: int, pattern: str) -> bool:
    s = str(value).zfill(len(pattern))
    return all(p in "?" or p == c for p, c in zip(pattern, s))


def exhaustive_class_check(pattern: str, m: int, exponent_bound: int,
                           expected: Optional[set[int]] = None) -> OracleCheck:
    """Exponents whose last ``m`` digits match ``pattern`` form whole classes.

    ``pattern`` is written most significant digit first, ``?`` matches any
    digit.  Scans ``n`` in ``[m, exponent_bound]`` by exact doubling modulo
    ``10**m``; passes when the matching exponents are exactly the members
    of some residue classes mod ``4*5**(m-1)`` in that range, and, if
    ``expected`` is given, when those classes are exactly ``expected``.
    """
    if len(pattern) != m:
        raise DomainError(f"pattern {pattern!r} must have {m} digits")
    mod = 10**m
    M = class_modulus(m)
    x = pow(2, m, mod)
    hit, miss = set(), set()
    for n in range(m, exponent_bound + 1):
        r = n % M
        (hit if _matches(x, pattern) else miss).add(r)
        x = 2 * x % mod
    mixed = hit & miss
    params = {"pattern": pattern, "m": m, "bound": exponent_bound}
    classes = sorted(hit)
    witness = None
    if mixed:
        r = min(mixed)
        witness = f"class {r} mod {M} contains both matching and non-matching exponents"
    elif expected is not None and set(classes) != set(expected):
        witness = f"matching classes {classes[:10]} mod {M}, expected {sorted(expected)}"
    return OracleCheck("class structure", params, witness is None, witness,
                       {"modulus": M, "classes": classes})


def lemma1_equivalence(bound: int = DEFAULT_BOUND, max_k: int = 8) -> OracleCheck:
    """``pow2_mod(n, k)`` against full-integer digits for ``k <= n <= bound``."""
    mod = 10**max_k
    mismatch = None
    compared = 0
    x = 1
    for n in range(1, bound + 1):
        x <<= 1
        tail = x % mod
        for k in range(1, min(max_k, n) + 1):
            compared += 1
            if pow2_mod(n, k).value != tail % 10**k:
                mismatch = (n, k)
                break
        if mismatch:
            break
    witness = None if mismatch is None else f"2^{mismatch[0]} mod 10^{mismatch[1]}"
    return OracleCheck("lemma 1 residues", {"bound": bound, "max_k": max_k},
                       mismatch is None, witness, {"compared": compared})


def lemma1_partition(m: int, bound: int = DEFAULT_BOUND) -> OracleCheck:
    """Last ``m`` digits agree exactly when exponents agree mod ``4*5**(m-1)``."""
    mod = 10**m
    M = class_modulus(m)
    by_value = defaultdict(set)
    by_class = defaultdict(set)
    x = pow(2, m, mod)
    for n in range(m, bound + 1):
        by_value[x].add(n % M)
        by_class[n % M].add(x)
        x = 2 * x % mod
    witness = None
    for v, rs in by_value.items():
        if len(rs) > 1:
            witness = f"...{str(v).zfill(m)} reached from classes {sorted(rs)[:4]} mod {M}"
            break
    else:
        for r, vs in by_class.items():
            if len(vs) > 1:
                witness = f"class {r} mod {M} gives {len(vs)} different endings"
                break
    return OracleCheck("lemma 1 partition", {"m": m, "bound": bound}, witness is None, witness,
                       {"patterns": len(by_value)})


def lemma2_echo(cases: int = 100, max_m: int = 6, max_i: int = 10**4, seed: int = 0) -> OracleCheck:
    """Five lifts put five distinct digits of one parity at position ``m``."""
    rng = random.Random(seed)
    witness = None
    for _ in range(cases):
        m = rng.randint(1, max_m)
        i = rng.randint(m + 1, max_i)
        step = class_modulus(m)
        digits = [(1 << (i + j * step)) // 10**m % 10 for j in range(5)]
        if len(set(digits)) != 5 or len({a % 2 for a in digits}) != 1:
            witness = f"i={i}, m={m}: digits {digits}"
            break
    return OracleCheck("lemma 2 parity", {"cases": cases, "max_m": max_m, "seed": seed},
                       witness is None, witness)


# -- greedy prefix --------------------------------------------------------------

def _digit(e: int, pos: int) -> int:
    return pow(2, e, 10 ** (pos + 1)) // 10**pos


def _member_above(r: int, level: int, bound: int) -> int:
    M = class_modulus(level)
    return r + M * max(0, (bound - r) // M + 1)


def _forced_run(r: int, level: int) -> tuple[set[int], int]:
    """All classes extending ``r`` with zeros from ``level`` up, and where they stop.

    Returns the surviving residues (mod ``4*5**(stop-1)``) and ``stop``,
    the first position where no class admits a zero.  Every sibling is
    tried, so uniqueness is observed rather than assumed.
    """
    alive = {r}
    while True:
        M = class_modulus(level)
        nxt = set()
        for s in alive:
            for t in range(5):
                c = s + t * M
                if _digit(_member_above(c, level + 1, level + 1), level) == 0:
                    nxt.add(c)
        if not nxt:
            return alive, level
        alive = nxt
        level += 1


def greedy_prefix(p1: int, depth: int) -> dict:
    """Greedy digits and frontier exponents by exhaustive search over siblings."""
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    digits = [(pow(2, p1, 10), 0)]
    reps = [p1]
    alive, level = _forced_run(p1 % 4, 1)
    frontiers = [level]
    unique = True
    while len(digits) < depth:
        if len(alive) != 1:
            unique = False
        r = min(alive)
        reps.append(_member_above(r, level, level))
        M = class_modulus(level)
        options = []
        for t in range(5):
            c = r + t * M
            b = _digit(_member_above(c, level + 1, level + 1), level)
            survivors, stop = _forced_run(c, level + 1)
            options.append((stop, b, survivors))
        best = max(o[0] for o in options)
        winners = [o for o in options if o[0] == best]
        if len(winners) != 1:
            unique = False
        stop, b, alive = min(winners, key=lambda o: o[1])
        digits.append((b, level))
        level = stop
        frontiers.append(level)
    return {"digits": digits, "representatives": reps, "frontiers": frontiers, "unique": unique,
            "options_checked": 5 * (depth - 1)}


def verify_greedy_prefix(depth: int, p1: int = 3, record=None) -> OracleCheck:
    """Compare the engine's first ``depth`` digits with the exhaustive search."""
    if not 1 <= depth <= 6:
        raise DomainError(f"depth must be in 1..6 for exhaustive search, got {depth}")
    if record is None:
        from .greedy_engine import GreedyEngine
        record = GreedyEngine().run(p1, depth)
    ref = greedy_prefix(p1, depth)
    witness = None
    if not ref["unique"]:
        witness = "exhaustive search found more than one optimal class"
    elif list(record.digits[:depth]) != ref["digits"]:
        witness = f"engine digits {record.digits[:depth]} vs oracle {ref['digits']}"
    elif list(record.chosen_exponents[:depth]) != ref["representatives"]:
        witness = f"engine exponents {record.chosen_exponents[:depth]} vs oracle {ref['representatives']}"
    return OracleCheck("greedy prefix", {"p1": p1, "depth": depth}, witness is None, witness,
                       {"representatives": ref["representatives"], "digits": ref["digits"]})


def run_oracle(bound: int = DEFAULT_BOUND, max_k: int = 8, class_levels: int = 6,
               lemma2_cases: int = 100, prefix_depth: int = 4, seed: int = 0) -> OracleReport:
    checks = [lemma1_equivalence(bound, max_k)]
    checks += [lemma1_partition(m, bound) for m in range(1, class_levels + 1)]
    checks.append(exhaustive_class_check("8", 1, min(bound, 100), expected={3}))
    if bound >= 10**3:
        checks.append(exhaustive_class_check("008", 3, min(bound, 10**4), expected={3}))
    if bound >= 12500 + 2103:
        checks.append(exhaustive_class_check("003008", 6, bound, expected={2103}))
    checks.append(lemma2_echo(lemma2_cases, seed=seed))
    if prefix_depth:
        checks.append(verify_greedy_prefix(prefix_depth))
    scope = {"bound": bound, "max_k": max_k, "class_levels": class_levels,
             "lemma2_cases": lemma2_cases, "prefix_depth": prefix_depth, "seed": seed}
    return OracleReport(checks, scope).sorted()
