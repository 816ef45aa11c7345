"""Greedy construction of a 10-adic power of two with long zero runs.

The state pins the last ``known_level`` digits of ``2**p`` for every ``p``
in an exponent class.  :func:`force_zeros` extends the pinned block with
zeros for as long as the next digit position has even parity; at the
first odd position the expansion is *blocked* and :func:`next_term`
commits whichever of the five odd candidates is followed by the longest
forced zero run.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .residue_core import (
    DecimalResidue,
    ExponentClass,
    StepFactors,
    lift_class,
    min_representative,
    mpz,
)

log = logging.getLogger(__name__)

DEFAULT_LOOKAHEAD = 256
DEFAULT_TIE_DEPTH = 64
DEFAULT_HEADROOM = 16


class InvariantViolation(RuntimeError):
    """A proven property of the greedy sequence failed at runtime."""


@dataclass(frozen=True)
class ExpansionState:
    digits: tuple[tuple[int, int], ...]  # (b_i, d_i)
    known_level: int
    exp_class: ExponentClass
    trailing: DecimalResidue

    @property
    def frontier(self) -> int:
        """First digit position not pinned by the class."""
        return self.known_level

    @property
    def blocked(self) -> bool:
        """True when every lift puts an odd digit at the frontier.

        All five lifts share the parity of the digit at the frontier, so
        the canonical lift decides it.
        """
        return self.trailing.digit(self.known_level) % 2 == 1

    @property
    def last_position(self) -> int:
        return self.digits[-1][1]

    def pinned(self) -> DecimalResidue:
        return self.trailing.truncate(self.known_level)


@dataclass
class RunRecord:
    """Trace of a greedy run.

    ``states[i]`` is the expansion after the ``i+1``-th digit was committed
    and zeros forced up to the next blocked frontier.  ``gaps[i]`` is the
    length of that zero run, so the last gap is the open run after the
    final digit.  ``chosen_exponents[0]`` is the seed; ``chosen_exponents[n]``
    is the least member of ``states[n-1].exp_class`` above its level, the
    exponent that reaches the frontier where digit ``n+1`` sits.
    """

    p1: int
    digits: list[tuple[int, int]]
    gaps: list[int]
    classes: list[ExponentClass]
    chosen_exponents: list[int]
    incomplete: bool = False
    config: dict = field(default_factory=dict)
    states: list[ExpansionState] = field(default_factory=list, compare=False, repr=False)

    @property
    def b(self) -> list[int]:
        return [b for b, _ in self.digits]

    @property
    def d(self) -> list[int]:
        return [d for _, d in self.digits]


class GreedyEngine:
    """Runs the greedy strategy with a shared, growing step-factor table."""

    def __init__(
        self,
        lookahead: int = DEFAULT_LOOKAHEAD,
        tie_depth_cap: int = DEFAULT_TIE_DEPTH,
        headroom: int = DEFAULT_HEADROOM,
        factors: Optional[StepFactors] = None,
    ):
        if min(lookahead, tie_depth_cap, headroom) < 1:
            raise ValueError("lookahead, tie_depth_cap and headroom must be >= 1")
        self.lookahead = lookahead
        self.tie_depth_cap = tie_depth_cap
        self.headroom = headroom
        self.factors = factors or StepFactors(64)

    # -- precision management ------------------------------------------------

    def sync(self, s: ExpansionState, needed: int = 0) -> ExpansionState:
        """Return ``s`` with its residue at the table's precision, growing
        the table first if fewer than ``needed`` digits are available."""
        table = self.factors
        if needed > table.precision:
            target = needed + self.headroom
            table.grow(max(target, table.precision + table.precision // 2))
            log.debug("working precision raised to %d", table.precision)
        if s.trailing.precision == table.precision:
            return s
        if s.trailing.precision > table.precision:
            table.grow(s.trailing.precision)
            if s.trailing.precision == table.precision:
                return s
        return ExpansionState(s.digits, s.known_level, s.exp_class, table.lift(s.exp_class))

    # -- the two procedures --------------------------------------------------

    def initial_state(self, p1: int) -> ExpansionState:
        if p1 < 1:
            raise ValueError(f"p1 must be >= 1, got {p1}")
        c = ExponentClass(p1 % 4, 1)
        trailing = self.factors.lift(c)
        return ExpansionState(((trailing.digit(0), 0),), 1, c, trailing)

    def force_zeros(self, s: ExpansionState, max_level: int) -> ExpansionState:
        """Pin zeros above the frontier until blocked or ``max_level`` is reached.

        At a position of even parity exactly one lift puts a 0 there.  The
        caller tells the two stopping reasons apart with ``state.blocked``.
        """
        s = self.sync(s, s.known_level + 1)
        level, c, x = s.known_level, s.exp_class, s.trailing.value
        while level < max_level:
            if level + 1 > self.factors.precision:
                s = self.sync(ExpansionState(s.digits, level, c, DecimalResidue(x, s.trailing.precision)), level + 1)
                x = s.trailing.value
            mod = self.factors.modulus
            p10 = mpz(10) ** level
            digit = x // p10 % 10
            if digit % 2:
                break
            f = self.factors.factor(level + 1)
            j = 0
            while digit:
                j += 1
                if j == 5:
                    raise InvariantViolation(f"no zero among even candidates at position {level}")
                x = x * f % mod
                digit = x // p10 % 10
            c = lift_class(c, j)
            level += 1
        out = ExpansionState(s.digits, level, c, DecimalResidue(x, self.factors.precision))
        return self.sync(out, level + 1)

    def commit_candidates(self, s: ExpansionState) -> list[tuple[int, ExpansionState]]:
        """The five one-digit extensions of ``s`` at its frontier, by ``j``."""
        level = s.known_level
        s = self.sync(s, level + 2)
        mod = self.factors.modulus
        f = self.factors.factor(level + 1)
        p10 = mpz(10) ** level
        x = s.trailing.value
        out = []
        for j in range(5):
            b = int(x // p10 % 10)
            out.append(
                (b, ExpansionState(s.digits + ((b, level),), level + 1, lift_class(s.exp_class, j),
                                   DecimalResidue(x, self.factors.precision)))
            )
            x = x * f % mod
        return out

    def probe(self, s: ExpansionState, lookahead: Optional[int] = None) -> list[tuple[int, ExpansionState]]:
        """Commit each candidate and force zeros after it."""
        if lookahead is None:
            lookahead = self.lookahead
        cap = s.known_level + 1 + lookahead
        return [(b, self.force_zeros(t, cap)) for b, t in self.commit_candidates(s)]

    def next_term(self, s: ExpansionState, lookahead: Optional[int] = None) -> ExpansionState:
        """Commit the digit at a blocked frontier whose zero run is longest."""
        s = self.sync(s, s.known_level + 2)
        if not s.blocked:
            raise ValueError(f"state is not blocked at position {s.known_level}")
        probes = self.probe(s, lookahead)
        best = max(t.known_level for _, t in probes)
        tied = [(b, t) for b, t in probes if t.known_level == best]
        b, t = tied[0] if len(tied) == 1 else self._break_tie(tied)
        self._check_step(s, b, t)
        return t

    def _break_tie(self, tied):
        """Advance tied candidates greedily until one frontier leads.

        Tied probes are extended one greedy step at a time, comparing the
        frontier reached; after ``tie_depth_cap`` digits past the tie the
        smallest digit wins.
        """
        start = tied[0][1].known_level
        log.warning("tie at frontier %d between digits %s", start, [b for b, _ in tied])
        heads = [(b, t, t) for b, t in tied]
        while True:
            heads = [(b, t, self._advance(h)) for b, t, h in heads]
            best = max(h.known_level for _, _, h in heads)
            heads = [x for x in heads if x[2].known_level == best]
            if len(heads) == 1 or best - start > self.tie_depth_cap:
                b, t, _ = min(heads, key=lambda x: x[0])
                return b, t

    def _advance(self, h: ExpansionState) -> ExpansionState:
        if not self.sync(h, h.known_level + 1).blocked:
            return self.force_zeros(h, h.known_level + 1 + self.lookahead)
        probes = self.probe(h)
        return max((t for _, t in probes), key=lambda t: t.known_level)

    @staticmethod
    def _check_step(s: ExpansionState, b: int, t: ExpansionState) -> None:
        if b % 2 == 0:
            raise InvariantViolation(f"even digit {b} committed at position {s.known_level}")
        if t.known_level - s.known_level < 2:
            raise InvariantViolation(
                f"digit at {s.known_level} followed by a nonzero digit at {t.known_level}"
            )

    # -- full runs -----------------------------------------------------------

    def iter_run(self, p1: int) -> Iterator[ExpansionState]:
        """Yield the state after each committed digit, forever."""
        s = self.initial_state(p1)
        cap = self.lookahead + 1
        s = self.force_zeros(s, s.known_level + cap)
        while True:
            yield s
            s = self.next_term(s)

    def run(
        self,
        p1: int,
        target: int,
        progress: Optional[Callable[[ExpansionState], None]] = None,
    ) -> RunRecord:
        if target < 1:
            raise ValueError(f"target must be >= 1, got {target}")
        states = []
        for s in self.iter_run(p1):
            states.append(s)
            if progress is not None:
                progress(s)
            if len(states) == target:
                break
        return record_from_states(p1, states, config=self.config(p1, target))

    def config(self, p1: int, target: int) -> dict:
        return {
            "p1": p1,
            "target_digits": target,
            "lookahead": self.lookahead,
            "tie_depth_cap": self.tie_depth_cap,
            "headroom": self.headroom,
        }


def record_from_states(p1: int, states: list[ExpansionState], incomplete: bool = False,
                       config: Optional[dict] = None) -> RunRecord:
    last = states[-1]
    digits = list(last.digits)
    frontiers = [s.known_level for s in states]
    gaps = [f - d - 1 for (_, d), f in zip(digits, frontiers)]
    reps = [p1] + [min_representative(s.exp_class, s.known_level) for s in states[:-1]]
    return RunRecord(
        p1=p1,
        digits=digits,
        gaps=gaps,
        classes=[s.exp_class for s in states],
        chosen_exponents=reps,
        incomplete=incomplete,
        config=dict(config or {}),
        states=list(states),
    )


def replay_states(p1: int, digits: list[tuple[int, int]], classes: list[ExponentClass],
                  headroom: int = DEFAULT_HEADROOM) -> list[ExpansionState]:
    """Rebuild the snapshot states of a stored run from its exponent classes.

    Each class must refine the previous one; the residues are rebuilt by
    multiplying in step factors, one pass over all levels.
    """
    if len(digits) != len(classes) or not classes:
        raise ValueError("need one class per digit")
    top = max(c.level for c in classes)
    table = StepFactors(top + 2 + headroom)
    mod = table.modulus
    prev = ExponentClass(p1 % 4, 1)
    x = table.lift(prev).value
    states = []
    for i, c in enumerate(classes):
        if c.level < prev.level or (c.residue - prev.residue) % prev.modulus:
            raise ValueError(f"class {i} ({c}) does not refine {prev}")
        q = (c.residue - prev.residue) // prev.modulus
        for k in range(prev.level + 1, c.level + 1):
            q, j = divmod(q, 5)
            if j:
                x = x * pow(table.factor(k), j, mod) % mod
        states.append(ExpansionState(tuple(digits[: i + 1]), c.level, c, DecimalResidue(x, table.precision)))
        prev = c
    return states


# Functional spellings of the engine operations, each with a private table.

def initial_state(p1: int) -> ExpansionState:
    return GreedyEngine().initial_state(p1)


def force_zeros(s: ExpansionState, max_level: int) -> ExpansionState:
    return GreedyEngine().force_zeros(s, max_level)


def next_term(s: ExpansionState, lookahead: int = DEFAULT_LOOKAHEAD) -> ExpansionState:
    return GreedyEngine(lookahead=lookahead).next_term(s)


def run(p1: int, target_nonzero_digits: int, lookahead: int = DEFAULT_LOOKAHEAD, **kw) -> RunRecord:
    return GreedyEngine(lookahead=lookahead, **kw).run(p1, target_nonzero_digits)
