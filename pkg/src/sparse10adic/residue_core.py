"""Trailing decimal digits of powers of two.

Two facts carry everything here.  For ``i >= j >= m >= 1``,
``2**i == 2**j (mod 10**m)`` exactly when ``i == j (mod 4 * 5**(m - 1))``.
And if ``2**i`` is known modulo ``10**m`` (with ``i > m``), the digit at
position ``m`` of ``2**(i + 4*j*5**(m-1))`` runs through five distinct
values of a single parity as ``j`` runs over ``0..4``.

Residues are plain big integers (``gmpy2.mpz`` when available).  Large
exponent classes are never fed to ``pow``; they are reached by multiplying
step factors ``2**(4 * 5**(k-2))`` together, see :class:`StepFactors`.
"""

from __future__ import annotations

from dataclasses import dataclass

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    mpz = int


class DomainError(ValueError):
    """An argument is outside the domain where the residue structure holds."""


def class_modulus(level: int) -> int:
    """Period of ``2**p mod 10**level`` in ``p``: ``4 * 5**(level - 1)``."""
    if level < 1:
        raise DomainError(f"level must be >= 1, got {level}")
    return 4 * 5 ** (level - 1)


@dataclass(frozen=True)
class DecimalResidue:
    """A natural number known modulo ``10**precision``."""

    value: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise DomainError(f"precision must be >= 1, got {self.precision}")
        if not 0 <= self.value < 10**self.precision:
            raise DomainError(f"value does not fit in {self.precision} digits")

    def digit(self, position: int) -> int:
        if not 0 <= position < self.precision:
            raise DomainError(f"position {position} outside precision {self.precision}")
        return int(self.value // mpz(10) ** position % 10)

    def truncate(self, k: int) -> "DecimalResidue":
        if not 1 <= k <= self.precision:
            raise DomainError(f"cannot truncate precision {self.precision} to {k}")
        return DecimalResidue(self.value % mpz(10) ** k, k)

    def digits(self) -> str:
        """Zero-padded decimal string, most significant digit first."""
        return str(self.value).zfill(self.precision)

    def __str__(self):
        return self.digits()


@dataclass(frozen=True)
class ExponentClass:
    """Exponents ``p == residue (mod 4 * 5**(level - 1))``."""

    residue: int
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise DomainError(f"level must be >= 1, got {self.level}")
        if not 0 <= self.residue < class_modulus(self.level):
            raise DomainError(
                f"residue {self.residue} out of range for level {self.level}"
            )

    @property
    def modulus(self) -> int:
        return class_modulus(self.level)

    def __contains__(self, p: int) -> bool:
        return p % self.modulus == self.residue

    def __str__(self):
        return f"{self.residue} (mod 4*5^{self.level - 1})"


def pow2_mod(p: int, k: int) -> DecimalResidue:
    """``2**p mod 10**k``, only for ``p >= k``.

    >>> pow2_mod(103, 5).value
    43008
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if p < k:
        raise DomainError(f"exponent {p} < precision {k}; lift the representative first")
    return DecimalResidue(pow(mpz(2), p, mpz(10) ** k), k)


def step_factor(k: int, working_precision: int) -> DecimalResidue:
    """``2**(4 * 5**(k-2)) mod 10**working_precision``.

    Built as the ``k - 2``-fold fifth power of ``2**4``, which is how the
    engine extends its factor table.
    """
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    if working_precision < k:
        raise DomainError(f"working precision {working_precision} < k = {k}")
    mod = mpz(10) ** working_precision
    f = mpz(16) % mod
    for _ in range(k - 2):
        f = pow(f, 5, mod)
    return DecimalResidue(f, working_precision)


def same_power_residue(i: int, j: int, m: int) -> bool:
    """Whether ``2**i`` and ``2**j`` agree in their last ``m`` digits."""
    if not i >= j >= m >= 1:
        raise DomainError(f"need i >= j >= m >= 1, got i={i}, j={j}, m={m}")
    return (i - j) % class_modulus(m) == 0


def candidate_digits(
    base: DecimalResidue, p_class: ExponentClass, m: int, check: bool = False
) -> list[tuple[int, int]]:
    """Digits at position ``m`` across the five lifts of ``p_class``.

    ``base`` holds ``2**p mod 10**(m+1)`` for some ``p`` in ``p_class``
    with ``p > m``.  Returns ``(j, a_j)`` where ``a_j`` is the digit at
    position ``m`` of ``2**(p + 4*j*5**(m-1))``.
    """
    if p_class.level != m:
        raise DomainError(f"class level {p_class.level} != m = {m}")
    if base.precision < m + 1:
        raise DomainError(f"base precision {base.precision} < m + 1 = {m + 1}")
    if check and base.value % 2 ** (m + 1):
        raise DomainError("base is not divisible by 2**(m+1); exponent must exceed m")
    mod = mpz(10) ** (m + 1)
    f = step_factor(m + 1, m + 1).value
    x = base.value % mod
    out = []
    for j in range(5):
        out.append((j, int(x // mpz(10) ** m)))
        x = x * f % mod
    if check and len({a for _, a in out}) != 5:
        raise DomainError(f"candidate digits {out} are not distinct")
    return out


def lift_class(c: ExponentClass, j: int) -> ExponentClass:
    """The sub-class of ``c`` one level up selected by ``j`` in ``0..4``."""
    if not 0 <= j <= 4:
        raise DomainError(f"j must be in 0..4, got {j}")
    return ExponentClass(c.residue + j * c.modulus, c.level + 1)


def min_representative(c: ExponentClass, bound: int) -> int:
    """Least ``p`` in ``c`` with ``p > bound``."""
    if c.residue > bound:
        return c.residue
    steps = (bound - c.residue) // c.modulus + 1
    return c.residue + steps * c.modulus


def lift_digits(c: ExponentClass) -> list[int]:
    """Mixed-radix digits of a class residue: ``[r mod 4, j_2, ..., j_level]``.

    ``residue == r0 + sum(j_k * 4 * 5**(k-2))``, so these are exactly the
    step-factor powers that build ``2**residue``.
    """
    q, r0 = divmod(c.residue, 4)
    js = [r0]
    for _ in range(c.level - 1):
        q, j = divmod(q, 5)
        js.append(j)
    return js


class StepFactors:
    """Cache of step factors ``2**(4*5**(k-2)) mod 10**precision``.

    The table only grows.  ``factor(k)`` extends the chain of fifth powers
    on demand; raising the precision recomputes the chain from ``2**4``.
    """

    def __init__(self, precision: int):
        if precision < 2:
            raise DomainError(f"precision must be >= 2, got {precision}")
        self.precision = precision
        self.modulus = mpz(10) ** precision
        self._chain = [mpz(16) % self.modulus]  # index k - 2

    def factor(self, k: int):
        if k < 2:
            raise DomainError(f"k must be >= 2, got {k}")
        chain = self._chain
        while len(chain) <= k - 2:
            chain.append(pow(chain[-1], 5, self.modulus))
        return chain[k - 2]

    def grow(self, precision: int) -> None:
        if precision <= self.precision:
            return
        depth = len(self._chain)
        self.precision = precision
        self.modulus = mpz(10) ** precision
        self._chain = [mpz(16) % self.modulus]
        self.factor(depth + 1)

    def lift(self, c: ExponentClass) -> DecimalResidue:
        """``2**P mod 10**precision`` for the canonical ``P`` in ``c``.

        ``P`` is the exponent with ``P == c.residue (mod 4*5**(precision-1))``
        and ``P >= precision``, so every pinned digit is correct and the
        digit at ``c.level`` behaves as for any large member of ``c``.
        """
        if c.level > self.precision:
            raise DomainError(f"class level {c.level} exceeds precision {self.precision}")
        mod5 = mpz(5) ** self.precision
        js = lift_digits(c)
        y = pow(mpz(2), js[0], mod5)
        for k, j in enumerate(js[1:], start=2):
            if j:
                y = y * pow(self.factor(k), j, mod5) % mod5
        return DecimalResidue(self.canonical(y % mod5), self.precision)

    def canonical(self, y5):
        """The residue ``X mod 10**precision`` with ``X == 0 (mod 2**precision)``
        and ``X == y5 (mod 5**precision)``."""
        n = self.precision
        mod5 = mpz(5) ** n
        return (y5 * pow(mpz(2), -n, mod5) % mod5) << n
