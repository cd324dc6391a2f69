"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`.  On top of them this module
provides the Z2-graded index bookkeeping (:class:`Signature`), the free
supercommutative polynomial ring in the modes ``T_n^{ij}``
(:class:`SuperPoly`), commutative polynomials in a few formal variables
with coefficients in any ring (:class:`Poly`) and sparse square matrices
over any ring (:class:`RingMatrix`).

Every value is immutable after construction.  Zero entries and zero
coefficients are never stored, so ``bool(x)`` is the zero test throughout.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Mapping, NamedTuple

__all__ = [
    "Signature",
    "Gen",
    "SuperPoly",
    "Poly",
    "RingMatrix",
    "NotDivisibleError",
    "divide_exact",
    "divide_exact_matrix",
    "graded_tensor",
    "kron",
    "to_fraction",
]


def to_fraction(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# grading


_SIG_RE = re.compile(r"^\s*(\d+)\s*(?:\|\s*(\d+)\s*)?$")


@dataclass(frozen=True, order=True)
class Signature:
    """Grading datum (m|n): indices 1..m are even, m+1..m+n are odd."""

    m: int
    n: int = 0

    def __post_init__(self) -> None:
        if self.m < 0 or self.n < 0 or self.m + self.n == 0:
            raise ValueError(f"invalid signature ({self.m}|{self.n})")

    @property
    def total(self) -> int:
        return self.m + self.n

    @property
    def graded(self) -> bool:
        return self.n > 0

    def parity(self, i: int) -> int:
        if not 1 <= i <= self.total:
            raise IndexError(f"index {i} outside 1..{self.total}")
        return 0 if i <= self.m else 1

    def indices(self) -> range:
        return range(1, self.total + 1)

    def composite_parity(self, index: int, slots: int) -> int:
        """Parity of a 0-based index into the ``slots``-fold tensor power."""
        d = self.total
        p = 0
        for _ in range(slots):
            index, r = divmod(index, d)
            p += self.parity(r + 1)
        return p % 2

    @classmethod
    def parse(cls, text: str | int) -> Signature:
        """Parse ``"N"`` or ``"M|N"``."""
        if isinstance(text, int):
            return cls(text)
        match = _SIG_RE.match(str(text))
        if not match:
            raise ValueError(f"malformed signature {text!r}")
        m = int(match.group(1))
        n = int(match.group(2)) if match.group(2) is not None else 0
        return cls(m, n)

    def __str__(self) -> str:
        return f"{self.m}|{self.n}" if self.n else str(self.m)


# ---------------------------------------------------------------------------
# supercommutative polynomial ring


class Gen(NamedTuple):
    """Mode generator T_level^{i j}; tuple order is (level, i, j)."""

    level: int
    i: int
    j: int
    parity: int = 0

    def __str__(self) -> str:
        return f"T{self.level}[{self.i},{self.j}]"


def make_gen(sig: Signature, level: int, i: int, j: int) -> Gen:
    if level < 1:
        raise ValueError("level-0 modes are the constants delta^{ij}")
    return Gen(level, i, j, (sig.parity(i) + sig.parity(j)) % 2)


Monomial = tuple  # tuple[Gen, ...], sorted


def _merge_sign(a: Monomial, b: Monomial) -> int:
    """Sign of sorting a+b when a and b are sorted; 0 if an odd gen repeats."""
    odd_a = [g for g in a if g[3]]
    if not odd_a:
        return 1
    odd_b = [g for g in b if g[3]]
    if not odd_b:
        return 1
    # count pairs (x in a, y in b) with x > y
    inversions = 0
    k = 0
    for y in odd_b:
        while k < len(odd_a) and odd_a[k] <= y:
            if odd_a[k] == y:
                return 0
            k += 1
        inversions += len(odd_a) - k
    return -1 if inversions % 2 else 1


def _mono_mul(a: Monomial, b: Monomial) -> tuple[Monomial, int]:
    if not a:
        return b, 1
    if not b:
        return a, 1
    sign = _merge_sign(a, b)
    if sign == 0:
        return (), 0
    return tuple(sorted(a + b)), sign


def _mono_parity(m: Monomial) -> int:
    return sum(g[3] for g in m) % 2


class SuperPoly:
    """Element of the free supercommutative ring over Q in the generators.

    Terms map sorted generator tuples to nonzero Fractions.  Odd generators
    anticommute and square to zero, even ones commute.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Any] | None = None, *, _trusted: bool = False):
        if _trusted:
            self.terms = terms  # type: ignore[assignment]
        else:
            acc: dict[Monomial, Fraction] = {}
            for mono, c in (terms or {}).items():
                c = to_fraction(c)
                if not c:
                    continue
                mono, sign = _canonical(mono)
                if sign == 0:
                    continue
                acc[mono] = acc.get(mono, 0) + sign * c
            self.terms = {k: v for k, v in acc.items() if v}
        self._hash: int | None = None

    # constructors
    @classmethod
    def const(cls, c: Any) -> SuperPoly:
        c = to_fraction(c)
        return cls({(): c} if c else {}, _trusted=True)

    @classmethod
    def gen(cls, g: Gen, coeff: Any = 1) -> SuperPoly:
        c = to_fraction(coeff)
        return cls({(g,): c} if c else {}, _trusted=True)

    @classmethod
    def zero(cls) -> SuperPoly:
        return cls({}, _trusted=True)

    @classmethod
    def one(cls) -> SuperPoly:
        return cls.const(1)

    # basic protocol
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SuperPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"SuperPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            body = "*".join(str(g) for g in mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic
    def _coerce(self, other: Any) -> SuperPoly | None:
        if isinstance(other, SuperPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return SuperPoly.const(other)
        return None

    def __add__(self, other: Any) -> SuperPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o
        acc = dict(self.terms)
        for m, c in o.terms.items():
            v = acc.get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return SuperPoly(acc, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> SuperPoly:
        return SuperPoly({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other: Any) -> SuperPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> SuperPoly:
        return (-self) + other

    def __mul__(self, other: Any) -> SuperPoly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return SuperPoly.zero()
            return SuperPoly({m: c * other for m, c in self.terms.items()}, _trusted=True)
        if not isinstance(other, SuperPoly):
            return NotImplemented
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m, sign = _mono_mul(m1, m2)
                if sign:
                    acc[m] = acc.get(m, 0) + sign * c1 * c2
        return SuperPoly({m: c for m, c in acc.items() if c}, _trusted=True)

    def __rmul__(self, other: Any) -> SuperPoly:
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    # inspection
    def generators(self) -> set[Gen]:
        return {g for m in self.terms for g in m}

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def parity(self) -> int:
        """Parity of a homogeneous element; ValueError if mixed."""
        ps = {_mono_parity(m) for m in self.terms}
        if len(ps) > 1:
            raise ValueError("element is not homogeneous")
        return ps.pop() if ps else 0

    def max_level(self) -> int:
        return max((g.level for m in self.terms for g in m), default=0)

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def substitute(self, images: Callable[[Gen], SuperPoly]) -> SuperPoly:
        """Algebra homomorphism defined by generator images."""
        out = SuperPoly.zero()
        cache: dict[Gen, SuperPoly] = {}
        for mono, c in self.terms.items():
            term = SuperPoly.const(c)
            for g in mono:
                if g not in cache:
                    cache[g] = images(g)
                term = term * cache[g]
            out = out + term
        return out

    def truncate(self, p: int) -> SuperPoly:
        """Drop every monomial containing a generator of level > p."""
        return SuperPoly(
            {m: c for m, c in self.terms.items() if all(g.level <= p for g in m)}, _trusted=True
        )


def _canonical(mono: Iterable[Gen]) -> tuple[Monomial, int]:
    """Normal-order an arbitrary generator word, tracking the Koszul sign."""
    word = list(mono)
    sign = 1
    # insertion sort; swapping two odd generators flips the sign
    for k in range(1, len(word)):
        j = k
        while j > 0 and word[j - 1] > word[j]:
            if word[j - 1][3] and word[j][3]:
                sign = -sign
            word[j - 1], word[j] = word[j], word[j - 1]
            j -= 1
    for a, b in zip(word, word[1:]):
        if a == b and a[3]:
            return (), 0
    return tuple(word), sign


def normal_form(x: SuperPoly) -> SuperPoly:
    """Canonical form; construction already normalises, so this re-checks it."""
    return SuperPoly(dict(x.terms))


# ---------------------------------------------------------------------------
# commutative polynomials in formal variables


def _is_zero(c: Any) -> bool:
    return not c


class Poly:
    """Polynomial in ``nvars`` commuting variables with arbitrary ring coefficients.

    The coefficient ring only needs ``+``, ``-``, ``*`` and a truthiness zero
    test; Fractions, :class:`SuperPoly` and :class:`RingMatrix` all qualify.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Any] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if not _is_zero(c)}

    @classmethod
    def const(cls, nvars: int, c: Any) -> Poly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, k: int, coeff: Any = Fraction(1)) -> Poly:
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): coeff})

    @classmethod
    def from_univariate(cls, nvars: int, k: int, coeffs: Mapping[int, Any]) -> Poly:
        """sum_n coeffs[n] * x_k^n."""
        out = {}
        for n, c in coeffs.items():
            e = [0] * nvars
            e[k] = n
            out[tuple(e)] = c
        return cls(nvars, out)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.terms!r})"

    def _lift(self, other: Any) -> Poly:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other: Any) -> Poly:
        o = self._lift(other)
        acc = dict(self.terms)
        for e, c in o.terms.items():
            if e in acc:
                v = acc[e] + c
                if _is_zero(v):
                    del acc[e]
                else:
                    acc[e] = v
            else:
                acc[e] = c
        return Poly(self.nvars, acc)

    def __radd__(self, other: Any) -> Poly:
        if isinstance(other, int) and other == 0:
            return self
        return self + other

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Any) -> Poly:
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> Poly:
        return (-self) + other

    def __mul__(self, other: Any) -> Poly:
        if not isinstance(other, Poly):
            return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        acc: dict[tuple[int, ...], Any] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                if e in acc:
                    acc[e] = acc[e] + prod
                else:
                    acc[e] = prod
        return Poly(self.nvars, acc)

    def __rmul__(self, other: Any) -> Poly:
        return Poly(self.nvars, {e: other * c for e, c in self.terms.items()})

    def coeff(self, exps: tuple[int, ...]) -> Any:
        return self.terms.get(exps, 0)

    def degree(self, k: int | None = None) -> int:
        if not self.terms:
            return -1
        if k is None:
            return max(sum(e) for e in self.terms)
        return max(e[k] for e in self.terms)

    def scale_var(self, k: int, factor: Any) -> Poly:
        """Substitute x_k -> factor * x_k (factor a scalar)."""
        return Poly(self.nvars, {e: c * (factor ** e[k]) for e, c in self.terms.items()})

    def map_coeffs(self, f: Callable[[Any], Any]) -> Poly:
        return Poly(self.nvars, {e: f(c) for e, c in self.terms.items()})

    def leading(self) -> tuple[tuple[int, ...], Any]:
        """Lex-leading exponent and coefficient."""
        e = max(self.terms)
        return e, self.terms[e]


class NotDivisibleError(ArithmeticError):
    """Raised by :func:`divide_exact`; ``entry`` holds the offending item."""

    def __init__(self, message: str, entry: Any = None, remainder: Any = None):
        super().__init__(message)
        self.entry = entry
        self.remainder = remainder


def divide_exact(num: Poly, den: Poly) -> Poly:
    """Exact quotient num/den.

    ``den`` must have scalar (Fraction) coefficients; ``num`` may have
    coefficients in any ring that admits multiplication by Fractions.
    """
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    lead_e, lead_c = den.leading()
    inv = 1 / to_fraction(lead_c)
    rem = num
    quot: dict[tuple[int, ...], Any] = {}
    while rem:
        e, c = rem.leading()
        shift = tuple(a - b for a, b in zip(e, lead_e))
        if any(s < 0 for s in shift):
            raise NotDivisibleError(f"leading term {e} not divisible by {lead_e}", num, rem)
        q = c * inv
        quot[shift] = q
        rem = rem - Poly(num.nvars, {shift: q}) * den
    return Poly(num.nvars, quot)


# ---------------------------------------------------------------------------
# sparse matrices over a ring


class RingMatrix:
    """Sparse square matrix; 0-based row/column indices."""

    __slots__ = ("dim", "rows")

    def __init__(self, dim: int, entries: Mapping[tuple[int, int], Any] | None = None):
        self.dim = dim
        rows: dict[int, dict[int, Any]] = {}
        for (r, c), v in (entries or {}).items():
            if not 0 <= r < dim or not 0 <= c < dim:
                raise IndexError(f"entry ({r},{c}) outside dimension {dim}")
            if _is_zero(v):
                continue
            rows.setdefault(r, {})[c] = v
        self.rows = rows

    @classmethod
    def _from_rows(cls, dim: int, rows: dict[int, dict[int, Any]]) -> RingMatrix:
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.rows = {r: row for r, row in rows.items() if row}
        return obj

    @classmethod
    def identity(cls, dim: int, one: Any = Fraction(1)) -> RingMatrix:
        return cls._from_rows(dim, {k: {k: one} for k in range(dim)})

    @classmethod
    def zeros(cls, dim: int) -> RingMatrix:
        return cls._from_rows(dim, {})

    @classmethod
    def unit(cls, dim: int, i: int, j: int, value: Any = Fraction(1)) -> RingMatrix:
        """Matrix unit E_ij with 1-based indices, as in the algebra notation."""
        return cls(dim, {(i - 1, j - 1): value})

    @classmethod
    def from_dense(cls, data: Iterable[Iterable[Any]]) -> RingMatrix:
        data = [list(r) for r in data]
        dim = len(data)
        return cls(dim, {(r, c): to_fraction(v) if isinstance(v, (int, str)) else v
                         for r, row in enumerate(data) for c, v in enumerate(row)})

    def items(self) -> Iterator[tuple[tuple[int, int], Any]]:
        for r, row in self.rows.items():
            for c, v in row.items():
                yield (r, c), v

    def entry(self, r: int, c: int) -> Any:
        return self.rows.get(r, {}).get(c, 0)

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows.values())

    def to_dense(self) -> list[list[Any]]:
        return [[self.entry(r, c) for c in range(self.dim)] for r in range(self.dim)]

    def __bool__(self) -> bool:
        return bool(self.rows)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RingMatrix):
            return self.dim == other.dim and self.rows == other.rows
        if isinstance(other, int) and other == 0:
            return not self.rows
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"RingMatrix({self.dim}, nnz={self.nnz()})"

    def _check(self, other: RingMatrix) -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: Any) -> RingMatrix:
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, RingMatrix):
            return NotImplemented
        self._check(other)
        rows = {r: dict(row) for r, row in self.rows.items()}
        for r, orow in other.rows.items():
            row = rows.setdefault(r, {})
            for c, v in orow.items():
                if c in row:
                    s = row[c] + v
                    if _is_zero(s):
                        del row[c]
                    else:
                        row[c] = s
                else:
                    row[c] = v
        return RingMatrix._from_rows(self.dim, rows)

    __radd__ = __add__

    def __neg__(self) -> RingMatrix:
        return RingMatrix._from_rows(
            self.dim, {r: {c: -v for c, v in row.items()} for r, row in self.rows.items()}
        )

    def __sub__(self, other: Any) -> RingMatrix:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Any) -> RingMatrix:
        if isinstance(other, RingMatrix):
            return self.matmul(other)
        rows = {}
        for r, row in self.rows.items():
            new = {}
            for c, v in row.items():
                p = v * other
                if not _is_zero(p):
                    new[c] = p
            rows[r] = new
        return RingMatrix._from_rows(self.dim, rows)

    def __rmul__(self, other: Any) -> RingMatrix:
        rows = {}
        for r, row in self.rows.items():
            new = {}
            for c, v in row.items():
                p = other * v
                if not _is_zero(p):
                    new[c] = p
            rows[r] = new
        return RingMatrix._from_rows(self.dim, rows)

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        return self.matmul(other)

    def matmul(self, other: RingMatrix) -> RingMatrix:
        self._check(other)
        out: dict[int, dict[int, Any]] = {}
        orows = other.rows
        for r, row in self.rows.items():
            acc: dict[int, Any] = {}
            for k, a in row.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for c, b in brow.items():
                    p = a * b
                    if c in acc:
                        acc[c] = acc[c] + p
                    else:
                        acc[c] = p
            out[r] = {c: v for c, v in acc.items() if not _is_zero(v)}
        return RingMatrix._from_rows(self.dim, out)

    def commutator(self, other: RingMatrix) -> RingMatrix:
        return self.matmul(other) - other.matmul(self)

    def map(self, f: Callable[[Any], Any]) -> RingMatrix:
        rows = {}
        for r, row in self.rows.items():
            new = {}
            for c, v in row.items():
                w = f(v)
                if not _is_zero(w):
                    new[c] = w
            rows[r] = new
        return RingMatrix._from_rows(self.dim, rows)

    def transpose(self) -> RingMatrix:
        return RingMatrix(self.dim, {(c, r): v for (r, c), v in self.items()})

    def trace(self) -> Any:
        out: Any = 0
        for k in range(self.dim):
            v = self.entry(k, k)
            if not _is_zero(v):
                out = v if (isinstance(out, int) and out == 0) else out + v
        return out

    def permute(self, perm: Callable[[int], int], signs: Callable[[int, int], int] | None = None) -> RingMatrix:
        """Relabel indices: new[perm(r), perm(c)] = sign(r, c) * old[r, c]."""
        out = {}
        for (r, c), v in self.items():
            s = signs(r, c) if signs else 1
            out[(perm(r), perm(c))] = v if s == 1 else -v
        return RingMatrix(self.dim, out)


def kron(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    """Ordinary Kronecker product; index (r_a, r_b) -> r_a * dim_b + r_b."""
    db = b.dim
    out = {}
    for (ra, ca), va in a.items():
        for (rb, cb), vb in b.items():
            out[(ra * db + rb, ca * db + cb)] = va * vb
    return RingMatrix(a.dim * db, out)


def _power_slots(dim: int, d: int) -> int:
    k, size = 0, 1
    while size < dim:
        size *= d
        k += 1
    if size != dim:
        raise ValueError(f"dimension {dim} is not a power of {d}")
    return k


def graded_tensor(a: RingMatrix, b: RingMatrix, sig: Signature) -> RingMatrix:
    """Graded Kronecker product.

    Entry ((i,k),(j,l)) is (-1)^{([i]+[j])[k]} a_ij b_kl, the sign rule of
    the graded embedding T_1(u).  Both dimensions must be powers of
    ``sig.total``; composite indices carry the summed parity of their digits.
    """
    d = sig.total
    ka = _power_slots(a.dim, d)
    kb = _power_slots(b.dim, d)
    if not sig.graded:
        return kron(a, b)
    db = b.dim
    out = {}
    for (ra, ca), va in a.items():
        pa = (sig.composite_parity(ra, ka) + sig.composite_parity(ca, ka)) % 2
        for (rb, cb), vb in b.items():
            v = va * vb
            if pa and sig.composite_parity(rb, kb):
                v = -v
            out[(ra * db + rb, ca * db + cb)] = v
    return RingMatrix(a.dim * db, out)


def divide_exact_matrix(num: RingMatrix, den: Poly) -> RingMatrix:
    """Entrywise exact division; the error names the offending entry."""
    out = {}
    for (r, c), v in num.items():
        try:
            out[(r, c)] = divide_exact(v, den)
        except NotDivisibleError as exc:
            raise NotDivisibleError(f"entry ({r},{c}) not divisible", entry=(r, c, v),
                                    remainder=exc.remainder) from None
    return RingMatrix(num.dim, out)


# ---------------------------------------------------------------------------
# exact linear algebra over Q (sparse rows)


class RowEchelon:
    """Incremental sparse Gaussian elimination over Q.

    Rows are dicts column -> Fraction.  ``add`` reduces a row against the
    current pivots and keeps it if independent.
    """

    def __init__(self) -> None:
        self.pivots: dict[Any, dict[Any, Fraction]] = {}
        self.order: list[Any] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[Any, Any]) -> dict[Any, Fraction]:
        row = {k: to_fraction(v) for k, v in row.items() if v}
        changed = True
        while changed and row:
            changed = False
            for col in list(row):
                piv = self.pivots.get(col)
                if piv is not None and col in row:
                    f = row[col]
                    for k, v in piv.items():
                        nv = row.get(k, 0) - f * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
                    changed = True
        return row

    def add(self, row: Mapping[Any, Any]) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        col = min(row, key=_sort_key)
        inv = 1 / row[col]
        row = {k: v * inv for k, v in row.items()}
        # keep pivots fully reduced against the new one
        for pc, prow in self.pivots.items():
            if col in prow:
                f = prow[col]
                for k, v in row.items():
                    nv = prow.get(k, 0) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        self.pivots[col] = row
        self.order.append(col)
        return True

    def contains(self, row: Mapping[Any, Any]) -> bool:
        return not self.reduce(row)


_RHS = ("__rhs__",)


def _sort_key(k: Any) -> Any:
    if k == _RHS:
        return (2, "")
    return (0, k) if isinstance(k, int) else (1, repr(k))


def nullspace(rows: Iterable[Mapping[Any, Any]], columns: list[Any]) -> list[dict[Any, Fraction]]:
    """Basis of {x : row . x = 0 for all rows} over the given columns."""
    ech = RowEchelon()
    for row in rows:
        ech.add(row)
    free = [c for c in columns if c not in ech.pivots]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for pc, prow in ech.pivots.items():
            if f in prow:
                vec[pc] = -prow[f]
        basis.append(vec)
    return basis


def solve_linear(rows: Iterable[tuple[Mapping[Any, Any], Any]], unknowns: list[Any]) -> tuple[dict[Any, Fraction] | None, list[Any]]:
    """Solve sum_k row[k] x_k = rhs.  Returns (particular solution, free unknowns) or (None, [])."""
    rhs_key = _RHS
    ech = RowEchelon()
    for row, rhs in rows:
        full = dict(row)
        if rhs:
            full[rhs_key] = -to_fraction(rhs)
        r = ech.reduce(full)
        if r and set(r) == {rhs_key}:
            return None, []
        ech.add(full)
    if rhs_key in ech.pivots:
        return None, []
    sol = {u: Fraction(0) for u in unknowns}
    for pc, prow in ech.pivots.items():
        sol[pc] = -prow.get(rhs_key, Fraction(0))
    free = [u for u in unknowns if u not in ech.pivots]
    return sol, free


def matrix_rank(m: RingMatrix) -> int:
    ech = RowEchelon()
    for r, row in m.rows.items():
        ech.add(row)
    return ech.rank


def all_index_tuples(d: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(1, d + 1), repeat=k)
