"""Rational R-matrices, their classical limit and the twisted variant.

All spectral-parameter dependence is kept as a matrix polynomial numerator
over a scalar polynomial denominator, so identity checks compare
polynomials after clearing denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .algebra import Poly, RingMatrix, Signature, kron, to_fraction
from .report import Report

# ---------------------------------------------------------------------------
# twist data


@dataclass(frozen=True)
class ThetaVector:
    """Signs theta_i and theta_0 defining the theta-transpose.

    The bar map is i -> m+1-i on the even block and 2m+n+1-i on the odd
    block (i -> N+1-i in the plain case).  Validity is
    (-1)^{[i]} theta_i theta_bar(i) = theta_0 for every i.
    """

    sig: Signature
    theta: tuple[int, ...]
    theta0: int

    def __post_init__(self) -> None:
        if len(self.theta) != self.sig.total:
            raise ValueError("theta has the wrong length")
        if any(t not in (1, -1) for t in self.theta) or self.theta0 not in (1, -1):
            raise ValueError("theta entries must be +1 or -1")
        if self.sig.graded and self.theta0 != 1:
            raise ValueError("super twist requires theta0 = +1")
        if self.sig.graded and self.sig.n % 2:
            raise ValueError("super twist requires an odd block of even size")
        for i in self.sig.indices():
            lhs = (-1) ** self.sig.parity(i) * self.t(i) * self.t(self.bar(i))
            if lhs != self.theta0:
                if self.theta0 == -1 and not self.sig.graded and self.sig.total % 2:
                    raise ValueError("symplectic twist requires even N")
                raise ValueError(f"theta violates (-1)^[i] theta_i theta_bar(i) = theta0 at i={i}")

    def t(self, i: int) -> int:
        return self.theta[i - 1]

    def bar(self, i: int) -> int:
        m, n = self.sig.m, self.sig.n
        return m + 1 - i if i <= m else 2 * m + n + 1 - i

    @property
    def kind(self) -> str:
        if self.sig.graded:
            return "super"
        return "plus" if self.theta0 == 1 else "minus"

    @classmethod
    def plus(cls, sig: Signature) -> ThetaVector:
        if sig.graded:
            return cls.super_plus(sig)
        return cls(sig, (1,) * sig.total, 1)

    @classmethod
    def minus(cls, sig: Signature) -> ThetaVector:
        if sig.graded:
            raise ValueError("the symplectic class is defined for plain signatures only")
        if sig.total % 2:
            raise ValueError("symplectic twist requires even N")
        N = sig.total
        return cls(sig, tuple(1 if 2 * i < N + 1 else -1 for i in sig.indices()), -1)

    @classmethod
    def super_plus(cls, sig: Signature) -> ThetaVector:
        m, n = sig.m, sig.n
        if n % 2:
            raise ValueError("super twist requires an odd block of even size")
        theta = [1] * m + [1 if 2 * i < 2 * m + n + 1 else -1 for i in range(m + 1, m + n + 1)]
        return cls(sig, tuple(theta), 1)

    @classmethod
    def from_class(cls, sig: Signature, name: str) -> ThetaVector:
        if name in ("plus", "+"):
            return cls.plus(sig)
        if name in ("minus", "-"):
            return cls.minus(sig)
        raise ValueError(f"unknown theta class {name!r}")

    def transpose_sign(self, i: int, j: int) -> int:
        """Coefficient c with tau(T^{ij}(u)) = c T^{bar j, bar i}(-u)."""
        s = self.sig
        graded = (-1) ** (s.parity(i) * (s.parity(j) + 1))
        return graded * self.t(i) * self.t(j)

    def matrix_transpose(self, a: RingMatrix) -> RingMatrix:
        """The theta-transpose on N x N matrices: E_ab -> c E_{bar b, bar a}.

        Chosen so that tau(T(u)) = T^t(-u) entrywise, i.e.
        (a^t)_{ij} = transpose_sign(i, j) * a_{bar j, bar i}.
        """
        out = {}
        for (r, c), v in a.items():
            a_, b_ = r + 1, c + 1
            i, j = self.bar(b_), self.bar(a_)
            out[(i - 1, j - 1)] = self.transpose_sign(i, j) * v
        return RingMatrix(a.dim, out)


# ---------------------------------------------------------------------------
# spectral matrices


@dataclass(frozen=True)
class SpectralMatrix:
    """num(x)/den(x): num maps degree -> coefficient matrix, den degree -> scalar."""

    sig: Signature
    slots: int
    num: Mapping[int, RingMatrix]
    den: Mapping[int, Fraction]

    @property
    def dim(self) -> int:
        return self.sig.total ** self.slots

    def numerator_at(self, form: Poly) -> RingMatrix:
        """Numerator with x replaced by a linear form (matrix of Poly entries)."""
        out = RingMatrix.zeros(self.dim)
        power = Poly.const(form.nvars, Fraction(1))
        for k in range(max(self.num) + 1):
            if k in self.num:
                coef = power
                out = out + self.num[k].map(lambda v, c=coef: c * v)
            power = power * form
        return out

    def denominator_at(self, form: Poly) -> Poly:
        out = Poly(form.nvars)
        power = Poly.const(form.nvars, Fraction(1))
        for k in range(max(self.den) + 1):
            if k in self.den:
                out = out + power * self.den[k]
            power = power * form
        return out

    def evaluate(self, x: Fraction | int) -> RingMatrix:
        x = to_fraction(x)
        d = sum(c * x**k for k, c in self.den.items())
        if not d:
            raise ZeroDivisionError(f"pole at x={x}")
        out = RingMatrix.zeros(self.dim)
        for k, m in self.num.items():
            out = out + m * (x**k / d)
        return out

    def scaled(self, c: Fraction | int) -> SpectralMatrix:
        c = to_fraction(c)
        return SpectralMatrix(self.sig, self.slots, {k: m * c for k, m in self.num.items()}, self.den)


def build_permutation(sig: Signature) -> RingMatrix:
    """Graded flip P = sum (-1)^{[i][j]} E_ij (x) E_ji (plain Kronecker entries)."""
    d = sig.total
    out = {}
    for i in sig.indices():
        for j in sig.indices():
            sign = -1 if sig.parity(i) and sig.parity(j) else 1
            out[((i - 1) * d + (j - 1), (j - 1) * d + (i - 1))] = Fraction(sign)
    return RingMatrix(d * d, out)


def build_rational_r(sig: Signature) -> SpectralMatrix:
    """R(x) = I - P/x, stored as (x I - P)/x."""
    d2 = sig.total**2
    return SpectralMatrix(sig, 2, {1: RingMatrix.identity(d2), 0: -build_permutation(sig)},
                          {1: Fraction(1)})


def build_classical_r(sig: Signature) -> SpectralMatrix:
    """r(x) = P/x."""
    return SpectralMatrix(sig, 2, {0: build_permutation(sig)}, {1: Fraction(1)})


def build_q_tensor(theta: ThetaVector, sig: Signature | None = None) -> RingMatrix:
    """Q = sum theta_i theta_j E_ij (x) E_{bar i, bar j}.

    For graded signatures no closed form is used: Q is (tau (x) 1)(P) with
    tau the theta-transpose acting on the first slot.
    """
    sig = sig or theta.sig
    if sig != theta.sig:
        raise ValueError("theta built for a different signature")
    d = sig.total
    if not sig.graded:
        out = {}
        for i in sig.indices():
            for j in sig.indices():
                key = ((i - 1) * d + theta.bar(i) - 1, (j - 1) * d + theta.bar(j) - 1)
                out[key] = Fraction(theta.t(i) * theta.t(j))
        return RingMatrix(d * d, out)
    return _q_via_tau(theta)


def _q_via_tau(theta: ThetaVector) -> RingMatrix:
    sig = theta.sig
    d = sig.total
    out: dict[tuple[int, int], Fraction] = {}
    P = build_permutation(sig)
    for (r, c), v in P.items():
        i, k = divmod(r, d)
        j, l = divmod(c, d)
        # first-slot matrix unit E_{i+1, j+1}
        first = theta.matrix_transpose(RingMatrix.unit(d, i + 1, j + 1))
        for (a, b), w in first.items():
            key = (a * d + k, b * d + l)
            out[key] = out.get(key, 0) + v * w
    return RingMatrix(d * d, out)


def build_primed_r(theta: ThetaVector) -> SpectralMatrix:
    """R'(x) = I - Q/x."""
    d2 = theta.sig.total**2
    return SpectralMatrix(theta.sig, 2, {1: RingMatrix.identity(d2), 0: -build_q_tensor(theta)},
                          {1: Fraction(1)})


def build_classical_r_primed(theta: ThetaVector) -> SpectralMatrix:
    return SpectralMatrix(theta.sig, 2, {0: build_q_tensor(theta)}, {1: Fraction(1)})


# ---------------------------------------------------------------------------
# embeddings into three auxiliary slots


def embed(m: RingMatrix, pair: tuple[int, int], sig: Signature, nslots: int = 3) -> RingMatrix:
    """Place a two-slot matrix into slots ``pair`` of an ``nslots``-fold product.

    Graded signs follow graded_tensor for the adjacent cases and conjugation
    by the graded flip for non-adjacent slots; ``m`` must be even.
    """
    d = sig.total
    a, b = pair
    if not (0 <= a < b < nslots):
        raise ValueError(f"bad slot pair {pair}")
    par = sig.parity
    out = {}
    others = [s for s in range(nslots) if s not in (a, b)]
    for (r, c), v in m.items():
        i, k = divmod(r, d)
        j, l = divmod(c, d)
        for rest in _digits_product(d, len(others)):
            row = [0] * nslots
            col = [0] * nslots
            row[a], row[b], col[a], col[b] = i, k, j, l
            for s, x in zip(others, rest):
                row[s] = col[s] = x
            sign = 1
            if sig.graded:
                # slots strictly between a and b are passed by the second-slot entry
                between = sum(par(row[s] + 1) for s in others if a < s < b)
                if between % 2 and (par(k + 1) + par(l + 1)) % 2:
                    sign = -1
            out[(_compose(row, d), _compose(col, d))] = v if sign == 1 else -v
    return RingMatrix(d**nslots, out)


def _digits_product(d: int, k: int):
    if k == 0:
        yield ()
        return
    for head in range(d):
        for tail in _digits_product(d, k - 1):
            yield (head,) + tail


def _compose(digits: list[int], d: int) -> int:
    out = 0
    for x in digits:
        out = out * d + x
    return out


def _spectral_forms() -> dict[str, Poly]:
    u = Poly.var(2, 0)
    v = Poly.var(2, 1)
    return {"u-v": u - v, "u": u, "v": v, "u+v": u + v}


def _first_difference(lhs: RingMatrix, rhs: RingMatrix) -> dict | None:
    diff = lhs - rhs
    for (r, c), poly in sorted(diff.items()):
        exps, coeff = sorted(poly.terms.items())[0]
        return {"entry": [r, c], "monomial_uv": list(exps), "coefficient": coeff}
    return None


def check_ybe(R: SpectralMatrix, name: str = "ybe") -> Report:
    """R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v) after clearing denominators."""
    sig = R.sig
    f = _spectral_forms()
    r12 = embed(R.numerator_at(f["u-v"]), (0, 1), sig)
    r13 = embed(R.numerator_at(f["u"]), (0, 2), sig)
    r23 = embed(R.numerator_at(f["v"]), (1, 2), sig)
    lhs = r12 @ r13 @ r23
    rhs = r23 @ r13 @ r12
    report = Report(name)
    report.add(f"ybe[sig={sig}]", lhs == rhs, _first_difference(lhs, rhs), dim=lhs.dim)
    return report


def check_unitarity(R: SpectralMatrix) -> Report:
    """R(x) R(-x) = (1 - x^-2) I, i.e. (xI - P)(-xI - P) = (1 - x^2) I."""
    sig = R.sig
    x = Poly.var(1, 0)
    a = R.numerator_at(x)
    b = R.numerator_at(-x)
    lhs = a @ b
    # denominators: x * (-x) = -x^2, target (1 - x^-2) = (x^2 - 1)/x^2
    target = RingMatrix.identity(R.dim, Poly(1, {(0,): Fraction(1), (2,): Fraction(-1)}))
    report = Report("unitarity")
    diff = lhs - target
    report.add(f"unitarity[sig={sig}]", not diff,
               None if not diff else {"entry": list(sorted(k for k, _ in diff.items())[0])})
    return report


def check_classical_ybe(r: SpectralMatrix, name: str = "classical-ybe") -> Report:
    """[r12(u-v), r13(u)] + [r12(u-v), r23(v)] + [r13(u), r23(v)] = 0 exactly."""
    sig = r.sig
    f = _spectral_forms()
    n12 = embed(r.numerator_at(f["u-v"]), (0, 1), sig)
    n13 = embed(r.numerator_at(f["u"]), (0, 2), sig)
    n23 = embed(r.numerator_at(f["v"]), (1, 2), sig)
    d12 = r.denominator_at(f["u-v"])
    d13 = r.denominator_at(f["u"])
    d23 = r.denominator_at(f["v"])
    total = (n12.commutator(n13) * d23 + n12.commutator(n23) * d13
             + n13.commutator(n23) * d12)
    report = Report(name)
    report.add(f"classical-ybe[sig={sig}]", not total,
               _first_difference(total, RingMatrix.zeros(total.dim)))
    return report


def check_q_from_tau(theta: ThetaVector) -> bool:
    """Q equals the slot-wise theta-transpose of P (matrix identity)."""
    sig = theta.sig
    d = sig.total
    P = build_permutation(sig)
    acc = RingMatrix.zeros(d * d)
    # P = sum_{ij} s_ij E_ij (x) E_ji; transform the first factor of each term
    for i in sig.indices():
        for j in sig.indices():
            s = P.entry((i - 1) * d + (j - 1), (j - 1) * d + (i - 1))
            first = theta.matrix_transpose(RingMatrix.unit(d, i, j))
            acc = acc + kron(first, RingMatrix.unit(d, j, i)) * s
    return acc == build_q_tensor(theta)
