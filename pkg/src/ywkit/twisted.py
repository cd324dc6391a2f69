"""The theta-transpose automorphism, twisted generators S(u) and folding.

tau acts on modes by tau(T_n^{ij}) = eps(n) c(i,j) T_n^{bar j, bar i}, where
c = ThetaVector.transpose_sign and eps(n) = (-1)^n from tau(T(u)) = T^t(-u).
The alternative labelling eps(n) = (-1)^{n+1} is kept behind ``convention``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebra import (
    Gen,
    NotDivisibleError,
    Poly,
    RingMatrix,
    RowEchelon,
    Signature,
    SuperPoly,
    divide_exact,
    make_gen,
    nullspace,
)
from .poisson import TruncatedYangian, _tensor_sign, generators, mode
from .report import Report
from .representations import ModuleData, _from_aux, _kron_identity, skron
from .rmatrix import ThetaVector, build_permutation, build_q_tensor

CONVENTIONS = ("series", "w-label")


@dataclass
class TwistDatum:
    theta: ThetaVector
    convention: str = "series"
    table: dict[Gen, SuperPoly] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown tau convention {self.convention!r}")

    @property
    def sig(self) -> Signature:
        return self.theta.sig

    def level_sign(self, n: int) -> int:
        s = -1 if n % 2 else 1
        return s if self.convention == "series" else -s

    def image(self, g: Gen) -> SuperPoly:
        hit = self.table.get(g)
        if hit is None:
            th = self.theta
            c = self.level_sign(g.level) * th.transpose_sign(g.i, g.j)
            hit = mode(self.sig, g.level, th.bar(g.j), th.bar(g.i)) * c
            self.table[g] = hit
        return hit

    def __call__(self, x: SuperPoly) -> SuperPoly:
        return x.substitute(self.image)

    def mode_image(self, n: int, i: int, j: int) -> SuperPoly:
        """tau(T_n^{ij}) including the constant level."""
        if n == 0:
            return mode(self.sig, 0, i, j)
        return self.image(make_gen(self.sig, n, i, j))


def build_tau(theta: ThetaVector, p: int, convention: str = "series") -> TwistDatum:
    tw = TwistDatum(theta, convention)
    for g in generators(theta.sig, p):
        tw.image(g)
    return tw


def verify_tau(tw: TwistDatum, alg: TruncatedYangian) -> Report:
    """tau^2 = id on generators and {tau x, tau y} = tau {x, y} for generator pairs."""
    report = Report("tau")
    tag = f"sig={alg.sig},theta={tw.theta.kind},conv={tw.convention}"
    gens = generators(alg.sig, alg.p)
    bad = next((g for g in gens if tw(tw.image(g)) != SuperPoly.gen(g)), None)
    report.add(f"tau-involution[{tag}]", bad is None, None if bad is None else {"generator": bad})
    bad = None
    for g, h in itertools.product(gens, repeat=2):
        lhs = alg.bracket(tw.image(g), tw.image(h))
        rhs = tw(alg.bracket_gens(g, h).truncate(alg.p))
        if lhs != rhs:
            bad = {"pair": [g, h], "lhs": lhs, "rhs": rhs}
            break
    report.add(f"tau-automorphism[{tag},p={alg.p}]", bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# S(u) = T(u) tau(T(u))


def _product_sign(sig: Signature, i: int, k: int, j: int) -> int:
    """Sign of the supermatrix product (AB)^{ij} = sum_k sign A^{ik} B^{kj}."""
    return -1 if (sig.parity(i) + sig.parity(k)) * (sig.parity(k) + sig.parity(j)) % 2 else 1


@dataclass
class SGenerators:
    tw: TwistDatum
    p: int
    modes: dict[tuple[int, int, int], SuperPoly]

    @property
    def sig(self) -> Signature:
        return self.tw.sig

    def mode(self, n: int, i: int, j: int) -> SuperPoly:
        return self.modes.get((n, i, j), SuperPoly.zero())

    def max_level(self) -> int:
        return max((n for (n, _, _), v in self.modes.items() if v), default=0)


def build_s(alg: TruncatedYangian, tw: TwistDatum) -> SGenerators:
    sig = alg.sig
    p = alg.p
    modes = {}
    for n in range(0, 2 * p + 1):
        for i in sig.indices():
            for j in sig.indices():
                acc = SuperPoly.zero()
                for a in range(max(0, n - p), min(n, p) + 1):
                    b = n - a
                    for k in sig.indices():
                        left = mode(sig, a, i, k)
                        if not left:
                            continue
                        right = tw.mode_image(b, k, j)
                        if right:
                            acc = acc + left * right * _product_sign(sig, i, k, j)
                modes[(n, i, j)] = acc
    return SGenerators(tw, p, modes)


def _s_series(s: SGenerators, i: int, j: int, var: int) -> Poly:
    return Poly.from_univariate(2, var, {n: s.mode(n, i, j) for n in range(s.max_level() + 1)
                                         if s.mode(n, i, j)})


def verify_twisted_bracket(alg: TruncatedYangian, s: SGenerators, q_sign: int = 1) -> Report:
    """{S1(u), S2(v)} = [r(u-v), S1 S2] + S2 r'(u+v) S1 - S1 r'(u+v) S2.

    With r = P/(u-v), r' = q_sign Q/(u+v) and x = 1/u, y = 1/v the right
    side is xy[(x+y)(PM - MP) + q_sign (y-x)(S2 Q S1 - S1 Q S2)] / ((y-x)(x+y)),
    M = S1 S2.  The numerator is divided exactly and compared entrywise.
    """
    sig = alg.sig
    d = sig.total
    report = Report("twisted-bracket")
    tag = f"sig={sig},theta={s.tw.theta.kind},p={alg.p}"

    def idx(a: int, b: int) -> int:
        return (a - 1) * d + (b - 1)

    Sx = {(i, j): _s_series(s, i, j, 0) for i in sig.indices() for j in sig.indices()}
    Sy = {(i, j): _s_series(s, i, j, 1) for i in sig.indices() for j in sig.indices()}
    S1 = RingMatrix(d * d, {(idx(i, k), idx(j, k)): Sx[i, j] * _tensor_sign(sig, i, j, k)
                            for i in sig.indices() for j in sig.indices() for k in sig.indices()})
    S2 = RingMatrix(d * d, {(idx(i, k), idx(i, l)): Sy[k, l]
                            for i in sig.indices() for k in sig.indices() for l in sig.indices()})
    P = build_permutation(sig).map(lambda c: Poly.const(2, c))
    Q = build_q_tensor(s.tw.theta).map(lambda c: Poly.const(2, c))
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    M = S1 @ S2
    numer = ((P @ M - M @ P) * (x + y) + (S2 @ Q @ S1 - S1 @ Q @ S2) * ((y - x) * q_sign)) * (x * y)
    den = (y - x) * (x + y)
    top = s.max_level()
    bad = None
    for i, j, k, l in itertools.product(sig.indices(), repeat=4):
        entry = numer.entry(idx(i, k), idx(j, l))
        try:
            q = divide_exact(entry, den) if entry else Poly(2)
        except NotDivisibleError as exc:
            bad = {"entry": [i, j, k, l], "reason": "not divisible", "remainder": exc.remainder}
            break
        sgn = _tensor_sign(sig, i, j, k)
        for m in range(1, top + 1):
            for n in range(1, top + 1):
                lhs = alg.bracket(s.mode(m, i, j), s.mode(n, k, l))
                rhs = q.coeff((m, n))
                rhs = rhs * sgn if rhs else SuperPoly.zero()
                if lhs != rhs.truncate(alg.p):
                    bad = {"entry": [i, j, k, l], "modes": [m, n], "lhs": lhs, "rhs": rhs}
                    break
            if bad:
                break
        if bad:
            break
    report.add(f"twisted-bracket[{tag}]", bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# level one: so / sp


def _level_one_matrix(sig: Signature, x: SuperPoly) -> RingMatrix:
    """Linear level-1 element -> matrix via T_1^{ij} <-> E_ij."""
    out = {}
    for mono, c in x.terms.items():
        if len(mono) != 1 or mono[0].level != 1:
            raise ValueError(f"not a linear level-1 element: {x}")
        g = mono[0]
        out[(g.i - 1, g.j - 1)] = c
    return RingMatrix(sig.total, out)


def invariant_form(theta: ThetaVector) -> RingMatrix:
    """J with J_{i, bar i} = theta_i; symmetric for theta0 = +1, skew for -1."""
    return RingMatrix(theta.sig.total, {(i - 1, theta.bar(i) - 1): Fraction(theta.t(i))
                                        for i in theta.sig.indices()})


def classify_level_one(alg: TruncatedYangian, s: SGenerators) -> Report:
    """Level-1 S modes close into the Lie algebra preserving the theta form."""
    sig = alg.sig
    theta = s.tw.theta
    N = sig.total
    tag = f"N={N},theta={theta.kind}"
    report = Report("level-one")
    if sig.graded:
        report.skip(f"level-one[{tag}]", "classification implemented for plain signatures")
        return report
    elems = [(i, j, s.mode(1, i, j)) for i in sig.indices() for j in sig.indices()]
    ech = RowEchelon()
    basis = []
    for i, j, e in elems:
        row = {mono[0]: c for mono, c in e.terms.items()}
        if row and ech.add(row):
            basis.append(e)
    expected = N * (N - 1) // 2 if theta.theta0 == 1 else N * (N + 1) // 2
    mats = [_level_one_matrix(sig, e) for e in basis]
    # dim of {X : X^t = -X} as the kernel of X -> X + X^t
    cols = [(r, c) for r in range(N) for c in range(N)]
    eqs: dict[tuple[int, int], dict] = {}
    for r, c in cols:
        X = RingMatrix(N, {(r, c): Fraction(1)})
        for (a, b), v in (X + theta.matrix_transpose(X)).items():
            eqs.setdefault((a, b), {})[(r, c)] = eqs.get((a, b), {}).get((r, c), 0) + v
    g_dim = len(nullspace(eqs.values(), cols))
    J = invariant_form(theta)
    in_g = all(m + theta.matrix_transpose(m) == 0 for m in mats)
    preserves = all(m.transpose() @ J + J @ m == 0 for m in mats)
    symmetric = J.transpose() == (J if theta.theta0 == 1 else -J)
    hom = None
    for a, b in itertools.combinations(range(len(basis)), 2):
        br = alg.bracket(basis[a], basis[b])
        if _level_one_matrix(sig, br) != mats[a].commutator(mats[b]):
            hom = {"pair": [a, b], "bracket": br}
            break
    kind = "so" if theta.theta0 == 1 else "sp"
    report.add(f"level-one-dim[{tag}]", len(basis) == expected == g_dim,
               {"span": len(basis), "expected": expected, "g_theta": g_dim},
               algebra=f"{kind}({N})", dimension=len(basis))
    report.add(f"level-one-structure[{tag}]", in_g and preserves and symmetric and hom is None,
               {"in_g": in_g, "preserves_form": preserves, "form_symmetry": symmetric, "bracket": hom})
    return report


# ---------------------------------------------------------------------------
# folding


@dataclass
class FoldedAlgebra:
    alg: TruncatedYangian
    tw: TwistDatum
    invariant: dict[int, list[SuperPoly]]
    anti: dict[int, list[SuperPoly]]

    def reduce(self, x: SuperPoly) -> SuperPoly:
        """Image in the quotient: every generator g -> (g + tau g)/2."""
        half = Fraction(1, 2)
        return x.substitute(lambda g: (SuperPoly.gen(g) + self.tw.image(g)) * half)

    def bracket(self, a: SuperPoly, b: SuperPoly) -> SuperPoly:
        return self.reduce(self.alg.bracket(a, b))

    def counts(self) -> dict[int, int]:
        return {n: len(v) for n, v in self.invariant.items()}


def _eigenbasis(tw: TwistDatum, gens: list[Gen], sign: int) -> list[SuperPoly]:
    ech = RowEchelon()
    out = []
    for g in gens:
        e = (SuperPoly.gen(g) + tw.image(g) * sign) * Fraction(1, 2)
        row = {mono[0]: c for mono, c in e.terms.items()}
        if row and ech.add(row):
            out.append(e)
    return out


def fold_quotient(alg: TruncatedYangian, tw: TwistDatum) -> tuple[FoldedAlgebra, Report]:
    """Quotient by the ideal generated by g - tau(g).

    The tau-fixed subalgebra A^tau is Poisson-closed and A^tau / (J cap A^tau)
    is the folded algebra; J cap A^tau is spanned by products of an even
    number of anti-invariant generators.  The checks below confirm the
    ingredients (invariance of invariant brackets, ideal property of the
    anti-invariant products) and the Jacobi identity of the folded bracket.
    """
    sig, theta = alg.sig, tw.theta
    if sig.graded:
        raise ValueError("folding is defined for plain signatures")
    if theta.theta0 == 1 and sig.total % 2 and alg.p % 2 == 0:
        raise ValueError("odd orthogonal rank requires odd p for folding")
    inv = {n: _eigenbasis(tw, generators(sig, n, n), 1) for n in range(1, alg.p + 1)}
    anti = {n: _eigenbasis(tw, generators(sig, n, n), -1) for n in range(1, alg.p + 1)}
    fold = FoldedAlgebra(alg, tw, inv, anti)
    tag = f"N={sig.total},p={alg.p},theta={theta.kind}"
    report = Report("fold")
    counts_ok = all(len(inv[n]) + len(anti[n]) == sig.total ** 2 for n in inv)
    eig = {n: _tau_eigen_count(tw, generators(sig, n, n)) for n in inv}
    report.add(f"fold-counts[{tag}]", counts_ok and all(eig[n] == len(inv[n]) for n in inv),
               {"invariant": fold.counts(), "eigen": eig}, counts=fold.counts())
    inv_all = [e for n in inv for e in inv[n]]
    anti_all = [e for n in anti for e in anti[n]]
    bad = None
    for a, b in itertools.combinations_with_replacement(inv_all, 2):
        br = alg.bracket(a, b)
        if tw(br) != br:
            bad = {"pair": [a, b], "bracket": br}
            break
    report.add(f"fold-invariant-closure[{tag}]", bad is None, bad)
    bad = None
    for x1, x2 in itertools.combinations_with_replacement(anti_all, 2):
        prod = x1 * x2
        for a in inv_all:
            if fold.reduce(alg.bracket(prod, a)):
                bad = {"anti": [x1, x2], "invariant": a}
                break
        if bad:
            break
    report.add(f"fold-ideal[{tag}]", bad is None, bad)
    bad = None
    for a, b, c in itertools.combinations(inv_all, 3):
        jac = (fold.bracket(a, fold.bracket(b, c)) + fold.bracket(b, fold.bracket(c, a))
               + fold.bracket(c, fold.bracket(a, b)))
        if jac:
            bad = {"triple": [a, b, c], "jacobiator": jac}
            break
    report.add(f"fold-jacobi[{tag}]", bad is None, bad)
    level_one = inv.get(1, [])
    mats = [_level_one_matrix(sig, e) for e in level_one]
    J = invariant_form(theta)
    kind = "so" if theta.theta0 == 1 else "sp"
    expected = sig.total * (sig.total - 1) // 2 if theta.theta0 == 1 else sig.total * (sig.total + 1) // 2
    ok = len(mats) == expected and all(m.transpose() @ J + J @ m == 0 for m in mats)
    for a, b in itertools.combinations(range(len(level_one)), 2):
        if _level_one_matrix(sig, fold.bracket(level_one[a], level_one[b])) != mats[a].commutator(mats[b]):
            ok = False
    report.add(f"fold-level-one[{tag}]", ok, {"dimension": len(mats)}, algebra=f"{kind}({sig.total})")
    return fold, report


def _tau_eigen_count(tw: TwistDatum, gens: list[Gen]) -> int:
    """dim ker(tau - 1) on the span of ``gens`` (tau is linear there)."""
    rows: dict[Gen, dict[Gen, Fraction]] = {}
    for g in gens:
        img = tw.image(g)
        col = {mono[0]: c for mono, c in img.terms.items()}
        col[g] = col.get(g, 0) - 1
        for h, c in col.items():
            if c:
                rows.setdefault(h, {})[g] = c
    return len(nullspace(rows.values(), gens))


# ---------------------------------------------------------------------------
# quantum S(u) on modules


def _poly_ops(m: ModuleData, sign_flip: bool) -> dict[int, RingMatrix]:
    """T(u) (or T(-u)) coefficients on aux (x) V, level 0 included."""
    N = m.sig.total
    out = {0: RingMatrix.identity(N * m.dim)}
    for n in range(1, m.max_level() + 1):
        op = m.aux_operator(n)
        out[n] = -op if (sign_flip and n % 2) else op
    return out


def _tau_ops(m: ModuleData, theta: ThetaVector) -> dict[int, RingMatrix]:
    """sum_ij E_ij (x) tau(T^{ij}(u)) with tau(T^{ij}(u)) = c(i,j) T^{bar j bar i}(-u)."""
    sig = m.sig
    pa = [sig.parity(i) for i in sig.indices()]
    out = {}
    for n in range(0, m.max_level() + 1):
        acc = RingMatrix.zeros(sig.total * m.dim)
        for i in sig.indices():
            for j in sig.indices():
                X = m.mode(n, theta.bar(j), theta.bar(i))
                if not X:
                    continue
                c = theta.transpose_sign(i, j) * (-1 if n % 2 else 1)
                acc = acc + skron(RingMatrix.unit(sig.total, i, j), pa, X * c, m.parities)
        out[n] = acc
    return out


def _mul_series(a: dict[int, RingMatrix], b: dict[int, RingMatrix]) -> dict[int, RingMatrix]:
    out: dict[int, RingMatrix] = {}
    for i, A in a.items():
        for j, B in b.items():
            prod = A @ B
            if prod:
                out[i + j] = out[i + j] + prod if i + j in out else prod
    return out


def s_on_module(m: ModuleData, theta: ThetaVector) -> dict[int, RingMatrix]:
    """S(u) = T(u) tau(T(u)) as aux (x) V operator coefficients in 1/u."""
    return _mul_series(_poly_ops(m, False), _tau_ops(m, theta))


BiSeries = dict  # (a, b) -> RingMatrix, coefficient of x^a y^b


def _bi_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    out: BiSeries = {}
    for (i, j), A in a.items():
        for (k, l), B in b.items():
            prod = A @ B
            if prod:
                key = (i + k, j + l)
                out[key] = out[key] + prod if key in out else prod
    return {k: v for k, v in out.items() if v}


def _slot(m: ModuleData, series: dict[int, RingMatrix], slot: int, var: int) -> BiSeries:
    """Put an aux (x) V operator series into slot 1 or 2 of aux (x) aux (x) V."""
    sig = m.sig
    N, d = sig.total, m.dim
    pa = [sig.parity(i) for i in sig.indices()]
    paux_v = [x + y for x in pa for y in m.parities]
    one = RingMatrix.identity(N)
    out = {}
    for n, op in series.items():
        blocks = _from_aux(sig, d, m.parities, {1: op})
        acc = RingMatrix.zeros(N * N * d)
        for (_, i, j), X in blocks.items():
            E = RingMatrix.unit(N, i, j)
            if slot == 1:
                acc = acc + skron(E, pa, skron(one, pa, X, m.parities), paux_v)
            else:
                acc = acc + skron(one, pa, skron(E, pa, X, m.parities), paux_v)
        if acc:
            out[(n, 0) if var == 0 else (0, n)] = acc
    return out


def verify_rsrs_on_module(m: ModuleData, theta: ThetaVector, q_sign: int = -1,
                          use_q: bool = True) -> Report:
    """R(u-v) S1(u) R'(u+v) S2(v) = S2(v) R'(u+v) S1(u) R(u-v).

    R' = (tau (x) 1) R carries the spectral flip of tau, so the default
    q_sign = -1 means R'(u+v) = I + Q/(u+v); q_sign = +1 is the unflipped
    I - Q/(u+v).  With denominators cleared
    (y-x) R = (y-x) - xy P and (x+y) R' = (x+y) - q_sign xy Q.
    ``use_q=False`` replaces Q by P (negative control).
    """
    sig = m.sig
    N, d = sig.total, m.dim
    S = s_on_module(m, theta)
    S1 = _slot(m, S, 1, 0)
    S2 = _slot(m, S, 2, 1)
    I = RingMatrix.identity(N * N * d)
    P = _kron_identity(build_permutation(sig), d)
    Qm = _kron_identity(build_q_tensor(theta) if use_q else build_permutation(sig), d)
    R = {(0, 1): I, (1, 0): -I, (1, 1): -P}
    Rp = {(1, 0): I, (0, 1): I, (1, 1): Qm * (-q_sign)}
    lhs = _bi_mul(_bi_mul(_bi_mul(R, S1), Rp), S2)
    rhs = _bi_mul(_bi_mul(_bi_mul(S2, Rp), S1), R)
    report = Report("rsrs")
    bad = None
    for key in sorted(set(lhs) | set(rhs)):
        a = lhs.get(key, RingMatrix.zeros(I.dim))
        b = rhs.get(key, RingMatrix.zeros(I.dim))
        if a != b:
            (r, c), v = min((a - b).items())
            bad = {"monomial_xy": list(key), "entry": [r, c], "difference": v}
            break
    label = "rsrs" if use_q else "rsrs-with-P"
    report.add(f"{label}[N={N},theta={theta.kind},dim={d},params={[str(a) for a in m.params]}]",
               bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# symmetry relation


def _transpose_series(sig: Signature, theta: ThetaVector, get: Callable[[int, int], SuperPoly | RingMatrix]):
    return {(i, j): get(theta.bar(j), theta.bar(i)) * theta.transpose_sign(i, j)
            for i in sig.indices() for j in sig.indices()}


def verify_s_symmetry_classical(s: SGenerators) -> Report:
    """Classical limit of the symmetry relation: S^t(u) = S(-u) mode by mode.

    The displayed relation tau(S(u)) = S(-u) + (S(u) - S(-u))/(2u) carries
    the 1/(2u) term at order hbar; it is checked literally on modules.
    """
    sig, theta = s.sig, s.tw.theta
    report = Report("s-symmetry")
    bad = None
    for n in range(0, s.max_level() + 1):
        tr = _transpose_series(sig, theta, lambda a, b: s.mode(n, a, b))
        for (i, j), lhs in tr.items():
            rhs = s.mode(n, i, j) * (-1 if n % 2 else 1)
            if lhs != rhs:
                bad = {"level": n, "entry": [i, j], "lhs": lhs, "rhs": rhs}
                break
        if bad:
            break
    report.add(f"s-symmetry-classical[sig={sig},theta={theta.kind},p={s.p}]", bad is None, bad)
    return report


def verify_s_symmetry_module(m: ModuleData, theta: ThetaVector) -> Report:
    """tau(S(u)) = S(-u) + (S(u) - S(-u))/(2u) on a module, with tau(S)^{ij} = c(i,j) S^{bar j bar i}.

    Multiplying by 2 and writing x = 1/u, coefficient n of
    2 tau(S) - 2 S(-u) equals coefficient n-1 of S(u) - S(-u).
    """
    sig = m.sig
    S = s_on_module(m, theta)
    blocks = {n: _from_aux(sig, m.dim, m.parities, {1: op}) for n, op in S.items()}
    report = Report("s-symmetry")
    top = max(S) + 1
    bad = None
    zero = RingMatrix.zeros(m.dim)

    def entry(n: int, i: int, j: int) -> RingMatrix:
        return blocks.get(n, {}).get((1, i, j), zero)

    for n in range(0, top + 1):
        for i in sig.indices():
            for j in sig.indices():
                tau_s = entry(n, theta.bar(j), theta.bar(i)) * theta.transpose_sign(i, j)
                flip = -1 if n % 2 else 1
                lhs = (tau_s - entry(n, i, j) * flip) * 2
                prev = n - 1
                rhs = (entry(prev, i, j) - entry(prev, i, j) * (-1 if prev % 2 else 1)) if prev >= 0 else zero
                if lhs != rhs:
                    bad = {"level": n, "entry": [i, j]}
                    break
            if bad:
                break
        if bad:
            break
    report.add(f"s-symmetry-module[sig={sig},theta={theta.kind},dim={m.dim}]", bad is None, bad)
    return report
