"""Classical (truncated) Yangians as Poisson algebras.

Mode brackets are derived from the generating-function relation
``{L1(u), L2(v)} = [r12(u-v), L1(u) L2(v)]`` by expanding in x = 1/u,
y = 1/v, dividing the commutator numerator exactly by (y - x) and reading
off coefficients.  Everything downstream (Leibniz extension, Jacobi,
truncation, centre, adjoint action) consumes that table.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

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
)
from .report import Report
from .rmatrix import build_permutation

BracketTable = dict  # dict[tuple[Gen, Gen], SuperPoly]


def generators(sig: Signature, max_level: int, min_level: int = 1) -> list[Gen]:
    return [make_gen(sig, n, i, j)
            for n in range(min_level, max_level + 1)
            for i in sig.indices() for j in sig.indices()]


def mode(sig: Signature, n: int, i: int, j: int) -> SuperPoly:
    """T_n^{ij} as a ring element; level 0 gives delta^{ij}."""
    if n == 0:
        return SuperPoly.const(1 if i == j else 0)
    return SuperPoly.gen(make_gen(sig, n, i, j))


def _series(sig: Signature, i: int, j: int, degree: int, var: int) -> Poly:
    """L^{ij} = delta^{ij} + sum_{n<=degree} T_n^{ij} x_var^n."""
    coeffs = {n: mode(sig, n, i, j) for n in range(degree + 1)}
    return Poly.from_univariate(2, var, {n: c for n, c in coeffs.items() if c})


_ONE = Fraction(1)


def _mono(m: tuple) -> SuperPoly:
    return SuperPoly({m: _ONE}, _trusted=True)


def _tensor_sign(sig: Signature, i: int, j: int, k: int) -> int:
    return -1 if (sig.parity(i) + sig.parity(j)) * sig.parity(k) % 2 else 1


def derive_mode_brackets(sig: Signature, level_cap: int) -> BracketTable:
    """Brackets {T_m^{ij}, T_n^{kl}} for all 1 <= m, n <= level_cap.

    The series are cut at degree 2*level_cap - 1, which is exactly enough
    for every coefficient read off here.
    """
    if level_cap < 1:
        raise ValueError("level cap must be >= 1")
    d = sig.total
    D = 2 * level_cap - 1
    Lx = {(i, j): _series(sig, i, j, D, 0) for i in sig.indices() for j in sig.indices()}
    Ly = {(i, j): _series(sig, i, j, D, 1) for i in sig.indices() for j in sig.indices()}

    def idx(a: int, b: int) -> int:
        return (a - 1) * d + (b - 1)

    # graded embeddings L1 = sum s(i,j,k) L^{ij} E_ij (x) E_kk, L2 = sum L^{kl} I (x) E_kl
    L1 = RingMatrix(d * d, {(idx(i, k), idx(j, k)): Lx[i, j] * _tensor_sign(sig, i, j, k)
                            for i in sig.indices() for j in sig.indices() for k in sig.indices()})
    L2 = RingMatrix(d * d, {(idx(i, k), idx(i, l)): Ly[k, l]
                            for i in sig.indices() for k in sig.indices() for l in sig.indices()})
    P = build_permutation(sig).map(lambda c: Poly.const(2, c))
    M = L1 @ L2
    numer = P @ M - M @ P
    x = Poly.var(2, 0)
    y = Poly.var(2, 1)
    den = y - x
    xy = x * y
    table: BracketTable = {}
    for i, j, k, l in itertools.product(sig.indices(), repeat=4):
        entry = numer.entry(idx(i, k), idx(j, l))
        if entry:
            try:
                q = divide_exact(entry, den) * xy
            except NotDivisibleError as exc:
                raise NotDivisibleError(
                    f"commutator numerator for ({i}{j},{k}{l}) not divisible by (u-v)",
                    entry=(i, j, k, l), remainder=exc.remainder) from None
        else:
            q = Poly(2)
        s = _tensor_sign(sig, i, j, k)
        for m in range(1, level_cap + 1):
            for n in range(1, level_cap + 1):
                c = q.coeff((m, n))
                val = c * s if c else SuperPoly.zero()
                table[(make_gen(sig, m, i, j), make_gen(sig, n, k, l))] = val
    return table


@dataclass
class TruncatedYangian:
    """Classical Y_p for a signature, with a bracket table up to ``cap``.

    ``cap`` defaults to max(2p-1, p+1): enough for untruncated Jacobi on
    levels <= p and for the ideal-closure check.
    """

    sig: Signature
    p: int
    cap: int | None = None
    table: BracketTable = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("truncation level p must be >= 1")
        if self.cap is None:
            self.cap = max(2 * self.p - 1, self.p + 1)
        if self.table is None:
            self.table = derive_mode_brackets(self.sig, self.cap)
        self._mono_cache: dict = {}

    @property
    def generators(self) -> list[Gen]:
        return generators(self.sig, self.p)

    @property
    def generator_count(self) -> int:
        return self.p * self.sig.total**2

    def gen(self, n: int, i: int, j: int) -> SuperPoly:
        return mode(self.sig, n, i, j)

    def bracket_gens(self, g: Gen, h: Gen) -> SuperPoly:
        try:
            return self.table[(g, h)]
        except KeyError:
            raise KeyError(f"bracket {{{g}, {h}}} beyond the derived level cap {self.cap}") from None

    def with_table(self, table: BracketTable) -> TruncatedYangian:
        """Same algebra with a replaced table (used for negative controls)."""
        return TruncatedYangian(self.sig, self.p, self.cap, table)

    # Leibniz extension
    def _gen_mono(self, g: Gen, mono: tuple) -> SuperPoly:
        out = SuperPoly.zero()
        passed = 0
        for k, h in enumerate(mono):
            b = self.bracket_gens(g, h)
            if b:
                term = _mono(mono[:k]) * b * _mono(mono[k + 1:])
                out = out + (-term if (g.parity * passed) % 2 else term)
            passed += h.parity
        return out

    def _mono_mono(self, m1: tuple, m2: tuple) -> SuperPoly:
        key = (m1, m2)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        p2 = sum(h.parity for h in m2) % 2
        out = SuperPoly.zero()
        for k, g in enumerate(m1):
            b = self._gen_mono(g, m2)
            if not b:
                continue
            after = sum(h.parity for h in m1[k + 1:]) % 2
            term = _mono(m1[:k]) * b * _mono(m1[k + 1:])
            out = out + (-term if (p2 * after) % 2 else term)
        self._mono_cache[key] = out
        return out

    def bracket(self, a: SuperPoly, b: SuperPoly, truncate: bool = True) -> SuperPoly:
        """Graded Poisson bracket; in truncated mode levels > p are set to zero."""
        if truncate:
            a = a.truncate(self.p)
            b = b.truncate(self.p)
        out = SuperPoly.zero()
        for m1, c1 in a.terms.items():
            if not m1:
                continue
            for m2, c2 in b.terms.items():
                if not m2:
                    continue
                out = out + self._mono_mono(m1, m2) * (c1 * c2)
        return out.truncate(self.p) if truncate else out


def poisson_bracket(x: SuperPoly, y: SuperPoly, alg: TruncatedYangian, truncate: bool = True) -> SuperPoly:
    return alg.bracket(x, y, truncate=truncate)


def _sign(p: int) -> int:
    return -1 if p % 2 else 1


def verify_antisymmetry(alg: TruncatedYangian, level: int | None = None) -> Report:
    level = level or alg.p
    gens = generators(alg.sig, level)
    report = Report("antisymmetry")
    bad = None
    for g, h in itertools.product(gens, repeat=2):
        lhs = alg.bracket_gens(g, h)
        rhs = -alg.bracket_gens(h, g) * _sign(g.parity * h.parity)
        if lhs != rhs:
            bad = {"pair": [g, h], "gh": lhs, "hg": alg.bracket_gens(h, g)}
            break
    report.add(f"antisymmetry[sig={alg.sig},level<={level}]", bad is None, bad, pairs=len(gens) ** 2)
    return report


def jacobiator(alg: TruncatedYangian, a: SuperPoly, b: SuperPoly, c: SuperPoly,
               pa: int, pb: int, pc: int, truncate: bool) -> SuperPoly:
    br = alg.bracket
    return (br(a, br(b, c, truncate), truncate) * _sign(pa * pc)
            + br(b, br(c, a, truncate), truncate) * _sign(pb * pa)
            + br(c, br(a, b, truncate), truncate) * _sign(pc * pb))


def verify_jacobi(alg: TruncatedYangian, level: int | None = None,
                  modes: Iterable[str] = ("truncated", "untruncated")) -> Report:
    """Graded Jacobi over all generator triples with levels <= ``level``."""
    level = level or alg.p
    gens = generators(alg.sig, level)
    report = Report("jacobi")
    for mode_name in modes:
        truncate = mode_name == "truncated"
        bad = None
        count = 0
        for g1, g2, g3 in itertools.product(gens, repeat=3):
            count += 1
            j = jacobiator(alg, SuperPoly.gen(g1), SuperPoly.gen(g2), SuperPoly.gen(g3),
                           g1.parity, g2.parity, g3.parity, truncate)
            if j:
                bad = {"triple": [g1, g2, g3], "jacobiator": j}
                break
        report.add(f"jacobi-{mode_name}[sig={alg.sig},p={alg.p},level<={level}]", bad is None, bad,
                   triples=count)
    return report


def verify_truncation_ideal(alg: TruncatedYangian) -> Report:
    """{g, h} lies in J_p for g of level <= p and h of level in (p, max(2p-1, p+1)]."""
    p = alg.p
    top = max(2 * p - 1, p + 1)
    inner = generators(alg.sig, p)
    ideal = generators(alg.sig, top, min_level=p + 1)
    report = Report("truncation-ideal")
    bad = None
    for g in inner:
        for h in ideal:
            b = alg.bracket(SuperPoly.gen(g), SuperPoly.gen(h), truncate=False)
            escaping = [m for m in b.terms if all(x.level <= p for x in m)]
            if escaping:
                bad = {"pair": [g, h], "bracket": b, "escaping_monomials": [list(m) for m in escaping]}
                break
        if bad:
            break
    report.add(f"ideal[sig={alg.sig},p={p}]", bad is None, bad,
               pairs=len(inner) * len(ideal), ideal_levels=[p + 1, top])
    return report


# ---------------------------------------------------------------------------
# Lie algebra data


@dataclass
class LieData:
    """Structure constants of a matrix Lie algebra in a given basis.

    ``f[a][b]`` maps c -> f_{ab}^c with [X_a, X_b] = f_{ab}^c X_c; ``eta``
    is the trace form tr(X_a X_b) and ``eta_inv`` its inverse.
    """

    basis: list[RingMatrix]
    labels: list
    f: list[list[dict[int, Fraction]]]
    eta: list[list[Fraction]]
    eta_inv: list[list[Fraction]]
    parities: list[int] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, m: RingMatrix) -> dict[int, Fraction]:
        return _coords(self.basis, m)

    def f_lower(self) -> list[list[list[Fraction]]]:
        """F_{abc} = tr([X_a, X_b] X_c)."""
        n = self.dim
        return [[[sum((v * self.eta[c2][c] for c2, v in self.f[a][b].items()), Fraction(0))
                  for c in range(n)] for b in range(n)] for a in range(n)]

    def parity(self, a: int) -> int:
        return self.parities[a] if self.parities else 0

    def check_antisymmetry(self) -> bool:
        """f_{ab} = -(-1)^{|a||b|} f_{ba}."""
        return all(
            self.f[a][b] == {c: -v * _sign(self.parity(a) * self.parity(b)) for c, v in self.f[b][a].items()}
            for a in range(self.dim) for b in range(self.dim))

    def check_jacobi(self) -> bool:
        n = self.dim
        par = self.parity
        for a, b, c in itertools.product(range(n), repeat=3):
            tot: dict[int, Fraction] = {}
            for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                s = _sign(par(x) * par(z))
                for e, v in self.f[y][z].items():
                    for g, w in self.f[x][e].items():
                        tot[g] = tot.get(g, 0) + s * v * w
            if any(tot.values()):
                return False
        return True


def _coords(basis: list[RingMatrix], m: RingMatrix) -> dict[int, Fraction]:
    # solve m = sum c_a X_a over entries
    from .algebra import solve_linear
    entries = sorted({k for b in basis for k, _ in b.items()} | {k for k, _ in m.items()})
    rows = []
    for e in entries:
        row = {a: b.entry(*e) for a, b in enumerate(basis) if b.entry(*e)}
        rows.append((row, m.entry(*e)))
    sol, free = solve_linear(rows, list(range(len(basis))))
    if sol is None or free:
        raise ValueError("matrix not in the span of the basis (or basis dependent)")
    return {a: v for a, v in sol.items() if v}


def lie_data(basis: list[RingMatrix], labels: list, parities: list[int] | None = None) -> LieData:
    """Structure constants; with ``parities`` the bracket is the supercommutator."""
    n = len(basis)
    f = []
    for a in range(n):
        row = []
        for b in range(n):
            comm = basis[a] @ basis[b]
            other = basis[b] @ basis[a]
            if parities and parities[a] * parities[b] % 2:
                comm = comm + other
            else:
                comm = comm - other
            row.append(_coords(basis, comm) if comm else {})
        f.append(row)
    eta = [[(basis[a] @ basis[b]).trace() or Fraction(0) for b in range(n)] for a in range(n)]
    eta_inv = _invert(eta)
    return LieData(basis, labels, f, eta, eta_inv, list(parities or []))


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return []
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def gl_data(sig: Signature) -> LieData:
    """gl(m|n) in the basis a <-> (i, j), X_a = (-1)^{[i]} E_ij.

    The sign is the dictionary under which the derived level-1 brackets
    reproduce the supercommutator; it is trivial for plain signatures.
    """
    d = sig.total
    labels = [(i, j) for i in sig.indices() for j in sig.indices()]
    basis = [RingMatrix.unit(d, i, j, Fraction(-1 if sig.parity(i) else 1)) for i, j in labels]
    parities = [(sig.parity(i) + sig.parity(j)) % 2 for i, j in labels]
    return lie_data(basis, labels, parities if sig.graded else None)


def sl_data(N: int) -> LieData:
    """sl(N): off-diagonal units E_ij then H_i = E_ii - E_{i+1,i+1}."""
    labels: list = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1) if i != j]
    basis = [RingMatrix.unit(N, i, j) for i, j in labels]
    for i in range(1, N):
        basis.append(RingMatrix.unit(N, i, i) - RingMatrix.unit(N, i + 1, i + 1))
        labels.append(("H", i))
    return lie_data(basis, labels)


def matrix_to_level(sig: Signature, m: RingMatrix, level: int) -> SuperPoly:
    """X = sum X_ij E_ij  ->  sum X_ij T_level^{ij}."""
    out = SuperPoly.zero()
    for (r, c), v in m.items():
        out = out + mode(sig, level, r + 1, c + 1) * v
    return out


def verify_adjoint_presentation(alg: TruncatedYangian) -> Report:
    """{T_1^a, T_n^b} = f_{ab}^c T_n^c for all n <= p (matrix-unit basis)."""
    sig = alg.sig
    data = gl_data(sig)
    report = Report("adjoint")
    if not (data.check_antisymmetry() and data.check_jacobi()):
        report.add("structure-constants", False, "gl structure constants inconsistent")
        return report
    report.add(f"structure-constants[sig={sig}]", True)
    for n in range(1, alg.p + 1):
        bad = None
        for a, (i, j) in enumerate(data.labels):
            for b, (k, l) in enumerate(data.labels):
                lhs = alg.bracket(mode(sig, 1, i, j), mode(sig, n, k, l))
                rhs = SuperPoly.zero()
                for c, v in data.f[a][b].items():
                    r, s = data.labels[c]
                    rhs = rhs + mode(sig, n, r, s) * v
                if lhs != rhs:
                    bad = {"a": [i, j], "b": [k, l], "level": n, "lhs": lhs, "rhs": rhs}
                    break
            if bad:
                break
        report.add(f"adjoint[sig={sig},level={n}]", bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# centre


@dataclass
class CenterData:
    sig: Signature
    p: int
    coefficients: list[SuperPoly]

    def __len__(self) -> int:
        return len(self.coefficients)


def _det(entries: dict[tuple[int, int], Poly], N: int) -> Poly:
    total = Poly(1)
    for perm in itertools.permutations(range(1, N + 1)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = Poly.const(1, SuperPoly.const(-1 if inv % 2 else 1))
        for i, j in enumerate(perm, start=1):
            term = term * entries[(i, j)]
        total = total + term
    return total


def classical_det(alg: TruncatedYangian) -> CenterData:
    """Coefficients c_1..c_{Np} of det L(u) = 1 + sum c_n u^-n (plain signatures)."""
    sig = alg.sig
    if sig.graded:
        raise ValueError("the determinant centre is defined for plain signatures")
    N, p = sig.total, alg.p
    entries = {}
    for i in sig.indices():
        for j in sig.indices():
            entries[(i, j)] = Poly.from_univariate(
                1, 0, {n: c for n in range(p + 1) if (c := mode(sig, n, i, j))})
    det = _det(entries, N)
    if det.degree() > N * p:
        raise AssertionError("determinant degree exceeds Np")
    coeffs = [det.coeff((n,)) or SuperPoly.zero() for n in range(1, N * p + 1)]
    return CenterData(sig, p, coeffs)


def _derivative(x: SuperPoly, g: Gen) -> SuperPoly:
    out = {}
    for mono, c in x.terms.items():
        k = mono.count(g)
        if k:
            rest = list(mono)
            rest.remove(g)
            key = tuple(rest)
            out[key] = out.get(key, 0) + c * k
    return SuperPoly(out)


def _evaluate(x: SuperPoly, point: dict[Gen, Fraction]) -> Fraction:
    total = Fraction(0)
    for mono, c in x.terms.items():
        v = c
        for g in mono:
            v *= point[g]
        total += v
    return total


def jacobian_rank(polys: list[SuperPoly], gens: list[Gen], seed: int = 7) -> int:
    """Rank of the Jacobian at a fixed pseudo-random rational point.

    Full rank at one point certifies algebraic independence.
    """
    rng = random.Random(seed)
    point = {g: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for g in gens}
    ech = RowEchelon()
    for poly in polys:
        ech.add({k: _evaluate(_derivative(poly, g), point) for k, g in enumerate(gens)})
    return ech.rank


def verify_center(alg: TruncatedYangian, center: CenterData | None = None) -> Report:
    center = center or classical_det(alg)
    N, p = alg.sig.total, alg.p
    report = Report("center")
    report.add(f"count[N={N},p={p}]", len(center) == N * p and bool(center.coefficients[-1]),
               {"count": len(center), "expected": N * p}, count=len(center))
    gens = alg.generators
    for n, c in enumerate(center.coefficients, start=1):
        bad = None
        for g in gens:
            b = alg.bracket(c, SuperPoly.gen(g))
            if b:
                bad = {"c": n, "generator": g, "bracket": b}
                break
        report.add(f"central[N={N},p={p},c{n}]", bad is None, bad)
    rank = jacobian_rank(center.coefficients, gens)
    report.add(f"independent[N={N},p={p}]", rank == N * p, {"jacobian_rank": rank}, jacobian_rank=rank)
    return report


def iter_pairs(gens: list[Gen]) -> Iterator[tuple[Gen, Gen]]:
    return itertools.product(gens, repeat=2)
