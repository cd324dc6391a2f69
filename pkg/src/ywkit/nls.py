"""Discrete-momentum Fock sectors of the NLS hierarchy.

A sector holds n creation operators with distinct rational momenta.  States
are internal tensors in (C^N)^{(x)n} attached to a momentum word; the ZZF
exchange rule moves between words and the canonical word is the sorted
one.  Charges come from the iterated coproduct with the momenta as
evaluation parameters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import RingMatrix, Signature, kron, solve_linear, to_fraction
from .poisson import gl_data
from .report import Report
from .representations import check_rtt, check_truncation, tensor_modules
from .rmatrix import build_permutation

Word = tuple[Fraction, ...]


@dataclass(frozen=True)
class FockSector:
    N: int
    momenta: Word  # canonical (sorted) order

    @property
    def n(self) -> int:
        return len(self.momenta)

    @property
    def dim(self) -> int:
        return self.N ** self.n


def build_sector(momenta: Sequence[Fraction | int | str], N: int) -> FockSector:
    ks = tuple(sorted(to_fraction(k) for k in momenta))
    if len(set(ks)) != len(ks):
        raise ValueError("momenta must be pairwise distinct (R-matrix pole at zero argument)")
    if N < 1:
        raise ValueError("N must be positive")
    return FockSector(N, ks)


def _site(X: RingMatrix, r: int, n: int, N: int) -> RingMatrix:
    left = RingMatrix.identity(N ** r)
    right = RingMatrix.identity(N ** (n - r - 1))
    return kron(kron(left, X), right)


def exchange_operator(k_left: Fraction, k_right: Fraction, N: int) -> RingMatrix:
    """Internal map for swapping adjacent a^dag(k_left) a^dag(k_right): P R(k_right - k_left).

    With R(x) = I - P/x this is P - I/x.
    """
    x = k_right - k_left
    if not x:
        raise ValueError("equal momenta")
    P = build_permutation(Signature(N))
    return P - RingMatrix.identity(N * N, 1 / x)


def _swap(word: Word, a: int, N: int) -> tuple[Word, RingMatrix]:
    n = len(word)
    E = exchange_operator(word[a], word[a + 1], N)
    op = kron(kron(RingMatrix.identity(N ** a), E), RingMatrix.identity(N ** (n - a - 2)))
    new = word[:a] + (word[a + 1], word[a]) + word[a + 2:]
    return new, op


def normal_form_paths(word: Word, N: int) -> list[RingMatrix]:
    """Every distinct operator from ``word`` to the sorted word over all bubble paths."""
    if list(word) == sorted(word):
        return [RingMatrix.identity(N ** len(word))]
    out: list[RingMatrix] = []
    for a in range(len(word) - 1):
        if word[a] > word[a + 1]:
            new, op = _swap(word, a, N)
            for rest in normal_form_paths(new, N):
                total = rest @ op
                if not any(total == o for o in out):
                    out.append(total)
    return out


def exchange_normal_form(word: Sequence[Fraction], N: int) -> RingMatrix:
    """Operator taking an internal tensor on ``word`` to the canonical word."""
    word = tuple(to_fraction(k) for k in word)
    if len(set(word)) != len(word):
        raise ValueError("momenta must be pairwise distinct")
    paths = normal_form_paths(word, N)
    if len(paths) != 1:
        raise ArithmeticError("exchange normal form depends on the rewriting path")
    return paths[0]


def verify_path_independence(sector: FockSector) -> Report:
    report = Report("exchange")
    bad = None
    count = 0
    for word in itertools.permutations(sector.momenta):
        count += 1
        paths = normal_form_paths(tuple(word), sector.N)
        if len(paths) != 1:
            bad = {"word": list(word), "distinct_results": len(paths)}
            break
    report.add(f"path-independence[N={sector.N},momenta={[str(k) for k in sector.momenta]}]",
               bad is None, bad, words=count)
    return report


# ---------------------------------------------------------------------------
# charges


@dataclass
class ChargeSet:
    labels: list[tuple[int, int]]
    Q0: list[RingMatrix]
    Q1: list[RingMatrix]
    H: dict[int, RingMatrix] = field(default_factory=dict)


def charges_for_word(word: Word, N: int, m_max: int = 3, f_term: bool = True) -> ChargeSet:
    """Q0^a = sum_i t^a_(i), Q1^a = sum_i k_i t^a_(i) + 1/2 f_ab^c sum_{i<j} t_c(i) t^b(j)."""
    data = gl_data(Signature(N))
    n = len(word)
    dim_a = data.dim
    site = {(b, r): _site(data.basis[b], r, n, N) for b in range(dim_a) for r in range(n)}
    upper = {}
    for b in range(dim_a):
        for r in range(n):
            acc = RingMatrix.zeros(N ** n)
            for b2 in range(dim_a):
                w = data.eta_inv[b][b2]
                if w:
                    acc = acc + site[(b2, r)] * w
            upper[(b, r)] = acc
    Q0, Q1 = [], []
    half = Fraction(1, 2)
    for a in range(dim_a):
        q0 = RingMatrix.zeros(N ** n)
        q1 = RingMatrix.zeros(N ** n)
        for r in range(n):
            q0 = q0 + site[(a, r)]
            q1 = q1 + site[(a, r)] * word[r]
        if f_term:
            for r, s in itertools.combinations(range(n), 2):
                for b in range(dim_a):
                    for c, v in data.f[a][b].items():
                        q1 = q1 + (site[(c, r)] @ upper[(b, s)]) * (v * half)
        Q0.append(q0)
        Q1.append(q1)
    H = {m: RingMatrix.identity(N ** n, sum((k ** m for k in word), Fraction(0))) for m in range(m_max + 1)}
    return ChargeSet(data.labels, Q0, Q1, H)


def build_charges(sector: FockSector, m_max: int = 3, f_term: bool = True) -> ChargeSet:
    return charges_for_word(sector.momenta, sector.N, m_max, f_term)


def verify_symmetry(sector: FockSector, m_max: int = 3, f_term: bool = True) -> Report:
    """[H_m, Q_s^a] = 0, gl(N) closure of Q0, and descent through every exchange."""
    tag = f"N={sector.N},momenta={[str(k) for k in sector.momenta]}"
    report = Report("nls-symmetry")
    cs = build_charges(sector, m_max, f_term)
    bad = None
    for m, H in cs.H.items():
        for s, Qs in ((0, cs.Q0), (1, cs.Q1)):
            for a, Q in enumerate(Qs):
                if H.commutator(Q):
                    bad = {"m": m, "s": s, "a": cs.labels[a]}
                    break
            if bad:
                break
        if bad:
            break
    report.add(f"hierarchy-commutes[{tag},m<={m_max}]", bad is None, bad)
    data = gl_data(Signature(sector.N))
    bad = None
    for a, b in itertools.product(range(data.dim), repeat=2):
        lhs = cs.Q0[a].commutator(cs.Q0[b])
        rhs = RingMatrix.zeros(sector.dim)
        for c, v in data.f[a][b].items():
            rhs = rhs + cs.Q0[c] * v
        if lhs != rhs:
            bad = {"pair": [cs.labels[a], cs.labels[b]]}
            break
    report.add(f"q0-closure[{tag}]", bad is None, bad)
    bad = None
    for word in itertools.permutations(sector.momenta):
        word = tuple(word)
        here = charges_for_word(word, sector.N, 0, f_term)
        for pos in range(len(word) - 1):
            new, op = _swap(word, pos, sector.N)
            there = charges_for_word(new, sector.N, 0, f_term)
            for s, (A, B) in enumerate(((here.Q0, there.Q0), (here.Q1, there.Q1))):
                for a in range(len(A)):
                    if op @ A[a] != B[a] @ op:
                        bad = {"word": list(word), "position": pos, "s": s, "a": here.labels[a]}
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    label = "descent" if f_term else "descent-without-f-term"
    report.add(f"{label}[{tag}]", bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# truncation: the sector as a Y_p(N) module


def verify_truncation_on_sector(sector: FockSector, m_max: int = 1) -> Report:
    """The p-particle sector is a Y_p module; Q0, Q1 are fitted from T-modes."""
    tag = f"N={sector.N},momenta={[str(k) for k in sector.momenta]}"
    report = Report("nls-truncation")
    if sector.n == 0:
        report.add(f"truncation[{tag}]", True, None, note="vacuum: T(u) = 1")
        return report
    module = tensor_modules(list(sector.momenta), Signature(sector.N))
    report.extend(check_truncation(module))
    report.extend(check_rtt(module, f"rtt[{tag}]"))
    cs = build_charges(sector, m_max)
    fit = fit_charge_dictionary(module, cs)
    report.add(f"charge-dictionary[{tag}]", fit is not None, None if fit else {"reason": "no solution"},
               coefficients=fit or {})
    return report


def fit_charge_dictionary(module, cs: ChargeSet) -> dict[str, Fraction] | None:
    """Solve Q0^{ij} = a T1^{ij} + b delta^{ij}, Q1^{ij} = sum_k x_k B_k^{ij} exactly."""
    N = module.sig.total
    d = module.dim
    idx = {lab: k for k, lab in enumerate(cs.labels)}
    I = RingMatrix.identity(d)
    T1 = {(i, j): module.mode(1, i, j) for i in range(1, N + 1) for j in range(1, N + 1)}
    T2 = {(i, j): module.mode(2, i, j) for i in range(1, N + 1) for j in range(1, N + 1)}
    c1 = sum((T1[i, i] for i in range(1, N + 1)), RingMatrix.zeros(d))
    sq = {(i, j): sum((T1[i, k] @ T1[k, j] for k in range(1, N + 1)), RingMatrix.zeros(d))
          for i in range(1, N + 1) for j in range(1, N + 1)}

    def pieces(i: int, j: int) -> dict[str, RingMatrix]:
        delta = I if i == j else RingMatrix.zeros(d)
        return {
            "T2": T2[i, j],
            "T1T1": sq[i, j],
            "c1*T1": c1 @ T1[i, j],
            "T1": T1[i, j],
            "delta": delta,
            "delta*c1": delta @ c1,
            "delta*c1^2": delta @ c1 @ c1,
        }

    def solve(target_of, names: list[str]) -> dict[str, Fraction] | None:
        rows = []
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                ps = pieces(i, j)
                target = target_of(i, j)
                keys = set(target.rows)
                for m in ps.values():
                    keys |= set(m.rows)
                for r in range(d):
                    for c in range(d):
                        row = {nm: ps[nm].entry(r, c) for nm in names if ps[nm].entry(r, c)}
                        rhs = target.entry(r, c)
                        if row or rhs:
                            rows.append((row, rhs))
        sol, free = solve_linear(rows, names)
        if sol is None:
            return None
        return {k: v for k, v in sol.items()}

    q0 = solve(lambda i, j: cs.Q0[idx[(i, j)]], ["T1", "delta"])
    q1 = solve(lambda i, j: cs.Q1[idx[(i, j)]], ["T2", "T1T1", "c1*T1", "T1", "delta", "delta*c1", "delta*c1^2"])
    if q0 is None or q1 is None:
        return None
    out = {f"Q0:{k}": v for k, v in q0.items()}
    out.update({f"Q1:{k}": v for k, v in q1.items()})
    return out
