"""Level-one Drinfeld generators inside the classical RTT Yangian.

Q0^a is the sl(N) part of the level-1 modes.  Q1^a is sought as
``T_2`` plus a linear combination of quadratic corrections; the classical
Jacobi-like identity (cubic right side for N >= 3, quartic identity for
N = 2) must then hold with the right side multiplied by one fitted scalar.
The unknowns enter polynomially, so the coefficient equations are first
reduced linearly over the products of unknowns and the small remaining
system is handed to sympy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
import sympy

from .algebra import RowEchelon, Signature, SuperPoly
from .poisson import LieData, TruncatedYangian, matrix_to_level, mode, sl_data
from .report import Report

PIECES = ("T2", "T1T1", "c1Q0")


@dataclass
class DrinfeldFit:
    N: int
    identity: str
    pieces: tuple[str, ...]
    solutions: list[dict[str, Fraction]] = field(default_factory=list)
    residual: dict | None = None
    equations: int = 0

    @property
    def ok(self) -> bool:
        return bool(self.solutions)


def _tensors(data: LieData):
    n = data.dim
    F = np.empty((n, n, n), dtype=object)
    for a, b, c in itertools.product(range(n), repeat=3):
        F[a, b, c] = Fraction(0)
    for a, row in enumerate(data.f_lower()):
        for b, col in enumerate(row):
            for c, v in enumerate(col):
                F[a, b, c] = v
    E = np.array(data.eta_inv, dtype=object)
    return F, E


def _ansatz(alg: TruncatedYangian, data: LieData) -> dict[str, list[SuperPoly]]:
    """Lower-index pieces Q1_a candidates for every basis element."""
    sig = alg.sig
    N = sig.total
    c1 = sum((mode(sig, 1, i, i) for i in sig.indices()), SuperPoly.zero())
    square = {(i, j): sum((mode(sig, 1, i, k) * mode(sig, 1, k, j) for k in sig.indices()),
                          SuperPoly.zero())
              for i in sig.indices() for j in sig.indices()}
    out: dict[str, list[SuperPoly]] = {name: [] for name in PIECES}
    for X in data.basis:
        out["T2"].append(matrix_to_level(sig, X, 2))
        q = SuperPoly.zero()
        for (r, c), v in X.items():
            q = q + square[(r + 1, c + 1)] * v
        out["T1T1"].append(q)
        out["c1Q0"].append(c1 * matrix_to_level(sig, X, 1))
    assert len(out["T2"]) == N * N - 1
    return out


def _raise(lower: list[SuperPoly], E) -> list[SuperPoly]:
    n = len(lower)
    return [sum((lower[b] * E[a, b] for b in range(n) if E[a, b]), SuperPoly.zero()) for a in range(n)]


def _coefficient_equations(groups: dict[tuple, list[SuperPoly]]) -> list[dict[tuple, Fraction]]:
    """One equation per (free index tuple, monomial): sum_key coeff * key = 0."""
    eqs: dict[tuple, dict[tuple, Fraction]] = {}
    for key, polys in groups.items():
        for idx, poly in enumerate(polys):
            for mono, c in poly.terms.items():
                row = eqs.setdefault((idx, mono), {})
                row[key] = row.get(key, 0) + c
    return [row for row in eqs.values() if any(row.values())]


def _solve(eqs: list[dict[tuple, Fraction]], unknown_names: list[str]) -> list[dict[str, Fraction]]:
    """Reduce linearly over unknown monomials, then solve the residual polynomial system."""
    ech = RowEchelon()
    for row in eqs:
        ech.add(row)
    syms = {name: sympy.Symbol(name) for name in unknown_names}

    def monomial(key: tuple):
        expr = sympy.Integer(1)
        for name in key:
            expr *= syms[name]
        return expr

    polys = []
    for prow in ech.pivots.values():
        polys.append(sum(sympy.Rational(v.numerator, v.denominator) * monomial(k)
                         for k, v in prow.items()))
    if not polys:
        return [{}]
    sol = sympy.solve(polys, list(syms.values()), dict=True)
    out = []
    for s in sol:
        vals = {}
        exact = True
        for name, sym in syms.items():
            if sym in s:
                v = sympy.nsimplify(s[sym])
                if not v.is_Rational:
                    exact = False
                    break
                vals[name] = Fraction(int(v.p), int(v.q))
            else:
                vals[name] = None  # free parameter
        if exact:
            out.append(vals)
    return out


def _products(pieces: tuple[str, ...], k: int) -> list[tuple[str, ...]]:
    return list(itertools.product(pieces, repeat=k))


def _unknown_key(combo: tuple[str, ...], extra: tuple[str, ...] = ()) -> tuple:
    # T2 has coefficient 1 (normalisation), the other pieces carry unknowns g_<piece>
    return tuple(sorted(f"g_{p}" for p in combo if p != "T2")) + extra


def fit_yangian_cubic(N: int, pieces: tuple[str, ...] = PIECES) -> DrinfeldFit:
    """Classical cubic identity for sl(N), N >= 3:

    f^{bc}_d {Q1^a,Q1^d} + cyclic = lam * f^a_{pd} f^b_{qx} f^c_{ry} f^{xyd} Q0^p Q0^q Q0^r
    """
    sig = Signature(N)
    alg = TruncatedYangian(sig, 2, cap=2)
    data = sl_data(N)
    n = data.dim
    F, E = _tensors(data)
    f_uul = np.einsum("ib,jc,bcd->ijd", E, E, F)           # f^{bc}_d
    f_ull = np.einsum("ia,apd->ipd", E, F)                  # f^a_{pd}
    f_uuu = np.einsum("ia,jb,kc,abc->ijk", E, E, E, F)      # f^{xyd}

    q0 = _raise([matrix_to_level(sig, X, 1) for X in data.basis], E)
    lower = _ansatz(alg, data)
    q1 = {p: _raise(lower[p], E) for p in pieces}

    # A^a_d = f^a_{pd} Q0^p
    A = [[sum((q0[p] * f_ull[a, p, d] for p in range(n) if f_ull[a, p, d]), SuperPoly.zero())
          for d in range(n)] for a in range(n)]
    B = [[[sum((A[c][y] * f_uuu[x, y, d] for y in range(n) if f_uuu[x, y, d]), SuperPoly.zero())
           for d in range(n)] for x in range(n)] for c in range(n)]
    EBC = [[[sum((A[b][x] * B[c][x][d] for x in range(n)), SuperPoly.zero())
             for d in range(n)] for c in range(n)] for b in range(n)]

    triples = list(itertools.product(range(n), repeat=3))
    rhs = [sum((A[a][d] * EBC[b][c][d] for d in range(n)), SuperPoly.zero()) for a, b, c in triples]

    brackets = {}
    for s, t in _products(pieces, 2):
        for a in range(n):
            for d in range(n):
                brackets[(s, t, a, d)] = alg.bracket(q1[s][a], q1[t][d], truncate=False)

    groups: dict[tuple, list[SuperPoly]] = {}
    for s, t in _products(pieces, 2):
        key = _unknown_key((s, t))
        polys = groups.setdefault(key, [SuperPoly.zero()] * len(triples))
        new = []
        for idx, (a, b, c) in enumerate(triples):
            acc = polys[idx]
            for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                for d in range(n):
                    coef = f_uul[y, z, d]
                    if coef:
                        acc = acc + brackets[(s, t, x, d)] * coef
            new.append(acc)
        groups[key] = new
    groups[("lam",)] = [-r for r in rhs]
    eqs = _coefficient_equations(groups)
    names = sorted({k for key in groups for k in key})
    fit = DrinfeldFit(N, "cubic", pieces, equations=len(eqs))
    if not any(rhs):
        fit.residual = {"reason": "cubic right side vanishes identically"}
        return fit
    fit.solutions = [s for s in _solve(eqs, names) if s.get("lam")]
    if not fit.solutions:
        fit.residual = {"reason": "no solution with nonzero scale", "equations": len(eqs)}
    return fit


def fit_yangian_quartic(pieces: tuple[str, ...] = PIECES) -> DrinfeldFit:
    """Classical quartic identity for sl(2):

    f^{cd}_e {{Q1^a,Q1^b},Q1^e} + f^{ab}_e {{Q1^c,Q1^d},Q1^e}
      = lam * (f^a_{pe} f^b_{qx} f^{cd}_y f^y_{rz} f^{xz}_g
               + f^c_{pe} f^d_{qx} f^{ab}_y f^y_{rz} f^{xz}_g) eta^{eg} Q0^p Q0^q Q1^r
    """
    N = 2
    sig = Signature(N)
    alg = TruncatedYangian(sig, 2, cap=3)
    data = sl_data(N)
    n = data.dim
    F, E = _tensors(data)
    f_uul = np.einsum("ib,jc,bcd->ijd", E, E, F)   # f^{ab}_c
    f_ull = np.einsum("ia,apd->ipd", E, F)          # f^a_{pd}

    q0 = _raise([matrix_to_level(sig, X, 1) for X in data.basis], E)
    lower = _ansatz(alg, data)
    q1 = {p: _raise(lower[p], E) for p in pieces}

    # tensor K^{ab}_{pqr} pieces: f^a_{pe} f^b_{qx} f^{xz}_g eta^{eg} f^y_{rz} contracted with f^{cd}_y
    # build W^{a b y}_{p q r} = sum_{e,x,z,g} f^a_{pe} f^b_{qx} f^y_{rz} f^{xz}_g eta^{eg}
    W = np.einsum("ape,bqx,yrz,xzg,eg->abypqr", f_ull, f_ull, f_ull, f_uul, E, optimize=True)
    quads = list(itertools.product(range(n), repeat=4))

    def rhs_piece(r_piece: str) -> list[SuperPoly]:
        out = []
        q0q0 = {(p, q): q0[p] * q0[q] for p in range(n) for q in range(n)}
        cache: dict[tuple[int, int, int], SuperPoly] = {}

        def term(a: int, b: int, y: int) -> SuperPoly:
            key = (a, b, y)
            if key not in cache:
                acc = SuperPoly.zero()
                for p, q, r in itertools.product(range(n), repeat=3):
                    w = W[a, b, y, p, q, r]
                    if w:
                        acc = acc + q0q0[(p, q)] * q1[r_piece][r] * w
                cache[key] = acc
            return cache[key]

        for a, b, c, d in quads:
            acc = SuperPoly.zero()
            for y in range(n):
                if f_uul[c, d, y]:
                    acc = acc + term(a, b, y) * f_uul[c, d, y]
                if f_uul[a, b, y]:
                    acc = acc + term(c, d, y) * f_uul[a, b, y]
            out.append(acc)
        return out

    inner = {}
    for s, t in _products(pieces, 2):
        for a in range(n):
            for b in range(n):
                inner[(s, t, a, b)] = alg.bracket(q1[s][a], q1[t][b], truncate=False)
    nested = {}
    for s, t, u in _products(pieces, 3):
        for a in range(n):
            for b in range(n):
                for e in range(n):
                    nested[(s, t, u, a, b, e)] = alg.bracket(inner[(s, t, a, b)], q1[u][e], truncate=False)

    groups: dict[tuple, list[SuperPoly]] = {}
    for s, t, u in _products(pieces, 3):
        key = _unknown_key((s, t, u))
        current = groups.get(key, [SuperPoly.zero()] * len(quads))
        new = []
        for idx, (a, b, c, d) in enumerate(quads):
            acc = current[idx]
            for e in range(n):
                if f_uul[c, d, e]:
                    acc = acc + nested[(s, t, u, a, b, e)] * f_uul[c, d, e]
                if f_uul[a, b, e]:
                    acc = acc + nested[(s, t, u, c, d, e)] * f_uul[a, b, e]
            new.append(acc)
        groups[key] = new
    any_rhs = False
    for r_piece in pieces:
        key = _unknown_key((r_piece,), ("lam",))
        vals = rhs_piece(r_piece)
        any_rhs = any_rhs or any(vals)
        current = groups.get(key, [SuperPoly.zero()] * len(quads))
        groups[key] = [cur - v for cur, v in zip(current, vals)]
    eqs = _coefficient_equations(groups)
    names = sorted({k for key in groups for k in key})
    fit = DrinfeldFit(N, "quartic", pieces, equations=len(eqs))
    if not any_rhs:
        fit.residual = {"reason": "quartic right side vanishes identically"}
        return fit
    fit.solutions = [s for s in _solve(eqs, names) if s.get("lam")]
    if not fit.solutions:
        fit.residual = {"reason": "no solution with nonzero scale", "equations": len(eqs)}
    return fit


def fit_drinfeld_level_one(N: int, pieces: tuple[str, ...] = PIECES) -> tuple[DrinfeldFit, Report]:
    if N == 2:
        fit = fit_yangian_quartic(pieces)
    elif N >= 3:
        fit = fit_yangian_cubic(N, pieces)
    else:
        raise ValueError("the level-one fit needs N >= 2")
    report = Report("drinfeld-fit")
    label = "+".join(pieces)
    report.add(f"{fit.identity}[N={N},ansatz={label}]", fit.ok, fit.residual,
               solutions=fit.solutions, equations=fit.equations)
    return fit, report
