"""Verification suites: named lists of independent cases.

Each case is a module-level function of plain arguments returning a Report,
so cases can be fanned out to worker processes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .algebra import RingMatrix, Signature, kron, to_fraction
from .report import Report

PLAIN_ONLY = ("center", "drinfeld-fit", "twist", "fold", "reps", "nls")

SUITES = ("ybe", "poisson", "center", "drinfeld-fit", "twist", "fold", "super", "reps", "nls")


@dataclass
class SuiteConfig:
    suites: list[str]
    sigs: list[str] | None = None
    p: list[int] | None = None
    theta: str | None = None
    params: list[list[Fraction]] | None = None
    momenta: list[list[Fraction]] | None = None
    m_max: int = 3
    jobs: int = 1
    output: str | None = None
    format: str = "json"
    extra: dict[str, Any] = field(default_factory=dict)


Case = tuple[Callable[..., Report], tuple]


def _negative(report: Report, name: str) -> Report:
    """A control passes when the wrapped check fails."""
    out = Report(report.suite)
    failed = not report.passed
    out.add(name, failed, {"reason": "mutated input was accepted"},
            observed=[c.to_json() for c in report.checks])
    return out


# ---------------------------------------------------------------------------
# case functions


def case_ybe(sig_text: str) -> Report:
    from .rmatrix import build_classical_r, build_rational_r, check_classical_ybe, check_unitarity, check_ybe
    sig = Signature.parse(sig_text)
    report = Report("ybe")
    report.extend(check_ybe(build_rational_r(sig)))
    if not sig.graded:
        report.extend(check_unitarity(build_rational_r(sig)))
    report.extend(check_classical_ybe(build_classical_r(sig)))
    report.extend(check_classical_ybe(build_classical_r(sig).scaled(3), name="classical-ybe-scaled"),
                  prefix="scaled:")
    return report


def case_ybe_controls(sig_text: str) -> Report:
    from .rmatrix import (SpectralMatrix, ThetaVector, build_classical_r_primed, build_permutation,
                          check_classical_ybe, check_q_from_tau, check_ybe)
    sig = Signature.parse(sig_text)
    d = sig.total
    report = Report("ybe")
    # I - (P + E11 (x) E22)/x is not a YBE solution
    bump = kron(RingMatrix.unit(d, 1, 1), RingMatrix.unit(d, 2, 2))
    mutated = SpectralMatrix(sig, 2, {1: RingMatrix.identity(d * d), 0: -(build_permutation(sig) + bump)},
                             {1: Fraction(1)})
    report.extend(_negative(check_ybe(mutated), f"negative-control:ybe-mutated[sig={sig}]"))
    for cls in ("plus", "minus"):
        try:
            theta = ThetaVector.from_class(sig, cls)
        except ValueError:
            continue
        report.add(f"q-from-tau[sig={sig},theta={theta.kind}]", check_q_from_tau(theta))
        res = check_classical_ybe(build_classical_r_primed(theta))
        report.add(f"classical-ybe-with-Q[sig={sig},theta={theta.kind}]", True, None,
                   recorded=res.passed)
    return report


def case_poisson(sig_text: str, p: int) -> Report:
    from .poisson import (TruncatedYangian, verify_adjoint_presentation, verify_antisymmetry,
                          verify_jacobi, verify_truncation_ideal)
    sig = Signature.parse(sig_text)
    alg = TruncatedYangian(sig, p)
    report = Report("poisson")
    report.add(f"generator-count[sig={sig},p={p}]", len(alg.generators) == p * sig.total ** 2,
               count=len(alg.generators))
    report.extend(verify_antisymmetry(alg))
    report.extend(verify_jacobi(alg))
    report.extend(verify_truncation_ideal(alg))
    report.extend(verify_adjoint_presentation(alg))
    return report


def case_poisson_control(sig_text: str, p: int) -> Report:
    from .poisson import TruncatedYangian, verify_jacobi
    from .algebra import SuperPoly, make_gen
    sig = Signature.parse(sig_text)
    alg = TruncatedYangian(sig, p)
    table = dict(alg.table)
    # {T11, T12} += T11 breaks Jacobi on (T11, T12, T21)
    g, h = make_gen(sig, 1, 1, 1), make_gen(sig, 1, 1, 2)
    table[(g, h)] = table[(g, h)] + SuperPoly.gen(g)
    table[(h, g)] = table[(h, g)] - SuperPoly.gen(g)
    bad = alg.with_table(table)
    return _negative(verify_jacobi(bad, modes=("truncated",)), f"negative-control:jacobi-perturbed[sig={sig},p={p}]")


def case_center(sig_text: str, p: int) -> Report:
    from .poisson import TruncatedYangian, classical_det, verify_center
    sig = Signature.parse(sig_text)
    alg = TruncatedYangian(sig, p)
    return verify_center(alg, classical_det(alg))


def case_drinfeld(N: int, pieces: tuple[str, ...]) -> Report:
    from .drinfeld import fit_drinfeld_level_one
    _, report = fit_drinfeld_level_one(N, pieces)
    return report


def case_drinfeld_pure(N: int) -> Report:
    """Record whether T2 alone satisfies the identity; a failure certifies a nonzero correction."""
    from .drinfeld import fit_drinfeld_level_one
    fit, _ = fit_drinfeld_level_one(N, ("T2",))
    report = Report("drinfeld-fit")
    report.add(f"pure-T2[N={N}]", True, None, fit_succeeds=fit.ok,
               correction_required=not fit.ok, solutions=fit.solutions)
    return report


def case_twist(N: int, cls: str, p: int) -> Report:
    from .poisson import TruncatedYangian
    from .rmatrix import ThetaVector
    from .twisted import build_s, build_tau, classify_level_one, verify_tau, verify_twisted_bracket
    sig = Signature(N)
    theta = ThetaVector.from_class(sig, cls)
    alg = TruncatedYangian(sig, p)
    tw = build_tau(theta, p)
    report = Report("twist")
    report.extend(verify_tau(tw, alg))
    alt = verify_tau(build_tau(theta, p, "w-label"), alg)
    report.add(f"tau-w-label-convention[N={N},theta={theta.kind}]", True, None,
               automorphism=alt.passed, involution=alt.checks[0].passed)
    s = build_s(alg, tw)
    report.add(f"s-degree[N={N},theta={theta.kind},p={p}]", s.max_level() <= 2 * p, max_level=s.max_level())
    if p == 1:
        report.extend(verify_twisted_bracket(alg, s))
    report.extend(classify_level_one(alg, s))
    return report


def case_level_one(N: int, cls: str) -> Report:
    from .poisson import TruncatedYangian
    from .rmatrix import ThetaVector
    from .twisted import build_s, build_tau, classify_level_one
    sig = Signature(N)
    theta = ThetaVector.from_class(sig, cls)
    alg = TruncatedYangian(sig, 1, cap=1)
    return classify_level_one(alg, build_s(alg, build_tau(theta, 1)))


def case_rsrs(N: int, cls: str, params: tuple[str, ...]) -> Report:
    from .representations import tensor_modules
    from .rmatrix import ThetaVector
    from .twisted import verify_rsrs_on_module
    sig = Signature(N)
    theta = ThetaVector.from_class(sig, cls)
    m = tensor_modules([to_fraction(a) for a in params], sig)
    report = verify_rsrs_on_module(m, theta)
    literal = verify_rsrs_on_module(m, theta, q_sign=1)
    report.checks[-1].details["unflipped_R_prime_holds"] = literal.passed
    report.extend(_negative(verify_rsrs_on_module(m, theta, use_q=False),
                            f"negative-control:rsrs-with-R[N={N},theta={theta.kind},params={list(params)}]"))
    return report


def case_fold(N: int, cls: str, p: int) -> Report:
    from .poisson import TruncatedYangian
    from .rmatrix import ThetaVector
    from .twisted import build_tau, fold_quotient
    theta = ThetaVector.from_class(Signature(N), cls)
    alg = TruncatedYangian(Signature(N), p)
    try:
        _, report = fold_quotient(alg, build_tau(theta, p))
    except ValueError as exc:
        report = Report("fold")
        report.add(f"fold-rejected[N={N},p={p},theta={cls}]", True, None, reason=str(exc))
    return report


def case_super(sig_text: str, p: int, params: tuple[str, ...]) -> Report:
    from .poisson import TruncatedYangian
    from .representations import evaluation_module
    from .rmatrix import ThetaVector
    from .twisted import build_s, build_tau, verify_s_symmetry_classical, verify_s_symmetry_module, verify_tau
    sig = Signature.parse(sig_text)
    theta = ThetaVector.plus(sig)
    alg = TruncatedYangian(sig, p)
    tw = build_tau(theta, p)
    report = Report("super")
    report.add(f"super-theta[sig={sig}]", theta.theta0 == 1 and sig.n % 2 == 0, theta=list(theta.theta))
    report.extend(verify_tau(tw, alg))
    s = build_s(alg, tw)
    report.extend(verify_s_symmetry_classical(s))
    for a in params:
        report.extend(verify_s_symmetry_module(evaluation_module(sig, to_fraction(a)), theta),
                      prefix=f"a={a}:")
    return report


def case_super_plain(N: int) -> Report:
    """Exploratory: the same symmetry relation for plain signatures, outcome recorded."""
    from .representations import tensor_modules
    from .rmatrix import ThetaVector
    from .twisted import verify_s_symmetry_module
    report = Report("super")
    for cls in ("plus", "minus"):
        try:
            theta = ThetaVector.from_class(Signature(N), cls)
        except ValueError:
            continue
        res = verify_s_symmetry_module(tensor_modules([0, 3], Signature(N)), theta)
        report.add(f"plain-symmetry-recorded[N={N},theta={cls}]", True, None, holds=res.passed)
    return report


def case_reps(N: int, params: tuple[str, ...]) -> Report:
    from .representations import verify_round_trip
    return verify_round_trip(Signature(N), [to_fraction(a) for a in params])


def case_reps_misc() -> Report:
    from .representations import (check_rtt, commutant_dimension, direct_sum, drinfeld_from_weights, evaluation_module,
                                  extract_highest_weight, irreducibility, tensor_modules, trivial_module)
    report = Report("reps")
    e = evaluation_module(Signature(2))
    hw = extract_highest_weight(e)
    report.add("evaluation-weights[N=2,a=0]", hw.mu == [[1, 1], [1, 0]], mu=hw.mu)
    report.add("evaluation-drinfeld[N=2,a=0]", drinfeld_from_weights(hw, 1).roots == [[0]])
    irr, dim = irreducibility(e)
    report.add("evaluation-irreducible[N=2]", irr and dim == 1, commutant=dim)
    dim2 = commutant_dimension(direct_sum(e, e), stop_at_one=False)
    report.add("direct-sum-commutant[N=2]", dim2 >= 4, commutant=dim2)
    triv = trivial_module(Signature(2), [3, 2])
    thw = extract_highest_weight(triv)
    report.add("trivial-module[N=2]", thw.ok and thw.mu[0] == thw.mu[1] == [1, 3, 2]
               and drinfeld_from_weights(thw, 2).degrees == [0])
    for sig_text in ("1|1", "2|1"):
        sig = Signature.parse(sig_text)
        report.extend(check_rtt(evaluation_module(sig, Fraction(5, 2)), f"graded-rtt[sig={sig},a=5/2]"))
    m = tensor_modules([0, 5], Signature(2))
    hw = extract_highest_weight(m)
    report.add("highest-weight[N=2,params=(0,5)]",
               hw.mu == [[1, -3, -4], [1, -5, 0]], mu=hw.mu)
    return report


def case_sweep(N: int, base: str, shifts: tuple[str, ...]) -> Report:
    from .representations import irreducibility_sweep
    points = irreducibility_sweep(Signature(N), to_fraction(base), [to_fraction(s) for s in shifts])
    report = Report("reps")
    generic = [pt for pt in points if not pt.degenerate]
    report.add(f"sweep-generic-commutant[N={N},base={base}]",
               len(generic) >= 5 and all(pt.commutant == 1 and pt.irreducible for pt in generic),
               None, points=len(generic))
    report.add(f"sweep-degeneration-pattern[N={N},base={base}]",
               all(pt.irreducible != pt.degenerate for pt in points), None,
               table=[{"shift": pt.shift, "commutant": pt.commutant, "cyclic": pt.cyclic,
                       "dim": pt.dim, "degenerate": pt.degenerate} for pt in points])
    return report


def case_nls(N: int, momenta: tuple[str, ...], m_max: int) -> Report:
    from .nls import build_sector, verify_path_independence, verify_symmetry, verify_truncation_on_sector
    sector = build_sector([to_fraction(k) for k in momenta], N)
    report = Report("nls")
    report.add(f"sector-dim[N={N},n={sector.n}]", sector.dim == N ** sector.n, dim=sector.dim)
    report.extend(verify_path_independence(sector))
    if sector.n <= 3:
        report.extend(verify_symmetry(sector, m_max))
        if sector.n >= 2:
            report.extend(_negative(verify_symmetry(sector, m_max, f_term=False),
                                    f"negative-control:drop-f-term[N={N},momenta={list(momenta)}]"))
    report.extend(verify_truncation_on_sector(sector))
    return report


# ---------------------------------------------------------------------------
# case lists


DEFAULTS: dict[str, Any] = {
    "ybe": {"sigs": ["2", "3", "4", "1|1", "2|1", "1|2"]},
    "poisson": {"cases": [("2", 1), ("2", 2), ("3", 1), ("1|1", 1)]},
    "center": {"cases": [("1", 2), ("2", 1), ("2", 2)]},
    "twist": {"cases": [(2, "plus", 1), (2, "minus", 1), (3, "plus", 1)],
              "level_one": [(4, "plus"), (4, "minus")],
              "rsrs": [(2, "plus", ("0",)), (2, "minus", ("0",)), (2, "plus", ("0", "3")),
                       (2, "minus", ("0", "3")), (2, "minus", ("1/2", "-2"))]},
    "fold": {"cases": [(2, "plus", 1), (2, "minus", 1), (2, "plus", 2), (2, "minus", 2), (3, "plus", 1),
                       (3, "plus", 2)]},
    "super": {"cases": [("1|2", 1, ("0", "3/2"))]},
    "reps": {"cases": [(2, ("0", "5")), (2, ("0", "7/3", "5")), (3, ("0", "5")),
                       (3, ("1/2", "4", "-3")), (2, ("-2", "1/3"))],
             "sweep": [(2, "0", ("2", "3", "4", "5", "6", "1", "-1"))]},
    "nls": {"cases": [(2, ("0", "3")), (2, ("0", "1", "5")), (2, ("0", "1/2", "2", "7")), (2, ("4",)),
                      (2, ())]},
}


def _frac_text(x: Fraction) -> str:
    return str(to_fraction(x))


def build_cases(suite: str, cfg: SuiteConfig) -> list[Case]:
    d = DEFAULTS.get(suite, {})
    sigs = cfg.sigs
    ps = cfg.p
    if suite == "ybe":
        sig_list = sigs or d["sigs"]
        return [(case_ybe, (s,)) for s in sig_list] + [(case_ybe_controls, (s,)) for s in sig_list
                                                        if Signature.parse(s).total >= 2]
    if suite in ("poisson", "center"):
        cases = d["cases"]
        if sigs or ps:
            cases = [(s, p) for s in (sigs or sorted({c[0] for c in cases}))
                     for p in (ps or sorted({c[1] for c in cases}))]
        fn = case_poisson if suite == "poisson" else case_center
        out: list[Case] = [(fn, c) for c in cases]
        if suite == "poisson":
            out += [(case_center, c) for c in cases if not Signature.parse(c[0]).graded]
            out += [(case_poisson_control, c) for c in cases[:1] if Signature.parse(c[0]).total >= 2]
        return out
    if suite == "drinfeld-fit":
        from .drinfeld import PIECES
        Ns = [Signature.parse(s).total for s in sigs] if sigs else [3, 2]
        return [(case_drinfeld, (N, PIECES)) for N in Ns] + [(case_drinfeld_pure, (N,)) for N in Ns]
    if suite == "twist":
        cases = d["cases"]
        rsrs = d["rsrs"]
        if sigs or ps or cfg.theta:
            Ns = [Signature.parse(s).total for s in sigs] if sigs else [2, 3]
            classes = [cfg.theta] if cfg.theta else ["plus", "minus"]
            cases = [(N, c, p) for N in Ns for c in classes for p in (ps or [1])
                     if not (c == "minus" and N % 2)]
            rsrs = [r for r in rsrs if r[0] in Ns and r[1] in classes]
        if cfg.params:
            rsrs = [(N, c, tuple(_frac_text(a) for a in prm)) for (N, c, _) in rsrs[:2] for prm in cfg.params]
        out = [(case_twist, c) for c in cases]
        out += [(case_level_one, c) for c in d["level_one"] if not (sigs or cfg.theta)]
        out += [(case_rsrs, r) for r in rsrs]
        return out
    if suite == "fold":
        cases = d["cases"]
        if sigs or ps or cfg.theta:
            Ns = [Signature.parse(s).total for s in sigs] if sigs else [2, 3]
            classes = [cfg.theta] if cfg.theta else ["plus", "minus"]
            cases = [(N, c, p) for N in Ns for c in classes for p in (ps or [1, 2])
                     if not (c == "minus" and N % 2)]
        return [(case_fold, c) for c in cases]
    if suite == "super":
        cases = d["cases"]
        if sigs or ps:
            cases = [(s, p, ("0", "3/2")) for s in (sigs or ["1|2"]) for p in (ps or [1])]
        return [(case_super, c) for c in cases] + [(case_super_plain, (2,))]
    if suite == "reps":
        cases = d["cases"]
        if cfg.params:
            Ns = [Signature.parse(s).total for s in sigs] if sigs else [2, 3]
            cases = [(N, tuple(_frac_text(a) for a in prm)) for N in Ns for prm in cfg.params]
        elif sigs:
            Ns = {Signature.parse(s).total for s in sigs}
            cases = [c for c in cases if c[0] in Ns]
        out = [(case_reps, c) for c in cases] + [(case_reps_misc, ())]
        out += [(case_sweep, c) for c in d["sweep"]]
        return out
    if suite == "nls":
        cases = d["cases"]
        if cfg.momenta:
            Ns = [Signature.parse(s).total for s in sigs] if sigs else [2]
            cases = [(N, tuple(_frac_text(k) for k in ks)) for N in Ns for ks in cfg.momenta]
        return [(case_nls, (N, ks, cfg.m_max)) for N, ks in cases]
    raise ValueError(f"unknown suite {suite!r}")


def _run_case(case: Case) -> Report:
    fn, args = case
    return fn(*args)


def run_suite(cfg: SuiteConfig) -> Report:
    names = list(SUITES) if cfg.suites == ["all"] else cfg.suites
    cases: list[Case] = []
    for name in names:
        cases.extend(build_cases(name, cfg))
    label = "all" if cfg.suites == ["all"] else "+".join(names)
    total = Report(label)
    if cfg.jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_case, cases))
    else:
        results = [_run_case(c) for c in cases]
    for r in results:
        total.extend(r, prefix=f"{r.suite}/")
    return total.sorted()
