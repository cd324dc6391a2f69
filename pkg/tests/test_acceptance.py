"""One test per acceptance criterion; each records a PASS/FAIL line."""

from __future__ import annotations

import json
import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE
from ywkit.report import Report
from ywkit.suites import SuiteConfig, build_cases

TITLES = {
    1: "YBE, unitarity and classical YBE",
    2: "Poisson antisymmetry, Jacobi and truncation ideal",
    3: "classical centre count and centrality",
    4: "level-one Drinfeld identities",
    5: "twisted bracket, level-one closure and RSRS",
    6: "super twisted symmetry relation",
    7: "representations: RTT, round trip, commutant sweep",
    8: "NLS Fock sectors",
    9: "CLI determinism and exit codes",
}


def _record(k: int, ok: bool, seconds: float, limit: float, detail: str = "") -> None:
    status = "PASS" if ok and seconds < limit else "FAIL"
    line = f"criterion {k} {status}  {TITLES[k]}  ({seconds:.1f}s / limit {limit:.0f}s)"
    if detail:
        line += f"  {detail}"
    ACCEPTANCE[k] = line
    print(line)


def _run(suite: str, **cfg) -> Report:
    total = Report(suite)
    for fn, args in build_cases(suite, SuiteConfig(suites=[suite], **cfg)):
        total.extend(fn(*args))
    return total


def _check(k: int, limit: float, reports: list[Report], start: float, require: list[str]) -> None:
    elapsed = time.perf_counter() - start
    checks = [c for r in reports for c in r.checks]
    names = [c.name for c in checks]
    missing = [key for key in require if not any(key in n for n in names)]
    failed = [c.name for c in checks if c.status == "fail"]
    ok = not failed and not missing
    _record(k, ok, elapsed, limit, f"failed={failed[:3]} missing={missing}" if not ok else f"{len(checks)} checks")
    assert not missing, missing
    assert not failed, failed
    assert elapsed < limit


def test_criterion_1_ybe():
    start = time.perf_counter()
    rep = _run("ybe", sigs=["2", "3", "4", "1|1", "2|1", "1|2"])
    req = [f"ybe[sig={s}]" for s in ("2", "3", "4", "1|1", "2|1", "1|2")]
    req += [f"unitarity[sig={s}]" for s in ("2", "3", "4")] + ["classical-ybe[sig=2]", "negative-control"]
    _check(1, 10, [rep], start, req)


def test_criterion_2_poisson():
    start = time.perf_counter()
    rep = _run("poisson")
    req = []
    for sig, p in (("2", 1), ("2", 2), ("3", 1), ("1|1", 1)):
        req += [f"antisymmetry[sig={sig},", f"jacobi-truncated[sig={sig},p={p}",
                f"jacobi-untruncated[sig={sig},p={p}", f"ideal[sig={sig},p={p}]"]
    _check(2, 300, [rep], start, req)


def test_criterion_3_center():
    start = time.perf_counter()
    rep = _run("center")
    req = [f"count[N={N},p={p}]" for N, p in ((1, 2), (2, 1), (2, 2))]
    req += ["central[N=2,p=2,c4]", "independent[N=2,p=2]"]
    _check(3, 120, [rep], start, req)


def test_criterion_4_drinfeld():
    start = time.perf_counter()
    rep = _run("drinfeld-fit")
    _check(4, 600, [rep], start, ["cubic[N=3,ansatz=T2+T1T1+c1Q0]", "quartic[N=2,ansatz=T2+T1T1+c1Q0]"])


def test_criterion_5_twisted():
    start = time.perf_counter()
    rep = _run("twist")
    req = []
    for N, cls in ((2, "plus"), (2, "minus"), (3, "plus")):
        req += [f"tau-automorphism[sig={N},theta={cls}", f"twisted-bracket[sig={N},theta={cls},p=1]",
                f"level-one-dim[N={N},theta={cls}]", f"level-one-structure[N={N},theta={cls}]"]
    req += ["rsrs[N=2,theta=plus", "rsrs[N=2,theta=minus", "negative-control:rsrs-with-R"]
    _check(5, 300, [rep], start, req)


def test_criterion_6_super():
    start = time.perf_counter()
    rep = _run("super")
    _check(6, 120, [rep], start, ["s-symmetry-classical[sig=1|2,theta=super,p=1]",
                                  "s-symmetry-module[sig=1|2,theta=super", "tau-automorphism[sig=1|2"])


def test_criterion_7_representations():
    start = time.perf_counter()
    rep = _run("reps")
    req = ["rtt[N=2,", "rtt[N=3,", "truncation[", "round-trip[N=2,", "round-trip[N=3,",
           "ratio-formula[N=3,", "degree-bound[", "sweep-generic-commutant", "sweep-degeneration-pattern"]
    _check(7, 300, [rep], start, req)
    three = [c for c in rep.checks if c.name.startswith("round-trip[N=3,params=['1/2', '4', '-3']")]
    assert three, "Y(3) with p = 3 missing"


def test_criterion_8_nls():
    start = time.perf_counter()
    rep = _run("nls")
    req = ["path-independence[N=2,momenta=['0', '3']]", "path-independence[N=2,momenta=['0', '1', '5']]",
           "hierarchy-commutes[N=2,momenta=['0', '1', '5'],m<=3]", "descent[N=2,momenta=['0', '1', '5']]",
           "negative-control:drop-f-term", "charge-dictionary[N=2,momenta=['0', '1', '5']]",
           "truncation["]
    _check(8, 120, [rep], start, req)


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "ywkit", *args], capture_output=True, text=True)


def test_criterion_9_cli(tmp_path):
    start = time.perf_counter()
    cfg = tmp_path / "twist.yaml"
    cfg.write_text("suite: twist\nsig: 2\ntheta: minus\n")
    bodies = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        res = _cli("verify", "--config", str(cfg), "--out", str(out))
        assert res.returncode == 0
        bodies.append(json.dumps(json.loads(out.read_text())["body"], sort_keys=True, indent=2).encode())
    codes = {
        "pass": _cli("verify", "ybe", "--sig", "2").returncode,
        "malformed": _cli("verify", "ybe", "--sig", "2|−1").returncode,
        "odd-symplectic": _cli("verify", "twist", "--sig", "3", "--theta", "minus").returncode,
        "empty": _cli("verify").returncode,
    }
    elapsed = time.perf_counter() - start
    ok = bodies[0] == bodies[1] and codes == {"pass": 0, "malformed": 2, "odd-symplectic": 2, "empty": 2}
    _record(9, ok, elapsed, 60, f"exit codes {codes}")
    assert bodies[0] == bodies[1]
    assert codes == {"pass": 0, "malformed": 2, "odd-symplectic": 2, "empty": 2}
    assert elapsed < 60
