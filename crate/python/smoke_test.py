"""Smoke test for the qfwalk_py extension.

Install with `pip install --no-build-isolation -e crates/qfwalk-py`, then run
`python3 python/smoke_test.py`. Exits non-zero on the first failed check.
"""

import json
import math
import sys

import numpy as np
import qfwalk_py as qf


def arr(rows):
    return np.array(rows, dtype=complex)


def check(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name} {detail}".rstrip())
    if not ok:
        sys.exit(1)


def symplectic_round_trip():
    rng = np.random.default_rng(7)
    z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    u, _ = np.linalg.qr(z)
    p = u @ np.diag([0.0, 0.4, 1.1]) @ u.conj().T
    c = u @ np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 3))) @ u.T
    v, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    t = qf.SymplecticTriple(v.tolist(), c.tolist(), p.tolist())
    lin, anti = t.build()
    t2 = qf.SymplecticTriple.decompose(lin, anti)
    err = max(np.abs(arr(t2.v) - v).max(), np.abs(arr(t2.p) - p).max())
    check("symplectic round trip", err < 1e-9, f"max err {err:.2e}")
    x = rng.normal(size=3) + 1j * rng.normal(size=3)
    back = np.array(t.apply_inverse(t.apply(x.tolist())))
    check("inverse", np.abs(back - x).max() < 1e-10)
    # B preserves the symplectic form Im<x, y>
    y = rng.normal(size=3) + 1j * rng.normal(size=3)
    bx, by = np.array(t.apply(x.tolist())), np.array(t.apply(y.tolist()))
    check("symplectic form", abs(np.vdot(bx, by).imag - np.vdot(x, y).imag) < 1e-10)


def amplitude():
    a = np.diag([0.3, 0.7])
    s = qf.Amplitude(a.tolist())
    sigma = arr(s.sigma)
    expected = np.block([[np.diag(np.cosh([0.3, 0.7])), 0 * a], [0 * a, np.diag(np.sinh([0.3, 0.7]))]])
    check("gauge-invariant amplitude", s.gauge_invariant and np.abs(sigma - expected).max() < 1e-12)
    x = [1.0 + 0.5j, -0.25j]
    cov = np.linalg.norm(np.cosh(np.diag(a)) * x) ** 2 + np.linalg.norm(np.sinh(np.diag(a)) * x) ** 2
    check("covariance", abs(s.covariance(x) - cov) < 1e-12)


def partial_conjugate():
    rng = np.random.default_rng(3)
    h, h1, h2 = 2, 3, 2
    y = rng.normal(size=(h * h2, h1)) + 1j * rng.normal(size=(h * h2, h1))
    yc, norm = qf.partial_conj(y.tolist(), h, h1, h2)
    ref = np.conj(y.reshape(h, h2, h1).transpose(0, 2, 1)).reshape(h * h1, h2)
    check("partial conjugate", np.abs(arr(yc) - ref).max() == 0.0)
    check("partial conjugate norm", abs(norm - np.linalg.norm(ref, 2)) < 1e-12)


def fock():
    f = qf.FockSpace(1, 25)
    x, y = 0.4 + 0.2j, -0.1 + 0.3j
    ip = np.vdot(f.exponential_vector([x]), f.exponential_vector([y]))
    check("exponential vector overlap", abs(ip - np.exp(np.conj(x) * y)) < 1e-12)
    w, tail = f.weyl([x])
    vac = np.zeros(f.dim, dtype=complex)
    vac[0] = 1.0
    got = np.vdot(vac, arr(w) @ vac)
    check("Weyl vacuum expectation", abs(got - math.exp(-abs(x) ** 2 / 2)) < 1e-10, f"tail {tail:.1e}")


def walk():
    m = qf.WalkModel.thermal_qubit(gamma0=0.8)
    s = m.s_values()
    check("thermal s value", abs(s[0] - math.sqrt(0.2 / 0.6)) < 1e-12, f"{s}")
    lim = m.limit()
    check("limit is quasifree and unique", lim["quasifree_residual"] < 1e-10 and lim["unique"])
    rows, slope = m.converge([16, 64, 256])
    errs = [r[2] for r in rows]
    check("walk converges", errs[0] > errs[1] > errs[2], f"errors {errs}, slope {slope:.3f}")


def cli_modes():
    code, report, _ = qf.run("verify", "{}", "algebra")
    check("verify algebra suite", code == 0)
    cfg = json.dumps({"grid": {"nList": [16, 64]}})
    code, _, csv = qf.run("converge", cfg)
    check("converge csv", code == 0 and csv.splitlines()[0] == "n,tau,abs_error,ratio")
    try:
        qf.run("dilate", json.dumps({"grid": {"nList": [64, 16]}}))
        check("invalid configuration rejected", False)
    except ValueError as e:
        check("invalid configuration rejected", "nList" in str(e), str(e))


if __name__ == "__main__":
    symplectic_round_trip()
    amplitude()
    partial_conjugate()
    fock()
    walk()
    cli_modes()
    print("all smoke checks passed")
