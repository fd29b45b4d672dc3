"""End-to-end verifications: the alternating quantum Schubert identity, the
321-avoiding determinantal formula, the involution symmetry of the mirror
domain, and the spectrum-versus-critical-values comparison."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .combinat import (
    FlagShape,
    Permutation,
    all_shapes,
    build_xi_and_wJ,
    grassmannian_from_first_values,
    skew_shape_321,
)
from .crit import CritConfig, CritPoint, find_critical_points, toeplitz_scaling
from .errors import FormulaViolation, IdentityViolation
from .exactalg import complex_to_json, det, lu_unipotent, minor
from .mirror import random_z_vector, uv_from_z, w0_matrix, z_from_vector, zchart
from .qhpartial import c1_spectrum
from .schubring import QHClass, class_product, normal_form, quantum_H, xq_table

__all__ = [
    "G_function",
    "G_1",
    "tau",
    "KeyIdentityReport",
    "check_key_identity",
    "key_identity_instances",
    "key_identity_sweep",
    "DetFormulaReport",
    "check_det_formula",
    "MirrorSpectrumReport",
    "check_mirror_spectrum",
    "TauSymmetryReport",
    "check_tau_symmetry",
    "EquivalenceReport",
    "check_equivalence_route",
]


# -- rational functions on the flag variety side ---------------------------------


def G_function(g, rows, m: int):
    """Minor quotient on B_- cosets: rows are 0-based, columns are the last
    n-m ones for both numerator and denominator."""
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    cols = range(m, n)
    num = minor(g, sorted(rows), cols)
    den = minor(g, range(m, n), cols)
    return num / den


def G_1(g, m: int):
    """The function G_1^m: numerator rows {m} u [m+2, n] (1-based)."""
    n = np.asarray(g).shape[0]
    rows = [m - 1] + list(range(m + 1, n))
    return G_function(g, rows, m)


def tau(g) -> np.ndarray:
    """The involution g -> w0 (g^{-1})^T w0^{-1}."""
    g = np.asarray(g, dtype=complex)
    W = w0_matrix(g.shape[0])
    return W @ np.linalg.inv(g).T @ np.linalg.inv(W)


# -- quantum Schubert identity -----------------------------------------------------


@dataclass
class KeyIdentityReport:
    shape: FlagShape
    j: int
    i: int
    ok: bool
    terms: int
    residual: QHClass | None = None
    elapsed: float = 0.0

    def to_json(self):
        return {
            "shape": self.shape.to_string(),
            "j": self.j,
            "i": self.i,
            "ok": self.ok,
            "terms": self.terms,
            "residual": self.residual.to_json() if self.residual else {},
        }


def check_key_identity(shape: FlagShape, j: int, i: int,
                       cache_dir=None, strict: bool = True) -> KeyIdentityReport:
    """Verify sum_J (-1)^{|J|} sigma_{w_J} sigma_{[1, n_j+d] \\ J} = 0 in the
    complete-flag ring, exactly.  All classes are indexed by minimal coset
    representatives and carry no quantum parameters, so the vanishing descends
    to the partial-flag ring."""
    t0 = time.time()
    n = shape.n
    d = i - (n - shape.nj(j + 1))
    njd = shape.nj(j) + d
    table = build_xi_and_wJ(shape, j, i)
    total: QHClass | None = None
    terms = 0
    for J0, wJ in table.items():
        if wJ is None:
            continue
        terms += 1
        sgn = (-1) ** sum(v + 1 for v in J0)
        G = grassmannian_from_first_values(set(range(njd)) - set(J0), n)
        part = class_product(wJ, G, n, cache_dir).scaled(sgn)
        total = part if total is None else total + part
    ok = total is None or total.is_zero()
    report = KeyIdentityReport(shape, j, i, ok, terms,
                               None if ok else total, time.time() - t0)
    if strict and not ok:
        raise IdentityViolation(f"nonzero residue for {shape}, j={j}, i={i}: {total}")
    return report


def key_identity_instances(max_n: int):
    """All legal (shape, j, i) with n <= max_n."""
    out = []
    for n in range(3, max_n + 1):
        for shape in all_shapes(n):
            for j in range(1, shape.r):
                for i in range(n - shape.nj(j + 1) + 1, n - shape.nj(j)):
                    out.append((shape, j, i))
    return out


def key_identity_sweep(max_n: int, cache_dir=None, strict: bool = True):
    return [check_key_identity(shape, j, i, cache_dir, strict)
            for shape, j, i in key_identity_instances(max_n)]


# -- determinantal formula -----------------------------------------------------------


@dataclass
class DetFormulaReport:
    n: int
    checked: int
    ok: bool
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    def to_json(self):
        return {"n": self.n, "checked": self.checked, "ok": self.ok,
                "failures": [str(w) for w in self.failures]}


def det_formula_class(w: Permutation, n: int) -> QHClass:
    """normal_form of det(H_{lambda_i - mu_j - i + j}(X_{phi_i}))."""
    sk = skew_shape_321(w)
    k = len(sk.flag)
    tab = xq_table(n)
    if k == 0:
        from .exactalg import MPoly
        return normal_form(MPoly.const(tab, 1), n)
    rows = []
    for a in range(1, k + 1):
        row = []
        for b in range(1, k + 1):
            l = sk.outer[a - 1] - sk.inner[b - 1] - a + b
            row.append(quantum_H(l, sk.flag[a - 1], n))
        rows.append(row)
    return normal_form(det(rows), n)


def check_det_formula(n: int, strict: bool = True) -> DetFormulaReport:
    """For every 321-avoiding w in S_n the determinantal class equals sigma_w."""
    t0 = time.time()
    failures = []
    checked = 0
    from .schubring import _sorted_perms, q_table
    from .exactalg import MPoly
    qt = q_table(n)
    for w in _sorted_perms(n):
        if not w.is_321_avoiding:
            continue
        checked += 1
        got = det_formula_class(w, n)
        want = QHClass(("complete", n), {w: MPoly.const(qt, 1)})
        if got != want:
            failures.append(w)
    ok = not failures
    if strict and not ok:
        raise FormulaViolation(f"determinantal formula failed for {failures}")
    return DetFormulaReport(n, checked, ok, failures, time.time() - t0)


# -- mirror spectrum check -------------------------------------------------------------


@dataclass
class MirrorSpectrumReport:
    shape: FlagShape
    q: list
    passed: bool
    eigenvalues: np.ndarray
    critical_values: list  # with multiplicity
    max_distance: float
    tolerance: float
    points: list[CritPoint]
    elapsed: float = 0.0

    def to_json(self):
        return {
            "shape": self.shape.to_string(),
            "q": [complex_to_json(complex(v)) for v in self.q],
            "passed": bool(self.passed),
            "eigenvalues": [complex_to_json(v) for v in
                            sorted(self.eigenvalues, key=lambda z: (z.real, z.imag))],
            "critical_values": [complex_to_json(complex(v)) for v in
                                sorted(self.critical_values, key=lambda z: (z.real, z.imag))],
            "max_distance": self.max_distance,
            "tolerance": self.tolerance,
            "points": [p.to_json() for p in self.points],
        }


def check_mirror_spectrum(shape: FlagShape, q, cfg: CritConfig | None = None) -> MirrorSpectrumReport:
    """Match the c_1 eigenvalue multiset against the critical values of the
    superpotential (with local multiplicity) by optimal assignment."""
    t0 = time.time()
    eig = c1_spectrum(shape, q)
    points = find_critical_points(shape, q, cfg)
    values = []
    for p in points:
        values.extend([p.value] * p.multiplicity)
    scale = 1.0 + max([np.abs(eig).max()] + [abs(v) for v in values] or [0.0])
    tol = 1e-6 * scale
    if len(values) == len(eig):
        cost = np.abs(np.array(values)[:, None] - eig[None, :])
        rr, cc = linear_sum_assignment(cost)
        maxd = float(cost[rr, cc].max())
        passed = maxd < tol
    else:
        maxd = float("inf")
        passed = False
    return MirrorSpectrumReport(shape, list(q), passed, eig, values,
                                maxd, tol, points, time.time() - t0)


# -- involution symmetry -----------------------------------------------------------------


@dataclass
class TauSymmetryReport:
    shape: FlagShape
    complementary_steps: tuple
    samples: int
    max_involution_residual: float
    max_unipotent_residual: float
    max_superdiagonal_residual: float
    max_G_residual: float

    @property
    def ok(self) -> bool:
        return (self.max_involution_residual < 1e-9
                and self.max_unipotent_residual < 1e-9
                and self.max_superdiagonal_residual < 1e-9
                and self.max_G_residual < 1e-9)

    def to_json(self):
        return {
            "shape": self.shape.to_string(),
            "complementary_steps": list(self.complementary_steps),
            "samples": self.samples,
            "max_involution_residual": self.max_involution_residual,
            "max_unipotent_residual": self.max_unipotent_residual,
            "max_superdiagonal_residual": self.max_superdiagonal_residual,
            "max_G_residual": self.max_G_residual,
            "ok": self.ok,
        }


def check_tau_symmetry(shape: FlagShape, samples: int = 50, seed: int = 0) -> TauSymmetryReport:
    """Numeric checks of the involution tau(g) = w0 (g^{-1})^T w0^{-1}:
    it is an involution, preserves the upper unipotent group, reflects
    superdiagonal entries, and exchanges G_1^m with G_1^{n-m}."""
    n = shape.n
    rng = random.Random(seed)
    comp = tuple(sorted(n - s for s in shape.steps))
    r_inv = r_uni = r_sd = r_G = 0.0

    def rmat(scale=1.0):
        return np.array([[complex(rng.gauss(0, scale), rng.gauss(0, scale))
                          for _ in range(n)] for _ in range(n)])

    for _ in range(samples):
        g = rmat() + 2 * np.eye(n)
        r_inv = max(r_inv, float(np.abs(tau(tau(g)) - g).max()))
        u = np.eye(n) + np.triu(rmat(), 1)
        tu = tau(u)
        r_uni = max(r_uni, float(np.abs(np.tril(tu, -1)).max()),
                    float(np.abs(np.diag(tu) - 1).max()))
        for i in range(1, n):
            r_sd = max(r_sd, abs(tu[n - i - 1, n - i] - u[i - 1, i]))

        zvec = random_z_vector(shape, rng, 0.5, 1.5)
        z = z_from_vector(shape, zvec)
        try:
            L, _ = lu_unipotent(z)
        except Exception:
            continue
        q = [complex(0.7 + 0.6 * rng.random(), 0.4 * (rng.random() - 0.5))
             for _ in range(shape.r)]
        bminus = np.diag(toeplitz_scaling(shape, q)) @ np.asarray(L)
        g1 = bminus @ w0_matrix(n)
        g2 = tau(bminus) @ w0_matrix(n)
        # G_1^m is regular on the cell only at the steps m in I^P; tau takes
        # the P-side to the complementary shape, where n-m is again a step
        for m in shape.steps:
            a = G_1(g1, m)
            b = G_1(g2, n - m)
            r_G = max(r_G, abs(a - b) / (1 + abs(a)))
    return TauSymmetryReport(shape, comp, samples, r_inv, r_uni, r_sd, r_G)


# -- critical-point equivalence route -----------------------------------------------------


@dataclass
class EquivalenceReport:
    shape: FlagShape
    q: list
    points: int
    max_residual: float
    ok: bool

    def to_json(self):
        return {"shape": self.shape.to_string(),
                "q": [complex_to_json(complex(v)) for v in self.q],
                "points": self.points, "max_residual": self.max_residual,
                "ok": self.ok}


def check_equivalence_route(shape: FlagShape, q, cfg: CritConfig | None = None,
                            tol: float = 1e-7) -> EquivalenceReport:
    """At every critical point, check the superdiagonal identities that tie
    the factorization entries to the rational functions G_1^m:
    u_{i,i+1} equals -G_1^{n_j} at i = n - n_j, equals the constant value for
    i < n - n_r, and equals -(G_1^{n_j} + G_1^{n_{j+1}}) in between; the
    v-entries satisfy v = -(t_{n_j+1}/t_{n_j}) G_1^{n_j} at every chart point."""
    n, r = shape.n, shape.r
    points = find_critical_points(shape, q, cfg)
    t = toeplitz_scaling(shape, q)
    worst = 0.0
    for p in points:
        z = z_from_vector(shape, p.z)
        u, v = uv_from_z(z, shape)
        L, _ = lu_unipotent(z)
        bminus = np.diag(t) @ np.asarray(L)
        g = bminus @ w0_matrix(n)
        gvals = {m: G_1(g, m) for m in shape.steps}
        for j in range(1, r + 1):
            nj = shape.nj(j)
            want = -(t[nj] / t[nj - 1]) * gvals[nj]
            worst = max(worst, abs(v[nj - 1, nj] - want) / (1 + abs(want)))
            i = n - nj
            want = -gvals[nj]
            worst = max(worst, abs(u[i - 1, i] - want) / (1 + abs(want)))
        for j in range(1, r):
            for i in range(n - shape.nj(j + 1) + 1, n - shape.nj(j)):
                want = -(gvals[shape.nj(j)] + gvals[shape.nj(j + 1)])
                worst = max(worst, abs(u[i - 1, i] - want) / (1 + abs(want)))
        base = u[n - shape.nj(r) - 1, n - shape.nj(r)]
        for i in range(1, n - shape.nj(r)):
            worst = max(worst, abs(u[i - 1, i] - base) / (1 + abs(base)))
    return EquivalenceReport(shape, list(q), len(points), worst, worst < tol)
