"""Quantum Schubert calculus in the complete-flag ring QH*(Fl_n).

Multiplication by the divisor classes is realized by sparse Monk operators on
the Schubert basis; products of general classes evaluate one factor's quantum
Schubert polynomial in the commuting operators X_i = M_i - M_{i-1}.  A
linear-algebra-free straightening of polynomials modulo the quantum ideal
I_n^q is kept as an independent small-n oracle (normal_form).
"""

from __future__ import annotations

import gzip
import itertools
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .combinat import FlagShape, Permutation
from .errors import NonIntegralCoefficient, NotInGroup, SizeCap
from .exactalg import MPoly, VarTable

__all__ = [
    "xq_table",
    "q_table",
    "quantum_E",
    "quantum_H",
    "schubert_poly",
    "divided_difference",
    "quantum_schubert",
    "elementary_expand",
    "MonkOperators",
    "monk_operators",
    "class_product",
    "omega_involution",
    "normal_form",
    "QHClass",
    "CACHE_ENV",
]

CACHE_FORMAT_VERSION = 1
CACHE_ENV = "FLAGMIRROR_CACHE_DIR"
_MAX_N = 8


@lru_cache(maxsize=None)
def xq_table(n: int) -> VarTable:
    """x_1..x_n (weight 1) and q_1..q_{n-1} (weight 2)."""
    spec = [(f"x{i}", "x", 1) for i in range(1, n + 1)]
    spec += [(f"q{i}", "q", 2) for i in range(1, n)]
    return VarTable.make(spec)


@lru_cache(maxsize=None)
def q_table(n: int) -> VarTable:
    """q_1..q_{n-1} only; the coefficient ring of QH*(Fl_n)."""
    return VarTable.make([(f"q{i}", "q", 2) for i in range(1, n)])


def _x(n: int, i: int) -> MPoly:
    return MPoly.var(xq_table(n), f"x{i}")


def _q(n: int, i: int) -> MPoly:
    return MPoly.var(xq_table(n), f"q{i}")


@lru_cache(maxsize=None)
def quantum_E(i: int, k: int, n: int) -> MPoly:
    """Quantum elementary polynomial E_i^k in Z[q][x_1..x_n].

    Defined by det(1 + t G_k) = sum_i E_i^k t^i for the tridiagonal matrix G_k
    with diagonal x, superdiagonal q and subdiagonal -1; computed here via the
    recurrence E_i^k = E_i^{k-1} + x_k E_{i-1}^{k-1} + q_{k-1} E_{i-2}^{k-2}.
    """
    if k > n:
        raise ValueError(f"E_i^k needs k <= n, got k={k}, n={n}")
    tab = xq_table(n)
    if i == 0:
        return MPoly.const(tab, 1)
    if i < 0 or i > k:
        return MPoly.zero(tab)
    out = quantum_E(i, k - 1, n) + _x(n, k) * quantum_E(i - 1, k - 1, n)
    if k >= 2:
        out = out + _q(n, k - 1) * quantum_E(i - 2, k - 2, n)
    return out


@lru_cache(maxsize=None)
def quantum_H(l: int, k: int, n: int) -> MPoly:
    """Quantum complete homogeneous polynomial H_l^k: the l x l determinant
    with (i, j) entry E_{j-i+1}^{k+j-1}.  At q = 0 this is h_l(x_1..x_k)."""
    tab = xq_table(n)
    if l < 0:
        return MPoly.zero(tab)
    if l == 0:
        return MPoly.const(tab, 1)
    if k + l - 1 > n:
        raise ValueError(f"H_{l}^{k} needs k+l-1 <= n = {n}")
    from .exactalg import det

    rows = [[quantum_E(j - i + 1, k + j - 1, n) for j in range(1, l + 1)] for i in range(1, l + 1)]
    return det(rows)


def divided_difference(f: MPoly, i: int, n: int) -> MPoly:
    """Divided difference (f - s_i f) / (x_i - x_{i+1}) on xq_table(n)."""
    ia, ib = i - 1, i  # table positions of x_i, x_{i+1}
    out: dict = {}
    for e, c in f.terms.items():
        a, b = e[ia], e[ib]
        if a == b:
            continue
        lo, hi, sgn = (b, a, 1) if a > b else (a, b, -1)
        for t in range(lo, hi):
            e2 = list(e)
            e2[ia], e2[ib] = t, a + b - 1 - t
            key = tuple(e2)
            v = out.get(key, 0) + sgn * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return MPoly(f.table, out)


@lru_cache(maxsize=None)
def schubert_poly(w: Permutation, n: int) -> MPoly:
    """Classical Schubert polynomial, by divided differences from x^delta."""
    if w.n != n:
        raise NotInGroup(f"{w} is not in S_{n}")
    if w.length == n * (n - 1) // 2:
        e = [0] * xq_table(n).size
        for i in range(n - 1):
            e[i] = n - 1 - i
        return MPoly.monomial(xq_table(n), tuple(e))
    ol = w.oneline
    for i in range(n - 1):
        if ol[i] < ol[i + 1]:  # ascent: w s_i is longer
            return divided_difference(schubert_poly(w.times_s(i + 1), n), i + 1, n)
    raise AssertionError("unreachable")


def apply_dd_word(f: MPoly, word: tuple[int, ...], n: int) -> MPoly:
    """Compose divided differences along a reduced word (rightmost first)."""
    for i in reversed(word):
        if f.is_zero():
            break
        f = divided_difference(f, i, n)
    return f


# -- straightening of symmetric polynomials and Schubert decomposition -------


@lru_cache(maxsize=None)
def _elementary(i: int, k: int, n: int) -> MPoly:
    """Classical e_i(x_1..x_k) inside xq_table(n)."""
    tab = xq_table(n)
    if i == 0:
        return MPoly.const(tab, 1)
    if i < 0 or i > k:
        return MPoly.zero(tab)
    return _elementary(i, k - 1, n) + _x(n, k) * _elementary(i - 1, k - 1, n)


@lru_cache(maxsize=None)
def _sorted_perms(n: int) -> tuple[Permutation, ...]:
    perms = [Permutation(p) for p in itertools.permutations(range(n))]
    perms.sort(key=lambda w: (w.length, w.oneline))
    return tuple(perms)


def _x_degree(e, n: int) -> int:
    return sum(e[:n])


def schubert_symmetric_decompose(p: MPoly, n: int) -> dict[Permutation, MPoly]:
    """Write p = sum_v f_v * S_v with every f_v symmetric in the x variables.

    Works over Z[q]; divided differences act on the x part only, so
    f_v = dd_v(remainder) by downward induction on length.
    """
    rem = p
    out: dict[Permutation, MPoly] = {}
    maxlen = max((_x_degree(e, n) for e in rem.terms), default=-1)
    by_len: dict[int, list[Permutation]] = {}
    for w in _sorted_perms(n):
        by_len.setdefault(w.length, []).append(w)
    for level in range(min(maxlen, n * (n - 1) // 2), -1, -1):
        if rem.is_zero():
            break
        found = []
        for v in by_len[level]:
            fv = apply_dd_word(rem, v.reduced_word(), n)
            if not fv.is_zero():
                found.append((v, fv))
        for v, fv in found:
            out[v] = fv
            rem = rem - fv * schubert_poly(v, n)
    if not rem.is_zero():
        raise AssertionError("Schubert decomposition left a remainder")
    return out


def symmetric_to_e(f: MPoly, n: int) -> dict[tuple[int, ...], MPoly]:
    """Expand an x-symmetric f (coefficients may involve q) as a polynomial in
    e_1(x_1..x_n)..e_n(x_1..x_n); keys are e-exponent vectors, values live in
    the q-only part of xq_table(n)."""
    tab = xq_table(n)
    out: dict[tuple[int, ...], MPoly] = {}
    rem = f
    while not rem.is_zero():
        # lex-max x-monomial; x-symmetry forces weakly decreasing exponents
        e = max(rem.terms, key=lambda t: t[:n])
        lam = e[:n]
        if any(a < b for a, b in zip(lam, lam[1:])):
            raise AssertionError(f"not symmetric in x: monomial {e}")
        c = rem.terms[e]
        expo = tuple(lam[i] - (lam[i + 1] if i + 1 < n else 0) for i in range(n))
        qmono = MPoly.monomial(tab, (0,) * n + e[n:], c)
        prod = MPoly.const(tab, 1)
        for i, m in enumerate(expo, start=1):
            if m:
                prod = prod * _elementary(i, n, n) ** m
        rem = rem - qmono * prod
        out[expo] = out.get(expo, MPoly.zero(tab)) + qmono
    return {k: v for k, v in out.items() if not v.is_zero()}


# -- e-monomial expansion and quantization -----------------------------------


@lru_cache(maxsize=None)
def _slice_expander(n: int, m: int):
    """Transition data between degree-m substaircase monomials (exponents
    a_k <= n-k) and standard elementary monomials e_{i_1..i_{n-1}}."""
    subst = [e for e in itertools.product(*(range(n - k + 1) for k in range(1, n + 1)))
             if sum(e) == m]
    emonos = [i for i in itertools.product(*(range(k + 1) for k in range(1, n)))
              if sum(i) == m]
    assert len(subst) == len(emonos)
    col = {e: idx for idx, e in enumerate(subst)}
    mat = []
    for imono in emonos:
        prod = MPoly.const(xq_table(n), 1)
        for k, ik in enumerate(imono, start=1):
            if ik:
                prod = prod * _elementary(ik, k, n)
        row = [Fraction(0)] * len(subst)
        for e, c in prod.terms.items():
            row[col[e[:n]]] += c
        mat.append(row)
    inv = _fraction_inverse(mat)
    return subst, emonos, col, inv


def _fraction_inverse(mat):
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise AssertionError("singular slice matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        if pv != 1:
            aug[c] = [v / pv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def elementary_expand(p: MPoly, n: int) -> dict[tuple[int, ...], Fraction]:
    """Expand a q-free polynomial in standard elementary monomials
    e_{i_1..i_{n-1}} with 0 <= i_k <= k; raises if p is outside their span."""
    out: dict[tuple[int, ...], Fraction] = {}
    by_deg: dict[int, dict] = {}
    for e, c in p.terms.items():
        if any(e[n:]):
            raise ValueError("elementary_expand expects a q-free polynomial")
        by_deg.setdefault(sum(e[:n]), {})[e[:n]] = c
    for m, terms in by_deg.items():
        subst, emonos, col, inv = _slice_expander(n, m)
        vec = [Fraction(0)] * len(subst)
        for e, c in terms.items():
            if e not in col:
                raise ValueError(f"monomial {e} outside the substaircase span")
            vec[col[e]] = c
        # p = sum_i c_i emono_i means vec = mat^T c, so c = (mat^{-1})^T vec
        for row_idx, imono in enumerate(emonos):
            c = sum((inv[k][row_idx] * vec[k] for k in range(len(vec))), Fraction(0))
            if c:
                out[imono] = c
    return out


@lru_cache(maxsize=None)
def quantum_schubert(w: Permutation, n: int) -> MPoly:
    """Quantum Schubert polynomial: re-express the elementary-monomial
    expansion of the classical S_w with quantum elementary polynomials."""
    if w.n != n:
        raise NotInGroup(f"{w} is not in S_{n}")
    coeffs = elementary_expand(schubert_poly(w, n), n)
    tab = xq_table(n)
    out = MPoly.zero(tab)
    for imono, c in coeffs.items():
        if c.denominator != 1:
            raise NonIntegralCoefficient(f"e-expansion of {w}: {c}")
        prod = MPoly.const(tab, c)
        for k, ik in enumerate(imono, start=1):
            if ik:
                prod = prod * quantum_E(ik, k, n)
        out = out + prod
    return out


# -- Monk operators and products ----------------------------------------------

QExp = tuple
Entry = tuple  # (row, qexp)


@dataclass
class MonkOperators:
    """Multiplication operators by the divisor classes sigma_{s_k} on the
    Schubert basis of QH*(Fl_n), ordered by (length, one-line)."""

    n: int
    basis: tuple[Permutation, ...]
    index: dict[Permutation, int]
    columns: list[dict[int, list[Entry]]] = field(repr=False)  # [k-1][col] -> entries

    def apply(self, k: int, vec: dict[int, dict]) -> dict[int, dict]:
        """Apply M_k (k in 1..n-1) to a sparse vector of q-polynomials."""
        cols = self.columns[k - 1]
        out: dict[int, dict] = {}
        for ci, poly in vec.items():
            for row, qexp in cols.get(ci, ()):
                acc = out.setdefault(row, {})
                if any(qexp):
                    for b, c in poly.items():
                        key = tuple(x + y for x, y in zip(b, qexp))
                        v = acc.get(key, 0) + c
                        if v:
                            acc[key] = v
                        else:
                            del acc[key]
                else:
                    for b, c in poly.items():
                        v = acc.get(b, 0) + c
                        if v:
                            acc[b] = v
                        else:
                            del acc[b]
        return {r: p for r, p in out.items() if p}

    def apply_x(self, i: int, vec: dict[int, dict]) -> dict[int, dict]:
        """Apply X_i = M_i - M_{i-1} (M_0 = 0)."""
        out = self.apply(i, vec) if i >= 1 else {}
        if i >= 2:
            sub = self.apply(i - 1, vec)
            for r, poly in sub.items():
                acc = out.setdefault(r, {})
                for b, c in poly.items():
                    v = acc.get(b, 0) - c
                    if v:
                        acc[b] = v
                    else:
                        del acc[b]
        return {r: p for r, p in out.items() if p}


def _length_jump(ol: tuple[int, ...], a: int, b: int) -> int:
    """l(w t_{ab}) - l(w) for 0-based positions a < b."""
    va, vb = ol[a], ol[b]
    lo, hi = (va, vb) if va < vb else (vb, va)
    between = sum(1 for c in range(a + 1, b) if lo < ol[c] < hi)
    return (1 + 2 * between) * (1 if va < vb else -1)


def _build_monk(n: int) -> MonkOperators:
    basis = _sorted_perms(n)
    index = {w: i for i, w in enumerate(basis)}
    zero_q = (0,) * (n - 1)
    columns: list[dict[int, list[Entry]]] = [dict() for _ in range(n - 1)]
    for ci, w in enumerate(basis):
        ol = w.oneline
        for a in range(n - 1):
            for b in range(a + 1, n):
                jump = _length_jump(ol, a, b)
                target = None
                if jump == 1:
                    target = (index[w.times_transposition(a, b)], zero_q)
                elif jump == 1 - 2 * (b - a):
                    qexp = tuple(1 if a <= i < b else 0 for i in range(n - 1))
                    target = (index[w.times_transposition(a, b)], qexp)
                if target is None:
                    continue
                for k in range(a, b):  # all k with a+1 <= k+1 <= b in 1-based terms
                    columns[k].setdefault(ci, []).append(target)
    return MonkOperators(n=n, basis=basis, index=index, columns=columns)


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "flagmirror"


def _cache_path(n: int, cache_dir: Path) -> Path:
    return cache_dir / f"monk_n{n}_v{CACHE_FORMAT_VERSION}.json.gz"


def _save_monk(ops: MonkOperators, path: Path) -> None:
    payload = {
        "format_version": CACHE_FORMAT_VERSION,
        "n": ops.n,
        "basis_ordering": "length-lex-oneline",
        "operators": [
            [[row, col, list(qexp), 1] for col, entries in sorted(cols.items())
             for row, qexp in entries]
            for cols in ops.columns
        ],
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with gzip.open(tmp, "wt") as fh:
        json.dump(payload, fh)
    tmp.replace(path)


def _load_monk(n: int, path: Path) -> MonkOperators | None:
    try:
        with gzip.open(path, "rt") as fh:
            payload = json.load(fh)
        if (payload["format_version"] != CACHE_FORMAT_VERSION or payload["n"] != n
                or payload["basis_ordering"] != "length-lex-oneline"):
            return None
        basis = _sorted_perms(n)
        index = {w: i for i, w in enumerate(basis)}
        columns: list[dict[int, list[Entry]]] = [dict() for _ in range(n - 1)]
        ops_payload = payload["operators"]
        if len(ops_payload) != n - 1:
            return None
        for k, entries in enumerate(ops_payload):
            for row, col, qexp, coeff in entries:
                if coeff != 1 or len(qexp) != n - 1:
                    return None
                columns[k].setdefault(col, []).append((row, tuple(qexp)))
        return MonkOperators(n=n, basis=basis, index=index, columns=columns)
    except Exception:
        return None  # corrupt caches are rebuilt, never trusted


_monk_memory: dict[int, MonkOperators] = {}


def monk_operators(n: int, cache_dir: Path | str | None = None) -> MonkOperators:
    """Monk operators for QH*(Fl_n), 2 <= n <= 8; disk-cached for n >= 6."""
    if not (2 <= n <= _MAX_N):
        raise SizeCap(f"monk operators support 2 <= n <= {_MAX_N}, got {n}")
    if n in _monk_memory:
        return _monk_memory[n]
    cdir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    ops = None
    if n >= 6:
        ops = _load_monk(n, _cache_path(n, cdir))
    if ops is None:
        ops = _build_monk(n)
        if n >= 6:
            try:
                _save_monk(ops, _cache_path(n, cdir))
            except OSError:
                pass
    _monk_memory[n] = ops
    return ops


@dataclass
class QHClass:
    """A vector over the Schubert basis with q-polynomial coefficients."""

    ring: tuple | FlagShape  # ("complete", n) or a FlagShape
    terms: dict[Permutation, MPoly]

    def __post_init__(self):
        self.terms = {w: c for w, c in self.terms.items() if not c.is_zero()}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "QHClass") -> "QHClass":
        assert self.ring == other.ring
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, MPoly.zero(c.table)) + c
        return QHClass(self.ring, out)

    def __sub__(self, other: "QHClass") -> "QHClass":
        return self + other.scaled(-1)

    def scaled(self, c) -> "QHClass":
        return QHClass(self.ring, {w: p * c for w, p in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, QHClass) and self.ring == other.ring
                and self.terms == other.terms)

    def coefficient(self, w: Permutation) -> MPoly:
        table = next((c.table for c in self.terms.values()), None)
        if w in self.terms:
            return self.terms[w]
        if table is None:
            raise KeyError(w)
        return MPoly.zero(table)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: (w.length, w.oneline)):
            c = self.terms[w]
            cs = str(c)
            cs = f"({cs})" if ("+" in cs or "-" in cs[1:]) else cs
            bits.append(f"{cs}*s[{w}]" if cs != "1" else f"s[{w}]")
        return " + ".join(bits)

    def to_json(self):
        return {str(w): c.to_json() for w, c in
                sorted(self.terms.items(), key=lambda t: (t[0].length, t[0].oneline))}


def _vec_to_class(vec: dict[int, dict], ops: MonkOperators) -> QHClass:
    n = ops.n
    qt = q_table(n)
    terms: dict[Permutation, MPoly] = {}
    for idx, poly in vec.items():
        coeffs = {}
        for b, c in poly.items():
            c = Fraction(c)
            if c.denominator != 1:
                raise NonIntegralCoefficient(f"coefficient {c} at {ops.basis[idx]}")
            if c:
                coeffs[b] = c
        if coeffs:
            terms[ops.basis[idx]] = MPoly(qt, coeffs)
    return QHClass(("complete", n), terms)


def apply_polynomial(ops: MonkOperators, poly: MPoly, vec: dict[int, dict]) -> dict[int, dict]:
    """Evaluate an element of Z[q][x] in the operators X_i, applied to vec."""
    n = ops.n
    memo: dict[tuple, dict[int, dict]] = {(0,) * n: vec}

    def power_vec(xexp: tuple) -> dict[int, dict]:
        if xexp in memo:
            return memo[xexp]
        i = max(idx for idx, e in enumerate(xexp) if e)
        prev = power_vec(xexp[:i] + (xexp[i] - 1,) + xexp[i + 1:])
        out = ops.apply_x(i + 1, prev)
        memo[xexp] = out
        return out

    total: dict[int, dict] = {}
    for e, c in poly.terms.items():
        if c.denominator != 1:
            raise NonIntegralCoefficient(str(c))
        ci = int(c)
        xexp, qexp = e[:n], e[n:]
        part = power_vec(xexp)
        for r, p in part.items():
            acc = total.setdefault(r, {})
            for b, v in p.items():
                key = tuple(x + y for x, y in zip(b, qexp)) if any(qexp) else b
                s = acc.get(key, 0) + ci * v
                if s:
                    acc[key] = s
                else:
                    del acc[key]
    return {r: p for r, p in total.items() if p}


@lru_cache(maxsize=512)
def class_product(u: Permutation, v: Permutation, n: int,
                  cache_dir: str | None = None) -> QHClass:
    """Quantum product sigma_u * sigma_v in QH*(Fl_n).

    The shorter factor's quantum Schubert polynomial is evaluated in the
    commuting operators X_i and applied to the other factor's basis vector.
    """
    if u.n != n or v.n != n:
        raise NotInGroup(f"{u}, {v} must lie in S_{n}")
    if u.length > v.length:
        u, v = v, u
    ops = monk_operators(n, cache_dir)
    vec = {ops.index[v]: {(0,) * (n - 1): 1}}
    out = apply_polynomial(ops, quantum_schubert(u, n), vec)
    result = _vec_to_class(out, ops)
    lu, lv = u.length, v.length
    for w, c in result.terms.items():
        for b in c.terms:
            if lu + lv != w.length + 2 * sum(b):
                raise AssertionError(f"grading violated at sigma_{w} q^{b} in {u}*{v}")
    return result


def omega_involution(p: MPoly, n: int) -> MPoly:
    """The involution x_k -> -x_{n+1-k}, q_k -> q_{n-k}."""
    if p.table != xq_table(n):
        raise ValueError("expected a polynomial over xq_table(n)")
    target = {}
    for k in range(1, n + 1):
        target[k - 1] = (n - k, Fraction(-1))
    for k in range(1, n):
        target[n + k - 1] = (n + (n - k) - 1, Fraction(1))
    return p.map_vars(target)


def normal_form(p: MPoly, n: int, _cap: int = 10_000) -> QHClass:
    """Image of p in Z[q,x]/I_n^q in the quantum Schubert basis (oracle path).

    Straightening is triangular in q-degree: classically decompose each
    lowest-q slice into Schubert polynomials plus multiples of the e_i^n,
    subtract the matching quantum Schubert polynomials and ideal generators,
    and repeat on the strictly-higher-q remainder.
    """
    if n > 5:
        raise SizeCap(f"normal_form oracle supports n <= 5, got {n}")
    tab = xq_table(n)
    if p.table != tab:
        raise ValueError("expected a polynomial over xq_table(n)")
    qt = q_table(n)
    acc: dict[Permutation, dict] = {}
    work = p
    steps = 0
    while not work.is_zero():
        steps += 1
        if steps > _cap:
            raise AssertionError("normal_form failed to terminate")
        beta = min(sum(e[n:]) for e in work.terms)
        slice_terms = {e: c for e, c in work.terms.items() if sum(e[n:]) == beta}
        sl = MPoly(tab, slice_terms)
        subtract = MPoly.zero(tab)
        for v, fv in schubert_symmetric_decompose(sl, n).items():
            for expo, qcoef in symmetric_to_e(fv, n).items():
                if not any(expo):
                    # constant-in-x part: a Schubert coefficient
                    dst = acc.setdefault(v, {})
                    for e, c in qcoef.terms.items():
                        key = e[n:]
                        s = dst.get(key, 0) + c
                        if s:
                            dst[key] = s
                        else:
                            del dst[key]
                    subtract = subtract + qcoef * quantum_schubert(v, n)
                else:
                    i0 = next(i for i, m in enumerate(expo) if m)
                    rest = MPoly.const(tab, 1)
                    for i, m in enumerate(expo):
                        mm = m - 1 if i == i0 else m
                        if mm:
                            rest = rest * _elementary(i + 1, n, n) ** mm
                    subtract = subtract + (qcoef * schubert_poly(v, n) * rest
                                           * quantum_E(i0 + 1, n, n))
        work = work - subtract
    terms: dict[Permutation, MPoly] = {}
    for v, poly in acc.items():
        coeffs = {}
        for b, c in poly.items():
            c = Fraction(c)
            if c == 0:
                continue
            if c.denominator != 1:
                raise NonIntegralCoefficient(f"normal_form coefficient {c} at {v}")
            coeffs[b] = c
        if coeffs:
            terms[v] = MPoly(qt, coeffs)
    return QHClass(("complete", n), terms)
