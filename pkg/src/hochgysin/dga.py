"""Finite dg-algebras: data model, axiom validation, simplicial cochains.

A DgAlgebra is a graded module with per-degree bases, differential
matrices and a sparse multiplication tensor.  The only constructor of
mathematical interest is ``cochain_algebra``: simplicial cochains with
the coboundary (d phi)(sigma) = sum_i (-1)^i phi(face_i sigma) and the
front-face/back-face cup product, which is strictly associative.

Multiplication tensors are kept sparse as (i, j, k, coeff) entries per
degree block; validation walks those entries instead of materializing
dense triple products, which keeps the axiom suite fast on the torus
fixtures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exactlin import ExactMatrix, Ring, as_vector, ring_from_name, zero_vector
from .simplicial import SimplicialComplex


class DgaFormatError(Exception):
    pass


class DgaValidationError(Exception):
    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(f"{c.name}: {c.witness}" for c in report.failures()))


@dataclass
class Check:
    name: str
    passed: bool
    witness: str | None = None


@dataclass
class ValidationReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness}
                           for c in self.checks]}


@dataclass
class DgAlgebra:
    ring: Ring
    top_degree: int
    ranks: list                      # rank of C^n for 0 <= n <= top_degree
    diff: dict                       # n -> ExactMatrix C^n -> C^{n+1}
    product: dict                    # (p, q) -> tuple of (i, j, k, coeff)
    unit: np.ndarray                 # coordinates of 1 in C^0
    labels: dict = field(default_factory=dict, compare=False)  # n -> basis names

    def rank(self, n: int) -> int:
        return self.ranks[n] if 0 <= n <= self.top_degree else 0

    def d(self, n: int) -> ExactMatrix:
        if n in self.diff:
            return self.diff[n]
        return ExactMatrix.zeros(self.ring, self.rank(n + 1), self.rank(n))

    def entries(self, p: int, q: int):
        return self.product.get((p, q), ())

    def multiply(self, p: int, q: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Product C^p x C^q -> C^{p+q} of coordinate vectors."""
        ring = self.ring
        out = zero_vector(ring, self.rank(p + q))
        for i, j, k, c in self.entries(p, q):
            if u[i] != 0 and v[j] != 0:
                out[k] = ring.normalize(out[k] + c * u[i] * v[j])
        return out

    def bilinear_block(self, p: int, q: int, left: ExactMatrix,
                       right: ExactMatrix) -> ExactMatrix:
        """Matrix of (a, b) -> left_a * right_b, columns flattened row-major.

        left: C^p x A, right: C^q x B; result: C^{p+q} x (A*B).
        """
        ring = self.ring
        a, b = left.cols, right.cols
        out = np.empty((self.rank(p + q), a * b), dtype=object)
        out[:] = ring.zero()
        for i, j, k, c in self.entries(p, q):
            li = left.data[i]
            rj = right.data[j]
            out[k] += c * np.outer(li, rj).reshape(a * b)
        return ExactMatrix(ring, ring.reduce_array(out))

    def __eq__(self, other):
        return (isinstance(other, DgAlgebra) and self.ring == other.ring
                and self.top_degree == other.top_degree and self.ranks == other.ranks
                and all(self.d(n) == other.d(n) for n in range(self.top_degree + 1))
                and self._norm_product() == other._norm_product()
                and list(self.unit) == list(other.unit))

    def _norm_product(self):
        return {pq: sorted((i, j, k, self.ring.scalar_to_json(c)) for i, j, k, c in ent
                           if c != 0)
                for pq, ent in self.product.items()
                if any(c != 0 for _, _, _, c in ent)}


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _sparse_cols(m: ExactMatrix):
    """column j -> list of (row, coeff) for the nonzero entries."""
    cols = [[] for _ in range(m.cols)]
    for i, j in zip(*np.nonzero(m.data)):
        cols[j].append((int(i), m.data[i, j]))
    return cols


def _check_d_squared(a: DgAlgebra, checks):
    for n in range(a.top_degree + 1):
        dn = _sparse_cols(a.d(n))
        dn1 = _sparse_cols(a.d(n + 1))
        for j, col in enumerate(dn):
            acc = {}
            for i, c in col:
                for i2, c2 in dn1[i]:
                    acc[i2] = acc.get(i2, a.ring.zero()) + c * c2
            bad = [k for k, v in acc.items() if a.ring.normalize(v) != 0]
            if bad:
                checks.append(Check("d_squared", False,
                                    f"d(d(e_{j}^{n})) has entry at {bad[0]}"))
                return
    checks.append(Check("d_squared", True))


def _prod_maps(a: DgAlgebra, p, q):
    m = {}
    for i, j, k, c in a.entries(p, q):
        m.setdefault((i, j), []).append((k, c))
    return m


def _check_leibniz(a: DgAlgebra, checks):
    ring = a.ring
    for (p, q), ent in sorted(a.product.items()):
        dpq = _sparse_cols(a.d(p + q))
        dp = _sparse_cols(a.d(p))
        dq = _sparse_cols(a.d(q))
        t_up = _prod_maps(a, p + 1, q)
        t_right = _prod_maps(a, p, q + 1)
        lhs = {}
        for i, j, k, c in ent:
            for m, c2 in dpq[k]:
                key = (i, j, m)
                lhs[key] = lhs.get(key, ring.zero()) + c * c2
        rhs = {}
        sign = ring.normalize((-1) ** p)
        for i in range(a.rank(p)):
            for i2, c in dp[i]:
                for j in range(a.rank(q)):
                    for m, c2 in t_up.get((i2, j), ()):
                        key = (i, j, m)
                        rhs[key] = rhs.get(key, ring.zero()) + c * c2
        for j in range(a.rank(q)):
            for j2, c in dq[j]:
                for i in range(a.rank(p)):
                    for m, c2 in t_right.get((i, j2), ()):
                        key = (i, j, m)
                        rhs[key] = rhs.get(key, ring.zero()) + sign * c * c2
        keys = set(lhs) | set(rhs)
        for key in keys:
            l = ring.normalize(lhs.get(key, ring.zero()))
            r = ring.normalize(rhs.get(key, ring.zero()))
            if l != r:
                checks.append(Check("leibniz", False,
                                    f"(p,q)=({p},{q}) basis pair {key[:2]}"))
                return
    checks.append(Check("leibniz", True))


def _check_associativity(a: DgAlgebra, checks):
    ring = a.ring
    degs = range(a.top_degree + 1)
    for p in degs:
        for q in degs:
            for r in degs:
                if p + q + r > a.top_degree:
                    continue
                left = {}
                idx = {}
                for i, j, k, c in a.entries(p, q):
                    idx.setdefault(k, []).append((i, j, c))
                for k, l, m, c2 in a.entries(p + q, r):
                    for i, j, c1 in idx.get(k, ()):
                        key = (i, j, l, m)
                        left[key] = left.get(key, ring.zero()) + c1 * c2
                right = {}
                idx2 = {}
                for j, l, k, c in a.entries(q, r):
                    idx2.setdefault(k, []).append((j, l, c))
                for i, k, m, c2 in a.entries(p, q + r):
                    for j, l, c1 in idx2.get(k, ()):
                        key = (i, j, l, m)
                        right[key] = right.get(key, ring.zero()) + c1 * c2
                for key in set(left) | set(right):
                    lv = ring.normalize(left.get(key, ring.zero()))
                    rv = ring.normalize(right.get(key, ring.zero()))
                    if lv != rv:
                        checks.append(Check(
                            "associativity", False,
                            f"degrees ({p},{q},{r}) basis triple {key[:3]}"))
                        return
    checks.append(Check("associativity", True))


def _check_unit(a: DgAlgebra, checks):
    ring = a.ring
    if a.rank(0) == 0:
        checks.append(Check("unit", False, "C^0 = 0 cannot contain a unit"))
        return
    du = a.d(0).matvec(a.unit)
    if any(x != 0 for x in du):
        checks.append(Check("unit", False, "d(1) != 0"))
        return
    for p in range(a.top_degree + 1):
        n = a.rank(p)
        left = {}
        for u, i, k, c in a.entries(0, p):
            if a.unit[u] != 0:
                left[(i, k)] = left.get((i, k), ring.zero()) + a.unit[u] * c
        right = {}
        for i, u, k, c in a.entries(p, 0):
            if a.unit[u] != 0:
                right[(i, k)] = right.get((i, k), ring.zero()) + a.unit[u] * c
        for i in range(n):
            for k in range(n):
                want = ring.one() if i == k else ring.zero()
                if ring.normalize(left.get((i, k), ring.zero())) != want:
                    checks.append(Check("unit", False, f"1 * e_{i}^{p} != e_{i}^{p}"))
                    return
                if ring.normalize(right.get((i, k), ring.zero())) != want:
                    checks.append(Check("unit", False, f"e_{i}^{p} * 1 != e_{i}^{p}"))
                    return
    checks.append(Check("unit", True))


def _check_shapes(a: DgAlgebra, checks):
    ok, witness = True, None
    if len(a.ranks) != a.top_degree + 1 or any(r < 0 for r in a.ranks):
        ok, witness = False, "ranks list does not match top_degree"
    for n in range(a.top_degree + 1):
        d = a.d(n)
        if d.rows != a.rank(n + 1) or d.cols != a.rank(n):
            ok, witness = False, f"diff[{n}] has shape {d.rows}x{d.cols}"
    for (p, q), ent in a.product.items():
        if p < 0 or q < 0 or p + q > a.top_degree:
            if any(c != 0 for _, _, _, c in ent):
                ok, witness = False, f"product block ({p},{q}) outside degree range"
            continue
        for i, j, k, c in ent:
            if not (0 <= i < a.rank(p) and 0 <= j < a.rank(q) and 0 <= k < a.rank(p + q)):
                ok, witness = False, f"product entry ({p},{q},{i},{j},{k}) out of range"
    if len(a.unit) != a.rank(0):
        ok, witness = False, "unit vector has wrong length"
    checks.append(Check("shapes", ok, witness))


def validate(a: DgAlgebra) -> ValidationReport:
    """Check every dg-algebra axiom; failures carry a witness."""
    checks = []
    _check_shapes(a, checks)
    if not checks[-1].passed:
        return ValidationReport(checks)
    _check_d_squared(a, checks)
    _check_leibniz(a, checks)
    _check_associativity(a, checks)
    _check_unit(a, checks)
    return ValidationReport(checks)


# ---------------------------------------------------------------------------
# Simplicial cochain algebras
# ---------------------------------------------------------------------------

def cochain_algebra(k: SimplicialComplex, ring: Ring) -> DgAlgebra:
    """Simplicial cochains of k with the front/back-face cup product.

    Basis of C^n: duals of the n-simplices in lexicographic order.
    """
    simplices = k.simplices()
    top = len(simplices) - 1
    if top < 0:
        raise ValueError("empty complex has no cochain algebra")
    index = [{s: i for i, s in enumerate(level)} for level in simplices]
    ranks = [len(level) for level in simplices]

    diff = {}
    for n in range(top):
        m = ExactMatrix.zeros(ring, ranks[n + 1], ranks[n])
        for row, s in enumerate(simplices[n + 1]):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                col = index[n][face]
                m.data[row, col] = ring.normalize(m.data[row, col] + (-1) ** i)
        diff[n] = m

    product = {}
    one = ring.one()
    for n, level in enumerate(simplices):
        for kidx, s in enumerate(level):
            for p in range(n + 1):
                q = n - p
                front = s[:p + 1]
                back = s[p:]
                product.setdefault((p, q), []).append(
                    (index[p][front], index[q][back], kidx, one))
    product = {pq: tuple(ent) for pq, ent in product.items()}

    unit = as_vector(ring, [1] * ranks[0])
    labels = {n: [list(s) for s in level] for n, level in enumerate(simplices)}
    return DgAlgebra(ring, top, ranks, diff, product, unit, labels)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def dga_to_json(a: DgAlgebra) -> dict:
    return {
        "ring": a.ring.to_json(),
        "top_degree": a.top_degree,
        "ranks": list(a.ranks),
        "diff": {str(n): a.d(n).to_lists() for n in range(a.top_degree)
                 if a.rank(n) and a.rank(n + 1)},
        "product": {f"{p},{q}": [[i, j, k, a.ring.scalar_to_json(c)]
                                 for i, j, k, c in ent if c != 0]
                    for (p, q), ent in sorted(a.product.items())},
        "unit": [a.ring.scalar_to_json(x) for x in a.unit],
    }


def dga_from_json(payload: dict) -> DgAlgebra:
    try:
        ring = ring_from_name(payload["ring"])
        top = int(payload["top_degree"])
        ranks = [int(r) for r in payload["ranks"]]
        diff = {}
        for key, rows in payload.get("diff", {}).items():
            n = int(key)
            shape = (ranks[n + 1] if n + 1 <= top else 0, ranks[n])
            diff[n] = ExactMatrix.from_lists(ring, rows, shape=shape)
        product = {}
        for key, ent in payload.get("product", {}).items():
            p, q = (int(x) for x in key.split(","))
            product[(p, q)] = tuple((int(i), int(j), int(k), ring.scalar_from_json(c))
                                    for i, j, k, c in ent)
        unit = as_vector(ring, [ring.scalar_from_json(x) for x in payload["unit"]])
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise DgaFormatError(f"malformed dg-algebra file: {exc}") from exc
    return DgAlgebra(ring, top, ranks, diff, product, unit)


def save_dga(a: DgAlgebra, path) -> None:
    Path(path).write_text(json.dumps(dga_to_json(a), sort_keys=True), encoding="utf-8")


def load_dga(path) -> DgAlgebra:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DgaFormatError(f"cannot read dg-algebra: {exc}") from exc
    a = dga_from_json(payload)
    report = validate(a)
    if not report.passed:
        raise DgaValidationError(report)
    return a


# ---------------------------------------------------------------------------
# dg-modules (used by the mapping cone)
# ---------------------------------------------------------------------------

@dataclass
class DgModule:
    """Right dg-module over a DgAlgebra, graded over a contiguous degree range."""

    algebra: DgAlgebra
    degrees: list                    # ascending, contiguous
    ranks: dict                      # degree -> rank
    diff: dict                       # degree -> ExactMatrix M^n -> M^{n+1}
    action: dict                     # (n, q) -> tuple of (i, j, k, coeff)

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d(self, n: int) -> ExactMatrix:
        if n in self.diff:
            return self.diff[n]
        return ExactMatrix.zeros(self.algebra.ring, self.rank(n + 1), self.rank(n))

    def entries(self, n: int, q: int):
        return self.action.get((n, q), ())

    def act(self, n: int, q: int, m: np.ndarray, x: np.ndarray) -> np.ndarray:
        ring = self.algebra.ring
        out = zero_vector(ring, self.rank(n + q))
        for i, j, k, c in self.entries(n, q):
            if m[i] != 0 and x[j] != 0:
                out[k] = ring.normalize(out[k] + c * m[i] * x[j])
        return out


def validate_module(m: DgModule) -> ValidationReport:
    """Module Leibniz, action associativity and unit action for a DgModule.

    All checks walk the sparse action tensors, mirroring validate().
    """
    ring = m.algebra.ring
    a = m.algebra
    checks = []
    # D^2 = 0
    ok, witness = True, None
    for n in m.degrees:
        comp = m.d(n + 1) @ m.d(n)
        if not comp.is_zero():
            ok, witness = False, f"D^2 != 0 at degree {n}"
            break
    checks.append(Check("module_d_squared", ok, witness))
    # Leibniz: D(m x) = D(m) x + (-1)^{|m|} m d(x), as sparse tensor identity
    ok, witness = True, None
    for (n, q), ent in sorted(m.action.items()):
        dnq = _sparse_cols(m.d(n + q))
        dn = _sparse_cols(m.d(n))
        dq = _sparse_cols(a.d(q))
        up = {}
        for i, j, k, c in m.entries(n + 1, q):
            up.setdefault((i, j), []).append((k, c))
        right = {}
        for i, j, k, c in m.entries(n, q + 1):
            right.setdefault((i, j), []).append((k, c))
        lhs = {}
        for i, j, k, c in ent:
            for t, c2 in dnq[k]:
                key = (i, j, t)
                lhs[key] = lhs.get(key, ring.zero()) + c * c2
        rhs = {}
        for i in range(m.rank(n)):
            for i2, c in dn[i]:
                for j in range(a.rank(q)):
                    for t, c2 in up.get((i2, j), ()):
                        key = (i, j, t)
                        rhs[key] = rhs.get(key, ring.zero()) + c * c2
        sign = ring.normalize((-1) ** n)
        for j in range(a.rank(q)):
            for j2, c in dq[j]:
                for i in range(m.rank(n)):
                    for t, c2 in right.get((i, j2), ()):
                        key = (i, j, t)
                        rhs[key] = rhs.get(key, ring.zero()) + sign * c * c2
        for key in set(lhs) | set(rhs):
            if ring.normalize(lhs.get(key, ring.zero())) != \
                    ring.normalize(rhs.get(key, ring.zero())):
                ok, witness = False, f"module Leibniz fails at ({n},{q}) pair {key[:2]}"
                break
        if not ok:
            break
    checks.append(Check("module_leibniz", ok, witness))
    # associativity: (m x) y = m (x y), sparse joins on the middle index
    ok, witness = True, None
    for (n, p) in sorted(m.action):
        if not ok:
            break
        for q in range(a.top_degree - p + 1):
            left = {}
            idx = {}
            for i, j, k, c in m.entries(n, p):
                idx.setdefault(k, []).append((i, j, c))
            for k, l, t, c2 in m.entries(n + p, q):
                for i, j, c1 in idx.get(k, ()):
                    key = (i, j, l, t)
                    left[key] = left.get(key, ring.zero()) + c1 * c2
            rightd = {}
            idx2 = {}
            for j, l, k, c in a.entries(p, q):
                idx2.setdefault(k, []).append((j, l, c))
            for i, k, t, c2 in m.entries(n, p + q):
                for j, l, c1 in idx2.get(k, ()):
                    key = (i, j, l, t)
                    rightd[key] = rightd.get(key, ring.zero()) + c1 * c2
            for key in set(left) | set(rightd):
                if ring.normalize(left.get(key, ring.zero())) != \
                        ring.normalize(rightd.get(key, ring.zero())):
                    ok, witness = False, f"action associativity fails at ({n},{p},{q})"
                    break
            if not ok:
                break
    checks.append(Check("module_associativity", ok, witness))
    # unit acts as identity
    ok, witness = True, None
    for n in m.degrees:
        acc = {}
        for i, u, k, c in m.entries(n, 0):
            if a.unit[u] != 0:
                acc[(i, k)] = acc.get((i, k), ring.zero()) + a.unit[u] * c
        for i in range(m.rank(n)):
            for k in range(m.rank(n)):
                want = ring.one() if i == k else ring.zero()
                if ring.normalize(acc.get((i, k), ring.zero())) != want:
                    ok, witness = False, f"unit action fails at degree {n} basis {i}"
                    break
            if not ok:
                break
        if not ok:
            break
    checks.append(Check("module_unit", ok, witness))
    return ValidationReport(checks)
