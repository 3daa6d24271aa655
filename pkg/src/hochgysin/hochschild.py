"""Graded Hochschild cochains on a cohomology ring and the secondary
multiplication 3-cocycle.

Coefficients live in the shifted twisted bimodule: the left action
carries the sign (-1)^{|x|}, the right action is ordinary, and internal
degrees are tracked as maps into H (so the secondary multiplication has
internal degree -1); the shift enters only through that bookkeeping.

A cochain of arity l and internal degree t is stored blockwise: for each
degree tuple (p_1, ..., p_l) a matrix H^{p_1} (x) ... (x) H^{p_l} ->
H^{p_1 + ... + p_l + t}, source indices flattened row-major.  Only
tuples whose source and target ranks are all nonzero can carry blocks.

The triviality and class-equality solvers assemble the coboundary as an
exact matrix (columns are coboundaries of elementary cochains, so the
solver and the direct evaluator cannot drift apart) and hand the system
to the exact linear solver; infeasibility comes back as a checkable
certificate.  When H^0 is spanned by the unit and the cocycle vanishes
on unit slots, the solve is restricted to all-positive degree tuples: a
solution there extends by zero to a full solution, and the extension is
re-verified against every block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as iproduct
from pathlib import Path

import numpy as np

from .exactlin import (
    ExactMatrix, Ring, as_vector, kron, ring_from_name, solve_with_certificate,
    vec_is_zero, zero_vector,
)
from .sections import CohomologySections, HRing, NotACocycleError


@dataclass
class TwistedBimodule:
    """H with left action x * m = (-1)^{|x|} x m, right action ordinary,
    degrees shifted up by one."""

    base: HRing
    shift: int = 1


@dataclass
class HochschildCochain:
    arity: int
    internal_degree: int
    h_ranks: list
    ring: Ring
    blocks: dict          # degree tuple -> ExactMatrix (h_target x prod h_sources)

    def rank(self, n: int) -> int:
        return self.h_ranks[n] if 0 <= n < len(self.h_ranks) else 0

    def shape(self, tup) -> tuple:
        rows = self.rank(sum(tup) + self.internal_degree)
        cols = 1
        for p in tup:
            cols *= self.rank(p)
        return rows, cols

    def block(self, tup) -> ExactMatrix | None:
        return self.blocks.get(tuple(tup))

    def block_or_zero(self, tup) -> ExactMatrix:
        b = self.blocks.get(tuple(tup))
        if b is None:
            rows, cols = self.shape(tup)
            return ExactMatrix.zeros(self.ring, rows, cols)
        return b

    def set_block(self, tup, m: ExactMatrix) -> None:
        if m.is_zero():
            self.blocks.pop(tuple(tup), None)
        else:
            self.blocks[tuple(tup)] = m

    def value(self, degs, vectors) -> np.ndarray:
        """Evaluate on homogeneous classes; returns target class coordinates."""
        b = self.block_or_zero(degs)
        if not vectors:
            return b.matvec(as_vector(self.ring, [1]))
        col = vectors[0]
        for v in vectors[1:]:
            col = np.outer(col, v).reshape(len(col) * len(v))
        return b.matvec(col)

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def __add__(self, other: "HochschildCochain") -> "HochschildCochain":
        out = HochschildCochain(self.arity, self.internal_degree,
                                list(self.h_ranks), self.ring, {})
        for tup in set(self.blocks) | set(other.blocks):
            out.set_block(tup, self.block_or_zero(tup) + other.block_or_zero(tup))
        return out

    def __sub__(self, other: "HochschildCochain") -> "HochschildCochain":
        out = HochschildCochain(self.arity, self.internal_degree,
                                list(self.h_ranks), self.ring, {})
        for tup in set(self.blocks) | set(other.blocks):
            out.set_block(tup, self.block_or_zero(tup) - other.block_or_zero(tup))
        return out

    def __eq__(self, other):
        if not isinstance(other, HochschildCochain):
            return NotImplemented
        if (self.arity, self.internal_degree) != (other.arity, other.internal_degree):
            return False
        return all(self.block_or_zero(t) == other.block_or_zero(t)
                   for t in set(self.blocks) | set(other.blocks))


def zero_cochain(h: HRing, arity: int, internal_degree: int) -> HochschildCochain:
    return HochschildCochain(arity, internal_degree, list(h.ranks), h.ring, {})


def admissible_tuples(h: HRing, arity: int, internal_degree: int,
                      positive_only: bool = False):
    """Degree tuples that can carry a nonzero block, in lexicographic order."""
    lo = 1 if positive_only else 0
    out = []
    for tup in iproduct(range(lo, h.top + 1), repeat=arity):
        target = sum(tup) + internal_degree
        if not 0 <= target <= h.top or h.rank(target) == 0:
            continue
        if any(h.rank(p) == 0 for p in tup):
            continue
        out.append(tup)
    return out


# ---------------------------------------------------------------------------
# The Hochschild coboundary
# ---------------------------------------------------------------------------

def _kron_chain(ring: Ring, mats) -> ExactMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def coboundary(a: HochschildCochain, M: TwistedBimodule) -> HochschildCochain:
    """delta a: arity l+1, same internal degree; first term twisted by (-1)^{|x1|}."""
    h = M.base
    ring = h.ring
    l, t = a.arity, a.internal_degree
    out = zero_cochain(h, l + 1, t)
    for tup in admissible_tuples(h, l + 1, t):
        rows, cols = out.shape(tup)
        acc = ExactMatrix.zeros(ring, rows, cols)
        touched = False
        # x1 * a(x2, ..., x_{l+1}), twisted left action
        src = tup[1:]
        A = a.block(src)
        if A is not None:
            ta = sum(src) + t
            m0 = h.mult_block(tup[0], ta) @ kron(ExactMatrix.identity(ring, h.rank(tup[0])), A)
            acc = acc + m0.scale((-1) ** tup[0])
            touched = True
        # (-1)^i a(..., x_i x_{i+1}, ...)
        for i in range(l):
            merged = tup[:i] + (tup[i] + tup[i + 1],) + tup[i + 2:]
            A = a.block(merged)
            if A is None:
                continue
            mats = [ExactMatrix.identity(ring, h.rank(p)) for p in tup[:i]]
            mats.append(h.mult_block(tup[i], tup[i + 1]))
            mats.extend(ExactMatrix.identity(ring, h.rank(p)) for p in tup[i + 2:])
            acc = acc + (A @ _kron_chain(ring, mats)).scale((-1) ** (i + 1))
            touched = True
        # (-1)^{l+1} a(x_1, ..., x_l) x_{l+1}, ordinary right action
        src = tup[:l]
        A = a.block(src)
        if A is not None:
            ta = sum(src) + t
            ml = h.mult_block(ta, tup[l]) @ kron(A, ExactMatrix.identity(ring, h.rank(tup[l])))
            acc = acc + ml.scale((-1) ** (l + 1))
            touched = True
        if touched:
            out.set_block(tup, acc)
    return out


def verify_cocycle(a: HochschildCochain, M: TwistedBimodule) -> bool:
    return coboundary(a, M).is_zero()


# ---------------------------------------------------------------------------
# Secondary multiplication
# ---------------------------------------------------------------------------

def theta_value(co: CohomologySections, px, x, py, y, pz, z) -> np.ndarray:
    """Chain-level Theta(x, y, z) for single classes; a cochain in C^{sum-1}.

    Theta = (-1)^{|x|} s(x) q(y,z) - q(xy, z) + q(x, yz) - q(x,y) s(z).
    """
    a = co.algebra
    h = co.h()
    ring = co.ring
    n = px + py + pz - 1
    out = zero_vector(ring, a.rank(n))
    sign = ring.normalize((-1) ** px)
    out = out + sign * a.multiply(px, py + pz - 1, co.s_apply(px, x),
                                  co.q_pair(py, y, pz, z))
    out = out - co.q_pair(px + py, h.multiply(px, py, x, y), pz, z)
    out = out + co.q_pair(px, x, py + pz, h.multiply(py, pz, y, z))
    out = out - a.multiply(px + py - 1, pz, co.q_pair(px, x, py, y),
                           co.s_apply(pz, z))
    return ring.reduce_array(out)


def theta_chain_block(co: CohomologySections, p: int, q: int, r: int) -> ExactMatrix:
    """Matrix of Theta on basis triples of (H^p, H^q, H^r): C^{p+q+r-1} x h_p h_q h_r."""
    a = co.algebra
    h = co.h()
    ring = co.ring
    hp, hq, hr = co.hr(p), co.hr(q), co.hr(r)
    rows = a.rank(p + q + r - 1)
    block = ExactMatrix.zeros(ring, rows, hp * hq * hr)
    if rows == 0 or hp * hq * hr == 0:
        return block
    ident = lambda n: ExactMatrix.identity(ring, n)
    term1 = a.bilinear_block(p, q + r - 1, co.s_matrix(p), co.qpair_block(q, r))
    block = block + term1.scale((-1) ** p)
    block = block - co.qpair_block(p + q, r) @ kron(h.mult_block(p, q), ident(hr))
    block = block + co.qpair_block(p, q + r) @ kron(ident(hp), h.mult_block(q, r))
    term4 = a.bilinear_block(p + q - 1, r, co.qpair_block(p, q), co.s_matrix(r))
    block = block - term4
    return block


def theta(co: CohomologySections) -> HochschildCochain:
    """The secondary-multiplication 3-cocycle of the sections package."""
    h = co.h()
    out = zero_cochain(h, 3, -1)
    a = co.algebra
    for tup in admissible_tuples(h, 3, -1):
        p, q, r = tup
        chain = theta_chain_block(co, p, q, r)
        n = p + q + r - 1
        if not (a.d(n) @ chain).is_zero():
            raise NotACocycleError(
                f"Theta block {tup} failed the chain-level cocycle check")
        out.set_block(tup, co.pi_matrix(n) @ chain)
    return out


# ---------------------------------------------------------------------------
# Linear systems in cochain space
# ---------------------------------------------------------------------------

@dataclass
class CochainLayout:
    """Flat coordinates on the space of block cochains with fixed arity/degree."""

    h: HRing
    arity: int
    internal_degree: int
    tuples: list
    offsets: dict
    total: int

    @staticmethod
    def build(h: HRing, arity: int, internal_degree: int,
              positive_only: bool = False) -> "CochainLayout":
        tuples = admissible_tuples(h, arity, internal_degree, positive_only)
        offsets, total = {}, 0
        for tup in tuples:
            rows = h.rank(sum(tup) + internal_degree)
            cols = 1
            for p in tup:
                cols *= h.rank(p)
            offsets[tup] = (total, rows, cols)
            total += rows * cols
        return CochainLayout(h, arity, internal_degree, tuples, offsets, total)

    def pack(self, a: HochschildCochain) -> np.ndarray:
        v = zero_vector(self.h.ring, self.total)
        for tup in self.tuples:
            off, rows, cols = self.offsets[tup]
            b = a.block(tup)
            if b is not None:
                v[off:off + rows * cols] = b.data.reshape(rows * cols)
        return v

    def unpack(self, v: np.ndarray) -> HochschildCochain:
        out = zero_cochain(self.h, self.arity, self.internal_degree)
        for tup in self.tuples:
            off, rows, cols = self.offsets[tup]
            m = ExactMatrix(self.h.ring, v[off:off + rows * cols].reshape(rows, cols).copy())
            out.set_block(tup, m)
        return out

    def basis_cochain(self, flat_index: int) -> HochschildCochain:
        for tup in self.tuples:
            off, rows, cols = self.offsets[tup]
            if off <= flat_index < off + rows * cols:
                m = ExactMatrix.zeros(self.h.ring, rows, cols)
                local = flat_index - off
                m.data[local // cols, local % cols] = self.h.ring.one()
                out = zero_cochain(self.h, self.arity, self.internal_degree)
                out.set_block(tup, m)
                return out
        raise IndexError(flat_index)


def coboundary_matrix(M: TwistedBimodule, arity: int, internal_degree: int,
                      positive_only: bool = False):
    """(matrix of delta, source layout, target layout) in flat coordinates.

    Columns are coboundaries of elementary cochains, so this matrix agrees
    with coboundary() by construction.
    """
    h = M.base
    src = CochainLayout.build(h, arity, internal_degree, positive_only)
    dst = CochainLayout.build(h, arity + 1, internal_degree, positive_only)
    mat = ExactMatrix.zeros(h.ring, dst.total, src.total)
    for j in range(src.total):
        db = coboundary(src.basis_cochain(j), M)
        mat.data[:, j] = dst.pack(db)
    return mat, src, dst


def _vanishes_on_unit_slots(a: HochschildCochain, h: HRing) -> bool:
    return all(a.block_or_zero(t).is_zero()
               for t in admissible_tuples(h, a.arity, a.internal_degree)
               if 0 in t)


def _solve_delta(target: HochschildCochain, M: TwistedBimodule):
    """Find a with delta a = target (arity of a = target.arity - 1)."""
    h = M.base
    arity = target.arity - 1
    t = target.internal_degree
    restricted = h.rank(0) == 1 and _vanishes_on_unit_slots(target, h)
    mat, src, dst = coboundary_matrix(M, arity, t, positive_only=restricted)
    rhs = dst.pack(target)
    x, cert = solve_with_certificate(mat, rhs)
    if x is None and restricted:
        # no normalized witness; settle it on the full complex
        mat, src, dst = coboundary_matrix(M, arity, t, positive_only=False)
        x, cert = solve_with_certificate(mat, dst.pack(target))
    if x is None:
        return None, cert
    witness = src.unpack(x)
    if coboundary(witness, M) != target:
        raise AssertionError("solver produced an invalid witness")
    return witness, None


def trivialize(theta_cochain: HochschildCochain, M: TwistedBimodule):
    """Witness a (arity 2, internal degree -1) with delta a = theta, or
    (None, certificate) when the class is nontrivial over the ring."""
    if theta_cochain.arity != 3:
        raise ValueError("trivialize expects an arity-3 cochain")
    if not verify_cocycle(theta_cochain, M):
        raise NotACocycleError("input cochain is not a Hochschild cocycle")
    return _solve_delta(theta_cochain, M)


def classes_equal(t1: HochschildCochain, t2: HochschildCochain, M: TwistedBimodule):
    """Witness a with delta a = t1 - t2, or (None, certificate)."""
    if (t1.arity, t1.internal_degree) != (t2.arity, t2.internal_degree):
        raise ValueError("cochain shape mismatch")
    diff = t1 - t2
    if not verify_cocycle(diff, M):
        raise NotACocycleError("difference is not a cocycle")
    return _solve_delta(diff, M)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def cochain_to_json(a: HochschildCochain) -> dict:
    return {
        "ring": a.ring.to_json(),
        "arity": a.arity,
        "internal_degree": a.internal_degree,
        "h_ranks": list(a.h_ranks),
        "blocks": {",".join(map(str, tup)): m.to_lists()
                   for tup, m in sorted(a.blocks.items())},
    }


def cochain_from_json(payload: dict) -> HochschildCochain:
    ring = ring_from_name(payload["ring"])
    out = HochschildCochain(int(payload["arity"]), int(payload["internal_degree"]),
                            [int(r) for r in payload["h_ranks"]], ring, {})
    for key, rows in payload["blocks"].items():
        tup = tuple(int(x) for x in key.split(","))
        out.set_block(tup, ExactMatrix.from_lists(ring, rows, shape=out.shape(tup)))
    return out


def save_cochain(a: HochschildCochain, path) -> None:
    Path(path).write_text(json.dumps(cochain_to_json(a), sort_keys=True),
                          encoding="utf-8")


def load_cochain(path) -> HochschildCochain:
    return cochain_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
