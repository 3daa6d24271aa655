"""Massey triple products through the secondary multiplication.

For classes with xy = yz = 0 the secondary multiplication collapses to
(-1)^{|x|} s(x) q(y,z) - q(x,y) s(z), the classical triple product; it
is well defined in H / (xH + Hz), and the coset is independent of the
section package.  Coset equality is always decided by a membership
solve against the indeterminacy generators, never by comparing
normal forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactlin import ExactMatrix, Subquotient, vec_is_zero, zero_vector
from .hochschild import theta_value
from .sections import CohomologySections


class NotAMasseyTripleError(Exception):
    def __init__(self, which, value):
        self.which = which
        self.value = value
        super().__init__(f"{which} is nonzero in cohomology: {list(value)}")


@dataclass
class MasseyResult:
    degrees: tuple                 # (|x|, |y|, |z|)
    target_degree: int             # |x| + |y| + |z| - 1
    representative: np.ndarray     # class coordinates in H^{target_degree}
    indeterminacy: Subquotient     # span of x H^{|y|+|z|-1} + H^{|x|+|y|-1} z

    def is_zero_coset(self) -> bool:
        if len(self.representative) == 0:
            return True
        return self.indeterminacy.is_member(self.representative)

    def same_coset(self, other_rep: np.ndarray) -> bool:
        if len(self.representative) == 0:
            return len(other_rep) == 0
        return self.indeterminacy.is_member(
            self.indeterminacy.ring.reduce_array(self.representative - other_rep))


def indeterminacy_submodule(co: CohomologySections, px: int, x, py: int, y,
                            pz: int, z) -> Subquotient:
    h = co.h()
    ring = h.ring
    n = px + py + pz - 1
    cols = []
    dy = py + pz - 1
    for b in range(h.rank(dy)):
        e = zero_vector(ring, h.rank(dy))
        e[b] = ring.one()
        cols.append(h.multiply(px, dy, x, e))
    dx = px + py - 1
    for b in range(h.rank(dx)):
        e = zero_vector(ring, h.rank(dx))
        e[b] = ring.one()
        cols.append(h.multiply(dx, pz, e, z))
    gens = ExactMatrix.from_columns(ring, cols, nrows=h.rank(n))
    return Subquotient.from_gens_rels(ring, gens)


def massey_triple(co: CohomologySections, px: int, x, py: int, y,
                  pz: int, z) -> MasseyResult:
    """<x, y, z> for a Massey triple (xy = yz = 0), with its indeterminacy."""
    h = co.h()
    xy = h.multiply(px, py, x, y)
    if not vec_is_zero(xy):
        raise NotAMasseyTripleError("x*y", xy)
    yz = h.multiply(py, pz, y, z)
    if not vec_is_zero(yz):
        raise NotAMasseyTripleError("y*z", yz)
    n = px + py + pz - 1
    chain = theta_value(co, px, x, py, y, pz, z)
    rep = co.pi(n, chain) if 0 <= n <= co.top else \
        zero_vector(co.ring, 0)
    return MasseyResult((px, py, pz), n, rep,
                        indeterminacy_submodule(co, px, x, py, y, pz, z))


def coset_stable(co1: CohomologySections, co2: CohomologySections,
                 px: int, x, py: int, y, pz: int, z) -> bool:
    """True when the two packages' triple products agree modulo indeterminacy."""
    r1 = massey_triple(co1, px, x, py, y, pz, z)
    r2 = massey_triple(co2, px, x, py, y, pz, z)
    return r1.same_coset(r2.representative)
