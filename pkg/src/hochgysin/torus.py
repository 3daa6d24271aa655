"""Exterior algebras, symmetrization, and the end-to-end torus runs.

The cohomology of the n-torus is exterior on n degree-1 generators; this
module builds that algebra directly (zero differential, wedge product
with shuffle signs), matches it against the torus cochain model, and
provides the two desk-scale probes: symmetrizing the secondary
multiplication into Hom(S^3 V, Lambda^2 V), and solving for an integral
trivialization of the full cocycle on the simplicial torus.

Symmetrization sums over S_3 without signs by default; a signed variant
is available behind a flag.  Neither is asserted to be canonical: the
monomorphism probe reports what each variant does, including whether it
descends to cohomology classes at all.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement, permutations

from .dga import DgAlgebra, cochain_algebra
from .exactlin import (
    ExactMatrix, Ring, Subquotient, ZZ, as_vector, kernel_basis,
    smith_normal_form, zero_vector,
)
from .hochschild import (
    CochainLayout, HochschildCochain, TwistedBimodule, coboundary_matrix,
    theta, trivialize,
)
from .sections import CohomologySections, HRing, build_sections
from .simplicial import build_torus


def _subsets(n: int, k: int) -> list[tuple]:
    return list(combinations(range(n), k))


def _wedge(s: tuple, t: tuple):
    """(sign, union) for e_s ^ e_t, or None when the factors overlap."""
    if set(s) & set(t):
        return None
    inversions = sum(1 for a in s for b in t if a > b)
    merged = tuple(sorted(s + t))
    return (-1) ** inversions, merged


def exterior_algebra(n: int, ring: Ring = ZZ) -> DgAlgebra:
    """Lambda^*(Z^n) as a dg-algebra with zero differential.

    Degree-k basis: k-element index subsets in lexicographic order.
    """
    if n < 1:
        raise ValueError("exterior algebra wants rank >= 1")
    ranks = []
    index = []
    for k in range(n + 1):
        subs = _subsets(n, k)
        index.append({s: i for i, s in enumerate(subs)})
        ranks.append(len(subs))
    product = {}
    for p in range(n + 1):
        for q in range(n + 1 - p):
            entries = []
            for s, i in index[p].items():
                for t, j in index[q].items():
                    w = _wedge(s, t)
                    if w is not None:
                        sign, merged = w
                        entries.append((i, j, index[p + q][merged],
                                        ring.normalize(sign)))
            if entries:
                product[(p, q)] = tuple(entries)
    unit = as_vector(ring, [1])
    labels = {k: [list(s) for s in _subsets(n, k)] for k in range(n + 1)}
    return DgAlgebra(ring, n, ranks, {}, product, unit, labels)


def exterior_iso(co: CohomologySections):
    """Per-degree isomorphism Lambda^*(H^1) -> H^* through cup products.

    Returns the list of matrices (columns = products of the chosen H^1
    basis classes, indexed by sorted subsets) after verifying that the
    map is a ring isomorphism; raises ValueError when the cohomology is
    not exterior on its degree-1 part.
    """
    h = co.h()
    n = h.rank(1)
    ring = h.ring
    basis1 = [as_vector(ring, [1 if i == j else 0 for j in range(n)])
              for i in range(n)]

    def wedge_image(subset):
        if not subset:
            out = zero_vector(ring, h.rank(0))
            out[0] = ring.one()
            return out, 0
        vec, deg = basis1[subset[0]], 1
        for i in subset[1:]:
            vec = h.multiply(deg, 1, vec, basis1[i])
            deg += 1
        return vec, deg

    mats = []
    for k in range(h.top + 1):
        cols = []
        for subset in _subsets(n, k):
            vec, deg = wedge_image(subset)
            cols.append(vec)
        m = ExactMatrix.from_columns(ring, cols, nrows=h.rank(k))
        if m.rows != m.cols:
            raise ValueError(f"H^{k} has rank {m.rows}, expected C({n},{k}) = {m.cols}")
        s = smith_normal_form(m)
        if s.rank != m.rows or any(not ring.is_unit(d) for d in s.divisors):
            raise ValueError(f"degree-{k} comparison matrix is not invertible")
        mats.append(m)
    # ring-map check on structure constants: phi(e_S) phi(e_T) = phi(e_S ^ e_T)
    for p in range(h.top + 1):
        for q in range(h.top + 1 - p):
            for s in _subsets(n, p):
                vs, _ = wedge_image(s)
                for t in _subsets(n, q):
                    vt, _ = wedge_image(t)
                    lhs = h.multiply(p, q, vs, vt)
                    w = _wedge(s, t)
                    if w is None:
                        rhs = zero_vector(ring, h.rank(p + q))
                    else:
                        sign, merged = w
                        rhs_vec, _ = wedge_image(merged)
                        rhs = ring.reduce_array(ring.normalize(sign) * rhs_vec)
                    if any(a != b for a, b in zip(lhs, rhs)):
                        raise ValueError(
                            f"products of degree-1 classes are not exterior at {s},{t}")
    return mats


# ---------------------------------------------------------------------------
# Symmetrization
# ---------------------------------------------------------------------------

def sym3_monomials(n: int) -> list[tuple]:
    return list(combinations_with_replacement(range(n), 3))


def symmetrize(theta_cochain: HochschildCochain, signed: bool = False) -> ExactMatrix:
    """The induced map S^3 V -> Lambda^2 V from the (1,1,1) block.

    Column (i <= j <= k): sum over all S_3 orderings of (v_i, v_j, v_k)
    of the block values (with permutation signs when signed=True);
    rows are coordinates on H^2.
    """
    n = theta_cochain.rank(1)
    ring = theta_cochain.ring
    block = theta_cochain.block_or_zero((1, 1, 1))
    h2 = theta_cochain.rank(2)
    monos = sym3_monomials(n)
    out = ExactMatrix.zeros(ring, h2, len(monos))
    for col, (i, j, k) in enumerate(monos):
        acc = zero_vector(ring, h2)
        for perm, sgn in _perms_with_signs():
            a, b, c = (i, j, k)[perm[0]], (i, j, k)[perm[1]], (i, j, k)[perm[2]]
            v = block.column((a * n + b) * n + c)
            acc = acc + (ring.normalize(sgn) * v if signed else v)
        out.data[:, col] = ring.reduce_array(acc)
    return out


def _perms_with_signs():
    out = []
    for perm in permutations(range(3)):
        inv = sum(1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b])
        out.append((perm, (-1) ** inv))
    return out


def symmetrize_matrix(h: HRing, layout: CochainLayout, signed: bool = False) -> ExactMatrix:
    """Matrix of cochain |-> flattened symmetrization, on layout coordinates."""
    n = h.rank(1)
    monos = sym3_monomials(n)
    rows = h.rank(2) * len(monos)
    out = ExactMatrix.zeros(h.ring, rows, layout.total)
    if (1, 1, 1) not in layout.offsets:
        return out
    off, brows, bcols = layout.offsets[(1, 1, 1)]
    for col, (i, j, k) in enumerate(monos):
        for perm, sgn in _perms_with_signs():
            a, b, c = (i, j, k)[perm[0]], (i, j, k)[perm[1]], (i, j, k)[perm[2]]
            flat = (a * n + b) * n + c
            w = h.ring.normalize(sgn) if signed else h.ring.one()
            for r in range(brows):
                idx = col * brows + r
                out.data[idx, off + r * bcols + flat] = h.ring.normalize(
                    out.data[idx, off + r * bcols + flat] + w)
    return out


def verify_monomorphism(n: int, signed: bool = False, ring: Ring = ZZ) -> dict:
    """Desk-scale probe of the symmetrization map on HH^3 of Lambda^*(Z^n).

    Computes the internal-degree -1 graded part of HH^3 of the exterior
    algebra with twisted shifted coefficients, checks whether the chosen
    symmetrization variant descends to classes, and if so whether it is
    injective on them.  The verdicts are reported, not assumed.
    """
    if n < 1:
        raise ValueError("rank must be >= 1")
    alg = exterior_algebra(n, ring)
    co = build_sections(alg)
    h = co.h()
    M = TwistedBimodule(h)
    d2, lay2, lay3 = coboundary_matrix(M, 2, -1)
    d3, lay3b, lay4 = coboundary_matrix(M, 3, -1)
    assert lay3.tuples == lay3b.tuples
    cocycles = kernel_basis(d3)
    hh3 = Subquotient.from_gens_rels(ring, cocycles, d2)
    sym = symmetrize_matrix(h, lay3, signed=signed)
    kills_coboundaries = (sym @ d2).is_zero()
    injective = None
    if kills_coboundaries:
        injective = True
        sym_kernel = kernel_basis(sym @ cocycles)
        for j_col in range(sym_kernel.cols):
            ambient = cocycles.matvec(sym_kernel.column(j_col))
            if not hh3.class_is_zero(ambient):
                injective = False
                break
    return {
        "n": n,
        "signed": signed,
        "hh3_free_rank": hh3.free_rank,
        "hh3_torsion": [ring.scalar_to_json(d) for d in hh3.torsion],
        "descends_to_classes": kills_coboundaries,
        "injective_on_classes": injective,
    }


def torus_theta_trivial(n: int, ring: Ring = ZZ, seed=None):
    """Build the torus-n cochain model, its theta, and an exact witness
    delta a = theta.  Returns (witness, theta, sections)."""
    if n < 1:
        raise ValueError("torus rank must be >= 1")
    algebra = cochain_algebra(build_torus(n), ring)
    co = build_sections(algebra, seed=seed)
    th = theta(co)
    witness, cert = trivialize(th, TwistedBimodule(co.h()))
    if witness is None:
        raise AssertionError(
            f"torus theta unexpectedly nontrivial; certificate row {cert}")
    return witness, th, co
