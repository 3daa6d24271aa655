"""Exact homological algebra toolkit.

Builds simplicial cochain dg-algebras, section packages for their
cohomology, the secondary-multiplication Hochschild 3-cocycle, Massey
triple products, mapping-cone (Gysin-type) extensions, and splitting
witnesses, all over Z, Q or a prime field, with exact arithmetic.
"""

from .exactlin import (
    ZZ, QQ, GF, Ring, ExactMatrix, Subquotient,
    smith_normal_form, solve, solve_with_certificate, solve_matrix,
    kernel_basis, image_basis, column_hermite, quotient_presentation,
    section_of_surjection, as_vector, zero_vector,
)
from .simplicial import (
    SimplicialComplex, build_circle, build_sphere, build_torus, product,
    load_complex, save_complex, make_complex,
)
from .dga import (
    DgAlgebra, DgModule, cochain_algebra, validate, validate_module,
    load_dga, save_dga,
)
from .sections import (
    CohomologySections, HRing, compute_cohomology, build_sections,
    TorsionHomologyError, NotACocycleError, ProductNotACoboundaryError,
    load_sections, save_sections,
)
from .hochschild import (
    HochschildCochain, TwistedBimodule, coboundary, coboundary_matrix,
    theta, theta_value, verify_cocycle, trivialize, classes_equal,
    load_cochain, save_cochain, zero_cochain, admissible_tuples,
)
from .massey import MasseyResult, massey_triple, coset_stable, NotAMasseyTripleError
from .gysin import (
    ConeComplex, GysinExtension, SplitSection, mapping_cone, cone_cohomology,
    gysin_extension, beta_from_theta, verify_theorem_th, split_extension,
    check_extension_exactness,
)
from .torus import (
    exterior_algebra, exterior_iso, symmetrize, verify_monomorphism,
    torus_theta_trivial,
)

__version__ = "0.1.0"
