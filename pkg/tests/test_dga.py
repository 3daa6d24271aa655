import json
import time

import pytest

from hochgysin.dga import (
    DgaFormatError, DgaValidationError, cochain_algebra, dga_from_json,
    dga_to_json, load_dga, save_dga, validate,
)
from hochgysin.exactlin import GF, QQ, ZZ, as_vector
from hochgysin.simplicial import build_circle, build_sphere, build_torus, make_complex

RINGS = [ZZ, QQ, GF(2), GF(3)]
POINT = make_complex(1, [(0,)])


def fixtures():
    return {
        "point": POINT,
        "circle": build_circle(),
        "sphere2": build_sphere(2),
        "sphere3": build_sphere(3),
        "torus2": build_torus(2),
        "torus3": build_torus(3),
    }


def test_point_algebra():
    a = cochain_algebra(POINT, ZZ)
    assert a.top_degree == 0 and a.ranks == [1]
    assert list(a.unit) == [1]
    assert validate(a).passed


def test_axiom_suite_all_fixtures_all_rings():
    start = time.monotonic()
    for name, k in fixtures().items():
        for ring in RINGS:
            report = validate(cochain_algebra(k, ring))
            assert report.passed, (name, ring.name, report.failures())
    assert time.monotonic() - start < 10.0


def test_circle_vertex_dual_products():
    a = cochain_algebra(build_circle(), ZZ)
    # e0* . e0* = e0* (front=back=vertex)
    e0 = as_vector(ZZ, [1, 0, 0])
    assert list(a.multiply(0, 0, e0, e0)) == [1, 0, 0]
    e1 = as_vector(ZZ, [0, 1, 0])
    assert list(a.multiply(0, 0, e0, e1)) == [0, 0, 0]
    # vertex dual cup edge dual: nonzero only when the vertex is the front face
    edges = a.labels[1]
    assert edges == [[0, 1], [0, 2], [1, 2]]
    e01 = as_vector(ZZ, [1, 0, 0])
    assert list(a.multiply(0, 1, e0, e01)) == [1, 0, 0]   # front vertex of 01 is 0
    assert list(a.multiply(0, 1, e1, e01)) == [0, 0, 0]   # 1 is the back vertex
    assert list(a.multiply(1, 0, e01, e1)) == [1, 0, 0]


def test_flipped_product_sign_caught():
    a = cochain_algebra(build_circle(), ZZ)
    ent = list(a.product[(0, 1)])
    i, j, k, c = ent[0]
    ent[0] = (i, j, k, -c)
    a.product = dict(a.product)
    a.product[(0, 1)] = tuple(ent)
    report = validate(a)
    assert not report.passed
    names = {c.name for c in report.failures()}
    assert names & {"leibniz", "associativity", "unit"}


def exterior_square_z():
    """Lambda(e1, e2) with zero differential, hand-rolled."""
    from hochgysin.dga import DgAlgebra
    product = {
        (0, 0): ((0, 0, 0, 1),),
        (0, 1): ((0, 0, 0, 1), (0, 1, 1, 1)),
        (1, 0): ((0, 0, 0, 1), (1, 0, 1, 1)),
        (0, 2): ((0, 0, 0, 1),),
        (2, 0): ((0, 0, 0, 1),),
        (1, 1): ((0, 1, 0, 1), (1, 0, 0, -1)),
    }
    return DgAlgebra(ZZ, 2, [1, 2, 1], {}, product, as_vector(ZZ, [1]))


def test_exterior_algebra_validates():
    assert validate(exterior_square_z()).passed


def test_save_load_roundtrip(tmp_path):
    a = cochain_algebra(build_torus(2), ZZ)
    path = tmp_path / "t2.dga.json"
    save_dga(a, path)
    b = load_dga(path)
    assert a == b


def test_load_rejects_broken_differential(tmp_path):
    a = cochain_algebra(build_circle(), ZZ)
    payload = dga_to_json(a)
    payload["diff"]["0"][0][0] = 99      # breaks d^2 = 0 / Leibniz
    path = tmp_path / "broken.dga.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(DgaValidationError):
        load_dga(path)


def test_load_rejects_malformed(tmp_path):
    path = tmp_path / "junk.dga.json"
    path.write_text("[1, 2")
    with pytest.raises(DgaFormatError):
        load_dga(path)
    with pytest.raises(DgaFormatError):
        dga_from_json({"ring": "Z"})


@pytest.mark.parametrize("ring", RINGS)
def test_rational_and_modular_coefficients(ring):
    a = cochain_algebra(build_sphere(2), ring)
    assert validate(a).passed
    assert a.ring == ring
