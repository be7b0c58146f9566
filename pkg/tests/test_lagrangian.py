import hashlib

import numpy as np

from hypothesis import given
from hypothesis import strategies as st

from epwkit import exterior as ext
from epwkit.fields import GF, QQ
from epwkit.io import dumps_lag
from epwkit.lagrangian import (
    coordinate_L,
    decomposable_search,
    dual,
    dual_identity_holds,
    graph_lagrangian,
    random_instance,
    validate_lagrangian,
)
from epwkit.linalg import Subspace

from .strategies import fields, vectors

# frozen by running the generator once; any change to the RNG stream or to the
# graph construction shows up here
SEED0_F7_SHA256 = "242c27eaae37814d8ce484d2dc0a3591ae892509a2a100632a56ef8f986179ae"


def zero10(F):
    return [[F.zero] * 10 for _ in range(10)]


def test_zero_matrix_gives_the_coordinate_lagrangian():
    for F in (GF(7), QQ):
        L = graph_lagrangian(F, zero10(F))
        assert L.A == coordinate_L(F)
        assert L.A == ext.wedge_map_image(F, [F.one] + [F.zero] * 5)


def test_identity_matrix_gives_a_lagrangian():
    F = GF(7)
    m = [[F.one if i == j else F.zero for j in range(10)] for i in range(10)]
    inst = graph_lagrangian(F, m)
    assert inst.is_lagrangian and validate_lagrangian(inst.A)
    assert inst.A != graph_lagrangian(F, zero10(F)).A


def test_random_subspace_is_not_lagrangian():
    F = GF(7)
    rng = np.random.default_rng(0)
    rows = rng.integers(0, 7, size=(10, 20)).tolist()
    S = Subspace.span(F, rows, 20)
    assert S.dim == 10 and not validate_lagrangian(S)


def test_dual_of_the_coordinate_lagrangian():
    F = GF(7)
    L = graph_lagrangian(F, zero10(F))
    D = dual(L)
    assert D.ann.dim == 10
    assert D.omega_identification() == L.A
    assert dual_identity_holds(L)


def test_coordinate_lagrangian_contains_decomposable_vectors():
    F = GF(7)
    L, w = decomposable_search(graph_lagrangian(F, zero10(F)), 1)
    assert w is not None and L.ndv_status == "witness_found"
    ok, _ = ext.is_decomposable(F, w)
    assert ok and L.A.contains(w)


def test_exhaustive_scan_over_f3():
    A, w = decomposable_search(random_instance(0, GF(3)), 1)
    assert w is None and A.ndv_status == "verified_over_field"
    assert A.scan == {"levels": [{"level": 1, "mode": "exhaustive", "points": (3**10 - 1) // 2}]}


def test_rational_instances_scan_by_reduction():
    A, w = decomposable_search(random_instance(0, QQ), 1, sample=500)
    assert w is None and set(A.scan["reductions"]) == {"7", "11", "13"}


def test_seeds_are_deterministic_and_distinct():
    F = GF(7)
    assert random_instance(5, F).A == random_instance(5, F).A
    seen = {tuple(map(tuple, random_instance(s, F).rows())) for s in range(100)}
    assert len(seen) == 100


def test_frozen_seed0_instance():
    text = dumps_lag(random_instance(0, GF(7)))
    assert hashlib.sha256(text.encode()).hexdigest() == SEED0_F7_SHA256


@given(st.data())
def test_graph_of_symmetric_matrix_is_lagrangian(data):
    F = data.draw(fields)
    flat = data.draw(vectors(F, 55))
    m = [[F.zero] * 10 for _ in range(10)]
    it = iter(flat)
    for i in range(10):
        for j in range(i, 10):
            m[i][j] = m[j][i] = F.coerce(next(it))
    inst = graph_lagrangian(F, m)
    assert inst.A.dim == 10 and validate_lagrangian(inst.A)
    assert dual_identity_holds(inst)
