import numpy as np
import pytest

from epwkit import exterior as ext
from epwkit import projective
from epwkit.epw import (
    FieldTooSmall,
    dual_stratify,
    dual_stratum_of,
    hyperplane_slice,
    sextic_on_line,
    sextic_roots,
    stratify,
    stratum_of,
)
from epwkit.fields import GF
from epwkit.lagrangian import LagrangianInstance, graph_lagrangian, make_rng, random_instance
from epwkit import poly

# strata counts of the seed-0 instance over F_11, frozen from a full enumeration
SEED0_F11_COUNTS = {0: 161053, 1: 15982, 2: 121}


def coordinate_lagrangian(F):
    return graph_lagrangian(F, [[F.zero] * 10 for _ in range(10)])


def cube_of_hyperplane(F):
    return LagrangianInstance.from_subspace(ext.wedge3_of_hyperplane(F, [1, 0, 0, 0, 0, 0]))


def test_strata_of_the_coordinate_lagrangian():
    F = GF(7)
    L = coordinate_lagrangian(F)
    assert stratum_of(L, [1, 0, 0, 0, 0, 0]) == 10
    assert stratum_of(L, [0, 1, 0, 0, 0, 0]) == 4
    assert stratify(coordinate_lagrangian(GF(3))).counts == {4: 363, 10: 1}


def test_strata_of_the_cube_of_a_hyperplane():
    F = GF(7)
    H = cube_of_hyperplane(F)
    assert H.is_lagrangian
    assert dual_stratum_of(H, [1, 0, 0, 0, 0, 0]) == 10
    assert stratify(H).counts == {0: 7**5, 6: (7**5 - 1) // 6}
    assert dual_stratify(H).counts == {4: (7**6 - 1) // 6 - 1, 10: 1}


def test_batch_strata_match_pointwise_strata_over_f3():
    A = random_instance(0, GF(3))
    rep = stratify(A)
    assert rep.exhaustive and sum(rep.counts.values()) == 364
    tally = {}
    for v in projective.points_range(3, 6, 0, projective.count(3, 6)).tolist():
        k = stratum_of(A, v)
        tally[k] = tally.get(k, 0) + 1
    assert tally == rep.counts


def test_dual_batch_strata_match_pointwise_over_f3():
    A = random_instance(1, GF(3))
    rep = dual_stratify(A)
    tally = {}
    for phi in projective.points_range(3, 6, 0, projective.count(3, 6)).tolist():
        k = dual_stratum_of(A, phi)
        tally[k] = tally.get(k, 0) + 1
    assert tally == rep.counts


def test_witnesses_have_their_stratum():
    A = random_instance(0, GF(7))
    rep = stratify(A)
    for k, pts in rep.witnesses.items():
        assert all(stratum_of(A, v) == k for v in pts)


@pytest.mark.slow
def test_frozen_strata_counts_over_f11():
    assert stratify(random_instance(0, GF(11))).counts == SEED0_F11_COUNTS


def test_hyperplane_slice_covers_the_hyperplane():
    A = random_instance(0, GF(7))
    pts = hyperplane_slice(A, [0, 0, 0, 0, 0, 1])
    assert len(pts) == (7**5 - 1) // 6
    assert all(p.point[5] == 0 for p in pts)
    for p in pts[::300]:
        assert stratum_of(A, p.point) == p.k


def _line_off_sextic(A, rng):
    F = A.field
    while True:
        v0 = [F.random(rng) for _ in range(6)]
        v1 = [F.random(rng) for _ in range(6)]
        if any(v0) and any(v1) and stratum_of(A, v1) == 0 and np.linalg.matrix_rank(np.array([v0, v1])) == 2:
            return v0, v1


def test_sextic_has_degree_six_and_roots_on_strata():
    F = GF(13)
    A = random_instance(0, F)
    rng = make_rng(7)
    for _ in range(3):
        v0, v1 = _line_off_sextic(A, rng)
        s = sextic_on_line(A, v0, v1)
        assert s.degree == 6
        roots = set(sextic_roots(s))
        for t in F.elements():
            assert (t in roots) == (stratum_of(A, s.point(t)) >= 1)


def test_sextic_is_singular_at_a_stratum_two_point():
    F = GF(11)
    A = random_instance(0, F)
    v = stratify(A).witnesses[2][0]
    _, v1 = _line_off_sextic(A, make_rng(3))
    s = sextic_on_line(A, v, v1)
    assert s.coeffs[0] == 0 and s.coeffs[1] == 0


def test_sextic_does_not_depend_on_the_chart():
    F = GF(13)
    A = random_instance(2, F)
    v0, v1 = _line_off_sextic(A, make_rng(5))
    charts = [c for c in range(6) if v0[c] or v1[c]]
    polys = [sextic_on_line(A, v0, v1, chart=c).coeffs for c in charts[:3]]
    lead = [poly.trim(F, p) for p in polys]
    for p in lead[1:]:
        c = F.div(p[-1], lead[0][-1])
        assert p == [F.mul(c, x) for x in lead[0]]


def test_sextic_under_rescaling_of_the_endpoint():
    F = GF(13)
    A = random_instance(3, F)
    v0, v1 = _line_off_sextic(A, make_rng(9))
    s = sextic_on_line(A, v0, v1)
    s2 = sextic_on_line(A, v0, [F.mul(2, x) for x in v1], chart=s.chart)
    # v0 + t (2 v1) is the point of the first line at parameter 2t
    scaled = [F.mul(F.pow(2, i), c) for i, c in enumerate(s.coeffs)]
    c = F.div(poly.trim(F, s2.coeffs)[-1], poly.trim(F, scaled)[-1])
    assert poly.trim(F, s2.coeffs) == [F.mul(c, x) for x in poly.trim(F, scaled)]
    assert {F.mul(2, r) for r in sextic_roots(s2)} == set(sextic_roots(s))


def test_small_fields_need_the_extension():
    F = GF(5)
    A = random_instance(0, F)
    v0, v1 = _line_off_sextic(A, make_rng(1))
    with pytest.raises(FieldTooSmall):
        sextic_on_line(A, v0, v1)
    assert sextic_on_line(A, v0, v1, allow_extension=True).degree == 6
