import pytest

from epwkit import exterior as ext
from epwkit.correspondences import (
    LineTransformError,
    cycle_decomposition_check,
    line_transform_data,
    scroll_fiber,
    z_fiber,
)
from epwkit.gm import hilbert_polynomial
from epwkit.ideals import HomogeneousIdeal, segre_ideal
from epwkit.quadric_fibers import admissibility, line_of_point, to_W_coords
from epwkit.scenarios import line_transform_fixture, points_with_stratum, split_points


def admissible(d):
    return [v for v in d.boundary if admissibility(d.gm, d.v0p, v) is None]


def stratum2_off_v5(d, limit):
    F = d.gm.field
    return [p for p in points_with_stratum(d.gm.lag, 2) if not F.is_zero(d.gm.split(p)[0])][:limit]


def test_z_fibers_of_the_threefold(threefold):
    base = to_W_coords(threefold.gm, threefold.L0.rows())
    for v in stratum2_off_v5(threefold, 3):
        z = z_fiber(threefold.gm, base, v, 0)
        assert z.nvars == 5
        assert z.hilbert_function(5) == [1, 5, 10, 15, 20, 25]
        assert list(hilbert_polynomial(11, 0, 5).table) == z.hilbert_function(5)


def test_z_fibers_of_the_fivefold(fivefold):
    base = [list(r) for r in fivefold.Pi0]
    for v in stratum2_off_v5(fivefold, 3):
        z = z_fiber(fivefold.gm, base, v, 0)
        assert z.nvars == 6
        assert z.hilbert_function(5) == [1, 6, 16, 31, 51, 76]


def test_z_fiber_sheet_must_be_zero_or_one(threefold):
    base = to_W_coords(threefold.gm, threefold.L0.rows())
    with pytest.raises(ValueError):
        z_fiber(threefold.gm, base, stratum2_off_v5(threefold, 1)[0], 2)


def test_threefold_scroll_is_a_hyperplane_section_of_the_segre(threefold):
    F = threefold.gm.field
    hyperplane = HomogeneousIdeal.from_forms(F, 6, linears=[[1, 2, 3, 5, 7, 11]])
    oracle = (segre_ideal(F) + hyperplane).hilbert_function(4)
    assert oracle == [1, 5, 12, 22, 35]
    for v in admissible(threefold)[:3]:
        fib = scroll_fiber(threefold.gm, threefold.L0, v, threefold.v0p)
        assert fib.hilbert_function(4) == oracle


def test_fivefold_scroll_is_the_segre(fivefold):
    F = fivefold.gm.field
    oracle = segre_ideal(F).hilbert_function(4)
    assert oracle == [1, 6, 18, 40, 75]
    for v in split_points(fivefold.gm, fivefold.Pi0, fivefold.boundary)[:3]:
        fib = scroll_fiber(fivefold.gm, fivefold.Pi0, v)
        assert fib.hilbert_function(4) == oracle


def test_threefold_cycle_decomposition(threefold):
    pts = admissible(threefold)
    assert len(pts) >= 10
    for v in pts[:3]:
        r = cycle_decomposition_check(threefold.gm, threefold.L0, v, threefold.v0p)
        assert r.ok, r.failed
        assert r.tables == {"C": [1, 5, 11, 17, 23], "Z": [1, 5, 10, 15, 20], "L": [1, 2, 3, 4, 5], "Z_meet_L": [1, 2, 2, 2, 2]}


def test_fivefold_cycle_decomposition(fivefold):
    for v in split_points(fivefold.gm, fivefold.Pi0, fivefold.boundary)[:3]:
        r = cycle_decomposition_check(fivefold.gm, fivefold.Pi0, v)
        assert r.ok, r.failed
        assert r.tables["S"] == [1, 6, 17, 34, 57]
        assert r.tables["S_residual"] == [1, 6, 15, 28, 45]
        assert r.tables["residual_meet_planes"] == [1, 6, 10, 14, 18]


def test_cycle_check_reports_a_line_meeting_the_base_line(threefold):
    meets = [v for v in threefold.boundary if admissibility(threefold.gm, threefold.v0p, v) == "line_meets_L0"]
    assert meets, "the scenario has no point whose line meets the base line"
    r = cycle_decomposition_check(threefold.gm, threefold.L0, meets[0], threefold.v0p)
    assert not r.ok and r.failed == ["line_meets_L0"]
    assert r.to_json()["ok"] is False


@pytest.fixture(scope="module")
def transform():
    return line_transform_fixture(11)


def test_line_transform_data(transform):
    lt = transform
    F = lt.A.field
    assert all(lt.conditions.values())
    assert lt.V3.dim == 3 and lt.V3.contains(list(lt.v1))
    assert all(F.is_zero(F.dot(x, lt.phi)) for x in lt.V3.rows())
    u1 = lt.gm.v5_coords(lt.v1)
    assert line_of_point(lt.gm, u1) == lt.L0
    for x in lt.V3.rows():
        w = ext.wedge_coeffs(F, u1, 1, lt.gm.v5_coords(x), 1, 5)
        assert lt.L0.contains(w)
    assert lt.nice and lt.dual_nice and lt.L0_dual_expected


def test_line_transform_is_an_involution(transform):
    d = transform.dual()
    dd = d.dual()
    assert d.L0 == transform.L0_dual
    assert dd.A.A == transform.A.A
    assert (dd.v1, dd.phi) == (transform.v1, transform.phi)
    assert dd.L0 == transform.L0


def test_line_transform_rejects_a_non_incident_flag(transform):
    F = transform.A.field
    phi = list(transform.phi)
    v1 = [F.add(x, F.one) for x in transform.v1]
    if F.is_zero(F.dot(v1, phi)):
        v1[0] = F.add(v1[0], F.one)
    with pytest.raises(LineTransformError) as info:
        line_transform_data(transform.A, v1, phi)
    assert info.value.condition == "incidence"
