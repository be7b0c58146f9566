import pytest

from epwkit import projective
from epwkit.epw import stratum_of
from epwkit.fields import GF
from epwkit.gm import quadric_at
from epwkit.linalg import QuadraticForm, Subspace
from epwkit.quadric_fibers import (
    FiberError,
    _embed_form,
    _embed_rows,
    admissibility,
    double_cover_fiber,
    in_sigma1,
    line_of_point,
    rho1_fiber_classify,
    sigma1_conic,
    sigma_of_line,
    sigma_planes,
    splitting_section,
    to_W_coords,
    two_spaces_through,
)
from epwkit.scenarios import fivefold_data, points_with_stratum, threefold_data


def gram6(F, entries):
    G = [[F.zero] * 6 for _ in range(6)]
    for (i, j), c in entries.items():
        G[i][j] = G[j][i] = F.coerce(c)
    return QuadraticForm.from_rows(F, G)


def e(F, i, n=6):
    return [F.one if j == i else F.zero for j in range(n)]


def test_two_spaces_of_a_hyperbolic_form():
    F = GF(7)
    q = gram6(F, {(0, 1): 1, (2, 3): 1})
    ts = two_spaces_through(q, [e(F, 0)])
    assert ts.kind == "split" and len(ts.spaces) == 2
    expected = [Subspace.span(F, [e(F, 0), e(F, k), e(F, 4), e(F, 5)], 6) for k in (3, 2)]
    assert [sp.space for sp in ts.spaces] == expected


def test_anisotropic_residual_form_is_inert_and_splits_over_the_extension():
    F = GF(7)
    q = gram6(F, {(0, 1): 1, (2, 2): 1, (3, 3): 4})  # x2^2 + 4 x3^2, -4 = 3 is a non-square mod 7
    ts = two_spaces_through(q, [e(F, 0)])
    assert ts.kind == "inert" and not ts.rational and ts.field.order == 49
    for sp in ts.spaces:
        assert sp.dim == 4 and sp.is_isotropic()
    E = GF(49)
    tsE = two_spaces_through(_embed_form(q, E), [e(E, 0)])
    assert tsE.kind == "split" and tsE.field is E


def test_two_spaces_rejects_bad_input():
    F = GF(7)
    with pytest.raises(FiberError):
        two_spaces_through(gram6(F, {(0, 1): 1}), [e(F, 0)])  # corank 4
    with pytest.raises(FiberError):
        two_spaces_through(gram6(F, {(0, 1): 1, (2, 3): 1}), [e(F, 4)])  # inside the kernel
    with pytest.raises(FiberError):
        two_spaces_through(gram6(F, {(0, 0): 1, (2, 3): 1, (1, 1): 1}), [e(F, 0)])  # not isotropic


def _off_v5_stratum2(data, limit):
    gm = data.gm
    F = gm.field
    return [p for p in points_with_stratum(gm.lag, 2) if not F.is_zero(gm.split(p)[0])][:limit]


@pytest.mark.parametrize("which", ["threefold", "fivefold"])
def test_double_cover_fibers(which, threefold, fivefold):
    data = threefold if which == "threefold" else fivefold
    gm = data.gm
    base = to_W_coords(gm, data.L0.rows()) if which == "threefold" else [list(r) for r in data.Pi0]
    for v in _off_v5_stratum2(data, 5):
        ts = double_cover_fiber(gm, base, v)
        G = ts.field
        q = quadric_at(gm, v)
        qG = q if G is gm.field else _embed_form(q, G)
        b = base if G is gm.field else _embed_rows(base, G)
        for sp in ts.spaces:
            assert sp.dim == gm.dim_W // 2 + 1
            assert qG.vanishes_on(sp.space.rows())
            assert Subspace.span(G, b, gm.dim_W).is_subspace_of(sp.space)


def test_splitting_sections(threefold):
    d = threefold
    seen = 0
    for v in d.boundary:
        why = admissibility(d.gm, d.v0p, v)
        if why is None:
            s = splitting_section(d.gm, d.L0, d.v0p, v)
            assert s.space.dim == 5 and s.contains_L0 and s.isotropic
            seen += 1
        else:
            with pytest.raises(FiberError) as info:
                splitting_section(d.gm, d.L0, d.v0p, v)
            assert info.value.reason == why
    assert seen >= 10


def test_point_equal_to_the_base_is_excluded(threefold):
    d = threefold
    assert admissibility(d.gm, d.v0p, d.v0p) == "equals_v0"


def test_sigma1_conic_is_smooth_with_one_dimensional_kernels(threefold7):
    gm = threefold7.gm
    c = sigma1_conic(gm)
    assert c.smooth and len(c.plane) == 3
    assert c.samples
    for (_st, k) in c.samples:
        assert any(not c.field.is_zero(x) for x in k)


def test_line_of_a_stratum_two_point_returns_to_the_point(threefold7):
    gm = threefold7.gm
    for v in threefold7.boundary:
        if in_sigma1(gm, v):
            continue
        L = line_of_point(gm, v)
        assert L.dim == 2
        assert tuple(sigma_of_line(gm, L)) == tuple(v)


@pytest.mark.parametrize("q", [3, 5])
def test_fiber_classification_matches_prediction_everywhere(q):
    for gm in (threefold_data(q, 0).gm, fivefold_data(q, 0, need_plane=False).gm):
        for v in projective.points_range(q, 5, 0, projective.count(q, 5)).tolist():
            c = rho1_fiber_classify(gm, v)
            assert c.consistent, (v, c.label, c.predicted)
            assert c.stratum == stratum_of(gm.lag, gm.from_v5(v))


def test_fivefold_planes_are_two_planes(fivefold7):
    gm = fivefold7.gm
    for v in fivefold7.boundary:
        ts = sigma_planes(gm, v)
        for sp in ts.spaces:
            assert sp.dim == 3
