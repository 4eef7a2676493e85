import itertools

import numpy as np
import pytest

from ncindex.covering import (CoverData, build_mf_projection,
                              cocycle_closedness_defect, higher_index_rhs,
                              omega_integral, omega_tau,
                              verify_prop_chern, winding_cocycle,
                              zero_cocycle)
from ncindex.cyclic import GroupCocycle
from ncindex.errors import BadCover, UnsupportedManifold
from ncindex.group_algebra import GroupSpec
from ncindex.nc_forms import CircleGrid

GRID = CircleGrid(256)


def standard(grid=GRID, **kw):
    return CoverData.standard(grid, **kw)


def test_trivial_cover():
    cover = standard(n_arcs=1)
    mf = build_mf_projection(cover)
    assert mf.idempotence <= 1e-14
    tr = mf.form.graded_trace().scalar_part().component(())
    assert np.max(np.abs(tr - 1.0)) <= 1e-13


def test_partition_of_unity():
    for fam in ("mollifier", "raised-cosine", "poly-spline"):
        cover = standard(family=fam)
        assert cover.partition_residual() <= 1e-12


def test_projection_residual_grid_independent():
    # algebraic identity: residual at roundoff for every grid size
    for n in (64, 256, 1024):
        mf = build_mf_projection(standard(CircleGrid(n)))
        assert mf.idempotence <= 1e-12
        assert mf.selfadjoint <= 1e-12


def test_bad_partition_detected():
    cover = standard()
    cover.chi_sq[0] = cover.chi_sq[0].scale(1.05)
    with pytest.raises(BadCover):
        cover.validate()


def test_gap_cover_rejected():
    with pytest.raises(BadCover):
        CoverData(GRID, [(0.0, 0.4), (0.5, 0.9)], "mollifier",
                  GroupSpec.lattice(1), [[0, 0], [0, 0]])


def test_disconnected_overlap_rejected():
    with pytest.raises(BadCover):
        standard(n_arcs=2)


def test_bad_deck_rejected():
    grid = CircleGrid(128)
    arcs = CoverData.standard(grid).arcs
    deck = [[0, 0, -1], [0, 0, 0], [1, 0, 1]]  # nonzero diagonal
    with pytest.raises(BadCover):
        CoverData(grid, arcs, "mollifier", GroupSpec.lattice(1), deck)


def test_bump_derivatives_satisfy_stokes():
    # the partition bumps carry analytic derivatives; their exact
    # differentials integrate to zero on the circle
    for fam in ("mollifier", "raised-cosine", "poly-spline"):
        cover = standard(CircleGrid(512), family=fam)
        for sq in cover.chi_sq:
            assert abs(np.mean(sq.partial(0).value())) <= 1e-10


def test_omega_zero_cocycle():
    cover = standard()
    w = omega_tau(cover, zero_cocycle(cover.deck_spec))
    assert w.max_abs() == 0.0


def test_omega_winding_integral_is_one():
    for fam in ("mollifier", "raised-cosine", "poly-spline"):
        cover = standard(CircleGrid(1024), family=fam)
        val = omega_integral(cover, winding_cocycle(cover.deck_spec))
        assert abs(val - 1.0) <= 1e-8


def test_omega_bump_family_independence():
    vals = []
    for fam in ("mollifier", "raised-cosine", "poly-spline"):
        cover = standard(CircleGrid(1024), family=fam)
        vals.append(omega_integral(cover, winding_cocycle(cover.deck_spec)))
    for a in vals:
        for b in vals:
            assert abs(a - b) <= 1e-8


def test_omega_rejects_non_closed_tau():
    cover = standard(deck_order=4)
    spec = cover.deck_spec
    tau = GroupCocycle(spec, 1, lambda a, b: complex((b - a) % 4),
                       invariant=True)
    assert cocycle_closedness_defect(cover, tau) > 1e-3
    with pytest.raises(ValueError):
        omega_tau(cover, tau)


def test_torsion_deck_closed_cocycles_vanish():
    # over Z/k every closed invariant degree-1 cochain is zero, so the
    # only omega to integrate is the zero form
    k = 4
    closed = []
    for f in itertools.product(*[np.linspace(-1, 1, 3)] * (k - 1)):
        table = {0: 0.0}
        table.update({d + 1: f[d] for d in range(k - 1)})
        ok = all(abs(table[(a + b) % k] - table[a] - table[b]) < 1e-9
                 for a in range(k) for b in range(k))
        if ok:
            closed.append(table)
    assert all(max(abs(v) for v in t.values()) == 0 for t in closed)
    cover = standard(deck_order=k)
    assert omega_integral(cover, zero_cocycle(cover.deck_spec)) == 0


def test_prop_chern_identity():
    cover = standard(CircleGrid(1024))
    rep = verify_prop_chern(cover, winding_cocycle(cover.deck_spec))
    assert rep["residual"] <= 1e-8
    assert rep["flat_connection_residual"] <= 1e-9
    assert rep["sign_match"]
    assert rep["idempotence"] <= 1e-12


def test_prop_chern_residual_monotone_under_refinement():
    r256 = verify_prop_chern(standard(CircleGrid(256)),
                             winding_cocycle(GroupSpec.lattice(1)))
    r1024 = verify_prop_chern(standard(CircleGrid(1024)),
                              winding_cocycle(GroupSpec.lattice(1)))
    assert r1024["residual"] <= r256["residual"] + 1e-12


def test_prop_chern_trivial_cover():
    cover = standard(n_arcs=1)
    rep = verify_prop_chern(cover, winding_cocycle(cover.deck_spec))
    assert rep["residual"] <= 1e-14
    assert abs(rep["lhs_integral"]) <= 1e-14


def test_prop_chern_irregular_cover():
    arcs = [(-0.05, 0.45), (0.35, 0.75), (0.65, 1.05)]
    deck = [[0, 0, -1], [0, 0, 0], [1, 0, 0]]
    cover = CoverData(CircleGrid(512), arcs, "mollifier",
                      GroupSpec.lattice(1), deck)
    rep = verify_prop_chern(cover, winding_cocycle(cover.deck_spec))
    assert rep["residual"] <= 1e-8


def test_coboundary_pairing_vanishes():
    # pairing the character with a transpose-boundary cochain gives zero
    from ncindex.cyclic import b_transpose, pair_cochain_form, CyclicCochain
    from ncindex.chern import chern_even

    cover = standard(CircleGrid(256))
    P = build_mf_projection(cover).form
    ch = chern_even(P, 1)
    spec = cover.deck_spec
    psi = CyclicCochain(spec, 0,
                        lambda g: 1.0 if g == (2,) else 0.0,
                        normalized=True)
    paired = pair_cochain_form(b_transpose(psi), ch)
    assert abs(paired.integrate()) <= 1e-12


def test_higher_index_rhs():
    cover = standard(CircleGrid(512))
    tau = winding_cocycle(cover.deck_spec)
    assert higher_index_rhs(cover, zero_cocycle(cover.deck_spec), 1) == 0
    v1 = higher_index_rhs(cover, tau, 1)
    expected = -1.0 / (2j * np.pi) * omega_integral(cover, tau)
    assert abs(v1 - expected) <= 1e-12
    assert abs(higher_index_rhs(cover, tau, 2) - 2 * v1) <= 1e-12


def test_higher_index_degree_guard():
    cover = standard()
    tau2 = GroupCocycle(cover.deck_spec, 2, lambda *a: 0j,
                        alternating=True, invariant=True)
    with pytest.raises(UnsupportedManifold):
        higher_index_rhs(cover, tau2, 1)
