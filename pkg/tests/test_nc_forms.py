import numpy as np
import pytest

from ncindex.group_algebra import GAMatrix, GroupSpec
from ncindex.nc_forms import (ChartGrid2D, CircleGrid, JetFunction,
                              MixedForm, ScalarForm, form_dtot, form_mul,
                              graded_trace)
from ncindex.testing import (random_gamatrix, random_mixed_form,
                             random_trig_jet)

GRID = CircleGrid(16)
SPEC = GroupSpec.cyclic(3)


def test_jet_leibniz_and_partial():
    rng = np.random.default_rng(0)
    f = random_trig_jet(GRID, rng)
    g = random_trig_jet(GRID, rng)
    fg = f * g
    lhs = fg.partial(0).value()
    rhs = (f.partial(0) * g + f * g.partial(0)).value()
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_stokes_on_circle():
    rng = np.random.default_rng(1)
    f = random_trig_jet(GRID, rng)
    df = ScalarForm.function(f).d()
    assert abs(df.integrate()) <= 1e-10


def test_dtot_of_constant_vanishes():
    c = MixedForm.one(GRID, SPEC, 2, kalg=3)
    assert form_dtot(c).max_abs() <= 1e-14


def test_dtot_definition_on_simple_tensor():
    rng = np.random.default_rng(2)
    f = random_trig_jet(GRID, rng)
    g = GAMatrix.single(SPEC, 1, 0, 0, 1)
    w = MixedForm.zero(GRID, SPEC, 1, 3)
    w.add_term(ScalarForm.function(f), (g,))
    d = form_dtot(w)
    # (1,0) part is df x g, (0,1) part is f x (1 (x) g)
    comps = d.components()
    assert (1, 0) in comps and (0, 1) in comps
    one_zero = d.algebra_component(0)
    [(word, sform)] = list(one_zero.terms.values())
    assert np.max(np.abs(sform.component((0,))
                         - f.partial(0).value())) <= 1e-12


@pytest.mark.parametrize("seed", range(6))
def test_dtot_squares_to_zero(seed):
    rng = np.random.default_rng(seed)
    w = random_mixed_form(GRID, SPEC, 2, 0, 1, rng, kalg=5) \
        + random_mixed_form(GRID, SPEC, 2, 1, 0, rng, kalg=5)
    assert form_dtot(form_dtot(w)).max_abs() <= 1e-10


@pytest.mark.parametrize("seed", range(6))
def test_leibniz_rule(seed):
    rng = np.random.default_rng(seed)
    a = random_mixed_form(GRID, SPEC, 2, 0, 1, rng, kalg=6)
    b = random_mixed_form(GRID, SPEC, 2, 1, 1, rng, kalg=6)
    lhs = form_dtot(form_mul(a, b))
    rhs = form_mul(form_dtot(a), b) \
        - form_mul(a, form_dtot(b))  # |a| = 1
    assert (lhs - rhs).max_abs() <= 1e-10


@pytest.mark.parametrize("seed", range(4))
def test_associativity(seed):
    rng = np.random.default_rng(seed)
    a = random_mixed_form(GRID, SPEC, 2, 0, 1, rng, kalg=6)
    b = random_mixed_form(GRID, SPEC, 2, 1, 0, rng, kalg=6)
    c = random_mixed_form(GRID, SPEC, 2, 0, 2, rng, kalg=6)
    assert (form_mul(form_mul(a, b), c)
            - form_mul(a, form_mul(b, c))).max_abs() <= 1e-9


def test_unit_is_neutral():
    rng = np.random.default_rng(3)
    a = random_mixed_form(GRID, SPEC, 2, 1, 1, rng, kalg=5)
    one = MixedForm.one(GRID, SPEC, 2, kalg=5)
    assert (form_mul(a, one) - a).max_abs() <= 1e-12
    assert (form_mul(one, a) - a).max_abs() <= 1e-12


def test_leibniz_word_identity():
    # (a db) c = a d(bc) - ab dc
    rng = np.random.default_rng(4)
    am, bm, cm = (random_gamatrix(SPEC, 2, rng) for _ in range(3))
    one = ScalarForm.one(GRID)

    def word(*mats):
        f = MixedForm.zero(GRID, SPEC, 2, 5)
        f.add_term(one, mats)
        return f

    lhs = form_mul(word(am, bm), word(cm))
    rhs = word(am, bm @ cm) - word(am @ bm, cm)
    assert (lhs - rhs).max_abs() <= 1e-12


def test_canonicalization_idempotent_and_kills_identity_slots():
    ident = GAMatrix.identity(SPEC, 2)
    g = random_gamatrix(SPEC, 2, np.random.default_rng(5))
    w = MixedForm.zero(GRID, SPEC, 2, 4)
    w.add_term(ScalarForm.one(GRID), (g, ident))
    assert not w.terms  # slot-1 identity dies under canonicalization
    w2 = MixedForm.zero(GRID, SPEC, 2, 4)
    w2.add_term(ScalarForm.one(GRID), (g, g))
    [(word, _)] = list(w2.terms.values())
    assert abs(word[1].scalar_component()) <= 1e-14


def test_dtot_algebra_part_is_unit_prepend():
    rng = np.random.default_rng(9)
    f = random_trig_jet(GRID, rng)
    g = random_gamatrix(SPEC, 2, rng)
    w = MixedForm.zero(GRID, SPEC, 2, 3)
    w.add_term(ScalarForm.function(f), (g,))
    d = form_dtot(w).algebra_component(1)
    expected = MixedForm.zero(GRID, SPEC, 2, 3)
    expected.add_term(ScalarForm.function(f),
                      (GAMatrix.identity(SPEC, 2), g))
    assert (d - expected).max_abs() <= 1e-13


def test_forms_identified_modulo_slot_identity():
    # adding a scalar-identity summand in a slot >= 1 does not change
    # the canonical form
    rng = np.random.default_rng(10)
    g = random_gamatrix(SPEC, 2, rng)
    h = random_gamatrix(SPEC, 2, rng)
    shifted = h + GAMatrix.identity(SPEC, 2).scale(0.37 - 0.11j)
    w1 = MixedForm.zero(GRID, SPEC, 2, 4)
    w1.add_term(ScalarForm.one(GRID), (g, h))
    w2 = MixedForm.zero(GRID, SPEC, 2, 4)
    w2.add_term(ScalarForm.one(GRID), (g, shifted))
    assert (w1 - w2).max_abs() <= 1e-13


def test_cutoff_drop_flag():
    rng = np.random.default_rng(6)
    w = random_mixed_form(GRID, SPEC, 2, 0, 2, rng, kalg=2)
    d = form_dtot(w)
    assert d.dropped


def test_graded_trace_identity():
    one = MixedForm.one(GRID, SPEC, 3, kalg=2)
    tr = graded_trace(one)
    vals = tr.scalar_part().component(())
    assert np.max(np.abs(vals - 3.0)) <= 1e-13


def test_graded_trace_kills_commutators_degree_zero():
    rng = np.random.default_rng(7)
    a = random_mixed_form(GRID, SPEC, 2, 0, 0, rng, kalg=4)
    b = random_mixed_form(GRID, SPEC, 2, 0, 0, rng, kalg=4)
    comm = form_mul(a, b) - form_mul(b, a)
    assert graded_trace(comm).max_abs() <= 1e-11


def test_graded_supercommutator_pairs_to_zero_with_closed_cocycles():
    # at algebra degree >= 1 the trace of a supercommutator vanishes
    # modulo b-boundaries, detected through closed cochains
    from ncindex.cyclic import closed_cocycle_basis, pair_cochain_form

    rng = np.random.default_rng(8)
    a = random_mixed_form(GRID, SPEC, 2, 0, 1, rng, kalg=6)   # |a| = 1
    b = random_mixed_form(GRID, SPEC, 2, 1, 1, rng, kalg=6)   # |b| = 2
    comm = form_mul(a, b) - form_mul(b, a)
    traced = graded_trace(comm)
    for phi in closed_cocycle_basis(SPEC, 2):
        assert pair_cochain_form(phi, traced).max_abs() <= 1e-10


def test_chart_grid_wedge_and_d():
    grid = ChartGrid2D(24)
    x, y = grid.xs, grid.ys
    f = JetFunction.from_arrays(
        grid, {(0, 0): np.sin(2 * np.pi * x) * y,
               (1, 0): 2 * np.pi * np.cos(2 * np.pi * x) * y,
               (0, 1): np.sin(2 * np.pi * x),
               (1, 1): 2 * np.pi * np.cos(2 * np.pi * x),
               (2, 0): -(2 * np.pi) ** 2 * np.sin(2 * np.pi * x) * y,
               (0, 2): np.zeros_like(x)})
    sf = ScalarForm.function(f)
    ddf = sf.d().d()
    assert ddf.max_abs() <= 1e-10
    dx = sf.d()
    dy = ScalarForm(grid, {(1,): f})
    wedge = dx.wedge(dy)
    assert set(wedge.comps) <= {(0, 1)}
