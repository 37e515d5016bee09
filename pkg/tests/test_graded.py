from fractions import Fraction
from math import comb

import pytest

from thetapair import fpmod as fm
from thetapair import graded as gr
from thetapair import hypersurface as hs
from thetapair.fpmod import HilbertSeries
from thetapair.graded import RationalSeries
from thetapair.polyring import PolyRing, SingularityContext
from thetapair.properties import cubic_line_pairs

P2 = PolyRing(["x", "y"])
a, b = P2.gens()
P4 = PolyRing(["x0", "x1", "x2", "x3"])


def h_of(gens, ring):
    return fm.hilbert_series(fm.module_from_ideal(gens, "P", ring=ring))


def test_product_formula_free():
    hR = h_of([P4("x0^3+x1^3+x2^3+x3^3")], P4)
    s = gr.series_product_formula(hR, hR, hR)
    assert s.same_function(RationalSeries.from_hilbert(hR))


def test_product_formula_cycles():
    # p_M p_N / (1 - t^d) for codim-one cycles in four variables
    pM = (1, 1)
    pN = (1, 2, 1)
    hM = HilbertSeries(pM, (1, 1))
    hN = HilbertSeries(pN, (1, 1))
    hR = HilbertSeries((1, 0, 0, -1), (1, 1, 1, 1))
    s = gr.series_product_formula(hM, hN, hR)
    assert s.same_function(RationalSeries.make([1, 3, 3, 1], [3]))
    assert gr.residue_at_one(s) == Fraction(2 * 4, 3)


def test_product_formula_shift():
    hR = HilbertSeries((1, 0, -1), (1, 1, 1))
    shifted = HilbertSeries((1, 0, -1), (1, 1, 1), shift=1)
    hN = HilbertSeries((1,), (1, 1))
    s = gr.series_product_formula(shifted, hN, hR)
    assert s.same_function(RationalSeries.make([0, 1], [1, 1]))


def test_product_formula_zero_denominator():
    with pytest.raises(gr.DivisionByZeroSeries):
        gr.series_product_formula(HilbertSeries((1,), (1,)), HilbertSeries((1,), (1,)), HilbertSeries((), ()))


def test_residues():
    assert gr.residue_at_one(RationalSeries.make([1], [1])) == 1
    assert gr.residue_at_one(RationalSeries.make([2, 1], [3])) == 1
    with pytest.raises(gr.WrongPoleOrder):
        gr.residue_at_one(RationalSeries.make([1, -1], [2]))
    with pytest.raises(gr.WrongPoleOrder):
        gr.residue_at_one(RationalSeries.make([1], [1, 1]))


def test_residue_law_on_constructed_series():
    # p(t)/(1 - t^d) has residue p(1)/d
    for p, d in (((1, 1), 3), ((2, 0, 1), 5), ((1, 2, 3, 4), 2), ((1,), 7)):
        assert gr.residue_at_one(RationalSeries.make(list(p), [d])) == Fraction(sum(p), d)


def test_rational_series_expand():
    s = RationalSeries.make([1, 1], [2])
    assert s.expand(5) == [1, 1, 1, 1, 1, 1]


def test_serre_examples():
    assert gr.serre_intersection([a], [b]) == 1
    assert gr.serre_intersection([a], [a + b**2]) == 2
    assert gr.serre_intersection([a, b], [a, b]) == 0
    with pytest.raises(gr.NotIsolatedIntersection):
        gr.serre_intersection([a], [a * b])


def test_serre_koszul_oracle():
    # P/m against P/m: Tor_i has length C(n, i), alternating sum 0
    P3 = PolyRing(["x", "y", "z"])
    m = P3.gens()
    assert gr.serre_intersection(m, m) == sum((-1) ** i * comb(3, i) for i in range(4)) == 0
    # complete intersections meeting properly: product of degrees
    x, y, z = m
    assert gr.serre_intersection([x**2 - y * z], [y**3, z]) == 6


def test_serre_is_symmetric():
    P3 = PolyRing(["x", "y", "z"])
    x, y, z = P3.gens()
    for I, J in (([x, y], [z]), ([x - y**2], [y, z**2]), ([x * y, z], [x + y, z**2 - x])):
        assert gr.serre_intersection(I, J) == gr.serre_intersection(J, I)


def _theta(I, J, f):
    ring = f.ring
    return hs.theta(fm.module_from_ideal(I, "R", ring=ring, f=f), fm.module_from_ideal(J, "R", ring=ring, f=f))


def test_serre_equals_theta():
    P3 = PolyRing(["x", "y", "z", "w"])
    x, y, z, w = P3.gens()
    cases = [
        ([a], [b], a * b),
        ([b], [b - a**2], b * (b - a**2)),
        ([b], [b - a**3], b * (b - a**3)),
        ([x, z], [y, w], x * y - z * w),
        ([a], [a, b], a * b),
    ]
    for I, J, f in cases:
        assert _theta(I, J, f) == gr.serre_intersection(I, J)


def test_projective_intersections():
    ctx_f, pairs = cubic_line_pairs()
    assert gr.proj_intersection_number(*pairs["skew"], ctx_f) == 0
    assert gr.proj_intersection_number(*pairs["transverse"], ctx_f) == 1
    with pytest.raises(gr.WrongPoleOrder):
        gr.proj_intersection_number(*pairs["identical"], ctx_f)


def test_cycle_pairing_formula():
    ctx, pairs = cubic_line_pairs()
    for kind, yz, expected in (("skew", 0, 1), ("transverse", 1, -2)):
        rep = gr.theorem_1_2_check(ctx.f, *pairs[kind])
        assert (rep.deg_y, rep.deg_z, rep.d) == (1, 1, 3)
        assert rep.proj_intersection == yz
        assert rep.theta_predicted == rep.theta_computed == expected
        assert rep.residue_balance
        assert Fraction(rep.deg_y * rep.deg_z, rep.d) == rep.proj_intersection + Fraction(rep.theta_computed, rep.d)
        swapped = gr.theorem_1_2_check(ctx.f, *reversed(pairs[kind]))
        assert swapped.theta_computed == rep.theta_computed


def test_cycle_pairing_refuses_non_transverse():
    ctx, pairs = cubic_line_pairs()
    with pytest.raises(gr.WrongPoleOrder):
        gr.theorem_1_2_check(ctx.f, *pairs["identical"])


def test_cycle_report_json_is_rational():
    ctx, pairs = cubic_line_pairs()
    js = gr.theorem_1_2_check(ctx.f, *pairs["skew"]).to_json()
    assert js["thetaPredicted"] == [1, 1] and js["projIntersection"] == [0, 1]


def test_quadric_surface_lines():
    # two rulings on x*y - z*w: skew lines of the same ruling, transverse lines of opposite rulings
    Q = PolyRing(["x", "y", "z", "w"])
    x, y, z, w = Q.gens()
    f = x * y - z * w
    same = ([x, z], [x - w, z - y])
    opposite = ([x, z], [x, w])
    for I, J in (same, opposite):
        rep = gr.theorem_1_2_check(f, I, J)
        assert rep.agrees and rep.residue_balance
    assert SingularityContext(Q, f).is_graded()
