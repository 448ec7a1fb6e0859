import numpy as np
import pytest

from toeplitz_embed import (
    DegenerateOverlap,
    NearCurve,
    OnBoundary,
    Symbol,
    classify_intersections,
    discretize,
    evaluate,
    fixtures,
    in_unbounded_complement,
    region_decomposition,
    self_intersections,
    w_plus,
    winding_number,
)


def _disc(sym, step=0.03):
    return discretize(sym, step)


def test_winding_examples(sym_z, sym_z_plus_2):
    assert winding_number(_disc(sym_z), 0.0) == 1
    recip2 = Symbol.from_coeffs({-2: 1.0})
    assert winding_number(_disc(recip2), 0.0) == -2
    assert winding_number(_disc(sym_z_plus_2), 0.0) == 0


def test_winding_near_curve_raises(sym_z):
    with pytest.raises(NearCurve):
        winding_number(_disc(sym_z), 1.0 + 0.0j)


def test_winding_against_logderivative_oracle(rng):
    # independent oracle: (1/2 pi i) * trapezoid of F'/(F - lam)
    th = np.arange(8192) * (2 * np.pi / 8192)
    for _ in range(25):
        sym = fixtures.random_trig_polynomial(rng)
        vals = evaluate(sym, th)
        lam = complex(rng.normal(), rng.normal())
        if np.min(np.abs(vals - lam)) < 0.1:
            continue
        from toeplitz_embed import derivative
        dv = derivative(sym, th)
        oracle = np.mean(dv / (vals - lam)) / 1j
        w = winding_number(_disc(sym, 0.05), lam)
        assert abs(oracle - w) < 1e-6


def test_no_self_intersections_on_circle(sym_z):
    assert len(self_intersections(_disc(sym_z))) == 0


def test_two_lap_eight_intersection(two_lap):
    inters = self_intersections(_disc(two_lap))
    assert len(inters) == 1
    pt = inters.points[0]
    assert abs(pt.location + 2.0) < 0.05
    assert not pt.tangential
    assert sorted(pt.sector_windings) == [-2, -1, -1, 0]
    # cyclic arrangement: the -1 sectors sit opposite each other
    sw = list(pt.sector_windings)
    assert {sw[0], sw[2]} == {-1} or {sw[1], sw[3]} == {-1}


def test_tangency_flag_nested_circles(fig6):
    inters = self_intersections(_disc(fig6))
    assert len(inters) == 1
    assert inters.points[0].tangential
    assert abs(inters.points[0].location - 1.0) < 1e-6


def test_degenerate_overlap_detected():
    # trace an arc forward, then back over itself, then close via a loop
    t1 = np.linspace(0, np.pi, 200, endpoint=False)
    fwd = np.exp(1j * t1)
    back = np.exp(1j * t1[::-1])
    loop = 0.2 * np.exp(1j * np.linspace(0, 2 * np.pi, 200, endpoint=False)) + 1.2
    pts = np.concatenate([fwd, back, loop])
    th = np.arange(pts.size) * (2 * np.pi / pts.size)
    sym = Symbol.from_samples(th, pts)
    with pytest.raises(DegenerateOverlap):
        self_intersections(discretize(sym, 0.05))


def test_region_decomposition_disk(sym_recip_z):
    decomp = region_decomposition(_disc(sym_recip_z))
    winds = sorted((c.winding, c.bounded) for c in decomp.components)
    assert winds == [(-1, True), (0, False)]


def test_region_decomposition_fig6(fig6):
    decomp = region_decomposition(_disc(fig6))
    assert sorted(c.winding for c in decomp.components) == [-2, -1, 0]
    unb = [c for c in decomp.components if not c.bounded]
    assert len(unb) == 1 and unb[0].winding == 0


def test_region_decomposition_fig5(fig5):
    decomp = region_decomposition(_disc(fig5, 0.05))
    winds = sorted(c.winding for c in decomp.components)
    assert winds == [-2, -1, 0, 0]
    zero_bounded = [c for c in decomp.components if c.winding == 0 and c.bounded]
    assert len(zero_bounded) == 1
    assert zero_bounded[0].contains(0.0)


def test_adjacency_sum_rule(two_lap, fig6, fig5):
    for sym in (two_lap, fig6, fig5):
        decomp = region_decomposition(_disc(sym, 0.05))
        by_label = {c.label: c for c in decomp.components}
        for c in decomp.components:
            for other in c.adjacent:
                assert abs(abs(c.winding) - abs(by_label[other].winding)) == 1


def test_in_unbounded_complement_modes(sym_z_plus_2, sym_recip_z, fig5):
    d1 = region_decomposition(_disc(sym_z_plus_2))
    assert in_unbounded_complement(d1, 0.0, "complement_of_curve")
    d2 = region_decomposition(_disc(sym_recip_z))
    assert not in_unbounded_complement(d2, 0.0, "complement_of_spectrum")
    d3 = region_decomposition(_disc(fig5, 0.05))
    inters = self_intersections(_disc(fig5, 0.05))
    assert not in_unbounded_complement(
        d3, 0.0, "complement_of_interior_spectrum", intersections=inters)
    # a point in the unbounded face reaches infinity in every mode
    far = 10.0 + 10.0j
    for mode in ("complement_of_curve", "complement_of_spectrum",
                 "complement_of_interior_spectrum"):
        assert in_unbounded_complement(d3, far, mode, intersections=inters)


def test_on_boundary_raises(sym_z):
    decomp = region_decomposition(_disc(sym_z))
    with pytest.raises(OnBoundary):
        in_unbounded_complement(decomp, 1.0 + 0.0j, "complement_of_curve")


def test_w_plus_closed_forms(sym_z_plus_2):
    zm1 = Symbol.from_coeffs({1: 1.0, 0: -1.0})
    ac = w_plus(zm1, _disc(zm1))
    assert ac.zero_count == 1
    assert float(ac.float_value) == 1.0
    assert abs(ac.arc_variations[0] - np.pi) < 1e-3

    one_minus = Symbol.from_coeffs({0: 1.0, -1: -1.0})
    ac2 = w_plus(one_minus, _disc(one_minus))
    assert ac2.zero_count == 1
    assert float(ac2.float_value) == 0.0

    ac3 = w_plus(sym_z_plus_2, _disc(sym_z_plus_2))
    assert ac3.zero_count == 0
    assert float(ac3.float_value) == 0.0


def test_w_plus_matches_winding_when_zero_free(rng):
    hits = 0
    while hits < 12:
        sym = fixtures.random_trig_polynomial(rng)
        th = np.arange(4096) * (2 * np.pi / 4096)
        vals = evaluate(sym, th)
        if np.min(np.abs(vals)) < 0.05 * np.max(np.abs(vals)):
            continue
        d = _disc(sym, 0.05)
        ac = w_plus(sym, d)
        assert ac.zero_count == 0
        assert ac.float_value == winding_number(d, 0.0)
        hits += 1


def test_w_plus_cusp_is_minus_third(cusp):
    ac = w_plus(cusp, _disc(cusp))
    assert ac.zero_count == 1
    assert abs(ac.float_value + 1.0 / 3.0) < 1e-9
    assert not ac.validity


def test_geometric_w_plus_exterior_component(fig6):
    # 0 moved onto the curve of the outer circle: w_plus equals the winding
    # of the exterior component (here 0), per the boundary geometry.
    shifted = Symbol.from_samples(fig6.theta, fig6.values - (-3.0 + 0.0j),
                                  name="fig6-on-outer")
    d = _disc(shifted)
    ac = w_plus(shifted, d)
    assert ac.zero_count == 1
    assert float(ac.float_value) == 0.0


def test_classification_types(two_lap, fig6):
    d = _disc(two_lap)
    dec = region_decomposition(d)
    inters = classify_intersections(dec, self_intersections(d))
    assert [p.classification for p in inters] == ["TypeIII"]

    d6 = _disc(fig6)
    dec6 = region_decomposition(d6)
    in6 = classify_intersections(dec6, self_intersections(d6))
    assert [p.classification for p in in6] == ["TypeIV"]
    assert sorted(abs(s) for s in in6.points[0].sector_windings) == [0, 1, 1, 2]


def test_classification_type_i():
    sym = fixtures.externally_tangent_circles()
    d = _disc(sym)
    dec = region_decomposition(d)
    inters = classify_intersections(dec, self_intersections(d))
    tangentials = [p for p in inters if p.tangential]
    assert len(tangentials) == 1
    pt = tangentials[0]
    assert pt.classification == "TypeI"
    assert sorted(abs(s) for s in pt.sector_sides) == [1, 1]
    assert sorted(abs(s) for s in pt.sector_between) == [0, 0]


def test_classification_type_ii():
    sym = fixtures.tangent_pair_in_loop()
    d = _disc(sym)
    dec = region_decomposition(d)
    inters = classify_intersections(dec, self_intersections(d))
    tangentials = [p for p in inters if p.classification == "TypeII"]
    assert len(tangentials) == 1
    pt = tangentials[0]
    assert sorted(pt.sector_between) == [-2, -2]
    assert sorted(pt.sector_sides) == [-1, -1]


def test_winding_additivity_products(rng):
    # winding(F*G, 0) = winding(F,0) + winding(G,0) for trig polynomials
    done = 0
    while done < 8:
        f = fixtures.random_trig_polynomial(rng, max_degree=3)
        g = fixtures.random_trig_polynomial(rng, max_degree=3)
        prod = {}
        for kf, cf in f.coeffs.items():
            for kg, cg in g.coeffs.items():
                prod[kf + kg] = prod.get(kf + kg, 0.0) + cf * cg
        try:
            h = Symbol.from_coeffs(prod)
            wf = winding_number(_disc(f, 0.05), 0.0)
            wg = winding_number(_disc(g, 0.05), 0.0)
            wh = winding_number(_disc(h, 0.05), 0.0)
        except (NearCurve, ValueError):
            continue
        assert wh == wf + wg
        done += 1


def test_decomposition_stability_under_refinement(fig6):
    coarse = region_decomposition(_disc(fig6, 0.06))
    fine = region_decomposition(_disc(fig6, 0.02))
    w_coarse = sorted(c.winding for c in coarse.components)
    w_fine = sorted(c.winding for c in fine.components)
    assert w_coarse == w_fine
    for wc, wf in zip(sorted(c.area for c in coarse.components if c.bounded),
                      sorted(c.area for c in fine.components if c.bounded)):
        assert abs(wc - wf) / wf < 0.02
