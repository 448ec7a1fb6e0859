"""Reference curves used by the demos and the test suite.

Each builder returns a Symbol whose region topology is documented and
verified in the tests: tangent-circle pairs of every contact type, the
two-lap figure-eight, the figure-eight inside a loop with its bounded
zero-winding lobe, and the boundary-cusp curve with a fractional kernel
index.
"""

import numpy as np

from .symbols import TWO_PI, Symbol

__all__ = [
    "two_lap_eight", "nested_tangent_circles", "externally_tangent_circles",
    "tangent_pair_in_loop", "figure_eight_in_loop", "root_cusp",
    "random_trig_polynomial", "random_nonvanishing",
]


def two_lap_eight():
    """(2 + cos t) e^{-2it}: one transversal crossing at -2, windings 0/-1/-2."""
    return Symbol.from_coeffs({-1: 0.5, -2: 2.0, -3: 0.5}, name="two-lap-eight")


def nested_tangent_circles(n=1536):
    """Unit circle inside the circle |z+1| = 2, both negatively wound,
    internally tangent at 1.  Components wind 0, -1, -2; the contact at 1 is
    tangential with side sectors 0 and -2."""
    if n % 3:
        raise ValueError("need n divisible by 3 so the junction is a knot")
    th = np.arange(n) * (TWO_PI / n)
    vals = np.empty(n, dtype=complex)
    first = th < 4 * np.pi / 3
    vals[first] = -1.0 + 2.0 * np.exp(-1.5j * th[first])
    vals[~first] = np.exp(-3j * th[~first])
    # weld the two visits of the tangency exactly
    vals[0] = 1.0 + 0.0j
    vals[n // 3 * 2] = 1.0 + 0.0j
    return Symbol.from_samples(th, vals, name="nested-tangent-circles")


def externally_tangent_circles(n=1024):
    """|z - i| = 1 clockwise then |z + i| = 1 counterclockwise, tangent at 0.

    The two disks wind -1 and +1; the tangency is a Type I contact (the
    deeper sectors sit on the two sides of the common tangent line)."""
    if n % 2:
        raise ValueError("need an even sample count")
    th = np.arange(n) * (TWO_PI / n)
    vals = np.empty(n, dtype=complex)
    first = th < np.pi
    vals[first] = 1j + np.exp(1j * (-2 * th[first] - np.pi / 2))
    vals[~first] = -1j + np.exp(1j * (2 * th[~first] + np.pi / 2))
    vals[0] = 0.0 + 0.0j
    vals[n // 2] = 0.0 + 0.0j
    return Symbol.from_samples(th, vals, name="externally-tangent-circles")


def _smooth(points, protected, rounds=3):
    """Local corner-rounding that leaves protected indices untouched."""
    pts = np.asarray(points, complex)
    keep = np.zeros(pts.size, dtype=bool)
    keep[list(protected)] = True
    for _ in range(rounds):
        prev = np.roll(pts, 1)
        nxt = np.roll(pts, -1)
        smoothed = 0.25 * prev + 0.5 * pts + 0.25 * nxt
        pts = np.where(keep, pts, smoothed)
    return pts


def _assemble(pieces, protected_values=(), rounds=3, name=None):
    """Concatenate polyline pieces into a sampled symbol.

    Vertices matching a protected value exactly are pinned through the corner
    smoothing, so exact tangency welds survive.
    """
    pts = np.concatenate(pieces)
    # drop immediate duplicates from piece seams
    keep = np.ones(pts.size, dtype=bool)
    keep[1:] = np.abs(np.diff(pts)) > 1e-12
    if abs(pts[-1] - pts[0]) <= 1e-12:
        keep[-1] = False
    pts = pts[keep]
    protected = [i for i, p in enumerate(pts)
                 if any(abs(p - v) <= 1e-12 for v in protected_values)]
    pts = _smooth(pts, protected, rounds=rounds)
    th = np.arange(pts.size) * (TWO_PI / pts.size)
    return Symbol.from_samples(th, pts, name=name)


def _arc(center, radius, a0, a1, n):
    """Circular arc, a0 to a1 in radians (signed sweep), endpoints included."""
    t = np.linspace(a0, a1, n)
    return center + radius * np.exp(1j * t)


def _seg(z0, z1, n):
    t = np.linspace(0.0, 1.0, n, endpoint=False)
    return z0 + t * (z1 - z0)


def tangent_pair_in_loop():
    """Internally tangent circles of opposite orientation inside a loop.

    Circle |z - i| = 1 clockwise, circle |z - i/2| = 1/2 counterclockwise
    (tangent at 0), wrapped by the clockwise circle |z| = 3, with straight
    corridors joining the laps.  Near 0 the sectors wind -1 on the two sides
    and -2 in the two crescents: a Type II contact.
    """
    start_a = 2j        # top of circle A
    top_b = 1j          # top of circle B
    q = 3.0 * np.exp(1j * (np.pi / 2 - 0.35))

    lap_a = _arc(1j, 1.0, np.pi / 2, np.pi / 2 - TWO_PI, 720)[:-1]
    lap_b = _arc(0.5j, 0.5, np.pi / 2, np.pi / 2 + TWO_PI, 480)[:-1]
    lap_big = _arc(0.0, 3.0, np.angle(q), np.angle(q) - TWO_PI, 900)[:-1]
    pieces = [
        [start_a],
        lap_a[1:],                 # full clockwise lap of A, through 0
        _seg(start_a, top_b, 40),
        lap_b[1:],                 # full counterclockwise lap of B, through 0
        _seg(top_b, q, 60),
        lap_big[1:],               # clockwise outer loop
        _seg(q, start_a, 40),
    ]
    sym = _assemble(pieces, protected_values=(0.0 + 0.0j,), rounds=3,
                    name="tangent-pair-in-loop")
    return sym


def figure_eight_in_loop(center_zero_lobe=True):
    """A figure-eight inside a loop: windings 0 (bounded), 0 (unbounded),
    -1 and -2, with two transversal crossings.

    The right lobe is traversed clockwise with a detour that sweeps the
    outer loop (also clockwise); the left lobe runs counterclockwise, which
    makes it the bounded zero-winding lobe.  With center_zero_lobe the curve
    is translated so 0 sits inside that lobe.
    """
    cr = 1.2 + 0.0j       # right lobe center
    cl = -1.2 + 0.0j      # left lobe center
    r = 1.2
    x = 0.0 + 0.0j        # the eight's pinch point

    e_r = cr + r                                   # east point of right lobe
    q1 = 3.2 * np.exp(-0.45j)
    q2 = 3.2 * np.exp(+0.45j)
    reentry = cr + r * np.exp(-1j * np.pi / 6)     # right lobe, -30 degrees
    leave = cr + r * np.exp(-1j * (np.pi - 0.35))  # right lobe, ~-160 degrees

    pieces = [
        _arc(cl, r, -np.pi / 2, 0.0, 260),                 # up to the pinch
        _seg(x, cr + r * np.exp(2j * np.pi / 3), 40),      # into right lobe at 120 deg
        _arc(cr, r, 2 * np.pi / 3, 0.0, 300),              # right lobe top, cw
        _seg(e_r, 2.6 - 0.8j, 30), _seg(2.6 - 0.8j, q1, 30),       # veer out
        _arc(0.0, 3.2, -0.45, -0.45 - (TWO_PI - 0.9), 900),        # outer loop cw
        _seg(q2, 2.7 + 0.5j, 24), _seg(2.7 + 0.5j, 2.55 + 0.0j, 16),
        _seg(2.55 + 0.0j, 2.4 - 0.35j, 16), _seg(2.4 - 0.35j, reentry, 16),
        _arc(cr, r, -np.pi / 6, -(np.pi - 0.35), 260),     # right lobe bottom, cw
        _seg(leave, 0.25 - 0.25j, 24), _seg(0.25 - 0.25j, x, 24),  # back to pinch
        _arc(cl, r, 0.0, 3 * np.pi / 2, 700),              # left lobe, ccw
    ]
    sym = _assemble(pieces, rounds=4, name="figure-eight-in-loop")
    if center_zero_lobe:
        th = sym.theta
        vals = sym.values - cl
        sym = Symbol.from_samples(th, vals, name="figure-eight-in-loop")
    return sym


def root_cusp(n=2048, extra_levels=6):
    """Samples of (1 - z)^{1/3} / z, the negatively wound Jordan curve with a
    boundary zero at 1.

    The kernel of the associated Toeplitz operator on H^p, 1 < p < 3, is
    spanned by (1 - z)^{-1/3}, so the operator is not embeddable there; the
    decision engine still reports Unknown because the smoothness hypotheses
    fail numerically (the boundary index snaps to -1/3).
    """
    th = set(np.arange(n) * (TWO_PI / n))
    h = TWO_PI / n
    for k in range(1, extra_levels + 1):
        th.add(h / 2 ** k)
        th.add(TWO_PI - h / 2 ** k)
    th = np.array(sorted(th))
    vals = np.cbrt(2.0 * np.sin(th / 2.0)) * np.exp(-1j * (5 * th + np.pi) / 6.0)
    vals[0] = 0.0 + 0.0j
    return Symbol.from_samples(th, vals, name="root-cusp")


def random_trig_polynomial(rng, max_degree=4, scale=1.0):
    """Random trigonometric polynomial with coefficients in a disk."""
    coeffs = {}
    for k in range(-max_degree, max_degree + 1):
        coeffs[k] = scale * (rng.normal() + 1j * rng.normal()) / (1 + abs(k))
    if all(abs(c) < 1e-12 for c in coeffs.values()):
        coeffs[1] = 1.0
    return Symbol.from_coeffs(coeffs)


def random_nonvanishing(rng, max_degree=3):
    """Random trigonometric polynomial with winding 0 about the origin,
    built as a dominant constant plus a small oscillation."""
    coeffs = {0: 4.0 + 0.0j}
    for k in list(range(-max_degree, 0)) + list(range(1, max_degree + 1)):
        coeffs[k] = 0.5 * (rng.normal() + 1j * rng.normal()) / (1 + abs(k)) ** 2
    return Symbol.from_coeffs(coeffs)
