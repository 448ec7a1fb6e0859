"""Embeddability rule engine.

Combines the curve topology, the boundary kernel index, intersection types,
and the p=2 matrix certificates into a single verdict with full provenance:
every rule reports how it fired or why it could not, in a fixed order, and
the first decisive rule wins.  Geometric rules are truncation-free and come
first; numerical-range and Kreiss certificates depend on the truncation
order and only ever fire for p = 2.
"""

from dataclasses import dataclass, field

import numpy as np

from ._errors import (
    BranchMismatch,
    DegenerateOverlap,
    NearCurve,
    OnBoundary,
    ResolutionTooCoarse,
    UnwrapFailure,
)
from . import topology
from .spectral import numerical_range
from .symbols import (
    check_hypotheses,
    discretize,
    evaluate,
    fourier_coefficients,
    toeplitz_truncation,
)

VERDICT_SCHEMA = 1

EMBEDDABLE = "Embeddable"
NOT_EMBEDDABLE = "NotEmbeddable"
UNKNOWN = "Unknown"

_CITATIONS = {
    "R1": "0 in the unbounded component of the curve complement: the Dunford "
          "logarithm exists on a neighborhood of the spectrum, so T embeds in "
          "exp(t log T).",
    "R2": "0 in the spectrum off the curve makes T_F a non-bijective Fredholm "
          "operator; embeddable operators have kernel and cokernel of "
          "dimension 0 or infinity (Eisner, Th. V.1.7).",
    "R3": "analytic symbol: T_phi embeds iff phi does not vanish on the disk; "
          "the zero count equals the winding of the symbol curve about 0 "
          "(argument principle; Chalendar-Lebreton).",
    "R4": "negative boundary index forces 0 < dim ker T_F < infinity "
          "(Ahern-Clark kernel formula), which bars embedding.",
    "R5": "smooth symbol, finitely many self-intersections, constant winding "
          "sign: 0 in the unbounded component of the complement of the "
          "spectrum interior embeds T_F via the multiplier semigroup of the "
          "spectral model (Yakubovich model space).",
    "R6": "under the same hypotheses an embeddable T_F cannot have 0 interior "
          "to the spectrum except at a self-intersection point.",
    "R7": "Jordan symbol curve: embeddable iff 0 is not interior to the "
          "spectrum.",
    "R8": "connected complement of the spectrum interior with 0 off the "
          "intersection set: embeddable iff 0 avoids the interior.",
    "R9": "all intersections simple and no Type I contact on the boundary "
          "between the once- and twice-wound regions: embeddable iff 0 "
          "avoids the spectrum interior.",
    "R10": "0 strictly outside the numerical-range hull of the truncations, "
           "stable under doubling the order: the half-plane functional "
           "calculus embeds T_F on H^2 (sectoriality via the numerical "
           "range; Coburn's lemma gives dense range).",
    "R11": "Wiener/Dini symbol with an open disk inside the unbounded "
           "spectrum-complement component touching 0: Peller's resolvent "
           "bound gives a finite Kreiss constant, hence a sectorial "
           "embedding on H^2 after a Moebius transport.",
    "R12": "figure-eight inside a loop with 0 in the bounded zero-winding "
           "lobe: embeddability hinges on meromorphic extension, a Carleson "
           "condition and gluing-operator bounds that finite sampling cannot "
           "certify; the explicit two-by-two model supplies the candidate "
           "semigroup.",
}

_P2_RULES = {"R10", "R11"}


@dataclass(frozen=True)
class RuleEvidence:
    rule: str
    outcome: str          # embeddable | not_embeddable | unknown_match |
                          # inapplicable | not_decisive | skipped
    reason: str
    citation: str
    scope: str
    witnesses: dict = field(default_factory=dict)

    def as_dict(self):
        return {"rule": self.rule, "outcome": self.outcome,
                "reason": self.reason, "citation": self.citation,
                "scope": self.scope,
                "witnesses": _jsonable(self.witnesses)}


@dataclass(frozen=True)
class Verdict:
    status: str
    fired_rule: str | None
    evidence: tuple
    hypotheses: object
    p: float
    notes: tuple = ()

    def as_dict(self):
        return {
            "verdict_schema": VERDICT_SCHEMA,
            "status": self.status,
            "fired_rule": self.fired_rule,
            "p": self.p,
            "evidence": [e.as_dict() for e in self.evidence],
            "hypotheses": None if self.hypotheses is None else self.hypotheses.as_dict(),
            "notes": list(self.notes),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


@dataclass(eq=False)
class AnalysisBundle:
    """Everything decide() consumes, computed once per symbol."""

    symbol: object
    disc: object
    decomposition: object = None
    intersections: object = None
    hypotheses: object = None
    ahern_clark: object = None
    notes: tuple = ()
    grid: int = 512
    truncation_order: int = 64
    seed: int = 0

    def winding_multiset(self):
        return sorted(c.winding for c in self.decomposition.components)


def analyze(symbol, grid=512, truncation_order=64, step=None, seed=0):
    """Run the topology pipeline once; failures become notes, not exceptions."""
    probe = evaluate(symbol, np.linspace(0, 2 * np.pi, 512, endpoint=False))
    diameter = max(float(np.ptp(probe.real)), float(np.ptp(probe.imag)), 1e-9)
    disc = discretize(symbol, step or diameter / 256.0)

    notes = []
    bundle = AnalysisBundle(symbol=symbol, disc=disc, grid=grid,
                            truncation_order=truncation_order, seed=seed)
    try:
        bundle.decomposition = topology.region_decomposition(disc, grid=grid)
    except ResolutionTooCoarse as exc:
        notes.append(f"region decomposition failed: {exc}")
    try:
        inters = topology.self_intersections(disc)
        if bundle.decomposition is not None:
            inters = topology.classify_intersections(bundle.decomposition, inters)
        bundle.intersections = inters
    except DegenerateOverlap as exc:
        notes.append(f"overlapping arcs: {exc}")
    if bundle.decomposition is not None:
        bundle.hypotheses = check_hypotheses(
            symbol, disc, decomposition=bundle.decomposition,
            intersections=bundle.intersections)
    try:
        bundle.ahern_clark = topology.w_plus(symbol, disc)
    except (UnwrapFailure, BranchMismatch) as exc:
        notes.append(f"boundary index unavailable: {exc}")
    bundle.notes = tuple(notes)
    return bundle


def _on_curve(bundle, z=0.0):
    return bundle.decomposition.on_curve(z)


def _near_intersection(bundle, z=0.0, scale=None):
    if not bundle.intersections or len(bundle.intersections) == 0:
        return False
    step = float(np.median(bundle.disc.chord_lengths))
    tol = scale or 3.0 * step
    return any(abs(complex(z) - p.location) <= tol for p in bundle.intersections)


def _in_interior_spectrum(bundle, z=0.0):
    """0 in int(sigma): nonzero-winding face, or a curve arc between two
    nonzero faces (intersection points excluded)."""
    decomp = bundle.decomposition
    if not _on_curve(bundle, z):
        return decomp.component_at(z).winding != 0
    if _near_intersection(bundle, z):
        return False
    import shapely
    pt = shapely.geometry.Point(complex(z).real, complex(z).imag)
    tol = max(decomp.prox_tol, 1e-12)
    return not any(c.geometry is not None and c.geometry.distance(pt) <= tol
                   for c in decomp.zero_faces())


def _is_analytic(symbol):
    if symbol.kind == "fourier":
        mags = {k: abs(c) for k, c in symbol.coeffs.items()}
        floor = 1e-12 * max(mags.values())
        return all(mags[k] <= floor for k in mags if k < 0)
    coeffs = fourier_coefficients(symbol, symbol.max_frequency)
    floor = 1e-9 * max(abs(c) for c in coeffs.values())
    return all(abs(c) <= floor for k, c in coeffs.items() if k < 0)


def _wiener_dini_confidence(symbol):
    """(wiener, dini) confidences for the regularity class proxies."""
    if symbol.kind == "fourier":
        return 1.0, 1.0
    kmax = symbol.max_frequency
    coeffs = fourier_coefficients(symbol, kmax)
    full = sum(abs(c) for c in coeffs.values())
    half = sum(abs(c) for k, c in coeffs.items() if abs(k) <= kmax // 2)
    wiener = 1.0 if full > 0 and (full - half) <= 1e-3 * full else 0.0

    th = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    vals = evaluate(symbol, th)
    scale = float(np.max(np.abs(vals))) or 1.0
    ratios = []
    prev = None
    for j in range(1, 16):
        t = 2.0 ** -j
        shift = evaluate(symbol, th + t)
        omega = float(np.max(np.abs(shift - vals)))
        if prev is not None and prev > 1e-12 * scale:
            ratios.append(omega / prev)
        prev = omega
    dini = 1.0 if ratios and float(np.mean(ratios[-6:])) < 0.9 else 0.0
    return wiener, dini


def _touching_disk_exists(bundle, directions=128):
    """Largest-inscribed-disk search: an open disk in the unbounded component
    of the spectrum complement with 0 on its boundary."""
    disc = bundle.disc
    decomp = bundle.decomposition
    diameter = disc.diameter
    rho_min = 1e-3 * diameter
    best = 0.0
    best_dir = None
    for k in range(directions):
        u = np.exp(2j * np.pi * k / directions)
        lo, hi = 0.0, diameter
        # grow while the disk of radius rho about rho*u stays off the curve
        feasible = 0.0
        for _ in range(40):
            mid = (lo + hi) / 2.0
            center = mid * u
            if disc.distance_to(center) >= mid * (1 - 1e-9):
                comp = decomp.component_at(center)
                if comp is not None and not comp.bounded and comp.winding == 0:
                    feasible = mid
                    lo = mid
                else:
                    hi = mid
            else:
                hi = mid
        if feasible > best:
            best, best_dir = feasible, u
    if best >= rho_min:
        return {"radius": best, "center": complex(best * best_dir)}
    return None


def _fig8_shape(bundle):
    decomp = bundle.decomposition
    winds = sorted(abs(c.winding) for c in decomp.components)
    if winds != [0, 0, 1, 2]:
        return None
    zero_bounded = [c for c in decomp.components if c.winding == 0 and c.bounded]
    if len(zero_bounded) != 1:
        return None
    return zero_bounded[0]


def decide(symbol, bundle=None, p=2.0, fig8_evidence=None, **analyze_kwargs):
    """Run the rule table in order; the first decisive rule fixes the status.

    Inapplicable rules contribute evidence entries with the failed
    precondition; nothing raises.  Rules after the decisive one are recorded
    as skipped so reports stay deterministic and cheap.
    """
    if not 1.0 < p < np.inf:
        raise ValueError("p must lie in (1, infinity)")
    if bundle is None:
        bundle = analyze(symbol, **analyze_kwargs)

    evidence = []
    status = None
    fired = None
    notes = list(bundle.notes)

    def scope(rule):
        return "p=2" if rule in _P2_RULES else "all p"

    def record(rule, outcome, reason, **witnesses):
        evidence.append(RuleEvidence(rule=rule, outcome=outcome, reason=reason,
                                     citation=_CITATIONS[rule], scope=scope(rule),
                                     witnesses=witnesses))

    def decisive(rule, outcome, reason, **witnesses):
        nonlocal status, fired
        record(rule, outcome, reason, **witnesses)
        status = EMBEDDABLE if outcome == "embeddable" else NOT_EMBEDDABLE
        fired = rule

    decomp = bundle.decomposition
    if decomp is None:
        for rule in _CITATIONS:
            record(rule, "inapplicable", "no region decomposition available")
        return Verdict(status=UNKNOWN, fired_rule=None, evidence=tuple(evidence),
                       hypotheses=bundle.hypotheses, p=p, notes=tuple(notes))

    hyp = bundle.hypotheses
    inters = bundle.intersections
    ac = bundle.ahern_clark
    zero_on_curve = _on_curve(bundle)
    comp0 = None if zero_on_curve else decomp.component_at(0.0)
    h123 = hyp is not None and hyp.h1 and hyp.h2 and hyp.h3bis

    rules_done = set()

    def skipped(rule):
        record(rule, "skipped", f"decided earlier by {fired}")

    # R1: 0 in the unbounded component of the curve complement.
    if zero_on_curve:
        record("R1", "inapplicable", "0 lies on the curve")
    elif not comp0.bounded:
        decisive("R1", "embeddable", "0 connects to infinity off the curve",
                 winding_at_0=comp0.winding)
    else:
        record("R1", "not_decisive",
               "0 sits in a bounded component of the curve complement",
               winding_at_0=comp0.winding)
    rules_done.add("R1")

    # R2: 0 in the spectrum but off the curve.
    if status is None:
        if zero_on_curve:
            record("R2", "inapplicable", "0 lies on the curve")
        elif comp0.winding != 0:
            decisive("R2", "not_embeddable",
                     "0 is a Fredholm point of nonzero index",
                     winding_at_0=comp0.winding,
                     kernel_dim=max(0, -comp0.winding))
        else:
            record("R2", "not_decisive", "0 is not in the spectrum off the curve")
    else:
        skipped("R2")

    # R3: analytic symbol not vanishing on the disk.
    if status is None:
        if zero_on_curve:
            record("R3", "inapplicable", "0 lies on the curve")
        elif not _is_analytic(symbol):
            record("R3", "inapplicable", "symbol has negative-frequency content")
        elif comp0.winding == 0:
            decisive("R3", "embeddable",
                     "analytic symbol with zero winding about 0 has no zeros "
                     "in the disk", winding_at_0=0)
        else:
            record("R3", "not_decisive",
                   "analytic symbol but winding at 0 is nonzero",
                   winding_at_0=comp0.winding)
    else:
        skipped("R3")

    # R4: negative boundary index.
    if status is None:
        if ac is None:
            record("R4", "inapplicable", "boundary index unavailable")
        elif hyp is None or not hyp.h1:
            record("R4", "inapplicable",
                   "differentiability with nonvanishing derivative not certified",
                   index=float(ac.float_value))
        elif not ac.validity:
            record("R4", "inapplicable",
                   "index did not certify (non-integer snap or derivative floor)",
                   index=float(ac.float_value), notes=list(ac.notes))
        elif ac.float_value < 0:
            decisive("R4", "not_embeddable",
                     "boundary index is negative, kernel is finite nonzero",
                     index=float(ac.float_value),
                     kernel_dim=ac.kernel_dimension)
        else:
            record("R4", "not_decisive", "boundary index is nonnegative",
                   index=float(ac.float_value))
    else:
        skipped("R4")

    # R5: sufficient condition through the spectral model.
    if status is None:
        if not h123:
            record("R5", "inapplicable", "H1/H2/constant-sign windings not all certified")
        else:
            try:
                reach = topology.in_unbounded_complement(
                    decomp, 0.0, "complement_of_interior_spectrum",
                    intersections=inters)
            except OnBoundary:
                reach = False
            if reach:
                decisive("R5", "embeddable",
                         "0 joins infinity in the complement of the spectrum "
                         "interior")
            else:
                record("R5", "not_decisive",
                       "0 does not join infinity in the complement of the "
                       "spectrum interior")
    else:
        skipped("R5")

    # R6: necessary condition, 0 interior to the spectrum off intersections.
    if status is None:
        if not h123:
            record("R6", "inapplicable", "H1/H2/constant-sign windings not all certified")
        elif _in_interior_spectrum(bundle) and not _near_intersection(bundle):
            decisive("R6", "not_embeddable",
                     "0 lies in the interior of the spectrum away from the "
                     "intersection set")
        else:
            record("R6", "not_decisive",
                   "0 is not interior to the spectrum away from intersections")
    else:
        skipped("R6")

    # R7: Jordan curve dichotomy.
    if status is None:
        if inters is None:
            record("R7", "inapplicable", "intersection analysis unavailable")
        elif len(inters) != 0:
            record("R7", "inapplicable", "curve self-intersects")
        elif hyp is None or not hyp.h1:
            record("R7", "inapplicable", "smoothness hypothesis not certified")
        else:
            interior = _in_interior_spectrum(bundle)
            if interior:
                decisive("R7", "not_embeddable",
                         "Jordan curve with 0 interior to the spectrum")
            else:
                decisive("R7", "embeddable",
                         "Jordan curve with 0 off the spectrum interior")
    else:
        skipped("R7")

    # R8: connected complement of the interior, 0 off the intersection set.
    if status is None:
        connected = decomp.connected_complement_of_interior(inters)
        if not h123:
            record("R8", "inapplicable", "H1/H2/constant-sign windings not all certified")
        elif not connected:
            record("R8", "inapplicable",
                   "complement of the spectrum interior is disconnected")
        elif _near_intersection(bundle):
            record("R8", "inapplicable", "0 lies on the intersection set")
        else:
            interior = _in_interior_spectrum(bundle)
            if interior:
                decisive("R8", "not_embeddable",
                         "0 interior to the spectrum under the dichotomy")
            else:
                decisive("R8", "embeddable",
                         "0 avoids the spectrum interior under the dichotomy")
    else:
        skipped("R8")

    # R9: simple intersections, no Type I between once- and twice-wound parts.
    if status is None:
        if inters is None:
            record("R9", "inapplicable", "intersection analysis unavailable")
        elif not h123:
            record("R9", "inapplicable", "H1/H2/constant-sign windings not all certified")
        elif any(len(pt.params) != 2 for pt in inters):
            record("R9", "inapplicable", "a non-simple intersection is present")
        elif any(pt.classification == "TypeI"
                 and max((abs(s) for s in pt.sector_windings if s is not None),
                         default=0) == 2
                 for pt in inters):
            record("R9", "inapplicable",
                   "Type I contact on the once/twice-wound boundary")
        elif any(pt.classification == "Unclassified" for pt in inters):
            record("R9", "inapplicable", "an intersection stayed unclassified")
        elif not decomp.connected_complement_of_interior(inters):
            record("R9", "inapplicable",
                   "complement of the spectrum interior is disconnected")
        elif _near_intersection(bundle):
            record("R9", "inapplicable", "0 lies on the intersection set")
        else:
            classes = [pt.classification for pt in inters]
            if _in_interior_spectrum(bundle):
                decisive("R9", "not_embeddable",
                         "0 interior to the spectrum with benign intersections",
                         intersection_types=classes)
            else:
                decisive("R9", "embeddable",
                         "0 avoids the spectrum interior with benign intersections",
                         intersection_types=classes)
    else:
        skipped("R9")

    # R10 (p=2): numerical range certificate on truncations.
    if status is None:
        if p != 2.0:
            record("R10", "inapplicable", f"rule requires p=2, got p={p}")
        else:
            n = bundle.truncation_order
            t_small = toeplitz_truncation(symbol, n).matrix
            t_big = toeplitz_truncation(symbol, 2 * n).matrix
            margin = 1e-9 * max(np.linalg.norm(t_big, 2), 1.0)
            s_small = float(np.min(numerical_range(t_small, 360).support))
            s_big = float(np.min(numerical_range(t_big, 360).support))
            outside = s_small < -margin and s_big < -margin
            stable = abs(s_big - s_small) <= 0.25 * abs(s_small) if outside else False
            if outside and stable:
                decisive("R10", "embeddable",
                         "0 stays strictly outside the truncation numerical "
                         "ranges under order doubling",
                         margin_n=-s_small, margin_2n=-s_big, n=n)
            else:
                record("R10", "not_decisive",
                       "numerical-range margin absent or unstable",
                       margin_n=-s_small, margin_2n=-s_big, n=n)
    else:
        skipped("R10")

    # R11 (p=2): Kreiss/Peller disk certificate.
    if status is None:
        if p != 2.0:
            record("R11", "inapplicable", f"rule requires p=2, got p={p}")
        else:
            wiener, dini = _wiener_dini_confidence(symbol)
            if max(wiener, dini) < 0.9:
                record("R11", "inapplicable",
                       "Wiener/Dini regularity proxy below confidence",
                       wiener=wiener, dini=dini)
            else:
                found = _touching_disk_exists(bundle)
                if found:
                    decisive("R11", "embeddable",
                             "open disk in the unbounded spectrum-complement "
                             "component touches 0",
                             disk_radius=found["radius"],
                             disk_center=found["center"],
                             wiener=wiener, dini=dini)
                else:
                    record("R11", "not_decisive",
                           "no admissible touching disk found",
                           wiener=wiener, dini=dini)
    else:
        skipped("R11")

    # R12: figure-eight inside a loop, 0 in the bounded zero-winding lobe.
    if status is None:
        lobe = _fig8_shape(bundle)
        if lobe is None:
            record("R12", "inapplicable", "curve is not a figure-eight in a loop")
        elif zero_on_curve or not lobe.contains(0.0):
            record("R12", "inapplicable",
                   "0 is not inside the bounded zero-winding lobe")
        else:
            witnesses = {"lobe_area": lobe.area}
            if fig8_evidence is not None:
                witnesses["model_identities"] = fig8_evidence
            record("R12", "unknown_match",
                   "decision requires extension/Carleson/boundedness data "
                   "beyond finite sampling", **witnesses)
            fired = "R12"
    else:
        skipped("R12")

    if status is None:
        status = UNKNOWN
        if fired != "R12":
            fired = None
    return Verdict(status=status, fired_rule=fired, evidence=tuple(evidence),
                   hypotheses=hyp, p=p, notes=tuple(notes))


def explain(verdict):
    """Deterministic, human-readable report: one line per rule, the fired rule
    highlighted, numeric witnesses inline."""
    lines = [f"status: {verdict.status}"
             + (f"  (rule {verdict.fired_rule})" if verdict.fired_rule else ""),
             f"p = {verdict.p}"]
    for ev in verdict.evidence:
        mark = ">>" if ev.rule == verdict.fired_rule else "  "
        wit = ""
        if ev.witnesses:
            parts = [f"{k}={_fmt(v)}" for k, v in sorted(ev.witnesses.items())]
            wit = "  [" + ", ".join(parts) + "]"
        lines.append(f"{mark} {ev.rule} [{ev.scope}] {ev.outcome}: {ev.reason}{wit}")
        lines.append(f"     cite: {ev.citation}")
    if verdict.hypotheses is not None:
        h = verdict.hypotheses
        lines.append(f"hypotheses: H1={h.h1} H2={h.h2} H3={h.h3} H3bis={h.h3bis} "
                     f"min|F'|={h.min_abs_derivative:.3e} "
                     f"windings={list(h.windings)}")
    for note in verdict.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, complex):
        return f"{v.real:.6g}{v.imag:+.6g}i"
    return str(v)
