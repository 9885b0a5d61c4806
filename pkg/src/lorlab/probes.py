"""Desk-scale numerical probes of the three completeness conditions.

Finite compactness is probed through the region

    K1 = { x : p << q <= x, T(p, x) <= B },

traced slice by slice in t; the probe holds when the region's time extent
terminates strictly inside the domain (bounded) at a slice the region
actually attains (closed in domain), which is compactness in the 1+1 chart
by Heine-Borel.  The divergence condition is probed along an inextendible
causal geodesic from q: for each supplied bound B the probe reports the
first affine parameter where T(p, gamma(s)) exceeds B, or the supremum of
T observed when the geodesic dies first.  Timelike Cauchy completeness is
probed on a supplied chronological sequence with vanishing forward gaps.

No finite computation can certify a universally quantified condition, so a
passing verdict is always "holds_on_probe"; failing verdicts carry a
replayable numeric witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .causality import causally_related, cone_time, lorentzian_distance
from .errors import NotCausal, NotChronological, PremiseViolated
from .geodesics import _Quadrature
from .profiles import (
    EPS_NULL,
    MetricProfile,
    SpacetimePoint,
    TangentVector,
    classify_vector,
)
from .quadrature import bracketed_root

HOLDS = "holds_on_probe"
FAILS = "fails_with_witness"


@dataclass
class ProbeReport:
    condition: str  # "finite_compactness" | "timelike_cauchy" | "condition_a"
    verdict: str    # HOLDS | FAILS
    witness: dict

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


@dataclass
class K1Region:
    """Traced slices of {T(p, .) <= B} intersected with the future of q.

    slices rows are (t, x_keep_lo, x_keep_hi, min_T) for the part of the
    cone slice that stays under the bound; boundary collects sampled points
    of the level set T = B together with the cone edges.
    """

    p: SpacetimePoint
    q: SpacetimePoint
    B: float
    slices: np.ndarray
    boundary: list[tuple[float, float]]
    bounded: bool
    closed_in_domain: bool


@dataclass
class ImplicationReport:
    finite_compactness: ProbeReport
    timelike_cauchy: ProbeReport
    condition_a: ProbeReport
    consistent: bool
    violated: list[str]

    @property
    def reports(self):
        return (self.finite_compactness, self.timelike_cauchy, self.condition_a)


@dataclass
class ProbeConfig:
    """Inputs shared by the three probes of one profile."""

    p: SpacetimePoint
    q: SpacetimePoint
    fc_bound: float = 5.0
    ca_direction: TangentVector = field(default_factory=lambda: TangentVector(1.0, 0.0))
    ca_bounds: tuple[float, ...] = (10.0, 100.0)
    cauchy_direction: TangentVector = field(
        default_factory=lambda: TangentVector(1.0, 0.0)
    )
    cauchy_span: float = 1.0
    cauchy_len: int = 30


def _require_chronological(profile, p, q, eps_null):
    verdict = causally_related(profile, p, q, eps_null=eps_null)
    if not verdict.chronological:
        raise NotChronological(
            f"probe requires p << q; pair has relation {verdict.relation!r} "
            f"(margin {verdict.margin!r})"
        )


def _tval(profile, p, pt, eps_null):
    return lorentzian_distance(
        profile, p, pt, with_path=False, eps_null=eps_null
    ).value


# -- finite compactness --------------------------------------------------------


def _slice_scan(profile, p, q, B, t, nx, eps_null):
    """(min_T, keep_lo, keep_hi, xs, Ts) on the cone slice of q at time t."""
    half = cone_time(profile, t) - cone_time(profile, q.t)
    xs = np.linspace(q.x - half, q.x + half, nx) if half > 0.0 else np.array([q.x])
    Ts = np.array([_tval(profile, p, SpacetimePoint(t, float(x)), eps_null) for x in xs])
    keep = Ts <= B
    if keep.any():
        lo = float(xs[keep][0])
        hi = float(xs[keep][-1])
    else:
        lo = hi = math.nan
    return float(Ts.min()), lo, hi, xs, Ts


def k1_slices(profile, p, q, B, ts, nx=65, eps_null=EPS_NULL):
    """Keep-interval rows (t, x_keep_lo, x_keep_hi, min_T) for given times."""
    rows = []
    for t in ts:
        min_t, lo, hi, _, _ = _slice_scan(profile, p, q, B, float(t), nx, eps_null)
        rows.append((float(t), lo, hi, min_t))
    return np.asarray(rows, dtype=float)


def _level_crossings(profile, p, B, t, xs, Ts, eps_null):
    """x values where T(p, (t, .)) crosses the bound B between samples."""
    out = []
    inside = Ts <= B
    for i in range(len(xs) - 1):
        if inside[i] == inside[i + 1]:
            continue
        root = bracketed_root(
            lambda x: _tval(profile, p, SpacetimePoint(t, float(x)), eps_null) - B,
            float(xs[i]),
            float(xs[i + 1]),
            glo=float(Ts[i] - B),
            ghi=float(Ts[i + 1] - B),
            xtol=1e-9,
        )
        out.append((t, float(root)))
    return out


def probe_finite_compactness(
    profile: MetricProfile,
    p: SpacetimePoint,
    q: SpacetimePoint,
    B: float,
    nx: int = 65,
    n_trace: int = 48,
    eps_null: float = EPS_NULL,
) -> tuple[ProbeReport, K1Region]:
    """Trace K1 = {x : p << q <= x, T(p, x) <= B} and judge its compactness."""
    if B <= 0.0:
        raise ValueError("bound B must be positive")
    _require_chronological(profile, p, q, eps_null)
    base_witness = {"p": (p.t, p.x), "q": (q.t, q.x), "bound": float(B)}

    def slice_min(t):
        return _slice_scan(profile, p, q, B, t, nx, eps_null)[0]

    if _tval(profile, p, q, eps_null) > B:
        region = K1Region(p, q, B, np.empty((0, 4)), [], True, True)
        report = ProbeReport(
            "finite_compactness", HOLDS, dict(base_witness, empty=True, t_top=q.t)
        )
        return report, region

    # march the slice level upward until the region empties or the domain ends
    t_top = None
    escaped = None
    if math.isfinite(profile.t_max):
        span = profile.t_max - q.t
        t_prev = q.t
        for k in range(1, 41):
            t_k = profile.t_max - span * 2.0 ** (-k)
            if t_k <= t_prev:
                continue
            if slice_min(t_k) > B:
                t_top = bracketed_root(
                    lambda t: slice_min(t) - B, t_prev, t_k, xtol=1e-9
                )
                break
            t_prev = t_k
        if t_top is None:
            # the region runs into the missing boundary: record the escape
            # along the midline of the surviving part of each slice
            pts = []
            for k in range(1, 33):
                t_k = profile.t_max - span * 2.0 ** (-k)
                if t_k <= q.t:
                    continue
                _, lo, hi, _, _ = _slice_scan(profile, p, q, B, t_k, nx, eps_null)
                if math.isnan(lo):
                    continue
                x_mid = 0.5 * (lo + hi)
                pts.append(
                    (t_k, x_mid,
                     _tval(profile, p, SpacetimePoint(t_k, x_mid), eps_null))
                )
            escaped = pts
    else:
        step = max(1e-2, 1e-2 * abs(B))
        t_prev = q.t
        for _ in range(70):
            t_k = t_prev + step
            if slice_min(t_k) > B:
                t_top = bracketed_root(
                    lambda t: slice_min(t) - B, t_prev, t_k, xtol=1e-9
                )
                break
            t_prev = t_k
            step *= 2.0
        if t_top is None:
            pts = []
            for k in range(24):
                t_k = q.t + 2.0 ** k
                _, lo, hi, _, _ = _slice_scan(profile, p, q, B, t_k, nx, eps_null)
                if math.isnan(lo):
                    continue
                x_mid = 0.5 * (lo + hi)
                pts.append(
                    (t_k, x_mid,
                     _tval(profile, p, SpacetimePoint(t_k, x_mid), eps_null))
                )
            escaped = pts

    if t_top is not None:
        ts = np.linspace(q.t, t_top, n_trace)
        slices = k1_slices(profile, p, q, B, ts, nx=nx, eps_null=eps_null)
        boundary = []
        for t in ts:
            _, lo, hi, xs, Ts = _slice_scan(profile, p, q, B, float(t), nx, eps_null)
            boundary.extend(_level_crossings(profile, p, B, float(t), xs, Ts, eps_null))
            if not math.isnan(lo):
                boundary.append((float(t), float(xs[0])))
                boundary.append((float(t), float(xs[-1])))
        region = K1Region(p, q, B, slices, boundary, True, True)
        report = ProbeReport(
            "finite_compactness", HOLDS, dict(base_witness, t_top=float(t_top))
        )
        return report, region

    ts = [row[0] for row in escaped]
    slices = (
        k1_slices(profile, p, q, B, ts, nx=nx, eps_null=eps_null)
        if ts
        else np.empty((0, 4))
    )
    region = K1Region(p, q, B, slices, [], False, False)
    report = ProbeReport(
        "finite_compactness",
        FAILS,
        dict(
            base_witness,
            escaping_points=[(float(t), float(x)) for t, x, _ in escaped],
            escaping_T=[float(T) for _, _, T in escaped],
            t_boundary=float(profile.t_max),
        ),
    )
    return report, region


# -- condition A ----------------------------------------------------------------


def probe_condition_a(
    profile: MetricProfile,
    p: SpacetimePoint,
    q: SpacetimePoint,
    v: TangentVector,
    B_list,
    eps_null: float = EPS_NULL,
) -> ProbeReport:
    """Does T(p, gamma(s)) pass every supplied bound along the geodesic from q?

    The geodesic is extended toward its affine bound c; for each B the
    report records the first parameter with T > B, or the supremum of T
    observed when the geodesic dies with T capped below B.
    """
    _require_chronological(profile, p, q, eps_null)
    char = classify_vector(profile, q, v, eps_null=eps_null)
    if not char.is_causal:
        raise NotCausal(f"direction {v} is {char.kind}, need timelike or null")
    if v.tau0 <= 0.0:
        raise NotCausal("probe extends future-directed geodesics (tau0 > 0)")
    quad = _Quadrature(profile, q, v)
    bound = quad.bound()

    def T_at(s):
        if s == 0.0:
            return _tval(profile, p, q, eps_null)
        return _tval(profile, p, quad.point_at(s), eps_null)

    bounds = sorted(float(B) for B in B_list)
    crossings = {}
    sup_T = None
    tail = []
    if math.isfinite(bound):
        s_hi = None
        T_hi = -math.inf
        for k in range(1, 46):
            s_k = bound * (1.0 - 2.0 ** (-k))
            if s_k <= 0.0:
                continue
            pt = quad.point_at(s_k)
            T_hi = _tval(profile, p, pt, eps_null)
            s_hi = s_k
            if k > 40:
                tail.append((s_k, pt.t, pt.x, T_hi))
        sup_T = T_hi
        for B in bounds:
            if T_at(0.0) > B:
                crossings[B] = 0.0
            elif T_hi > B:
                crossings[B] = float(
                    bracketed_root(lambda s: T_at(s) - B, 0.0, s_hi, xtol=1e-10)
                )
            else:
                crossings[B] = None
    else:
        for B in bounds:
            if T_at(0.0) > B:
                crossings[B] = 0.0
                continue
            s_lo, s_hi = 0.0, 1.0
            found = False
            for _ in range(90):
                if T_at(s_hi) > B:
                    found = True
                    break
                s_lo, s_hi = s_hi, 2.0 * s_hi
            if not found:
                crossings[B] = None
                pt = quad.point_at(s_lo)
                sup_T = T_at(s_lo)
                tail.append((s_lo, pt.t, pt.x, sup_T))
                continue
            crossings[B] = float(
                bracketed_root(lambda s: T_at(s) - B, s_lo, s_hi, xtol=1e-10)
            )

    witness = {
        "p": (p.t, p.x),
        "q": (q.t, q.x),
        "v": (v.tau0, v.xi0),
        "crossings": crossings,
        "max_param": float(bound),
    }
    missed = [B for B, s in crossings.items() if s is None]
    if missed:
        witness["bounded_by"] = float(sup_T)
        witness["missed_bounds"] = missed
        witness["tail"] = tail
        return ProbeReport("condition_a", FAILS, witness)
    return ProbeReport("condition_a", HOLDS, witness)


# -- timelike Cauchy completeness -------------------------------------------------


def probe_timelike_cauchy(
    profile: MetricProfile,
    seq,
    B_seq,
    tol: float = 1e-6,
    eps_null: float = EPS_NULL,
) -> ProbeReport:
    """Judge convergence of a chronological sequence with vanishing gaps.

    The premises (x_n << x_{n+1}, T(x_n, x_{n+m}) <= B_n, B_n non-increasing)
    are verified first; violating them raises PremiseViolated, which flags a
    malformed probe rather than a property of the spacetime.
    """
    pts = [s if isinstance(s, SpacetimePoint) else SpacetimePoint(*s) for s in seq]
    bounds = [float(b) for b in B_seq]
    if len(pts) < 3:
        raise ValueError("need at least 3 sequence points")
    if len(bounds) != len(pts):
        raise ValueError("need one bound per sequence point")
    for i in range(len(pts) - 1):
        if not causally_related(profile, pts[i], pts[i + 1], eps_null).chronological:
            raise PremiseViolated(i, f"x_{i} << x_{i + 1} fails")
        if bounds[i + 1] > bounds[i]:
            raise PremiseViolated(i, f"B_{i + 1} > B_{i}: gap bounds must shrink")
    for i in range(len(pts) - 1):
        for j in range(i + 1, len(pts)):
            gap = _tval(profile, pts[i], pts[j], eps_null)
            if gap > bounds[i] + 1e-9:
                raise PremiseViolated(
                    i, f"T(x_{i}, x_{j}) = {gap!r} exceeds B_{i} = {bounds[i]!r}"
                )

    k = max(3, len(pts) // 4)
    tail = pts[-k:]
    diam = 0.0
    for i in range(len(tail)):
        for j in range(i + 1, len(tail)):
            diam = max(
                diam,
                math.hypot(tail[i].t - tail[j].t, tail[i].x - tail[j].x),
            )
    limit = pts[-1]
    bdist = min(limit.t - profile.t_min, profile.t_max - limit.t)
    margin = max(100.0 * diam, 1e-9)
    tail_payload = [(pt.t, pt.x) for pt in tail]
    if bdist <= margin:
        boundary_t = profile.t_max if (profile.t_max - limit.t) <= margin else profile.t_min
        return ProbeReport(
            "timelike_cauchy",
            FAILS,
            {
                "tail": tail_payload,
                "boundary_t": float(boundary_t),
                "boundary_distance": float(bdist),
                "tail_diameter": float(diam),
            },
        )
    if diam <= tol:
        return ProbeReport(
            "timelike_cauchy",
            HOLDS,
            {"limit": (limit.t, limit.x), "tail_diameter": float(diam)},
        )
    return ProbeReport(
        "timelike_cauchy",
        FAILS,
        {"tail": tail_payload, "tail_diameter": float(diam), "non_convergent": True},
    )


def make_cauchy_sequence(
    profile: MetricProfile,
    p: SpacetimePoint,
    v: TangentVector,
    span: float = 1.0,
    n: int = 30,
    eps_null: float = EPS_NULL,
):
    """Chronological sequence along a timelike geodesic with geometric gaps.

    Points are gamma(s_k) at s_k = cap (1 - 2^-k) where cap is span clipped
    to the geodesic's affine bound, with gap bounds B_k = 2 cap 2^-k, so the
    premises of the Cauchy probe hold by construction.
    """
    char = classify_vector(profile, p, v, eps_null=eps_null)
    if char.kind != "timelike" or v.tau0 <= 0.0:
        raise NotCausal("Cauchy sequences run along future timelike geodesics")
    quad = _Quadrature(profile, p, v)
    cap = min(float(span), quad.bound())
    pts = []
    bounds = []
    for k in range(1, n + 1):
        s_k = cap * (1.0 - 2.0 ** (-k))
        pts.append(quad.point_at(s_k))
        bounds.append(2.0 * cap * 2.0 ** (-k))
    return pts, bounds


# -- combined report ---------------------------------------------------------------


def implication_report(profile: MetricProfile, config: ProbeConfig) -> ImplicationReport:
    """Run all three probes and check the verdict pattern for consistency.

    For this metric family the three conditions stand or fall together, so
    any mixed verdict pattern indicates a numerical fault and is flagged
    with the implication it breaks.
    """
    fc, _ = probe_finite_compactness(profile, config.p, config.q, config.fc_bound)
    ca = probe_condition_a(
        profile, config.p, config.q, config.ca_direction, config.ca_bounds
    )
    seq, bounds = make_cauchy_sequence(
        profile,
        config.p,
        config.cauchy_direction,
        span=config.cauchy_span,
        n=config.cauchy_len,
    )
    tcc = probe_timelike_cauchy(profile, seq, bounds)

    verdicts = (fc.holds, tcc.holds, ca.holds)
    violated = []
    if fc.holds and not tcc.holds:
        violated.append("finite_compactness => timelike_cauchy")
    if tcc.holds and not ca.holds:
        violated.append("timelike_cauchy => condition_a")
    if fc.holds and not ca.holds:
        violated.append("finite_compactness => condition_a")
    mixed = len(set(verdicts)) != 1
    if mixed and not violated:
        violated.append("three-way equivalence (converse direction)")
    return ImplicationReport(fc, tcc, ca, not mixed, violated)


def replay_witness(
    profile: MetricProfile, report: ProbeReport, eps_null: float = EPS_NULL
) -> float:
    """Re-evaluate a failing report's witness through the public operations.

    Returns the largest inconsistency between the recorded claims and a
    fresh evaluation; a witness is sound when this stays within quadrature
    noise (well under 1e-7).
    """
    if report.holds:
        return 0.0
    w = report.witness
    worst = 0.0
    if report.condition == "finite_compactness":
        p = SpacetimePoint(*w["p"])
        q = SpacetimePoint(*w["q"])
        B = w["bound"]
        for (t, x), T_claim in zip(w["escaping_points"], w["escaping_T"]):
            pt = SpacetimePoint(t, x)
            if not causally_related(profile, q, pt, eps_null).causal:
                worst = max(worst, 1.0)
            T_new = _tval(profile, p, pt, eps_null)
            worst = max(worst, abs(T_new - T_claim))
            worst = max(worst, T_new - B)  # every witness point stays under B
        ts = [t for t, _ in w["escaping_points"]]
        # the escape must approach the recorded boundary monotonically
        gaps = [abs(w["t_boundary"] - t) for t in ts]
        if any(g2 >= g1 for g1, g2 in zip(gaps[:-1], gaps[1:])):
            worst = max(worst, 1.0)
    elif report.condition == "condition_a":
        p = SpacetimePoint(*w["p"])
        for s, t, x, T_claim in w["tail"]:
            T_new = _tval(profile, p, SpacetimePoint(t, x), eps_null)
            worst = max(worst, abs(T_new - T_claim))
            worst = max(worst, T_new - min(w["missed_bounds"]))
    elif report.condition == "timelike_cauchy":
        if "boundary_distance" in w:
            t_last = w["tail"][-1][0]
            bdist_new = abs(w["boundary_t"] - t_last)
            worst = max(worst, abs(bdist_new - w["boundary_distance"]))
    return worst
