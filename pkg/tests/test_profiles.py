import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lorlab import (
    CATALOG_NAMES,
    DomainExceeded,
    InvalidProfile,
    MetricProfile,
    SpacetimePoint,
    TangentVector,
    christoffel,
    classify_vector,
    const,
    eval_profile,
    exponential,
    format_profile,
    get_profile,
    linear,
    parse_profiles,
    power,
)

P = SpacetimePoint
V = TangentVector


# -- eval_profile -------------------------------------------------------------


def test_eval_minkowski_constant():
    assert eval_profile(get_profile("minkowski"), 0.7) == (1.0, 1.0, 0.0, 0.0)


def test_eval_exp2t_at_zero():
    # d/dt e^{2t} = 2 e^{2t}, so (a, b, a', b') = (1, 1, 2, 0) at t = 0
    a, b, da, db = eval_profile(get_profile("exp2t"), 0.0)
    assert (a, b, db) == (1.0, 1.0, 0.0)
    assert da == pytest.approx(2.0, abs=1e-15)


def test_eval_c1power_derivative_vanishes_at_kink():
    # one-sided limits of (3/2)|t|^{1/2} agree (= 0) at the center
    a, b, da, db = eval_profile(get_profile("c1power"), 0.0)
    assert (a, b, da, db) == (1.0, 1.0, 0.0, 0.0)


def test_eval_outside_domain():
    with pytest.raises(DomainExceeded):
        eval_profile(get_profile("strip01"), 1.0)
    with pytest.raises(DomainExceeded):
        eval_profile(get_profile("strip01"), -0.2)


def test_power_exponent_must_exceed_one():
    with pytest.raises(InvalidProfile):
        MetricProfile("bad", (const(1.0), power(1.0, 0.0, 1.0)), (const(1.0),))
    with pytest.raises(InvalidProfile):
        MetricProfile("bad", (const(1.0), power(1.0, 0.0, 0.5)), (const(1.0),))


def test_floor_violation_rejected():
    # a(t) = t dips under alpha = 0.5 inside the window
    with pytest.raises(InvalidProfile):
        MetricProfile("bad", (linear(1.0),), (const(1.0),), t_min=0.0, t_max=2.0,
                      alpha=0.5)


def test_derivatives_match_finite_differences():
    rng = np.random.default_rng(42)
    h = 1e-6
    for name in CATALOG_NAMES:
        prof = get_profile(name)
        lo = max(prof.t_min, -10.0) + 0.01
        hi = min(prof.t_max, 10.0) - 0.01
        for t in rng.uniform(lo, hi, 100):
            a_p, b_p, _, _ = prof.eval(t + h)
            a_m, b_m, _, _ = prof.eval(t - h)
            _, _, da, db = prof.eval(t)
            assert abs((a_p - a_m) / (2 * h) - da) < 1e-6 * (1.0 + abs(da))
            assert abs((b_p - b_m) / (2 * h) - db) < 1e-6 * (1.0 + abs(db))


def test_eval_many_matches_scalar():
    prof = get_profile("c1power")
    ts = np.linspace(-3.0, 3.0, 37)
    a, b, da, db = prof.eval_many(ts)
    for i, t in enumerate(ts):
        sa, sb, sda, sdb = prof.eval(float(t))
        assert (a[i], b[i], da[i], db[i]) == (sa, sb, sda, sdb)


# -- christoffel ----------------------------------------------------------------


def test_christoffel_flat_vanishes():
    for t in (-2.0, 0.0, 0.7):
        tri = christoffel(get_profile("minkowski"), t)
        assert (tri.g000, tri.g011, tri.g101) == (0.0, 0.0, 0.0)


def test_christoffel_exp_time_warp():
    # a = e^{2t}: a'/2a = 1 for every t; b constant kills the other two
    tri = christoffel(get_profile("exp2t"), 0.0)
    assert tri.g000 == pytest.approx(1.0, abs=1e-15)
    assert tri.g011 == 0.0
    assert tri.g101 == 0.0


def test_christoffel_exp_space_warp():
    prof = MetricProfile("bexp", (const(1.0),), (exponential(1.0, 2.0),),
                         alpha=1e-18, check_window=(-20.0, 20.0))
    tri = christoffel(prof, 0.0)
    assert tri.g000 == 0.0
    assert tri.g011 == pytest.approx(1.0, abs=1e-15)
    assert tri.g101 == pytest.approx(1.0, abs=1e-15)


def test_christoffel_consistent_with_eval_quotients():
    rng = np.random.default_rng(7)
    for name in CATALOG_NAMES:
        prof = get_profile(name)
        lo = max(prof.t_min, -5.0) + 0.01
        hi = min(prof.t_max, 5.0) - 0.01
        for t in rng.uniform(lo, hi, 25):
            a, b, da, db = eval_profile(prof, t)
            tri = christoffel(prof, t)
            assert tri.g000 == da / (2 * a)
            assert tri.g011 == db / (2 * a)
            assert tri.g101 == db / (2 * b)


# -- classify_vector ---------------------------------------------------------------


def test_classify_examples():
    mink = get_profile("minkowski")
    c = classify_vector(mink, P(0, 0), V(1, 0))
    assert c.kind == "timelike" and c.norm_sq == -1.0
    c = classify_vector(mink, P(0, 0), V(1, 1))
    assert c.kind == "null" and c.norm_sq == 0.0
    prof = MetricProfile("a4", (const(4.0),), (const(1.0),))
    c = classify_vector(prof, P(0, 0), V(1, 1))
    assert c.kind == "timelike" and c.norm_sq == -3.0


def test_classify_zero_vector():
    assert classify_vector(get_profile("minkowski"), P(0, 0), V(0, 0)).kind == "zero"


@given(
    tau=st.floats(-3, 3).filter(lambda v: abs(v) > 1e-3),
    xi=st.floats(-3, 3),
    scale=st.floats(0.1, 10),
)
def test_classify_invariances(tau, xi, scale):
    mink = get_profile("minkowski")
    base = classify_vector(mink, P(0, 0), V(tau, xi))
    # stay away from the null band so scaling cannot cross it
    if abs(base.norm_sq) < 1e-6:
        return
    flipped = classify_vector(mink, P(0, 0), V(-tau, -xi))
    scaled = classify_vector(mink, P(0, 0), V(scale * tau, scale * xi))
    assert flipped.kind == base.kind
    assert scaled.kind == base.kind
    assert flipped.norm_sq == base.norm_sq
    assert scaled.norm_sq == pytest.approx(scale * scale * base.norm_sq, rel=1e-12)


# -- structure helpers -----------------------------------------------------------


def test_reflected_profile_mirrors_coefficients():
    rng = np.random.default_rng(3)
    for name in ("exp2t", "c1power", "warpb"):
        prof = get_profile(name)
        refl = prof.reflected()
        for t in rng.uniform(-5, 5, 40):
            a, b, _, _ = prof.eval(t)
            ar, br, _, _ = refl.eval(-t)
            assert ar == pytest.approx(a, rel=1e-15)
            assert br == pytest.approx(b, rel=1e-15)


def test_reflected_domain_flips():
    refl = get_profile("strip01").reflected()
    assert (refl.t_min, refl.t_max) == (-1.0, 0.0)


def test_unit_b_detection():
    assert get_profile("exp2t").has_unit_b
    assert get_profile("c1power").has_unit_b
    assert not get_profile("warpb").has_unit_b


def test_breakpoints_skip_even_powers():
    assert get_profile("warpb").breakpoints == ()     # |t|^2 is smooth
    assert get_profile("c1power").breakpoints == (0.0,)


# -- catalog and file records --------------------------------------------------------


def test_catalog_names():
    assert CATALOG_NAMES == ("minkowski", "strip01", "exp2t", "c1power", "warpb")
    for name in CATALOG_NAMES:
        assert get_profile(name).name == name


def test_unknown_profile():
    with pytest.raises(InvalidProfile):
        get_profile("nosuch")


def test_profile_record_roundtrip():
    for name in CATALOG_NAMES:
        prof = get_profile(name)
        parsed = parse_profiles(format_profile(prof))
        back = parsed[name]
        assert back.terms_a == prof.terms_a
        assert back.terms_b == prof.terms_b
        assert (back.t_min, back.t_max, back.alpha) == (
            prof.t_min, prof.t_max, prof.alpha,
        )


def test_profile_record_unknown_key_rejected():
    text = "name: x\ndomain: 0 1\ncolor: blue\nterms_a:\n  const 1\nterms_b:\n  const 1\n"
    with pytest.raises(InvalidProfile):
        parse_profiles(text)


def test_profile_record_multiple():
    text = format_profile(get_profile("minkowski")) + "\n" + format_profile(
        get_profile("strip01")
    )
    book = parse_profiles(text)
    assert set(book) == {"minkowski", "strip01"}
