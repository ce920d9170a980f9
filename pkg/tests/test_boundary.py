import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmapprox.boundary import (
    ArcSet,
    InjectivityError,
    MonotoneError,
    MonotonePhi,
    canonical_fixture_boundary,
    homeomorphize,
    homeomorphize_component,
    preset,
    quasi_lipschitz_check,
    quasi_lipschitz_constant,
    read_arcset_file,
    read_phi_file,
    replaced_min_slopes,
    sup_distance,
    validate_monotone,
    write_phi_file,
)
from harmapprox.geometry import ArcInterval, Segment

W = math.pi / 3
SEG = Segment(W)
M_GRID = (4, 5, 8, 16, 64, 256, 1024)


def phi_m_oracle(phi, theta, alpha, beta, m):
    # straight transcription of the blending rule, scalar arithmetic only
    pa, pb = phi(alpha), phi(beta)
    return (1 - (beta - alpha) / m) * (phi(theta) - pa) + (pb - pa) / m * (theta - alpha) + pa


# -- validate_monotone ------------------------------------------------------


def test_identity_nodes_valid():
    phi = validate_monotone([-W, W], [-W, W], SEG)
    assert phi(0.3) == pytest.approx(0.3)


def test_decreasing_node_reported():
    with pytest.raises(MonotoneError) as err:
        validate_monotone([-W, -0.2, 0.1, W], [-W, 0.0, -0.1, W], SEG)
    assert err.value.index == 2


def test_flat_step_valid():
    phi = validate_monotone([-W, 0.0, W], [-W, -W, W], SEG)
    assert phi.slopes()[0] == 0


@pytest.mark.parametrize(
    "theta, phi",
    [([-W, 0.5], [-W, 0.5]), ([-W, W], [-W, 0.9 * W]), ([-W, 2.0, W], [-W, 0.0, W]),
     ([-W, 0.1, 0.1, W], [-W, 0.0, 0.1, W])],
)
def test_bad_node_lists(theta, phi):
    with pytest.raises(MonotoneError):
        validate_monotone(theta, phi, SEG)


# -- homeomorphize_component ------------------------------------------------


def test_component_identity_fixed():
    phi = MonotonePhi([-W, W], [-W, W])
    out = homeomorphize_component(phi, -0.4, 0.7, 6)
    assert np.allclose(out.phi, out.theta, atol=1e-15)


def test_component_worked_example():
    phi = MonotonePhi([0.0, 0.5, 1.0], [0.0, 0.0, 1.0])
    out = homeomorphize_component(phi, 0.0, 1.0, 4)
    expected = phi_m_oracle(phi, 0.25, 0.0, 1.0, 4)
    assert expected == pytest.approx(0.0625, abs=1e-15)
    assert out(0.25) == pytest.approx(expected, abs=1e-15)
    np.testing.assert_array_equal(out.theta, phi.theta)


def test_component_endpoints_and_slope():
    phi, _ = preset("multi-flat", SEG)
    for m in M_GRID:
        a, b = -0.8 * W, 0.9 * W
        out = homeomorphize_component(phi, a, b, m)
        assert out.phi[0] == phi(a) and out.phi[-1] == phi(b)
        assert out.slopes().min() >= (phi(b) - phi(a)) / m - 1e-12
        t = np.linspace(a, b, 101)
        np.testing.assert_allclose(out(t), phi_m_oracle(phi, t, a, b, m), atol=1e-14)


def test_component_rejects():
    phi = MonotonePhi([0.0, 0.5, 1.0], [0.0, 0.0, 1.0])
    with pytest.raises(InjectivityError):
        homeomorphize_component(phi, 0.0, 0.4, 8)
    with pytest.raises(ValueError, match="m must be"):
        homeomorphize_component(phi, 0.0, 1.0, 3)


# -- homeomorphize ----------------------------------------------------------


def test_identity_is_fixed_point():
    phi, K = preset("identity", SEG)
    f = canonical_fixture_boundary(SEG, phi)
    for m in M_GRID:
        fm = homeomorphize(f, K, m)
        assert fm.phi == f.phi
        assert sup_distance(fm, f) == 0.0
    fm = homeomorphize(f, ArcSet((ArcInterval(-0.3, 0.2),)), 7)
    assert sup_distance(fm, f) < 1e-15


def test_flat_step_componentwise(flat_step):
    f, K = flat_step
    m = 8
    fm = homeomorphize(f, K, m)
    t_k = np.linspace(-W, 0, 50)
    np.testing.assert_array_equal(fm.phi(t_k), f.phi(t_k))
    comp = homeomorphize_component(f.phi, 0.0, W, m)
    t = np.linspace(0, W, 200)
    np.testing.assert_allclose(fm.phi(t), comp(t), atol=1e-15)
    assert np.all(np.diff(fm.phi(t)) > 0)
    (a, b, slope, guaranteed), = replaced_min_slopes(fm, f, m)
    assert (a, b) == (0.0, W)
    assert guaranteed == pytest.approx(W / m)
    assert slope >= guaranteed - 1e-12 > 0


def test_flat_inside_K_rejected(flat_step):
    f, _ = flat_step
    with pytest.raises(InjectivityError) as err:
        homeomorphize(f, ArcSet((ArcInterval(0.1, 0.4),)), 8)
    assert err.value.component == (0.1, 0.4)


def test_unseparated_component_rejected():
    phi = validate_monotone([-W, -0.5, 0.5, W], [-W, 0.0, 0.0, W], SEG)
    f = canonical_fixture_boundary(SEG, phi)
    K = ArcSet((ArcInterval(-W, -0.5), ArcInterval(0.5, W)))
    with pytest.raises(InjectivityError, match="not separated"):
        homeomorphize(f, K, 8)


def test_arcset_overlap_rejected():
    with pytest.raises(ValueError):
        ArcSet((ArcInterval(0.0, 0.2), ArcInterval(0.2, 0.3)))


def test_complement():
    K = ArcSet((ArcInterval(0.15 * W, 0.45 * W), ArcInterval(-0.45 * W, -0.15 * W)))
    gaps = K.complement(SEG)
    assert gaps == [(-W, -0.45 * W), (-0.15 * W, 0.15 * W), (0.45 * W, W)]
    assert ArcSet().complement(SEG) == [(-W, W)]
    assert ArcSet((ArcInterval(-W, W),)).complement(SEG) == []


# -- canonical boundary -----------------------------------------------------


def test_normalization_conditions(segment):
    phi, _ = preset("flat-step", segment)
    f = canonical_fixture_boundary(segment, phi)
    w = segment.omega
    assert f(math.pi) == pytest.approx(math.cos(w), abs=1e-15)
    assert f(w) == pytest.approx(np.exp(1j * w), abs=1e-15)
    assert f(2 * math.pi - w) == pytest.approx(np.exp(-1j * w), abs=1e-15)
    assert f(-w) == pytest.approx(np.exp(-1j * w), abs=1e-15)
    t = np.linspace(w, 2 * math.pi - w, 1001)
    vals = f(t)
    np.testing.assert_allclose(vals.real, math.cos(w), atol=1e-15)
    assert np.all(np.diff(vals.imag) < 0)


def test_boundary_traversal_is_monotone(segment):
    phi, _ = preset("multi-flat", segment)
    f = canonical_fixture_boundary(segment, phi)
    t = np.linspace(-math.pi, math.pi, 20001)
    # winding number one about an interior point
    c = (1 + math.cos(segment.omega)) / 2
    v = f(t) - c
    assert np.sum(np.angle(v[1:] / v[:-1])) == pytest.approx(2 * math.pi)


# -- uniform bound and quasi-Lipschitz --------------------------------------


@pytest.mark.parametrize("name", ["flat-step", "multi-flat"])
def test_uniform_bound(segment, name):
    phi, K = preset(name, segment)
    f = canonical_fixture_boundary(segment, phi)
    w = segment.omega
    for m in range(4, 1025, 37):
        d = sup_distance(homeomorphize(f, K, m), f)
        assert d <= 8 * w * w / m + 1e-12
        assert d <= 21 / m


def test_sup_bound_worked_value():
    assert 8 * W * W / 8 == pytest.approx(1.0966, abs=1e-4)


def test_sup_distance_self_zero(flat_step):
    f, _ = flat_step
    assert sup_distance(f, f) == 0.0


def test_sup_distance_segment_mismatch(flat_step):
    f, _ = flat_step
    g = canonical_fixture_boundary(Segment(1.0), preset("identity", Segment(1.0))[0])
    with pytest.raises(ValueError):
        sup_distance(f, g)


def test_quasi_lipschitz_constant_value():
    c = quasi_lipschitz_constant(Segment(1.0))
    assert c == pytest.approx(5 / math.sin(0.25), rel=1e-15)
    assert c == pytest.approx(20.211, abs=2e-3)


@pytest.mark.parametrize("name", ["flat-step", "multi-flat"])
def test_quasi_lipschitz(segment, name):
    phi, K = preset(name, segment)
    f = canonical_fixture_boundary(segment, phi)
    for m in (4, 16, 512):
        assert quasi_lipschitz_check(f, homeomorphize(f, K, m), 10_000, seed=m) >= -1e-10


def test_agreement_on_K_and_T(segment):
    phi, K = preset("multi-flat", segment)
    f = canonical_fixture_boundary(segment, phi)
    fm = homeomorphize(f, K, 9)
    w = segment.omega
    t_T = np.linspace(w, 2 * math.pi - w, 500)
    np.testing.assert_array_equal(fm(t_T), f(t_T))
    inside = fm.phi.theta[K.contains(fm.phi.theta)]
    assert inside.size >= 4
    np.testing.assert_array_equal(fm.phi(inside), f.phi(inside))


# -- random monotone maps ---------------------------------------------------


@st.composite
def monotone_with_K(draw):
    w = draw(st.floats(0.05, 1.5))
    seg = Segment(w)
    n = draw(st.integers(1, 8))
    cuts = sorted(draw(st.lists(st.floats(0.02, 0.98), min_size=n, max_size=n, unique=True)))
    theta = np.array([-w] + [-w + 2 * w * c for c in cuts] + [w])
    if np.any(np.diff(theta) < 1e-6):
        theta = np.linspace(-w, w, theta.size)
    incs = np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=n + 1, max_size=n + 1)))
    flat = draw(st.lists(st.booleans(), min_size=n + 1, max_size=n + 1))
    incs[np.array(flat)] = 0.0
    if incs.sum() == 0:
        incs[-1] = 1.0
    phi = np.clip(np.concatenate(([0.0], np.cumsum(incs))) / incs.sum() * 2 * w - w, -w, w)
    phi[0], phi[-1] = -w, w
    phi = validate_monotone(theta, phi, seg)
    comps = []
    for j, s in enumerate(phi.slopes()):
        if s > 1e-9 and draw(st.booleans()):
            a, b = phi.theta[j], phi.theta[j + 1]
            lo_f, hi_f = sorted(draw(st.tuples(st.floats(0.05, 0.95), st.floats(0.05, 0.95))))
            comps.append(ArcInterval(a + lo_f * (b - a), a + max(hi_f, lo_f) * (b - a)))
    return seg, phi, ArcSet(tuple(comps))


@settings(max_examples=60, deadline=None)
@given(data=monotone_with_K(), m=st.integers(4, 1024))
def test_random_maps_satisfy_all_bounds(data, m):
    seg, phi, K = data
    f = canonical_fixture_boundary(seg, phi)
    fm = homeomorphize(f, K, m)
    w = seg.omega
    d = sup_distance(fm, f)
    assert d <= 8 * w * w / m + 1e-12 and d <= 21 / m
    for _, _, slope, guaranteed in replaced_min_slopes(fm, f, m):
        assert slope >= guaranteed - 1e-12 > -1e-12
    assert np.all(np.diff(fm.phi.phi) > 0)
    assert quasi_lipschitz_check(f, fm, 2_000, seed=m) >= -1e-10
    inside = fm.phi.theta[K.contains(fm.phi.theta)]
    np.testing.assert_array_equal(fm.phi(inside), f.phi(inside))


# -- files ------------------------------------------------------------------


def test_phi_file_roundtrip(tmp_path):
    phi, _ = preset("multi-flat", SEG)
    p = tmp_path / "phi.txt"
    write_phi_file(p, phi)
    assert read_phi_file(p, SEG) == phi


def test_phi_file_errors_name_line(tmp_path):
    p = tmp_path / "phi.txt"
    p.write_text(f"# header\n{-W!r},{-W!r}\n0.1,0.2\n0.2,0.1\n{W!r},{W!r}\n")
    with pytest.raises(ValueError, match="line 4"):
        read_phi_file(p, SEG)
    p.write_text(f"{-W!r},{-W!r}\n0.1;0.2\n")
    with pytest.raises(ValueError, match="line 2"):
        read_phi_file(p, SEG)


def test_arcset_file(tmp_path):
    p = tmp_path / "K.txt"
    p.write_text("-1.0,-0.5\n0.1,0.3\n")
    K = read_arcset_file(p)
    assert [(c.lo, c.hi) for c in K.components] == [(-1.0, -0.5), (0.1, 0.3)]
