import threading

import numpy as np
import pytest

from curvlab import (
    Frame,
    FrameFunctional,
    InvalidDimension,
    InvalidInput,
    SearchConfig,
    brute_force_extremum,
    constant_curvature,
    direct_sum,
    extremize,
    flat,
    fubini_study,
    min_flag_pinching,
    minimize_over_four_frames,
    minimize_sectional,
    random_curvature_tensor,
    random_frame,
    scale,
    sphere,
    sphere_cross_circle,
)
from curvlab.search import _retract, _tangent

FOUR_FRAME = [FrameFunctional.a_sum(), FrameFunctional.b_sum(), FrameFunctional.condition(0.5),
              FrameFunctional.condition(1.3), FrameFunctional.isotropic()]
ALL = FOUR_FRAME + [FrameFunctional.sectional(), FrameFunctional.flag()]


def _funcs_dims():
    return [(f, n) for f in ALL for n in (4, 6)]


@pytest.mark.parametrize("f,n", _funcs_dims(), ids=lambda x: getattr(x, "label", str(x)))
def test_gradient_matches_central_differences(f, n):
    rng = np.random.default_rng(n)
    R = random_curvature_tensor(n, 17)
    E = random_frame(n, f.frame_size, seed=2).vectors
    theta = 0.7
    _, G, gth = f.gradient(R, E, theta)
    for _ in range(3):
        xi = _tangent(rng.normal(size=(1,) + E.shape), E[None])[0]
        xi /= np.linalg.norm(xi)
        dt = rng.normal() if f.uses_angle else 0.0
        h = 1e-5
        fd = (f.value_on(R, E + h * xi, theta + h * dt) - f.value_on(R, E - h * xi, theta - h * dt)) / (2 * h)
        an = float(np.sum(_tangent(G[None], E[None])[0] * xi)) + gth * dt
        assert abs(fd - an) <= 1e-5 * max(1.0, abs(an))
        # along the retraction curve the derivative is the same to first order
        fr = (f.value_on(R, _retract((E + h * xi)[None])[0], theta + h * dt)
              - f.value_on(R, _retract((E - h * xi)[None])[0], theta - h * dt)) / (2 * h)
        assert abs(fr - an) <= 1e-5 * max(1.0, abs(an))


def test_isotropic_constant_on_sphere(fast_cfg):
    res = minimize_over_four_frames(constant_curvature(5, 1), FrameFunctional.isotropic(), fast_cfg)
    assert res.value == pytest.approx(4.0, abs=1e-12)
    assert res.converged


def test_cp2_condition_minimum_at_holomorphic_frame(fast_cfg):
    R, J = fubini_study(2)
    res = minimize_over_four_frames(R, FrameFunctional.condition(0.5), fast_cfg)
    assert abs(res.value) < 1e-6
    e = res.frame.vectors
    assert abs(J(e[0]) @ e[1]) == pytest.approx(1.0, abs=1e-6)
    assert abs(J(e[2]) @ e[3]) == pytest.approx(1.0, abs=1e-6)


def test_sphere_cross_circle_condition(fast_cfg):
    res = minimize_over_four_frames(sphere_cross_circle(4), FrameFunctional.condition(0.5), fast_cfg)
    assert res.value == pytest.approx(1.5, abs=1e-6)


def test_sectional_extremes(fast_cfg):
    R, _ = fubini_study(2)
    assert minimize_sectional(R, False, fast_cfg).value == pytest.approx(1.0, abs=1e-6)
    assert minimize_sectional(R, True, fast_cfg).value == pytest.approx(4.0, abs=1e-6)
    S = constant_curvature(7, 3)
    assert minimize_sectional(S, False, fast_cfg).value == pytest.approx(3.0)
    assert minimize_sectional(S, True, fast_cfg).value == pytest.approx(3.0)
    P = direct_sum(sphere(2), sphere(2))
    assert minimize_sectional(P, False, fast_cfg).value == pytest.approx(0.0, abs=1e-6)
    assert minimize_sectional(P, True, fast_cfg).value == pytest.approx(1.0, abs=1e-6)


def test_flag_pinching_values(fast_cfg):
    assert min_flag_pinching(constant_curvature(5, 1), fast_cfg).value == pytest.approx(0.75)
    assert min_flag_pinching(flat(5), fast_cfg).value == 0.0
    res = min_flag_pinching(fubini_study(2)[0], fast_cfg)
    # weakly quarter pinched: K(e1, e3) = 1 against K(e1, J e1) = 4 share the line e1
    assert abs(res.value) < 1e-6
    v, w = res.second_plane
    assert abs(v @ w) < 1e-12 and np.linalg.norm(w) == pytest.approx(1.0)


def test_reported_value_matches_frame(fast_cfg):
    R = random_curvature_tensor(5, 4)
    for f in ALL:
        res = extremize(R, f, fast_cfg)
        assert f.evaluate(R, res.frame, res.theta or 0.0) == pytest.approx(res.value, abs=1e-9)
        assert res.restarts_used == fast_cfg.restarts
        assert min(res.restart_values) == pytest.approx(res.value, abs=1e-9)


def test_maximize_returns_the_maximum(fast_cfg):
    R = random_curvature_tensor(4, 6)
    f = FrameFunctional.b_sum()
    hi = minimize_over_four_frames(R, f, fast_cfg, maximize=True)
    assert hi.maximize
    assert hi.value >= brute_force_extremum(R, f, 20000, 1, minimize=False) - 1e-6
    assert hi.value == pytest.approx(max(hi.restart_values))


@pytest.mark.parametrize("f", ALL, ids=lambda f: f.label)
def test_optimizer_beats_oracle(f, fast_cfg):
    for seed in range(3):
        R = random_curvature_tensor(5, 100 + seed)
        res = extremize(R, f, fast_cfg)
        assert res.value <= brute_force_extremum(R, f, 20000, seed) + 1e-6


@pytest.mark.parametrize("f", ALL, ids=lambda f: f.label)
def test_batching_is_bitwise_invisible(f):
    R = random_curvature_tensor(6, 21)
    base = extremize(R, f, SearchConfig(restarts=6, seed=5))
    for size in (1, 4):
        other = extremize(R, f, SearchConfig(restarts=6, seed=5, batch_size=size))
        assert other.restart_values == base.restart_values
        assert other.value == base.value
        assert other.frame == base.frame


def test_restart_i_does_not_depend_on_restart_count():
    R = random_curvature_tensor(5, 3)
    f = FrameFunctional.isotropic()
    few = extremize(R, f, SearchConfig(restarts=3, seed=8))
    many = extremize(R, f, SearchConfig(restarts=7, seed=8))
    assert many.restart_values[:3] == few.restart_values


def test_concurrent_runs_are_identical():
    R = random_curvature_tensor(5, 30)
    cfg = SearchConfig(restarts=8, seed=2)
    f = FrameFunctional.condition(0.5)
    out = [None] * 4

    def run(i):
        out[i] = extremize(R, f, cfg).value

    threads = [threading.Thread(target=run, args=(i,)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(out)) == 1


@pytest.mark.parametrize("c", [0.01, 3.0, 250.0])
def test_scale_equivariance(c, fast_cfg):
    R = random_curvature_tensor(5, 12)
    for f in (FrameFunctional.condition(0.5), FrameFunctional.sectional()):
        a = extremize(R, f, fast_cfg).value
        b = extremize(scale(R, c), f, fast_cfg).value
        assert b == pytest.approx(c * a, rel=1e-8, abs=1e-12)


def test_oracle_on_constant_functional():
    R = constant_curvature(5, 2.0)
    assert brute_force_extremum(R, FrameFunctional.isotropic(), 100, 0) == pytest.approx(8.0)
    assert brute_force_extremum(R, FrameFunctional.sectional(), 1, 0, minimize=False) == pytest.approx(2.0)


def test_oracle_cp2_condition_million_samples():
    v = brute_force_extremum(fubini_study(2)[0], FrameFunctional.condition(0.5), 10**6, 0)
    assert -1e-4 <= v <= 0.05


def test_oracle_sphere_cross_circle_a_sum():
    v = brute_force_extremum(sphere_cross_circle(4), FrameFunctional.a_sum(), 10**5, 1)
    assert 2.0 - 1e-12 <= v <= 2.05


def test_oracle_is_seeded():
    R = random_curvature_tensor(4, 1)
    f = FrameFunctional.isotropic()
    assert brute_force_extremum(R, f, 5000, 3) == brute_force_extremum(R, f, 5000, 3, chunk=700)


def test_quantitative_isotropic_bound(fast_cfg):
    for seed in range(5):
        R = random_curvature_tensor(5, 40 + seed)
        iso = extremize(R, FrameFunctional.isotropic(), fast_cfg).value
        cond = extremize(R, FrameFunctional.condition(0.5), fast_cfg).value
        assert iso >= 4.0 / 3.0 * cond - 1e-6


def test_search_errors():
    f = FrameFunctional.condition(0.5)
    with pytest.raises(InvalidDimension):
        minimize_over_four_frames(constant_curvature(3), f)
    with pytest.raises(InvalidDimension):
        min_flag_pinching(constant_curvature(2))
    with pytest.raises(InvalidDimension):
        minimize_sectional(flat(1))
    with pytest.raises(InvalidInput):
        minimize_over_four_frames(constant_curvature(4), FrameFunctional.sectional())
    with pytest.raises(InvalidInput):
        brute_force_extremum(constant_curvature(4), f, 0, 0)
    for bad in ({"restarts": 0}, {"max_iterations": 0}, {"step_size": -1.0}, {"seed": -2}):
        with pytest.raises(InvalidInput):
            SearchConfig(**bad)


def test_evaluate_rejects_wrong_frame():
    with pytest.raises(InvalidInput):
        FrameFunctional.a_sum().evaluate(constant_curvature(4), Frame.standard(4, 2))
