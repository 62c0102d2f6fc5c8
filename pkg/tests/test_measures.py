import math
from fractions import Fraction

import numpy as np
import pytest

from csdepth.errors import EmptyClass, InvalidMeasure, OutOfRange
from csdepth.geometry import ColoredPointSet, Point, Simplex, contains
from csdepth.measures import (
    EstimateResult,
    Gaussian,
    MeasureFamily,
    MollifiedEmpirical,
    UniformBall,
    UniformBox,
    _psi_draws,
    containment_probability,
    deep_point_search,
    family_from_json,
    mollification_convergence_check,
    mollify,
    psi_acceptance_rate,
    psi_expected_acceptance,
    psi_integral,
    sample,
)
from csdepth.rng import make_rng

# quadrature value of the bump normalizer, frozen from two independent
# integrators agreeing to nine digits
PSI_INTEGRAL = 0.443993816168


class TestSpecs:
    def test_box_validation(self):
        with pytest.raises(InvalidMeasure):
            UniformBox(lo=(0.0, 0.0), hi=(1.0,))
        with pytest.raises(InvalidMeasure):
            UniformBox(lo=(0.0, 2.0), hi=(1.0, 1.0))

    def test_ball_validation(self):
        with pytest.raises(InvalidMeasure):
            UniformBall(center=(0.0,), radius=0.0)

    def test_gaussian_validation(self):
        with pytest.raises(InvalidMeasure):
            Gaussian(mean=(0.0,), sigmas=(0.0,))

    def test_mollified_validation(self):
        with pytest.raises(InvalidMeasure):
            MollifiedEmpirical(points=(), width_inverse=10)
        with pytest.raises(InvalidMeasure):
            MollifiedEmpirical(points=(Point.of(0, 0),), width_inverse=0)

    def test_family_needs_d_plus_one(self):
        with pytest.raises(InvalidMeasure):
            MeasureFamily((Gaussian.standard(2), Gaussian.standard(2)))

    def test_family_json_round_trip(self):
        fam = MeasureFamily(
            (
                UniformBox(lo=(0.0, 0.0), hi=(1.0, 2.0)),
                UniformBall(center=(0.5, 0.5), radius=2.0),
                MollifiedEmpirical(points=(Point.of("0.5", "1/3"),), width_inverse=20),
            )
        )
        assert family_from_json(fam.to_json()) == fam

    def test_family_json_rejects_unknown_kind(self):
        with pytest.raises(InvalidMeasure):
            family_from_json({"dim": 1, "measures": [{"kind": "cauchy"}]})


class TestSamplers:
    def test_box_mean(self):
        rng = make_rng(1)
        box = UniformBox(lo=(0.0,), hi=(1.0,))
        draws = box.sample_batch(rng, 10**5)
        # mean of U[0,1] is 0.5 with sd 1/sqrt(12 N)
        assert abs(draws.mean() - 0.5) < 3 / math.sqrt(12 * 10**5)

    def test_ball_support(self):
        rng = make_rng(2)
        ball = UniformBall(center=(1.0, -1.0), radius=0.5)
        draws = ball.sample_batch(rng, 2000)
        dist = np.linalg.norm(draws - np.array([1.0, -1.0]), axis=1)
        assert np.all(dist <= 0.5 + 1e-12)

    def test_gaussian_moments(self):
        rng = make_rng(3)
        g = Gaussian(mean=(2.0,), sigmas=(3.0,))
        draws = g.sample_batch(rng, 10**5)
        assert abs(draws.mean() - 2.0) < 3 * 3.0 / math.sqrt(10**5)

    def test_mollified_support(self):
        center = Point.of("0.5", "0.25")
        m = MollifiedEmpirical(points=(center,), width_inverse=10)
        rng = make_rng(4)
        draws = m.sample_batch(rng, 500)
        assert np.all(np.abs(draws - np.array([0.5, 0.25])) < 0.1)

    def test_scalar_sample(self):
        m = Gaussian.standard(3)
        out = sample(m, make_rng(5))
        assert len(out) == 3 and all(isinstance(v, float) for v in out)

    def test_psi_draws_in_open_interval(self):
        draws = _psi_draws(make_rng(6), 5000)
        assert np.all(np.abs(draws) < 1.0)

    def test_psi_acceptance_rate_matches_quadrature(self):
        assert abs(psi_integral() - PSI_INTEGRAL) < 1e-8
        theory = psi_expected_acceptance()
        assert abs(theory - PSI_INTEGRAL / (2 * math.exp(-1))) < 1e-8
        rate = psi_acceptance_rate(seed=3, proposals=10**5)
        se = math.sqrt(theory * (1 - theory) / 10**5)
        assert abs(rate - theory) < 4 * se


class TestMollify:
    def test_family_shape(self, nine_points):
        fam = mollify(nine_points, 1000)
        assert fam.dim == 2
        assert len(fam.measures) == 3
        assert all(m.width_inverse == 1000 for m in fam.measures)

    def test_samples_near_right_color(self, nine_points):
        fam = mollify(nine_points, 1000)
        rng = make_rng(7)
        for k, m in enumerate(fam.measures):
            draws = m.sample_batch(rng, 200)
            centers = np.array([p.as_floats() for p in nine_points.classes[k]])
            for row in draws:
                linf = np.abs(centers - row).max(axis=1).min()
                assert linf < 1 / 1000

    def test_single_point_pure_bump(self):
        cps = ColoredPointSet.from_coords([[(0, 0)], [(4, 0)], [(0, 4)]])
        fam = mollify(cps, 50)
        draws = fam.measures[1].sample_batch(make_rng(8), 300)
        assert np.all(np.abs(draws - np.array([4.0, 0.0])) < 0.02)

    def test_empty_class_rejected(self):
        cps = ColoredPointSet.from_coords([[(0, 0)], [(4, 0)], [(0, 4)]])
        hollow = ColoredPointSet.__new__(ColoredPointSet)
        object.__setattr__(hollow, "classes", (cps.classes[0], (), cps.classes[2]))
        with pytest.raises(EmptyClass):
            mollify(hollow, 10)

    def test_bad_width(self):
        cps = ColoredPointSet.from_coords([[(0, 0)], [(4, 0)], [(0, 4)]])
        with pytest.raises(InvalidMeasure):
            mollify(cps, 0)


class TestContainmentProbability:
    def test_d1_closed_form_center(self):
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        r = containment_probability(fam, (0.5,), 10**5, seed=1)
        assert abs(r.p_hat - 0.5) <= 3 * r.std_error

    def test_d1_closed_form_quarter(self):
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        r = containment_probability(fam, (0.25,), 10**5, seed=1)
        # closed form 2a(1-a) at a = 1/4
        se = math.sqrt(0.375 * 0.625 / 10**5)
        assert abs(r.p_hat - 0.375) <= 3 * se

    def test_wendel_d2_quick(self):
        fam = MeasureFamily(tuple(Gaussian.standard(2) for _ in range(3)))
        r = containment_probability(fam, (0.0, 0.0), 10**5, seed=1)
        se = math.sqrt(0.25 * 0.75 / 10**5)
        assert abs(r.p_hat - 0.25) <= 3 * se

    def test_determinism(self):
        fam = MeasureFamily(tuple(Gaussian.standard(2) for _ in range(3)))
        a = containment_probability(fam, (0.1, 0.2), 20000, seed=9)
        b = containment_probability(fam, (0.1, 0.2), 20000, seed=9)
        assert a == b
        assert a != containment_probability(fam, (0.1, 0.2), 20000, seed=10)

    def test_std_error_formula(self):
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        r = containment_probability(fam, (0.5,), 4096, seed=2)
        assert r.std_error == pytest.approx(math.sqrt(r.p_hat * (1 - r.p_hat) / 4096))
        assert 0 <= r.p_hat <= 1
        assert r.samples == 4096

    def test_symmetry_about_origin(self):
        fam = MeasureFamily(tuple(Gaussian.standard(2) for _ in range(3)))
        a = containment_probability(fam, (0.3, -0.2), 10**5, seed=3)
        b = containment_probability(fam, (-0.3, 0.2), 10**5, seed=4)
        combined = math.hypot(a.std_error, b.std_error)
        assert abs(a.p_hat - b.p_hat) <= 4 * combined

    def test_point_query_accepted(self):
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        r = containment_probability(fam, Point.of("1/2"), 1000, seed=5)
        assert r.query == (0.5,)

    def test_bad_trials(self):
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        with pytest.raises(OutOfRange):
            containment_probability(fam, (0.5,), 0, seed=1)

    def test_dim_mismatch(self):
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        with pytest.raises(InvalidMeasure):
            containment_probability(fam, (0.5, 0.5), 100, seed=1)

    def test_variance_scales_inversely_with_n(self):
        # regression on the log-log slope of variance across seeds vs N
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        ns = [1000, 4000, 16000, 64000]
        variances = []
        for n in ns:
            ests = [
                containment_probability(fam, (0.31,), n, seed=s).p_hat
                for s in range(30)
            ]
            variances.append(np.var(ests))
        slope = np.polyfit(np.log(ns), np.log(variances), 1)[0]
        assert abs(slope + 1.0) < 0.2


class TestDeepPointSearch:
    def test_d1_uniform_finds_center(self):
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        r = deep_point_search(fam, grid_resolution=11, refine_rounds=3, n_per_eval=20000, seed=4)
        assert abs(r.query[0] - 0.5) < 0.05
        assert abs(r.p_hat - 0.5) <= 4 * r.std_error

    def test_d2_gaussians_find_origin(self):
        fam = MeasureFamily(tuple(Gaussian.standard(2) for _ in range(3)))
        r = deep_point_search(fam, grid_resolution=7, refine_rounds=2, n_per_eval=20000, seed=5)
        assert math.hypot(*r.query) < 0.2
        assert abs(r.p_hat - 0.25) <= 4 * r.std_error

    def test_reported_estimate_clears_selection_bound(self):
        # gromov bound at d=2 is 2/9; the reported p_hat must not sit
        # implausibly below it for a symmetric family
        fam = MeasureFamily(tuple(Gaussian.standard(2) for _ in range(3)))
        r = deep_point_search(fam, grid_resolution=5, refine_rounds=1, n_per_eval=20000, seed=6)
        assert r.p_hat >= 2 / 9 - 4 * r.std_error

    def test_deterministic(self):
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        a = deep_point_search(fam, 5, 1, 5000, seed=7)
        b = deep_point_search(fam, 5, 1, 5000, seed=7)
        assert a == b

    def test_parameter_validation(self):
        fam = MeasureFamily((UniformBox(lo=(0.0,), hi=(1.0,)),) * 2)
        with pytest.raises(OutOfRange):
            deep_point_search(fam, 0, 1, 100, seed=1)
        with pytest.raises(OutOfRange):
            deep_point_search(fam, 3, -1, 100, seed=1)
        with pytest.raises(OutOfRange):
            deep_point_search(fam, 3, 1, 0, seed=1)


class TestMollificationConvergence:
    def test_nine_points(self, nine_points, nine_points_query):
        rep = mollification_convergence_check(nine_points, nine_points_query, 10**4, seed=1)
        assert rep.exact_fraction == Fraction(10, 27)
        assert rep.n_used == 30  # frozen: separation scale 15 doubled once by the certificate
        assert rep.agrees

    def test_single_surrounding_tuple(self):
        cps = ColoredPointSet.from_coords([[(0, 0)], [(4, 0)], [(0, 4)]])
        rep = mollification_convergence_check(cps, Point.of(1, 1), 5000, seed=2)
        assert rep.exact_fraction == 1
        assert rep.estimate.p_hat == 1.0
        assert rep.agrees

    def test_far_outside_exact_zero(self):
        cps = ColoredPointSet.from_coords([[(0, 0)], [(4, 0)], [(0, 4)]])
        rep = mollification_convergence_check(cps, Point.of(100, 100), 5000, seed=3)
        assert rep.exact_fraction == 0
        assert rep.estimate.p_hat == 0.0
        assert rep.agrees

    def test_zero_bias_on_sampled_tuples(self, nine_points, nine_points_query):
        # with the certified width, every sampled tuple must keep the exact
        # containment status of its source tuple
        rep = mollification_convergence_check(nine_points, nine_points_query, 100, seed=4)
        fam = mollify(nine_points, rep.n_used)
        rng = make_rng(11)
        q = nine_points_query
        for _ in range(1000):
            idx = [int(rng.integers(0, 3)) for _ in range(3)]
            srcs = [nine_points.classes[k][i] for k, i in enumerate(idx)]
            noise = _psi_draws(rng, 6)
            moved = [
                Point(
                    tuple(
                        c + Fraction(float(n)) / rep.n_used
                        for c, n in zip(p.coords, noise[2 * k : 2 * k + 2])
                    )
                )
                for k, p in enumerate(srcs)
            ]
            assert contains(Simplex(tuple(srcs)), q) == contains(Simplex(tuple(moved)), q)
