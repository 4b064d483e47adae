import math

import numpy as np
import pytest

from goalrec.geometry import (
    Hull,
    Pose2,
    Rect,
    convex_hull,
    disc_disc_collides,
    disc_hull_intersects,
    hull_distance,
    path_length,
    point_in_rect,
    polyline,
    resample_polyline,
    wrap_angle,
)


def brute_force_hull_contains(points, p, tol=1e-9):
    """O(n^3)-style oracle: p is in the hull of `points` iff no candidate
    hull edge strictly separates p from every input point."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n == 1:
        return np.hypot(*(p - pts[0])) <= tol
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d = pts[j] - pts[i]
            normal = np.array([-d[1], d[0]])
            side_pts = (pts - pts[i]) @ normal
            if np.all(side_pts <= tol):  # (i, j) is a hull edge
                if (np.asarray(p) - pts[i]) @ normal > tol:
                    return False
    return True


class TestRectAndPose:
    def test_point_in_rect_center(self):
        assert point_in_rect((0, 0), Rect(-1, -1, 1, 1))

    def test_point_in_rect_boundary_inclusive(self):
        assert point_in_rect((1, 1), Rect(-1, -1, 1, 1))

    def test_point_just_outside(self):
        assert not point_in_rect((1.0001, 0), Rect(-1, -1, 1, 1))

    def test_rect_validation(self):
        with pytest.raises(ValueError):
            Rect(0, 0, 0, 1)

    def test_rect_distance(self):
        r = Rect(0, 0, 1, 1)
        assert r.distance((0.5, 0.5)) == 0.0
        assert r.distance((2.0, 0.5)) == pytest.approx(1.0)
        assert r.distance((2.0, 2.0)) == pytest.approx(math.sqrt(2))

    def test_pose_heading_normalized(self):
        p = Pose2(0, 0, 3 * math.pi)
        assert -math.pi <= p.theta < math.pi
        assert p.theta == pytest.approx(-math.pi)

    def test_pose_rejects_nan(self):
        with pytest.raises(ValueError):
            Pose2(float("nan"), 0.0)

    def test_wrap_angle_range(self):
        rng = np.random.default_rng(0)
        for theta in rng.uniform(-50, 50, size=200):
            w = wrap_angle(theta)
            assert -math.pi <= w < math.pi
            assert math.isclose(math.cos(w), math.cos(theta), abs_tol=1e-9)
            assert math.isclose(math.sin(w), math.sin(theta), abs_tol=1e-9)


class TestPathLength:
    def test_single_point(self):
        assert path_length([(0, 0)]) == 0.0

    def test_3_4_5(self):
        assert path_length([(0, 0), (3, 4)]) == pytest.approx(5.0)

    def test_unit_l_path(self):
        assert path_length([(0, 0), (1, 0), (1, 1)]) == pytest.approx(2.0)

    def test_rigid_transform_invariance(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            pts = rng.uniform(-1, 1, size=(rng.integers(2, 12), 2))
            theta = rng.uniform(-math.pi, math.pi)
            rot = np.array([[math.cos(theta), -math.sin(theta)],
                            [math.sin(theta), math.cos(theta)]])
            shifted = pts @ rot.T + rng.uniform(-5, 5, size=2)
            assert path_length(shifted) == pytest.approx(path_length(pts), rel=1e-9)

    def test_polyline_dedupes(self):
        poly = polyline([(0, 0), (0, 0), (1, 0), (1, 0), (1, 1)])
        assert len(poly) == 3


class TestConvexHull:
    def test_interior_point_dropped(self):
        h = convex_hull([(0, 0), (1, 0), (0, 1), (0.2, 0.2)])
        assert set(h.vertices) == {(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)}

    def test_degenerate_segment(self):
        h = convex_hull([(0, 0), (1, 1)])
        assert len(h.vertices) == 2

    def test_degenerate_point(self):
        h = convex_hull([(2, 3), (2, 3)])
        assert h.vertices == ((2.0, 3.0),)

    def test_collinear_inputs_give_segment(self):
        h = convex_hull([(0, 0), (1, 1), (2, 2), (0.5, 0.5)])
        assert set(h.vertices) == {(0.0, 0.0), (2.0, 2.0)}

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            convex_hull([])

    def test_random_points_contained_vs_oracle(self):
        rng = np.random.default_rng(42)
        pts = rng.uniform(0, 1, size=(100, 2))
        h = convex_hull(pts)
        for p in pts:
            assert h.contains(p, tol=1e-9)
            assert brute_force_hull_contains(pts, p)
        # hull vertex count is plausible and vertices are input points
        assert 3 <= len(h.vertices) <= 100
        for v in h.vertices:
            assert np.min(np.hypot(pts[:, 0] - v[0], pts[:, 1] - v[1])) < 1e-12

    def test_agrees_with_bruteforce_on_small_sets(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            pts = rng.uniform(-1, 1, size=(rng.integers(3, 15), 2))
            h = convex_hull(pts)
            probes = rng.uniform(-1.2, 1.2, size=(20, 2))
            for p in probes:
                assert h.contains(p, tol=1e-9) == brute_force_hull_contains(pts, p)

    def test_ccw_orientation(self):
        rng = np.random.default_rng(11)
        pts = rng.uniform(0, 1, size=(30, 2))
        verts = convex_hull(pts).points
        area2 = 0.0
        for i in range(len(verts)):
            a, b = verts[i], verts[(i + 1) % len(verts)]
            area2 += a[0] * b[1] - b[0] * a[1]
        assert area2 > 0.0


class TestDiscHull:
    def test_center_inside_hull(self):
        h = convex_hull([(0, 0), (2, 0), (2, 2), (0, 2)])
        assert disc_hull_intersects((1, 1), 0.01, h)

    def test_separated_disc(self):
        h = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1)])
        assert not disc_hull_intersects((3, 0.5), 1.0, h)

    def test_tangent_is_intersecting(self):
        h = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1)])
        assert disc_hull_intersects((2.0, 0.5), 1.0, h)

    def test_monotone_in_radius(self):
        rng = np.random.default_rng(5)
        h = convex_hull(rng.uniform(0, 1, size=(12, 2)))
        for _ in range(100):
            c = rng.uniform(-1, 2, size=2)
            r = rng.uniform(0.01, 1.0)
            if disc_hull_intersects(c, r, h):
                assert disc_hull_intersects(c, r + rng.uniform(0.01, 1.0), h)

    def test_segment_hull_distance(self):
        h = Hull(((0.0, 0.0), (2.0, 0.0)))
        assert hull_distance((1.0, 1.0), h) == pytest.approx(1.0)
        assert disc_hull_intersects((1.0, 1.0), 1.0, h)
        assert not disc_hull_intersects((1.0, 1.0), 0.99, h)


class TestDiscDisc:
    def test_exact_touch_is_free(self):
        assert not disc_disc_collides((0, 0), 1.0, (2, 0), 1.0)

    def test_overlap(self):
        assert disc_disc_collides((0, 0), 1.0, (1.9, 0), 1.0)

    def test_coincident(self):
        assert disc_disc_collides((0, 0), 1.0, (0, 0), 1.0)

    def test_symmetry(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            a, b = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
            ra, rb = rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0)
            assert disc_disc_collides(a, ra, b, rb) == disc_disc_collides(b, rb, a, ra)


class TestResample:
    def test_endpoints_kept(self):
        out = resample_polyline([(0, 0), (1, 0)], 0.3)
        assert np.allclose(out[0], (0, 0))
        assert np.allclose(out[-1], (1, 0))

    def test_spacing_bounded_and_length_preserved(self):
        out = resample_polyline([(0, 0), (0.95, 0), (0.95, 0.55)], 0.1)
        gaps = np.sqrt((np.diff(out, axis=0) ** 2).sum(axis=1))
        assert np.all(gaps <= 0.1 + 1e-9)
        assert path_length(out) == pytest.approx(1.5, rel=1e-9)
        # original corner vertex survives resampling
        assert any(np.allclose(p, (0.95, 0)) for p in out)
