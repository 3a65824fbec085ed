import math

import numpy as np
import pytest

from beamshare.geometry import (
    Frame,
    Region,
    Scenario,
    ScenarioConfig,
    ScenarioError,
    Vehicle,
    build_scenario,
    count_blockers,
    scenario_from_text,
    scenario_to_text,
    sensor_region,
)
from helpers import hand_scenario, lane_vehicle


def test_corridor_dimensions_from_default_config():
    s = build_scenario(ScenarioConfig(num_vehicles=0))
    # 4 lanes x 3.5 m + two 4 m sidewalks, split at the centerline
    assert s.half_width == pytest.approx(11.0)
    for x0, y0, x1, y1 in s.buildings:
        assert min(abs(x0), abs(x1)) == pytest.approx(11.0)
        assert min(abs(y0), abs(y1)) == pytest.approx(11.0)


def test_zero_vehicles_gives_empty_scenario():
    s = build_scenario(ScenarioConfig(num_vehicles=0))
    assert s.vehicles == ()


def test_same_seed_reproduces_scenario_byte_for_byte():
    cfg = ScenarioConfig(num_vehicles=12, rng_seed=77)
    a = build_scenario(cfg)
    b = build_scenario(cfg)
    assert scenario_to_text(a) == scenario_to_text(b)
    assert a.vehicles == b.vehicles


def test_different_seeds_differ():
    a = build_scenario(ScenarioConfig(num_vehicles=8, rng_seed=1))
    b = build_scenario(ScenarioConfig(num_vehicles=8, rng_seed=2))
    assert a.vehicles != b.vehicles


def test_overfull_config_reports_deficit():
    cfg = ScenarioConfig(num_vehicles=500, road_extent=40.0)
    with pytest.raises(ScenarioError, match=r"500"):
        build_scenario(cfg)


def test_config_validation_errors():
    with pytest.raises(ScenarioError):
        build_scenario(ScenarioConfig(lanes_per_road=3))
    with pytest.raises(ScenarioError):
        build_scenario(ScenarioConfig(lane_width=-1.0))
    with pytest.raises(ScenarioError):
        build_scenario(ScenarioConfig(num_vehicles=-1))
    with pytest.raises(ScenarioError):
        build_scenario(ScenarioConfig(), grid_res=0.0)


def test_vehicles_stay_on_lanes_outside_junction():
    for seed in range(12):
        s = build_scenario(ScenarioConfig(num_vehicles=15, avg_gap=25.0, rng_seed=seed))
        offsets = {-5.25, -1.75, 1.75, 5.25}
        half_len = s.config.vehicle_length / 2.0
        for v in s.vehicles:
            along, across = (v.x, v.y) if v.axis == 0 else (v.y, v.x)
            assert across in offsets
            # footprint clears the junction box and the corridor end
            assert abs(along) - half_len >= s.half_width - 1e-9
            assert abs(along) + half_len <= s.config.road_extent + 1e-9
            assert math.hypot(v.heading_x, v.heading_y) == pytest.approx(1.0)


def test_no_overlap_within_a_lane():
    for seed in range(12):
        s = build_scenario(ScenarioConfig(num_vehicles=20, avg_gap=15.0, rng_seed=seed))
        lanes: dict = {}
        for v in s.vehicles:
            along, across = (v.x, v.y) if v.axis == 0 else (v.y, v.x)
            lanes.setdefault((v.axis, across), []).append(along)
        for along in lanes.values():
            along.sort()
            for a, b in zip(along, along[1:]):
                assert b - a >= s.config.vehicle_length - 1e-9


def test_ids_sorted_by_distance_from_center():
    s = build_scenario(ScenarioConfig(num_vehicles=14, rng_seed=5))
    d = [math.hypot(v.x, v.y) for v in s.vehicles]
    assert d == sorted(d)
    assert [v.id for v in s.vehicles] == list(range(14))


# --- count_blockers ---


def test_blockers_adjacent_vehicles_clear():
    s = hand_scenario([lane_vehicle(20.0, -1.75), lane_vehicle(30.0, -1.75)])
    assert count_blockers(s, 0, 1) == (0, False)


def test_blocker_on_midpoint():
    s = hand_scenario(
        [lane_vehicle(20.0, -1.75), lane_vehicle(40.0, -1.75), lane_vehicle(30.0, -1.75)]
    )
    assert count_blockers(s, 0, 1) == (1, False)


def test_building_blocks_perpendicular_roads():
    s = hand_scenario([lane_vehicle(50.0, -1.75), (1.75, 50.0, 0.0, 1.0)])
    blockers, blocked = count_blockers(s, 0, 1)
    assert blocked is True


def test_blockers_symmetric():
    s = build_scenario(ScenarioConfig(num_vehicles=10, avg_gap=20.0, rng_seed=9))
    n = len(s.vehicles)
    for i in range(n):
        for j in range(i + 1, n):
            assert count_blockers(s, i, j) == count_blockers(s, j, i)


def test_blockers_same_vehicle_rejected():
    s = build_scenario(ScenarioConfig(num_vehicles=3, rng_seed=0))
    with pytest.raises(ValueError):
        count_blockers(s, 1, 1)


def test_blockers_match_shapely_oracle():
    shapely = pytest.importorskip("shapely")
    from shapely.geometry import LineString, box

    for seed in range(6):
        s = build_scenario(ScenarioConfig(num_vehicles=12, avg_gap=18.0, rng_seed=seed))
        c = s.config
        for i in range(len(s.vehicles)):
            for j in range(i + 1, len(s.vehicles)):
                seg = LineString([s.vehicles[i].position, s.vehicles[j].position])
                want = 0
                for v in s.vehicles:
                    if v.id in (i, j):
                        continue
                    if seg.intersects(box(*v.footprint(c.vehicle_length, c.vehicle_width))):
                        want += 1
                want_blocked = any(seg.intersects(box(*b)) for b in s.buildings)
                assert count_blockers(s, i, j) == (want, want_blocked)


# --- sensor_region ---


def test_cross_region_area_at_center():
    # both corridor arms span 100 m, overlapping on the 22 m junction square
    cfg = ScenarioConfig(num_vehicles=1, sensor_range=100.0)
    s = hand_scenario([(0.0, 0.0, 1.0, 0.0)], config=cfg)
    area = sensor_region(s, 0).area()
    assert area == pytest.approx(2 * (100.0 * 22.0) - 22.0 ** 2, abs=1e-6)  # 3916


def test_corridor_rectangle_deep_in_one_road():
    cfg = ScenarioConfig(num_vehicles=1, sensor_range=100.0)
    s = hand_scenario([lane_vehicle(70.0, -1.75)], config=cfg)
    area = sensor_region(s, 0).area()
    assert area == pytest.approx(100.0 * 22.0, abs=1e-6)  # 2200


def test_zero_range_empty_region():
    cfg = ScenarioConfig(num_vehicles=1, sensor_range=0.0)
    s = hand_scenario([lane_vehicle(30.0, -1.75)], config=cfg)
    assert sensor_region(s, 0).area() == 0.0


def test_region_matches_pointwise_oracle():
    # slow per-cell recomputation of the footprint predicate
    cfg = ScenarioConfig(num_vehicles=3, sensor_range=30.0)
    s = hand_scenario(
        [lane_vehicle(40.0, -1.75), (5.25, -60.0, 0.0, 1.0), (1.75, 3.0, 0.0, 1.0)],
        config=cfg,
        grid_res=0.5,
    )
    frame = Frame(-80.0, -80.0, 320, 320, 0.5)
    hw, e = s.half_width, s.config.road_extent
    half = s.config.sensor_range / 2.0
    for v in s.vehicles:
        grid = sensor_region(s, v.id, frame).grid
        at_junction = abs(v.x) <= hw and abs(v.y) <= hw
        xs, ys = frame.centers()
        for ix in range(frame.nx):
            for iy in range(frame.ny):
                cx, cy = xs[ix], ys[iy]
                in_x_arm = (
                    (at_junction or v.axis == 0)
                    and max(v.x - half, -e) <= cx < min(v.x + half, e)
                    and -hw <= cy < hw
                )
                in_y_arm = (
                    (at_junction or v.axis == 1)
                    and max(v.y - half, -e) <= cy < min(v.y + half, e)
                    and -hw <= cx < hw
                )
                assert grid[ix, iy] == (in_x_arm or in_y_arm), (v.id, cx, cy)


def test_region_monotone_in_sensor_range():
    base = ScenarioConfig(num_vehicles=1, sensor_range=20.0)
    wide = ScenarioConfig(num_vehicles=1, sensor_range=45.0)
    placement = [lane_vehicle(15.0, 1.75, -1.0)]
    s_small = hand_scenario(placement, config=base)
    s_big = hand_scenario(placement, config=wide)
    frame = s_big.full_frame()
    small = sensor_region(s_small, 0, frame)
    big = sensor_region(s_big, 0, frame)
    assert big.contains(small)
    assert big.area() > small.area()


def test_region_stays_on_roads_and_covers_own_cell():
    s = build_scenario(ScenarioConfig(num_vehicles=8, rng_seed=4))
    frame = s.full_frame()
    from beamshare.geometry import _rasterize_rects

    building_grid = _rasterize_rects(frame, list(s.buildings))
    for v in s.vehicles:
        r = sensor_region(s, v.id, frame)
        assert not np.any(r.grid & building_grid)
        ix = int((v.x - frame.x0) / frame.res)
        iy = int((v.y - frame.y0) / frame.res)
        assert r.grid[ix, iy]


def test_euclidean_variant_is_subset():
    cfg = ScenarioConfig(num_vehicles=1, sensor_range=40.0)
    s = hand_scenario([lane_vehicle(20.0, -1.75)], config=cfg)
    frame = s.full_frame()
    axis_aligned = sensor_region(s, 0, frame)
    disk = sensor_region(s, 0, frame, euclidean=True)
    assert axis_aligned.contains(disk)
    assert 0 < disk.area() < axis_aligned.area()


# --- Region algebra ---


def test_region_ops_and_frame_mismatch():
    f = Frame(0.0, 0.0, 4, 4, 1.0)
    a = Region(f, np.zeros((4, 4), dtype=bool))
    b = Region(f, np.zeros((4, 4), dtype=bool))
    a.grid[0, 0] = True
    b.grid[0, 0] = True
    b.grid[1, 1] = True
    assert a.union(b).area() == 2.0
    assert a.intersect(b).area() == 1.0
    assert b.contains(a) and not a.contains(b)
    other = Region(Frame(0.0, 0.0, 5, 5, 1.0), np.zeros((5, 5), dtype=bool))
    with pytest.raises(ValueError):
        a.union(other)
    with pytest.raises(ValueError):
        a.intersect(other)


# --- serialization ---


def test_scenario_text_round_trip():
    s = build_scenario(ScenarioConfig(num_vehicles=9, rng_seed=123), grid_res=0.5)
    t = scenario_to_text(s)
    s2 = scenario_from_text(t)
    assert s2 == s
    assert scenario_to_text(s2) == t


def test_scenario_text_rejects_garbage():
    with pytest.raises(ScenarioError):
        scenario_from_text("not a scenario\n")
    with pytest.raises(ScenarioError):
        scenario_from_text("beamshare-scenario v1\nlane_width = 3.5\n")  # missing keys
