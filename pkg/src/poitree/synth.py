"""Seeded synthetic mobility traces with planted ground-truth places.

A persona is a weekly schedule over a small set of sites, each either a
standalone place or a parent with nested sub-places. Trace generation walks
the schedule day by day: fixes are sampled on a jittered regular grid while
the persona dwells at a site or walks between consecutive sites, Gaussian
position noise (radial RMS sigma, truncated at 3 sigma) and a per-fix
accuracy are added, and a small fraction of fixes get an implausible
accuracy so the cleaning stage has something to drop. The same persona and
seed always produce the identical trajectory.

The generator also reports the planted places with their visit-day
frequencies and dwell rates, so extraction quality can be scored against
ground truth.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .geo import GeoPoint, unproject_equirectangular
from .tree import TIER_GLOBAL, TIER_LOCAL
from .trajectory import SECONDS_PER_DAY, Fix, Trajectory

WALK_SPEED_MPS = 1.4
# Midnight UTC, 2023-11-15 (a Wednesday).
DEFAULT_START_EPOCH = 1_700_006_400
DEFAULT_ORIGIN = GeoPoint(46.52, 6.63)

GOOD_ACCURACY_RANGE_M = (5.0, 30.0)
BAD_ACCURACY_RANGE_M = (1200.0, 2000.0)


@dataclass(frozen=True)
class VisitBlock:
    """A recurring dwell: on these weekdays (0=Monday), from start_min for duration_min."""

    weekdays: tuple[int, ...]
    start_min: int
    duration_min: int


@dataclass(frozen=True)
class PlaceSpec:
    """A site at a planar offset from the persona origin, in meters east/north.

    Either a standalone place with its own visits, or a parent whose presence
    is the union of its sub-places' visits (then it must have no visits of
    its own). A leaf may leave `visits` empty when a swap pair schedules it.
    """

    name: str
    east_m: float
    north_m: float
    visits: tuple[VisitBlock, ...] = ()
    places: tuple["PlaceSpec", ...] = ()


@dataclass(frozen=True)
class SwapPair:
    """Two leaf places sharing two equal-length windows on the same days.

    Each active day a coin decides which place takes the earlier window, so
    both places keep an exact, schedule-determined visit-day frequency and
    dwell while the visit order carries one bit of genuine randomness per
    active day. Useful for traces whose rarely-visited places are also the
    unpredictable ones.
    """

    first: str
    second: str
    weekdays: tuple[int, ...]
    starts_min: tuple[int, int]
    duration_min: int


@dataclass(frozen=True)
class Persona:
    """A synthetic user: sites, schedule, and sensing characteristics."""

    name: str
    places: tuple[PlaceSpec, ...]
    origin: GeoPoint = DEFAULT_ORIGIN
    span_days: int = 60
    sampling_interval_s: int = 600
    jitter_s: int = 60
    noise_sigma_m: float = 10.0
    bad_fix_rate: float = 0.01
    start_epoch: int = DEFAULT_START_EPOCH
    day_offset_min: int = 0
    swaps: tuple[SwapPair, ...] = ()


@dataclass(frozen=True)
class PlantedPoi:
    """Ground truth for one planted place over the generated span."""

    name: str
    tier: str
    parent: str | None
    center: GeoPoint
    f_vd: float
    d_vd: float
    visit_days: int
    observation_days: int


@dataclass(frozen=True)
class SynthResult:
    trajectory: Trajectory
    planted: tuple[PlantedPoi, ...]


def _weekday(day_number: int) -> int:
    # The epoch day 0 (1970-01-01) was a Thursday; 0 = Monday.
    return (day_number + 3) % 7


def _validate_persona(p: Persona) -> None:
    if p.span_days < 1:
        raise ValueError("span_days must be >= 1")
    if p.sampling_interval_s < 1:
        raise ValueError("sampling_interval_s must be >= 1")
    if p.jitter_s < 0 or 2 * p.jitter_s >= p.sampling_interval_s:
        raise ValueError("jitter_s must satisfy 0 <= 2 * jitter_s < sampling_interval_s")
    if p.noise_sigma_m < 0:
        raise ValueError("noise_sigma_m must be >= 0")
    if not 0.0 <= p.bad_fix_rate <= 1.0:
        raise ValueError("bad_fix_rate must be in [0, 1]")
    if not p.places:
        raise ValueError("persona needs at least one place")
    names: set[str] = set()
    leaf_names: set[str] = set()
    bare_leaves: list[str] = []

    def check_place(place: PlaceSpec, depth: int) -> None:
        if place.name in names:
            raise ValueError(f"duplicate place name {place.name!r}")
        names.add(place.name)
        if place.places and place.visits:
            raise ValueError(f"place {place.name!r} has both sub-places and its own visits")
        if depth > 0 and place.places:
            raise ValueError(f"sub-place {place.name!r} cannot have further sub-places")
        if not place.places:
            leaf_names.add(place.name)
            if not place.visits:
                bare_leaves.append(place.name)
        for v in place.visits:
            if not v.weekdays or any(w < 0 or w > 6 for w in v.weekdays):
                raise ValueError(f"visit of {place.name!r} has invalid weekdays {v.weekdays}")
            if v.duration_min <= 0:
                raise ValueError(f"visit of {place.name!r} has non-positive duration")
            if v.start_min < 0 or v.start_min + v.duration_min > 24 * 60:
                raise ValueError(f"visit of {place.name!r} must fall inside one day")
        for sub in place.places:
            check_place(sub, depth + 1)

    for place in p.places:
        check_place(place, 0)

    swap_named: set[str] = set()
    for sp in p.swaps:
        if sp.first == sp.second:
            raise ValueError(f"swap pair repeats place {sp.first!r}")
        for nm in (sp.first, sp.second):
            if nm not in leaf_names:
                raise ValueError(f"swap pair references unknown or non-leaf place {nm!r}")
        if not sp.weekdays or any(w < 0 or w > 6 for w in sp.weekdays):
            raise ValueError(f"swap pair {sp.first!r}/{sp.second!r} has invalid weekdays {sp.weekdays}")
        if sp.duration_min <= 0:
            raise ValueError(f"swap pair {sp.first!r}/{sp.second!r} has non-positive duration")
        s0, s1 = sp.starts_min
        if s0 < 0 or s0 + sp.duration_min > s1 or s1 + sp.duration_min > 24 * 60:
            raise ValueError(
                f"swap pair {sp.first!r}/{sp.second!r} windows must be ordered, disjoint, "
                "and inside one day"
            )
        swap_named.update((sp.first, sp.second))
    for nm in bare_leaves:
        if nm not in swap_named:
            raise ValueError(f"place {nm!r} has neither visits, sub-places, nor a swap slot")


@dataclass(frozen=True)
class _Block:
    start: int  # seconds from midnight
    end: int
    leaf: PlaceSpec


def _day_blocks(persona: Persona, weekday: int) -> list[_Block]:
    blocks: list[_Block] = []
    for top in persona.places:
        leaves = top.places if top.places else (top,)
        for leaf in leaves:
            for v in leaf.visits:
                if weekday in v.weekdays:
                    blocks.append(
                        _Block(start=v.start_min * 60, end=(v.start_min + v.duration_min) * 60, leaf=leaf)
                    )
    blocks.sort(key=lambda b: b.start)
    return blocks


def _check_day_windows(persona: Persona, weekday: int, static_blocks: list[_Block]) -> None:
    """Reject overlapping windows; swap windows occupy their slots on active days."""
    windows = [(b.start, b.end, b.leaf.name) for b in static_blocks]
    for sp in persona.swaps:
        if weekday in sp.weekdays:
            for s in sp.starts_min:
                windows.append((s * 60, (s + sp.duration_min) * 60, f"{sp.first}/{sp.second}"))
    windows.sort()
    for (_, e0, n0), (s1, _, n1) in zip(windows, windows[1:]):
        if s1 < e0:
            raise ValueError(
                f"schedule overlap on weekday {weekday}: {n0!r} runs past {n1!r}"
            )


@dataclass(frozen=True)
class _Transit:
    start: int
    end: int
    from_xy: tuple[float, float]
    to_xy: tuple[float, float]


def _day_transits(blocks: list[_Block], weekday: int) -> list[_Transit]:
    # Walks are timed to arrive exactly when the next dwell begins, so a
    # transit fix is always followed by on-site fixes within one sampling
    # interval and never sits in front of a long silence (which would let the
    # dwell attribution credit it with a capped half-hour stay on the route).
    transits: list[_Transit] = []
    for prev, nxt in zip(blocks, blocks[1:]):
        a = (prev.leaf.east_m, prev.leaf.north_m)
        b = (nxt.leaf.east_m, nxt.leaf.north_m)
        dist = math.hypot(b[0] - a[0], b[1] - a[1])
        if dist == 0.0:
            continue
        travel = int(math.ceil(dist / WALK_SPEED_MPS))
        if prev.end + travel > nxt.start:
            raise ValueError(
                f"infeasible schedule on weekday {weekday}: no time to walk "
                f"{dist:.0f} m from {prev.leaf.name!r} to {nxt.leaf.name!r}"
            )
        transits.append(_Transit(start=nxt.start - travel, end=nxt.start, from_xy=a, to_xy=b))
    return transits


def generate(persona: Persona, seed: int) -> SynthResult:
    """Generate the trajectory and ground truth for a persona, deterministically."""
    _validate_persona(persona)
    rng = np.random.default_rng(seed)
    day0 = persona.start_epoch // SECONDS_PER_DAY
    interval = persona.sampling_interval_s
    jitter = persona.jitter_s
    sigma_axis = persona.noise_sigma_m / math.sqrt(2.0)
    cap = 3.0 * persona.noise_sigma_m

    # The static weekly pattern only depends on the weekday, so lay it out
    # once; days with swap windows resolve their coin flips (and transits)
    # per day, drawing the coins before any sampling draws.
    week_blocks = {wd: _day_blocks(persona, wd) for wd in range(7)}
    for wd in range(7):
        _check_day_windows(persona, wd, week_blocks[wd])
    week_swaps = {wd: [sp for sp in persona.swaps if wd in sp.weekdays] for wd in range(7)}
    week_transits = {
        wd: _day_transits(week_blocks[wd], wd) for wd in range(7) if not week_swaps[wd]
    }
    leaf_by_name = {
        leaf.name: leaf
        for top in persona.places
        for leaf in (top.places if top.places else (top,))
    }

    fixes: list[Fix] = []
    for d in range(persona.span_days):
        wd = _weekday(day0 + d)
        if week_swaps[wd]:
            blocks = list(week_blocks[wd])
            for sp in week_swaps[wd]:
                flipped = bool(rng.integers(0, 2))
                order = (sp.second, sp.first) if flipped else (sp.first, sp.second)
                for nm, s in zip(order, sp.starts_min):
                    blocks.append(
                        _Block(start=s * 60, end=(s + sp.duration_min) * 60, leaf=leaf_by_name[nm])
                    )
            blocks.sort(key=lambda b: b.start)
            transits = _day_transits(blocks, wd)
        else:
            blocks = week_blocks[wd]
            transits = week_transits[wd]
        if not blocks:
            continue
        day_start = persona.start_epoch + d * SECONDS_PER_DAY
        for k in range(SECONDS_PER_DAY // interval):
            base = k * interval
            offset = base + (int(rng.integers(-jitter, jitter + 1)) if jitter else 0)
            xy = None
            for b in blocks:
                if b.start <= offset < b.end:
                    xy = (b.leaf.east_m, b.leaf.north_m)
                    break
            if xy is None:
                for tr in transits:
                    if tr.start <= offset < tr.end:
                        frac = (offset - tr.start) / (tr.end - tr.start)
                        xy = (
                            tr.from_xy[0] + frac * (tr.to_xy[0] - tr.from_xy[0]),
                            tr.from_xy[1] + frac * (tr.to_xy[1] - tr.from_xy[1]),
                        )
                        break
            if xy is None:
                continue
            dx, dy = rng.normal(0.0, sigma_axis, 2) if sigma_axis > 0 else (0.0, 0.0)
            r = math.hypot(dx, dy)
            if cap > 0 and r > cap:
                dx, dy = dx * cap / r, dy * cap / r
            if rng.random() < persona.bad_fix_rate:
                accuracy = float(rng.uniform(*BAD_ACCURACY_RANGE_M))
            else:
                accuracy = float(rng.uniform(*GOOD_ACCURACY_RANGE_M))
            point = unproject_equirectangular(
                np.array([[xy[0] + dx, xy[1] + dy]]), persona.origin
            )[0]
            fixes.append(
                Fix(
                    timestamp=day_start + offset,
                    lat=float(point[0]),
                    lon=float(point[1]),
                    accuracy=accuracy,
                )
            )

    trajectory = Trajectory(
        user_id=persona.name,
        fixes=tuple(fixes),
        day_offset_min=persona.day_offset_min,
        segment_breaks=frozenset(),
        processed=False,
    )
    return SynthResult(trajectory=trajectory, planted=tuple(_ground_truth(persona, week_blocks)))


def _ground_truth(persona: Persona, week_blocks: dict[int, list[_Block]]) -> list[PlantedPoi]:
    day0 = persona.start_epoch // SECONDS_PER_DAY
    present_days: set[int] = set()
    leaf_days: dict[str, set[int]] = {}
    leaf_minutes: dict[str, float] = {}
    for d in range(persona.span_days):
        wd = _weekday(day0 + d)
        for b in week_blocks[wd]:
            present_days.add(d)
            leaf_days.setdefault(b.leaf.name, set()).add(d)
            leaf_minutes[b.leaf.name] = leaf_minutes.get(b.leaf.name, 0.0) + (b.end - b.start) / 60.0
        for sp in persona.swaps:
            # Whichever way the coin lands, each place of the pair dwells for
            # exactly one window on every active day.
            if wd in sp.weekdays:
                present_days.add(d)
                for nm in (sp.first, sp.second):
                    leaf_days.setdefault(nm, set()).add(d)
                    leaf_minutes[nm] = leaf_minutes.get(nm, 0.0) + sp.duration_min
    obs = len(present_days)
    if obs == 0:
        raise ValueError("persona schedule produces no presence inside the span")

    def center_of(e: float, n: float) -> GeoPoint:
        pt = unproject_equirectangular(np.array([[e, n]]), persona.origin)[0]
        return GeoPoint(float(pt[0]), float(pt[1]))

    def planted(name: str, tier: str, parent: str | None, e: float, n: float,
                days: set[int], minutes: float) -> PlantedPoi:
        return PlantedPoi(
            name=name,
            tier=tier,
            parent=parent,
            center=center_of(e, n),
            f_vd=len(days) / obs,
            d_vd=minutes / len(days) if days else 0.0,
            visit_days=len(days),
            observation_days=obs,
        )

    out: list[PlantedPoi] = []
    locals_out: list[PlantedPoi] = []
    for top in persona.places:
        if top.places:
            days: set[int] = set()
            minutes = 0.0
            weighted_e = weighted_n = 0.0
            for sub in top.places:
                sub_days = leaf_days.get(sub.name, set())
                sub_minutes = leaf_minutes.get(sub.name, 0.0)
                days |= sub_days
                minutes += sub_minutes
                weighted_e += sub.east_m * sub_minutes
                weighted_n += sub.north_m * sub_minutes
                if sub_days:
                    locals_out.append(
                        planted(sub.name, TIER_LOCAL, top.name, sub.east_m, sub.north_m,
                                sub_days, sub_minutes)
                    )
            if not days:
                continue
            out.append(
                planted(top.name, TIER_GLOBAL, None, weighted_e / minutes, weighted_n / minutes,
                        days, minutes)
            )
        else:
            days = leaf_days.get(top.name, set())
            if not days:
                continue
            out.append(
                planted(top.name, TIER_GLOBAL, None, top.east_m, top.north_m,
                        days, leaf_minutes[top.name])
            )
    return out + locals_out


# ---------------------------------------------------------------------------
# persona serialization

def persona_to_dict(p: Persona) -> dict:
    def place(pl: PlaceSpec) -> dict:
        d: dict = {"name": pl.name, "east_m": pl.east_m, "north_m": pl.north_m}
        if pl.visits:
            d["visits"] = [
                {"weekdays": list(v.weekdays), "start_min": v.start_min, "duration_min": v.duration_min}
                for v in pl.visits
            ]
        if pl.places:
            d["places"] = [place(s) for s in pl.places]
        return d

    data = {
        "name": p.name,
        "origin": [p.origin.lat, p.origin.lon],
        "span_days": p.span_days,
        "sampling_interval_s": p.sampling_interval_s,
        "jitter_s": p.jitter_s,
        "noise_sigma_m": p.noise_sigma_m,
        "bad_fix_rate": p.bad_fix_rate,
        "start_epoch": p.start_epoch,
        "day_offset_min": p.day_offset_min,
        "places": [place(pl) for pl in p.places],
    }
    if p.swaps:
        data["swaps"] = [
            {
                "first": sp.first,
                "second": sp.second,
                "weekdays": list(sp.weekdays),
                "starts_min": list(sp.starts_min),
                "duration_min": sp.duration_min,
            }
            for sp in p.swaps
        ]
    return data


def persona_from_dict(data: dict) -> Persona:
    def place(d: dict) -> PlaceSpec:
        return PlaceSpec(
            name=str(d["name"]),
            east_m=float(d["east_m"]),
            north_m=float(d["north_m"]),
            visits=tuple(
                VisitBlock(
                    weekdays=tuple(int(w) for w in v["weekdays"]),
                    start_min=int(v["start_min"]),
                    duration_min=int(v["duration_min"]),
                )
                for v in d.get("visits", ())
            ),
            places=tuple(place(s) for s in d.get("places", ())),
        )

    origin = data.get("origin", [DEFAULT_ORIGIN.lat, DEFAULT_ORIGIN.lon])
    return Persona(
        name=str(data["name"]),
        places=tuple(place(pl) for pl in data["places"]),
        origin=GeoPoint(float(origin[0]), float(origin[1])),
        span_days=int(data.get("span_days", 60)),
        sampling_interval_s=int(data.get("sampling_interval_s", 600)),
        jitter_s=int(data.get("jitter_s", 60)),
        noise_sigma_m=float(data.get("noise_sigma_m", 10.0)),
        bad_fix_rate=float(data.get("bad_fix_rate", 0.01)),
        start_epoch=int(data.get("start_epoch", DEFAULT_START_EPOCH)),
        day_offset_min=int(data.get("day_offset_min", 0)),
        swaps=tuple(
            SwapPair(
                first=str(s["first"]),
                second=str(s["second"]),
                weekdays=tuple(int(w) for w in s["weekdays"]),
                starts_min=(int(s["starts_min"][0]), int(s["starts_min"][1])),
                duration_min=int(s["duration_min"]),
            )
            for s in data.get("swaps", ())
        ),
    )


def persona_to_json(p: Persona) -> str:
    return json.dumps(persona_to_dict(p), indent=2)


def persona_from_json(text: str) -> Persona:
    return persona_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# built-in personas

WEEKDAYS_ALL = (0, 1, 2, 3, 4, 5, 6)
WEEKDAYS_MON_FRI = (0, 1, 2, 3, 4)


def _ring_position(rng: np.random.Generator, radius: float, angle: float) -> tuple[float, float]:
    return radius * math.cos(angle), radius * math.sin(angle)


def _local_ring(
    rng: np.random.Generator, center: tuple[float, float], count: int, spacing: float
) -> list[tuple[float, float]]:
    """Sub-place positions on a ring so pairwise gaps stay near `spacing`."""
    # For count points on a ring, the smallest chord is 2 R sin(pi / count).
    radius = spacing / (2.0 * math.sin(math.pi / count)) if count > 1 else 0.0
    phase = rng.uniform(0.0, 2.0 * math.pi)
    out = []
    for i in range(count):
        ang = phase + 2.0 * math.pi * i / count
        out.append((center[0] + radius * math.cos(ang), center[1] + radius * math.sin(ang)))
    return out


def _parent_site(
    rng: np.random.Generator,
    name: str,
    center: tuple[float, float],
    weekdays: tuple[int, ...],
    first_start_min: int,
    local_count: int = 4,
    dwell_min: int = 38,
    gap_min: int = 6,
    spacing_m: float = 130.0,
) -> PlaceSpec:
    positions = _local_ring(rng, center, local_count, spacing_m)
    subs = []
    start = first_start_min
    for i, (e, n) in enumerate(positions):
        subs.append(
            PlaceSpec(
                name=f"{name}-{i}",
                east_m=e,
                north_m=n,
                visits=(VisitBlock(weekdays=weekdays, start_min=start, duration_min=dwell_min),),
            )
        )
        start += dwell_min + gap_min
    return PlaceSpec(name=name, east_m=center[0], north_m=center[1], places=tuple(subs))


def recovery_personas(count: int = 20, base_seed: int = 700) -> list[Persona]:
    """Personas with well-separated planted places for recovery scoring.

    Sites sit 400-570 m apart along the day's walking chain; parents carry
    four sub-places about 130 m apart. Dwells are sized so each planted
    global clears the default global bar and each sub-place clears the local
    bar without inviting further subdivision.
    """
    personas = []
    for i in range(count):
        rng = np.random.default_rng(base_seed + i)
        n_globals = 2 + i % 2  # alternate 2 and 3
        angle = rng.uniform(0.0, 2.0 * math.pi)
        home = (0.0, 0.0)
        site1 = _ring_position(rng, 400.0 + rng.uniform(0.0, 60.0), angle)
        places: list[PlaceSpec] = []
        home_dwell = int(rng.integers(185, 206))
        places.append(
            PlaceSpec(
                name="home",
                east_m=home[0],
                north_m=home[1],
                visits=(VisitBlock(weekdays=WEEKDAYS_ALL, start_min=18 * 60 + 30, duration_min=home_dwell),),
            )
        )
        places.append(
            _parent_site(
                rng,
                "work",
                site1,
                weekdays=WEEKDAYS_MON_FRI,
                first_start_min=9 * 60,
                local_count=4,
                dwell_min=int(rng.integers(36, 43)),
            )
        )
        if n_globals == 3:
            turn = angle + rng.uniform(math.pi / 2.5, math.pi / 1.8) * rng.choice((-1.0, 1.0))
            step = 400.0 + rng.uniform(0.0, 60.0)
            site2 = (site1[0] + step * math.cos(turn), site1[1] + step * math.sin(turn))
            leisure_days = WEEKDAYS_MON_FRI if i % 4 != 3 else (0, 1, 2, 3, 4, 5)
            places.append(
                PlaceSpec(
                    name="leisure",
                    east_m=site2[0],
                    north_m=site2[1],
                    visits=(
                        VisitBlock(
                            weekdays=leisure_days,
                            start_min=13 * 60 + 30,
                            duration_min=int(rng.integers(150, 166)),
                        ),
                    ),
                )
            )
        personas.append(Persona(name=f"recovery-{i:02d}", places=tuple(places)))
    return personas


def sweep_personas(count: int = 6, base_seed: int = 900) -> list[Persona]:
    """Personas whose campus pairs spread over distinct visit-day bands.

    The campus parent carries five swapped pairs of sub-places active on
    roughly 72%, 58%, 43%, 28% and 15% of the span's days, so raising the
    local frequency bar sheds them one band at a time. Because each pair's
    daily visit order is a coin flip, the shed places are exactly the ones
    carrying the symbol sequence's randomness: what remains is a more
    predictable routine. Home carries four daily sub-places that persist at
    every bar, keeping both globals qualified throughout a sweep. Dwells stay
    short enough that no sub-place can split into two qualifying halves.
    """
    bands: tuple[tuple[int, ...], ...] = (
        WEEKDAYS_MON_FRI,  # 43/60 of a 60-day span starting Wednesday
        (1, 3, 4, 5),      # 35/60
        (0, 2, 4),         # 26/60
        (0, 5),            # 17/60
        (5,),              # 9/60
    )
    window_min = 40
    personas = []
    for i in range(count):
        rng = np.random.default_rng(base_seed + i)
        angle = rng.uniform(0.0, 2.0 * math.pi)
        campus_center = _ring_position(rng, 430.0 + rng.uniform(0.0, 50.0), angle)
        campus_positions = _local_ring(
            rng, campus_center, 2 * len(bands), 88.0 + rng.uniform(0.0, 6.0)
        )
        subs = []
        swaps = []
        for j, wdays in enumerate(bands):
            first, second = f"campus-{2 * j}", f"campus-{2 * j + 1}"
            for name, pos in ((first, campus_positions[2 * j]), (second, campus_positions[2 * j + 1])):
                subs.append(PlaceSpec(name=name, east_m=pos[0], north_m=pos[1]))
            start = 9 * 60 + 100 * j
            swaps.append(
                SwapPair(
                    first=first,
                    second=second,
                    weekdays=wdays,
                    starts_min=(start, start + 50),
                    duration_min=window_min,
                )
            )
        campus = PlaceSpec(
            name="campus", east_m=campus_center[0], north_m=campus_center[1], places=tuple(subs)
        )
        home_positions = _local_ring(rng, (0.0, 0.0), 4, 78.0)
        home_starts = (18 * 60 + 30, 19 * 60 + 18, 20 * 60 + 6, 20 * 60 + 54)
        # The last dwell of the day is shortened because the overnight gap
        # credits its final fix with the capped half hour.
        home_durations = (44, 44, 44, 30)
        home_subs = tuple(
            PlaceSpec(
                name=f"home-{j}",
                east_m=pos[0],
                north_m=pos[1],
                visits=(VisitBlock(weekdays=WEEKDAYS_ALL, start_min=s, duration_min=dur),),
            )
            for j, (pos, s, dur) in enumerate(zip(home_positions, home_starts, home_durations))
        )
        home = PlaceSpec(name="home", east_m=0.0, north_m=0.0, places=home_subs)
        personas.append(Persona(name=f"sweep-{i:02d}", places=(home, campus), swaps=tuple(swaps)))
    return personas


def timing_persona(name: str = "timing-00", seed_offset: int = 0) -> Persona:
    """A dense persona: 5-minute sampling over a three-site weekday chain.

    Produces roughly 5,000-5,500 fixes over 60 days for runtime checks.
    """
    rng = np.random.default_rng(1300 + seed_offset)
    angle = rng.uniform(0.0, 2.0 * math.pi)
    site1 = _ring_position(rng, 420.0, angle)
    turn = angle + math.pi / 2.0
    site2 = (site1[0] + 420.0 * math.cos(turn), site1[1] + 420.0 * math.sin(turn))
    places = (
        PlaceSpec(
            name="home",
            east_m=0.0,
            north_m=0.0,
            visits=(VisitBlock(weekdays=WEEKDAYS_ALL, start_min=18 * 60 + 30, duration_min=195),),
        ),
        _parent_site(rng, "work", site1, weekdays=WEEKDAYS_MON_FRI, first_start_min=9 * 60,
                     local_count=4, dwell_min=40),
        PlaceSpec(
            name="leisure",
            east_m=site2[0],
            north_m=site2[1],
            visits=(VisitBlock(weekdays=(0, 1, 2, 3, 4, 5), start_min=13 * 60 + 30, duration_min=140),),
        ),
    )
    return Persona(name=name, places=places, sampling_interval_s=300, jitter_s=30)


def two_building_trajectory(days: int = 60, start_epoch: int = DEFAULT_START_EPOCH,
                            origin: GeoPoint = DEFAULT_ORIGIN) -> Trajectory:
    """Two buildings 49 m apart, visited morning and afternoon every day.

    Each building is a 9-point lattice of radius 2 m, so the closest
    cross-building fixes are 45 m apart and the building centroids 49 m
    apart: below a 50 m density radius, which welds the two stay-point
    clusters together, while the dwell structure still separates them. The
    midday quiet hour breaks the trace between the visits. Deterministic;
    accuracy is a constant 10 m.
    """
    offsets = [(0.0, 0.0), (2.0, 0.0), (-2.0, 0.0), (0.0, 2.0), (0.0, -2.0),
               (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)]
    centers = [(0.0, 0.0), (49.0, 0.0)]
    windows_min = [(9 * 60, 16), (13 * 60, 16)]  # start minute, fix count (10-min spacing)
    fixes: list[Fix] = []
    serial = 0
    for d in range(days):
        day_start = start_epoch + d * SECONDS_PER_DAY
        for (cx, cy), (start_min, n_fixes) in zip(centers, windows_min):
            for k in range(n_fixes):
                ox, oy = offsets[serial % len(offsets)]
                serial += 1
                pt = unproject_equirectangular(np.array([[cx + ox, cy + oy]]), origin)[0]
                fixes.append(
                    Fix(
                        timestamp=day_start + start_min * 60 + k * 600,
                        lat=float(pt[0]),
                        lon=float(pt[1]),
                        accuracy=10.0,
                    )
                )
    return Trajectory(user_id="two-building", fixes=tuple(fixes), segment_breaks=frozenset(), processed=False)


_BUILTIN_BUILDERS = {
    "recovery": recovery_personas,
    "sweep": sweep_personas,
}


def builtin_persona(name: str) -> Persona:
    """Look up a built-in persona: recovery-00..19, sweep-00..05, timing-00."""
    if name.startswith("timing-"):
        return timing_persona(name=name, seed_offset=int(name.split("-", 1)[1]))
    for prefix, builder in _BUILTIN_BUILDERS.items():
        if name.startswith(prefix + "-"):
            index = int(name.split("-", 1)[1])
            group = builder(count=index + 1)
            return group[index]
    raise KeyError(f"unknown built-in persona {name!r}")
