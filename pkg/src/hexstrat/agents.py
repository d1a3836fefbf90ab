"""Operator-level scripted behavior models.

All attack-capable models obey attack-first: an adjacent enemy always
yields an Attack.  Movement scoring evaluates candidate hexes (current
hex first, then neighbors in fixed direction order) and the first
minimum wins.  "Nearest" is Euclidean over hex centers throughout.
"""

from __future__ import annotations

from .engine import ATTACK, MOVE, PASS, Action, Unit, opponent
from .hexgrid import HexCoord, euclid_dist, neighbors
from .views import FullView

OFFENSIVE = "offensive"
DEFENSIVE = "defensive"

# Burt-Plus movement weights; the paper leaves these unspecified.
BURT_WEIGHT_ENEMY = 1.0
BURT_WEIGHT_CITY = 1.0
BURT_WEIGHT_FRIENDLY = 0.5
BURT_WEIGHT_SURROUND = 10.0


def posture(view, faction: str) -> str:
    """Offensive iff own combat power >= opponent's, over the visible roster."""
    own = view.combat_power(faction)
    opp = view.combat_power(opponent(faction))
    return OFFENSIVE if own >= opp else DEFENSIVE


def _candidates(view, unit: Unit) -> list[HexCoord]:
    out = [unit.pos]
    for n in neighbors(unit.pos, view.dims):
        if view.is_free(n):
            out.append(n)
    return out


def _move_or_pass(unit: Unit, dest: HexCoord) -> Action:
    if dest == unit.pos:
        return Action(unit.id, PASS)
    return Action(unit.id, MOVE, target_hex=dest)


def _nearest_dist(h: HexCoord, points: list[HexCoord]) -> float:
    return min(euclid_dist(h, p) for p in points)


def _best_candidate(cands: list[HexCoord], score) -> HexCoord:
    best = cands[0]
    best_s = score(cands[0])
    for h in cands[1:]:
        s = score(h)
        if s < best_s:
            best, best_s = h, s
    return best


def passagg_decide(view, unit: Unit, forced_posture: str | None = None) -> Action:
    targets = view.fire_targets(unit)
    if targets:
        return Action(unit.id, ATTACK, target_unit=view.choose(targets).id)
    mode = forced_posture or posture(view, unit.faction)
    enemies = [u.pos for u in view.visible_units(opponent(unit.faction))]
    cities = view.visible_cities()

    def score(h: HexCoord) -> float:
        s = 0.0
        if mode == OFFENSIVE and enemies:
            s += _nearest_dist(h, enemies)
        if cities:
            s += _nearest_dist(h, cities)
        return s

    return _move_or_pass(unit, _best_candidate(_candidates(view, unit), score))


def pass_decide(view, unit: Unit) -> Action:
    return passagg_decide(view, unit, forced_posture=DEFENSIVE)


def agg_decide(view, unit: Unit) -> Action:
    return passagg_decide(view, unit, forced_posture=OFFENSIVE)


def burtplus_decide(view, unit: Unit) -> Action:
    targets = view.fire_targets(unit)
    if targets:
        weakest = min(targets, key=lambda u: (u.strength, u.id))
        return Action(unit.id, ATTACK, target_unit=weakest.id)
    mode = posture(view, unit.faction)
    enemies = [u.pos for u in view.visible_units(opponent(unit.faction))]
    enemy_set = set(enemies)
    friendlies = [
        u.pos for u in view.visible_units(unit.faction) if u.id != unit.id
    ]
    cities = view.visible_cities()

    def score(h: HexCoord) -> float:
        s = 0.0
        if mode == OFFENSIVE and enemies:
            s += BURT_WEIGHT_ENEMY * _nearest_dist(h, enemies)
        if cities:
            s += BURT_WEIGHT_CITY * _nearest_dist(h, cities)
        if friendlies:
            s += BURT_WEIGHT_FRIENDLY * _nearest_dist(h, friendlies)
        flanking = sum(1 for n in neighbors(h, view.dims) if n in enemy_set)
        s += BURT_WEIGHT_SURROUND * flanking
        return s

    return _move_or_pass(unit, _best_candidate(_candidates(view, unit), score))


def city_decide(view, unit: Unit) -> Action:
    targets = view.fire_targets(unit)
    if targets:
        return Action(unit.id, ATTACK, target_unit=view.choose(targets).id)
    cities = view.visible_cities()
    if not cities:
        return Action(unit.id, PASS)
    if unit.pos in cities:
        return Action(unit.id, PASS)
    # equidistant cities tie-break on lowest (col, row)
    goal = min(cities, key=lambda h: (euclid_dist(unit.pos, h), h.col, h.row))
    dest = _best_candidate(_candidates(view, unit), lambda h: euclid_dist(h, goal))
    return _move_or_pass(unit, dest)


def killer_decide(view, unit: Unit) -> Action:
    targets = view.fire_targets(unit)
    if targets:
        return Action(unit.id, ATTACK, target_unit=view.choose(targets).id)
    enemies = [u.pos for u in view.visible_units(opponent(unit.faction))]
    if not enemies:
        return Action(unit.id, PASS)
    dest = _best_candidate(_candidates(view, unit), lambda h: _nearest_dist(h, enemies))
    return _move_or_pass(unit, dest)


def shootback_decide(view, unit: Unit) -> Action:
    targets = view.fire_targets(unit)
    if targets:
        return Action(unit.id, ATTACK, target_unit=view.choose(targets).id)
    return Action(unit.id, PASS)


def random_decide(view, unit: Unit) -> Action:
    """Uniform over legal actions; baseline agent for score normalization."""
    actions = view._s.legal_actions(unit.id)
    return view._s.rng.choice(actions)


REGISTRY = {
    "pass_agg": passagg_decide,
    "pass": pass_decide,
    "agg": agg_decide,
    "burt_plus": burtplus_decide,
    "city": city_decide,
    "killer": killer_decide,
    "shootback": shootback_decide,
    "random": random_decide,
}


def resolve(name: str):
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown behavior model {name!r}; known: {sorted(REGISTRY)}"
        ) from None


def decide(name: str, state, unit: Unit) -> Action:
    return resolve(name)(FullView(state), unit)
