"""Independent reference implementations used to cross-check the package.

Everything here is written from the rule definitions directly, on purpose
avoiding the package's own code paths, so a shared bug cannot hide. The
SHA-256 digests freeze each oracle's full output table; tests first check
the digest (the oracle itself has not drifted), then compare the package
against the table row by row.
"""

from __future__ import annotations

import hashlib
import json
import statistics
from itertools import combinations

DAMAGE_LEVELS = (0, 1, 100, 1000)
HERO_LEVELS = (0, 1, 2, 3, 5)

# Frozen output digests (computed once from this file, then pinned).
FEEDER_GRID_SHA256 = "e698ee40016429b25bd73cc499a9fecc50d764de2c6af3379e3ac704a58a6eba"
PRIORITY_TABLE_SHA256 = "9af3e20c8dbf58f98052aca2e11fe82ab51b9b6af37870f6eb8dac33e8b9c665"


def feeder_death_oracle(
    p2h: float,
    p2t: float,
    h2p: float,
    t2p: float,
    heroes: int,
    in_turret: bool,
    ratio_threshold: float = 0.4,
) -> tuple[bool, tuple[str, ...]]:
    """Branch-by-branch transliteration of the feeder death rules."""
    suspected = False
    reasons = set()
    if p2t == 0 and p2h == 0 and h2p == 0 and t2p != 0:
        suspected = True
        reasons.add("turret_diving")
    if p2h == 0 and h2p != 0:
        if in_turret:
            suspected = True
            reasons.add("turret_diving")
        elif heroes >= 3:
            suspected = True
            reasons.add("overextending")
    if h2p + t2p > 0 and (p2h + p2t) / (h2p + t2p) <= ratio_threshold:
        suspected = True
        reasons.add("disguise_resistance")
    return suspected, tuple(sorted(reasons))


def feeder_grid() -> list[dict]:
    """Exhaustive valid grid: damage levels, hero counts, turret flag.

    Combinations violating "no hero damage implies no damaging heroes"
    are excluded (they cannot occur in a valid death record).
    """
    rows = []
    for p2h in DAMAGE_LEVELS:
        for p2t in DAMAGE_LEVELS:
            for h2p in DAMAGE_LEVELS:
                for t2p in DAMAGE_LEVELS:
                    for heroes in HERO_LEVELS:
                        if h2p == 0 and heroes != 0:
                            continue
                        for in_turret in (False, True):
                            suspected, reasons = feeder_death_oracle(
                                p2h, p2t, h2p, t2p, heroes, in_turret
                            )
                            rows.append(
                                {
                                    "p2h": p2h,
                                    "p2t": p2t,
                                    "h2p": h2p,
                                    "t2p": t2p,
                                    "heroes": heroes,
                                    "in_turret": in_turret,
                                    "suspected": suspected,
                                    "reasons": list(reasons),
                                }
                            )
    return rows


PRIORITY_RANKS = (
    "turret_destruction",
    "dragon_killing",
    "hero_killing",
    "death",
    "assist",
    "poke",
    "monster_killing",
    "minion_killing",
    "inaction",
)


def priority_oracle(present: set[str]) -> str:
    """Scan the rank list top down; the first present kind wins."""
    for name in PRIORITY_RANKS:
        if name in present:
            return name
    raise ValueError("empty subset")


def priority_table() -> list[dict]:
    rows = []
    for size in range(1, len(PRIORITY_RANKS) + 1):
        for subset in combinations(PRIORITY_RANKS, size):
            rows.append(
                {"subset": sorted(subset), "winner": priority_oracle(set(subset))}
            )
    return rows


def five_number_oracle(values: list[float]) -> tuple[float, float, float, float, float]:
    """Tukey five-number summary via half-medians.

    The hinges are medians of the lower and upper halves, where an odd-length
    sample contributes its median to both halves. This is a different
    derivation from position arithmetic, so it cross-checks it.
    """
    s = sorted(values)
    n = len(s)
    if n == 0:
        raise ValueError("empty sample")
    if n == 1:
        v = s[0]
        return (v, v, v, v, v)
    half = (n + 1) // 2
    lower = s[:half]
    upper = s[n - half:]
    return (
        s[0],
        float(statistics.median(lower)),
        float(statistics.median(s)),
        float(statistics.median(upper)),
        s[-1],
    )


def table_digest(rows: list[dict]) -> str:
    blob = json.dumps(rows, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
