"""The language of a substitution subshift.

Legal patterns are computed by closure: harvest every window of large
supertiles, then keep substituting known-legal patterns and harvesting
until two rounds in a row add nothing.  Column structure classifies a
constant-shape rule as bijective (every position map is a permutation),
as having a coincidence (some power has a constant position map), or
neither.  Supertile frames and corner configurations expose the border
behaviour that governs how infinite-order supertiles can meet.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .core import Pattern, Substitution, apply, is_primitive, power, supertile


@dataclass(frozen=True)
class PatternSet:
    shape: tuple[int, ...]
    members: frozenset[Pattern]

    def __post_init__(self):
        for p in self.members:
            if p.extent != self.shape:
                raise ValueError("member has wrong shape")

    def __len__(self):
        return len(self.members)

    def __contains__(self, p: Pattern):
        return p.normalized() in self.members

    def sorted(self) -> list[Pattern]:
        return sorted(self.members, key=lambda p: p.cells)

    def to_text(self) -> str:
        shape = "x".join(str(e) for e in self.shape)
        lines = [f"shape: {shape}"]
        lines.extend(p.to_text() for p in self.sorted())
        return "\n".join(lines) + "\n"


def _seed_level(sub: Substitution, shape) -> int:
    """Level whose supertiles contain every window of the requested shape."""
    if sub.constant_shape:
        level = 0
        ext = (1,) * sub.dim
        while any(e < s for e, s in zip(ext, shape)):
            level += 1
            ext = tuple(e * l for e, l in zip(ext, sub.shape))
        return level + 2
    level = 0
    shortest = 1
    while shortest < shape[0]:
        level += 1
        shortest = min(supertile(sub, l, level).size for l in sub.alphabet)
    return level + 2


@lru_cache(maxsize=None)
def legal_patterns(sub: Substitution, shape: tuple[int, ...]) -> PatternSet:
    """All shape-sized windows of the subshift, by substitute-and-harvest."""
    if not is_primitive(sub):
        raise ValueError("legal patterns require a primitive substitution")
    found: set[Pattern] = set()
    for letter in sub.alphabet:
        tile = supertile(sub, letter, _seed_level(sub, shape))
        found.update(tile.subpatterns(shape))
    stable_rounds = 0
    while stable_rounds < 2:
        new: set[Pattern] = set()
        for p in found:
            new.update(apply(sub, p).subpatterns(shape))
        before = len(found)
        found |= new
        stable_rounds = stable_rounds + 1 if len(found) == before else 0
    return PatternSet(tuple(shape), frozenset(found))


# -- column structure ---------------------------------------------------------


@dataclass(frozen=True)
class ColumnStructure:
    """Per-position letter maps of a constant-shape rule, with classification.

    ``maps`` holds the level-1 maps, keyed by image position.  The
    classification is "bijective", "coincidence" (with the least level and a
    witnessing position), or "neither" within the explored levels.
    """

    maps: tuple[tuple[tuple[int, ...], tuple[tuple[str, str], ...]], ...]
    classification: str
    coincidence_level: int | None = None
    coincidence_position: tuple[int, ...] | None = None

    @property
    def bijective(self) -> bool:
        return self.classification == "bijective"

    def level_one_map(self, pos) -> dict[str, str]:
        for q, m in self.maps:
            if q == tuple(pos):
                return dict(m)
        raise KeyError(pos)


def _positions(extent):
    if len(extent) == 1:
        return [(x,) for x in range(extent[0])]
    return [(x, y) for x in range(extent[0]) for y in range(extent[1])]


def column_structure(sub: Substitution, max_level: int = 4) -> ColumnStructure:
    if not sub.constant_shape:
        raise ValueError("column structure requires constant shape")
    letters = sub.alphabet.letters
    level_tiles = {l: sub.image(l) for l in letters}
    maps = []
    for pos in _positions(sub.shape):
        maps.append((pos, tuple((l, level_tiles[l].get(*pos)) for l in letters)))
    bijective = all(len({v for _, v in m}) == len(letters) for _, m in maps)
    coincidence = None
    tiles = {l: Pattern((1,) * sub.dim, (l,)) for l in letters}
    for level in range(1, max_level + 1):
        tiles = {l: apply(sub, p) for l, p in tiles.items()}
        ext = tiles[letters[0]].extent
        for pos in _positions(ext):
            values = {tiles[l].get(*pos) for l in letters}
            if len(values) == 1:
                coincidence = (level, pos)
                break
        if coincidence:
            break
    if coincidence:
        classification = "coincidence"
        return ColumnStructure(tuple(maps), classification,
                               coincidence[0], coincidence[1])
    return ColumnStructure(tuple(maps), "bijective" if bijective else "neither")


def pairwise_distinct_everywhere(sub: Substitution, level: int) -> bool:
    """Do the level-n supertiles differ at every single position?"""
    if not sub.constant_shape:
        raise ValueError("requires constant shape")
    letters = sub.alphabet.letters
    tiles = [supertile(sub, l, level) for l in letters]
    ext = tiles[0].extent
    for pos in _positions(ext):
        if len({t.get(*pos) for t in tiles}) != len(letters):
            return False
    return True


# -- supertile borders --------------------------------------------------------


@dataclass(frozen=True)
class FrameReport:
    """Border vectors of a level-n supertile plus a corner-block fingerprint.

    Rows are read left to right, columns top to bottom.  The fingerprint
    covers the (N-1) x (N-1) block in the bottom-left corner (the part that
    turns out to be letter-independent for the squiral's model-set factor).
    """

    letter: str
    level: int
    top_row: tuple[str, ...]
    bottom_row: tuple[str, ...]
    left_col: tuple[str, ...]
    right_col: tuple[str, ...]
    corner_block_fingerprint: str


def _border(sub: Substitution, letter: str, level: int, side: str) -> tuple[str, ...]:
    """Border vector of the level-n supertile, without building the tile.

    Sides: top/bottom rows left to right, left/right columns bottom to top.
    """
    lx, ly = sub.shape

    @lru_cache(maxsize=None)
    def rec(l: str, n: int) -> tuple[str, ...]:
        if n == 0:
            return (l,)
        img = sub.image(l)
        if side == "top":
            line = [img.get(x, ly - 1) for x in range(lx)]
        elif side == "bottom":
            line = [img.get(x, 0) for x in range(lx)]
        elif side == "left":
            line = [img.get(0, y) for y in range(ly)]
        else:
            line = [img.get(lx - 1, y) for y in range(ly)]
        out: list[str] = []
        for c in line:
            out.extend(rec(c, n - 1))
        return tuple(out)

    return rec(letter, level)


def supertile_frame(sub: Substitution, letter: str, level: int) -> FrameReport:
    if sub.dim != 2:
        raise ValueError("frames are for 2D substitutions")
    tile = supertile(sub, letter, level)
    nx, ny = tile.extent
    top = tuple(tile.get(x, ny - 1) for x in range(nx))
    bottom = tuple(tile.get(x, 0) for x in range(nx))
    left = tuple(tile.get(0, ny - 1 - i) for i in range(ny))
    right = tuple(tile.get(nx - 1, ny - 1 - i) for i in range(ny))
    corner = tile.subpattern((0, 0), (nx - 1, ny - 1)) if nx > 1 else tile
    digest = hashlib.sha256(corner.to_text().encode()).hexdigest()[:16]
    return FrameReport(letter, level, top, bottom, left, right, digest)


# -- corner configurations ----------------------------------------------------


@dataclass(frozen=True)
class QuartetConfiguration:
    """Fixed-point structure at the meeting corner of four supertiles.

    ``center`` is the letter in the lower-left quadrant cell next to the
    origin; the four arms run along the grid lines through that cell.  Arm
    labels are the eventually-constant letters (constant from the second
    entry on at the probe depth), or None when unresolved.
    """

    seed_pattern: Pattern
    center: str
    up: str | None
    down: str | None
    left: str | None
    right: str | None


@dataclass(frozen=True)
class CornerReport:
    quartets: tuple[QuartetConfiguration, ...]
    horizontal_separations: tuple[str, ...]
    vertical_separations: tuple[str, ...]
    unresolved_separations: bool


def _arm_label(seq) -> str | None:
    """Eventually-constant letter: constant from index 2 onward."""
    tail = list(seq)[2:]
    if tail and all(c == tail[0] for c in tail):
        return tail[0]
    return None


PROBE_LEVEL = 6


def corner_configurations(sub: Substitution, period: int = 1) -> CornerReport:
    from .core import enumerate_seeds

    if sub.dim != 2:
        raise ValueError("corner configurations are for 2D substitutions")
    if not is_primitive(sub):
        raise ValueError("requires a primitive substitution")
    sigma = power(sub, period) if period > 1 else sub
    level = -(-PROBE_LEVEL // period)  # probe at least 6 single steps
    seeds = enumerate_seeds(sub, period)
    quartets = []
    for seed in seeds:
        ll, ul, lr, ur = seed.pattern.cells  # x-major from (-1,-1)
        up = _border(sigma, ul, level, "right")            # bottom to top
        down = tuple(reversed(_border(sigma, ll, level, "right")))[1:]
        left = tuple(reversed(_border(sigma, ll, level, "top")))[1:]
        right = _border(sigma, lr, level, "top")
        quartets.append(QuartetConfiguration(
            seed.pattern, ll,
            _arm_label(up), _arm_label(down), _arm_label(left), _arm_label(right)))
    horizontal = set()
    vertical = set()
    unresolved = False
    for letter in sub.alphabet:
        row = _border(sigma, letter, level, "top")
        col = _border(sigma, letter, level, "right")
        h = _arm_label(row[:-1])
        v = _arm_label(col[:-1])
        if h is None or v is None:
            unresolved = True
        else:
            horizontal.add(h)
            vertical.add(v)
    return CornerReport(tuple(quartets), tuple(sorted(horizontal)),
                        tuple(sorted(vertical)), unresolved)
