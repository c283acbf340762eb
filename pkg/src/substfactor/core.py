"""Alphabets, patterns, substitutions, and the named substitution catalog.

Patterns live on Z^d (d = 1 or 2).  Two-dimensional cells are indexed by
(x, y) with x growing rightwards and y growing upwards; the text form
prints rows top-first, so the first printed row holds the cells with the
largest y.  A substitution maps the cell at position p to the block of
cells L*p + [0, L)^d, which is the concatenation action used for fixed
points: a seed placed around the origin vertex has each quadrant corner
reproduced by the corner of its own image.

The catalog covers: fibonacci, the eight-letter universal morphism, the
quaternary Rudin-Shapiro rule rs4, Thue-Morse (tm), period doubling (pd),
the generalized families gtm/gpd, the Toeplitz rule toeplitzT, the squiral
block rule (reconstructed by constraint search), its maximal model-set
factor fmax, the table rule, the two table factors, and symbol
identifications of fmax.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

BAR = "̄"  # combining macron: barred letters are "a" + BAR etc.


def barred(letter: str) -> str:
    return letter + BAR


DEFAULT_MAX_CELLS = 6561 * 6561


def max_cells_limit() -> int:
    env = os.environ.get("SUBSTFACTOR_MAX_CELLS")
    if env:
        return int(env)
    return DEFAULT_MAX_CELLS


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("duplicate letters")

    def index(self, letter: str) -> int:
        return self.letters.index(letter)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, letter):
        return letter in self.letters


@dataclass(frozen=True)
class Pattern:
    """Finite array of letters with an anchor position.

    ``extent`` is the per-axis size, ``origin`` the coordinates of the
    minimal-corner cell.  ``cells`` is x-major: in 2D the letter at
    absolute position (x, y) sits at index (x - ox) * ny + (y - oy).
    """

    extent: tuple[int, ...]
    cells: tuple[str, ...]
    origin: tuple[int, ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.origin is None:
            object.__setattr__(self, "origin", (0,) * len(self.extent))
        n = 1
        for e in self.extent:
            n *= e
        if n != len(self.cells):
            raise ValueError("extent does not match number of cells")
        if len(self.origin) != len(self.extent):
            raise ValueError("origin/extent dimension mismatch")

    @property
    def dim(self) -> int:
        return len(self.extent)

    @property
    def size(self) -> int:
        n = 1
        for e in self.extent:
            n *= e
        return n

    @staticmethod
    def word(letters, origin: int = 0) -> "Pattern":
        letters = tuple(letters)
        return Pattern((len(letters),), letters, (origin,))

    @staticmethod
    def from_rows(rows, origin=(0, 0)) -> "Pattern":
        """Rows as printed, top row first; rows[i][j] is column j of row i."""
        rows = [tuple(r) for r in rows]
        ny = len(rows)
        nx = len(rows[0])
        if any(len(r) != nx for r in rows):
            raise ValueError("ragged rows")
        cells = []
        for x in range(nx):
            for y in range(ny):
                cells.append(rows[ny - 1 - y][x])
        return Pattern((nx, ny), tuple(cells), tuple(origin))

    def get(self, *pos: int) -> str:
        for p, o, e in zip(pos, self.origin, self.extent):
            if not 0 <= p - o < e:
                raise IndexError(f"position {pos} outside pattern")
        if self.dim == 1:
            return self.cells[pos[0] - self.origin[0]]
        x = pos[0] - self.origin[0]
        y = pos[1] - self.origin[1]
        return self.cells[x * self.extent[1] + y]

    def rows(self) -> list[tuple[str, ...]]:
        """Printed form: list of rows, top row (largest y) first."""
        if self.dim == 1:
            return [self.cells]
        nx, ny = self.extent
        return [tuple(self.cells[x * ny + y] for x in range(nx)) for y in range(ny - 1, -1, -1)]

    def normalized(self) -> "Pattern":
        if all(o == 0 for o in self.origin):
            return self
        return Pattern(self.extent, self.cells, (0,) * self.dim)

    def translated(self, offset) -> "Pattern":
        return Pattern(self.extent, self.cells, tuple(o + d for o, d in zip(self.origin, offset)))

    def subpattern(self, corner, shape) -> "Pattern":
        """Sub-block with absolute minimal corner ``corner``; keeps position."""
        if self.dim == 1:
            (x0,), (w,) = corner, shape
            rel = x0 - self.origin[0]
            return Pattern((w,), self.cells[rel:rel + w], (x0,))
        (x0, y0), (w, h) = corner, shape
        nx, ny = self.extent
        rx, ry = x0 - self.origin[0], y0 - self.origin[1]
        if not (0 <= rx and rx + w <= nx and 0 <= ry and ry + h <= ny):
            raise IndexError("subpattern out of range")
        cells = []
        for x in range(rx, rx + w):
            base = x * ny
            cells.extend(self.cells[base + ry:base + ry + h])
        return Pattern((w, h), tuple(cells), (x0, y0))

    def subpatterns(self, shape):
        """All sub-blocks of the given shape, normalized to the origin."""
        out = []
        if self.dim == 1:
            (w,) = shape
            for x in range(self.extent[0] - w + 1):
                out.append(Pattern((w,), self.cells[x:x + w]))
            return out
        w, h = shape
        nx, ny = self.extent
        for x in range(nx - w + 1):
            for y in range(ny - h + 1):
                cells = []
                for xx in range(x, x + w):
                    base = xx * ny
                    cells.extend(self.cells[base + y:base + y + h])
                out.append(Pattern((w, h), tuple(cells)))
        return out

    def positions(self):
        if self.dim == 1:
            return ((x,) for x in range(self.origin[0], self.origin[0] + self.extent[0]))
        ox, oy = self.origin
        nx, ny = self.extent
        return ((x, y) for x in range(ox, ox + nx) for y in range(oy, oy + ny))

    def to_text(self, juxtapose: bool = False) -> str:
        if self.dim == 1:
            return "".join(self.cells) if juxtapose else " ".join(self.cells)
        return " / ".join(" ".join(r) for r in self.rows())

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class Substitution:
    """A morphism letter -> word (1D) or letter -> fixed block (2D)."""

    alphabet: Alphabet
    images: tuple[tuple[str, Pattern], ...]

    def __post_init__(self):
        img = dict(self.images)
        if set(img) != set(self.alphabet.letters):
            raise ValueError("images must cover the alphabet exactly")
        dims = {p.dim for p in img.values()}
        if len(dims) != 1:
            raise ValueError("mixed image dimensions")
        d = dims.pop()
        for p in img.values():
            if any(c not in self.alphabet for c in p.cells):
                raise ValueError("image cell outside alphabet")
            if p.size == 0:
                raise ValueError("empty image")
        if d == 2:
            extents = {p.extent for p in img.values()}
            if len(extents) != 1:
                raise ValueError("2D substitutions must have constant shape")
            if any(e < 2 for e in next(iter(extents))):
                raise ValueError("2D block length must be at least 2 per axis")

    @staticmethod
    def from_dict(alphabet: Alphabet, images: dict) -> "Substitution":
        pairs = []
        for letter in alphabet:
            img = images[letter]
            if isinstance(img, Pattern):
                pairs.append((letter, img.normalized()))
            elif isinstance(img, str):
                pairs.append((letter, Pattern.word(tuple(img))))
            else:
                pairs.append((letter, Pattern.word(tuple(img))))
        return Substitution(alphabet, tuple(pairs))

    def image(self, letter: str) -> Pattern:
        for l, p in self.images:
            if l == letter:
                return p
        raise KeyError(letter)

    @property
    def dim(self) -> int:
        return self.images[0][1].dim

    @property
    def constant_shape(self) -> bool:
        extents = {p.extent for _, p in self.images}
        return len(extents) == 1

    @property
    def shape(self) -> tuple[int, ...]:
        if not self.constant_shape:
            raise ValueError("substitution does not have constant shape")
        return self.images[0][1].extent

    def __hash__(self):
        return hash((self.alphabet.letters, self.images))


# -- basic operations --------------------------------------------------------


def apply(sub: Substitution, pattern: Pattern) -> Pattern:
    """Substitute every cell; blocks tile L*p + [0, L)^d.

    Constant shape scales the origin by L per axis.  In the general 1D case
    images are concatenated in order and the result is anchored at the bar:
    the image of the cell at position 0 starts at position 0 (the pattern's
    origin must not be positive).
    """
    if pattern.dim != sub.dim:
        raise ValueError("pattern dimension does not match substitution")
    for c in pattern.cells:
        if c not in sub.alphabet:
            raise ValueError(f"letter {c!r} not in alphabet")
    if pattern.size == 0:
        return pattern
    if sub.dim == 1 and not sub.constant_shape:
        if pattern.origin[0] > 0:
            raise ValueError("general 1D patterns must touch the origin")
        out = []
        neg_len = 0
        for i, c in enumerate(pattern.cells):
            img = sub.image(c).cells
            out.extend(img)
            if pattern.origin[0] + i < 0:
                neg_len += len(img)
        return Pattern((len(out),), tuple(out), (-neg_len,))
    shape = sub.shape
    if sub.dim == 1:
        (L,) = shape
        out = []
        for c in pattern.cells:
            out.extend(sub.image(c).cells)
        return Pattern((len(out),), tuple(out), (pattern.origin[0] * L,))
    lx, ly = shape
    nx, ny = pattern.extent
    total = nx * lx * ny * ly
    if total > max_cells_limit():
        raise ValueError(f"pattern would exceed the {max_cells_limit()} cell cap")
    big_ny = ny * ly
    cells = [""] * total
    for x in range(nx):
        base_in = x * ny
        for y in range(ny):
            img = sub.image(pattern.cells[base_in + y])
            for ix in range(lx):
                col = img.cells[ix * ly:(ix + 1) * ly]
                base_out = (x * lx + ix) * big_ny + y * ly
                cells[base_out:base_out + ly] = col
    return Pattern((nx * lx, ny * ly), tuple(cells),
                   (pattern.origin[0] * lx, pattern.origin[1] * ly))


def iterate(sub: Substitution, pattern: Pattern, n: int) -> Pattern:
    for _ in range(n):
        pattern = apply(sub, pattern)
    return pattern


def supertile(sub: Substitution, letter: str, level: int) -> Pattern:
    """n-fold image of a single letter."""
    if letter not in sub.alphabet:
        raise ValueError(f"letter {letter!r} not in alphabet")
    cell = Pattern((1,) * sub.dim, (letter,))
    return iterate(sub, cell, level)


def compose(outer: Substitution, inner: Substitution) -> Substitution:
    """Letter -> outer(inner(letter)); alphabets must agree."""
    if outer.alphabet != inner.alphabet:
        raise ValueError("alphabet mismatch")
    return Substitution(outer.alphabet, tuple(
        (l, apply(outer, p).normalized()) for l, p in inner.images))


def power(sub: Substitution, n: int) -> Substitution:
    if n < 1:
        raise ValueError("power must be >= 1")
    out = sub
    for _ in range(n - 1):
        out = compose(sub, out)
    return out


def substitution_matrix(sub: Substitution) -> list[list[int]]:
    """Entry (a, b) counts occurrences of letter a in the image of b."""
    letters = sub.alphabet.letters
    mat = [[0] * len(letters) for _ in letters]
    for j, b in enumerate(letters):
        for c in sub.image(b).cells:
            mat[letters.index(c)][j] += 1
    return mat


def is_primitive(sub: Substitution) -> bool:
    """Some power of the substitution matrix is entrywise positive."""
    n = len(sub.alphabet)
    reach = [[bool(x) for x in row] for row in substitution_matrix(sub)]
    cur = [row[:] for row in reach]
    bound = (n - 1) ** 2 + 1
    for _ in range(bound):
        if all(all(row) for row in cur):
            return True
        cur = [[any(cur[i][k] and reach[k][j] for k in range(n)) for j in range(n)]
               for i in range(n)]
    return all(all(row) for row in cur)


# -- seeds and fixed points --------------------------------------------------


@dataclass(frozen=True)
class Seed:
    """Central configuration of a substitution-fixed point.

    1D: the pattern holds (left|right) at positions -1, 0.  2D: a 2x2 block
    on the four cells around the origin vertex.  ``period`` is the power of
    the substitution that fixes the bi-infinite configuration.
    """

    pattern: Pattern
    period: int

    def __post_init__(self):
        d = self.pattern.dim
        if self.pattern.extent != (2,) * d or self.pattern.origin != (-1,) * d:
            raise ValueError("seed must be a 2x..x2 block anchored at (-1, ...)")

    @property
    def dim(self) -> int:
        return self.pattern.dim

    def label(self) -> str:
        if self.dim == 1:
            return f"{self.pattern.cells[0]}|{self.pattern.cells[1]}"
        return self.pattern.to_text()


def _corner_conditions(sub: Substitution, m: int):
    """For each quadrant cell of a 2D seed, the recurring-corner letters.

    Returns dicts keyed by quadrant cell position relative to the origin
    vertex; a letter qualifies if the m-fold image reproduces it in the
    corner pointing back at the origin.
    """
    pm = {l: supertile(sub, l, m) for l in sub.alphabet}
    ex, ey = pm[sub.alphabet.letters[0]].extent
    ok = {}
    for pos, corner in {
        (-1, -1): (ex - 1, ey - 1),
        (0, -1): (0, ey - 1),
        (-1, 0): (ex - 1, 0),
        (0, 0): (0, 0),
    }.items():
        ok[pos] = {l for l in sub.alphabet if pm[l].get(*corner) == l}
    return ok


def enumerate_seeds(sub: Substitution, period: int = 1) -> list[Seed]:
    """All legal seeds whose corners recur under the period-fold image."""
    from . import language  # deferred: language builds on this module

    if not is_primitive(sub):
        raise ValueError("seed enumeration requires a primitive substitution")
    if not sub.constant_shape:
        raise ValueError("seed enumeration requires constant shape")
    legal = language.legal_patterns(sub, (2,) * sub.dim).members
    seeds = []
    if sub.dim == 1:
        images = {l: supertile(sub, l, period) for l in sub.alphabet}
        for left, right in product(sub.alphabet, repeat=2):
            if images[right].cells[0] != right or images[left].cells[-1] != left:
                continue
            if Pattern.word((left, right)) not in legal:
                continue
            seeds.append(Seed(Pattern.word((left, right), origin=-1), period))
        return seeds
    ok = _corner_conditions(sub, period)
    for p in sorted(legal, key=lambda q: q.cells):
        ll, ul, lr, ur = p.cells  # x-major: (0,0),(0,1),(1,0),(1,1) of normalized
        if (ll in ok[(-1, -1)] and ul in ok[(-1, 0)]
                and lr in ok[(0, -1)] and ur in ok[(0, 0)]):
            seeds.append(Seed(p.translated((-1, -1)), period))
    return seeds


def fixed_point_patch(sub: Substitution, seed: Seed, level: int) -> Pattern:
    """Central patch of the fixed point: the level-n image of the seed.

    ``level`` is rounded up to a multiple of the seed period.  The patch is
    checked to extend the seed (the recurrence condition made visible).
    """
    m = seed.period
    once = iterate(sub, seed.pattern, m)
    for pos in seed.pattern.positions():
        if once.get(*pos) != seed.pattern.get(*pos):
            raise ValueError("seed fails the recurrence condition")
    n = ((level + m - 1) // m) * m if level > 0 else m
    return once if n == m else iterate(sub, once, n - m)


# -- serialization -----------------------------------------------------------


def format_substitution(sub: Substitution) -> str:
    lines = ["alphabet: " + " ".join(sub.alphabet.letters)]
    for letter in sub.alphabet:
        img = sub.image(letter)
        lines.append(f"{letter} -> {img.to_text(juxtapose=sub.dim == 1)}")
    return "\n".join(lines) + "\n"


def tokenize_word(text: str, alphabet: Alphabet) -> list[str]:
    """Split a juxtaposed word using greedy longest-match on the alphabet."""
    letters = sorted(alphabet.letters, key=len, reverse=True)
    out = []
    i = 0
    while i < len(text):
        for l in letters:
            if text.startswith(l, i):
                out.append(l)
                i += len(l)
                break
        else:
            raise ValueError(f"cannot tokenize {text!r} at position {i}")
    return out


def parse_pattern(text: str, alphabet: Alphabet, dim_hint: int | None = None) -> Pattern:
    text = text.strip()
    if "/" in text:
        rows = [r.split() for r in text.split("/")]
        return Pattern.from_rows(rows)
    parts = text.split()
    if len(parts) > 1:
        if dim_hint == 2:
            return Pattern.from_rows([parts])
        return Pattern.word(parts)
    return Pattern.word(tokenize_word(text, alphabet))


def parse_substitution(text: str) -> Substitution:
    alphabet = None
    images = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            alphabet = Alphabet(tuple(line.split(":", 1)[1].split()))
            continue
        if "->" not in line:
            raise ValueError(f"unparseable line {raw!r}")
        if alphabet is None:
            raise ValueError("alphabet line must come first")
        head, body = line.split("->", 1)
        images[head.strip()] = parse_pattern(body, alphabet)
    if alphabet is None:
        raise ValueError("missing alphabet line")
    return Substitution.from_dict(alphabet, images)


# -- the catalog -------------------------------------------------------------

CATALOG_NAMES = (
    "fibonacci", "universal", "rs4", "tm", "pd", "gtm", "gpd",
    "toeplitzT", "squiral", "fmax", "table", "tablefac1", "tablefac2",
    "fmax_ident",
)

ONE = "1"
ONE_BAR = barred("1")


def _univ_images():
    a, b, c, d = "a", "b", "c", "d"
    ab, bb, cb, db = map(barred, (a, b, c, d))
    return {
        a: (a, bb), b: (a, db), c: (c, db), d: (c, bb),
        ab: (ab, b), bb: (ab, d), cb: (cb, d), db: (cb, b),
    }


@lru_cache(maxsize=None)
def catalog(name: str, k: int | None = None, l: int | None = None,
            identify: str | None = None) -> Substitution:
    """Named substitutions; gtm/gpd take k, l >= 1, fmax_ident a partition."""
    if name == "fibonacci":
        alpha = Alphabet(("a", "b"))
        return Substitution.from_dict(alpha, {"a": ("a", "b"), "b": ("a",)})
    if name == "universal":
        letters = ("a", "b", "c", "d", barred("a"), barred("b"), barred("c"), barred("d"))
        return Substitution.from_dict(Alphabet(letters), _univ_images())
    if name == "rs4":
        alpha = Alphabet(("a", "b", "c", "d"))
        return Substitution.from_dict(alpha, {
            "a": ("a", "b"), "b": ("a", "d"), "c": ("c", "d"), "d": ("c", "b")})
    if name == "tm":
        alpha = Alphabet((ONE, ONE_BAR))
        return Substitution.from_dict(alpha, {ONE: (ONE, ONE_BAR), ONE_BAR: (ONE_BAR, ONE)})
    if name == "pd":
        alpha = Alphabet((ONE, ONE_BAR))
        return Substitution.from_dict(alpha, {ONE: (ONE, ONE_BAR), ONE_BAR: (ONE, ONE)})
    if name == "gtm":
        k, l = _check_kl(k, l)
        alpha = Alphabet(("a", "b"))
        return Substitution.from_dict(alpha, {
            "a": ("a",) * k + ("b",) * l, "b": ("b",) * k + ("a",) * l})
    if name == "gpd":
        k, l = _check_kl(k, l)
        alpha = Alphabet(("a", "b"))
        u = ("b",) * (k - 1) + ("a",) + ("b",) * (l - 1)
        return Substitution.from_dict(alpha, {"a": u + ("b",), "b": u + ("a",)})
    if name == "toeplitzT":
        alpha = Alphabet(("A", "B", "C", "D"))
        return Substitution.from_dict(alpha, {
            "A": ("A", "C"), "B": ("A", "D"), "C": ("B", "D"), "D": ("B", "C")})
    if name == "squiral":
        from .squiral import squiral_substitution
        return squiral_substitution()
    if name == "fmax":
        alpha = Alphabet(tuple("abcdefg"))
        rows = {
            "a": ["g g a", "d c g", "a b g"],
            "b": ["f f b", "d c g", "a b g"],
            "c": ["f f c", "d c e", "a b e"],
            "d": ["g g d", "d c e", "a b e"],
            "e": ["g g e", "d c e", "a b e"],
            "f": ["f f f", "d c g", "a b g"],
            "g": ["g g g", "d c g", "a b g"],
        }
        return Substitution.from_dict(alpha, {
            l: Pattern.from_rows([r.split() for r in rows[l]]) for l in alpha})
    if name == "table":
        alpha = Alphabet(("0", "1", "2", "3"))
        rows = {"0": ["1 0", "3 0"], "1": ["0 2", "1 1"],
                "2": ["2 1", "2 3"], "3": ["3 3", "0 2"]}
        return Substitution.from_dict(alpha, {
            l: Pattern.from_rows([r.split() for r in rows[l]]) for l in alpha})
    if name == "tablefac1":
        alpha = Alphabet(("0", "1"))
        return Substitution.from_dict(alpha, {
            l: Pattern.from_rows([["0", l], ["1", "0"]]) for l in alpha})
    if name == "tablefac2":
        alpha = Alphabet(("0", "1", "2"))
        tops = {"0": "1", "1": "0", "2": "2"}
        return Substitution.from_dict(alpha, {
            l: Pattern.from_rows([["2", tops[l]], ["1", "2"]]) for l in alpha})
    if name == "fmax_ident":
        if not identify:
            raise ValueError("fmax_ident requires an identification, e.g. 'f=g'")
        from .factors import SymbolIdentification, identify_symbols
        base = catalog("fmax")
        result = identify_symbols(base, SymbolIdentification.parse(identify, base.alphabet))
        if isinstance(result, Substitution):
            return result
        raise ValueError(f"inconsistent identification: {result}")
    raise KeyError(f"unknown catalog name {name!r}")


def _check_kl(k, l):
    if k is None or l is None or k < 1 or l < 1:
        raise ValueError("gtm/gpd require integers k, l >= 1")
    return k, l
