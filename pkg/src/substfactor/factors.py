"""Sliding block maps and factor maps between substitution subshifts.

A sliding block map reads a fixed window around each position and emits one
letter of a target alphabet.  The central operation here is inducing a
substitution on the image: substitute a legal window, slide the map over
the result, and crop the block that sits over the window's anchor cell.
When every window with the same image letter yields the same block, the
blocks form a substitution on the target alphabet; otherwise the offending
pair of windows is reported as a witness.

Symbol identifications are the window-1 special case used to walk down the
factor lattice; local inverses certify mutual local derivability.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import (
    Alphabet,
    Pattern,
    Substitution,
    apply,
    parse_pattern,
    power,
    supertile,
)
from .language import legal_patterns


@dataclass(frozen=True)
class Inconsistency:
    """Negative result with a witness; returned, not raised."""

    kind: str
    detail: str
    witness: tuple = ()

    def __str__(self):
        return f"inconsistent ({self.kind}): {self.detail}"


@dataclass(frozen=True)
class SlidingBlockMap:
    source_alphabet: Alphabet
    target_alphabet: Alphabet
    window: tuple[int, ...]
    table: tuple[tuple[Pattern, str], ...]
    anchor: tuple[int, ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.anchor is None:
            object.__setattr__(self, "anchor", (0,) * len(self.window))
        for p, t in self.table:
            if p.extent != self.window:
                raise ValueError("table pattern does not match window shape")
            if t not in self.target_alphabet:
                raise ValueError(f"target letter {t!r} outside target alphabet")
        object.__setattr__(self, "table",
                           tuple((p.normalized(), t) for p, t in self.table))

    @property
    def dim(self) -> int:
        return len(self.window)

    def value(self, window: Pattern) -> str:
        key = window.normalized()
        for p, t in self.table:
            if p == key:
                return t
        raise KeyError(f"window {window.to_text()!r} not in block map table")

    def domain(self) -> frozenset[Pattern]:
        return frozenset(p for p, _ in self.table)

    def to_text(self) -> str:
        lines = [f"window: {'x'.join(str(w) for w in self.window)}"]
        if any(self.anchor):
            lines.append("anchor: " + " ".join(str(a) for a in self.anchor))
        for p, t in sorted(self.table, key=lambda e: e[0].cells):
            lines.append(f"{p.to_text()} -> {t}")
        return "\n".join(lines) + "\n"


def parse_block_map(text: str, source_alphabet: Alphabet,
                    target_alphabet: Alphabet | None = None) -> SlidingBlockMap:
    window = None
    anchor = None
    entries = []
    targets = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("window:"):
            window = tuple(int(t) for t in line.split(":", 1)[1].strip().split("x"))
            continue
        if line.startswith("anchor:"):
            anchor = tuple(int(t) for t in line.split(":", 1)[1].split())
            continue
        if "->" not in line:
            raise ValueError(f"unparseable line {raw!r}")
        body, t = line.rsplit("->", 1)
        t = t.strip()
        p = parse_pattern(body.strip(), source_alphabet,
                          dim_hint=len(window) if window else None)
        entries.append((p, t))
        if t not in targets:
            targets.append(t)
    if window is None:
        raise ValueError("missing window line")
    tgt = target_alphabet or Alphabet(tuple(targets))
    return SlidingBlockMap(source_alphabet, tgt, window, tuple(entries),
                           anchor if anchor else None)


def apply_block_map(bm: SlidingBlockMap, p: Pattern) -> Pattern:
    """Slide the window over p; output extent shrinks by window - 1."""
    if p.dim != bm.dim:
        raise ValueError("dimension mismatch")
    out_extent = tuple(e - w + 1 for e, w in zip(p.extent, bm.window))
    if any(e < 1 for e in out_extent):
        raise ValueError("pattern too small to host a window")
    origin = tuple(o + a for o, a in zip(p.origin, bm.anchor))
    cells = []
    if bm.dim == 1:
        for x in range(out_extent[0]):
            w = p.subpattern((p.origin[0] + x,), bm.window)
            cells.append(bm.value(w))
        return Pattern(out_extent, tuple(cells), origin)
    for x in range(out_extent[0]):
        for y in range(out_extent[1]):
            w = p.subpattern((p.origin[0] + x, p.origin[1] + y), bm.window)
            cells.append(bm.value(w))
    return Pattern(out_extent, tuple(cells), origin)


def letter_projection(src: Substitution, letter_map: dict[str, str],
                      target_letters=None) -> SlidingBlockMap:
    """Window-1 map given by a total function on the source alphabet."""
    missing = [l for l in src.alphabet if l not in letter_map]
    if missing:
        raise ValueError(f"letter map misses {missing}")
    if target_letters is None:
        seen = []
        for l in src.alphabet:
            if letter_map[l] not in seen:
                seen.append(letter_map[l])
        target_letters = tuple(seen)
    window = (1,) * src.dim
    table = tuple((Pattern(window, (l,)), letter_map[l]) for l in src.alphabet)
    return SlidingBlockMap(src.alphabet, Alphabet(tuple(target_letters)), window, table)


def validate_block_map(bm: SlidingBlockMap, src: Substitution) -> None:
    """The table must be defined on exactly the legal windows of src."""
    legal = legal_patterns(src, bm.window).members
    dom = bm.domain()
    if dom != legal:
        extra = sorted(p.to_text() for p in dom - legal)
        missing = sorted(p.to_text() for p in legal - dom)
        raise ValueError(f"block map domain mismatch: extra={extra} missing={missing}")


def induced_substitution(src: Substitution, bm: SlidingBlockMap):
    """Substitution on the factor alphabet, or an Inconsistency witness.

    Requires constant shape and the default (minimal-corner) anchor.  For a
    window W with image letter t, the candidate image block consists of the
    map values over the substituted window at the L^d positions covering
    the anchor cell's image; all windows with the same letter must agree.
    """
    if not src.constant_shape:
        raise ValueError("induced substitutions require constant shape")
    if any(bm.anchor):
        raise ValueError("induced substitutions require the minimal-corner anchor")
    shape = src.shape
    blocks: dict[str, tuple[Pattern, Pattern]] = {}
    for window in sorted(legal_patterns(src, bm.window).members, key=lambda p: p.cells):
        t = bm.value(window)
        sub_w = apply(src, window)
        crop = sub_w.subpattern((0,) * src.dim,
                                tuple(l + w - 1 for l, w in zip(shape, bm.window)))
        block = apply_block_map(bm, crop)
        if t in blocks:
            prev_block, prev_window = blocks[t]
            if prev_block != block:
                return Inconsistency(
                    "induced-substitution",
                    f"windows {prev_window.to_text()!r} and {window.to_text()!r} "
                    f"both map to {t!r} but substitute differently",
                    (prev_window, window, t))
        else:
            blocks[t] = (block, window)
    letters = tuple(l for l in bm.target_alphabet if l in blocks)
    return Substitution.from_dict(Alphabet(letters), {l: blocks[l][0] for l in letters})


# -- symbol identifications ---------------------------------------------------


@dataclass(frozen=True)
class SymbolIdentification:
    """Partition of the alphabet; class representatives form the quotient."""

    classes: tuple[tuple[str, ...], ...]

    @staticmethod
    def parse(spec: str, alphabet: Alphabet) -> "SymbolIdentification":
        """E.g. "f=g,a=b=c" — unmentioned letters stay singletons."""
        classes = []
        mentioned = set()
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            members = tuple(s.strip() for s in part.split("="))
            for m in members:
                if m not in alphabet:
                    raise ValueError(f"unknown letter {m!r}")
                if m in mentioned:
                    raise ValueError(f"letter {m!r} in two classes")
                mentioned.add(m)
            classes.append(members)
        for l in alphabet:
            if l not in mentioned:
                classes.append((l,))
        return SymbolIdentification(tuple(classes))

    def validate(self, alphabet: Alphabet) -> None:
        seen = set()
        for cls in self.classes:
            if not cls:
                raise ValueError("empty class")
            for l in cls:
                if l not in alphabet:
                    raise ValueError(f"unknown letter {l!r}")
                if l in seen:
                    raise ValueError(f"letter {l!r} in two classes")
                seen.add(l)
        if seen != set(alphabet.letters):
            raise ValueError("classes do not cover the alphabet")

    def representative_map(self, alphabet: Alphabet) -> dict[str, str]:
        rep = {}
        for cls in self.classes:
            r = min(cls, key=alphabet.index)
            for l in cls:
                rep[l] = r
        return rep


def identify_symbols(src: Substitution, ident: SymbolIdentification):
    """Quotient substitution, or an Inconsistency naming a clashing pair."""
    ident.validate(src.alphabet)
    rep = ident.representative_map(src.alphabet)
    quotient = {}
    witness_of = {}
    for letter in src.alphabet:
        img = src.image(letter)
        qimg = Pattern(img.extent, tuple(rep[c] for c in img.cells), img.origin)
        r = rep[letter]
        if r in quotient:
            if quotient[r] != qimg:
                return Inconsistency(
                    "identification",
                    f"letters {witness_of[r]!r} and {letter!r} are identified "
                    f"but their quotient images differ",
                    (witness_of[r], letter))
        else:
            quotient[r] = qimg
            witness_of[r] = letter
    letters = tuple(l for l in src.alphabet if rep[l] == l)
    return Substitution.from_dict(Alphabet(letters), quotient)


def identification_map(src: Substitution, ident: SymbolIdentification) -> SlidingBlockMap:
    rep = ident.representative_map(src.alphabet)
    letters = tuple(l for l in src.alphabet if rep[l] == l)
    return letter_projection(src, rep, letters)


# -- local inverses -----------------------------------------------------------


def invert_block_map(src: Substitution, bm: SlidingBlockMap, max_radius: int = 8):
    """Smallest-radius sliding block map recovering the source letter.

    Checks radii r = 0..max_radius: the image letters on the centered
    (2r+1)-window must determine the source letter over the anchor.
    Returns (map, radius) or None when no radius up to the cap works.
    """
    d = src.dim
    for r in range(max_radius + 1):
        patch_extent = tuple(2 * r + w for w in bm.window)
        groups: dict[tuple, set[str]] = {}
        for s in legal_patterns(src, patch_extent).members:
            img = apply_block_map(bm, s)
            center = s.cells[_flat_index(s.extent, (r,) * d)]
            groups.setdefault(img.cells, set()).add(center)
        if all(len(v) == 1 for v in groups.values()):
            table = tuple(
                (Pattern((2 * r + 1,) * d, key), next(iter(v)))
                for key, v in sorted(groups.items()))
            inv = SlidingBlockMap(bm.target_alphabet, bm.source_alphabet,
                                  (2 * r + 1,) * d, table, (r,) * d)
            return inv, r
    return None


def _flat_index(extent, pos):
    if len(extent) == 1:
        return pos[0]
    return pos[0] * extent[1] + pos[1]


# -- factor map search --------------------------------------------------------


class SearchCapExceeded(Exception):
    pass


def substitution_isomorphism(a: Substitution, b: Substitution):
    """Letter bijection g with g(a(x)) = b(g(x)), or None."""
    if len(a.alphabet) != len(b.alphabet):
        return None
    letters_a = a.alphabet.letters
    for perm in product(*[b.alphabet.letters] * len(letters_a)):
        if len(set(perm)) != len(perm):
            continue
        g = dict(zip(letters_a, perm))
        ok = True
        for x in letters_a:
            img = a.image(x)
            mapped = Pattern(img.extent, tuple(g[c] for c in img.cells), img.origin)
            if mapped != b.image(g[x]):
                ok = False
                break
        if ok:
            return g
    return None


def search_block_map(src: Substitution, tgt: Substitution,
                     window: tuple[int, ...], cap: int = 10 ** 6):
    """First window assignment (in canonical order) inducing tgt, up to renaming.

    When the constant lengths differ by a square the square of the shorter
    side is used, mirroring how fixed points of a rule and its square are
    interchanged.  Raises SearchCapExceeded when the assignment space is
    larger than ``cap``.
    """
    if not (src.constant_shape and tgt.constant_shape):
        raise ValueError("search requires constant shape")
    ls, lt = src.shape[0], tgt.shape[0]
    if ls != lt:
        if lt * lt == ls:
            tgt = power(tgt, 2)
        elif ls * ls == lt:
            src = power(src, 2)
        else:
            raise ValueError(f"incompatible lengths {ls} and {lt}")
    windows = sorted(legal_patterns(src, window).members, key=lambda p: p.cells)
    n_assign = len(tgt.alphabet) ** len(windows)
    if n_assign > cap:
        raise SearchCapExceeded(f"{n_assign} assignments exceed the cap {cap}")
    for assignment in product(tgt.alphabet.letters, repeat=len(windows)):
        if len(set(assignment)) != len(tgt.alphabet):
            continue
        bm = SlidingBlockMap(src.alphabet, tgt.alphabet, tuple(window),
                             tuple(zip(windows, assignment)))
        induced = induced_substitution(src, bm)
        if isinstance(induced, Inconsistency):
            continue
        if len(induced.alphabet) != len(tgt.alphabet):
            continue
        if substitution_isomorphism(induced, tgt):
            return bm
    return None


# -- preimage counting --------------------------------------------------------


def preimage_count(src: Substitution, bm: SlidingBlockMap, image_patch: Pattern) -> int:
    """Legal source patches mapping exactly onto the given image patch."""
    ext = tuple(e + w - 1 for e, w in zip(image_patch.extent, bm.window))
    target = image_patch.normalized()
    count = 0
    for s in legal_patterns(src, ext).members:
        if apply_block_map(bm, s).normalized() == target:
            count += 1
    return count


def image_legal_patterns(src: Substitution, bm: SlidingBlockMap, shape):
    """Shape-sized patterns of the factor subshift (images of legal patches)."""
    ext = tuple(e + w - 1 for e, w in zip(shape, bm.window))
    out = set()
    for s in legal_patterns(src, ext).members:
        out.add(apply_block_map(bm, s).normalized())
    return frozenset(out)


# -- the paper's named maps ---------------------------------------------------


def named_block_map(name: str) -> SlidingBlockMap:
    """Catalog factor maps, keyed by the system they act on."""
    from .core import BAR, catalog, barred

    one, one_bar = "1", barred("1")
    if name == "chi":  # rs4 -> toeplitzT
        src = catalog("rs4")
        pairs = {"ab": "A", "cd": "A", "ad": "B", "cb": "B",
                 "ba": "C", "dc": "C", "da": "D", "bc": "D"}
        table = tuple((Pattern.word(tuple(k)), v) for k, v in pairs.items())
        return SlidingBlockMap(src.alphabet, Alphabet(("A", "B", "C", "D")), (2,), table)
    if name == "psi":  # tm -> pd, psi(w)(i) = -w(i) w(i+1)
        src = catalog("tm")
        table = []
        for x, y in product((one, one_bar), repeat=2):
            sign = -1 * (1 if x == one else -1) * (1 if y == one else -1)
            table.append((Pattern.word((x, y)), one if sign > 0 else one_bar))
        return SlidingBlockMap(src.alphabet, catalog("pd").alphabet, (2,), tuple(table))
    if name == "phi":  # rs4 -> binary (+-1) Rudin-Shapiro
        src = catalog("rs4")
        return letter_projection(src, {"a": one, "b": one, "c": one_bar, "d": one_bar},
                                 (one, one_bar))
    if name == "debar":  # universal -> rs4
        src = catalog("universal")
        return letter_projection(src, {l: l.replace(BAR, "") for l in src.alphabet},
                                 ("a", "b", "c", "d"))
    if name == "to_tm":  # universal -> tm
        src = catalog("universal")
        return letter_projection(src, {l: one_bar if BAR in l else one for l in src.alphabet},
                                 (one, one_bar))
    if name == "squiral_blockmap":  # squiral -> fmax
        src = catalog("squiral")
        base = {
            "a": ((one, one), (one_bar, one)),
            "b": ((one, one), (one, one_bar)),
            "c": ((one, one_bar), (one, one)),
            "d": ((one_bar, one), (one, one)),
            "e": ((one, one), (one_bar, one_bar)),
            "f": ((one, one_bar), (one, one_bar)),
            "g": ((one, one_bar), (one_bar, one)),
        }
        flip = {one: one_bar, one_bar: one}
        table = []
        for t, rows in base.items():
            table.append((Pattern.from_rows(rows), t))
            table.append((Pattern.from_rows(tuple(tuple(flip[c] for c in r) for r in rows)), t))
        return SlidingBlockMap(src.alphabet, Alphabet(tuple("abcdefg")), (2, 2), tuple(table))
    if name in ("table_map1", "table_map2"):
        src = catalog("table")
        first16, third_row = table_legal_groups()
        table = []
        if name == "table_map1":
            tgt = Alphabet(("0", "1"))
            for p in first16:
                table.append((p, "0"))
            for p in third_row:
                table.append((p, "1"))
        else:
            tgt = Alphabet(("0", "1", "2"))
            for p in first16:
                table.append((p, "0"))
            for p in third_row[:4]:
                table.append((p, "1"))
            for p in third_row[4:]:
                table.append((p, "2"))
        return SlidingBlockMap(src.alphabet, tgt, (2, 2), tuple(table))
    raise KeyError(f"unknown block map {name!r}")


def table_legal_groups():
    """The 24 legal 2x2 table patterns in their printed order and grouping.

    Returns (first sixteen, third row of eight); the last four of the third
    row are the four substitution images themselves.
    """
    printed = [
        # first row of the display
        ("0 2", "0 2"), ("0 2", "1 0"), ("0 2", "2 1"), ("1 0", "3 1"),
        ("1 1", "3 3"), ("1 3", "3 0"), ("2 0", "1 1"), ("2 1", "1 3"),
        # second row
        ("2 3", "0 2"), ("2 3", "1 0"), ("2 3", "2 1"), ("3 0", "0 2"),
        ("3 0", "1 0"), ("3 0", "2 1"), ("3 1", "2 3"), ("3 3", "2 0"),
        # third row
        ("0 2", "2 0"), ("1 3", "3 1"), ("2 0", "0 2"), ("3 1", "1 3"),
        ("0 2", "1 1"), ("1 0", "3 0"), ("2 1", "2 3"), ("3 3", "0 2"),
    ]
    pats = [Pattern.from_rows([r.split() for r in rows]) for rows in printed]
    return pats[:16], pats[16:]
