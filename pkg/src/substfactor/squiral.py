"""Reconstruction of the squiral block substitution by constraint search.

The two-color block rule is pinned down by four published properties: it
is bijective, it commutes with the color exchange, the seven-letter block
map induces the maximal model-set factor substitution, and it admits
exactly 14 legal 2x2 patterns (only the two constant blocks are missing).
Color-exchange equivariance halves the unknowns to the 3x3 image of one
color, so the search space is the 512 sign patterns; every constraint is
checked mechanically and the surviving orbit is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .core import Alphabet, Pattern, Substitution, barred, catalog, is_primitive
from .factors import Inconsistency, SlidingBlockMap, induced_substitution
from .language import column_structure, legal_patterns

ONE = "1"
ONE_BAR = barred("1")
_FLIP = {ONE: ONE_BAR, ONE_BAR: ONE}


def _color_alphabet() -> Alphabet:
    return Alphabet((ONE, ONE_BAR))


def _seven_letter_map(source: Alphabet) -> SlidingBlockMap:
    base = {
        "a": ((ONE, ONE), (ONE_BAR, ONE)),
        "b": ((ONE, ONE), (ONE, ONE_BAR)),
        "c": ((ONE, ONE_BAR), (ONE, ONE)),
        "d": ((ONE_BAR, ONE), (ONE, ONE)),
        "e": ((ONE, ONE), (ONE_BAR, ONE_BAR)),
        "f": ((ONE, ONE_BAR), (ONE, ONE_BAR)),
        "g": ((ONE, ONE_BAR), (ONE_BAR, ONE)),
    }
    table = []
    for t, rows in base.items():
        table.append((Pattern.from_rows(rows), t))
        table.append((Pattern.from_rows(tuple(tuple(_FLIP[c] for c in r) for r in rows)), t))
    return SlidingBlockMap(source, Alphabet(tuple("abcdefg")), (2, 2), tuple(table))


def _flip_pattern(p: Pattern) -> Pattern:
    return Pattern(p.extent, tuple(_FLIP[c] for c in p.cells), p.origin)


@dataclass(frozen=True)
class ReconstructionReport:
    survivors: tuple[Substitution, ...]
    canonical: Substitution
    orbit_closed_under_flip: bool
    selected_by: str


@lru_cache(maxsize=1)
def reconstruct() -> ReconstructionReport:
    """Search all 512 color-exchange-equivariant candidates."""
    alpha = _color_alphabet()
    bm = _seven_letter_map(alpha)
    target = catalog("fmax")
    all_two = {Pattern((2, 2), cells) for cells in product((ONE, ONE_BAR), repeat=4)}
    constant = {p for p in all_two if len(set(p.cells)) == 1}
    expected_legal = frozenset(all_two - constant)
    survivors = []
    for signs in product((ONE, ONE_BAR), repeat=9):
        image_one = Pattern((3, 3), signs)
        sub = Substitution.from_dict(alpha, {ONE: image_one,
                                             ONE_BAR: _flip_pattern(image_one)})
        if not is_primitive(sub):
            continue
        if not column_structure(sub, max_level=1).bijective:
            continue
        if legal_patterns(sub, (2, 2)).members != expected_legal:
            continue
        try:
            induced = induced_substitution(sub, bm)
        except KeyError:
            continue
        if isinstance(induced, Inconsistency) or induced != target:
            continue
        survivors.append(sub)
    if not survivors:
        raise RuntimeError("no candidate satisfies the published constraints")
    canonical, selected_by = _disambiguate(survivors)
    flips = {Substitution.from_dict(alpha, {ONE: _flip_pattern(s.image(ONE)),
                                            ONE_BAR: s.image(ONE)})
             for s in survivors}
    return ReconstructionReport(tuple(survivors), canonical,
                                flips == set(survivors), selected_by)


def _disambiguate(survivors):
    """Single out the rule whose hull zeta equals the published one.

    The flip-related square roots generate the same hull but act
    differently on it (their odd-power fixed-point counts differ), and the
    published zeta function pins the map down.  Lexicographic order is the
    fallback when the zeta test does not decide.
    """
    from .appcomplex import hull_zeta
    from .zeta import closed_form

    target = closed_form("squiral")
    matching = [s for s in survivors if hull_zeta(s) == target]
    if len(matching) == 1:
        return matching[0], "hull zeta function"
    pool = matching or survivors
    return min(pool, key=lambda s: s.image(ONE).cells), "lexicographic order"


def squiral_substitution() -> Substitution:
    return reconstruct().canonical
