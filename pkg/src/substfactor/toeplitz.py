"""Arithmetic-progression structure of constant-length fixed points.

A fixed point w of the m-th power of a length-L substitution satisfies
w(Q*i + r) = image(w(i))[r] with Q = L^m.  Whenever all letters agree at
position r of their level-k images, the whole coset Q^k Z + r carries one
letter; iterating over k resolves positions from coarse to fine.  Letters
of a rule with a coincidence resolve a density-one set of positions this
way (the Toeplitz signature); bijective rules resolve nothing.

Positions never resolved by any level up to the requested depth are
settled by direct comparison of the finitely many fixed points of the same
period: a position where two fixed points disagree is exceptional (it lies
in no progression at any depth), all others are merely unresolved at this
depth and carry the letter read off the fixed point itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Pattern, Seed, Substitution, enumerate_seeds, fixed_point_patch, power, supertile


@dataclass(frozen=True)
class CosetSystem:
    """Positions of one letter: disjoint progressions plus leftover points."""

    letter: str
    progressions: tuple[tuple[int, int], ...]  # (modulus, residue)
    exceptional: tuple[int, ...]
    unresolved: tuple[int, ...] = ()

    def __post_init__(self):
        for m, r in self.progressions:
            if m < 1 or not 0 <= r < m:
                raise ValueError(f"bad progression ({m}, {r})")

    def in_progressions(self, i: int) -> bool:
        return any(i % m == r for m, r in self.progressions)

    def __contains__(self, i: int) -> bool:
        return self.in_progressions(i) or i in self.exceptional or i in self.unresolved

    def to_text(self) -> str:
        lines = [f"letter: {self.letter}"]
        lines.extend(f"{m}*Z + {r}" for m, r in self.progressions)
        if self.exceptional:
            lines.append("exceptional: " + " ".join(str(i) for i in self.exceptional))
        if self.unresolved:
            lines.append("unresolved: " + " ".join(str(i) for i in self.unresolved))
        return "\n".join(lines) + "\n"


def _constant_length(sub: Substitution) -> int:
    if sub.dim != 1 or not sub.constant_shape:
        raise ValueError("coordinatization requires a constant-length 1D substitution")
    return sub.shape[0]


def coordinatize(sub: Substitution, seed: Seed, depth: int = 8,
                 window: int = 10 ** 5) -> dict[str, CosetSystem]:
    """Letter positions of the seed's fixed point as coset systems.

    Progressions have moduli Q^k (Q = L^period, k <= depth), found by
    scanning the constant columns of the iterated rule among residues whose
    parent coset stayed unresolved.  The remaining window positions are
    split into exceptional points and depth-limited leftovers by comparing
    against the other fixed points of the same period.
    """
    L = _constant_length(sub)
    if depth < 1 or window < 1:
        raise ValueError("depth and window must be positive")
    sigma = power(sub, seed.period)
    Q = L ** seed.period
    letters = sub.alphabet.letters

    progressions: dict[str, list[tuple[int, int]]] = {l: [] for l in letters}
    unresolved_residues = [0]  # residues mod Q^0
    tiles = {l: Pattern((1,), (l,)) for l in letters}
    modulus = 1
    for _ in range(depth):
        from .core import apply as _apply

        tiles = {l: _apply(sigma, p) for l, p in tiles.items()}
        modulus *= Q
        next_unresolved = []
        for parent in unresolved_residues:
            for j in range(Q):
                r = parent + j * (modulus // Q)
                values = {tiles[l].cells[r] for l in letters}
                if len(values) == 1:
                    progressions[values.pop()].append((modulus, r))
                else:
                    next_unresolved.append(r)
        unresolved_residues = next_unresolved
        if not unresolved_residues:
            break

    patch = _fixed_point_window(sub, seed, window)
    others = [s for s in enumerate_seeds(sub, seed.period)
              if s.pattern != seed.pattern]
    other_patches = [_fixed_point_window(sub, s, window) for s in others]

    exceptional: dict[str, list[int]] = {l: [] for l in letters}
    leftovers: dict[str, list[int]] = {l: [] for l in letters}
    residue_set = set(unresolved_residues)
    if residue_set:
        for i in range(-window, window + 1):
            if i % modulus in residue_set:
                letter = patch.get(i)
                if any(p.get(i) != letter for p in other_patches):
                    exceptional[letter].append(i)
                else:
                    leftovers[letter].append(i)
    out = {}
    for l in letters:
        out[l] = CosetSystem(l, tuple(sorted(progressions[l])),
                             tuple(exceptional[l]), tuple(leftovers[l]))
    return out


def _fixed_point_window(sub: Substitution, seed: Seed, window: int) -> Pattern:
    L = _constant_length(sub)
    level = seed.period
    while L ** level <= window:
        level += seed.period
    return fixed_point_patch(sub, seed, level)


def resolved_density(systems: dict[str, CosetSystem]) -> Fraction:
    """Total density of the listed progressions (must be disjoint)."""
    density = Fraction(0)
    seen: list[tuple[int, int]] = []
    for cs in systems.values():
        for m, r in cs.progressions:
            for m2, r2 in seen:
                from math import gcd

                g = gcd(m, m2)
                if r % g == r2 % g:
                    raise ValueError(f"progressions overlap: ({m},{r}) and ({m2},{r2})")
            seen.append((m, r))
            density += Fraction(1, m)
    return density


def second_fixed_point_delta(sub: Substitution, seed_a: Seed, seed_b: Seed,
                             window: int) -> tuple[int, ...]:
    """Positions in [-window, window] where the two fixed points differ."""
    if seed_a.period != seed_b.period:
        raise ValueError("seeds must share the period")
    pa = _fixed_point_window(sub, seed_a, window)
    pb = _fixed_point_window(sub, seed_b, window)
    return tuple(i for i in range(-window, window + 1) if pa.get(i) != pb.get(i))
