"""Collared approximant complexes and the cohomology of substitution hulls.

The approximant of a constant-shape substitution is a finite CW complex
whose cells are collared: a face is a letter together with its legal
one-ring neighbourhood, edges carry the legal block containing them, and
vertices the legal 2x2 (or 2-letter) block around them.  Substituting a
collar determines the collars of all image cells, so the substitution
induces a cellular self-map; its matrices on cochains feed the zeta
function, and the direct limit of its action on integral cohomology gives
the Čech cohomology of the hull.

Integral cohomology is computed from coboundaries by Smith normal form,
keeping enough of the transformation to transport the substitution action
onto the quotient presentation.  Direct limits are reported in the
canonical shape: one Z[1/n] summand per integer eigenvalue n of the
action on the eventual free part (plain Z for eigenvalues of modulus one)
plus the eventual image of the torsion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import intlinalg as la
from .core import Pattern, Substitution, apply, is_primitive, supertile
from .language import legal_patterns
from .zeta import RationalFunction, zeta_ap


class ActionUndefined(Exception):
    """The substitution action failed to land on a known collared cell."""


@dataclass(frozen=True)
class CWApproximant:
    """Finite CW complex with labelled cells and integer boundary matrices.

    ``cells[k]`` lists the k-cell labels; ``boundary[k]`` (k >= 1) maps
    k-chains to (k-1)-chains, columns indexed like ``cells[k]``.
    """

    dim: int
    cells: tuple[tuple, ...]
    boundary: tuple
    collar: int = 1

    def counts(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells)

    def check_boundary_squared(self) -> bool:
        for k in range(2, self.dim + 1):
            prod = la.mat_mul(self.boundary[k - 1], self.boundary[k])
            if any(x != 0 for row in prod for x in row):
                return False
        return True


@dataclass(frozen=True)
class CochainAction:
    """Matrices of the substitution action on cochain groups, degree 0..d."""

    matrices: tuple

    def chain_matrix(self, k: int):
        return la.transpose(self.matrices[k])


# -- construction -------------------------------------------------------------


def build_approximant(sub: Substitution, collar: int = 1) -> CWApproximant:
    if not sub.constant_shape:
        raise ValueError("approximants require constant shape")
    if not is_primitive(sub):
        raise ValueError("approximants require a primitive substitution")
    r = collar
    if sub.dim == 1:
        edges = sorted(legal_patterns(sub, (2 * r + 1,)).members, key=lambda p: p.cells)
        vertices = sorted(legal_patterns(sub, (2 * r,)).members, key=lambda p: p.cells)
        vidx = {v: i for i, v in enumerate(vertices)}
        bnd = la.zeros(len(vertices), len(edges))
        for j, e in enumerate(edges):
            tail = e.subpattern((0,), (2 * r,)).normalized()
            head = e.subpattern((1,), (2 * r,)).normalized()
            bnd[vidx[head]][j] += 1
            bnd[vidx[tail]][j] -= 1
        return CWApproximant(1, (tuple(vertices), tuple(edges)), (None, bnd), collar)

    faces = sorted(legal_patterns(sub, (2 * r + 1, 2 * r + 1)).members, key=lambda p: p.cells)
    hedges = sorted(legal_patterns(sub, (2 * r + 1, 2 * r)).members, key=lambda p: p.cells)
    vedges = sorted(legal_patterns(sub, (2 * r, 2 * r + 1)).members, key=lambda p: p.cells)
    vertices = sorted(legal_patterns(sub, (2 * r, 2 * r)).members, key=lambda p: p.cells)
    edges = [("h", e) for e in hedges] + [("v", e) for e in vedges]
    eidx = {e: i for i, e in enumerate(edges)}
    vidx = {v: i for i, v in enumerate(vertices)}

    # faces are collared on [-r, r]^2 with the carrying cell at (0, 0);
    # boundary = bottom + right - top - left with edges oriented +x / +y
    b2 = la.zeros(len(edges), len(faces))
    for j, p in enumerate(faces):
        centered = p.translated((-r, -r))
        bottom = ("h", centered.subpattern((-r, -r), (2 * r + 1, 2 * r)).normalized())
        top = ("h", centered.subpattern((-r, -r + 1), (2 * r + 1, 2 * r)).normalized())
        left = ("v", centered.subpattern((-r, -r), (2 * r, 2 * r + 1)).normalized())
        right = ("v", centered.subpattern((-r + 1, -r), (2 * r, 2 * r + 1)).normalized())
        b2[eidx[bottom]][j] += 1
        b2[eidx[right]][j] += 1
        b2[eidx[top]][j] -= 1
        b2[eidx[left]][j] -= 1

    b1 = la.zeros(len(vertices), len(edges))
    for j, (kind, e) in enumerate(edges):
        if kind == "h":
            centered = e.translated((-r, -r))
            tail = centered.subpattern((-r, -r), (2 * r, 2 * r)).normalized()
            head = centered.subpattern((-r + 1, -r), (2 * r, 2 * r)).normalized()
        else:
            centered = e.translated((-r, -r))
            tail = centered.subpattern((-r, -r), (2 * r, 2 * r)).normalized()
            head = centered.subpattern((-r, -r + 1), (2 * r, 2 * r)).normalized()
        b1[vidx[head]][j] += 1
        b1[vidx[tail]][j] -= 1
    return CWApproximant(2, (tuple(vertices), tuple(edges), tuple(faces)),
                         (None, b1, b2), collar)


def _lookup(index: dict, label, kind: str, source):
    try:
        return index[label]
    except KeyError:
        raise ActionUndefined(
            f"image {kind} collar not among the complex cells; source cell "
            f"{source}") from None


def substitution_action(sub: Substitution, cw: CWApproximant) -> CochainAction:
    """Cochain matrices of the inflate-and-subdivide self-map."""
    r = cw.collar
    if sub.dim == 1:
        (L,) = sub.shape
        vertices, edges = cw.cells
        vidx = {v: i for i, v in enumerate(vertices)}
        eidx = {e: i for i, e in enumerate(edges)}
        chain1 = la.zeros(len(edges), len(edges))
        for j, e in enumerate(edges):
            img = apply(sub, e.translated((-r,)))
            for i in range(L):
                collar = img.subpattern((i - r,), (2 * r + 1,)).normalized()
                chain1[_lookup(eidx, collar, "edge", e.to_text())][j] += 1
        chain0 = la.zeros(len(vertices), len(vertices))
        for j, v in enumerate(vertices):
            img = apply(sub, v.translated((-r,)))
            collar = img.subpattern((-r,), (2 * r,)).normalized()
            chain0[_lookup(vidx, collar, "vertex", v.to_text())][j] += 1
        return CochainAction((la.transpose(chain0), la.transpose(chain1)))

    lx, ly = sub.shape
    vertices, edges, faces = cw.cells
    vidx = {v: i for i, v in enumerate(vertices)}
    eidx = {e: i for i, e in enumerate(edges)}
    fidx = {f: i for i, f in enumerate(faces)}
    chain2 = la.zeros(len(faces), len(faces))
    for j, f in enumerate(faces):
        img = apply(sub, f.translated((-r, -r)))
        for i in range(lx):
            for k in range(ly):
                collar = img.subpattern((i - r, k - r), (2 * r + 1, 2 * r + 1)).normalized()
                chain2[_lookup(fidx, collar, "face", f.to_text())][j] += 1
    chain1 = la.zeros(len(edges), len(edges))
    for j, (kind, e) in enumerate(edges):
        img = apply(sub, e.translated((-r, -r)))
        if kind == "h":
            for i in range(lx):
                collar = img.subpattern((i - r, -r), (2 * r + 1, 2 * r)).normalized()
                chain1[_lookup(eidx, ("h", collar), "edge", e.to_text())][j] += 1
        else:
            for k in range(ly):
                collar = img.subpattern((-r, k - r), (2 * r, 2 * r + 1)).normalized()
                chain1[_lookup(eidx, ("v", collar), "edge", e.to_text())][j] += 1
    chain0 = la.zeros(len(vertices), len(vertices))
    for j, v in enumerate(vertices):
        img = apply(sub, v.translated((-r, -r)))
        collar = img.subpattern((-r, -r), (2 * r, 2 * r)).normalized()
        chain0[_lookup(vidx, collar, "vertex", v.to_text())][j] += 1
    return CochainAction((la.transpose(chain0), la.transpose(chain1), la.transpose(chain2)))


def check_chain_map(cw: CWApproximant, action: CochainAction) -> bool:
    """boundary . chain_k == chain_{k-1} . boundary for every degree."""
    for k in range(1, cw.dim + 1):
        lhs = la.mat_mul(cw.boundary[k], action.chain_matrix(k))
        rhs = la.mat_mul(action.chain_matrix(k - 1), cw.boundary[k])
        if lhs != rhs:
            return False
    return True


# -- abelian invariants -------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    """Z[1/n] summands, free rank, torsion orders; notes flag odd blocks."""

    localized: tuple[tuple[int, int], ...] = ()
    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    notes: tuple[str, ...] = ()

    def __str__(self) -> str:
        parts = []
        for n, mult in self.localized:
            s = f"Z[1/{n}]"
            parts.append(s if mult == 1 else f"{s}^{mult}")
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        for t in self.torsion:
            parts.append(f"Z_{t}")
        return " + ".join(parts) if parts else "0"

    @staticmethod
    def parse(text: str) -> "AbelianInvariants":
        """Inverse of str: e.g. "Z[1/9] + Z[1/3]^2 + Z^6 + Z_2"."""
        localized = []
        free = 0
        torsion = []
        text = text.strip()
        if text in ("0", ""):
            return AbelianInvariants()
        for part in text.split("+"):
            part = part.strip()
            mult = 1
            if "^" in part:
                part, m = part.split("^")
                mult = int(m)
            if part.startswith("Z[1/"):
                n = int(part[4:part.index("]")])
                localized.append((n, mult))
            elif part.startswith("Z_"):
                torsion.extend([int(part[2:])] * mult)
            elif part == "Z":
                free += mult
            else:
                raise ValueError(f"cannot parse summand {part!r}")
        localized.sort(key=lambda t: -t[0])
        return AbelianInvariants(tuple(localized), free, tuple(sorted(torsion, reverse=True)))


@dataclass(frozen=True)
class GroupWithAction:
    """F.g. abelian group presented by generator orders (0 = free) with an
    endomorphism matrix in those generators (columns = images)."""

    orders: tuple[int, ...]
    action: tuple[tuple[int, ...], ...]

    def invariants(self) -> AbelianInvariants:
        free = sum(1 for d in self.orders if d == 0)
        torsion = tuple(sorted((d for d in self.orders if d > 1), reverse=True))
        return AbelianInvariants((), free, torsion)


def _subquotient_with_action(kernel, relations, action_matrix) -> GroupWithAction:
    """H = span(kernel)/span(relations) with the action transported to it."""
    ncols = len(kernel[0]) if kernel and kernel[0] else 0
    if ncols == 0:
        return GroupWithAction((), ())
    w = la.solve_columns(kernel, relations)
    if w is None:
        raise ArithmeticError("relations do not lie in the kernel lattice")
    x = la.solve_columns(kernel, la.mat_mul(action_matrix, kernel))
    if x is None:
        raise ArithmeticError("action does not preserve the kernel lattice")
    nrel = len(w[0]) if w and w[0] else 0
    if nrel == 0:
        orders = [0] * ncols
        act = x
        keep = list(range(ncols))
        return GroupWithAction(tuple(orders), tuple(tuple(row) for row in act))
    sf = la.SmithForm(w)
    orders = [sf.diagonal[i] if i < len(sf.diagonal) else 0 for i in range(ncols)]
    act_y = la.mat_mul(sf.u, la.mat_mul(x, sf.uinv))
    keep = [i for i in range(ncols) if orders[i] != 1]
    reduced = []
    for i in keep:
        row = []
        for j in keep:
            v = act_y[i][j]
            if orders[i] > 1:
                v %= orders[i]
            row.append(v)
        reduced.append(row)
    return GroupWithAction(tuple(orders[i] for i in keep),
                           tuple(tuple(r) for r in reduced))


def cohomology_with_action(cw: CWApproximant, action: CochainAction) -> list[GroupWithAction]:
    """H^k of the approximant with the induced endomorphism, k = 0..dim."""
    out = []
    for k in range(cw.dim + 1):
        n_k = len(cw.cells[k])
        if k < cw.dim:
            delta_k = la.transpose(cw.boundary[k + 1])
            kernel = la.kernel_basis(delta_k) if n_k else []
        else:
            kernel = la.identity(n_k)
        if k > 0:
            relations = la.transpose(cw.boundary[k])
        else:
            relations = [[0] * 0 for _ in range(n_k)]
        out.append(_subquotient_with_action(kernel, relations, action.matrices[k]))
    return out


def integral_cohomology(cw: CWApproximant) -> list[AbelianInvariants]:
    """Cohomology of the approximant itself (no direct limit)."""
    identity_action = CochainAction(tuple(la.identity(len(c)) for c in cw.cells))
    return [g.invariants() for g in cohomology_with_action(cw, identity_action)]


# -- direct limits ------------------------------------------------------------


def _eventual_free_action(af):
    """Quotient away the generalized 0-eigenspace; return the induced matrix."""
    n = len(af)
    if n == 0:
        return af
    power = [row[:] for row in af]
    for _ in range(n - 1):
        power = la.mat_mul(power, af)
    kernel = la.kernel_basis(power)  # saturated: basis of eventual kernel
    kdim = len(kernel[0]) if kernel and kernel[0] else 0
    if kdim == 0:
        return af
    if kdim == n:
        return []
    # saturation makes the Smith diagonal of the kernel matrix all ones, so
    # the first kdim columns of uinv form a basis of the kernel lattice and
    # the remaining columns descend to a basis of the quotient
    sf = la.SmithForm(kernel)
    if any(d != 1 for d in sf.diagonal):
        raise ArithmeticError("kernel basis is not saturated")
    conj = la.mat_mul(sf.u, la.mat_mul(af, sf.uinv))
    keep = range(kdim, n)
    return [[conj[i][j] for j in keep] for i in keep]


def direct_limit(group: GroupWithAction) -> AbelianInvariants:
    """Invariants of colim(G -f-> G -f-> ...) in the canonical form."""
    free_idx = [i for i, d in enumerate(group.orders) if d == 0]
    tor_idx = [i for i, d in enumerate(group.orders) if d > 1]
    notes = []
    for i in free_idx:
        for j in tor_idx:
            if group.action[i][j] != 0:
                raise ArithmeticError("torsion generator with free image component")
    af = [[group.action[i][j] for j in free_idx] for i in free_idx]
    af = _eventual_free_action(af)
    localized: dict[int, int] = {}
    free_rank = 0
    if af:
        roots, residual = la.integer_roots(la.charpoly(af))
        for lam, mult in roots.items():
            if lam == 0:
                notes.append("nilpotent part discarded")
            elif abs(lam) == 1:
                free_rank += mult
            else:
                localized[abs(lam)] = localized.get(abs(lam), 0) + mult
        if len(residual) > 1:
            deg = len(residual) - 1
            det = abs(residual[0])
            localized[det] = localized.get(det, 0) + deg
            notes.append(
                f"non-integer eigenvalue block of degree {deg} reported as "
                f"Z[1/{det}] summands (block determinant)")
    torsion = _eventual_torsion(
        [group.orders[i] for i in tor_idx],
        [[group.action[i][j] for j in tor_idx] for i in tor_idx])
    loc = tuple(sorted(localized.items(), key=lambda t: -t[0]))
    return AbelianInvariants(loc, free_rank, torsion, tuple(notes))


def _eventual_torsion(orders, at) -> tuple[int, ...]:
    """Invariant factors of the eventual image of the torsion part."""
    t = len(orders)
    if t == 0:
        return ()
    gens = la.identity(t)
    prev_order = None
    while True:
        gens = [[sum(at[i][k] * gens[k][j] for k in range(t)) % orders[i]
                 for j in range(len(gens[0]))] for i in range(t)]
        inv = _subgroup_invariants(orders, gens)
        order = 1
        for d in inv:
            order *= d
        if order == prev_order:
            return tuple(sorted((d for d in inv if d > 1), reverse=True))
        prev_order = order


def _subgroup_invariants(orders, gens) -> list[int]:
    """Invariant factors of the subgroup of +Z/d_i generated by gens' columns."""
    t = len(orders)
    s = len(gens[0]) if gens else 0
    if s == 0:
        return []
    stacked = [[gens[i][j] for j in range(s)] + [orders[i] if k == i else 0 for k in range(t)]
               for i in range(t)]
    kernel = la.kernel_basis(stacked)
    kcols = len(kernel[0]) if kernel and kernel[0] else 0
    relations = [[kernel[i][j] for j in range(kcols)] for i in range(s)]
    sf = la.SmithForm(relations) if kcols else None
    inv = []
    for i in range(s):
        d = sf.diagonal[i] if sf and i < len(sf.diagonal) else 0
        inv.append(d)
    # the subgroup is finite, so every generator has finite order
    return [d for d in inv if d != 1]


# -- the full pipeline --------------------------------------------------------


def cohomology_of_hull(sub: Substitution, collar: int = 1,
                       max_retries: int = 2) -> list[AbelianInvariants]:
    """Direct limits of the substitution action on approximant cohomology."""
    r = collar
    last_error = None
    for _ in range(max_retries + 1):
        cw = build_approximant(sub, r)
        if not cw.check_boundary_squared():
            raise ArithmeticError("boundary of boundary is nonzero")
        try:
            action = substitution_action(sub, cw)
        except ActionUndefined as exc:
            last_error = exc
            r += 1
            continue
        if not check_chain_map(cw, action):
            raise ArithmeticError("substitution action is not a chain map")
        groups = cohomology_with_action(cw, action)
        return [direct_limit(g) for g in groups]
    raise ActionUndefined(f"collar enlargement exhausted: {last_error}")


def hull_zeta(sub: Substitution, collar: int = 1) -> RationalFunction:
    """Zeta function via the cochain matrices of the approximant."""
    cw = build_approximant(sub, collar)
    action = substitution_action(sub, cw)
    return zeta_ap(list(action.matrices))


def format_matrix(mat) -> str:
    """Plain-text export: dimensions header, then rows of integers."""
    rows = len(mat)
    cols = len(mat[0]) if mat else 0
    lines = [f"{rows} {cols}"]
    lines.extend(" ".join(str(x) for x in row) for row in mat)
    return "\n".join(lines) + "\n"
