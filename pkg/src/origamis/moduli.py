"""Compatible moduli lists: the loop homomorphism K, the exponent matrix and
its exact rational kernel, the centralizer action, weighted equivalence,
geometric realization, cylinder moduli and the parallelogram scaling factor.

Modulus convention: M = height / width of a rectangle.  All arithmetic is
exact rational except ``rho`` with non-axis directions (documented tolerance
1e-12); membership tests with irrational scaling compare squared quantities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    Disconnected,
    Incompatible,
    NotClosed,
    SingularMatrix,
    ValidationError,
)
from .origami import Origami, _pairs_of, _row_components
from .perm import SPerm, centralizer, simultaneous_conjugacy

__all__ = [
    "Crossing",
    "LoopBasis",
    "ModuliSystem",
    "GeometryRealization",
    "loop_basis",
    "K_eval",
    "moduli_system",
    "is_compatible",
    "realize_geometry",
    "cylinder_moduli",
    "rho",
    "rho_squared_exact",
    "modulus_scaling_squared",
    "weighted_equivalent",
    "affine_membership_condition",
    "centralizer_group",
    "parse_moduli",
]

Rational = Fraction
ModuliList = tuple[Fraction, ...]


@dataclass(frozen=True)
class Crossing:
    """One gluing crossing of a path in the dual multigraph."""

    kind: str  # 'h' or 'v'
    src: int
    dst: int

    def factor(self, M: Sequence[Fraction]) -> Fraction:
        # horizontal: M_src / M_dst; vertical: M_dst / M_src
        if self.kind == "h":
            return Fraction(M[self.src - 1], 1) / M[self.dst - 1]
        return Fraction(M[self.dst - 1], 1) / M[self.src - 1]


@dataclass(frozen=True)
class Edge:
    kind: str
    a: int
    b: int
    low_side: int  # the gluing's side label of smallest key, identifies the pair

    def crossing_from(self, square: int) -> Crossing:
        other = self.b if square == self.a else self.a
        return Crossing(self.kind, square, other)


@dataclass(frozen=True)
class LoopBasis:
    """Spanning tree of the dual multigraph plus its d+1 chord loops, each a
    closed crossing path based at square 1."""

    d: int
    edges: tuple[Edge, ...]
    tree: tuple[int, ...]  # indices into edges
    chords: tuple[int, ...]
    loops: tuple[tuple[Crossing, ...], ...]


def _dual_edges(O: Origami) -> list[Edge]:
    edges = []
    for kind, perm in (("h", O.mu), ("v", O.nu)):
        for s, t in _pairs_of(perm):
            edges.append(Edge(kind, abs(s), abs(t), s))
    return edges


def loop_basis(O: Origami) -> LoopBasis:
    """Deterministic BFS spanning tree (from square 1, mu edges before nu,
    ascending labels) and the induced chord loops."""
    if not O.connected:
        raise Disconnected("loop_basis requires a connected origami")
    edges = _dual_edges(O)
    incident: dict[int, list[int]] = {k: [] for k in range(1, O.d + 1)}
    for i, e in enumerate(edges):
        incident[e.a].append(i)
        if e.b != e.a:
            incident[e.b].append(i)
    parent: dict[int, tuple[int, int]] = {}  # square -> (parent square, edge idx)
    tree: list[int] = []
    seen = {1}
    queue = [1]
    qi = 0
    while qi < len(queue):
        sq = queue[qi]
        qi += 1
        for i in incident[sq]:
            e = edges[i]
            other = e.b if sq == e.a else e.a
            if other not in seen:
                seen.add(other)
                parent[other] = (sq, i)
                tree.append(i)
                queue.append(other)
    chords = [i for i in range(len(edges)) if i not in set(tree)]

    def path_to_root(sq: int) -> list[Crossing]:
        out = []
        while sq != 1:
            p, i = parent[sq]
            out.append(edges[i].crossing_from(sq))
            sq = p
        return out

    loops = []
    for i in chords:
        e = edges[i]
        down = path_to_root(e.a)
        down.reverse()
        loop = [Crossing(c.kind, c.dst, c.src) for c in down]  # root -> e.a
        loop.append(e.crossing_from(e.a))
        loop.extend(path_to_root(e.b))
        loops.append(tuple(loop))
    return LoopBasis(O.d, tuple(edges), tuple(tree), tuple(chords), tuple(loops))


def _as_moduli(M: Sequence[Union[int, Fraction, str]], d: int) -> ModuliList:
    out = []
    for v in M:
        f = Fraction(v)
        if f <= 0:
            raise ValidationError("moduli must be positive")
        out.append(f)
    if len(out) != d:
        raise ValidationError(f"expected {d} moduli, got {len(out)}")
    return tuple(out)


def K_eval(O: Origami, loop: Sequence[Crossing], M: Sequence[Fraction]) -> Fraction:
    """Value of the loop homomorphism: product of the crossing factors."""
    M = _as_moduli(M, O.d)
    prev_dst: Optional[int] = None
    for c in loop:
        if prev_dst is not None and c.src != prev_dst:
            raise NotClosed("crossings do not concatenate")
        prev_dst = c.dst
    if loop and loop[-1].dst != loop[0].src:
        raise NotClosed("path does not return to its start")
    val = Fraction(1)
    for c in loop:
        val *= c.factor(M)
    return val


@dataclass(frozen=True)
class ModuliSystem:
    """Exponent rows of the chord loops, the exact kernel, and the
    automorphism generators."""

    d: int
    A: tuple[tuple[int, ...], ...]
    kernel_basis: tuple[tuple[Fraction, ...], ...]
    c_gens: tuple[SPerm, ...]

    @property
    def kernel_dimension(self) -> int:
        return len(self.kernel_basis)

    def kernel_basis_integer(self) -> tuple[tuple[int, ...], ...]:
        """Denominator-cleared, gcd-normalized kernel vectors."""
        out = []
        for vec in self.kernel_basis:
            lcm = 1
            for f in vec:
                lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
            ints = [int(f * lcm) for f in vec]
            g = 0
            for v in ints:
                g = math.gcd(g, abs(v))
            if g > 1:
                ints = [v // g for v in ints]
            for v in ints:
                if v != 0:
                    if v < 0:
                        ints = [-w for w in ints]
                    break
            out.append(tuple(ints))
        return tuple(out)


def _exponent_row(loop: Sequence[Crossing], d: int) -> tuple[int, ...]:
    row = [0] * d
    for c in loop:
        if c.kind == "h":
            row[c.src - 1] += 1
            row[c.dst - 1] -= 1
        else:
            row[c.dst - 1] += 1
            row[c.src - 1] -= 1
    return tuple(row)


def _kernel(rows: Sequence[Sequence[int]], d: int) -> list[tuple[Fraction, ...]]:
    """Exact rational kernel basis of the row system, by Gaussian elimination."""
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(d):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][col] != 0:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][col]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(d) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * d
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -mat[ri][fc]
        basis.append(tuple(vec))
    return basis


def moduli_system(O: Origami) -> ModuliSystem:
    lb = loop_basis(O)
    rows = tuple(_exponent_row(loop, O.d) for loop in lb.loops)
    kernel = tuple(_kernel(rows, O.d))
    c_gens = tuple(centralizer([O.mu, O.nu], d=O.d, ambient="odd"))
    return ModuliSystem(O.d, rows, kernel, c_gens)


def is_compatible(O: Origami, M: Sequence[Fraction]) -> bool:
    """True iff the loop homomorphism is 1 on every chord loop (sufficient by
    multiplicativity); exact."""
    if not O.connected:
        raise Disconnected("is_compatible requires a connected origami")
    M = _as_moduli(M, O.d)
    lb = loop_basis(O)
    return all(K_eval(O, loop, M) == 1 for loop in lb.loops)


@dataclass(frozen=True)
class GeometryRealization:
    """Rectangle dimensions replacing the unit squares; the row containing
    square 1 is normalized to height 1."""

    widths: ModuliList
    heights: ModuliList
    horizontal_cylinders: tuple[tuple[int, ...], ...]
    vertical_cylinders: tuple[tuple[int, ...], ...]
    dirs: tuple[Fraction, Fraction]  # directions as rational multiples of pi
    area: Fraction


def _column_components(nu: SPerm) -> list[list[int]]:
    return _row_components(nu)


DEFAULT_DIRS = (Fraction(0), Fraction(1, 2))


def realize_geometry(
    O: Origami,
    M: Sequence[Fraction],
    dirs: tuple[Fraction, Fraction] = DEFAULT_DIRS,
) -> GeometryRealization:
    """Propagate widths and heights along the spanning tree and verify every
    gluing; raises Incompatible exactly when is_compatible is false."""
    if not O.connected:
        raise Disconnected("realize_geometry requires a connected origami")
    M = _as_moduli(M, O.d)
    d1, d2 = Fraction(dirs[0]) % 1, Fraction(dirs[1]) % 1
    if d1 == d2:
        raise ValidationError("directions must be distinct mod pi")
    lb = loop_basis(O)
    h: list[Optional[Fraction]] = [None] * (O.d + 1)
    w: list[Optional[Fraction]] = [None] * (O.d + 1)
    h[1] = Fraction(1)
    w[1] = h[1] / M[0]
    order = [1]
    tree_edges = [lb.edges[i] for i in lb.tree]
    remaining = list(tree_edges)
    while remaining:
        progressed = False
        rest = []
        for e in remaining:
            known, new = None, None
            if h[e.a] is not None and h[e.b] is None:
                known, new = e.a, e.b
            elif h[e.b] is not None and h[e.a] is None:
                known, new = e.b, e.a
            elif h[e.a] is not None and h[e.b] is not None:
                progressed = True
                continue
            else:
                rest.append(e)
                continue
            if e.kind == "h":
                h[new] = h[known]
                w[new] = h[new] / M[new - 1]
            else:
                w[new] = w[known]
                h[new] = M[new - 1] * w[new]
            order.append(new)
            progressed = True
        remaining = rest
        if not progressed and remaining:  # pragma: no cover
            raise Disconnected("spanning tree does not reach every square")
    for e in lb.edges:
        if e.kind == "h":
            if h[e.a] != h[e.b]:
                raise Incompatible(
                    f"heights differ across a horizontal gluing of squares {e.a}, {e.b}"
                )
        else:
            if w[e.a] != w[e.b]:
                raise Incompatible(
                    f"widths differ across a vertical gluing of squares {e.a}, {e.b}"
                )
    widths = tuple(w[1:])
    heights = tuple(h[1:])
    for k in range(O.d):
        if heights[k] / widths[k] != M[k]:  # pragma: no cover
            raise Incompatible("modulus mismatch after propagation")
    rows = tuple(tuple(r) for r in _row_components(O.mu))
    cols = tuple(tuple(c) for c in _column_components(O.nu))
    area = sum((widths[k] * heights[k] for k in range(O.d)), Fraction(0))
    return GeometryRealization(widths, heights, rows, cols, (d1, d2), area)


def cylinder_moduli(O: Origami, M: Sequence[Fraction], direction: str = "horizontal") -> list[Fraction]:
    """Ascending moduli (height / circumference) of the cylinders in the
    chosen axis direction."""
    geo = realize_geometry(O, M)
    out = []
    if direction == "horizontal":
        for row in geo.horizontal_cylinders:
            height = geo.heights[row[0] - 1]
            circ = sum((geo.widths[k - 1] for k in row), Fraction(0))
            out.append(height / circ)
    elif direction == "vertical":
        for col in geo.vertical_cylinders:
            width = geo.widths[col[0] - 1]
            total_h = sum((geo.heights[k - 1] for k in col), Fraction(0))
            out.append(width / total_h)
    else:
        raise ValidationError(f"unknown direction {direction!r}")
    return sorted(out)


# ---------------------------------------------------------------------------
# the parallelogram scaling factor


def _t_a(mat: Sequence[Sequence[float]], x: float, y: float) -> complex:
    a, b = mat[0]
    c, d = mat[1]
    return complex(a * x + c * y, b * x + d * y)


def rho(mat: Sequence[Sequence[float]], theta1: float, theta2: float) -> float:
    """|T_A(e^{i theta2})| / |T_A(e^{i theta1})| with T_A(x+iy) =
    (ax+cy) + i(bx+dy); tolerance 1e-12 on the irrational path."""
    a, b = mat[0]
    c, d = mat[1]
    if abs(a * d - b * c) < 1e-15:
        raise SingularMatrix("matrix is singular")
    num = abs(_t_a(mat, math.cos(theta2), math.sin(theta2)))
    den = abs(_t_a(mat, math.cos(theta1), math.sin(theta1)))
    return num / den


def rho_squared_exact(
    mat: Sequence[Sequence[int]], q1: Fraction, q2: Fraction
) -> Optional[Fraction]:
    """rho^2 as an exact rational for integer matrices and axis directions
    (angles q*pi with q in {0, 1/2}); None when not exactly representable."""

    def unit(q: Fraction) -> Optional[tuple[int, int]]:
        q = Fraction(q) % 1
        if q == 0:
            return (1, 0)
        if q == Fraction(1, 2):
            return (0, 1)
        return None

    u1, u2 = unit(q1), unit(q2)
    if u1 is None or u2 is None:
        return None
    a, b = mat[0]
    c, d = mat[1]
    if a * d - b * c == 0:
        raise SingularMatrix("matrix is singular")

    def sq(u: tuple[int, int]) -> int:
        x, y = u
        return (a * x + c * y) ** 2 + (b * x + d * y) ** 2

    return Fraction(sq(u2), sq(u1))


# ---------------------------------------------------------------------------
# weighted equivalence and the affine membership condition


def centralizer_group(O: Origami) -> list[SPerm]:
    """All elements of the odd centralizer of (mu, nu); small (semiregular)."""
    gens = centralizer([O.mu, O.nu], d=O.d, ambient="odd")
    group = {SPerm.identity(O.d)}
    frontier = list(group)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in group:
                    group.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(group, key=lambda p: p.images)


def _moduli_match(
    M1: ModuliList, M2: ModuliList, tau: SPerm, scale: Fraction = Fraction(1), power: int = 1
) -> bool:
    # M1^power == scale * (M2 at |tau(k)|)^power for all k
    for k in range(1, len(M1) + 1):
        if M1[k - 1] ** power != scale * M2[abs(tau(k)) - 1] ** power:
            return False
    return True


def weighted_equivalent(
    P1: tuple[Origami, Sequence[Fraction]],
    P2: tuple[Origami, Sequence[Fraction]],
    _scale_sq: Fraction = Fraction(1),
    _power: int = 1,
) -> Optional[SPerm]:
    """Witness of equivalence of origamis-with-moduli: an odd tau conjugating
    the gluing pairs with M1_k = M2_{|tau(k)|}; None if absent."""
    O1, M1 = P1
    O2, M2 = P2
    if O1.d != O2.d:
        return None
    M1 = _as_moduli(M1, O1.d)
    M2 = _as_moduli(M2, O2.d)
    for O, M in ((O1, M1), (O2, M2)):
        if not is_compatible(O, M):
            raise Incompatible("weighted equivalence requires compatible inputs")
    tau0 = simultaneous_conjugacy([O1.mu, O1.nu], [O2.mu, O2.nu], constraint="odd")
    if tau0 is None:
        return None
    candidates = [tau0] + [c * tau0 for c in centralizer_group(O2)]
    for tau in candidates:
        if _moduli_match(M1, M2, tau, _scale_sq, _power):
            return tau
    return None


def modulus_scaling_squared(
    mat: Sequence[Sequence[Union[int, float]]],
    theta1: Fraction = Fraction(0),
    theta2: Fraction = Fraction(1, 2),
) -> Fraction:
    """Square of the factor by which the affine map scales parallelogram
    moduli: F = rho * sin|A.theta1 - A.theta2| / sin|theta1 - theta2|.

    F equals rho on perpendicular image frames; the sine ratio is required
    whenever the map shears the frame (forced by the unit-torus example).
    Exact for integer matrices and axis directions; otherwise snapped to a
    rational within 1e-12.
    """

    def unit(q: Fraction) -> Optional[tuple[int, int]]:
        q = Fraction(q) % 1
        if q == 0:
            return (1, 0)
        if q == Fraction(1, 2):
            return (0, 1)
        return None

    a, b = mat[0]
    c, d = mat[1]
    u1, u2 = unit(theta1), unit(theta2)
    exact = (
        u1 is not None
        and u2 is not None
        and all(isinstance(v, int) for v in (a, b, c, d))
    )
    if exact:
        v1 = (a * u1[0] + c * u1[1], b * u1[0] + d * u1[1])
        v2 = (a * u2[0] + c * u2[1], b * u2[0] + d * u2[1])
        n1 = v1[0] ** 2 + v1[1] ** 2
        n2 = v2[0] ** 2 + v2[1] ** 2
        cross = v1[0] * v2[1] - v1[1] * v2[0]
        if n1 == 0 or n2 == 0 or cross == 0:
            raise SingularMatrix("matrix is singular")
        # rho^2 * sin^2(angle(v1,v2)) / sin^2(pi/2) with cross(u1,u2) = +-1
        return Fraction(n2, n1) * Fraction(cross * cross, n1 * n2)
    t1 = float(theta1) * math.pi
    t2 = float(theta2) * math.pi
    w1 = _t_a(mat, math.cos(t1), math.sin(t1))
    w2 = _t_a(mat, math.cos(t2), math.sin(t2))
    cross = (w1 * w2.conjugate()).imag
    sin_in = math.sin(t2 - t1)
    if abs(w1) < 1e-15 or abs(w2) < 1e-15 or abs(sin_in) < 1e-15:
        raise SingularMatrix("degenerate direction frame")
    f = (abs(w2) / abs(w1)) * abs(cross / (abs(w1) * abs(w2))) / abs(sin_in)
    return Fraction(f * f).limit_denominator(10**12)


def affine_membership_condition(
    P: tuple[Origami, Sequence[Fraction]],
    P_A: tuple[Origami, Sequence[Fraction]],
    mat: Sequence[Sequence[int]],
    theta1: Fraction = Fraction(0),
    theta2: Fraction = Fraction(1, 2),
) -> bool:
    """True iff (O, M) is equivalent to (O_A, F^{-1} M_A), F the parallelogram
    modulus scaling of the map.

    Compared through squared moduli so that the scaling stays exact rational
    in the axis-aligned unimodular cases.
    """
    a, b = mat[0]
    c, d = mat[1]
    if abs(a * d - b * c) != 1:
        raise ValidationError("matrix must be unimodular")
    f2 = modulus_scaling_squared(mat, theta1, theta2)
    # M_k^2 == F^{-2} * (M_A)^2_{|tau(k)|}
    return weighted_equivalent(P, P_A, _scale_sq=1 / f2, _power=2) is not None


def parse_moduli(text: str, d: Optional[int] = None) -> ModuliList:
    """Comma-separated positive rationals, e.g. ``2/3,1,5/2``."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        vals = tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"bad moduli list: {e}")
    if any(v <= 0 for v in vals):
        raise ValidationError("moduli must be positive")
    if d is not None and len(vals) != d:
        raise ValidationError(f"expected {d} moduli, got {len(vals)}")
    return vals
