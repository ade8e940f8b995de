"""The origami data model: edge-gluing pairs, (x,y,eps) codecs, canonical
double covers, dessins, singularity profiles, equivalence, canonical forms and
enumeration up to equivalence.

Conventions (fixed here, used by every other module):

* An origami of degree d is a pair (mu, nu) of fixed-point-free involutions
  of the signed set {+-1..+-d}.  ``+k`` is the right side of square k and the
  top side of square k; ``-k`` the left/bottom side.  ``mu`` pairs glued
  left/right sides, ``nu`` glued top/bottom sides.
* A pairing whose two labels have sign product -1 is a translation gluing;
  sign product +1 is a half-turn (flip) gluing.
* from_xye keeps all horizontal gluings as translations and realizes the
  inverted squares through the vertical gluings: mu(+k) = -x(k) and
  nu(eps_k * k) = -eps_{y(k)} * y(k).  This is pinned by the degree-4
  worked example (fourth branch point valencies 1,1,3,3).
* The canonical double cover is encoded on the same signed set (sheet k^+ is
  +k, sheet k^- is -k): X = n*mu, Y = n*nu with n the sign inversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    DegreeMismatch,
    Disconnected,
    InvalidInvolution,
    ParseError,
    ValidationError,
)
from .perm import (
    Perm,
    SPerm,
    is_transitive,
    parse_perm,
    parse_sperm,
    signed_domain,
    simultaneous_conjugacy,
)

__all__ = [
    "Origami",
    "XYE",
    "DoubleCover",
    "Dessin",
    "SingularityProfile",
    "from_xye",
    "to_xye",
    "abelian_pair",
    "is_abelian",
    "double_cover",
    "theta_inverse",
    "monodromy",
    "singularity_profile",
    "dessin",
    "is_equivalent",
    "canonical_form",
    "enumerate_origamis",
    "parse_origami",
    "format_origami",
    "TORUS",
]


class Origami:
    """Edge-gluing pair (mu, nu); immutable after construction.

    Rejects disconnected gluings unless ``allow_disconnected`` is set (needed
    internally for double covers and dessin components).
    """

    __slots__ = ("d", "mu", "nu", "_connected")

    def __init__(self, mu: SPerm, nu: SPerm, allow_disconnected: bool = False):
        if mu.d != nu.d:
            raise DegreeMismatch(f"mu degree {mu.d} != nu degree {nu.d}")
        for name, p in (("mu", mu), ("nu", nu)):
            if not p.is_involution() or not p.is_fixed_point_free():
                raise ValidationError(f"{name} must be a fixed-point-free involution")
        object.__setattr__(self, "d", mu.d)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        connected = is_transitive([mu, nu, SPerm.sign_inversion(mu.d)])
        object.__setattr__(self, "_connected", connected)
        if not connected and not allow_disconnected:
            raise Disconnected("gluing pair does not produce a connected surface")

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Origami is immutable")

    @property
    def connected(self) -> bool:
        return self._connected

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Origami) and self.mu == other.mu and self.nu == other.nu

    def __hash__(self) -> int:
        return hash((self.mu, self.nu))

    def __repr__(self) -> str:
        return f"Origami(mu={self.mu}, nu={self.nu})"

    def code(self) -> tuple[int, ...]:
        """Flat image table, hashable; the key used by orbit enumeration."""
        out = []
        for k in range(1, self.d + 1):
            out.extend((self.mu(k), self.nu(k), self.mu(-k), self.nu(-k)))
        return tuple(out)


@dataclass(frozen=True)
class XYE:
    """Abelian pair with a sign vector; any (x, y, eps) is accepted."""

    x: Perm
    y: Perm
    eps: tuple[int, ...]

    def __post_init__(self):
        if self.x.d != self.y.d or len(self.eps) != self.x.d:
            raise DegreeMismatch("x, y and eps must have a common degree")
        if any(e not in (1, -1) for e in self.eps):
            raise ValidationError("eps entries must be +-1")

    @property
    def d(self) -> int:
        return self.x.d


@dataclass(frozen=True)
class DoubleCover:
    """Abelian pair on 2d sheet-squares with the deck involution n.

    Sheet k^+ is the label +k, sheet k^- is -k; n is sign inversion.
    """

    d: int
    X: SPerm
    Y: SPerm

    @property
    def n(self) -> SPerm:
        return SPerm.sign_inversion(self.d)

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for start in signed_domain(self.d):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            stack = [start]
            while stack:
                a = stack.pop()
                for g in (self.X, self.Y):
                    for b in (g(a), g.inverse()(a)):
                        if b not in seen:
                            seen.add(b)
                            comp.append(b)
                            stack.append(b)
            comps.append(sorted(comp, key=lambda k: (abs(k), k < 0)))
        return comps

    @property
    def connected(self) -> bool:
        return len(self.components()) == 1


@dataclass(frozen=True)
class Dessin:
    """Tripartite graph: squares (valency 4), mu-pairs and nu-pairs (valency 2)."""

    d: int
    h_pairs: tuple[frozenset[int], ...]
    v_pairs: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, str, int], ...]  # (square, 'h'|'v', pair index)

    def valencies(self) -> dict[str, list[int]]:
        c = [0] * self.d
        h = [0] * len(self.h_pairs)
        v = [0] * len(self.v_pairs)
        for sq, kind, idx in self.edges:
            c[sq - 1] += 1
            (h if kind == "h" else v)[idx] += 1
        return {"c": c, "h": h, "v": v}

    def is_connected(self) -> bool:
        if self.d == 0:
            return False
        adj: dict[object, set[object]] = {}
        for sq, kind, idx in self.edges:
            a = ("c", sq)
            b = (kind, idx)
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        start = ("c", 1)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.d + len(self.h_pairs) + len(self.v_pairs)


@dataclass(frozen=True)
class SingularityProfile:
    """Cone data of the corner points.

    ``orders`` lists the nonzero orders m (m = -1 poles allowed); ``valency4``
    is the full valency multiset of the fourth branch point (sums to 2d);
    genus satisfies sum over all corners of m = 4*genus - 4.
    """

    orders: tuple[int, ...]
    valency4: tuple[int, ...]
    genus: int
    poles: int


# ---------------------------------------------------------------------------
# constructors and codecs


def from_xye(t: XYE) -> "Origami":
    """Build the gluing pair of the origami obtained by regluing the abelian
    origami (x, y) after inverting the squares of negative sign."""
    d = t.d
    mu_images: dict[int, int] = {}
    nu_images: dict[int, int] = {}
    for k in range(1, d + 1):
        a = k
        b = -t.x(k)
        mu_images[a] = b
        mu_images[b] = a
        a = t.eps[k - 1] * k
        b = -t.eps[t.y(k) - 1] * t.y(k)
        nu_images[a] = b
        nu_images[b] = a
    mu = SPerm(mu_images, d)
    nu = SPerm(nu_images, d)
    return Origami(mu, nu, allow_disconnected=True)


def _row_components(mu: SPerm) -> list[list[int]]:
    """Components of the square set under mu-adjacency (horizontal cylinders)."""
    d = mu.d
    seen: set[int] = set()
    rows = []
    for start in range(1, d + 1):
        if start in seen:
            continue
        row = [start]
        seen.add(start)
        stack = [start]
        while stack:
            a = stack.pop()
            for s in (a, -a):
                b = abs(mu(s))
                if b not in seen:
                    seen.add(b)
                    row.append(b)
                    stack.append(b)
        rows.append(sorted(row))
    return rows


def _two_color(pairs: Iterable[tuple[int, int]], d: int) -> Optional[list[int]]:
    """Square signs w with w_a * w_b = -sign(s)sign(t) across each pair (s,t);
    None if no consistent coloring exists.  Components rooted at their
    smallest square with color +1."""
    adj: dict[int, list[tuple[int, int]]] = {k: [] for k in range(1, d + 1)}
    for s, t in pairs:
        need = -1 if (s > 0) == (t > 0) else 1  # w_a * w_b
        adj[abs(s)].append((abs(t), need))
        adj[abs(t)].append((abs(s), need))
    color = [0] * (d + 1)
    for root in range(1, d + 1):
        if color[root]:
            continue
        color[root] = 1
        stack = [root]
        while stack:
            a = stack.pop()
            for b, need in adj[a]:
                want = color[a] * need
                if color[b] == 0:
                    color[b] = want
                    stack.append(b)
                elif color[b] != want:
                    return None
    return color[1:]


def _pairs_of(p: SPerm) -> list[tuple[int, int]]:
    out = []
    seen: set[int] = set()
    for s in signed_domain(p.d):
        if s in seen:
            continue
        t = p(s)
        seen.add(s)
        seen.add(t)
        out.append((s, t))
    return out


def _conjugate_by_signs(O: Origami, signs: Sequence[int]) -> tuple[Origami, SPerm]:
    omega = SPerm.from_square_map(Perm.identity(O.d), signs)
    mu = O.mu.conjugate(omega)
    nu = O.nu.conjugate(omega)
    return Origami(mu, nu, allow_disconnected=True), omega


def to_xye(O: Origami) -> XYE:
    """Deterministic section of from_xye: normalize the horizontal gluings to
    translations by a per-row sign change, then read (x, y, eps).

    ``from_xye(to_xye(O))`` is equivalent to ``O`` (equal after
    canonical_form).
    """
    if not O.connected:
        raise Disconnected("to_xye requires a connected origami")
    d = O.d
    # rows always admit a flip-killing coloring: flips around a row are even
    row_signs = _two_color(_pairs_of(O.mu), d)
    if row_signs is None:  # pragma: no cover - impossible for valid gluings
        raise ValidationError("horizontal flip pattern is not row-consistent")
    O2, _ = _conjugate_by_signs(O, row_signs)
    x = Perm([abs(O2.mu(k)) for k in range(1, d + 1)])
    # roles: eps_k * k is the top side of square k
    eps = _two_color(_pairs_of(O2.nu), d)
    if eps is None:  # pragma: no cover - impossible (alternating cycles)
        raise ValidationError("vertical gluing pattern admits no orientation")
    y = Perm([abs(O2.nu(eps[k - 1] * k)) for k in range(1, d + 1)])
    return XYE(x, y, tuple(eps))


def is_abelian(O: Origami) -> bool:
    """True iff some global square inversion removes every flip gluing,
    equivalently iff the canonical double cover is disconnected."""
    pairs = _pairs_of(O.mu) + _pairs_of(O.nu)
    return _two_color(pairs, O.d) is not None


def abelian_pair(O: Origami) -> tuple[Perm, Perm]:
    """The transitive pair (x, y) of an abelian origami (eps normalized away)."""
    signs = _two_color(_pairs_of(O.mu) + _pairs_of(O.nu), O.d)
    if signs is None:
        raise ValidationError("origami is not abelian")
    O2, _ = _conjugate_by_signs(O, signs)
    x = Perm([abs(O2.mu(k)) for k in range(1, O.d + 1)])
    y = Perm([abs(O2.nu(k)) for k in range(1, O.d + 1)])
    return x, y


def double_cover(O: Origami) -> DoubleCover:
    """Canonical double cover: crossing a translation gluing preserves the
    sheet, crossing a flip swaps it; in labels X = n*mu, Y = n*nu."""
    n = SPerm.sign_inversion(O.d)
    return DoubleCover(O.d, n * O.mu, n * O.nu)


def theta_inverse(X: SPerm, Y: SPerm, n: SPerm) -> Origami:
    """Quotient of an abelian pair by a deck involution.

    Requires n fixed-point-free of order 2 with n X n = X^{-1} and
    n Y n = Y^{-1}; additionally the quotient gluings must be fixed-point
    free (a deck transport may never fold an edge onto itself).
    """
    d2 = X.d
    if Y.d != d2 or n.d != d2:
        raise DegreeMismatch("X, Y, n degrees differ")
    if not n.is_involution() or not n.is_fixed_point_free():
        raise InvalidInvolution("n must be a fixed-point-free involution")
    ninv = n.inverse()
    if n * X * ninv != X.inverse() or n * Y * ninv != Y.inverse():
        raise InvalidInvolution("n must reverse both directions")
    nX = n * X
    nY = n * Y
    if not nX.is_fixed_point_free() or not nY.is_fixed_point_free():
        raise InvalidInvolution("quotient would fold an edge onto itself")

    # transversal: one X-cycle out of each n-paired couple of cycles
    labels = signed_domain(d2)
    cycle_of: dict[int, int] = {}
    cycles = X.cycles()
    for ci, cyc in enumerate(cycles):
        for a in cyc:
            cycle_of[a] = ci
    chosen: set[int] = set()
    excluded: set[int] = set()
    for ci, cyc in enumerate(cycles):
        if ci in chosen or ci in excluded:
            continue
        partner = cycle_of[n(cyc[0])]
        if partner == ci:
            raise InvalidInvolution("deck involution preserves an X-cycle")
        chosen.add(ci)
        excluded.add(partner)
    # the chosen cycles form a transversal of the n-orbits: n maps each chosen
    # cycle into an excluded one, so every label in them is an orbit rep
    reps = sorted((a for a in labels if cycle_of[a] in chosen), key=lambda k: (abs(k), k < 0))
    phi: dict[int, int] = {}
    for i, a in enumerate(reps, start=1):
        phi[a] = i
        phi[n(a)] = -i
    d = len(reps)
    mu = SPerm({phi[a]: -phi[X(a)] for a in labels}, d)
    nu = SPerm({phi[a]: -phi[Y(a)] for a in labels}, d)
    return Origami(mu, nu, allow_disconnected=True)


def quotient(dc: DoubleCover) -> Origami:
    """Quotient by the standard deck involution; recovers the source exactly
    (sheet k^+ becomes square k)."""
    n = dc.n
    return Origami(n * dc.X, n * dc.Y, allow_disconnected=True)


# ---------------------------------------------------------------------------
# monodromy of the pillowcase cover and singularity data


def monodromy(O: Origami) -> tuple[SPerm, SPerm]:
    """The pair (iota, sigma) generating the monodromy of the 4d-fold cover.

    Labels live on the signed set of degree 2d: the horizontal label +-k_h is
    +-k, the vertical label +-k_v is +-(d+k).  iota(+k_h)=+k_v,
    iota(+k_v)=-k_h; sigma acts by mu on h-labels and nu on v-labels.
    """
    d = O.d
    iota_img: dict[int, int] = {}
    sigma_img: dict[int, int] = {}
    for k in range(1, d + 1):
        for s in (1, -1):
            iota_img[s * k] = s * (d + k)
            iota_img[s * (d + k)] = -s * k
            t = O.mu(s * k)
            sigma_img[s * k] = t
            u = O.nu(s * k)
            sigma_img[s * (d + k)] = (1 if u > 0 else -1) * (d + abs(u))
    return SPerm(iota_img, 2 * d), SPerm(sigma_img, 2 * d)


def singularity_profile(O: Origami) -> SingularityProfile:
    """Corner data read from the cycles of iota*sigma: a cycle of length 2k
    is a corner of valency k, cone angle k*pi and order k-2."""
    if not O.connected:
        raise Disconnected("singularity_profile requires a connected origami")
    iota, sigma = monodromy(O)
    arr = iota * sigma
    ks = sorted(len(c) // 2 for c in arr.cycles())
    orders = tuple(sorted(k - 2 for k in ks if k != 2))
    total = sum(k - 2 for k in ks)
    if total % 4 != 0:  # pragma: no cover
        raise ValidationError("order sum is not 4g-4")
    genus = (total + 4) // 4
    return SingularityProfile(
        orders=orders,
        valency4=tuple(ks),
        genus=genus,
        poles=sum(1 for m in orders if m == -1),
    )


def dessin(O: Origami) -> Dessin:
    h_pairs = [frozenset(p) for p in _pairs_of(O.mu)]
    v_pairs = [frozenset(p) for p in _pairs_of(O.nu)]
    h_index = {}
    for i, p in enumerate(h_pairs):
        for s in p:
            h_index[s] = i
    v_index = {}
    for i, p in enumerate(v_pairs):
        for s in p:
            v_index[s] = i
    edges = []
    for k in range(1, O.d + 1):
        for s in (k, -k):
            edges.append((k, "h", h_index[s]))
        for s in (k, -k):
            edges.append((k, "v", v_index[s]))
    return Dessin(O.d, tuple(h_pairs), tuple(v_pairs), tuple(edges))


# ---------------------------------------------------------------------------
# equivalence, canonical forms, enumeration


def is_equivalent(O1: Origami, O2: Origami) -> Optional[SPerm]:
    """Odd witness tau with tau(mu1,nu1)tau^{-1} = (mu2,nu2), or None."""
    if O1.d != O2.d:
        return None
    return simultaneous_conjugacy([O1.mu, O1.nu], [O2.mu, O2.nu], constraint="odd")


def _bfs_code(O: Origami, start: int) -> tuple[tuple[int, ...], dict[int, int]]:
    """Traversal code and relabeling for the BFS rooted at the signed side
    ``start`` (which becomes +1)."""
    mu, nu = O.mu, O.nu
    tau: dict[int, int] = {start: 1, -start: -1}
    reps = [start]  # reps[i] has tau == +(i+1)
    i = 0
    while i < len(reps):
        s = reps[i]
        for t in (mu(s), nu(s), mu(-s), nu(-s)):
            if t not in tau:
                k = len(reps) + 1
                tau[t] = -k
                tau[-t] = k
                reps.append(-t)
        i += 1
    code = []
    for s in reps:
        code.extend((tau[mu(s)], tau[nu(s)], tau[mu(-s)], tau[nu(-s)]))
    return tuple(code), tau


def canonical_form(O: Origami) -> Origami:
    """Minimal relabeling: lexicographically least traversal code over all
    2d signed starting sides."""
    if not O.connected:
        raise Disconnected("canonical_form requires a connected origami")
    best = None
    for start in signed_domain(O.d):
        code, _ = _bfs_code(O, start)
        if best is None or code < best:
            best = code
    return _origami_from_code(best, O.d)


def _origami_from_code(code: tuple[int, ...], d: int) -> Origami:
    mu_img: dict[int, int] = {}
    nu_img: dict[int, int] = {}
    for i in range(1, d + 1):
        base = 4 * (i - 1)
        mu_img[i] = code[base]
        nu_img[i] = code[base + 1]
        mu_img[-i] = code[base + 2]
        nu_img[-i] = code[base + 3]
    return Origami(SPerm(mu_img, d), SPerm(nu_img, d), allow_disconnected=True)


def _partitions(n: int, largest: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    if largest is None:
        largest = n
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _row_matching(partition: Sequence[int], d: int) -> SPerm:
    """Standard flip-free matching whose rows have the given lengths."""
    images: dict[int, int] = {}
    offset = 0
    for length in partition:
        squares = list(range(offset + 1, offset + length + 1))
        for i, k in enumerate(squares):
            nxt = squares[(i + 1) % length]
            images[k] = -nxt
            images[-nxt] = k
        offset += length
    return SPerm(images, d)


def _all_matchings(d: int) -> Iterator[SPerm]:
    """All fixed-point-free involutions on the signed set of degree d."""
    labels = signed_domain(d)

    def rec(remaining: tuple[int, ...], pairs: list[tuple[int, int]]):
        if not remaining:
            yield SPerm({s: t for a, b in pairs for s, t in ((a, b), (b, a))}, d)
            return
        a = remaining[0]
        rest = remaining[1:]
        for i, b in enumerate(rest):
            yield from rec(rest[:i] + rest[i + 1 :], pairs + [(a, b)])

    yield from rec(tuple(labels), [])


def enumerate_origamis(d: int) -> list[Origami]:
    """Every connected origami of degree d exactly once (canonical forms,
    sorted).  Practical for d <= 7."""
    if d < 1:
        raise ValidationError("degree must be positive")
    n = SPerm.sign_inversion(d)
    seen: set[tuple[int, ...]] = set()
    out: list[Origami] = []
    mus = [_row_matching(p, d) for p in _partitions(d)]
    for mu in mus:
        for nu in _all_matchings(d):
            if not is_transitive([mu, nu, n]):
                continue
            cand = Origami(mu, nu, allow_disconnected=True)
            c = canonical_form(cand)
            key = c.code()
            if key not in seen:
                seen.add(key)
                out.append(c)
    out.sort(key=lambda o: o.code())
    return out


# ---------------------------------------------------------------------------
# text codec


def _parse_eps(text: str, offset: int) -> tuple[int, ...]:
    s = text.strip()
    base = offset + (len(text) - len(text.lstrip()))
    if s.startswith("("):
        s2 = s.strip("()")
        parts = [p.strip() for p in s2.split(",")]
        signs = []
        for p in parts:
            if p == "+" or p == "+1":
                signs.append(1)
            elif p == "-" or p == "-1":
                signs.append(-1)
            else:
                raise ParseError(f"bad sign {p!r}", base)
        return tuple(signs)
    signs = []
    for i, ch in enumerate(s):
        if ch == "+":
            signs.append(1)
        elif ch == "-":
            signs.append(-1)
        elif ch in " \t":
            continue
        else:
            raise ParseError(f"bad sign character {ch!r}", base + i)
    if not signs:
        raise ParseError("empty eps", base)
    return tuple(signs)


def parse_origami(text: str) -> Origami:
    """Parse either ``x=(..); y=(..); eps=++-`` or ``mu=(..); nu=(..)``.

    Whitespace-insensitive; errors carry the offending position.  Connectivity
    is validated (Disconnected for disconnected input).
    """
    fields: dict[str, tuple[str, int]] = {}
    pos = 0
    for chunk in text.split(";"):
        stripped = chunk.strip()
        if stripped:
            if "=" not in stripped:
                raise ParseError("expected key=value", pos + chunk.index(stripped[0]))
            key, _, val = stripped.partition("=")
            key = key.strip().lower()
            val_off = pos + chunk.index("=") + 1
            if key in fields:
                raise ParseError(f"duplicate field {key!r}", pos)
            fields[key] = (val, val_off)
        pos += len(chunk) + 1
    if {"mu", "nu"} <= set(fields):
        mu_txt, mu_off = fields["mu"]
        nu_txt, nu_off = fields["nu"]
        mu = parse_sperm(mu_txt, offset=mu_off)
        nu = parse_sperm(nu_txt, offset=nu_off)
        d = max(mu.d, nu.d)
        mu = parse_sperm(mu_txt, d=d, offset=mu_off)
        nu = parse_sperm(nu_txt, d=d, offset=nu_off)
        return Origami(mu, nu)
    if {"x", "y", "eps"} <= set(fields):
        eps = _parse_eps(*fields["eps"])
        d = len(eps)
        x = parse_perm(fields["x"][0], d=d, offset=fields["x"][1])
        y = parse_perm(fields["y"][0], d=d, offset=fields["y"][1])
        O = from_xye(XYE(x, y, eps))
        if not O.connected:
            raise Disconnected("the (x, y) pair is not transitive")
        return O
    raise ParseError("expected fields mu=..;nu=.. or x=..;y=..;eps=..", 0)


def format_origami(O: Origami, style: str = "mu") -> str:
    if style == "mu":
        return f"mu={O.mu}; nu={O.nu}"
    if style == "xye":
        t = to_xye(O)
        eps = "".join("+" if e > 0 else "-" for e in t.eps)
        return f"x={t.x}; y={t.y}; eps={eps}"
    raise ValidationError(f"unknown style {style!r}")


def _make_torus() -> Origami:
    m = SPerm.from_cycles([[1, -1]], 1)
    return Origami(m, m)


TORUS = _make_torus()
