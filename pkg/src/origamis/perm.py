"""Exact permutation algebra on plain index sets I_d = {1..d} and signed
index sets SI_d = {+1,-1,...,+d,-d}.

Composition convention, used everywhere in this package:
``(p * q)(i) == p(q(i))`` (apply ``q`` first).

Signed values are ordered ``+1 < -1 < +2 < -2 < ...``; cycle listings and all
deterministic outputs follow that order.  Cycle notation ``(1 2 3)`` means
``1 -> 2 -> 3 -> 1``.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Union

from .errors import DegreeMismatch, ParseError, ValidationError

__all__ = [
    "Perm",
    "SPerm",
    "compose",
    "is_transitive",
    "centralizer",
    "simultaneous_conjugacy",
    "simultaneous_conjugacy_plain",
    "parse_perm",
    "parse_sperm",
]


def _skey(k: int) -> tuple[int, int]:
    # +1 < -1 < +2 < -2 < ...
    return (abs(k), 0 if k > 0 else 1)


class Perm:
    """A bijection of {1..d}."""

    __slots__ = ("d", "_img")

    def __init__(self, images: Sequence[int]):
        img = tuple(images)
        d = len(img)
        if sorted(img) != list(range(1, d + 1)):
            raise ValidationError(f"not a bijection of 1..{d}: {img}")
        self.d = d
        self._img = img

    @classmethod
    def identity(cls, d: int) -> "Perm":
        return cls(range(1, d + 1))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], d: Optional[int] = None) -> "Perm":
        cycles = [list(c) for c in cycles]
        seen: set[int] = set()
        for c in cycles:
            for k in c:
                if k < 1:
                    raise ValidationError(f"plain cycle entries must be >= 1, got {k}")
                if k in seen:
                    raise ValidationError(f"repeated entry {k} in cycles")
                seen.add(k)
        if d is None:
            d = max(seen) if seen else 1
        if seen and max(seen) > d:
            raise ValidationError(f"cycle entry exceeds degree {d}")
        img = list(range(1, d + 1))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                img[a - 1] = b
        return cls(img)

    def __call__(self, i: int) -> int:
        return self._img[i - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        if not isinstance(other, Perm):
            return NotImplemented
        if self.d != other.d:
            raise DegreeMismatch(f"degrees {self.d} and {other.d}")
        return Perm(tuple(self._img[j - 1] for j in other._img))

    def inverse(self) -> "Perm":
        inv = [0] * self.d
        for i, j in enumerate(self._img, start=1):
            inv[j - 1] = i
        return Perm(inv)

    def is_identity(self) -> bool:
        return all(self._img[i] == i + 1 for i in range(self.d))

    def domain(self) -> range:
        return range(1, self.d + 1)

    def cycles(self) -> list[list[int]]:
        """Disjoint cycles covering 1..d, fixed points included, sorted by
        smallest element."""
        out: list[list[int]] = []
        seen: set[int] = set()
        for start in range(1, self.d + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(cyc)
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self._img == other._img

    def __hash__(self) -> int:
        return hash(("Perm", self._img))

    def __repr__(self) -> str:
        return f"Perm({self})"

    def __str__(self) -> str:
        return format_cycles(self.cycles(), signed=False)

    @property
    def images(self) -> tuple[int, ...]:
        return self._img


class SPerm:
    """A bijection of the signed index set {+1,-1,...,+d,-d}.

    Not required to be odd; ``odd()`` (f(-k) == -f(k)), ``sign_preserving()``,
    ``is_involution()`` and ``is_fixed_point_free()`` are decidable predicates.
    """

    __slots__ = ("d", "_img")

    @staticmethod
    def _pos(k: int) -> int:
        return (abs(k) - 1) * 2 + (0 if k > 0 else 1)

    def __init__(self, images: Union[dict[int, int], Sequence[int]], d: Optional[int] = None):
        if isinstance(images, dict):
            if d is None:
                d = max(abs(k) for k in images) if images else 1
            flat = [0] * (2 * d)
            for k, v in images.items():
                flat[self._pos(k)] = v
            img = tuple(flat)
        else:
            img = tuple(images)
            d = len(img) // 2
        dom = set(range(1, d + 1)) | set(range(-d, 0))
        if set(img) != dom or len(img) != 2 * d:
            raise ValidationError(f"not a bijection of the signed set of degree {d}")
        self.d = d
        self._img = img

    @classmethod
    def identity(cls, d: int) -> "SPerm":
        return cls({k: k for k in signed_domain(d)}, d)

    @classmethod
    def sign_inversion(cls, d: int) -> "SPerm":
        """The map k -> -k (the reserved element n)."""
        return cls({k: -k for k in signed_domain(d)}, d)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], d: Optional[int] = None) -> "SPerm":
        cycles = [list(c) for c in cycles]
        seen: set[int] = set()
        for c in cycles:
            for k in c:
                if k == 0:
                    raise ValidationError("0 is not a signed index")
                if k in seen:
                    raise ValidationError(f"repeated entry {k} in cycles")
                seen.add(k)
        if d is None:
            d = max((abs(k) for k in seen), default=1)
        if seen and max(abs(k) for k in seen) > d:
            raise ValidationError(f"cycle entry exceeds degree {d}")
        images = {k: k for k in signed_domain(d)}
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                images[a] = b
        return cls(images, d)

    @classmethod
    def from_square_map(cls, plain: Perm, signs: Optional[Sequence[int]] = None) -> "SPerm":
        """Odd element sending +k to sign_k * plain(k)."""
        d = plain.d
        signs = tuple(signs) if signs is not None else (1,) * d
        images = {}
        for k in range(1, d + 1):
            images[k] = signs[k - 1] * plain(k)
            images[-k] = -images[k]
        return cls(images, d)

    def __call__(self, k: int) -> int:
        return self._img[self._pos(k)]

    def __mul__(self, other: "SPerm") -> "SPerm":
        if not isinstance(other, SPerm):
            return NotImplemented
        if self.d != other.d:
            raise DegreeMismatch(f"degrees {self.d} and {other.d}")
        return SPerm({k: self(other(k)) for k in signed_domain(self.d)}, self.d)

    def inverse(self) -> "SPerm":
        return SPerm({self(k): k for k in signed_domain(self.d)}, self.d)

    def conjugate(self, tau: "SPerm") -> "SPerm":
        """tau * self * tau^{-1}."""
        return tau * self * tau.inverse()

    def is_identity(self) -> bool:
        return all(self(k) == k for k in signed_domain(self.d))

    def odd(self) -> bool:
        return all(self(-k) == -self(k) for k in range(1, self.d + 1))

    def sign_preserving(self) -> bool:
        return all(self(k) > 0 for k in range(1, self.d + 1))

    def is_involution(self) -> bool:
        return all(self(self(k)) == k for k in signed_domain(self.d))

    def is_fixed_point_free(self) -> bool:
        return all(self(k) != k for k in signed_domain(self.d))

    def domain(self) -> list[int]:
        return signed_domain(self.d)

    def cycles(self) -> list[list[int]]:
        out: list[list[int]] = []
        seen: set[int] = set()
        for start in signed_domain(self.d):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(cyc)
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SPerm) and self._img == other._img

    def __hash__(self) -> int:
        return hash(("SPerm", self._img))

    def __repr__(self) -> str:
        return f"SPerm({self})"

    def __str__(self) -> str:
        return format_cycles(self.cycles(), signed=True)

    @property
    def images(self) -> tuple[int, ...]:
        return self._img


def signed_domain(d: int) -> list[int]:
    """Signed indices in canonical order +1, -1, +2, -2, ..."""
    out = []
    for k in range(1, d + 1):
        out.append(k)
        out.append(-k)
    return out


def compose(p, q):
    """(p o q)(i) = p(q(i)); both arguments of the same kind and degree."""
    if type(p) is not type(q):
        raise DegreeMismatch(f"cannot compose {type(p).__name__} with {type(q).__name__}")
    return p * q


def is_transitive(gens: Sequence[Union[Perm, SPerm]], d: Optional[int] = None) -> bool:
    """True iff the group generated acts with a single orbit on its domain.

    The domain is I_d for Perm generators and the signed set for SPerm
    generators; sign inversion is *not* added implicitly.
    """
    if not gens:
        if d is None:
            return False
        return d == 1
    first = gens[0]
    for g in gens[1:]:
        if type(g) is not type(first) or g.d != first.d:
            raise DegreeMismatch("mixed generator kinds or degrees")
    domain = list(first.domain())
    seen = {domain[0]}
    stack = [domain[0]]
    while stack:
        a = stack.pop()
        for g in gens:
            for b in (g(a), g.inverse()(a)):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
    return len(seen) == len(domain)


def _orbits(gens: Sequence[SPerm], domain: list[int]) -> list[list[int]]:
    seen: set[int] = set()
    orbits = []
    for start in domain:
        if start in seen:
            continue
        orb = [start]
        seen.add(start)
        stack = [start]
        while stack:
            a = stack.pop()
            for g in gens:
                for b in (g(a), g.inverse()(a)):
                    if b not in seen:
                        seen.add(b)
                        orb.append(b)
                        stack.append(b)
        orbits.append(sorted(orb, key=_skey))
    return orbits


def _propagate_map(
    gens_a: Sequence[SPerm],
    gens_b: Sequence[SPerm],
    start_a: int,
    start_b: int,
) -> Optional[dict[int, int]]:
    """Partial bijection with f(start_a) = start_b and f g_a = g_b f on the
    orbit of start_a; None if inconsistent."""
    f = {start_a: start_b}
    used = {start_b}
    stack = [start_a]
    invs_a = [g.inverse() for g in gens_a]
    invs_b = [g.inverse() for g in gens_b]
    while stack:
        a = stack.pop()
        b = f[a]
        for ga, gb in list(zip(gens_a, gens_b)) + list(zip(invs_a, invs_b)):
            na, nb = ga(a), gb(b)
            if na in f:
                if f[na] != nb:
                    return None
            else:
                if nb in used:
                    return None
                f[na] = nb
                used.add(nb)
                stack.append(na)
    return f


def centralizer(gens: Sequence[SPerm], d: Optional[int] = None, ambient: str = "sym") -> list[SPerm]:
    """Generating set of the centralizer of ``gens`` inside the full symmetric
    group on the signed set (``ambient="sym"``) or inside the odd subgroup
    (``ambient="odd"``).

    Commuting with sign inversion is equivalent to oddness, so the odd case
    reduces to centralizing ``gens + [n]``.  Output order is deterministic.
    """
    if d is None:
        if not gens:
            raise ValidationError("degree required when no generators are given")
        d = gens[0].d
    for g in gens:
        if g.d != d:
            raise DegreeMismatch("generator degrees differ")
    if ambient not in ("sym", "odd"):
        raise ValidationError(f"unknown ambient {ambient!r}")
    work = list(gens)
    if ambient == "odd":
        work.append(SPerm.sign_inversion(d))
    domain = signed_domain(d)
    orbits = _orbits(work, domain)

    out: list[SPerm] = []

    def emit(mapping: dict[int, int]) -> None:
        images = {k: k for k in domain}
        images.update(mapping)
        el = SPerm(images, d)
        if not el.is_identity() and el not in out:
            out.append(el)

    # within-orbit centralizer elements (semiregular: one per consistent base image)
    for orb in orbits:
        base = orb[0]
        for target in orb:
            if target == base:
                continue
            f = _propagate_map(work, work, base, target)
            if f is not None and len(f) == len(orb):
                emit(f)

    # swaps between isomorphic orbits (consecutive within each iso class)
    classes: list[list[tuple[list[int], dict[int, int]]]] = []
    for orb in orbits:
        placed = False
        for cls in classes:
            rep_orb = cls[0][0]
            if len(rep_orb) != len(orb):
                continue
            f = _propagate_map(work, work, rep_orb[0], orb[0])
            if f is not None and set(f) == set(rep_orb) and set(f.values()) == set(orb):
                cls.append((orb, f))
                placed = True
                break
        if not placed:
            classes.append([(orb, {k: k for k in orb})])
    for cls in classes:
        for (orb1, f1), (orb2, f2) in zip(cls, cls[1:]):
            # iso orb1 -> orb2 through the class representative
            iso = {a: f2[f1_inv_a] for a, f1_inv_a in ((a, k) for k, a in f1.items())}
            mapping = dict(iso)
            mapping.update({v: k for k, v in iso.items()})
            emit(mapping)

    out.sort(key=lambda p: p.images)
    return out


def _sim_conj_engine(
    domain: list[int],
    gens_a: Sequence,
    gens_b: Sequence,
    make,
) -> Optional[object]:
    """Backtracking search for f with f a_i f^{-1} = b_i slotwise."""
    if len(gens_a) != len(gens_b):
        raise DegreeMismatch("tuple lengths differ")
    n = len(domain)

    def search(f: dict[int, int], used: set[int]):
        if len(f) == n:
            return f
        a0 = next(a for a in domain if a not in f)
        for b0 in domain:
            if b0 in used:
                continue
            g = _propagate_map(gens_a, gens_b, a0, b0)
            if g is None:
                continue
            merged = dict(f)
            ok = True
            newused = set(used)
            for k, v in g.items():
                if k in merged:
                    if merged[k] != v:
                        ok = False
                        break
                elif v in newused:
                    ok = False
                    break
                else:
                    merged[k] = v
                    newused.add(v)
            if not ok:
                continue
            res = search(merged, newused)
            if res is not None:
                return res
        return None

    f = search({}, set())
    if f is None:
        return None
    witness = make(f)
    return witness


def simultaneous_conjugacy(
    tuple_a: Sequence[SPerm],
    tuple_b: Sequence[SPerm],
    constraint: str = "none",
) -> Optional[SPerm]:
    """A witness tau with tau * a_i * tau^{-1} == b_i for all i, or None.

    ``constraint="odd"`` restricts the witness to the odd subgroup, realized
    by additionally conjugating sign inversion to itself.
    """
    if len(tuple_a) != len(tuple_b):
        raise DegreeMismatch("tuple lengths differ")
    if not tuple_a:
        raise ValidationError("empty tuples")
    d = tuple_a[0].d
    for g in list(tuple_a) + list(tuple_b):
        if g.d != d:
            raise DegreeMismatch("degrees differ")
    ga = list(tuple_a)
    gb = list(tuple_b)
    if constraint == "odd":
        n = SPerm.sign_inversion(d)
        ga.append(n)
        gb.append(n)
    elif constraint != "none":
        raise ValidationError(f"unknown constraint {constraint!r}")

    witness = _sim_conj_engine(signed_domain(d), ga, gb, lambda f: SPerm(f, d))
    if witness is None:
        return None
    for a, b in zip(ga, gb):
        if witness * a != b * witness:
            return None
    return witness


def simultaneous_conjugacy_plain(
    tuple_a: Sequence[Perm],
    tuple_b: Sequence[Perm],
) -> Optional[Perm]:
    """Plain-index variant: sigma with sigma a_i sigma^{-1} == b_i, or None."""
    if len(tuple_a) != len(tuple_b):
        raise DegreeMismatch("tuple lengths differ")
    if not tuple_a:
        raise ValidationError("empty tuples")
    d = tuple_a[0].d
    for g in list(tuple_a) + list(tuple_b):
        if g.d != d:
            raise DegreeMismatch("degrees differ")
    witness = _sim_conj_engine(
        list(range(1, d + 1)),
        list(tuple_a),
        list(tuple_b),
        lambda f: Perm([f[i] for i in range(1, d + 1)]),
    )
    if witness is None:
        return None
    for a, b in zip(tuple_a, tuple_b):
        if witness * a != b * witness:
            return None
    return witness


# ---------------------------------------------------------------------------
# cycle-notation text codec (shared with the CLI)


def format_cycles(cycles: Sequence[Sequence[int]], signed: bool) -> str:
    def fmt(k: int) -> str:
        if signed:
            return f"+{k}" if k > 0 else str(k)
        return str(k)

    return "".join("(" + " ".join(fmt(k) for k in c) + ")" for c in cycles) or "()"


class _Scanner:
    def __init__(self, text: str, offset: int = 0):
        self.text = text
        self.i = 0
        self.offset = offset

    def pos(self) -> int:
        return self.offset + self.i

    def skip_ws(self) -> None:
        while self.i < len(self.text) and self.text[self.i] in " \t\r\n":
            self.i += 1

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos())
        self.i += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.i >= len(self.text)

    def read_int(self, signed: bool) -> int:
        self.skip_ws()
        start = self.i
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        digits = ""
        while self.peek().isdigit():
            digits += self.peek()
            self.i += 1
        if not digits:
            raise ParseError("expected an index", self.offset + start)
        val = sign * int(digits)
        if val == 0:
            raise ParseError("0 is not a valid index", self.offset + start)
        if not signed and val < 0:
            raise ParseError("negative index in a plain permutation", self.offset + start)
        return val


def _parse_cycle_list(sc: _Scanner, signed: bool) -> list[list[int]]:
    cycles: list[list[int]] = []
    sc.skip_ws()
    if sc.peek() != "(":
        raise ParseError("expected '('", sc.pos())
    while True:
        sc.skip_ws()
        if sc.peek() != "(":
            break
        sc.expect("(")
        cyc: list[int] = []
        while True:
            sc.skip_ws()
            if sc.peek() == ")":
                sc.expect(")")
                break
            if sc.peek() == ",":
                sc.expect(",")
                continue
            cyc.append(sc.read_int(signed))
        if cyc:
            cycles.append(cyc)
    return cycles


def parse_perm(text: str, d: Optional[int] = None, offset: int = 0) -> Perm:
    """Parse plain cycle notation, e.g. ``(1 2)(3 4)`` or ``()``."""
    sc = _Scanner(text, offset)
    cycles = _parse_cycle_list(sc, signed=False)
    if not sc.at_end():
        raise ParseError("trailing input after cycles", sc.pos())
    return Perm.from_cycles(cycles, d)


def parse_sperm(text: str, d: Optional[int] = None, offset: int = 0) -> SPerm:
    """Parse signed cycle notation, e.g. ``(+1 -2)(-1 +2)``.

    Bare digits are read as positive.  Round-trips exactly with ``str()``.
    """
    sc = _Scanner(text, offset)
    cycles = _parse_cycle_list(sc, signed=True)
    if not sc.at_end():
        raise ParseError("trailing input after cycles", sc.pos())
    return SPerm.from_cycles(cycles, d)
