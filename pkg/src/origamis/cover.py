"""Unbranched coverings as monodromy tuples over a marked base origami,
validity checking, the generator action on tuples (built in for the base D),
and cover Veech groups as stabilizers.

Words in the marking generators are tuples of nonzero ints: ``k`` is the
k-th generator (1-based), ``-k`` its inverse; substitutions are 7-tuples (for
D) of such words.  The built-in D action is given by explicit rewriting
formulas; every slot of the S-substitution is assembled from its sigma
factors, which keeps the substitution invertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .errors import (
    DegreeMismatch,
    InvalidTuple,
    ParseError,
    ValidationError,
)
from .origami import XYE, Origami, from_xye
from .perm import Perm, parse_perm, simultaneous_conjugacy_plain

__all__ = [
    "Word",
    "Substitution",
    "free_reduce",
    "word_inverse",
    "apply_substitution",
    "compose_substitutions",
    "BaseMarking",
    "MonodromyTuple",
    "CoverVeechResult",
    "d_origami",
    "d_marking",
    "validate",
    "act_on_tuple",
    "act_on_tuple_D",
    "tuple_equivalent",
    "cover_veech_group",
    "apply_word_to_tuple",
    "parse_tuple",
]

Word = tuple[int, ...]
Substitution = tuple[Word, ...]


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if x == 0:
            raise ValidationError("0 is not a generator letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def apply_substitution(sub: Substitution, word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        piece = sub[x - 1] if x > 0 else word_inverse(sub[-x - 1])
        out.extend(piece)
    return free_reduce(out)


def compose_substitutions(outer: Substitution, inner: Substitution) -> Substitution:
    """Substitution of the combined tuple action: outer words with inner
    words plugged in for the letters."""
    return tuple(apply_substitution(inner, w) for w in outer)


def _identity_substitution(n: int) -> Substitution:
    return tuple((i,) for i in range(1, n + 1))


def word_of_perms(word: Sequence[int], perms: Sequence[Perm], N: int) -> Perm:
    out = Perm.identity(N)
    # letters act left to right along the path, so the permutation is the
    # product of the letter images in word order under (p*q)(i)=p(q(i))
    for x in reversed(word):
        g = perms[x - 1] if x > 0 else perms[-x - 1].inverse()
        out = out * g
    return out


@dataclass(frozen=True)
class BaseMarking:
    """A base origami with a fixed free generating system of the punctured
    surface group, the corner data (order and a small loop word per corner),
    generator substitutions for T, S and their inverses, and the slot action
    of the automorphism twist."""

    base: Origami
    num_generators: int
    substitutions: dict[str, Substitution]  # keys T, S, t, s
    corners: tuple[tuple[int, Optional[Word]], ...]  # (order m, loop word)
    twists: tuple[Substitution, ...]  # automorphism slot actions, id excluded

    def __post_init__(self):
        for key in ("T", "S", "t", "s"):
            if key not in self.substitutions:
                raise ValidationError(f"missing substitution for {key!r}")
            if len(self.substitutions[key]) != self.num_generators:
                raise ValidationError(f"substitution for {key!r} has wrong arity")


@dataclass(frozen=True)
class MonodromyTuple:
    """Degree-N permutations along the marking generators."""

    N: int
    perms: tuple[Perm, ...]

    def __post_init__(self):
        for p in self.perms:
            if p.d != self.N:
                raise DegreeMismatch("tuple entries must all have degree N")

    def monodromy_of(self, word: Sequence[int]) -> Perm:
        return word_of_perms(word, self.perms, self.N)

    def key(self) -> tuple:
        return tuple(p.images for p in self.perms)


@dataclass(frozen=True)
class CoverVeechResult:
    index: int
    coset_reps: tuple[str, ...]
    stabilizer_gens: tuple[str, ...]

    @property
    def orbit_size(self) -> int:
        return self.index


# ---------------------------------------------------------------------------
# the built-in marking of the origami D

# letters 1..7 stand for the generators tau_0..tau_6
_T_SUB: Substitution = ((1,), (2,), (3,), (4,), (6,), (7,), (-5, -1))
_T_INV_SUB: Substitution = ((1,), (2,), (3,), (4,), (-1, -7), (5,), (6,))

# sigma factors of the S-rewriting: s1=t1, s2=t1 t5, s3=t1 t5 t3,
# s4=t1 t5 t3 t6^{-1}, s5=t1 t5 t3 t6^{-1} t2
_S1 = (2,)
_S2 = (2, 6)
_S3 = (2, 6, 4)
_S4 = (2, 6, 4, -7)
_S5 = (2, 6, 4, -7, 3)


def _concat(*parts: Sequence[int]) -> Word:
    out: list[int] = []
    for p in parts:
        out.extend(p)
    return free_reduce(out)


_S_SUB: Substitution = (
    _concat((5,), word_inverse(_S5)),
    _concat(_S4, (3,), (7,), word_inverse(_S3)),
    _concat(_S3, word_inverse(_S2)),
    _S1,
    _concat(_S5, word_inverse(_S2)),
    _concat(_S4, word_inverse(_S1)),
    _concat(_S3, (1,)),
)

# solved from _S_SUB; verified to compose to the identity both ways
_SH2 = _concat((-5,), (2,), (6,), (4,))
_SH3 = _concat((3,), _SH2)
_SH4 = (6, 4)
_SH5 = (2, 6, 4)

_S_INV_SUB: Substitution = (
    _concat(word_inverse(_SH3), (7,)),
    (4,),
    _concat(word_inverse(_SH4), _SH5),
    _concat(word_inverse(_SH2), _SH3),
    _concat((1,), _SH5),
    _concat((-4,), _SH2),
    _concat(word_inverse(_SH4), _SH3),
)


def d_origami() -> Origami:
    """The degree-6 origami with the full projective Veech group."""
    x = Perm.from_cycles([[1, 2, 3, 4, 5, 6]], 6)
    y = Perm.from_cycles([[1, 2, 5, 6, 3, 4]], 6)
    return from_xye(XYE(x, y, (-1, 1, -1, 1, -1, 1)))


@lru_cache(maxsize=1)
def d_marking() -> BaseMarking:
    """Built-in marking of D: seven free generators, the three pole loops
    fixed as tau_1, tau_2, tau_3 (the unique single-letter triple carried
    into itself by both generator substitutions), and the automorphism slot
    action realized by the square of the S-substitution."""
    base = d_origami()
    rho = compose_substitutions(_S_SUB, _S_SUB)
    rho2 = compose_substitutions(rho, rho)
    # poles: the unique single-letter triple invariant under both
    # substitutions; zeros: the unique further finite closure class, oriented
    # so that all six corner classes abelianize to zero
    corners = (
        (-1, (2,)),
        (-1, (3,)),
        (-1, (4,)),
        (1, (-7, -5, 6)),
        (1, (-4, -3, -2, -1)),
        (1, (1, 5, -6, 7)),
    )
    return BaseMarking(
        base=base,
        num_generators=7,
        substitutions={"T": _T_SUB, "t": _T_INV_SUB, "S": _S_SUB, "s": _S_INV_SUB},
        corners=corners,
        twists=(rho, rho2),
    )


# ---------------------------------------------------------------------------
# validity, action, equivalence, stabilizer


def validate(marking: BaseMarking, t: MonodromyTuple) -> list[str]:
    """Violations of the unbranched-covering conditions; empty means valid.

    Branching is allowed only over singular corners; over a pole no cycle of
    the puncture monodromy may have length two (that would cancel the pole),
    and over an order-0 corner every cycle must be a fixed point.
    """
    violations: list[str] = []
    if len(t.perms) != marking.num_generators:
        return [f"expected {marking.num_generators} permutations, got {len(t.perms)}"]
    from .perm import is_transitive

    if t.N > 1 and not is_transitive(list(t.perms), d=t.N):
        violations.append("disconnected: the tuple does not generate a transitive group")
    for idx, (order, word) in enumerate(marking.corners):
        if word is None:
            continue
        mono = t.monodromy_of(word)
        lengths = {len(c) for c in mono.cycles()}
        if order == -1 and 2 in lengths:
            violations.append(
                f"pole cancellation: corner {idx} (a pole) has a length-2 cycle"
            )
        if order == 0 and lengths != {1}:
            violations.append(
                f"branching over the regular corner {idx}"
            )
    return violations


def act_on_tuple(marking: BaseMarking, letter: str, t: MonodromyTuple) -> MonodromyTuple:
    """Generator action on monodromy tuples by the marking's substitution."""
    if letter not in marking.substitutions:
        raise ValidationError(f"unknown generator {letter!r}")
    if len(t.perms) != marking.num_generators:
        raise InvalidTuple("tuple arity does not match the marking")
    sub = marking.substitutions[letter]
    return MonodromyTuple(t.N, tuple(t.monodromy_of(w) for w in sub))


def act_on_tuple_D(letter: str, t: MonodromyTuple) -> MonodromyTuple:
    return act_on_tuple(d_marking(), letter, t)


def _twisted(marking: BaseMarking, t: MonodromyTuple, twist: Optional[Substitution]) -> MonodromyTuple:
    if twist is None:
        return t
    return MonodromyTuple(t.N, tuple(t.monodromy_of(w) for w in twist))


def tuple_equivalent(marking: BaseMarking, t1: MonodromyTuple, t2: MonodromyTuple) -> bool:
    """Simultaneous S_N-conjugacy combined with the finite automorphism
    twist of the base."""
    if t1.N != t2.N:
        raise DegreeMismatch("tuple degrees differ")
    for twist in (None,) + tuple(marking.twists):
        cand = _twisted(marking, t1, twist)
        if simultaneous_conjugacy_plain(list(cand.perms), list(t2.perms)) is not None:
            return True
    return False


_GEN_ORDER = ("T", "S", "t", "s")
_INV = {"T": "t", "t": "T", "S": "s", "s": "S"}


def _word_str(letters: Sequence[str]) -> str:
    out: list[str] = []
    for ch in letters:
        if out and out[-1] == _INV[ch]:
            out.pop()
        else:
            out.append(ch)
    return "".join(out) or "1"


def _canonical_key(marking: BaseMarking, t: MonodromyTuple) -> tuple:
    """Least image table over all sheet relabelings and twists; equal keys
    exactly characterize tuple equivalence."""
    from itertools import permutations

    variants = [t] + [_twisted(marking, t, tw) for tw in marking.twists]
    best = None
    for var in variants:
        for images in permutations(range(1, t.N + 1)):
            g = Perm(images)
            gi = g.inverse()
            key = tuple((g * p * gi).images for p in var.perms)
            if best is None or key < best:
                best = key
    return best


def cover_veech_group(t: MonodromyTuple, marking: Optional[BaseMarking] = None) -> CoverVeechResult:
    """Stabilizer of the tuple class under the generator action, computed by
    BFS with Reidemeister-Schreier words.

    Requires a valid (unbranched, connected) tuple and a base whose own Veech
    group is the full group, as for the built-in D marking.
    """
    if marking is None:
        marking = d_marking()
    bad = validate(marking, t)
    if bad:
        raise InvalidTuple("; ".join(bad))
    states: list[MonodromyTuple] = [t]
    words: list[tuple[str, ...]] = [()]
    index_of: dict[tuple, int] = {_canonical_key(marking, t): 0}
    stab: list[str] = []
    seen_stab: set[str] = set()
    i = 0
    while i < len(states):
        cur = states[i]
        w = words[i]
        for letter in _GEN_ORDER:
            nxt = act_on_tuple(marking, letter, cur)
            key = _canonical_key(marking, nxt)
            j = index_of.get(key)
            if j is None:
                index_of[key] = len(states)
                states.append(nxt)
                words.append((letter,) + w)
            else:
                gen_letters = tuple(_INV[ch] for ch in reversed(words[j])) + (letter,) + w
                s = _word_str(gen_letters)
                if s != "1" and s not in seen_stab:
                    seen_stab.add(s)
                    inv = _word_str(tuple(_INV[ch] for ch in reversed(gen_letters)))
                    if inv not in seen_stab:
                        stab.append(s)
        i += 1
    return CoverVeechResult(
        index=len(states),
        coset_reps=tuple(_word_str(w) for w in words),
        stabilizer_gens=tuple(stab),
    )


def apply_word_to_tuple(marking: BaseMarking, word: str, t: MonodromyTuple) -> MonodromyTuple:
    out = t
    for ch in reversed(word):
        if ch == "1":
            continue
        out = act_on_tuple(marking, ch, out)
    return out


# ---------------------------------------------------------------------------
# text input


def parse_tuple(text: str, num_generators: int = 7) -> MonodromyTuple:
    """Parse ``N=3; tau0=(1 2); tau1=(); ...`` (missing slots mean identity)."""
    n_val: Optional[int] = None
    slots: dict[int, tuple[str, int]] = {}
    pos = 0
    for chunk in text.split(";"):
        stripped = chunk.strip()
        if stripped:
            if "=" not in stripped:
                raise ParseError("expected key=value", pos)
            key, _, val = stripped.partition("=")
            key = key.strip().lower()
            off = pos + chunk.index("=") + 1
            if key == "n":
                try:
                    n_val = int(val.strip())
                except ValueError:
                    raise ParseError("N must be an integer", off)
            elif key.startswith("tau"):
                try:
                    idx = int(key[3:])
                except ValueError:
                    raise ParseError(f"bad slot name {key!r}", pos)
                if idx < 0 or idx >= num_generators:
                    raise ParseError(f"slot {idx} out of range", pos)
                slots[idx] = (val, off)
            else:
                raise ParseError(f"unknown field {key!r}", pos)
        pos += len(chunk) + 1
    if n_val is None or n_val < 1:
        raise ParseError("missing or invalid N", 0)
    perms = []
    for i in range(num_generators):
        if i in slots:
            val, off = slots[i]
            perms.append(parse_perm(val, d=n_val, offset=off))
        else:
            perms.append(Perm.identity(n_val))
    return MonodromyTuple(n_val, tuple(perms))
