"""The PSL(2,Z) / SL(2,Z) generator action on origamis and Veech groups as
stabilizers via Schreier coset graphs and Reidemeister-Schreier generators.

Words are strings over {T, S, t, s} (lowercase = inverse).  A word acts right
to left: ``apply_word("TS", O) == act("T", act("S", O))``; the matrix of a
word is the product of generator matrices in string order.

Generator action conventions (validated by the relation and well-definedness
test suite):

* abelian pairs: T.(x,y) = (x, y x^{-1}), S.(x,y) = (y^{-1}, x), with
  (p q)(i) = p(q(i));
* general origamis act through the canonical double cover; the transported
  deck involutions are T: X n, T^{-1}: X^{-1} n, S and S^{-1}: n.

T preserves the horizontal cylinder structure (it is the shear fixing the
horizontal direction) and S exchanges horizontal and vertical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import Disconnected, NormalizationFailure, NotUnimodular, ValidationError
from .origami import (
    Origami,
    abelian_pair,
    canonical_form,
    double_cover,
    is_abelian,
    is_equivalent,
    theta_inverse,
)
from .perm import Perm, simultaneous_conjugacy_plain

__all__ = [
    "GroupWord",
    "VeechResult",
    "GEN_MATRICES",
    "act_abelian",
    "act",
    "apply_word",
    "apply_word_abelian",
    "orbit_stabilizer",
    "matrix_to_word",
    "contains",
]

_INVERSE = {"T": "t", "t": "T", "S": "s", "s": "S"}

GEN_MATRICES = {
    "T": ((1, 1), (0, 1)),
    "t": ((1, -1), (0, 1)),
    "S": ((0, 1), (-1, 0)),
    "s": ((0, -1), (1, 0)),
}

Matrix = tuple[tuple[int, int], tuple[int, int]]


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat_neg(a: Matrix) -> Matrix:
    return ((-a[0][0], -a[0][1]), (-a[1][0], -a[1][1]))


_ID: Matrix = ((1, 0), (0, 1))


@dataclass(frozen=True)
class GroupWord:
    """Freely reduced word over {T, S, t, s}."""

    letters: tuple[str, ...] = ()

    def __post_init__(self):
        reduced: list[str] = []
        for ch in self.letters:
            if ch not in _INVERSE:
                raise ValidationError(f"unknown generator letter {ch!r}")
            if reduced and reduced[-1] == _INVERSE[ch]:
                reduced.pop()
            else:
                reduced.append(ch)
        object.__setattr__(self, "letters", tuple(reduced))

    @classmethod
    def from_string(cls, s: str) -> "GroupWord":
        return cls(tuple(s.replace(" ", "")))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple(_INVERSE[c] for c in reversed(self.letters)))

    def matrix(self) -> Matrix:
        m = _ID
        for ch in self.letters:
            m = _mat_mul(m, GEN_MATRICES[ch])
        return m

    def is_empty(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return "".join(self.letters) or "1"

    def __len__(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class VeechResult:
    """Orbit/stabilizer data; the index equals the orbit size."""

    mode: str
    index: int
    coset_reps: tuple[GroupWord, ...]
    stabilizer_gens: tuple[GroupWord, ...]
    stabilizer_matrices: tuple[Matrix, ...]
    orbit: tuple[object, ...]  # canonical origamis (psl) or pairs (sl)


def act_abelian(letter: str, pair: tuple[Perm, Perm]) -> tuple[Perm, Perm]:
    """Generator action on transitive abelian pairs."""
    x, y = pair
    if letter == "T":
        return (x, y * x.inverse())
    if letter == "t":
        return (x, y * x)
    if letter == "S":
        return (y.inverse(), x)
    if letter == "s":
        return (y, x.inverse())
    raise ValidationError(f"unknown generator {letter!r}")


def act(letter: str, O: Origami) -> Origami:
    """Generator action on a connected origami through its double cover."""
    if not O.connected:
        raise Disconnected("act requires a connected origami")
    dc = double_cover(O)
    X, Y, n = dc.X, dc.Y, dc.n
    if letter == "T":
        Xp, Yp, np_ = X, Y * X.inverse(), X * n
    elif letter == "t":
        Xp, Yp, np_ = X, Y * X, X.inverse() * n
    elif letter == "S":
        Xp, Yp, np_ = Y.inverse(), X, n
    elif letter == "s":
        Xp, Yp, np_ = Y, X.inverse(), n
    else:
        raise ValidationError(f"unknown generator {letter!r}")
    npi = np_.inverse()
    if (
        not np_.is_involution()
        or not np_.is_fixed_point_free()
        or np_ * Xp * npi != Xp.inverse()
        or np_ * Yp * npi != Yp.inverse()
    ):
        raise NormalizationFailure("transported deck involution is not admissible")
    return theta_inverse(Xp, Yp, np_)


def apply_word(word: GroupWord, O: Origami) -> Origami:
    out = O
    for ch in reversed(word.letters):
        out = act(ch, out)
    return out


def apply_word_abelian(word: GroupWord, pair: tuple[Perm, Perm]) -> tuple[Perm, Perm]:
    out = pair
    for ch in reversed(word.letters):
        out = act_abelian(ch, out)
    return out


def _canonical_pair(pair: tuple[Perm, Perm]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Least representative of the simultaneous S_d-conjugacy class."""
    x, y = pair
    d = x.d
    best = None
    for images in _perm_images(d):
        sigma = Perm(images)
        si = sigma.inverse()
        key = ((sigma * x * si).images, (sigma * y * si).images)
        if best is None or key < best:
            best = key
    return best


def _perm_images(d: int):
    from itertools import permutations

    for p in permutations(range(1, d + 1)):
        yield p


_GEN_ORDER = ("T", "S", "t", "s")


def orbit_stabilizer(O: Origami, mode: str = "psl") -> VeechResult:
    """BFS over canonical forms under {T, S, T^-1, S^-1}; Schreier coset
    graph with Reidemeister-Schreier stabilizer generators.

    ``mode="sl"`` acts on the transitive abelian pair without projectivizing
    (so that -I membership is detected) and requires an abelian origami.
    """
    if not O.connected:
        raise Disconnected("orbit_stabilizer requires a connected origami")
    if mode == "psl":
        base = canonical_form(O)

        def key_of(state):
            return state.code()

        def step(letter, state):
            return canonical_form(act(letter, state))

        start = base
    elif mode == "sl":
        if not is_abelian(O):
            raise ValidationError("linear mode requires an abelian origami")
        start = abelian_pair(O)

        def key_of(state):
            return _canonical_pair(state)

        def step(letter, state):
            return act_abelian(letter, state)

    else:
        raise ValidationError(f"unknown mode {mode!r}")

    start_key = key_of(start)
    states = [start]
    words = [GroupWord()]
    index_of = {start_key: 0}
    stab_words: list[GroupWord] = []
    stab_seen: set[str] = set()
    i = 0
    while i < len(states):
        state = states[i]
        w = words[i]
        for letter in _GEN_ORDER:
            target = step(letter, state)
            tk = key_of(target)
            if tk not in index_of:
                index_of[tk] = len(states)
                states.append(target)
                words.append(GroupWord((letter,)) * w)
            else:
                j = index_of[tk]
                gen = words[j].inverse() * GroupWord((letter,)) * w
                if gen.is_empty():
                    continue
                canon = min(str(gen), str(gen.inverse()))
                if canon not in stab_seen:
                    stab_seen.add(canon)
                    stab_words.append(gen)
        i += 1

    matrices = tuple(g.matrix() for g in stab_words)
    return VeechResult(
        mode=mode,
        index=len(states),
        coset_reps=tuple(words),
        stabilizer_gens=tuple(stab_words),
        stabilizer_matrices=matrices,
        orbit=tuple(states),
    )


def matrix_to_word(M: Sequence[Sequence[int]], mode: str = "psl") -> GroupWord:
    """A word over {T, S, t, s} whose matrix equals M (linear mode) or +-M
    (projective mode); Euclidean reduction on the first column, verified
    exactly before return."""
    try:
        a, b = int(M[0][0]), int(M[0][1])
        c, d = int(M[1][0]), int(M[1][1])
    except (TypeError, ValueError, IndexError):
        raise NotUnimodular("matrix must be 2x2 integer")
    if a * d - b * c != 1:
        raise NotUnimodular(f"determinant {a * d - b * c} != 1")
    target: Matrix = ((a, b), (c, d))

    # left-multiply by generator matrices until the identity remains;
    # the applied letters, inverted and reversed, spell the input.
    applied: list[str] = []
    m = target

    def lmul(letter: str):
        nonlocal m
        m = _mat_mul(GEN_MATRICES[letter], m)
        applied.append(letter)

    while m[1][0] != 0:
        aa, cc = m[0][0], m[1][0]
        if abs(aa) < abs(cc) or aa == 0:
            lmul("s")  # swap rows with a sign
            continue
        q = aa // cc
        for _ in range(abs(q)):
            lmul("t" if q > 0 else "T")
    # now m is upper triangular with determinant 1: diag +-1
    if m[0][0] == -1:
        lmul("S")
        lmul("S")
        m = m  # S^2 = -I
    k = m[0][1]
    for _ in range(abs(k)):
        lmul("t" if k > 0 else "T")
    # (G_k ... G_1) M = I, so M = G_1^{-1} ... G_k^{-1}
    word = GroupWord(tuple(_INVERSE[ch] for ch in applied))
    got = word.matrix()
    if got == target:
        return word
    if got == _mat_neg(target):
        if mode == "psl":
            return word
        word = word * GroupWord.from_string("SS")
        if word.matrix() == target:
            return word
    raise NormalizationFailure("matrix/word reconstruction failed")  # pragma: no cover


def contains(O: Origami, M: Sequence[Sequence[int]], mode: str = "psl") -> bool:
    """True iff the word spelling M stabilizes the class of O."""
    word = matrix_to_word(M, mode)
    if mode == "psl":
        if not O.connected:
            raise Disconnected("contains requires a connected origami")
        image = apply_word(word, O)
        return is_equivalent(image, O) is not None
    if mode == "sl":
        if not is_abelian(O):
            raise ValidationError("linear mode requires an abelian origami")
        pair = abelian_pair(O)
        image = apply_word_abelian(word, pair)
        return simultaneous_conjugacy_plain(list(image), list(pair)) is not None
    raise ValidationError(f"unknown mode {mode!r}")
