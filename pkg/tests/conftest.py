import random

import pytest

from origamis.origami import XYE, Origami, from_xye
from origamis.perm import Perm, SPerm


@pytest.fixture
def rng():
    return random.Random(20240817)


def make_figure2():
    x = Perm.from_cycles([[2, 3, 4]], 4)
    y = Perm.from_cycles([[1, 2], [3, 4]], 4)
    return from_xye(XYE(x, y, (1, 1, 1, -1)))


def make_d():
    x = Perm.from_cycles([[1, 2, 3, 4, 5, 6]], 6)
    y = Perm.from_cycles([[1, 2, 5, 6, 3, 4]], 6)
    return from_xye(XYE(x, y, (-1, 1, -1, 1, -1, 1)))


def make_l_origami():
    return from_xye(
        XYE(Perm.from_cycles([[1, 2]], 3), Perm.from_cycles([[1, 3]], 3), (1, 1, 1))
    )


def make_h2():
    """Two-square horizontal torus."""
    return from_xye(XYE(Perm.from_cycles([[1, 2]], 2), Perm.identity(2), (1, 1)))


def random_relabel(rng, O):
    img = list(range(1, O.d + 1))
    rng.shuffle(img)
    signs = [rng.choice([1, -1]) for _ in range(O.d)]
    tau = SPerm.from_square_map(Perm(img), signs)
    return Origami(O.mu.conjugate(tau), O.nu.conjugate(tau)), tau


@pytest.fixture
def figure2():
    return make_figure2()


@pytest.fixture
def origami_d():
    return make_d()


@pytest.fixture
def l_origami():
    return make_l_origami()


@pytest.fixture
def h2():
    return make_h2()
