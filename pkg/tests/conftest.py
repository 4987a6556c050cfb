import hypothesis.strategies as st
from hypothesis import settings

from lattice_battleship.lattice_core import Shape
from lattice_battleship.shape_gen import GenSpec, generate

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SEGMENT4 = [(0, 0), (1, 0), (2, 0), (3, 0)]
L_TROMINO = [(0, 0), (1, 0), (0, 1)]


def block(a, b):
    return [(x, y) for x in range(a) for y in range(b)]


coords = st.integers(min_value=-6, max_value=6)
point_lists = st.lists(st.tuples(coords, coords), min_size=1, max_size=14, unique=True)
shapes = point_lists.map(Shape)
seeds = st.integers(min_value=0, max_value=2**32)


def generated(cls, lo, hi):
    return st.builds(lambda n, s: generate(GenSpec(cls, n=n, seed=s)), st.integers(lo, hi), seeds)
