import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace import gf2


def dense_rank(mat):
    """Textbook row reduction mod 2 on a 0/1 array."""
    a = np.array(mat, dtype=np.uint8) % 2
    rows, cols = a.shape if a.size else (0, 0)
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i, c]), None)
        if pivot is None:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def test_pack():
    assert gf2.pack([0, 2]) == 0b101
    assert gf2.pack([1, 1]) == 0


def test_small_ranks():
    assert gf2.rank([]) == 0
    assert gf2.rank([0b11, 0b11]) == 1
    assert gf2.rank([0b011, 0b110, 0b101]) == 2


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.data())
def test_rank_matches_dense(rows, cols, data):
    mat = data.draw(st.lists(st.lists(st.integers(0, 1), min_size=cols, max_size=cols),
                             min_size=rows, max_size=rows))
    packed = [gf2.pack(i for i, v in enumerate(row) if v) for row in mat]
    assert gf2.rank(packed) == dense_rank(mat)


def test_betti_of_circle():
    # square boundary: 4 vertices, 4 edges
    edges = {4: (0, 1), 5: (1, 2), 6: (2, 3), 7: (3, 0)}
    betti = gf2.betti_numbers([[0, 1, 2, 3], [4, 5, 6, 7]], lambda e: edges[e])
    assert betti == [1, 1]
