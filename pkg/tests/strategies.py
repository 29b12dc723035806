import numpy as np
from hypothesis import strategies as st

from spansub.digraph import Digraph


@st.composite
def digraphs(draw, min_n=0, max_n=12):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    adj = np.array(bits, dtype=bool).reshape(n, n)
    if n:
        np.fill_diagonal(adj, False)
    return Digraph.from_adjacency(adj)
