"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from xxrect.chain import build_custom

fields = st.floats(-4.0, 4.0, allow_nan=False)
couplings = st.floats(0.2, 2.0).flatmap(lambda a: st.sampled_from([a, -a]))
temperatures = st.floats(0.2, 20.0)
gammas = st.floats(0.5, 2.0)


@st.composite
def chains(draw, min_sites: int = 2, max_sites: int = 10):
    N = draw(st.integers(min_sites, max_sites))
    h = draw(st.lists(fields, min_size=N, max_size=N))
    alpha = draw(st.lists(couplings, min_size=N - 1, max_size=N - 1))
    return build_custom(h, alpha, draw(gammas))


@st.composite
def symmetric_chains(draw, max_half: int = 5):
    half = draw(st.integers(1, max_half))
    h = draw(st.lists(fields, min_size=half, max_size=half))
    odd = draw(st.booleans())
    mid = [draw(fields)] if odd else []
    h = h + mid + h[::-1]
    nb = (len(h) - 1) // 2
    a = draw(st.lists(couplings, min_size=nb, max_size=nb))
    alpha = a + ([draw(couplings)] if len(h) % 2 == 0 else []) + a[::-1]
    return build_custom(h, alpha, draw(gammas))
