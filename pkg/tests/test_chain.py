from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given

from xxrect.chain import (
    ChainSpec,
    build_boundary_perturbed,
    build_coupling_junction,
    build_custom,
    build_field_junction,
    build_from_template,
    build_graded,
    reflect,
    template_parameters,
    to_w_matrix,
)
from xxrect.errors import ChainDimensionError, InvalidRateError, NonFiniteError, ValidationError

from strategies import chains


def test_boundary_perturbed_fields():
    c = build_boundary_perturbed(4, 5.0, 1.0, 2.0)
    assert c.h == (4.0, 5.0, 5.0, 6.0)
    assert c.alpha == (1.0, 1.0, 1.0)
    assert c.gamma == 2.0


def test_junctions_split_at_half():
    f = build_field_junction(4, 1.0, -1.0, 0.5)
    assert f.h == (1.0, 1.0, -1.0, -1.0) and f.alpha == (0.5,) * 3
    c = build_coupling_junction(6, 1.0, 2.0, 0.3)
    assert c.alpha == (1.0, 1.0, 1.0, 2.0, 2.0) and c.h == (0.3,) * 6


def test_graded_counts_from_one():
    g = build_graded(3, 1.0, 0.5, 1.0, 0.1)
    assert g.h == (1.5, 2.0, 2.5)
    assert g.alpha == pytest.approx((1.1, 1.2))


@pytest.mark.parametrize("bad, err", [
    (lambda: build_custom([1.0], []), ChainDimensionError),
    (lambda: build_custom([1.0, 2.0], [1.0, 1.0]), ChainDimensionError),
    (lambda: build_custom([1.0, math.nan], [1.0]), NonFiniteError),
    (lambda: build_custom([1.0, 1.0], [math.inf]), NonFiniteError),
    (lambda: build_custom([1.0, 1.0], [1.0], 0.0), InvalidRateError),
    (lambda: build_custom([1.0, 1.0], [1.0], -1.0), InvalidRateError),
    (lambda: build_field_junction(5, 1.0, 2.0, 1.0), ChainDimensionError),
    (lambda: build_boundary_perturbed(1, 1.0, 1.0), ChainDimensionError),
])
def test_invalid_chains(bad, err):
    with pytest.raises(err):
        bad()
    assert issubclass(err, ValidationError)


def test_templates():
    assert template_parameters("field-junction") == ("N", "h1", "h2", "alpha", "gamma")
    c = build_from_template("field-junction", {"N": 4, "h1": 1, "h2": 2, "alpha": 1, "gamma": 0.5})
    assert c == build_field_junction(4, 1, 2, 1, 0.5)


def test_chain_is_immutable():
    c = build_boundary_perturbed(3, 1.0, 1.0)
    with pytest.raises(AttributeError):
        c.gamma = 3.0


@given(chains())
def test_reflect_is_involution(chain):
    assert reflect(reflect(chain)) == chain
    assert reflect(chain).is_symmetric() == chain.is_symmetric()


@given(chains())
def test_w_matrix_symmetric_tridiagonal(chain):
    W = to_w_matrix(chain)
    assert np.array_equal(W, W.T)
    assert np.array_equal(np.diag(W), np.array(chain.h))
    assert np.count_nonzero(np.triu(W, 2)) == 0


def test_symmetry_detection():
    assert build_field_junction(4, 1.0, 1.0, 1.0).is_symmetric()
    assert not build_boundary_perturbed(4, 5.0, 1.0).is_symmetric()
    assert ChainSpec((1.0, 2.0, 1.0), (0.5, 0.5)).is_symmetric()
