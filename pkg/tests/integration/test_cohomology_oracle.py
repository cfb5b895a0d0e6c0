import pytest

from app.operations.cohomology import h2_mod_n, h2_qz, hom_to_cyclic
from app.operations.group_core import abelian_invariants
from app.operations.verification import CORPUS, corpus
from tests.integration.cohomology_oracle import h1_dimension, h2_dimension

SMALL = [name for name, g in corpus().items() if g.order <= 16]


def _p_rank(factors: list[int], p: int) -> int:
    return sum(1 for d in factors if d % p == 0)


@pytest.fixture(scope="module")
def small_groups():
    return corpus(SMALL)


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("p", [2, 3])
def test_h2_matches_dense_complex(small_groups, name, p):
    """Test H²(G, F_p) against ranks of the dense cochain complex."""
    g = small_groups[name]
    factors = h2_mod_n(g, p).invariants.factors
    assert all(d == p for d in factors)
    assert len(factors) == h2_dimension(g, p), f"H²({name}, F_{p})"


@pytest.mark.parametrize("name", SMALL)
def test_homs_match_dense_complex(small_groups, name):
    """Test the number of homomorphisms to Z/2 against the dense complex."""
    g = small_groups[name]
    assert len(hom_to_cyclic(g, 2)) == 2 ** h1_dimension(g, 2)


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("p", [2, 3])
def test_universal_coefficients(small_groups, name, p):
    """Test dim H²(G, F_p) = p-rank of the abelianization + p-rank of the Schur multiplier."""
    g = small_groups[name]
    expected = _p_rank(abelian_invariants(g).factors, p) + _p_rank(h2_qz(g).invariants.factors, p)
    assert h2_dimension(g, p) == expected


def test_corpus_covers_small_orders():
    """Test that the oracle runs over a useful range of groups."""
    assert {"C2xC2", "D4", "Q8", "Q16", "A4", "C3xC3"} <= set(SMALL)
    assert "S4" in CORPUS and "S4" not in SMALL
