import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgo.catalog import GradedDescriptor, realized_descriptor, row
from pgo.diagrams import OneType
from pgo.errors import DomainError
from pgo.orbits import (
    F_SQUARES,
    F_STAR,
    NORMS,
    character_data,
    chi0_image,
    nonzero_orbit_count,
    open_orbit_count,
    p_open_orbit_count,
    psi_character_exponents,
    rank_QX,
    summarize,
    t_involution,
    total_orbit_count,
)


def test_open_orbit_counts():
    assert open_orbit_count(row("8").descriptor(m=6)) == 1
    assert open_orbit_count(realized_descriptor("sp", 4)) == 5
    assert open_orbit_count(realized_descriptor("sp", 3)) == 2
    assert open_orbit_count(realized_descriptor("type3", 0)) == 3
    assert open_orbit_count(realized_descriptor("type3", 2)) == 4
    assert open_orbit_count(realized_descriptor("unitary", 2)) == 2


def test_nonzero_orbit_counts():
    assert nonzero_orbit_count(realized_descriptor("sp", 4)) == 12
    assert nonzero_orbit_count(realized_descriptor("unitary", 3)) == 4
    assert nonzero_orbit_count(realized_descriptor("gl", 5)) == 5


@pytest.mark.parametrize("k", range(5))
def test_type3_counts_split_zero_orbit(k):
    desc = realized_descriptor("type3", k)
    assert nonzero_orbit_count(desc) == 4 * k + 3
    assert total_orbit_count(desc) == 4 * (k + 1)


def test_unsupported_type2_count():
    desc = GradedDescriptor("x", k=2, ell=1, d=3, e=3, one_type=OneType("A", 1), gtype="II")
    with pytest.raises(DomainError):
        nonzero_orbit_count(desc)
    summary = summarize(desc)
    assert summary.nonzero_orbits is None and summary.open_orbits == 4 and summary.note


def test_summary_for_rank_two_rows():
    # rank 2 counts come from the rank-two theorem for every e
    assert summarize(row("9").descriptor(m=4)).nonzero_orbits == 3
    assert summarize(row("3").descriptor(m=4)).nonzero_orbits == 5


def test_chi0_images():
    assert chi0_image(row("8").descriptor(m=4)) == F_STAR
    assert chi0_image(realized_descriptor("sp", 2)) == F_SQUARES
    assert chi0_image(realized_descriptor("sp", 3)) == F_STAR
    assert chi0_image(realized_descriptor("unitary", 2)) == NORMS
    assert chi0_image(realized_descriptor("type3", 1)) == F_SQUARES


@pytest.mark.parametrize("m,ell,d,want", [(0, 1, 1, 0), (2, 1, 1, 3), (3, 3, 4, 21), (1, 3, None, 3)])
def test_rank_QX(m, ell, d, want):
    assert rank_QX(m, ell, d) == want


def test_p_open_orbit_counts():
    assert p_open_orbit_count(realized_descriptor("sp", 3)) == 16
    assert p_open_orbit_count(realized_descriptor("unitary", 3)) == 4
    assert p_open_orbit_count(realized_descriptor("type3", 1)) == 9


def test_t_involution_examples():
    assert t_involution((0, 0, 0)) == (0, 0, 0)
    assert t_involution((2, 5)) == (-7, 5)
    with pytest.raises(DomainError):
        t_involution((1, 2), k=2)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=7))
def test_t_involution_is_involutive(s):
    assert t_involution(t_involution(s)) == tuple(s)


def test_character_degrees():
    assert character_data(realized_descriptor("sp", 4)).degrees == (4, 3, 2, 1)
    assert character_data(realized_descriptor("type3", 2)).degrees == (6, 4, 2)
    assert character_data(realized_descriptor("type3", 0)).degrees == (2,)


@given(st.sampled_from([("sp", 1), ("sp", 3), ("unitary", 4), ("type3", 0), ("type3", 3), ("gl", 2)]),
       st.data())
def test_psi_exponents_agree(model, data):
    desc = realized_descriptor(*model)
    s = data.draw(st.lists(st.fractions(max_denominator=6, min_value=-9, max_value=9),
                           min_size=desc.k + 1, max_size=desc.k + 1))
    lhs, rhs = psi_character_exponents(desc, s)
    assert lhs == rhs
