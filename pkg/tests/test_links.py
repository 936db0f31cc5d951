import cmath
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonflux.braid import closure, closure_gauss_code
from anyonflux.cli import example_path
from anyonflux.links import (
    Crossing,
    FramedLinkDiagram,
    InconsistentDiagramError,
    LinkParseError,
    detect_format,
    disjoint_union,
    expectation,
    format_crossing_list,
    invariants,
    mirror,
    parse_gauss_code,
    parse_link,
    parse_link_text,
    unit_phase,
)
from strategies import braids, random_diagram


def shipped(name):
    return parse_link(example_path(name).read_text())


# -- parsing ------------------------------------------------------------------

def test_crossing_list_two_negative_crossings():
    d = parse_link_text("components 2\ncross 0 1 -\ncross 1 0 -")
    assert d.num_components == 2
    assert [x.sign for x in d.crossings] == [-1, -1]


def test_crossing_list_unknot():
    d = parse_link_text("components 1")
    assert d.num_components == 1 and d.crossings == () and d.is_trivial


def test_crossing_index_out_of_range_reports_line():
    with pytest.raises(LinkParseError, match="out of range") as info:
        parse_link_text("components 1\ncross 0 2 +")
    assert info.value.line == 2


@pytest.mark.parametrize(
    "text, message",
    [
        ("cross 0 0 +", "before 'components'"),
        ("components 1\ncomponents 1", "duplicate"),
        ("components 1\ncross 0 0 x", "bad crossing sign"),
        ("components 1\ncross 0 0", "expected 'cross"),
        ("components 1\nframing 3 1", "undeclared component"),
        ("components 1\nframing 0 two", "must be an integer"),
        ("components 1\ntwist 0", "unknown directive"),
        ("components 0", "positive"),
        ("# only a comment", "missing"),
    ],
)
def test_crossing_list_errors(text, message):
    with pytest.raises(LinkParseError, match=message):
        parse_link_text(text)


def test_comments_sign_spellings_and_accumulated_framing():
    d = parse_link_text(
        "# header\ncomponents 2  # two loops\ncross 0 1 +1\ncross 1 0 +\n"
        "framing 0 1\nframing 0 -3\n"
    )
    assert d.framing_offsets == (-2, 0)
    assert invariants(d).total_crossing_number == 0


def test_gauss_trefoil():
    d = parse_gauss_code("O1+ U2+ O3+ U1+ O2+ U3+")
    assert d.num_components == 1
    assert [x.sign for x in d.crossings] == [1, 1, 1]


def test_gauss_matches_crossing_list_trefoil():
    a = parse_gauss_code("O1+ U2+ O3+ U1+ O2+ U3+")
    b = parse_link_text("components 1\ncross 0 0 +\ncross 0 0 +\ncross 0 0 +")
    assert invariants(a) == invariants(b)


def test_gauss_kink():
    d = parse_gauss_code("O1- U1-")
    assert d.crossings == (Crossing(0, 0, -1),)


@pytest.mark.parametrize(
    "text, message",
    [
        ("O1+ U2+", "dangling"),
        ("O1+ O1+ U1+", "twice"),
        ("O1+ U1-", "sign mismatch"),
        ("O1+ X1+", "bad Gauss token"),
        ("O0+ U0+", "positive"),
        ("", "empty"),
    ],
)
def test_gauss_errors(text, message):
    with pytest.raises(LinkParseError, match=message):
        parse_gauss_code(text)


def test_gauss_empty_component_line():
    d = parse_gauss_code("O1+ U2+\n.\nU1+ O2+")
    assert d.num_components == 3
    assert invariants(d).linking[0][2] == 1


def test_detect_format():
    assert detect_format("# c\ncomponents 1") == "crossings"
    assert detect_format("O1+ U1+") == "gauss"
    assert detect_format("2: 1 1") == "braid"
    with pytest.raises(LinkParseError):
        detect_format("hello")


def test_parse_link_closes_braids():
    assert invariants(parse_link("2: 1 1 1")).total_crossing_number == 3


# -- invariants ---------------------------------------------------------------

def test_fig3_left():
    inv = invariants(shipped("fig3_left.lnk"))
    assert inv.framings == (0, 0)
    assert inv.linking[0][1] == inv.linking[1][0] == -1
    assert inv.total_crossing_number == -2


def test_fig3_trefoil():
    inv = invariants(shipped("fig3_trefoil.gauss"))
    assert inv.framings == (3,) and inv.total_crossing_number == 3


def test_fig3_figure_eight():
    inv = invariants(shipped("fig3_fig8.gauss"))
    assert inv.framings == (0,) and inv.total_crossing_number == 0


def test_hopf_framed():
    inv = invariants(shipped("hopf_framed.lnk"))
    assert inv.framings == (0, 2)
    assert inv.linking_matrix().tolist() == [[0, 1], [1, 0]]
    assert inv.total_crossing_number == 4


def test_odd_inter_component_crossings_rejected():
    with pytest.raises(InconsistentDiagramError):
        invariants(parse_link_text("components 2\ncross 0 1 +"))


def test_framing_offsets_validated():
    with pytest.raises(ValueError):
        FramedLinkDiagram(2, (), (1,))
    with pytest.raises(ValueError):
        FramedLinkDiagram(1, (Crossing(0, 1, 1),))
    with pytest.raises(ValueError):
        Crossing(0, 0, 2)


@settings(max_examples=60, deadline=None)
@given(braids)
def test_total_is_signs_plus_offsets(w):
    d = closure(w)
    inv = invariants(d)
    assert inv.total_crossing_number == sum(x.sign for x in d.crossings)
    n = d.num_components
    assert inv.total_crossing_number == sum(inv.framings) + sum(
        inv.linking[i][j] for i in range(n) for j in range(n) if i != j
    )


@settings(max_examples=60, deadline=None)
@given(braids)
def test_gauss_and_crossing_list_agree_on_closures(w):
    via_gauss = parse_gauss_code(closure_gauss_code(w))
    direct = closure(w)
    assert invariants(via_gauss) == invariants(direct)


def test_crossing_list_round_trip():
    rng = random.Random(7)
    for _ in range(50):
        d = random_diagram(rng)
        assert invariants(parse_link_text(format_crossing_list(d))) == invariants(d)


def test_disjoint_union_is_additive():
    rng = random.Random(11)
    for _ in range(50):
        a, b = random_diagram(rng), random_diagram(rng)
        u = invariants(disjoint_union(a, b))
        assert u.total_crossing_number == (
            invariants(a).total_crossing_number + invariants(b).total_crossing_number
        )
        assert u.framings == invariants(a).framings + invariants(b).framings


# -- expectation values -------------------------------------------------------

@pytest.mark.parametrize(
    "total, K, expected", [(-2, 2, 1), (3, 3, 1), (3, 4, -1j), (0, 7, 1), (1, 4, 1j)]
)
def test_expectation_examples(total, K, expected):
    assert expectation(total, K) == expected


def test_expectation_accepts_invariants_and_real_levels():
    inv = invariants(shipped("fig3_trefoil.gauss"))
    assert expectation(inv, 4) == -1j
    assert abs(expectation(inv, 2.5) - cmath.exp(2j * math.pi * 3 / 2.5)) < 1e-15


def test_expectation_rejects_zero_level():
    with pytest.raises(ValueError):
        expectation(1, 0)


@pytest.mark.parametrize("turns, value", [(0, 1), (0.25, 1j), (0.5, -1), (0.75, -1j), (-0.25, -1j)])
def test_unit_phase_quarter_turns_are_exact(turns, value):
    assert unit_phase(turns) == value


@settings(max_examples=100, deadline=None)
@given(braids, st.sampled_from([1, 2, 3, 4, 5, 7, 12, 2.5, -3]))
def test_expectation_unit_modulus_and_mirror(w, K):
    d = closure(w)
    z = expectation(invariants(d), K)
    assert abs(abs(z) - 1) < 1e-15
    assert abs(expectation(invariants(mirror(d)), K) - z.conjugate()) < 1e-12


# -- mirror -------------------------------------------------------------------

def test_mirror_examples():
    assert invariants(mirror(shipped("fig3_trefoil.gauss"))).total_crossing_number == -3
    assert invariants(mirror(shipped("fig3_fig8.gauss"))).total_crossing_number == 0
    unknot = parse_link_text("components 1")
    assert mirror(unknot) == unknot


def test_mirror_is_involution():
    rng = random.Random(3)
    for _ in range(30):
        d = random_diagram(rng)
        assert mirror(mirror(d)) == d
        assert invariants(mirror(d)).total_crossing_number == -invariants(d).total_crossing_number
