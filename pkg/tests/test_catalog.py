import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgo import checks
from pgo.catalog import (
    GradedDescriptor,
    classify_type,
    dim_vplus,
    load_catalog,
    lookup,
    realized_descriptor,
    row,
    same_diagram,
)
from pgo.diagrams import DynkinDiagram, OneType, WeightedSatakeDiagram, descent_classify, satake, type_a
from pgo.errors import DomainError


def test_catalog_has_thirteen_rows():
    assert [r.id for r in load_catalog()] == [str(i) for i in range(1, 14)]


@pytest.mark.parametrize("m", [4, 5, 7])
def test_row8_constants(m):
    d = row("8").descriptor(m=m)
    assert (d.k, d.ell, d.d, d.e, d.gtype, d.one_type) == (1, 1, 2 * m - 4, 0, "I", OneType("A", 1))


@pytest.mark.parametrize("n", [3, 4])
def test_row12_constants(n):
    d = row("12").descriptor(n=n)
    assert (d.k, d.ell, d.d, d.e, d.gtype) == (n - 1, 1, 4, 4, "I")


@pytest.mark.parametrize("n", [2, 3, 5])
def test_symplectic_row(n):
    d = row("6").descriptor(n=n)
    assert (d.k, d.ell, d.d, d.e, d.gtype) == (n - 1, 1, 1, 1, "II")
    assert dim_vplus(d) == n * (n + 1) // 2


@pytest.mark.parametrize("ell,e,t", [(1, 0, "I"), (1, 2, "II"), (3, 4, "III"), (4, 4, "I")])
def test_classify_type(ell, e, t):
    assert classify_type(ell, e) == t


def test_classify_type_rejects():
    with pytest.raises(DomainError):
        classify_type(2, 1)


def test_parameter_minimums_enforced():
    with pytest.raises(DomainError):
        row("8").descriptor(m=3)
    with pytest.raises(DomainError):
        row("6").descriptor()


def test_fixtures_match_generator(fixture_dir):
    expected = {checks.fixture_name(cid, p): checks.fixture_payload(cid, p)
                for cid, plist in checks.fixture_params().items() for p in plist}
    on_disk = {p.name: json.loads(p.read_text()) for p in fixture_dir.glob("table1_row*.json")}
    assert on_disk == expected
    assert {fx["provenance"]["row"] for fx in on_disk.values()} == {str(i) for i in range(1, 14)}


def test_lookup_recovers_every_fixture(fixture_dir):
    for path in sorted(fixture_dir.glob("table1_row*.json")):
        data = json.loads(path.read_text())
        desc = lookup(WeightedSatakeDiagram.from_json(data))
        prov = data["provenance"]
        assert desc.case_id == prov["row"] and dict(desc.params) == prov["params"], path.name
        assert desc.rank == prov["expected"]["rank"]


@given(st.sampled_from([(cid, p) for cid, plist in checks.fixture_params().items() for p in plist]),
       st.randoms(use_true_random=False))
def test_lookup_survives_relabelling(case, rnd):
    cid, params = case
    s = row(cid).diagram(**params)
    names = [f"v{i}" for i in range(len(s.vertices))]
    rnd.shuffle(names)
    rename = dict(zip(s.vertices, names))
    base = DynkinDiagram(tuple(rename[v] for v in s.vertices),
                         tuple((rename[i], rename[j], m, d) for i, j, m, d in s.base.edges))
    t = WeightedSatakeDiagram(base, {rename[v]: c for v, c in s.color.items()},
                              {rename[a]: rename[b] for a, b in s.pairing.items()}, rename[s.circled])
    assert same_diagram(s, t)
    assert lookup(t) == lookup(s)


def test_descriptor_json_round_trip():
    for r in load_catalog():
        for params in checks.fixture_params()[r.id]:
            d = r.descriptor(**params)
            assert GradedDescriptor.from_json(json.loads(json.dumps(d.to_json()))) == d


def test_lookup_rejects_unknown_diagram():
    with pytest.raises(DomainError):
        lookup(satake(type_a(4), 1))


def test_descent_agrees_with_catalog_rank():
    for r in load_catalog():
        for params in checks.fixture_params()[r.id]:
            rank, one = descent_classify(r.diagram(**params))
            d = r.descriptor(**params)
            assert (rank, one) == (d.rank, d.one_type)


@pytest.mark.parametrize("tag,size,case", [("gl", 3, "1"), ("sp", 3, "6"), ("sp", 1, "1"),
                                           ("unitary", 2, "2"), ("type3", 0, "5"), ("type3", 2, "7"),
                                           ("ortho1", 0, "5")])
def test_realized_descriptor(tag, size, case):
    d = realized_descriptor(tag, size)
    assert d.case_id == case
    assert d.rank == (size + 1 if tag == "type3" else 1 if tag == "ortho1" else size)


def test_realized_descriptor_unknown_tag():
    with pytest.raises(DomainError):
        realized_descriptor("so", 3)
