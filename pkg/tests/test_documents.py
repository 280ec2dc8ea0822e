import json

import pytest

from polyembed import documents, zoo
from polyembed.errors import ParseError
from polyembed.geometry import equal_sets
from polyembed.links import build_link, envelope
from polyembed.rational import Q
from polyembed.surrogate import evaluate

DISCRETE = ["zoo:zero_one?n=3", "zoo:abstain?n=4", "zoo:top_k?n=4&k=2", "zoo:ordered_partition?n=3", "zoo:l4_target?n=4&k=2"]
SURROGATE = ["zoo:hinge", "zoo:bep?n=4", "zoo:ww_hinge?n=3", "zoo:topk_surrogate?n=4&k=2"]


@pytest.mark.parametrize("ref", DISCRETE)
def test_discrete_round_trip(ref):
    loss = zoo.resolve(ref)
    text = documents.dumps(loss)
    back = documents.loads(text)
    assert back.outcomes == loss.outcomes
    assert back.reports == loss.reports
    assert back.matrix == loss.matrix
    assert documents.dumps(back) == text


@pytest.mark.parametrize("ref", SURROGATE)
def test_surrogate_round_trip(ref):
    L = zoo.resolve(ref)
    back = documents.loads(documents.dumps(L))
    assert back.dim == L.dim and back.outcomes == L.outcomes
    for u in [(0,) * L.dim, tuple(Q(k + 1) / 3 for k in range(L.dim))]:
        assert evaluate(back, u) == evaluate(L, u)


def test_numbers_must_be_strings():
    doc = json.loads(documents.dumps(zoo.zero_one(2)))
    doc["reports"][0]["loss"][1] = 1
    with pytest.raises(ParseError):
        documents.load_document(doc)
    doc["reports"][0]["loss"][1] = "0.5"
    with pytest.raises(ParseError):
        documents.load_document(doc)


@pytest.mark.parametrize("doc", ["[]", "{}", '{"format": 2, "kind": "discrete"}', '{"format": 1, "kind": "nope"}', "{oops"])
def test_malformed_documents(doc):
    with pytest.raises(ParseError):
        documents.loads(doc)


def test_link_round_trip(tmp_path):
    L, _ = zoo.bep(4)
    art = build_link(L, target=zoo.abstain(4).scaled(2), epsilon=Q("1/2"))
    path = tmp_path / "link.json"
    documents.write(art, path)
    back = documents.read(path)
    assert back.epsilon == art.epsilon and back.epsilon_max == art.epsilon_max
    assert back.report_sets == art.report_sets
    for A, B in zip(art.family.members, back.family.members):
        assert equal_sets(A, B)
    for u in [(Q("3/5"), Q("1/5")), (1, 1), (-2, Q("1/3")), (0, 0)]:
        assert envelope(back, u) == envelope(art, u)
