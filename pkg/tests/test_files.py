import json

import pytest
from hypothesis import given, settings

from fhsets.constructions import cdm_for, construct_3p, construct_tv, cyclotomic_bncrdp
from fhsets.correlation import FhsSet
from fhsets.designs import BlockFamily
from fhsets.exceptions import SchemaError
from fhsets.files import content_hash, dumps, from_csv, load, loads, save, to_csv, to_document, to_rows

from test_correlation import fhs_sets


@pytest.mark.parametrize("build", [
    lambda: construct_tv(2, 5),
    lambda: construct_3p(13).bncdp,
    lambda: construct_3p(13).bncrdp,
    lambda: cyclotomic_bncrdp(7, 3),
    lambda: cdm_for(13, 8),
    lambda: BlockFamily(7, ((0, 1, 3),)),
])
def test_round_trip_preserves_object_and_hash(build, tmp_path):
    obj = build()
    path = tmp_path / "d.json"
    save(obj, path)
    df = load(path)
    assert df.obj == obj
    assert df.content_hash == content_hash(obj)


def test_claimed_values_survive():
    s = construct_tv(3, 7)
    df = loads(dumps(s, parameters={"n": 21, "M": 2, "l": 7}))
    assert df.claimed_lambda == 3
    assert df.parameters == {"n": 21, "M": 2, "l": 7}
    assert df.provenance["family"] == "tv"


def test_serialization_is_deterministic():
    assert dumps(construct_3p(13).fhs_set) == dumps(construct_3p(13).fhs_set)


def test_provenance_does_not_change_hash():
    s = construct_tv(2, 5)
    assert content_hash(s) == content_hash(s.with_claim(None))


@settings(max_examples=30)
@given(fhs_sets())
def test_random_sets_round_trip(s):
    assert loads(dumps(s)).obj.rows() == s.rows()
    assert from_csv(to_csv(s)).rows() == s.rows()


def _doc():
    return to_document(construct_tv(2, 5))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("kind"),
    lambda d: d.update(schema_version=2),
    lambda d: d.update(kind="graph"),
    lambda d: d["payload"].update(sequences=[]),
    lambda d: d["payload"].update(M=0),
    lambda d: d["payload"]["sequences"][0].append(1),
    lambda d: d["payload"]["sequences"][0].__setitem__(0, 9),
    lambda d: d["payload"]["sequences"][0].__setitem__(0, -1),
    lambda d: d["claimed"].update({"lambda": "two"}),
    lambda d: d.update(modulus=11),
])
def test_malformed_documents_raise_schema_error(mutate):
    doc = _doc()
    mutate(doc)
    with pytest.raises(SchemaError):
        loads(json.dumps(doc))


def test_edited_payload_breaks_stored_hash():
    doc = _doc()
    seqs = doc["payload"]["sequences"]
    seqs[0], seqs[1] = seqs[1], seqs[0]
    with pytest.raises(SchemaError, match="hash"):
        loads(json.dumps(doc))
    doc.pop("hash")
    assert loads(json.dumps(doc)).obj.rows()[0] == seqs[0]


def test_relative_packing_with_bad_divisor():
    doc = to_document(construct_3p(13).bncrdp)
    doc["payload"]["m"] = 5
    doc.pop("hash")
    with pytest.raises(SchemaError):
        loads(json.dumps(doc))


def test_not_json():
    with pytest.raises(SchemaError):
        loads("{not json")


def test_csv_header_and_rows():
    s = construct_tv(2, 5)
    text = to_csv(s)
    assert text.splitlines()[0] == "# n=10,M=2,l=5,lambda=2"
    assert text.splitlines()[1] == "0,0,1,3,2,1,3,4,4,2"
    assert to_rows(s).splitlines()[1] == "0 0 2 4 4 3 1 2 3 1"
    back = from_csv(text)
    assert back.claimed_lambda == 2 and content_hash(back) == content_hash(s)


@pytest.mark.parametrize("text", [
    "",
    "0,1,2\n",
    "# n=3,M=2,l=3,lambda=\n0,1,2\n",
    "# n=3,M=1,l=3,lambda=\n0,1\n",
    "# n=3,M=1,l=2,lambda=\n0,1,2\n",
    "# n=3,M=1\n0,1,2\n",
    "# n=3,M=1,l=3,lambda=\n0,x,2\n",
])
def test_bad_csv(text):
    with pytest.raises(SchemaError):
        from_csv(text)


def test_csv_without_claim():
    s = FhsSet.from_rows([[0, 1, 1]], 2)
    assert from_csv(to_csv(s)).claimed_lambda is None
