import json

import pytest

from structres import (
    DocumentError,
    parse_system,
    serialize_system,
    to_partitioned,
    to_switched,
)
from structres.document import k_att_matrix, k_def_matrix

F1_DOC = {
    "schema_version": "1",
    "n": 7,
    "d": 2,
    "a": 0,
    "x_def": [1, 2, 3, 5],
    "x_att": [4, 6, 7],
    "modes": [
        {
            "A": [[1, 3], [2, 1], [3, 2], [4, 2], [6, 4], [6, 7], [7, 5], [7, 6]],
            "B_def": [[3, 1], [5, 2]],
            "B_att": [],
        }
    ],
}


def doc_text(**overrides):
    raw = json.loads(json.dumps(F1_DOC))
    raw.update(overrides)
    return json.dumps(raw)


class TestParse:
    def test_round_trip_identity(self):
        doc = parse_system(doc_text())
        assert parse_system(serialize_system(doc)) == doc

    def test_serialized_form_is_stable(self):
        doc = parse_system(doc_text())
        assert serialize_system(doc) == serialize_system(parse_system(serialize_system(doc)))

    def test_to_partitioned_matches_fixture(self, f1):
        assert to_partitioned(parse_system(doc_text())) == f1

    def test_overlap_is_reported_with_index(self):
        with pytest.raises(DocumentError) as err:
            parse_system(doc_text(x_def=[1, 2, 3], x_att=[3, 4]))
        assert any("state 3" in str(issue) for issue in err.value.issues)

    def test_out_of_range_star_path(self):
        bad = json.loads(doc_text())
        bad["modes"][0]["A"].append([8, 1])
        bad["n"] = 7
        with pytest.raises(DocumentError) as err:
            parse_system(json.dumps(bad))
        assert any(issue.path == "modes[0].A[8]" for issue in err.value.issues)

    def test_b_def_row_outside_x_def(self):
        bad = json.loads(doc_text())
        bad["modes"][0]["B_def"].append([4, 1])
        with pytest.raises(DocumentError) as err:
            parse_system(json.dumps(bad))
        assert any("outside x_def" in issue.message for issue in err.value.issues)

    def test_invalid_json_located(self):
        with pytest.raises(DocumentError) as err:
            parse_system("{not json")
        assert err.value.issues[0].path == "$"

    def test_missing_counts_rejected(self):
        with pytest.raises(DocumentError):
            parse_system(json.dumps({"schema_version": "1", "n": 0}))

    def test_wrong_schema_version(self):
        with pytest.raises(DocumentError) as err:
            parse_system(doc_text(schema_version="2"))
        assert any(issue.path == "schema_version" for issue in err.value.issues)


class TestFeedbackBlocks:
    def test_k_matrices_default_to_zero(self):
        doc = parse_system(doc_text())
        assert k_att_matrix(doc).star_count == 0
        assert k_def_matrix(doc).star_count == 0

    def test_k_att_parsed_and_checked(self):
        doc = parse_system(doc_text(a=1, K_att=[[1, 7]]))
        assert k_att_matrix(doc).stars == {(1, 7)}
        with pytest.raises(DocumentError):
            parse_system(doc_text(a=1, K_att=[[2, 7]]))  # only one attacker input


class TestSwitchedDocuments:
    def test_two_modes(self):
        raw = json.loads(doc_text())
        raw["modes"] = [
            {"A": [[1, 3], [2, 1], [7, 5], [7, 6]], "B_def": [[3, 1]], "B_att": []},
            {"A": [[3, 2], [4, 2], [6, 4], [6, 7]], "B_def": [[5, 2]], "B_att": []},
        ]
        doc = parse_system(json.dumps(raw))
        switched = to_switched(doc)
        assert switched.z == 2
        with pytest.raises(DocumentError):
            to_partitioned(doc)

    def test_single_mode_documents_convert_both_ways(self):
        doc = parse_system(doc_text())
        assert to_switched(doc).mode_system(1) == to_partitioned(doc)
