"""Matrix file round trips and deterministic report serialization."""

import json
import math

import numpy as np
import pytest

from assouad_lab import FiniteMetricSpace, read_space, write_space
from assouad_lab.errors import InputFormatError, AsymmetryError
from assouad_lab.io import dump_document, format_float, space_document

from conftest import euclidean_space


class TestRoundTrips:
    @pytest.mark.parametrize("form", ["json", "csv"])
    @pytest.mark.parametrize("seed", range(5))
    def test_write_read_bit_exact(self, tmp_path, form, seed):
        r = np.random.default_rng(seed)
        s = euclidean_space(r, int(r.integers(2, 9)))
        p = tmp_path / f"s.{form}"
        write_space(s, p, form=form)
        back = read_space(p)
        assert np.array_equal(back.d, s.d)
        if form == "json":
            assert back.labels == s.labels
        else:
            assert back.labels == tuple(f"p{i}" for i in range(s.card))

    def test_awkward_floats_survive(self, tmp_path):
        vals = [1 / 3, math.pi, 2.0**-40, 1e17 + 16]
        d = np.zeros((5, 5))
        for i, v in enumerate(vals):
            d[0, i + 1] = d[i + 1, 0] = v + 10.0
        for i in range(1, 5):
            for j in range(i + 1, 5):
                d[i, j] = d[j, i] = abs(d[0, i] - d[0, j]) + 10.0
        s = FiniteMetricSpace(tuple("abcde"), d)
        for form in ("json", "csv"):
            p = tmp_path / f"s.{form}"
            write_space(s, p, form=form)
            assert np.array_equal(read_space(p).d, d)

    def test_format_float_17_digits(self):
        for v in (1 / 3, 1e-300, 123456789.123456789, 2.0**-52):
            assert float(format_float(v)) == v

    def test_unknown_form_rejected(self, tmp_path):
        s = euclidean_space(np.random.default_rng(0), 3)
        with pytest.raises(InputFormatError):
            write_space(s, tmp_path / "s.x", form="parquet")


class TestReadValidation:
    def test_json_without_d_field(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"labels": ["a"]}')
        with pytest.raises(InputFormatError):
            read_space(p)

    def test_bad_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        with pytest.raises(InputFormatError):
            read_space(p)

    def test_flat_header_mismatch(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("3\n0,1\n1,0\n")
        with pytest.raises(InputFormatError):
            read_space(p)

    def test_flat_non_numeric(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("2\n0,x\nx,0\n")
        with pytest.raises(InputFormatError):
            read_space(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(InputFormatError):
            read_space(p)

    def test_validate_flag(self, tmp_path):
        p = tmp_path / "asym.json"
        p.write_text('{"labels": ["a", "b"], "d": [[0, 1], [2, 0]]}')
        with pytest.raises(AsymmetryError):
            read_space(p)
        s = read_space(p, validate=False)  # axiom check skipped on request
        assert s.d[0, 1] == 1.0 and s.d[1, 0] == 2.0

    def test_label_count_mismatch(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"labels": ["a"], "d": [[0, 1], [1, 0]]}')
        with pytest.raises(InputFormatError):
            read_space(p)


class TestDocuments:
    def test_space_document_is_json(self):
        s = euclidean_space(np.random.default_rng(1), 4)
        doc = json.loads(space_document(s))
        assert doc["labels"] == list(s.labels)
        assert np.array_equal(np.asarray(doc["d"]), s.d)

    def test_dump_document_sorted_and_stable(self, tmp_path):
        doc = {"b": np.float64(0.1), "a": np.int64(3), "c": np.arange(3)}
        t1 = dump_document(doc)
        t2 = dump_document(doc)
        assert t1 == t2
        parsed = json.loads(t1)
        assert parsed == {"a": 3, "b": 0.1, "c": [0, 1, 2]}
        assert list(parsed) == ["a", "b", "c"]
        out = tmp_path / "doc.json"
        dump_document(doc, out)
        assert out.read_text() == t1

    def test_dump_document_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            dump_document({"x": object()})
