from __future__ import annotations

import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings

from k3qmod import verify
from k3qmod.cli import DocumentError, SeriesDocument, main, parse_insertions
from k3qmod.potentials import F, ONE, POINT, W, tau, uperp, uperp_dual
from k3qmod.qseries import dq
from k3qmod.modforms import eisenstein_c

from strategies import series


def run(capsys, *argv, stdin: str | None = None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def doc_of(out: str) -> dict:
    return json.loads(out)


class TestSeries:
    def test_c2(self, capsys):
        code, out, _ = run(capsys, "series", "C2", "--order", "3")
        d = doc_of(out)
        assert code == 0
        assert (d["valuation"], d["order"], d["coefficients"]) == (0, 3, ["-1/24", "1", "3", "4"])
        assert d["metadata"] == {"name": "C2", "level": 1, "weight": 2, "poleOrder": 0}

    def test_inverse_delta(self, capsys):
        _, out, _ = run(capsys, "series", "InvDelta", "--order", "2")
        d = doc_of(out)
        assert (d["valuation"], d["order"], d["coefficients"]) == (-1, 2, ["1", "24", "324", "3200"])

    def test_catalogue_name(self, capsys):
        _, out, _ = run(capsys, "series", "F_2_1_pp", "--order", "2")
        d = doc_of(out)
        assert (d["valuation"], d["coefficients"][:3]) == (-1, ["0", "0", "1"])
        assert d["metadata"]["weight"] == -4

    def test_fiber_and_level2(self, capsys):
        _, out, _ = run(capsys, "series", "FE_2", "--order", "1")
        assert doc_of(out)["coefficients"] == ["1/2880", "1/12"]
        _, out, _ = run(capsys, "series", "X2", "--order", "2")
        assert doc_of(out)["metadata"]["level"] == 2

    def test_unknown_name(self, capsys):
        code, out, err = run(capsys, "series", "Nope")
        assert code != 0 and out == ""
        assert "unknown series" in err

    def test_pretty(self, capsys):
        _, out, _ = run(capsys, "series", "C4", "--order", "2", "--pretty")
        assert "\n  " in out
        assert SeriesDocument.from_json(out).coefficients[1] == "1/12"


class TestApply:
    def test_twrong_on_inverse_delta(self, capsys, monkeypatch):
        _, src, _ = run(capsys, "series", "InvDelta", "--order", "20")
        code, out, _ = run(capsys, "apply", "twrong", "-m", "2", "-l", "-2", stdin=src, monkeypatch=monkeypatch)
        d = doc_of(out)
        assert code == 0
        assert d["valuation"] == -2 and d["coefficients"][0] == "1/8"

    def test_dq_on_c2(self, capsys, monkeypatch):
        _, src, _ = run(capsys, "series", "C2", "--order", "6")
        _, out, _ = run(capsys, "apply", "dq", stdin=src, monkeypatch=monkeypatch)
        doc = SeriesDocument.from_json(out)
        assert doc.to_series() == dq(eisenstein_c(2, 6))
        assert doc.metadata["weight"] == 4

    def test_mcf_genus0(self, capsys, monkeypatch):
        _, src, _ = run(capsys, "series", "InvDelta", "--order", "20")
        _, out, _ = run(capsys, "apply", "mcf", "-g", "0", "-m", "2", stdin=src, monkeypatch=monkeypatch)
        d = doc_of(out)
        assert d["coefficients"][2] == "27"  # q^0
        assert d["metadata"]["poleOrder"] == 2

    def test_file_input_and_truncation(self, capsys, tmp_path):
        _, src, _ = run(capsys, "series", "C2", "--order", "10")
        path = tmp_path / "c2.json"
        path.write_text(src, encoding="utf-8")
        _, out, _ = run(capsys, "apply", "b", str(path), "-d", "2", "--order", "6")
        d = doc_of(out)
        assert d["order"] == 6
        assert d["coefficients"] == ["-1/24", "0", "1", "0", "3", "0", "4"]

    def test_ddc2(self, capsys, monkeypatch):
        _, src, _ = run(capsys, "series", "C2", "--order", "20")
        _, out, _ = run(capsys, "apply", "ddc2", stdin=src, monkeypatch=monkeypatch)
        d = doc_of(out)
        assert d["coefficients"][0] == "1" and set(d["coefficients"][1:]) == {"0"}
        assert d["metadata"]["weight"] == 0

    def test_missing_parameter(self, capsys, monkeypatch):
        _, src, _ = run(capsys, "series", "C2", "--order", "4")
        code, _, err = run(capsys, "apply", "hecke", "-m", "2", stdin=src, monkeypatch=monkeypatch)
        assert code == 2 and "-k" in err

    def test_window_exhaustion(self, capsys, monkeypatch):
        _, src, _ = run(capsys, "series", "Delta", "--order", "3")
        code, _, err = run(capsys, "apply", "u", "-d", "5", stdin=src, monkeypatch=monkeypatch)
        assert code == 2 and err.startswith("k3qmod: error:")

    def test_bad_document(self, capsys, monkeypatch):
        code, _, err = run(capsys, "apply", "dq", stdin="{not json", monkeypatch=monkeypatch)
        assert code == 2 and "JSON" in err


class TestVerify:
    def test_degeneration(self, capsys):
        code, out, _ = run(capsys, "verify", "degeneration", "--order", "10")
        assert code == 0
        for c in ("36", "8760", "754992", "36694512"):
            assert c in out

    def test_examples(self, capsys):
        code, out, _ = run(capsys, "verify", "examples", "--order", "50")
        assert code == 0 and "[FAIL]" not in out

    def test_order_too_small(self, capsys):
        code, _, err = run(capsys, "verify", "commutators", "--order", "3")
        assert code == 2 and "order" in err

    def test_failure_exit_status(self, capsys, monkeypatch):
        def broken(order):
            return [verify.Check("holds", True), verify.Check("fails", False, "first mismatch at q^3")]

        monkeypatch.setitem(verify.SUITES, "broken", (broken, 0))
        code, out, _ = run(capsys, "verify", "broken", "--order", "5")
        assert code == 1
        assert "[FAIL] fails: first mismatch at q^3" in out
        assert "1/2 checks passed" in out


class TestDocument:
    def test_roundtrip_byte_identical(self, capsys):
        for name in ("C2", "InvDelta", "F_0_2", "FE_3"):
            _, out, _ = run(capsys, "series", name, "--order", "8")
            text = out.rstrip("\n")
            assert SeriesDocument.from_json(text).to_json() == text

    def test_canonicalizes_input(self):
        doc = SeriesDocument.from_json('{"valuation":0,"order":1,"coefficients":["2/4","3/1"]}')
        assert doc.coefficients == ["1/2", "3"]
        assert doc.to_json() == '{"valuation":0,"order":1,"coefficients":["1/2","3"],"metadata":{}}'

    @pytest.mark.parametrize("text", [
        '{"valuation":0,"order":2,"coefficients":["1"]}',
        '{"valuation":0,"order":0,"coefficients":["1/0"]}',
        '{"valuation":0,"order":0,"coefficients":["1"],"metadata":{"colour":1}}',
        '{"order":0}',
    ])
    def test_rejects(self, text):
        with pytest.raises(DocumentError):
            SeriesDocument.from_json(text)


@settings(max_examples=50, deadline=None)
@given(series())
def test_document_roundtrip_property(s):
    doc = SeriesDocument.from_series(s, level=2, weight=-4, poleOrder=2)
    text = doc.to_json()
    again = SeriesDocument.from_json(text)
    assert again.to_json() == text
    assert again.to_series() == s
    assert all(Fraction(c) == s[n] for n, c in zip(range(s.valuation, s.order + 1), again.coefficients))


def test_parse_insertions():
    assert parse_insertions("p,p") == (tau(0, POINT), tau(0, POINT))
    assert parse_insertions("1:F, W,1") == (tau(1, F), tau(0, W), tau(0, ONE))
    assert parse_insertions("e3,e^3") == (tau(0, uperp(3)), tau(0, uperp_dual(3)))
    assert parse_insertions("") == ()
    with pytest.raises(ValueError):
        parse_insertions("q")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "k3qmod", "series", "C2", "--order", "1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["coefficients"] == ["-1/24", "1"]
