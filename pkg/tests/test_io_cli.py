import json

import pytest

from sidonlab import core, io, primes, search
from sidonlab.cli import run
from sidonlab.constructions import bose, erdos_turan, singer


@pytest.fixture
def setfile(tmp_path):
    def make(text, name="a.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return make


class TestSetFiles:
    def test_round_trip(self):
        A = bose(11)
        text = io.format_set(A)
        assert text.startswith("# n=120\n# family=bose\n")
        elems, n, family = io.parse_set(text)
        assert (elems, n, family) == (A.elements, 120, "bose")

    def test_read_file(self, setfile):
        A = io.read_set(setfile("# n=20 family=demo\n1\n2\n\n5\n11\n"))
        assert A.elements == (1, 2, 5, 11) and A.n == 20 and A.family == "demo" and A.verified

    def test_missing_n_defaults_to_max(self, setfile):
        assert io.read_set(setfile("1\n2\n5\n")).n == 5

    def test_bad_line(self, setfile):
        with pytest.raises(ValueError, match="line 2"):
            io.read_set(setfile("1\nabc\n"))

    def test_non_increasing(self, setfile):
        with pytest.raises(ValueError):
            io.read_set(setfile("3\n2\n"), verify=False)


class TestReports:
    @pytest.mark.parametrize("make", [
        lambda: core.element_errors(singer(11)),
        lambda: core.power_sum(bose(13), 3),
        lambda: core.discrepancy_sweep(erdos_turan(7)),
        lambda: core.ding_condition(singer(13), 0.01),
        lambda: search.max_sidon(12),
        lambda: search.defect_record(10**6, exact=False),
        lambda: search.defect_record(20),
        lambda: primes.exceptional_set(10**5, primes.sieve(400)),
        lambda: primes.heath_brown_sum(primes.sieve(10**4), 10**4),
        lambda: primes.gap_exponent_report(primes.sieve(10**4)),
        lambda: core.verify_sidon([1, 2, 3]),
        lambda: core.DefectValue.of(30, 4),
    ])
    def test_json_round_trip(self, make):
        value = make()
        text = io.dumps(io.typed_report("x", value, {"k": 1}))
        env, back = io.load_report(text)
        assert env["schema_version"] == io.SCHEMA_VERSION and env["config"] == {"k": 1}
        assert back == value

    def test_list_round_trip(self):
        rows = search.defect_table(range(1, 10))
        env, back = io.load_report(io.dumps(io.typed_report("t", rows)))
        assert back == tuple(rows)

    def test_field_names(self):
        rep = core.interval_discrepancy(bose(11), 0, 60)
        d = io.to_jsonable(rep)
        assert list(d) == ["n", "u", "len", "c", "count", "E_I", "bound", "ratio"]

    def test_csv(self):
        recs = core.element_errors(bose(5)).records
        text = io.to_csv(recs)
        lines = text.splitlines()
        assert lines[0] == "m,a_m,main_term,abs_error,normalizer,normalized"
        assert len(lines) == 6

    def test_atomic_write_leaves_nothing_on_error(self, tmp_path, monkeypatch):
        target = tmp_path / "out.json"

        def boom(*a, **k):
            raise OSError("disk full")

        monkeypatch.setattr(io.os, "replace", boom)
        with pytest.raises(OSError):
            io.write_output(target, "data")
        assert list(tmp_path.iterdir()) == []


class TestCli:
    def test_construct_stdout(self, capsys):
        assert run(["construct", "--family", "erdos-turan", "--param", "5"]) == 0
        out = capsys.readouterr().out
        assert io.parse_set(out)[0] == (1, 12, 25, 35, 42)

    def test_construct_file_and_verify(self, tmp_path, capsys):
        out = tmp_path / "s.txt"
        assert run(["construct", "--family", "singer", "--param", "7", "--out", str(out)]) == 0
        assert io.read_set(out) == singer(7)
        assert run(["verify", "--in", str(out)]) == 0
        assert "ok" in capsys.readouterr().out

    def test_verify_non_sidon(self, setfile, capsys):
        assert run(["verify", "--in", setfile("1\n2\n3\n")]) == 1
        assert "1 3 2 2" in capsys.readouterr().out

    def test_construct_bad_param(self, tmp_path, capsys):
        out = tmp_path / "s.txt"
        assert run(["construct", "--family", "bose", "--param", "9", "--out", str(out)]) == 1
        assert "prime" in capsys.readouterr().err
        assert not out.exists()

    def test_usage_errors(self, capsys):
        assert run(["construct", "--family", "golomb", "--param", "5"]) == 2
        assert run(["frobnicate"]) == 2
        assert run(["search", "--n", "5", "--bogus"]) == 2
        assert run(["search", "--range", "5-9"]) == 2

    def test_search_json(self, tmp_path):
        out = tmp_path / "r.json"
        assert run(["search", "--n", "26", "--lex-witness", "--out", str(out)]) == 0
        env, res = io.load_report(out)
        assert res.s_n == 7 and res.n == 26 and len(res.witness) == 7
        assert env["config"]["lex_witness"] is True

    def test_search_bracket_and_range(self, tmp_path, capsys):
        assert run(["search", "--n", "1000000", "--bracket"]) == 0
        env, rec = io.load_report(capsys.readouterr().out)
        assert rec.bose_bracket == 997 and rec.mode == "bracket"
        assert run(["search", "--range", "1..12", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("n,s_n,L_prime") and len(lines) == 13

    def test_search_over_limit(self, capsys):
        assert run(["search", "--n", "500"]) == 1
        assert "limit" in capsys.readouterr().err

    def test_analyze_reports(self, tmp_path, capsys):
        f = tmp_path / "s.txt"
        f.write_text(io.format_set(singer(101)))
        assert run(["analyze", "--in", str(f), "--report", "element-errors"]) == 0
        env = json.loads(capsys.readouterr().out)
        assert len(env["data"]["records"]) == 102 and env["schema_version"] == 1
        assert run(["analyze", "--in", str(f), "--report", "ding", "--fraction", "0.01"]) == 0
        env, rep = io.load_report(capsys.readouterr().out)
        assert rep.holds is False
        assert run(["analyze", "--in", str(f), "--report", "power-sum", "--ell", "2"]) == 0
        env, rep = io.load_report(capsys.readouterr().out)
        assert rep.exact_sum == sum(a * a for a in singer(101).elements)
        assert run(["analyze", "--in", str(f), "--report", "discrepancy", "--format", "csv"]) == 0
        assert capsys.readouterr().out.startswith("n,u,len,c,count,E_I,bound,ratio")
        assert run(["analyze", "--in", str(f), "--report", "counting", "--t", "50"]) == 0
        expected = sum(a < 50 for a in singer(101).elements)
        assert json.loads(capsys.readouterr().out)["data"]["count"] == expected

    def test_analyze_invalid_parameter(self, setfile, capsys):
        f = setfile("1\n2\n5\n")
        assert run(["analyze", "--in", f, "--report", "power-sum", "--ell", "9"]) == 1
        assert "ell" in capsys.readouterr().err
        assert run(["analyze", "--in", setfile("1\n2\n3\n", "b.txt"), "--report", "ding"]) == 1

    def test_exceptions(self, tmp_path):
        out = tmp_path / "e.json"
        assert run(["exceptions", "--N", "30", "--out", str(out)]) == 0
        env, rep = io.load_report(out)
        assert rep.exception_count == 16

    def test_primes_and_gaps(self, tmp_path, capsys):
        out = tmp_path / "p.txt"
        assert run(["primes", "--limit", "100", "--out", str(out)]) == 0
        nums = [int(x) for x in out.read_text().splitlines() if not x.startswith("#")]
        assert len(nums) == 25
        assert run(["gaps", "--x", "10000"]) == 0
        env = json.loads(capsys.readouterr().out)
        assert env["data"]["large_gap_sum"]["x"] == 10000

    def test_suite_quick(self, tmp_path, capsys):
        out = tmp_path / "suite"
        assert run(["suite", "--quick", "--out-dir", str(out)]) == 0
        env = json.loads((out / "report.json").read_text())
        assert env["data"]["complete"] and env["data"]["all_passed"]
        assert len(env["data"]["checks"]) == 10
        assert (out / "constructions.csv").exists() and (out / "exceptions.csv").exists()
        assert capsys.readouterr().out.count("[PASS]") == 10

    def test_suite_json_only_and_budget(self, tmp_path, capsys):
        out = tmp_path / "suite"
        assert run(["suite", "--quick", "--json-only", "--budget", "0", "--out-dir", str(out)]) == 1
        env = json.loads((out / "report.json").read_text())
        assert env["data"]["complete"] is False
        assert [p.name for p in out.iterdir()] == ["report.json"]
