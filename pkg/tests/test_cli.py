import io
import json

import jsonschema
import pytest

from apnlab.cli import main
from apnlab.field import field_for
from apnlab.io import write_lin1, write_vbf1
from apnlab.vbf import VBF, inverse_function, power_function
from apnlab.constructions import inverse_extension, split_pair, table1_maps

SCHEMA_PATH = "docs/certificate.schema.json"


@pytest.fixture(scope="module")
def schema():
    with open(SCHEMA_PATH) as fh:
        return json.load(fh)


def _write_vbf(tmp_path, name, F):
    p = tmp_path / name
    with open(p, "w") as fh:
        write_vbf1(fh, F)
    return str(p)


def _run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestAnalyze:
    def test_cube_n6(self, tmp_path, capsys):
        p = _write_vbf(tmp_path, "c.vbf1", power_function(field_for(6), 3))
        code, out, _ = _run(capsys, "analyze", p)
        assert code == 0
        assert "APN: true" in out
        assert "quadratic: true" in out
        assert "spectrum: classical" in out

    def test_inverse_n6(self, tmp_path, capsys):
        p = _write_vbf(tmp_path, "i.vbf1", inverse_function(field_for(6)))
        code, out, _ = _run(capsys, "analyze", p)
        assert code == 0
        assert "uniformity: 4" in out

    def test_empty_file_exits_2(self, tmp_path, capsys):
        p = tmp_path / "e.vbf1"
        p.write_text("")
        code, _, err = _run(capsys, "analyze", str(p))
        assert code == 2
        assert "expected header" in err

    def test_missing_file_exits_2(self, capsys):
        code, _, err = _run(capsys, "analyze", "/nonexistent/x.vbf1")
        assert code == 2


class TestVerify:
    def test_table1_passes(self, capsys):
        code, out, _ = _run(capsys, "verify", "table1")
        assert code == 0
        assert out.count("[PASS]") == 26 and "[FAIL]" not in out

    def test_nyberg_passes(self, capsys):
        code, out, _ = _run(capsys, "verify", "nyberg")
        assert code == 0 and "[FAIL]" not in out

    def test_theorem35_n4(self, capsys):
        code, out, _ = _run(capsys, "verify", "theorem35", "--n", "4")
        assert code == 0
        assert "65536/65536" in out

    def test_example_n8_requires_long(self, capsys):
        code, _, err = _run(capsys, "verify", "example-n8")
        assert code == 2 and "--long" in err


class TestConstruct:
    def test_hmod_roundtrip(self, tmp_path, capsys, schema):
        spec = field_for(6)
        lp = tmp_path / "L.lin1"
        with open(lp, "w") as fh:
            write_lin1(fh, table1_maps(spec)[1])
        out_path = tmp_path / "g.vbf1"
        code, out, _ = _run(capsys, "construct", "hmod", "--n", "6",
                            "--map", str(lp), "--out", str(out_path))
        assert code == 0
        cert = json.loads(out)
        jsonschema.validate(cert, schema)
        assert cert["kind"] == "hmod" and cert["holds"] is True
        code, out, _ = _run(capsys, "analyze", str(out_path))
        assert code == 0 and "APN: true" in out

    def test_hmod_failure_emits_witness_and_table(self, tmp_path, capsys,
                                                  schema):
        spec = field_for(6)
        from apnlab.vbf import LinearMap

        lp = tmp_path / "L.lin1"
        with open(lp, "w") as fh:
            write_lin1(fh, LinearMap.from_linearized(spec, [1, 0, 0, 0, 0, 0]))
        out_path = tmp_path / "g.vbf1"
        code, out, _ = _run(capsys, "construct", "hmod", "--n", "6",
                            "--map", str(lp), "--out", str(out_path))
        assert code == 0  # criterion failure is not an error
        cert = json.loads(out)
        jsonschema.validate(cert, schema)
        assert cert["holds"] is False and cert["witness"] is not None
        code, out, _ = _run(capsys, "analyze", str(out_path))
        assert "APN: false" in out

    def test_coset_paper_parameters(self, tmp_path, capsys, schema):
        out_path = tmp_path / "G.vbf1"
        cert_path = tmp_path / "G.cert.json"
        code, out, _ = _run(capsys, "construct", "coset", "--n", "8",
                            "--consts", "0,0,g^170,1",
                            "--out", str(out_path), "--cert", str(cert_path))
        assert code == 0
        cert = json.loads(cert_path.read_text())
        jsonschema.validate(cert, schema)
        assert cert["holds"] is True
        # the emitted table equals x^3 + g^85 * Tr_1(x) * Tr_2(x)
        spec = field_for(8)
        cube = power_function(spec, 3)
        w = spec.gpow(85)
        expect = tuple(
            v ^ (spec.mul(w, spec.trace_to_subfield(x, 2))
                 if spec.trace_absolute(x) else 0)
            for x, v in enumerate(cube.table))
        from apnlab.io import read_vbf1

        with open(out_path) as fh:
            assert read_vbf1(fh).table == expect

    def test_switch_and_concat(self, tmp_path, capsys, schema):
        F = inverse_extension(field_for(4))
        f, g = split_pair(F)
        fp = _write_vbf(tmp_path, "f.vbf1", f)
        gp = _write_vbf(tmp_path, "g.vbf1",
                        VBF(4, 1, g.table))
        out_path = tmp_path / "s.vbf1"
        code, out, _ = _run(capsys, "construct", "switch", "--f", fp,
                            "--g", gp, "--u", "1", "--out", str(out_path))
        assert code == 0
        cert = json.loads(out)
        jsonschema.validate(cert, schema)
        f45 = _write_vbf(tmp_path, "f45.vbf1", F)
        out2 = tmp_path / "c.vbf1"
        code, out, _ = _run(capsys, "construct", "concat", "--f", f45,
                            "--g", f45, "--out", str(out2))
        assert code == 0
        cert = json.loads(out)
        jsonschema.validate(cert, schema)
        assert cert["kind"] == "concat"

    def test_bad_consts_exit_2(self, tmp_path, capsys):
        code, _, err = _run(capsys, "construct", "coset", "--n", "8",
                            "--consts", "0,0,1",
                            "--out", str(tmp_path / "x.vbf1"))
        assert code == 2


class TestSearch:
    def test_json_output(self, capsys):
        code, out, _ = _run(capsys, "search", "--n", "4", "--cap", "8")
        assert code == 0
        d = json.loads(out)
        assert d["hits"] == 448 and len(d["hit_list"]) == 8

    def test_csv_output(self, capsys):
        code, out, _ = _run(capsys, "search", "--n", "4", "--cap", "3",
                            "--out", "csv")
        assert code == 0
        assert out.splitlines()[0].startswith("space,examined,hits")

    def test_random_needs_seed(self, capsys):
        code, _, err = _run(capsys, "search", "--n", "4", "--mode", "random",
                            "--samples", "10")
        assert code == 2

    def test_n6_exhaustive_needs_long(self, capsys):
        code, _, err = _run(capsys, "search", "--n", "6")
        assert code == 2 and "long" in err


class TestRank:
    def test_rank_report(self, tmp_path, capsys):
        p = _write_vbf(tmp_path, "c.vbf1", power_function(field_for(4), 3))
        code, out, _ = _run(capsys, "rank", p)
        assert code == 0
        d = json.loads(out)
        assert d["n"] == 4 and d["gamma_rank"] == 100

    def test_large_rank_needs_long(self, tmp_path, capsys):
        p = _write_vbf(tmp_path, "c.vbf1", power_function(field_for(8), 3))
        code, _, err = _run(capsys, "rank", p)
        assert code == 2

    def test_two_path_comparison_verdict(self, tmp_path, capsys):
        from apnlab.constructions import table1_functions

        spec = field_for(6)
        p1 = _write_vbf(tmp_path, "a.vbf1", power_function(spec, 3))
        p2 = _write_vbf(tmp_path, "b.vbf1", table1_functions(spec)[6])
        code, out, _ = _run(capsys, "rank", p1, p2)
        assert code == 0
        d = json.loads(out)
        assert d["provably_inequivalent"] is True
        assert d["separating_invariant"] in ("gamma_rank", "walsh_spectrum")

    def test_dimension_mismatch_exits_2(self, tmp_path, capsys):
        p1 = _write_vbf(tmp_path, "a.vbf1", power_function(field_for(4), 3))
        p2 = _write_vbf(tmp_path, "b.vbf1", power_function(field_for(5), 3))
        code, _, err = _run(capsys, "rank", p1, p2)
        assert code == 2


class TestUsage:
    def test_unknown_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["frobnicate"])
        assert e.value.code == 2

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["analyze", "x", "--bogus"])
        assert e.value.code == 2

    def test_degree_out_of_range_exits_2(self, capsys):
        code = main(["search", "--n", "40"])
        assert code == 2

    def test_reducible_modulus_exits_2(self, capsys):
        # x^4 + x^2 + 1 = (x^2 + x + 1)^2 is not irreducible
        code = main(["search", "--n", "4", "--modulus", "15"])
        assert code == 2
