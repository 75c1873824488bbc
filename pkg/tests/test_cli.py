import io
import json
import os

import pytest

from sbolab import cli

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def run(argv):
    out = io.StringIO()
    rc = cli.main(argv, out=out)
    return rc, out.getvalue()


def golden(name):
    with open(os.path.join(GOLDEN, name)) as fh:
        return fh.read()


class TestGolden:
    @pytest.mark.parametrize("name,argv", [
        ("composition_n4.csv",
         ["table", "composition", "--n", "4", "--imax", "2", "--jmax", "2",
          "--depth", "9"]),
        ("lattice_n4.csv",
         ["table", "lattice", "--n", "4", "--imax", "2", "--jmax", "2",
          "--depth", "9"]),
        ("composition_n5.json",
         ["table", "composition", "--n", "5", "--imax", "1", "--jmax", "1",
          "--depth", "9", "--format", "json"]),
        ("kernel_sct_minus_n3_l1.json",
         ["kernel", "--family", "sCt-", "--n", "3", "--l", "1"]),
        ("kernel_bt_plus_n4_k1_line.json",
         ["kernel", "--family", "Bt+", "--n", "4", "--k", "1", "--line"]),
        ("multiplicity_n4_special.json",
         ["multiplicity", "--n", "4", "--lam=-5/2", "--nu=-2", "--depth", "10"]),
    ])
    def test_byte_exact(self, name, argv):
        rc, text = run(argv)
        assert rc == 0
        assert text == golden(name)


class TestVerify:
    def test_gegenbauer_pass(self):
        rc, text = run(["verify", "gegenbauer", "--max-deg", "5"])
        assert rc == 0
        rep = json.loads(text.strip())
        assert rep["status"] == "pass" and rep["check"] == "gegenbauer"

    def test_projection_suite(self):
        rc, text = run(["verify", "projection", "--n", "4", "--kmax", "1",
                        "--lmax", "1"])
        assert rc == 0
        lines = [json.loads(l) for l in text.splitlines()]
        assert all(r["status"] == "pass" for r in lines)
        assert any(r["check"] == "projection:independence" for r in lines)

    def test_kernels_suite_small(self):
        rc, text = run(["verify", "kernels", "--n", "3", "--kmax", "0",
                        "--lmax", "0"])
        assert rc == 0
        for line in text.splitlines():
            assert json.loads(line)["status"] == "pass"

    def test_failing_suite_exits_one(self, monkeypatch):
        def fake(args):
            yield {"check": "fake", "params": {}, "status": "fail",
                   "witness": "boom", "runtime_ms": 0}
        monkeypatch.setitem(cli._SUITES, "gegenbauer", fake)
        rc, text = run(["verify", "gegenbauer"])
        assert rc == 1
        assert json.loads(text.strip())["witness"] == "boom"


class TestUsageErrors:
    def test_bad_fraction(self):
        rc, _ = run(["multiplicity", "--n", "4", "--lam=oops", "--nu=0"])
        assert rc == 2

    def test_unknown_suite(self):
        rc, _ = run(["verify", "nonsense"])
        assert rc == 2

    def test_bad_family(self):
        rc, _ = run(["kernel", "--family", "Zz", "--n", "4"])
        assert rc == 2


class TestEdgeCases:
    def test_empty_range_emits_header_only(self):
        rc, text = run(["table", "composition", "--n", "4", "--imax=-1",
                        "--jmax=-1", "--depth", "8"])
        assert rc == 0
        assert text == "n,i,j,parity,FF,FT,TF,TT\n"

    def test_residue_family_via_cli(self):
        rc, text = run(["kernel", "--family", "Att+", "--n", "3", "--i", "2",
                        "--j", "0"])
        assert rc == 0
        rows = json.loads(text)
        assert all(t["variant"] == "boundary" for t in rows["terms"])


class TestDeterminism:
    def test_identical_runs_identical_bytes(self):
        argv = ["table", "composition", "--n", "4", "--imax", "1", "--jmax", "1",
                "--depth", "8", "--format", "json"]
        assert run(argv) == run(argv)

    def test_json_roundtrip(self):
        rc, text = run(["table", "lattice", "--n", "4", "--imax", "1",
                        "--jmax", "1", "--depth", "8", "--format", "json"])
        assert rc == 0
        rows = json.loads(text)
        assert rows == json.loads(json.dumps(rows))
        for row in rows:
            want = 3 if row["on_lattice"] else 2
            assert row["total"] == want
