import json

import numpy as np
import pytest

from nhsdp import Pda
from nhsdp import serialize
from nhsdp.cli import main
from conftest import EX4_GRID


@pytest.fixture
def ex4_file(tmp_path):
    arr = Pda(np.array(EX4_GRID, dtype=np.int64), Z=2, S=4)
    path = tmp_path / "ex4.txt"
    path.write_text(serialize.pda_to_text(arr))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPipelines:
    def test_construct_then_verify(self, tmp_path, capsys):
        out = tmp_path / "packing.json"
        code, stdout, _ = run(
            capsys, "construct-nhsdp", "--v", 125, "--m", "2,2,2", "--out", out
        )
        assert code == 0 and "(125,8,8) NHSDP: valid" in stdout
        code, stdout, _ = run(capsys, "verify-nhsdp", out)
        assert code == 0 and "(125,8,8) NHSDP: valid" in stdout

    def test_full_chain_to_simulation(self, tmp_path, capsys):
        packing = tmp_path / "p.json"
        arr = tmp_path / "p.txt"
        assert run(capsys, "construct-nhsdp", "--v", 15, "--m", "2", "--out", packing)[0] == 0
        code, stdout, _ = run(capsys, "build-pda", packing, "--out", arr)
        assert code == 0 and "(15,15,11,30) PDA" in stdout
        assert run(capsys, "verify-pda", arr)[0] == 0
        code, stdout, _ = run(
            capsys, "simulate", arr, "--N", 2, "--demands", "sample:40"
        )
        assert code == 0 and "demands decoded" in stdout

    def test_simulate_all_demands_on_worked_array(self, ex4_file, capsys):
        code, stdout, _ = run(capsys, "simulate", ex4_file, "--N", 4, "--demands", "all")
        assert code == 0
        assert "256/256 demands decoded, load = 1" in stdout

    def test_simulate_explicit_demand_writes_transcript(self, ex4_file, tmp_path, capsys):
        out = tmp_path / "transcript.json"
        code, stdout, _ = run(
            capsys,
            "simulate", ex4_file, "--N", 4, "--demands", "0,1,2,3",
            "--seed", 5, "--out", out,
        )
        assert code == 0 and "4/4 users decoded" in stdout
        doc = json.loads(out.read_text())
        assert doc["seed"] == 5 and len(doc["transmissions"]) == 4

    def test_conjugate_and_group(self, ex4_file, tmp_path, capsys):
        conj = tmp_path / "conj.txt"
        code, stdout, _ = run(capsys, "conjugate", ex4_file, "--out", conj)
        assert code == 0 and "(4,4,2,4) PDA" in stdout
        assert run(capsys, "verify-pda", conj)[0] == 0
        grouped = tmp_path / "grouped.txt"
        code, stdout, _ = run(capsys, "group", ex4_file, "--K", 12, "--out", grouped)
        assert code == 0 and "(12,4,2,12) PDA" in stdout
        assert run(capsys, "verify-pda", grouped)[0] == 0

    def test_json_format_flag_round_trips(self, tmp_path, capsys):
        packing = tmp_path / "p.json"
        as_json = tmp_path / "arr.json"
        assert run(capsys, "construct-nhsdp", "--v", 15, "--m", "2", "--out", packing)[0] == 0
        code, _, _ = run(capsys, "build-pda", packing, "--out", as_json, "--format", "json")
        assert code == 0
        doc = json.loads(as_json.read_text())
        assert (doc["F"], doc["K"], doc["Z"], doc["S"]) == (15, 15, 11, 30)
        assert run(capsys, "verify-pda", as_json)[0] == 0

    def test_mn_pda_and_solver(self, tmp_path, capsys):
        out = tmp_path / "mn.txt"
        code, stdout, _ = run(capsys, "mn-pda", "--K", 4, "--t", 2, "--out", out)
        assert code == 0 and "(4,6,3,4) PDA" in stdout
        code, stdout, _ = run(capsys, "solve-params", "--v", 63, "--n", 2, "--exact")
        assert code == 0 and "m=3,4" in stdout and "product=12" in stdout

    def test_design_chain(self, tmp_path, capsys):
        ntap = tmp_path / "ntap.json"
        phf = tmp_path / "phf.json"
        assert run(capsys, "ntap", "--n", 2, "--out", ntap)[0] == 0
        code, stdout, _ = run(capsys, "phf", ntap, "--out", phf)
        assert code == 0 and "(3;36,9,3) PHF: valid" in stdout
        doc = json.loads(phf.read_text())
        assert doc["m"] == 36 and doc["q"] == 9

    def test_phf_accepts_single_block_packing(self, tmp_path, capsys):
        packing = tmp_path / "ds.json"
        packing.write_text('{"v": 7, "blocks": [[0, 1, 3]]}')
        code, stdout, _ = run(capsys, "phf", packing)
        assert code == 0 and "(3;21,7,3) PHF: valid" in stdout

    def test_ds_search(self, capsys):
        code, stdout, _ = run(capsys, "ds-search", "--q", 3)
        assert code == 0 and "(13,4) DS" in stdout and "0,1,3,9" in stdout
        code, stdout, _ = run(capsys, "ds-search", "--q", 6)
        assert code == 0 and "search space exhausted" in stdout

    def test_compare_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "table.csv"
        code, stdout, _ = run(
            capsys, "compare", "--schemes", "NHSDP,MN", "--K", 25, "--slack", 0, "--out", out
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("scheme,params,K,")
        assert any(line.startswith("NHSDP,") for line in lines[1:])
        assert any(line.startswith("MN,") for line in lines[1:])


class TestFailures:
    def test_verify_pda_flipped_star_is_c3b(self, ex4_file, tmp_path, capsys):
        lines = ex4_file.read_text().splitlines()
        cells = lines[1].split()
        cells[1] = "3"  # the star at (1,1) becomes a symbol
        mutated = tmp_path / "bad.txt"
        mutated.write_text("\n".join(lines[:1] + [" ".join(cells)] + lines[2:]) + "\n")
        code, stdout, _ = run(capsys, "verify-pda", mutated)
        assert code == 1
        assert "C3b" in stdout and "(0,1)" in stdout and "(1,0)" in stdout

    def test_verify_nhsdp_failure_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"v": 15, "blocks": [[1, 2, 3]]}')
        code, stdout, _ = run(capsys, "verify-nhsdp", bad)
        assert code == 1 and "half-sum" in stdout

    def test_unknown_subcommand_is_usage_error(self, capsys):
        assert run(capsys, "definitely-not-a-command")[0] == 2

    def test_missing_required_flag_is_usage_error(self, capsys):
        assert run(capsys, "construct-nhsdp", "--v", 15)[0] == 2

    def test_unreadable_file_is_usage_error(self, capsys):
        code, _, stderr = run(capsys, "verify-pda", "/no/such/file.txt")
        assert code == 2 and "cannot read" in stderr

    def test_infeasible_construction_reports_error(self, capsys):
        code, _, stderr = run(capsys, "construct-nhsdp", "--v", 9, "--m", "2,2,2")
        assert code == 1 and "admissible minimum" in stderr

    def test_simulate_all_over_budget_is_usage_error(self, ex4_file, capsys):
        code, _, stderr = run(
            capsys, "simulate", ex4_file, "--N", 4, "--demands", "all",
            "--max-demands", 10,
        )
        assert code == 2 and "sample:COUNT" in stderr

    def test_determinism(self, tmp_path, capsys):
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        for out in (first, second):
            assert run(
                capsys, "compare", "--schemes", "NHSDP,ZCW", "--K", 33, "--out", out
            )[0] == 0
        assert first.read_bytes() == second.read_bytes()
