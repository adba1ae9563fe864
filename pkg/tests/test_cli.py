import json

import pytest

from halfgame.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_play_emits_record_with_config_echo(capsys):
    code, out, _ = run_cli(
        capsys, "play", "--game", "pm", "--n", "100", "--bias", "50",
        "--epsilon", "0.45", "--seed", "7",
    )
    assert code == 0
    blob = json.loads(out)
    assert blob["config"] == {
        "game": "pm", "n": 100, "bias": 50, "epsilon": 0.45, "seed": 7,
        "breakerMode": "uniform", "stopPolicy": "goal",
    }
    assert blob["outcome"] in ("MakerWin", "MakerLoss")
    assert blob["seed"] == 7


def test_play_round_trips_byte_for_byte(capsys):
    args = (
        "play", "--game", "ham", "--n", "60", "--bias", "4", "--seed", "3",
        "--epsilon", "0.5",
    )
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_play_dump_moves(tmp_path, capsys):
    dump = tmp_path / "moves.txt"
    code, out, _ = run_cli(
        capsys, "play", "--game", "pm", "--n", "10", "--bias", "2",
        "--seed", "1", "--stop-policy", "full", "--dump-moves", str(dump),
    )
    assert code == 0
    lines = dump.read_text().splitlines()
    assert len(lines) == 45
    assert all(":" in ln and "-" in ln for ln in lines)
    owners = [ln.split(":")[1] for ln in lines]
    assert owners[0] == "maker" and owners[1] == "breaker"


def test_sweep_writes_csv_and_sidecar(tmp_path, capsys):
    out_csv = tmp_path / "pm.csv"
    code, out, _ = run_cli(
        capsys, "sweep", "--game", "pm", "--n", "30", "--epsilon", "0.5",
        "--bias-grid", "2:14:4", "--trials", "8", "--seed", "1",
        "--out", str(out_csv),
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert len(lines) == 1 + 4
    echo = json.loads(out)
    assert echo["csv"] == str(out_csv)
    assert json.load(open(echo["sidecar"]))["schema"] == "halfgame-sweep-v1"


def test_equiv_prints_exact_zero(capsys):
    code, out, _ = run_cli(capsys, "equiv", "--n", "4", "--bias", "2", "--rounds", "1")
    assert code == 0
    assert out.strip() == "TV=0.000000"


def test_equiv_scope_refusal_exits_1(capsys):
    code, _, err = run_cli(capsys, "equiv", "--n", "5", "--bias", "2")
    assert code == 1
    assert "refused" in err


def test_verify_subcommand(tmp_path, capsys):
    edges = tmp_path / "g.txt"
    edges.write_text("0 1\n1 2\n2 3\n3 4\n4 0\n")
    code, out, _ = run_cli(capsys, "verify", "--n", "5", "--edges", str(edges))
    assert code == 0
    blob = json.loads(out)
    assert blob["hamiltonian"] and blob["connected"]
    assert blob["minDegree"] == blob["maxDegree"] == 2


def test_verify_with_certificate_and_searches(tmp_path, capsys):
    edges = tmp_path / "g.txt"
    edges.write_text("0 1\n1 2\n2 3\n3 0\n")
    cert = tmp_path / "cycle.txt"
    cert.write_text("0\n1\n2\n3\n")
    code, out, _ = run_cli(
        capsys, "verify", "--n", "4", "--edges", str(edges),
        "--cycle", str(cert), "--kset", "3", "--bipartite", "2", "2",
    )
    assert code == 0
    blob = json.loads(out)
    assert blob["hamiltonian"] and blob["certificate"]
    assert blob["completeBipartite"] is True
    # any 3 cycle vertices induce 2 >= C(3,2) - 3/2 edges
    assert blob["denseKSet"] is True


def test_verify_large_graph_skips_exact_hamiltonicity(tmp_path, capsys):
    edges = tmp_path / "g.txt"
    edges.write_text("\n".join(f"{i} {i+1}" for i in range(24)) + "\n")
    code, out, _ = run_cli(capsys, "verify", "--n", "25", "--edges", str(edges))
    assert code == 0
    blob = json.loads(out)
    assert blob["hamiltonian"] is None
    assert "certificate" in blob["hamiltonianNote"]
    assert blob["connected"] is True and blob["minDegree"] == 1


def test_verify_explicit_guard_refusal_exits_1(tmp_path, capsys):
    edges = tmp_path / "g.txt"
    edges.write_text("\n".join(f"{i} {i+1}" for i in range(59)) + "\n")
    code, _, err = run_cli(
        capsys, "verify", "--n", "60", "--edges", str(edges), "--kset", "20",
    )
    assert code == 1
    assert "refused" in err


def test_diag_reports_frequencies(capsys):
    code, out, _ = run_cli(
        capsys, "diag", "--n-list", "12,16", "--trials", "3", "--seed", "2",
    )
    assert code == 0
    rows = json.loads(out)
    assert [r["n"] for r in rows] == [12, 16]
    for r in rows:
        assert set(r["violationFrequency"]) == {
            "maxDegree", "denseKSet", "bipartite", "balancedBipartite",
        }
        assert all(0.0 <= f <= 1.0 for f in r["violationFrequency"].values())


def test_play_dump_permutation(tmp_path, capsys):
    sigma = tmp_path / "sigma.txt"
    code, _, _ = run_cli(
        capsys, "play", "--game", "pm", "--n", "12", "--bias", "2",
        "--seed", "4", "--breaker", "perm", "--dump-permutation", str(sigma),
    )
    assert code == 0
    assert len(sigma.read_text().splitlines()) == 66
    with pytest.raises(SystemExit) as exc:
        main([
            "play", "--game", "pm", "--n", "12", "--bias", "2",
            "--dump-permutation", str(sigma),
        ])
    assert exc.value.code == 2


def test_bound_subcommand(capsys):
    code, out, _ = run_cli(capsys, "bound", "--game", "ham", "--n", "100")
    assert code == 0
    assert out.strip() == "48"


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["play", "--game", "pm", "--n", "10", "--bias", "1", "--frob", "1"])
    assert exc.value.code == 2


def test_bad_game_value_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["play", "--game", "tictactoe", "--n", "10", "--bias", "1"])
    assert exc.value.code == 2


def test_odd_n_pm_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["play", "--game", "pm", "--n", "9", "--bias", "2"])
    assert exc.value.code == 2


def test_workers_env_fallback(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HALFGAME_WORKERS", "2")
    out_csv = tmp_path / "x.csv"
    code, _, _ = run_cli(
        capsys, "sweep", "--game", "mindeg1", "--n", "20", "--epsilon", "0.5",
        "--bias-grid", "2:6:2", "--trials", "4", "--seed", "0",
        "--out", str(out_csv),
    )
    assert code == 0
    assert out_csv.exists()
