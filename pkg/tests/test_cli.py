import json

import pytest

from bplcosd.cli import main

FIVE_QUBIT_H = [
    "1001001100",
    "0100100110",
    "1010000011",
    "0101010001",
]


def test_selftest_exits_clean(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out


def test_decode_five_qubit_from_matrix(tmp_path, capsys):
    request = {
        "H": FIVE_QUBIT_H,
        "z": "1101",
        "p": 0.01,
        "q": 1e-5,
        "decoder": "bp-lcosd",
    }
    req = tmp_path / "req.json"
    req.write_text(json.dumps(request))
    assert main(["decode", "--in", str(req)]) == 0
    reply = json.loads(capsys.readouterr().out)
    assert reply["e_hat"] == "IYIII"
    assert reply["sigma_hat"] == "1101"
    assert reply["path"] in ("bp-stage1", "bp-stage2", "lcosd")


def test_decode_surface_mwpm(tmp_path, capsys):
    # single Z-check defect: one X correction touching the boundary
    from bplcosd.codes import build_surface_code
    from bplcosd.gf2 import symplectic_syndrome
    from bplcosd.channel import PauliVector

    code = build_surface_code(3)
    e = PauliVector.single(code.n, 0, 1)
    z = symplectic_syndrome(code.H, e)
    request = {
        "d": 3,
        "z": "".join(str(int(b)) for b in z),
        "p": 0.01,
        "q": 1e-5,
        "decoder": "mwpm",
    }
    req = tmp_path / "req.json"
    req.write_text(json.dumps(request))
    assert main(["decode", "--in", str(req)]) == 0
    reply = json.loads(capsys.readouterr().out)
    assert reply["path"] == "mwpm"
    assert reply["sigma_hat"] == request["z"]


def test_simulate_writes_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main(
        [
            "simulate",
            "--decoder",
            "mwpm",
            "--d",
            "3",
            "--p-min",
            "0.05",
            "--p-max",
            "0.05",
            "--max-trials",
            "200",
            "--target-errors",
            "1000000",
            "--seed",
            "4",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("decoder,d,p,q,trials")
    assert lines[1].split(",")[0] == "mwpm"
    assert len(lines) == 2


def test_simulate_config_file_overrides(tmp_path):
    cfg = {
        "decoder": "mwpm",
        "d": 3,
        "pmin": 0.05,
        "pmax": 0.05,
        "maxtrials": 150,
        "targeterrors": 1000000,
        "seed": 4,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "sweep.csv"
    # CLI flag overrides the file's trial count
    rc = main(
        ["simulate", "--config", str(cfg_path), "--max-trials", "100", "--out", str(out)]
    )
    assert rc == 0
    assert out.read_text().splitlines()[1].split(",")[4] == "100"


def test_simulate_rejects_unknown_config_key(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(SystemExit):
        main(["simulate", "--config", str(cfg_path)])
