"""Command-line interface: simulate sweeps, one-shot decodes, selftest.

JSON config files for `simulate` use the flag names with dashes stripped
(e.g. --p-min -> "pmin"); explicit command-line flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bp import BpConfig, TannerGraph, bp_decode
from .channel import NoiseModel, init_llrs
from .codes import StabilizerCode, build_surface_code
from .gf2 import BitMatrix
from .harness import (
    DECODERS,
    SimConfig,
    p_grid_from_range,
    run_sweep,
    selftest,
)
from .lcosd import LcosdConfig
from .mwpm import mwpm_decode
from .pipeline import PipelineConfig, bp_lcosd_decode

_CONFIG_KEYS = {
    "d": "d",
    "decoder": "decoder",
    "pmin": "pmin",
    "pmax": "pmax",
    "pointsperdecade": "pointsperdecade",
    "q": "q",
    "tmax": "tmax",
    "alpha1": "alpha1",
    "alpha2": "alpha2",
    "beta": "beta",
    "delta": "delta",
    "lmax": "lmax",
    "seed": "seed",
    "maxtrials": "maxtrials",
    "targeterrors": "targeterrors",
    "out": "out",
    "threads": "threads",
}

_DEFAULTS = {
    "d": 5,
    "decoder": "bp-lcosd",
    "pmin": 1e-4,
    "pmax": 1.0,
    "pointsperdecade": 4,
    "q": 1e-5,
    "tmax": 32,
    "alpha1": 5.0 / 8.0,
    "alpha2": 1.0,
    "beta": 7.5,
    "delta": 8,
    "lmax": 1024,
    "seed": 0,
    "maxtrials": 1_000_000,
    "targeterrors": 100,
    "out": None,
    "threads": 1,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bplcosd")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo sweep over p")
    sim.add_argument("--d", type=int)
    sim.add_argument("--decoder", choices=DECODERS)
    sim.add_argument("--p-min", dest="pmin", type=float)
    sim.add_argument("--p-max", dest="pmax", type=float)
    sim.add_argument("--points-per-decade", dest="pointsperdecade", type=int)
    sim.add_argument("--q", type=float)
    sim.add_argument("--tmax", type=int)
    sim.add_argument("--alpha1", type=float)
    sim.add_argument("--alpha2", type=float)
    sim.add_argument("--beta", type=float)
    sim.add_argument("--delta", type=int)
    sim.add_argument("--lmax", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--max-trials", dest="maxtrials", type=int)
    sim.add_argument("--target-errors", dest="targeterrors", type=int)
    sim.add_argument("--out", type=str)
    sim.add_argument("--threads", type=int)
    sim.add_argument("--config", type=str, help="JSON file overriding the defaults")
    sim.add_argument(
        "--config-out", type=str, help="also dump the resolved config as JSON here"
    )

    dec = sub.add_parser("decode", help="decode one syndrome from a JSON request")
    dec.add_argument("--in", dest="infile", type=str, help="JSON request (default: stdin)")

    sub.add_parser("selftest", help="check the built-in reference vectors")
    return parser


def _resolve_sim_config(args: argparse.Namespace) -> SimConfig:
    values = dict(_DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        for key, val in file_cfg.items():
            if key not in _CONFIG_KEYS:
                raise SystemExit(f"unknown config key {key!r}")
            values[key] = val
    for key in _CONFIG_KEYS:
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            values[key] = cli_val
    return SimConfig(
        d=values["d"],
        decoder=values["decoder"],
        p_grid=p_grid_from_range(values["pmin"], values["pmax"], values["pointsperdecade"]),
        q=values["q"],
        t_max=values["tmax"],
        alpha1=values["alpha1"],
        alpha2=values["alpha2"],
        beta=values["beta"],
        delta=values["delta"],
        l_max=values["lmax"],
        master_seed=values["seed"],
        max_trials=values["maxtrials"],
        target_errors=values["targeterrors"],
        out=values["out"],
        threads=values["threads"],
    )


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _resolve_sim_config(args)
    if args.config_out:
        dump = {
            "d": config.d,
            "decoder": config.decoder,
            "pgrid": list(config.p_grid),
            "q": config.q,
            "tmax": config.t_max,
            "alpha1": config.alpha1,
            "alpha2": config.alpha2,
            "beta": config.beta,
            "delta": config.delta,
            "lmax": config.l_max,
            "seed": config.master_seed,
            "maxtrials": config.max_trials,
            "targeterrors": config.target_errors,
            "out": config.out,
            "threads": config.threads,
        }
        with open(args.config_out, "w") as fh:
            json.dump(dump, fh, indent=2)
    run_sweep(config)
    return 0


def _bits(value, length: int | None = None) -> np.ndarray:
    if isinstance(value, str):
        arr = np.array([int(ch) for ch in value], dtype=np.uint8)
    else:
        arr = np.asarray(value, dtype=np.uint8)
    if length is not None and arr.size != length:
        raise SystemExit(f"expected {length} bits, got {arr.size}")
    return arr


def _cmd_decode(args: argparse.Namespace) -> int:
    if args.infile:
        with open(args.infile) as fh:
            request = json.load(fh)
    else:
        request = json.load(sys.stdin)

    if "H" in request:
        dense = np.array([_bits(row) for row in request["H"]], dtype=np.uint8)
        n = dense.shape[1] // 2
        code = StabilizerCode(
            n, n - dense.shape[0], dense.shape[0], BitMatrix.from_dense(dense), (), (), None
        )
    elif "d" in request:
        code = build_surface_code(int(request["d"]))
    else:
        raise SystemExit("request needs either 'H' or 'd'")
    z = _bits(request["z"], code.num_checks)
    noise = NoiseModel(float(request["p"]), float(request["q"]))
    params = request.get("params", {})
    decoder = request.get("decoder", "bp-lcosd")
    t_max = int(params.get("tmax", 32))
    alpha1 = float(params.get("alpha1", 5.0 / 8.0))
    alpha2 = float(params.get("alpha2", 1.0))

    if decoder == "mwpm":
        if code.geometry is None:
            raise SystemExit("mwpm needs a surface code given by 'd'")
        e_hat = mwpm_decode(code, z)
        sigma_hat, path = z, "mwpm"
    elif decoder in ("bp", "nms"):
        bp_cfg = BpConfig(t_max=t_max, alpha=1.0 if decoder == "bp" else alpha1)
        out = bp_decode(TannerGraph.from_code(code), init_llrs(code, noise, z), bp_cfg)
        e_hat, sigma_hat, path = out.hard_pauli, out.hard_syndrome, "bp-stage1"
    elif decoder == "bp-lcosd":
        pcfg = PipelineConfig(
            bp_stage1=BpConfig(t_max=t_max, alpha=alpha1),
            bp_stage2=BpConfig(t_max=t_max, alpha=alpha2),
            beta=float(params.get("beta", 7.5)),
            lcosd=LcosdConfig(
                delta=int(params.get("delta", 8)), l_max=int(params.get("lmax", 1024))
            ),
        )
        res = bp_lcosd_decode(code, z, noise, pcfg)
        e_hat, sigma_hat, path = res.e_hat, res.sigma_hat, res.path
    else:
        raise SystemExit(f"unknown decoder {decoder!r}")

    json.dump(
        {
            "e_hat": e_hat.to_string(),
            "sigma_hat": "".join(str(int(b)) for b in sigma_hat),
            "path": path,
        },
        sys.stdout,
    )
    sys.stdout.write("\n")
    return 0


def _cmd_selftest() -> int:
    checks = selftest()
    failed = 0
    for check in checks:
        status = "ok" if check.passed else "FAIL"
        detail = f"  ({check.detail})" if (check.detail and not check.passed) else ""
        print(f"[{status}] {check.name}{detail}")
        failed += not check.passed
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "decode":
        return _cmd_decode(args)
    return _cmd_selftest()


if __name__ == "__main__":
    sys.exit(main())
