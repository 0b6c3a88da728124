"""Command line front end.

Subcommands: ber (Monte Carlo sweep to CSV), pep (worst-case PEP table),
verify (group-decodability report), rotate (rotation search to a matrix
file). Options can also come from a plain key=value config file via
--config; explicit flags override file values.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import sys

import numpy as np

from . import constellation, harness, rotation
from .detector import DetectionFailureError
from .numerics import SingularMatrixError

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def parse_snr_spec(spec):
    """SNR sweep 'a:b:step' (inclusive of b within half a step) or a single
    value or comma list."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad SNR spec {spec!r}; expected a:b:step")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise ValueError(f"bad SNR spec {spec!r}")
        n = int(np.floor((b - a) / step + 0.5)) + 1
        return tuple(a + i * step for i in range(n))
    return tuple(float(p) for p in spec.split(","))


def read_config_file(path):
    """Plain key=value lines; '#' starts a comment; blank lines ignored."""
    values = {}
    with open(path) as f:
        for ln, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected key=value")
            key, val = line.split("=", 1)
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _merged(args, keys):
    """Config-file values with explicit flags taking precedence."""
    file_vals = read_config_file(args.config) if args.config else {}
    out = {}
    for key in keys:
        flag = getattr(args, key, None)
        out[key] = flag if flag is not None else file_vals.get(key)
    return out


def _build_sim_config(args):
    v = _merged(args, ["code", "constellation", "snr_db", "seed", "rotation",
                       "detector", "rx", "min_errors", "max_blocks"])
    missing = [k for k in ("code", "constellation", "snr_db") if not v[k]]
    if missing:
        raise harness.ConfigError(f"missing required option(s): "
                                  f"{', '.join(missing)}")
    snr = v["snr_db"]
    snr_db = parse_snr_spec(snr) if isinstance(snr, str) else tuple(snr)
    return harness.SimConfig(
        code=v["code"], constellation=v["constellation"], snr_db=snr_db,
        N=int(v["rx"] or 1),
        rotation=v["rotation"] or "default",
        detector=v["detector"] or "exhaustive",
        min_errors=int(v["min_errors"] or 400),
        max_blocks=int(v["max_blocks"] or 10_000_000),
        seed=int(v["seed"] or 0)).validate()


def cmd_ber(args):
    config = _build_sim_config(args)
    records = harness.run_ber(config)
    for r in records:
        print(f"{r.code} {r.constellation} snr={r.snr_db:g} dB  "
              f"ber={r.ber:.3e}  ({r.bit_errors} errors / {r.trials} blocks, "
              f"stopped on {r.stopped_on}, {r.wall_seconds:.1f}s)")
    if args.out:
        harness.write_csv(records, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_pep(args):
    config = _build_sim_config(args)
    header, rows = harness.run_pep(config)
    if args.out:
        harness.write_pep_csv(header, rows, args.out)
        print(f"wrote {args.out}")
    else:
        print(",".join(header))
        for row in rows:
            print(f"{row[0]:g}," + ",".join(f"{v:.6e}" for v in row[1:]))
    return 0


def cmd_verify(args):
    v = _merged(args, ["code"])
    if not v["code"]:
        raise harness.ConfigError("missing required option: code")
    report = harness.run_verify(v["code"])
    print(f"code: {report['code']}  (T={report['T']}, M={report['M']}, "
          f"K={report['K']})")
    print(f"rate: {report['rate']:g} symbols pcu   delay: {report['delay']}   "
          f"largest real group: {report['real_group_size']}")
    print("groups (0-based real symbol indices):")
    for g in report["groups"]:
        print(f"  {g}")
    print(f"quasi-orthogonality: ok={report['ok']}  "
          f"max violation={report['max_violation']:.3e}")
    return 0 if report["ok"] else EXIT_NUMERICAL


def cmd_rotate(args):
    v = _merged(args, ["m", "constellation", "budget", "seed", "out"])
    if not v["m"]:
        raise harness.ConfigError("missing required option: m")
    m = int(v["m"])
    c = constellation.by_name(v["constellation"] or "4qam")
    R = rotation.optimize_rotation(m, c, budget=int(v["budget"] or 12),
                                   seed=int(v["seed"] or 0))
    dp = rotation.product_distance(R, rotation.group_difference_set(c, m))
    print(f"m={m}  dp_min={dp.dp_min:.6f}")
    for row in R:
        print("  " + " ".join(f"{x: .12f}" for x in row))
    if v["out"]:
        rotation.save_rotation(R, v["out"])
        print(f"wrote {v['out']}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="stbc-lab",
                                description="Space-time block code lab: "
                                            "construction, decoding, PEP, BER")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key=value config file")
        sp.add_argument("--code")
        sp.add_argument("--constellation")
        sp.add_argument("--snr-db", dest="snr_db",
                        help="sweep a:b:step or comma list (dB)")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--rotation", help="default | none | matrix file")
        sp.add_argument("--detector", choices=["exhaustive", "sphere"])
        sp.add_argument("--rx", type=int, help="receive antennas (default 1)")
        sp.add_argument("--min-errors", dest="min_errors", type=int)
        sp.add_argument("--max-blocks", dest="max_blocks", type=int)
        sp.add_argument("--out", help="output CSV path")

    sp = sub.add_parser("ber", help="Monte Carlo BER sweep")
    common(sp)
    sp.set_defaults(func=cmd_ber)

    sp = sub.add_parser("pep", help="worst-case PEP table")
    common(sp)
    sp.set_defaults(func=cmd_pep)

    sp = sub.add_parser("verify", help="group decodability report")
    sp.add_argument("--config", help="key=value config file")
    sp.add_argument("--code")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("rotate", help="optimize a rotation matrix")
    sp.add_argument("--config", help="key=value config file")
    sp.add_argument("--m", type=int)
    sp.add_argument("--constellation")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", help="output rotation file")
    sp.set_defaults(func=cmd_rotate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (harness.ConfigError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (DetectionFailureError, SingularMatrixError,
            np.linalg.LinAlgError, FloatingPointError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
