"""Seeded Monte Carlo BER sweeps, PEP tables, and decodability reports.

The BER engine runs fixed-size chunks of blocks, with an independent RNG
substream per (seed, snr index, chunk index). The chunk size is part of the
algorithm, not a tuning knob: results are bit-identical no matter how chunks
are scheduled, and a point stops after accumulating the configured bit errors
or the trial cap, whichever comes first (whole chunks only, so the stopping
point is deterministic too).
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import analysis, codebook, constellation, detector, rotation
from .channel import sample_channel, snr_db_to_linear, transmit

CHUNK_BLOCKS = 512

CSV_HEADER = ("code,M,N,constellation,rotation,detector,snr_db,"
              "trials,bit_errors,ber,seed,wall_seconds")


class ConfigError(ValueError):
    """Invalid simulation configuration (bad names, empty sweep, ...)."""


@dataclass(frozen=True)
class SimConfig:
    code: str
    constellation: str
    snr_db: tuple
    N: int = 1
    rotation: str = "default"      # "default" | "none" | path to a matrix file
    detector: str = "exhaustive"
    min_errors: int = 400
    max_blocks: int = 10_000_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))

    def validate(self):
        if not self.snr_db:
            raise ConfigError("empty SNR list")
        if self.N < 1:
            raise ConfigError("N must be >= 1")
        if self.min_errors < 1 or self.max_blocks < 1:
            raise ConfigError("stop rule must be positive")
        if self.detector not in ("exhaustive", "sphere"):
            raise ConfigError(f"unknown detector strategy {self.detector!r}")
        try:
            codebook.by_name(self.code)
            constellation.by_name(self.constellation)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        return self


@dataclass(frozen=True)
class BerRecord:
    code: str
    M: int
    N: int
    constellation: str
    rotation: str
    detector: str
    snr_db: float
    trials: int
    bit_errors: int
    ber: float
    seed: int
    wall_seconds: float
    stopped_on: str = field(default="errors", compare=False)

    def csv_row(self):
        return (f"{self.code},{self.M},{self.N},{self.constellation},"
                f"{self.rotation},{self.detector},{self.snr_db:g},"
                f"{self.trials},{self.bit_errors},{self.ber:.10e},"
                f"{self.seed},{self.wall_seconds:.3f}")


def write_csv(records, path):
    with open(path, "w") as f:
        f.write(CSV_HEADER + "\n")
        for r in records:
            f.write(r.csv_row() + "\n")


def _bit_tables(c):
    """Fast bit<->symbol maps: bit-block integer -> point index, and the
    (Q, bits) label matrix for the reverse direction."""
    bps = c.bits_per_symbol
    powers = 1 << np.arange(bps - 1, -1, -1)
    to_index = np.empty(1 << bps, dtype=int)
    for i, lab in enumerate(c.labels):
        to_index[int(np.dot(lab, powers))] = i
    labels = np.array(c.labels, dtype=np.uint8)
    return powers, to_index, labels


_QSTBC6_KEEP = np.array([0, 1, 2, 4, 5, 6])   # columns 4 and 8 deleted


def _resolve_rotation(config, code):
    """Returns (encoder rotation, detector lattice rotation) for the code.

    The encoder matrix is what multiplies each group's real data vector; for
    the 8-antenna family that is Theta @ R (the detector then sees R through
    its own Theta diagonalization, so both sides get the same matrix here).
    """
    name = config.code.lower()
    if config.rotation == "none":
        return None
    group_m = max(len(g) for g in code.groups)
    if name == "alamouti" or name.endswith("-2gp"):
        return None
    if config.rotation == "default":
        R = rotation.default_rotation(group_m)
    else:
        R = rotation.load_rotation(config.rotation)
        if R.shape[0] != group_m:
            raise ConfigError(f"rotation file is {R.shape[0]}-dim, code group "
                              f"size is {group_m}")
    if name.startswith("4gp-qstbc") or name == "mdc-qstbc4":
        return rotation.combined_rotation_qstbc(R) if group_m == 4 else R
    return R


def _make_runner(config):
    """Builds (code, constellation, encode, detect) closures for one config.

    encode(s_batch) -> X batch; detect(Y, H, rho) -> decoded symbol batch.
    """
    code = codebook.by_name(config.code)
    c = constellation.by_name(config.constellation)
    name = config.code.lower()
    R = _resolve_rotation(config, code)
    strategy = config.detector

    def encode(s):
        return code.encode_rotated(s, R)

    if name.startswith("4gp-qstbc"):
        deleted = code.M < 8

        def detect(Y, H, rho):
            if deleted:
                He = np.zeros(H.shape[:-2] + (8, H.shape[-1]), dtype=complex)
                He[..., _QSTBC6_KEEP, :] = H
            else:
                He = H
            res = detector.qstbc8_detect(Y, He, c, R=R, rho=rho,
                                         scale=code.scale, strategy=strategy)
            return res.symbols
    elif name.startswith("4gp-sast"):
        def detect(Y, H, rho):
            res = detector.sast_4gp_detect(Y, H, c, R=R, rho=rho,
                                           scale=code.scale, strategy=strategy)
            return res.symbols
    elif name.endswith("-2gp"):
        def detect(Y, H, rho):
            res = detector.sast_2gp_detect(Y, H, c, rho=rho, scale=code.scale,
                                           strategy=strategy)
            return res.symbols
    else:
        # small codes (alamouti, mdc-qstbc4): batched exhaustive joint ML
        cands = detector.all_symbol_vectors(c, code.K)
        X_all = code.encode_rotated(cands, R)

        def detect(Y, H, rho):
            B = Y.shape[0]
            best_m = np.full(B, np.inf)
            best_i = np.zeros(B, dtype=int)
            for lo in range(0, X_all.shape[0], 1024):
                Xc = X_all[lo:lo + 1024]
                diff = Y[:, None] - np.sqrt(rho) * np.einsum(
                    "ptm,bmn->bptn", Xc, H)
                m = np.sum(np.abs(diff) ** 2, axis=(-1, -2))
                i = np.argmin(m, axis=1)
                mv = np.take_along_axis(m, i[:, None], axis=1)[:, 0]
                upd = mv < best_m
                best_m[upd] = mv[upd]
                best_i[upd] = i[upd] + lo
            return cands[best_i]

    return code, c, encode, detect


def run_ber(config):
    """Monte Carlo BER sweep; one BerRecord per SNR point.

    Deterministic for a fixed (config, seed): substreams are keyed by
    (seed, snr index, chunk index) and chunks always run whole.
    """
    config.validate()
    code, c, encode, detect = _make_runner(config)
    powers, to_index, labels = _bit_tables(c)
    bits_per_block = code.K * c.bits_per_symbol
    records = []
    for snr_i, snr_db in enumerate(config.snr_db):
        rho = float(snr_db_to_linear(snr_db))
        t0 = time.monotonic()
        trials = 0
        bit_errors = 0
        chunk_i = 0
        while bit_errors < config.min_errors and trials < config.max_blocks:
            B = int(min(CHUNK_BLOCKS, config.max_blocks - trials))
            rng = np.random.default_rng([config.seed, snr_i, chunk_i])
            bits = rng.integers(0, 2, size=(B, code.K, c.bits_per_symbol))
            idx = to_index[np.einsum("bkj,j->bk", bits, powers)]
            s = c.points[idx]
            X = encode(s)
            H = sample_channel(code.M, config.N, rng, blocks=B)
            Y = transmit(X, H, rho, rng)
            shat = detect(Y, H, rho)
            idx_hat = constellation.nearest_index(shat, c)
            bit_errors += int(np.sum(labels[idx_hat] != bits))
            trials += B
            chunk_i += 1
        wall = time.monotonic() - t0
        records.append(BerRecord(
            code=config.code, M=code.M, N=config.N,
            constellation=config.constellation, rotation=config.rotation,
            detector=config.detector, snr_db=snr_db, trials=trials,
            bit_errors=bit_errors,
            ber=bit_errors / (trials * bits_per_block), seed=config.seed,
            wall_seconds=wall,
            stopped_on=("errors" if bit_errors >= config.min_errors
                        else "max_blocks")))
    return records


def run_verify(code_name):
    """Decodability report: group partition, worst quasi-orthogonality
    violation, and the rate/delay/group-size summary."""
    code = codebook.by_name(code_name)
    check = codebook.verify_group_decodable(code)
    info = codebook.code_info(code)
    return {
        "code": code.name,
        "T": code.T, "M": code.M, "K": code.K,
        "groups": code.groups,
        "ok": check.ok,
        "max_violation": check.max_violation,
        **info,
    }


def _pep_setup(config):
    """Difference sets, beta-map and group dimension for a PEP sweep."""
    code = codebook.by_name(config.code)
    c = constellation.by_name(config.constellation)
    name = config.code.lower()
    if name.startswith("4gp-qstbc") or name == "mdc-qstbc4":
        m = 4
        diffs = rotation.qstbc_group_difference_set(c)
        if config.rotation == "none":
            from .numerics import theta4
            beta_map = theta4()
        elif config.rotation == "default":
            beta_map = rotation.default_rotation(4)
        else:
            beta_map = rotation.load_rotation(config.rotation)
    elif name.startswith("4gp-sast"):
        m = code.M // 2
        diffs = np.concatenate([rotation.group_difference_set(c, m, "real"),
                                rotation.group_difference_set(c, m, "imag")])
        if config.rotation == "none":
            beta_map = np.eye(m)
        elif config.rotation == "default":
            beta_map = rotation.default_rotation(m)
        else:
            beta_map = rotation.load_rotation(config.rotation)
    else:
        raise ConfigError(f"PEP sweep not defined for code {config.code!r}")
    return m, diffs, beta_map


def run_pep(config):
    """Worst-case exact and asymptotic PEP per SNR point.

    Returns (header, rows); each row is
    (rho_db, beta_1..beta_m, pep_exact, pep_asymptotic), with the asymptotic
    value nan when the worst-case difference is diversity-deficient.
    """
    config.validate()
    m, diffs, beta_map = _pep_setup(config)
    header = (["rho_db"] + [f"beta{i + 1}" for i in range(m)]
              + ["pep_exact", "pep_asymptotic"])
    rows = []
    for snr_db in config.snr_db:
        rho = float(snr_db_to_linear(snr_db))
        wc = analysis.worst_case_pep(diffs, beta_map, rho, m)
        q = analysis.PepQuery(wc.beta, rho, m)
        if wc.diversity_deficient:
            asym = float("nan")
        elif m == 4:
            asym = analysis.pep_asymptotic_qstbc(q)
        else:
            asym = analysis.pep_asymptotic_sast(q)
        rows.append((snr_db, *wc.beta, wc.pep, asym))
    return header, rows


def write_pep_csv(header, rows, path):
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(f"{row[0]:g}," + ",".join(f"{v:.10e}" for v in row[1:])
                    + "\n")
