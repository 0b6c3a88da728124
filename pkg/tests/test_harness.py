import math

import numpy as np
import pytest

from stbc_lab import cli
from stbc_lab import codebook as cb
from stbc_lab import constellation as cn
from stbc_lab import detector as dt
from stbc_lab import harness as hn
from stbc_lab import rotation as rt
from stbc_lab.channel import sample_channel, snr_db_to_linear, transmit


def cfg(**kw):
    base = dict(code="alamouti", constellation="4qam", snr_db=(10.0,))
    base.update(kw)
    return hn.SimConfig(**base)


# ------------------------------------------------------------ configuration


def test_parse_snr_spec_range_and_lists():
    assert cli.parse_snr_spec("0:20:5") == (0.0, 5.0, 10.0, 15.0, 20.0)
    assert cli.parse_snr_spec("1:2:0.5") == (1.0, 1.5, 2.0)
    assert cli.parse_snr_spec("3,7.5") == (3.0, 7.5)
    assert cli.parse_snr_spec("12") == (12.0,)


@pytest.mark.parametrize("bad", ["1:2", "5:1:1", "1:2:0", "1:2:-1", "a,b"])
def test_parse_snr_spec_rejects(bad):
    with pytest.raises(ValueError):
        cli.parse_snr_spec(bad)


def test_sim_config_validation():
    cfg().validate()
    with pytest.raises(hn.ConfigError):
        cfg(snr_db=()).validate()
    with pytest.raises(hn.ConfigError):
        cfg(N=0).validate()
    with pytest.raises(hn.ConfigError):
        cfg(min_errors=0).validate()
    with pytest.raises(hn.ConfigError):
        cfg(detector="genie").validate()
    with pytest.raises(hn.ConfigError):
        cfg(code="nope").validate()
    with pytest.raises(hn.ConfigError):
        cfg(constellation="9qam").validate()


def test_read_config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("code = alamouti   # comment\n\nmin-errors=50\n")
    vals = cli.read_config_file(p)
    assert vals == {"code": "alamouti", "min_errors": "50"}
    p.write_text("just a line\n")
    with pytest.raises(ValueError, match="key=value"):
        cli.read_config_file(p)


# ------------------------------------------------------------------ run_ber


def test_run_ber_deterministic():
    c = cfg(snr_db=(8.0,), min_errors=50)
    a = hn.run_ber(c)[0]
    b = hn.run_ber(c)[0]
    assert a.csv_row().rsplit(",", 1)[0] == b.csv_row().rsplit(",", 1)[0]
    assert a.trials == b.trials and a.bit_errors == b.bit_errors


def test_run_ber_stop_on_errors():
    r = hn.run_ber(cfg(snr_db=(5.0,), min_errors=50))[0]
    assert r.stopped_on == "errors"
    assert r.bit_errors >= 50
    assert r.trials % hn.CHUNK_BLOCKS == 0


def test_run_ber_stop_on_max_blocks():
    # cap below one chunk: the final chunk is truncated to honour the cap
    r = hn.run_ber(cfg(snr_db=(30.0,), min_errors=10 ** 9,
                       max_blocks=256))[0]
    assert r.stopped_on == "max_blocks"
    assert r.trials == 256


def test_run_ber_zero_errors_at_high_snr():
    r = hn.run_ber(cfg(snr_db=(60.0,), max_blocks=512))[0]
    assert r.bit_errors == 0
    assert r.ber == 0.0
    assert r.stopped_on == "max_blocks"


def test_run_ber_monotone_in_snr():
    recs = hn.run_ber(cfg(snr_db=(0.0, 6.0, 12.0), min_errors=200))
    bers = [r.ber for r in recs]
    assert bers[0] > bers[1] > bers[2]


def test_run_ber_matches_independent_oracle():
    """Straight-line reimplementation: fresh RNG stream, per-block joint ML
    over all 256 candidate symbol vectors, manual bit counting."""
    snr_db = 10.0
    rec = hn.run_ber(hn.SimConfig("4gp-sast4", "4qam", (snr_db,),
                                  min_errors=300))[0]
    code = cb.sast_4gp_code(4)
    c = cn.make_qam(4)
    R = rt.default_rotation(2)
    rho = float(snr_db_to_linear(snr_db))
    rng = np.random.default_rng(777)
    labels = np.array(c.labels, dtype=np.uint8)
    cands = dt.all_symbol_vectors(c, code.K)
    blocks = 3000
    errors = 0
    for _ in range(blocks):
        idx = rng.integers(0, c.order, size=code.K)
        X = code.encode_rotated(c.points[idx], R)
        H = sample_channel(code.M, 1, rng)
        Y = transmit(X, H, rho, rng)
        res = dt.joint_ml_oracle(code, Y, H, rho, c, R=R, candidates=cands)
        idx_hat = cn.nearest_index(res.symbols, c)
        errors += int(np.sum(labels[idx_hat] != labels[idx]))
    ber_oracle = errors / (blocks * code.K * c.bits_per_symbol)
    rel_se = math.sqrt(1.0 / errors + 1.0 / rec.bit_errors)
    assert abs(rec.ber / ber_oracle - 1.0) < 3.0 * rel_se + 0.05


def test_sphere_strategy_matches_exhaustive_counts():
    base = dict(code="4gp-qstbc8", constellation="4qam", snr_db=(12.0,),
                min_errors=1, max_blocks=hn.CHUNK_BLOCKS)
    a = hn.run_ber(hn.SimConfig(detector="exhaustive", **base))[0]
    b = hn.run_ber(hn.SimConfig(detector="sphere", **base))[0]
    assert a.bit_errors == b.bit_errors
    assert a.trials == b.trials


# ---------------------------------------------------------------------- CSV


def test_csv_output_format(tmp_path):
    recs = hn.run_ber(cfg(snr_db=(20.0, 30.0), max_blocks=512,
                          min_errors=10 ** 9))
    path = tmp_path / "out.csv"
    hn.write_csv(recs, path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == hn.CSV_HEADER
    assert len(lines) == 3
    for line in lines[1:]:
        fields = line.split(",")
        assert len(fields) == 12
        assert fields[0] == "alamouti"
        int(fields[7]), int(fields[8]), float(fields[9]), float(fields[11])


# ------------------------------------------------------------------- verify


@pytest.mark.parametrize("name", ["mdc-qstbc4", "4gp-qstbc8", "4gp-qstbc6",
                                  "4gp-sast4", "4gp-sast6", "4gp-sast8"])
def test_run_verify_reports_decodable(name):
    rep = hn.run_verify(name)
    assert rep["ok"]
    assert rep["max_violation"] <= 1e-12


def test_run_verify_unknown_code():
    with pytest.raises(ValueError):
        hn.run_verify("nope")


# ---------------------------------------------------------------------- PEP


def test_run_pep_qstbc_table():
    c = hn.SimConfig("4gp-qstbc8", "4qam", (10.0, 20.0))
    header, rows = hn.run_pep(c)
    assert header == ["rho_db", "beta1", "beta2", "beta3", "beta4",
                      "pep_exact", "pep_asymptotic"]
    assert len(rows) == 2
    assert rows[0][-2] > rows[1][-2]
    assert all(np.isfinite(r[-1]) for r in rows)


def test_run_pep_unrotated_is_deficient():
    c = hn.SimConfig("4gp-qstbc8", "4qam", (15.0,), rotation="none")
    _, rows = hn.run_pep(c)
    assert math.isnan(rows[0][-1])


def test_run_pep_sast6_dimensions(tmp_path):
    c = hn.SimConfig("4gp-sast6", "4qam", (12.0,))
    header, rows = hn.run_pep(c)
    assert header[1:4] == ["beta1", "beta2", "beta3"]
    path = tmp_path / "pep.csv"
    hn.write_pep_csv(header, rows, path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == ",".join(header)
    assert len(lines) == 2


def test_run_pep_rejects_unsupported_code():
    with pytest.raises(hn.ConfigError):
        hn.run_pep(hn.SimConfig("alamouti", "4qam", (10.0,)))


# ---------------------------------------------------------------------- CLI


def test_cli_verify_ok(capsys):
    assert cli.main(["verify", "--code", "4gp-qstbc8"]) == 0
    out = capsys.readouterr().out
    assert "ok=True" in out


def test_cli_unknown_code_is_config_error(capsys):
    assert cli.main(["verify", "--code", "nope"]) == cli.EXIT_CONFIG


def test_cli_missing_required_option(capsys):
    assert cli.main(["ber", "--code", "alamouti"]) == cli.EXIT_CONFIG


def test_cli_bad_snr_spec(capsys):
    rc = cli.main(["ber", "--code", "alamouti", "--constellation", "4qam",
                   "--snr-db", "bad"])
    assert rc == cli.EXIT_CONFIG


def test_cli_ber_writes_csv(tmp_path, capsys):
    out = tmp_path / "ber.csv"
    rc = cli.main(["ber", "--code", "alamouti", "--constellation", "4qam",
                   "--snr-db", "60", "--max-blocks", "512",
                   "--min-errors", "1000000000", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == hn.CSV_HEADER
    assert len(lines) == 2


def test_cli_config_file_with_flag_override(tmp_path, capsys):
    p = tmp_path / "run.cfg"
    p.write_text("code=nope\n")
    assert cli.main(["verify", "--config", str(p)]) == cli.EXIT_CONFIG
    assert cli.main(["verify", "--config", str(p),
                     "--code", "alamouti"]) == 0


def test_cli_rotate_writes_loadable_file(tmp_path, capsys):
    out = tmp_path / "r2.txt"
    rc = cli.main(["rotate", "--m", "2", "--budget", "1",
                   "--out", str(out)])
    assert rc == 0
    R = rt.load_rotation(out)
    assert R.shape == (2, 2)
