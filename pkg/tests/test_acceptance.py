"""End-to-end acceptance gate.

One test per headline claim, each checked at its stated tolerance and
summarized by a single [PASS]/[FAIL] line with the measured numbers
(run with -s to see the lines for passing tests too).

The relative-gain claim in the six-antenna comparison is not reproduced by
this implementation (the measured gap has the opposite sign at about
-0.15 dB); that test keeps the stated tolerance and is marked xfail rather
than widened. The companion depth/diversity claims pass.
"""

import math

import numpy as np
import pytest

from stbc_lab import analysis as an
from stbc_lab import channel as ch
from stbc_lab import codebook as cb
from stbc_lab import constellation as cn
from stbc_lab import detector as dt
from stbc_lab import harness as hn
from stbc_lab import rotation as rt
from stbc_lab.numerics import dft_matrix, theta4

C4 = cn.make_qam(4)


def report(name, ok, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


# ----------------------------------------------------- 1: group decodability


def test_acceptance_group_decodability():
    codes = [cb.mdc_qstbc_4(), cb.qstbc_8(), cb.qstbc_6(),
             cb.double_code(cb.double_code(cb.mdc_qstbc_4())),
             cb.sast_4gp_code(4), cb.sast_4gp_code(6), cb.sast_4gp_code(8)]
    worst = max(cb.verify_group_decodable(c).max_violation for c in codes)
    ok = worst <= 1e-12
    assert report("group decodability (7 constructions)", ok,
                  f"max cross-group violation {worst:.2e} (tol 1e-12)")


# -------------------------------------------------------- 2: ML equivalence


def _batched_oracle(code, cands, Y, H, rho, R):
    X_all = code.encode_rotated(cands, R)
    B = Y.shape[0]
    best_m = np.full(B, np.inf)
    best_i = np.zeros(B, dtype=int)
    for lo in range(0, X_all.shape[0], 8192):
        Xc = X_all[lo:lo + 8192]
        d = Y[:, None] - np.sqrt(rho) * np.einsum("ptm,bmn->bptn", Xc, H)
        m = np.sum(np.abs(d) ** 2, axis=(-1, -2))
        i = np.argmin(m, axis=1)
        mv = np.take_along_axis(m, i[:, None], axis=1)[:, 0]
        upd = mv < best_m
        best_m[upd] = mv[upd]
        best_i[upd] = i[upd] + lo
    return cands[best_i], best_m


def _joint_metric(code, s, Y, H, rho, R):
    X = code.encode_rotated(s, R)
    return np.sum(np.abs(Y - np.sqrt(rho) * (X @ H)) ** 2, axis=(-1, -2))


def _equivalence_run(code, detect, blocks, rho, R, seed):
    rng = np.random.default_rng(seed)
    cands = dt.all_symbol_vectors(C4, code.K)
    idx = rng.integers(0, 4, size=(blocks, code.K))
    s = C4.points[idx]
    X = code.encode_rotated(s, R)
    H = ch.sample_channel(code.M, 1, rng, blocks=blocks)
    Y = ch.transmit(X, H, rho, rng)
    fast = detect(Y, H)
    orac, orac_m = _batched_oracle(code, cands, Y, H, rho, R)
    match = np.all(np.isclose(fast, orac, atol=1e-12), axis=1)
    ties_ok = True
    if not match.all():
        fast_m = _joint_metric(code, fast[~match], Y[~match], H[~match],
                               rho, R)
        ties_ok = bool(np.max(np.abs(fast_m - orac_m[~match])) <= 1e-9)
    return int(match.sum()), ties_ok


def test_acceptance_ml_equivalence():
    rho = float(ch.snr_db_to_linear(10.0))

    qcode = cb.qstbc_8()
    Rq = rt.combined_rotation_qstbc(rt.default_rotation(4))
    q_ok, q_ties = _equivalence_run(
        qcode, lambda Y, H: dt.qstbc8_detect(Y, H, C4, R=Rq, rho=rho,
                                             scale=qcode.scale).symbols,
        1000, rho, Rq, seed=101)

    scode = cb.sast_4gp_code(4)
    Rs = rt.default_rotation(2)
    s_ok, s_ties = _equivalence_run(
        scode, lambda Y, H: dt.sast_4gp_detect(Y, H, C4, R=Rs, rho=rho,
                                               scale=scode.scale).symbols,
        500, rho, Rs, seed=102)

    ok = q_ok >= 999 and s_ok >= 499 and q_ties and s_ties
    assert report("ML equivalence vs exhaustive joint search", ok,
                  f"8-antenna {q_ok}/1000, 4-antenna SAST {s_ok}/500 "
                  f"(mismatch metrics tied within 1e-9: "
                  f"{q_ties and s_ties})")


# ------------------------------------------------- 3: rate/delay/group table


def test_acceptance_rate_delay_group_constants():
    expect = {"4gp-sast6": (1.0, 6, 3), "4gp-sast8": (1.0, 8, 4),
              "4gp-qstbc6": (1.0, 8, 4), "4gp-qstbc8": (1.0, 8, 4)}
    got = {}
    for name in expect:
        info = cb.code_info(cb.by_name(name))
        got[name] = (info["rate"], info["delay"], info["real_group_size"])
    ok = got == expect
    assert report("rate/delay/group-size constants", ok, f"{got}")


# ------------------------------------------------------ 4: noise whitening


def test_acceptance_whitening_covariance():
    B = 100_000
    rng = np.random.default_rng(40)

    H = ch.sample_channel(8, 1, rng, blocks=B)
    Z = ch.complex_normal(rng, (B, 8, 1))
    ybar, mu = dt._qstbc8_front_end(Z, H)
    th = theta4()
    inv_sqrt = (th * (1.0 / np.sqrt(mu))[..., None, :]) @ th
    w = np.einsum("bij,bj->bi", inv_sqrt, ybar[:, :4].real)
    # complex CN(0,1) noise splits into real halves of variance 1/2
    cov_q = 2.0 * (w[:, :, None] * w[:, None, :]).mean(axis=0)
    dev_q = float(np.max(np.abs(cov_q - np.eye(4))))

    H = ch.sample_channel(6, 1, rng, blocks=B)
    Z = ch.complex_normal(rng, (B, 6, 1))
    y1, y2, lam = dt._sast_front_end(Z, H)
    w = np.einsum("ij,bj->bi", dft_matrix(3), y1) / np.sqrt(lam)
    cov_s = (w[:, :, None] * w[:, None, :].conj()).mean(axis=0)
    dev_s = float(np.max(np.abs(cov_s - np.eye(3))))

    ok = dev_q < 0.05 and dev_s < 0.05
    assert report("post-whitening noise covariance", ok,
                  f"max |cov - I| entry: 8-antenna chain {dev_q:.4f}, "
                  f"SAST chain {dev_s:.4f} (tol 0.05, {B} blocks)")


# ------------------------------------ 5: exact PEP vs conditional Monte Carlo


def test_acceptance_pep_quadrature_vs_monte_carlo():
    draws = 1_000_000
    worst_sigmas = 0.0
    for fam, m, pep_exact in (("8-antenna", 4, an.pep_exact_qstbc),
                              ("SAST m=3", 3, an.pep_exact_sast)):
        for rho_db in (5.0, 10.0, 15.0):
            rho = float(ch.snr_db_to_linear(rho_db))
            for trial in range(3):
                rng = np.random.default_rng([50, m, int(rho_db), trial])
                beta = rng.standard_normal(m)
                exact = pep_exact(an.PepQuery(beta, rho, m))
                total = 0.0
                total_sq = 0.0
                for _ in range(10):
                    lam = (rng.standard_normal((draws // 10, 2, m))
                           + 1j * rng.standard_normal((draws // 10, 2, m))
                           ) * np.sqrt(m / 2.0)
                    cp = an.conditional_pep(beta, lam, rho)
                    total += float(cp.sum())
                    total_sq += float((cp ** 2).sum())
                mean = total / draws
                var = total_sq / draws - mean ** 2
                se = math.sqrt(var / draws)
                worst_sigmas = max(worst_sigmas, abs(mean - exact) / se)
    ok = worst_sigmas < 3.0
    assert report("exact PEP vs 1e6-draw Monte Carlo (18 settings)", ok,
                  f"worst deviation {worst_sigmas:.2f} standard errors "
                  f"(tol 3)")


# ------------------------------------- 6: diversity slope and constant


def test_acceptance_diversity_slope_and_constant():
    diffs = rt.qstbc_group_difference_set(C4)
    R = rt.default_rotation(4)
    curve = []
    for rho in np.logspace(4, 6, 9):
        wc = an.worst_case_pep(diffs, R, float(rho), 4)
        curve.append((float(rho), wc.pep))
    slope = an.diversity_slope(curve)

    from scipy.integrate import quad
    integral, _ = quad(lambda a: np.sin(a) ** 16, 0.0, np.pi / 2)
    const = 2.0 ** 24 / np.pi * integral
    rel = abs(const / an.QSTBC_ASYMPTOTIC_CONSTANT - 1.0)

    ok = abs(slope + 8.0) < 0.05 and rel < 1e-9
    assert report("asymptotic diversity slope and constant", ok,
                  f"slope {slope:.4f} (target -8 +- 0.05), constant "
                  f"{an.QSTBC_ASYMPTOTIC_CONSTANT:.0f} vs quadrature "
                  f"rel err {rel:.1e} (tol 1e-9)")


# ------------------------------------------------- 7: rotation necessity


def test_acceptance_rotation_necessity():
    diffs = rt.qstbc_group_difference_set(C4)
    dp_unrot = rt.product_distance(theta4(), diffs).dp_min
    dp_rot = rt.product_distance(rt.default_rotation(4), diffs).dp_min

    decades = {}
    for rot in ("default", "none"):
        recs = hn.run_ber(hn.SimConfig("4gp-qstbc6", "4qam", (14.0, 20.0),
                                       rotation=rot, min_errors=400))
        decades[rot] = math.log10(recs[0].ber / recs[1].ber)
    extra = decades["default"] - decades["none"]

    ok = dp_unrot == 0.0 and dp_rot > 0.0 and extra >= 1.0
    assert report("rotation necessity", ok,
                  f"dp_min unrotated {dp_unrot:g}, rotated {dp_rot:.4f}; "
                  f"BER drop over 14->20 dB: rotated "
                  f"{decades['default']:.2f} decades, unrotated "
                  f"{decades['none']:.2f} (extra {extra:.2f}, need >= 1)")


# ------------------------- 8: six-antenna family comparison at 2 bits pcu


@pytest.fixture(scope="module")
def six_antenna_sweep():
    grid = (12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0, 19.0)
    out = {}
    for code in ("4gp-qstbc6", "4gp-sast6"):
        recs = hn.run_ber(hn.SimConfig(code, "4qam", grid, min_errors=800))
        out[code] = [(r.snr_db, r.ber) for r in recs]
    return out


def _crossing(pts, level):
    snr = np.array([p[0] for p in pts])
    y = np.log10([p[1] for p in pts])
    if np.log10(level) < y[-1]:
        return math.nan
    return float(np.interp(np.log10(level), y[::-1], snr[::-1]))


@pytest.mark.xfail(strict=True,
                   reason="measured gap is about -0.15 dB: the optimized "
                          "SAST rotation makes the SAST code marginally "
                          "better, not 0.2 dB worse")
def test_acceptance_six_antenna_relative_gain(six_antenna_sweep):
    cq = _crossing(six_antenna_sweep["4gp-qstbc6"], 1e-4)
    cs = _crossing(six_antenna_sweep["4gp-sast6"], 1e-4)
    gain = cs - cq
    ok = 0.0 <= gain <= 0.4
    assert report("six-antenna comparison: gain at BER 1e-4", ok,
                  f"measured {gain:+.3f} dB (band 0.2 +- 0.2 dB)")


def test_acceptance_six_antenna_depth_and_diversity(six_antenna_sweep):
    # an ideal diversity-4 Rayleigh curve cannot exceed effective diversity
    # 3.37 between its 1e-3 and 1e-5 crossings; exceeding that bound
    # certifies diversity above 4 on the way to the asymptotic order 6
    effs = {}
    reached = True
    for code, pts in six_antenna_sweep.items():
        c3 = _crossing(pts, 1e-3)
        c5 = _crossing(pts, 1e-5)
        reached &= not (math.isnan(c3) or math.isnan(c5))
        effs[code] = 20.0 / (c5 - c3)
    ok = reached and all(e > 3.37 for e in effs.values())
    assert report("six-antenna comparison: depth and effective diversity",
                  ok,
                  f"BER 1e-5 reached by both; effective diversity between "
                  f"1e-3 and 1e-5 crossings: "
                  + ", ".join(f"{k} {v:.2f}" for k, v in effs.items())
                  + " (need > 3.37, ideal diversity-4 ceiling)")


# ------------------------------------------------------------------ 9: PAPR


def test_acceptance_papr():
    trials = 100_000

    def pad(m):
        return np.hstack([m, np.zeros((2, 2))])
    al = cb.alamouti()
    zp = cb.dispersion_from_pairs(
        [pad(al.dispersion[0]), pad(al.dispersion[2])],
        [pad(al.dispersion[1]), pad(al.dispersion[3])],
        [(0, 1), (2, 3)], name="alamouti-zp4")

    p_sast = an.papr(cb.sast_4gp_code(4), C4, trials,
                     np.random.default_rng(90), R=rt.default_rotation(2))
    p_zp = an.papr(zp, C4, trials, np.random.default_rng(91))
    ok = p_sast < p_zp
    assert report("PAPR: 4-antenna SAST vs zero-padded orthogonal design",
                  ok, f"SAST {p_sast:.4f} < zero-padded {p_zp:.4f}: {ok}")
