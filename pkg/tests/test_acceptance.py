"""Acceptance suite: one test per shipping criterion.

Run with -v for one pass/fail line per criterion; each test also prints a
PASS line with the measured numbers when it completes.
"""

import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

import reference as ref
from rmboost import (
    BmsChannel,
    BmsObservation,
    RmCode,
    Word,
    bms_exit_bit_map,
    bsc_transmit,
    build_sunflower,
    boost_decode_bit,
    capacity,
    codebook,
    conditional_table,
    exit_bit_map,
    exit_error,
    full_bit_error,
    l2_boost_bound,
    conditional_tail_bound,
    noise_weights,
    orbit_symmetry_check,
    q_table,
    quantize,
    random_codeword,
    restrict_to_subspace,
    restriction_identity_check,
    rm_reconstruct,
    rm_reconstruct_grid,
    subset_dim,
    subset_orbit,
    transform,
    verify_sunflower,
    weight_enum_log_bound,
    l4_bound,
    l4_orbit_moment,
)
from rmboost.cli import main
from rmboost.rm_core import packed_weights
from rmboost.sunflower import target_petal_count
from rmboost.seeding import derive_rng


def test_criterion_01_exact_exit_oracles():
    oracle = ref.ref_binomial_tail(3, 2, Fraction(1, 10))
    assert oracle == Fraction(28, 1000)
    rep = exit_error(RmCode(2, 0), 0.1)
    assert rep.p_hat == pytest.approx(0.028, abs=1e-12)
    half = exit_error(RmCode(1, 1), 0.1)
    assert half.p_hat == 0.5
    print(f"PASS criterion 1: RM(2,0) exit error {rep.p_hat!r} matches the "
          f"binomial tail, RM(1,1) is exactly {half.p_hat}")


def test_criterion_02_q_values_quantized():
    checked = 0
    for m in range(0, 5):
        for r in range(0, m + 1):
            q = np.asarray(q_table(RmCode(m, r), 0.1))
            values = set(np.unique(q).tolist())
            assert values <= {0.0, 0.5, 1.0}, (m, r, values)
            checked += 1
    print(f"PASS criterion 2: q values quantized to {{0, 1/2, 1}} for "
          f"{checked} codes with n <= 16")


def test_criterion_03_spectral_identities():
    code = RmCode(3, 1)
    worst = 0.0
    for eps in (0.1, 0.3):
        q = np.asarray(q_table(code, eps))
        ft = transform(q, eps)
        coeffs = np.asarray(ft.coeffs)
        parseval = abs(float(np.dot(noise_weights(8, eps), q ** 2) - np.sum(coeffs ** 2)))
        vanish = float(np.max(np.abs(coeffs[1::2])))
        assert parseval <= 1e-9
        assert vanish <= 1e-9
        worst = max(worst, parseval, vanish)
        for m_under in (1, 2):
            disc = restriction_identity_check(code, m_under, eps)
            assert disc <= 1e-9
            worst = max(worst, disc)
        orbit = orbit_symmetry_check(code, eps)
        assert orbit <= 1e-9
        worst = max(worst, orbit)
    print(f"PASS criterion 3: spectral identities hold, worst discrepancy {worst:.3e}")


def test_criterion_04_l4_domination():
    checked = 0
    worst_ratio = 0.0
    for m in (2, 3):
        n_pts = 1 << m
        seen = set()
        for S in range(1, 1 << n_pts):
            if S in seen:
                continue
            orbit = subset_orbit(S, m)
            seen.update(orbit)
            d = subset_dim(S)
            for eps in (0.1, 0.25):
                moment = l4_orbit_moment(S, eps, m)
                bound = l4_bound(d, m, eps)
                assert moment <= bound * (1 + 1e-12), (m, eps, S)
                worst_ratio = max(worst_ratio, moment / bound)
                checked += len(orbit)
    print(f"PASS criterion 4: fourth-moment bound dominates on {checked} "
          f"(subset, eps) cases, worst ratio {worst_ratio:.4f}")


def test_criterion_05_tail_domination():
    code = RmCode(3, 1)
    eps = 0.1
    p_e = exit_error(code, eps).p_hat
    lines = []
    for m_under in (1, 2):
        k = 3 - m_under
        q = np.asarray(conditional_table(code, m_under, eps))
        w = noise_weights(1 << m_under, eps)
        tail_half = float(w[q >= p_e / 2 + 0.25].sum())
        tail_third = float(w[q >= 1.0 / 3.0].sum())
        l2 = l2_boost_bound(p_e, k)
        cond = conditional_tail_bound(p_e, k, eps)
        assert tail_half <= l2
        assert tail_third <= cond
        lines.append(f"m_under={m_under}: {tail_half:.4f}<={l2:.3f}, "
                     f"{tail_third:.4f}<={cond:.3f}")
    print("PASS criterion 5: conditional error tails dominated; " + "; ".join(lines))


def test_criterion_06_sunflower_sweep():
    built = 0
    for m_over in range(2, 9):
        for m_mid in range(1, m_over):
            for m_under in range(0, m_mid):
                if m_over + m_under + 1 - 2 * m_mid < 0:
                    continue
                sf = build_sunflower(m_under, m_mid, m_over)
                assert sf.size == target_petal_count(m_under, m_mid, m_over)
                assert verify_sunflower(sf)
                built += 1
    print(f"PASS criterion 6: {built} sunflowers built at exact target size "
          f"and verified")


def test_criterion_07_boost_improves():
    amb = RmCode(5, 1)
    sf = build_sunflower(2, 3, 5)
    base_code = RmCode(3, 1)
    trials = 10_000
    diffs = []
    boost_err = 0
    single_err = 0
    for i in range(trials):
        rng = derive_rng(4242, i)
        truth = random_codeword(amb, rng)
        noisy = bsc_transmit(truth, 0.05, rng)
        want = truth.bit(0)
        e_boost = int(boost_decode_bit(noisy, 2, 3, 1, 0.05, seed=rng).value != want)
        restricted = restrict_to_subspace(noisy, sf.petals[0])
        e_single = int(exit_bit_map(base_code, restricted, 0.05, rng).value != want)
        boost_err += e_boost
        single_err += e_single
        diffs.append(e_single - e_boost)
    assert boost_err <= single_err
    mean = float(np.mean(diffs))
    sd = float(np.std(diffs, ddof=1)) / math.sqrt(trials)
    separated = mean > 3 * sd
    detail = (f"boost {boost_err}/{trials} vs single petal {single_err}/{trials}, "
              f"paired gap {mean:.4f} vs 3 sigma {3 * sd:.4f}")
    if separated:
        print(f"PASS criterion 7: boosting improves with separation; {detail}")
    else:
        print(f"PASS criterion 7: boosting no worse; OVERLAP REPORT: {detail}")


def test_criterion_08_reconstruction():
    code3 = RmCode(3, 1)
    hits3 = 0
    for i in range(10_000):
        rng = derive_rng(555, i)
        truth = random_codeword(code3, rng)
        noisy = bsc_transmit(truth, 0.01, rng)
        hits3 += rm_reconstruct(code3, noisy, 0.01, seed=rng).word == truth
    assert hits3 / 10_000 >= 0.99

    code4 = RmCode(4, 1)
    hits4 = 0
    for i in range(1000):
        rng = derive_rng(777, i)
        truth = random_codeword(code4, rng)
        noisy = bsc_transmit(truth, 0.01, rng)
        hits4 += rm_reconstruct_grid(code4, noisy, 0.01, c=0.5, seed=rng).word == truth
    assert hits4 / 1000 >= 0.99
    print(f"PASS criterion 8: rm_reconstruct {hits3 / 100:.2f}% on RM(3,1), "
          f"grid {hits4 / 10:.1f}% on RM(4,1)")


def test_criterion_09_weight_enumerator():
    code = RmCode(4, 2)
    weights = packed_weights(codebook(code))
    for l in (1, 2, 3):
        radius = 2 ** (4 - l)
        count = int((weights <= radius).sum())
        bound = weight_enum_log_bound(4, 2, l)
        assert math.log2(count) <= bound, (l, count, bound)
    print("PASS criterion 9: RM(4,2) ball sizes stay under the counting bound "
          "for l in {1, 2, 3}")


def test_criterion_10_converse():
    code = RmCode(2, 2)
    trials = 100_000
    ex = exit_error(code, 0.1, mode="montecarlo", trials=trials, seed=31337, threads=4)
    fu = full_bit_error(code, 0.1, mode="montecarlo", trials=trials, seed=31337, threads=4)
    acc_exit = 1.0 - ex.p_hat
    acc_full = 1.0 - fu.p_hat
    lim_exit = 5 * math.sqrt(0.5 * 0.5 / trials)
    lim_full = 5 * math.sqrt(0.9 * 0.1 / trials)
    assert abs(acc_exit - 0.5) <= lim_exit
    assert abs(acc_full - 0.9) <= lim_full
    print(f"PASS criterion 10: above capacity, exit accuracy {acc_exit:.4f} "
          f"(coin flip) and full accuracy {acc_full:.4f} (tracks 1 - eps)")


def test_criterion_11_bms_consistency():
    code = RmCode(3, 1)
    for z in range(256):
        w = Word(3, z)
        d_bsc = exit_bit_map(code, w, 0.1, 0)
        d_bms = bms_exit_bit_map(code, BmsObservation(w, (0.1,) * 8), 0)
        assert d_bsc.tie == d_bms.tie
        if not d_bsc.tie:
            assert d_bsc.value == d_bms.value

    worst_gain = -1.0
    for i in range(100):
        rng = derive_rng(2026, i)
        parts = int(rng.integers(2, 6))
        probs = rng.dirichlet(np.ones(parts))
        eps = rng.uniform(0.0, 0.5, size=parts)
        ch = BmsChannel(tuple((float(p), float(e)) for p, e in zip(probs, eps)))
        c0 = capacity(ch)
        prev = None
        for t in range(1, 7):
            cq = capacity(quantize(ch, 2 ** t))
            assert cq <= c0 + 1e-12
            if prev is not None:
                assert cq >= prev - 1e-12
            worst_gain = max(worst_gain, cq - c0)
            prev = cq
    print("PASS criterion 11: single-rate mixture decisions match the plain "
          f"decoder on all 256 patterns; quantize capacity gain <= {worst_gain:.2e} "
          "and doubling is monotone over 100 channels")


def _run_to_file(tmp_path, name, args):
    path = tmp_path / name
    code = main(args + ["--out", str(path)])
    assert code == 0
    return path.read_bytes()


def test_criterion_12_thread_determinism(tmp_path):
    runs = {
        "exit": ["exit-error", "--m", "3", "--r", "1", "--channel", "bsc:0.1",
                 "--mode", "mc", "--trials", "2000", "--seed", "7"],
        "boost": ["boost", "--m-under", "2", "--m", "3", "--m-over", "5",
                  "--r", "1", "--channel", "bsc:0.05", "--trials", "500",
                  "--seed", "6"],
        "converse": ["converse", "--m", "2", "--r", "2", "--channel", "bsc:0.1",
                     "--trials", "2000", "--seed", "8"],
    }
    for name, args in runs.items():
        outs = [
            _run_to_file(tmp_path, f"{name}-{threads}.csv", args + ["--threads", threads])
            for threads in ("1", "4", "8")
        ]
        assert outs[0] == outs[1] == outs[2], name
    print("PASS criterion 12: exit, boost, and converse Monte Carlo CSVs are "
          "byte-identical across 1, 4, and 8 threads")


def test_criterion_13_secondary_plots(tmp_path):
    sweep_dir = tmp_path / "sweep"
    sweep_dir.mkdir()
    assert main(["verify", "--out-dir", str(sweep_dir)]) == 0
    csv_path = sweep_dir / "exit_error_sweep.csv"
    rows = csv_path.read_text().strip().splitlines()
    n_points = len(rows) - 1
    assert n_points == 6
    png = tmp_path / "sweep.png"
    proc = subprocess.run(
        [sys.executable, "-m", "rmplots", "--in", str(csv_path),
         "--x", "channel_eps", "--y", "p_hat", "--group", "decoder",
         "--logy", "--out", str(png)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert png.exists() and png.stat().st_size > 0
    total = None
    for line in proc.stdout.splitlines():
        if line.startswith("total points:"):
            total = int(line.split(":")[1])
    assert total == n_points
    print(f"PASS criterion 13 [secondary]: plots rendered {total} points from "
          f"{n_points} sweep rows into a PNG")
