import pytest

import reference as ref
from rmboost import (
    ParameterError,
    RmCode,
    Word,
    bitwise_decode,
    block_ml,
    bsc_transmit,
    grid_radius,
    list_within,
    random_codeword,
    reconstruction_radius,
    rm_reconstruct,
    rm_reconstruct_grid,
)
from rmboost.seeding import derive_rng


def test_radius_formula_values():
    # floor(2^{m - c sqrt(m) log2(m) / 2} / 2), clamped to [1, n]
    assert reconstruction_radius(2, 1.0) == 1
    assert reconstruction_radius(3, 1.0) == 1
    assert reconstruction_radius(4, 1.0) == 2
    assert reconstruction_radius(1, 1.0) == 1  # log2(1) = 0, then clamp
    assert grid_radius(4) == 1  # raw value 0 clamps up to 1
    assert grid_radius(3) == 1


def test_radius_validation_and_small_c_limit():
    with pytest.raises(ParameterError):
        reconstruction_radius(2, 0.0)
    with pytest.raises(ParameterError):
        reconstruction_radius(2, -1.0)
    # c = 0.5 on m = 4: shrink is exactly 1, radius is 2^3 / 2
    assert reconstruction_radius(4, 0.5) == 4
    # heavy shrink bottoms out at the lower clamp
    assert reconstruction_radius(3, 2.0) == 1


def test_list_within_exhaustive_rm21():
    code = RmCode(2, 1)
    book = set(ref.ref_codebook(2, 1))
    cl = list_within(code, Word(2, 0), 1)
    assert [w.bits for w in cl.members] == [0]
    for center in range(16):
        for radius in (0, 1, 2, 4):
            got = {w.bits for w in list_within(code, Word(2, center), radius).members}
            want = {h for h in book if ref.popcount(h ^ center) <= radius}
            assert got == want


def test_list_within_radius_n_is_whole_codebook():
    code = RmCode(2, 1)
    cl = list_within(code, Word(2, 0b0110), 4)
    assert len(cl.members) == 8


def test_list_members_sorted_by_coefficients():
    from rmboost import mobius

    code = RmCode(2, 1)
    cl = list_within(code, Word(2, 0), 4)
    keys = [mobius(w).coeffs for w in cl.members]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_bitwise_decode_full_code_returns_input():
    code = RmCode(2, 2)
    for z in range(16):
        w = Word(2, z)
        assert bitwise_decode(code, w, 0.01, 0) == w


def test_bitwise_decode_noiseless_codeword():
    code = RmCode(3, 1)
    rng = derive_rng(41)
    for _ in range(10):
        truth = random_codeword(code, rng)
        assert bitwise_decode(code, truth, 0.01, rng) == truth


def test_bitwise_decode_matches_reference_masses():
    from fractions import Fraction

    code = RmCode(2, 1)
    book = ref.ref_codebook(2, 1)
    eps = Fraction(1, 100)
    for z in range(16):
        got = bitwise_decode(code, Word(2, z), 0.01, 0)
        for x in range(4):
            masses = [Fraction(0), Fraction(0)]
            t = eps / (1 - eps)
            for h in book:
                masses[(h >> x) & 1] += t ** ref.popcount(h ^ z)
            if masses[0] != masses[1]:
                want = 0 if masses[0] > masses[1] else 1
                assert got.bit(x) == want, (z, x)


def test_rm_reconstruct_noiseless_is_identity():
    code = RmCode(3, 1)
    rng = derive_rng(43)
    for _ in range(10):
        truth = random_codeword(code, rng)
        res = rm_reconstruct(code, truth, 0.01, seed=rng)
        assert res.word == truth
        assert not res.fallback


def test_rm_reconstruct_radius_override_validation():
    code = RmCode(3, 1)
    with pytest.raises(ParameterError):
        rm_reconstruct(code, Word(3, 0), 0.01, radius=9, seed=0)
    res = rm_reconstruct(code, Word(3, 0), 0.01, radius=8, seed=0)
    assert res.radius == 8


def test_rm_reconstruct_with_full_radius_acts_like_block_ml():
    # with the whole codebook in the list, max agreement = min distance
    code = RmCode(2, 1)
    for z in range(16):
        noisy = Word(2, z)
        res = rm_reconstruct(code, noisy, 0.1, radius=4, seed=0)
        best = min(ref.popcount(h ^ z) for h in ref.ref_codebook(2, 1))
        assert res.word.distance(noisy) == best
        ml = block_ml(code, noisy, 0.1, 0)
        assert ml.distance(noisy) == best


def test_rm_reconstruct_success_rate_rm31():
    code = RmCode(3, 1)
    hits = 0
    trials = 2000
    for i in range(trials):
        rng = derive_rng(55, i)
        truth = random_codeword(code, rng)
        noisy = bsc_transmit(truth, 0.01, rng)
        hits += rm_reconstruct(code, noisy, 0.01, seed=rng).word == truth
    assert hits / trials >= 0.985


def test_reconstruct_result_reports_effective_radius():
    code = RmCode(3, 1)
    res = rm_reconstruct(code, Word(3, 0), 0.01, seed=0)
    assert res.radius == reconstruction_radius(3, 1.0)
    assert res.list_size >= 1


def test_block_error_monotone_in_eps():
    code = RmCode(3, 1)
    rates = []
    for eps in (0.01, 0.05, 0.1):
        errs = 0
        trials = 1200
        for i in range(trials):
            rng = derive_rng(66, i)
            truth = random_codeword(code, rng)
            noisy = bsc_transmit(truth, eps, rng)
            errs += rm_reconstruct(code, noisy, eps, seed=rng).word != truth
        rates.append(errs / trials)
    assert rates[0] <= rates[1] <= rates[2]


def test_grid_block_count_validation():
    code = RmCode(2, 1)
    with pytest.raises(ParameterError):
        rm_reconstruct_grid(code, Word(2, 0), 0.01, c=0.1, seed=0)


def test_grid_single_block_recovers_single_flips():
    # c = 2 on m = 4 gives one block, so the merge keeps the noisy word and
    # the final list pass must pull any single flip back to the codeword
    code = RmCode(4, 1)
    rng = derive_rng(77)
    for _ in range(20):
        truth = random_codeword(code, rng)
        pos = int(rng.integers(0, 16))
        noisy = truth ^ Word(4, 1 << pos)
        res = rm_reconstruct_grid(code, noisy, 0.01, c=2.0, seed=rng)
        assert res.word == truth


def test_grid_noiseless_identity():
    code = RmCode(4, 1)
    rng = derive_rng(78)
    for c in (0.5, 1.0, 2.0):
        truth = random_codeword(code, rng)
        res = rm_reconstruct_grid(code, truth, 0.01, c=c, seed=rng)
        assert res.word == truth


def test_grid_success_rate_rm41_fine_partition():
    # four single-variable blocks: each slice decodes RM(3,1), and every
    # coordinate collects four votes
    code = RmCode(4, 1)
    hits = 0
    trials = 400
    for i in range(trials):
        rng = derive_rng(88, i)
        truth = random_codeword(code, rng)
        noisy = bsc_transmit(truth, 0.01, rng)
        hits += rm_reconstruct_grid(code, noisy, 0.01, c=0.5, seed=rng).word == truth
    assert hits / trials >= 0.97


def test_grid_deterministic_under_seed():
    code = RmCode(4, 1)
    truth = random_codeword(code, 5)
    noisy = bsc_transmit(truth, 0.05, 5)
    a = rm_reconstruct_grid(code, noisy, 0.05, c=0.5, seed=9)
    b = rm_reconstruct_grid(code, noisy, 0.05, c=0.5, seed=9)
    assert a.word == b.word and a.radius == b.radius
