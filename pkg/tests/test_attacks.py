import itertools

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from lprf import (
    ActiveKeyRecovery,
    PassiveKeyRecovery,
    PrfKey,
    active_recover,
    bucket_windows,
    build_target_table,
    find_generator,
    is_irreducible,
    keystream_counter,
    keystream_geometric,
    make_field,
    passive_recover,
    random_key,
    reference_bit,
    signature,
    signature_class_count,
)
from lprf.attacks import reference_window, select_bucket, sliding_windows
from lprf.exceptions import Exhausted, WindowTooLong
from lprf.prf import Keystream
from lprf.validation import default_window


def window_bits(w, U):
    return [(w >> t) & 1 for t in range(U)]


# -- shared machinery -------------------------------------------------------

def test_sliding_windows_packs_first_bit_low():
    bits = [1, 0, 1, 1, 0]
    assert sliding_windows(bits, 3) == [0b101, 0b110, 0b011]
    assert sliding_windows(bits, 6) == []


def test_default_window_formula():
    assert default_window(125, 64) == 7 + 6
    assert default_window(343, 64) == 9 + 6
    assert default_window(729, 64) == 10 + 6
    assert default_window(729, 10) == 10
    assert 2 ** default_window(729, 64) >= 64 * 729


# -- passive ------------------------------------------------------------------

def test_bucket_single_window(rng):
    F = make_field(3, 3)
    ks = keystream_counter(random_key(F, rng), 3, 6, F)
    buckets = bucket_windows(ks, 6)
    assert len(buckets) == 1
    assert next(iter(buckets.values())).population == 1


def test_bucket_counts_match_signature_enumeration(rng):
    F = make_field(3, 3)
    ks = keystream_counter(random_key(F, rng), 0, 20, F)
    buckets = bucket_windows(ks, 4)
    expected = {signature(n, 4, F).canonical_key for n in range(17)}
    assert set(buckets) == expected
    assert len(buckets) <= 9
    assert sum(b.population for b in buckets.values()) == 17
    for b in buckets.values():
        for w, idx in b.entries.items():
            for n in idx:
                assert signature(n, 4, F) == b.signature
                assert window_bits(w, 4) == ks.bits[n:n + 4].tolist()


def test_bucket_window_too_long(rng):
    F = make_field(3, 3)
    ks = keystream_counter(random_key(F, rng), 0, 5, F)
    with pytest.raises(WindowTooLong):
        bucket_windows(ks, 6)


@pytest.mark.parametrize("p,r,start", [(5, 3, 0), (7, 3, 11), (3, 6, 100)])
def test_max_bucket_pigeonhole(p, r, start, rng):
    F = make_field(p, r)
    M = 64
    U = default_window(F.order, M)
    ks = keystream_counter(random_key(F, rng), start, M, F)
    best = select_bucket(bucket_windows(ks, U))
    assert best.population * signature_class_count(U, F) >= M - U + 1


def test_passive_end_to_end():
    F = make_field(5, 3)
    rng = np.random.default_rng(11)
    key = random_key(F, rng)
    ks = keystream_counter(key, 0, 60, F)
    rep = passive_recover(ks, 24, rng)
    assert rep.recovered_key == key
    assert rep.mode == "passive"
    assert keystream_counter(rep.recovered_key, 0, 60, F) == ks


def test_passive_single_window_costs_about_p_to_the_r():
    F = make_field(3, 3)
    rng = np.random.default_rng(5)
    U = default_window(F.order, 10**6)
    guesses = []
    for _ in range(50):
        key = random_key(F, rng)
        ks = keystream_counter(key, int(rng.integers(0, F.order - U + 1)), U, F)
        rep = passive_recover(ks, U, rng)
        # a single window may admit several keys; any returned key must fit it
        assert rep.success
        assert keystream_counter(rep.recovered_key, ks.start, U, F) == ks
        guesses.append(rep.guesses)
    assert F.order / 5 <= np.mean(guesses) <= 5 * F.order


def test_passive_tampered_stream_exhausts():
    F = make_field(3, 3)
    ks = Keystream.from_bits(F, "counter", [1] * 20, start=0)
    # oracle: no degree-1 key reproduces twenty ones
    assert all(keystream_counter(PrfKey.linear(K), 0, 20, F) != ks for K in F.elements())
    rep = passive_recover(ks, 11, np.random.default_rng(0), max_guesses=400)
    assert not rep.success
    assert rep.guesses == 400


def test_passive_completeness_small_fields():
    for p, r, n_keys in [(5, 3, 100), (11, 2, 100), (7, 4, 10)]:
        F = make_field(p, r)
        rng = np.random.default_rng(p + r)
        for _ in range(n_keys):
            key = random_key(F, rng)
            ks = keystream_counter(key, int(rng.integers(0, F.order - 64)), 64, F)
            rep = passive_recover(ks, None, rng, max_guesses=50 * F.order)
            assert rep.recovered_key == key


def test_passive_parallel_is_deterministic(rng):
    F = make_field(7, 3)
    key = random_key(F, rng)
    ks = keystream_counter(key, 0, 64, F)
    a = passive_recover(ks, None, 99, n_jobs=2)
    b = passive_recover(ks, None, 99, n_jobs=2)
    assert a.recovered_key == key
    assert a.to_dict(include_timing=False) == b.to_dict(include_timing=False)
    assert a.workers == 2


def test_passive_estimator(rng):
    F = make_field(5, 3)
    key = random_key(F, rng)
    ks = keystream_counter(key, 5, 64, F)
    est = PassiveKeyRecovery(random_state=3)
    assert est.get_params() == {"window": None, "max_guesses": None, "n_jobs": None,
                                "random_state": 3}
    with pytest.raises(NotFittedError):
        est.predict([0])
    est.fit(ks)
    assert est.key_ == key
    assert est.window_ == 13
    assert est.table_.population == est.report_.table_population
    later = keystream_counter(key, 70, 40, F)
    assert est.score(later) == 1.0
    assert est.predict(np.arange(70, 110)).tolist() == later.bits.tolist()
    again = clone(est).fit(ks)
    assert again.report_.to_dict(False) == est.report_.to_dict(False)


def test_passive_estimator_exhausted_predict_raises():
    F = make_field(3, 3)
    ks = Keystream.from_bits(F, "counter", [1] * 20, start=0)
    est = PassiveKeyRecovery(window=11, max_guesses=50, random_state=0).fit(ks)
    assert est.key_ is None
    with pytest.raises(Exhausted):
        est.predict([1])


# -- active -------------------------------------------------------------------

@pytest.fixture(scope="module")
def F343():
    return make_field(7, 3)


def test_target_table_examples(rng):
    F = make_field(7, 2)
    g = find_generator(F, rng)
    key = random_key(F, rng)
    ks = keystream_geometric(key, g, 48, F)
    table = build_target_table(ks, 12)
    assert table.population == 37
    assert len(table) <= 37
    for w, idx in table.entries.items():
        for i in idx:
            expected = [keystream_geometric(key, g, i + 11, F).bits[i - 1 + t] for t in range(12)]
            assert window_bits(w, 12) == expected
    single = build_target_table(ks, 48)
    assert single.population == 1 and single.get(sliding_windows(ks.bits, 48)[0]) == [1]


def test_reference_window_matches_reference_bits(F343, rng):
    g = find_generator(F343, rng)
    q1 = F343.order - 1
    for m in [1, 5, q1 - 3, q1]:
        expected = [reference_bit((m + t - 1) % q1 + 1, g, F343) for t in range(16)]
        assert window_bits(reference_window(m, 16, g), 16) == expected


def test_active_end_to_end(F343):
    rng = np.random.default_rng(8)
    g = find_generator(F343, rng)
    for _ in range(10):
        key = random_key(F343, rng)
        ks = keystream_geometric(key, g, 64, F343)
        rep = active_recover(ks, 16, rng)
        assert rep.recovered_key == key


def test_active_unit_key_first_in_range_guess_wins(F343):
    g = find_generator(F343, np.random.default_rng(1))
    M, U = 64, 16
    ks = keystream_geometric(PrfKey.linear(F343.one), g, M, F343)
    seed = 1234
    child = np.random.default_rng(seed).spawn(1)[0]
    draws = child.integers(1, F343.order, size=512).tolist()
    first = next(k for k, m in enumerate(draws) if 1 <= m <= M - U + 1)
    rep = active_recover(ks, U, np.random.default_rng(seed), max_guesses=10**4)
    assert rep.recovered_key == PrfKey.linear(F343.one)
    assert rep.guesses == first + 1


def test_complement_is_needed_for_non_squares():
    F = make_field(7, 2)
    rng = np.random.default_rng(4)
    g = find_generator(F, rng)
    K = next(a for a in F.elements(nonzero=True) if F.legendre(a) == -1)
    ks = keystream_geometric(PrfKey.linear(K), g, 24, F)
    without = active_recover(ks, 12, rng, max_guesses=20 * F.order, use_complement=False)
    assert not without.success
    with_ = active_recover(ks, 12, rng, max_guesses=20 * F.order)
    assert with_.recovered_key == PrfKey.linear(K)


def test_active_with_non_default_irreducible():
    # lexicographically largest monic irreducible cubic over Z_7
    f = next(c + (1,) for c in itertools.product(range(6, -1, -1), repeat=3)
             if is_irreducible(c + (1,), 7))
    F = make_field(7, 3, f)
    assert F.irreducible != make_field(7, 3).irreducible
    rng = np.random.default_rng(2)
    g = find_generator(F, rng)
    key = random_key(F, rng)
    assert active_recover(keystream_geometric(key, g, 64, F), None, rng).recovered_key == key


def test_active_rejects_counter_stream(F343, rng):
    ks = keystream_counter(random_key(F343, rng), 0, 64, F343)
    with pytest.raises(ValueError):
        active_recover(ks)
    with pytest.raises(ValueError):
        passive_recover(keystream_geometric(random_key(F343, rng), find_generator(F343), 64, F343))


def test_active_estimator(F343, rng):
    g = find_generator(F343, rng)
    key = random_key(F343, rng)
    ks = keystream_geometric(key, g, 64, F343)
    est = ActiveKeyRecovery(random_state=0).fit(ks)
    assert est.key_ == key
    assert est.score(keystream_geometric(key, g, 300, F343)) == 1.0
    assert est.predict([1, 2, 3]).tolist() == ks.bits[:3].tolist()
    assert clone(est).get_params()["use_complement"] is True


def test_active_beats_passive_small(F343):
    rng = np.random.default_rng(77)
    g = find_generator(F343, rng)
    act, pas = [], []
    for _ in range(40):
        key = random_key(F343, rng)
        act.append(active_recover(keystream_geometric(key, g, 64, F343), None, rng).guesses)
        pas.append(passive_recover(keystream_counter(key, 0, 64, F343), None, rng).guesses)
    assert np.mean(act) < np.mean(pas)
