"""Passive key recovery from a counter-mode keystream.

Windows are grouped by their differential signature; inside one group every
window reads ``L(Z + delta_i)`` for the shared deltas and an unknown
``Z = X_n + K``, so a single table answers random guesses of ``Z``.
"""

from __future__ import annotations

import time
from functools import partial

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..encoding import encode_counter, signature
from ..exceptions import Exhausted, OutOfRange
from ..prf import COUNTER, Keystream, PrfKey, keystream_counter
from ..validation import WINDOW_FORMULA, check_keystream, check_random_state, check_window
from ._core import AttackReport, Verifier, WindowTable, WorkerResult, run_search, sliding_windows

__all__ = ["bucket_windows", "select_bucket", "passive_recover", "PassiveKeyRecovery"]

MAX_GUESSES_FORMULA = "50 * p^r"
_BATCH = 512


def default_max_guesses(order: int) -> int:
    return 50 * order


def bucket_windows(ks: Keystream, U: int) -> dict[bytes, WindowTable]:
    """Partition the ``M - U + 1`` windows of ``ks`` by signature."""
    check_keystream(ks, COUNTER)
    U = check_window(U, ks, warn_unicity=False)
    F = ks.params
    buckets: dict[bytes, WindowTable] = {}
    for pos, w in enumerate(sliding_windows(ks.bits, U)):
        n = ks.start + pos
        sig = signature(n, U, F)
        table = buckets.get(sig.canonical_key)
        if table is None:
            table = buckets[sig.canonical_key] = WindowTable(U, signature=sig)
        table.add(w, n)
    return buckets


def select_bucket(buckets: dict[bytes, WindowTable]) -> WindowTable:
    """Most populated bucket; ties go to the lowest canonical key."""
    best = min(buckets, key=lambda k: (-buckets[k].population, k))
    return buckets[best]


def _passive_worker(table: WindowTable, verifier: Verifier, rng: np.random.Generator,
                    budget: int) -> WorkerResult:
    F = verifier.params
    p, order = F.p, F.order
    leg = F._legendre_coeffs
    deltas = [d.coeffs for d in table.signature.deltas]
    entries = table.entries
    events = []
    done = 0
    while done < budget:
        for z in rng.integers(0, order, size=min(_BATCH, budget - done)).tolist():
            done += 1
            Z = F.from_int(z).coeffs
            w = 0
            for t, d in enumerate(deltas):
                if leg(tuple((a + b) % p for a, b in zip(Z, d))) == -1:
                    w |= 1 << t
            hits = entries.get(w)
            if not hits:
                continue
            for n in hits:
                K = F.from_int(z) - encode_counter(n, F)
                ok = verifier(K)
                events.append((done, ok))
                if ok:
                    return WorkerResult(PrfKey.linear(K), done, events)
    return WorkerResult(None, done, events)


def passive_recover(ks: Keystream, U: int | None = None, rng=None,
                    max_guesses: int | None = None, n_jobs: int | None = None, *,
                    buckets: dict[bytes, WindowTable] | None = None) -> AttackReport:
    """Recover a degree-1 key from ``ks`` by signature bucketing.

    Returns a report whose ``recovered_key`` is ``None`` when the guess
    budget runs out.
    """
    t0 = time.perf_counter()
    check_keystream(ks, COUNTER)
    U = check_window(U, ks)
    rng = check_random_state(rng)
    F = ks.params
    if max_guesses is None:
        max_guesses = default_max_guesses(F.order)
    table = select_bucket(buckets if buckets is not None else bucket_windows(ks, U))
    verifier = Verifier(ks)
    key, guesses, hits, false, n = run_search(
        partial(_passive_worker, table, verifier), rng, max_guesses, n_jobs)
    return AttackReport(
        mode="passive",
        recovered_key=key,
        guesses=guesses,
        collisions_checked=hits,
        false_collisions=false,
        elapsed=time.perf_counter() - t0,
        window=U,
        max_guesses=max_guesses,
        table_population=table.population,
        workers=n,
        constants={"window": WINDOW_FORMULA, "max_guesses": MAX_GUESSES_FORMULA},
    )


class PassiveKeyRecovery(BaseEstimator):
    """Estimator wrapper: ``fit`` on an observed counter keystream.

    Parameters
    ----------
    window : int or None
        Unicity window U. ``None`` uses ``ceil(log2 p^r) + 6`` clamped to M.
    max_guesses : int or None
        Guess budget; ``None`` means ``50 * p^r``.
    n_jobs : int or None
        Guess-loop workers.
    random_state : int, Generator or None

    Attributes
    ----------
    key_ : PrfKey or None
    report_ : AttackReport
    table_ : WindowTable
        The bucket the search ran against.
    """

    def __init__(self, window=None, max_guesses=None, n_jobs=None, random_state=None):
        self.window = window
        self.max_guesses = max_guesses
        self.n_jobs = n_jobs
        self.random_state = random_state

    def fit(self, X, y=None):
        ks = check_keystream(X, COUNTER)
        self.window_ = check_window(self.window, ks, warn_unicity=False)
        self.buckets_ = bucket_windows(ks, self.window_)
        self.table_ = select_bucket(self.buckets_)
        self.report_ = passive_recover(ks, self.window_, check_random_state(self.random_state),
                                       self.max_guesses, self.n_jobs, buckets=self.buckets_)
        self.key_ = self.report_.recovered_key
        self.params_ = ks.params
        return self

    def _key(self) -> PrfKey:
        check_is_fitted(self, "report_")
        if self.key_ is None:
            raise Exhausted(f"no key recovered in {self.report_.guesses} guesses")
        return self.key_

    def predict(self, X):
        """Predicted keystream bits for counter values ``X``."""
        key = self._key()
        X = np.asarray(X, dtype=np.int64).ravel()
        if X.size and (X.min() < 0 or X.max() >= self.params_.order):
            raise OutOfRange("counter values must lie in [0, p^r)")
        out = [keystream_counter(key, int(n), 1, self.params_).bits[0] for n in X]
        return np.asarray(out, dtype=np.uint8)

    def score(self, X, y=None):
        """Fraction of the bits of keystream ``X`` reproduced by ``key_``."""
        ks = check_keystream(X, COUNTER)
        pred = self.predict(np.arange(ks.start, ks.start + ks.length))
        return float(np.mean(pred == ks.bits))
