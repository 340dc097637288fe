"""Active key recovery from a chosen-query geometric keystream.

For queries ``g^i`` the degree-1 PRF factors as
``L(g^i + K) = L(K) * L(g^(i+j) + 1)`` with ``g^j = K^-1``, so the observed
stream is a (possibly complemented) shift of one keyless reference
sequence and a table of observed windows turns random reference offsets
into the shift ``j``.
"""

from __future__ import annotations

import time
from functools import partial

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..exceptions import Exhausted, OutOfRange
from ..field import FieldElement
from ..prf import GEOMETRIC, Keystream, PrfKey, keystream_geometric
from ..validation import WINDOW_FORMULA, check_keystream, check_random_state, check_window
from ._core import AttackReport, Verifier, WindowTable, WorkerResult, run_search, sliding_windows

__all__ = ["build_target_table", "reference_window", "active_recover", "ActiveKeyRecovery"]

MAX_GUESSES_FORMULA = "ceil(50 * p^r / M)"
_BATCH = 512


def default_max_guesses(order: int, M: int) -> int:
    return -(-50 * order // M)


def build_target_table(ks: Keystream, U: int) -> WindowTable:
    """Observed windows keyed by packed bits; values are 1-based exponents."""
    check_keystream(ks, GEOMETRIC)
    U = check_window(U, ks, warn_unicity=False)
    table = WindowTable(U)
    for pos, w in enumerate(sliding_windows(ks.bits, U)):
        table.add(w, pos + 1)
    return table


def reference_window(m: int, U: int, g: FieldElement) -> int:
    """Packed bits of ``L(g^(m+t) + 1)`` for ``0 <= t < U``.

    Exponents past ``p^r - 1`` wrap, which is exact since ``g`` has order
    ``p^r - 1``.
    """
    F = g.field
    if not 1 <= m <= F.order - 1:
        raise OutOfRange(f"reference exponent {m} outside [1, {F.order - 1}]")
    leg, mul = F._legendre_coeffs, F._mul_coeffs
    p = F.p
    x = F._pow_coeffs(g.coeffs, m)
    gc = g.coeffs
    w = 0
    for t in range(U):
        if leg(((x[0] + 1) % p,) + x[1:]) == -1:
            w |= 1 << t
        x = mul(x, gc)
    return w


def _active_worker(table: WindowTable, verifier: Verifier, g: FieldElement,
                   use_complement: bool, rng: np.random.Generator, budget: int) -> WorkerResult:
    F = verifier.params
    q1 = F.order - 1
    U = table.window_bits
    mask = (1 << U) - 1
    entries = table.entries
    events = []
    done = 0
    while done < budget:
        for m in rng.integers(1, F.order, size=min(_BATCH, budget - done)).tolist():
            done += 1
            w = reference_window(m, U, g)
            hits = list(entries.get(w, ()))
            if use_complement:
                hits += entries.get(w ^ mask, ())
            for i in hits:
                j = (m - i) % q1
                K = F.inv(F.pow(g, j))
                ok = verifier(K)
                events.append((done, ok))
                if ok:
                    return WorkerResult(PrfKey.linear(K), done, events)
    return WorkerResult(None, done, events)


def active_recover(ks: Keystream, U: int | None = None, rng=None,
                   max_guesses: int | None = None, n_jobs: int | None = None, *,
                   use_complement: bool = True, table: WindowTable | None = None) -> AttackReport:
    """Recover a degree-1 key from a geometric keystream.

    ``use_complement=False`` restricts lookups to the uncomplemented
    reference window, which can never recover keys that are non-squares.
    """
    t0 = time.perf_counter()
    check_keystream(ks, GEOMETRIC)
    U = check_window(U, ks)
    rng = check_random_state(rng)
    F = ks.params
    if max_guesses is None:
        max_guesses = default_max_guesses(F.order, ks.length)
    if table is None:
        table = build_target_table(ks, U)
    verifier = Verifier(ks)
    key, guesses, hits, false, n = run_search(
        partial(_active_worker, table, verifier, ks.generator, use_complement),
        rng, max_guesses, n_jobs)
    return AttackReport(
        mode="active",
        recovered_key=key,
        guesses=guesses,
        collisions_checked=hits,
        false_collisions=false,
        elapsed=time.perf_counter() - t0,
        window=U,
        max_guesses=max_guesses,
        table_population=table.population,
        workers=n,
        constants={"window": WINDOW_FORMULA, "max_guesses": MAX_GUESSES_FORMULA,
                   "complement_lookup": str(use_complement).lower()},
    )


class ActiveKeyRecovery(BaseEstimator):
    """Estimator wrapper around :func:`active_recover`.

    ``fit`` takes a geometric keystream; ``predict`` maps exponents ``i`` to
    the bits ``prf(g^i)`` under the recovered key.
    """

    def __init__(self, window=None, max_guesses=None, use_complement=True,
                 n_jobs=None, random_state=None):
        self.window = window
        self.max_guesses = max_guesses
        self.use_complement = use_complement
        self.n_jobs = n_jobs
        self.random_state = random_state

    def fit(self, X, y=None):
        ks = check_keystream(X, GEOMETRIC)
        self.window_ = check_window(self.window, ks, warn_unicity=False)
        self.table_ = build_target_table(ks, self.window_)
        self.report_ = active_recover(
            ks, self.window_, check_random_state(self.random_state), self.max_guesses,
            self.n_jobs, use_complement=self.use_complement, table=self.table_)
        self.key_ = self.report_.recovered_key
        self.generator_ = ks.generator
        return self

    def predict(self, X):
        check_is_fitted(self, "report_")
        if self.key_ is None:
            raise Exhausted(f"no key recovered in {self.report_.guesses} guesses")
        F = self.generator_.field
        X = np.asarray(X, dtype=np.int64).ravel()
        if X.size and (X.min() < 1 or X.max() > F.order - 1):
            raise OutOfRange("exponents must lie in [1, p^r - 1]")
        full = keystream_geometric(self.key_, self.generator_, int(X.max()) if X.size else 1, F)
        return full.bits[X - 1].astype(np.uint8)

    def score(self, X, y=None):
        ks = check_keystream(X, GEOMETRIC)
        pred = self.predict(np.arange(1, ks.length + 1))
        return float(np.mean(pred == ks.bits))
