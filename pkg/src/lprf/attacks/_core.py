"""Machinery shared by the passive and active table-collision attacks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from joblib import Parallel, delayed

from ..encoding import DifferentialSignature
from ..field import FieldElement
from ..prf import Keystream, PrfKey, _bits_for


def sliding_windows(bits: Sequence[int], U: int) -> list[int]:
    """Every length-U window packed as an int, stream bit t at bit position t."""
    n = len(bits) - U + 1
    if n <= 0:
        return []
    top = U - 1
    w = 0
    for t in range(U):
        w |= int(bits[t]) << t
    out = [w]
    for s in range(1, n):
        w = (w >> 1) | (int(bits[s + top]) << top)
        out.append(w)
    return out


@dataclass
class WindowTable:
    """Packed U-bit windows mapped to the indices they start at."""

    window_bits: int
    entries: dict[int, list[int]] = field(default_factory=dict)
    signature: DifferentialSignature | None = None

    def add(self, window: int, index: int) -> None:
        self.entries.setdefault(window, []).append(index)

    def get(self, window: int) -> list[int]:
        return self.entries.get(window, ())

    @property
    def population(self) -> int:
        return sum(len(v) for v in self.entries.values())

    def __len__(self):
        return len(self.entries)

    def __contains__(self, window: int):
        return window in self.entries


@dataclass
class AttackReport:
    mode: str
    recovered_key: PrfKey | None
    guesses: int
    collisions_checked: int
    false_collisions: int
    elapsed: float
    window: int
    max_guesses: int
    table_population: int
    workers: int = 1
    constants: dict[str, str] = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.recovered_key is not None

    def to_dict(self, include_timing: bool = True) -> dict:
        key = None
        if self.recovered_key is not None:
            key = [list(c.coeffs) for c in self.recovered_key.coefficients]
        d = {
            "mode": self.mode,
            "success": self.success,
            "recovered_key": key,
            "guesses": self.guesses,
            "collisions_checked": self.collisions_checked,
            "false_collisions": self.false_collisions,
            "window": self.window,
            "max_guesses": self.max_guesses,
            "table_population": self.table_population,
            "workers": self.workers,
            "constants": dict(self.constants),
        }
        if include_timing:
            d["elapsed"] = self.elapsed
        return d

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)

    def to_text(self, include_timing: bool = True) -> str:
        lines = []
        for k, v in self.to_dict(include_timing).items():
            if k == "constants":
                lines.extend(f"constant.{ck}={cv}" for ck, cv in sorted(v.items()))
            elif k == "recovered_key":
                lines.append(f"recovered_key={'none' if v is None else ';'.join(','.join(map(str, c)) for c in v)}")
            else:
                lines.append(f"{k}={v}")
        return "\n".join(lines) + "\n"


@dataclass
class WorkerResult:
    key: PrfKey | None
    guesses: int
    # (guess number, verified) for every table hit inspected
    events: list[tuple[int, bool]]


class Verifier:
    """Checks a degree-1 candidate against every observed bit."""

    def __init__(self, ks: Keystream):
        self.params = ks.params
        self.queries = ks.queries()
        self.bits = ks.bits.tolist()

    def __call__(self, K: FieldElement) -> bool:
        return _bits_for(PrfKey.linear(K), self.queries, self.params) == self.bits


def run_search(worker: Callable[[np.random.Generator, int], WorkerResult],
               rng: np.random.Generator, max_guesses: int, n_jobs: int | None):
    """Run ``worker`` on ``n_jobs`` child streams and merge as a lockstep race.

    The winner is the successful worker needing the fewest guesses (ties go
    to the lowest worker id); every other worker is charged the guesses it
    would have made before the winner finished.
    """
    n = 1 if n_jobs is None else int(n_jobs)
    if n < 1:
        raise ValueError("n_jobs must be >= 1")
    children = rng.spawn(n)
    budget = -(-max_guesses // n)
    if n == 1:
        results = [worker(children[0], budget)]
    else:
        results = Parallel(n_jobs=n)(delayed(worker)(c, budget) for c in children)

    winners = [(r.guesses, i) for i, r in enumerate(results) if r.key is not None]
    if winners:
        limit, wid = min(winners)
        key = results[wid].key
    else:
        limit, key = None, None
    guesses = hits = false = 0
    for r in results:
        cap = r.guesses if limit is None else min(r.guesses, limit)
        guesses += cap
        for g, ok in r.events:
            if g <= cap:
                hits += 1
                false += not ok
    return key, guesses, hits, false, n
