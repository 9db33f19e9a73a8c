"""Exhaustive brute-force probabilities on small windows.

Ground truth for everything else in the package: a window of n sites is
integrated exactly by conditioning on which sites attempt before t (binomial
weight t^k (1-t)^(n-k) per subset) and averaging over the k! equally likely
deposition orders of the attempting subset.  Each order is replayed with the
plain blocking rule on a free-boundary window.  Nothing here shares code with
the analytic series, so agreement is evidence, not tautology.

Enumeration order is fixed for reproducible failure reports: subsets by size
then lexicographic, orders by lexicographic rank.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .errors import ResourceLimitError

__all__ = [
    "MAX_WINDOW",
    "OCCUPIED",
    "VACANT",
    "ATTEMPTED",
    "NOT_ATTEMPTED",
    "PatternSpec",
    "deposit_sequence",
    "exact_pattern_prob",
    "exact_center_density",
    "exact_gamma",
    "window_truncation_bound",
]

# Enumeration cost is sum_k C(n,k) k!, i.e. ~9.9e5 at n=9 and ~9.9e6 at n=10;
# anything larger is refused outright.
MAX_WINDOW = 10

OCCUPIED = "occupied"
VACANT = "vacant"
ATTEMPTED = "attempted"
NOT_ATTEMPTED = "not-attempted"

_STATE_ATOMS = (OCCUPIED, VACANT)
_ATTEMPT_ATOMS = (ATTEMPTED, NOT_ATTEMPTED)


@dataclass(frozen=True)
class PatternSpec:
    """Per-site constraints for a joint-probability query.

    ``constraints`` holds (site, atom) pairs with atoms drawn from
    ``occupied``/``vacant`` (final state) and ``attempted``/``not-attempted``
    (whether the site's time falls below the threshold).  A site may carry at
    most one atom of each kind.
    """

    constraints: tuple[tuple[int, str], ...]

    def __init__(self, constraints) -> None:
        object.__setattr__(
            self, "constraints", tuple((int(site), str(atom)) for site, atom in constraints)
        )
        seen: set[tuple[int, str]] = set()
        for site, atom in self.constraints:
            if atom not in _STATE_ATOMS and atom not in _ATTEMPT_ATOMS:
                raise ValueError(f"unknown pattern atom {atom!r}")
            kind = "state" if atom in _STATE_ATOMS else "attempt"
            if (site, kind) in seen:
                raise ValueError(f"site {site} carries more than one {kind} atom")
            seen.add((site, kind))

    def sites(self) -> tuple[int, ...]:
        return tuple(site for site, _ in self.constraints)


@lru_cache(maxsize=None)
def _perm_table(k: int) -> np.ndarray:
    """All permutations of range(k) in lexicographic order, shape (k!, k)."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int8)
    sub = _perm_table(k - 1)
    blocks = []
    for lead in range(k):
        rest = sub + (sub >= lead)  # relabel onto range(k) minus lead
        block = np.empty((sub.shape[0], k), dtype=np.int8)
        block[:, 0] = lead
        block[:, 1:] = rest
        blocks.append(block)
    return np.ascontiguousarray(np.concatenate(blocks, axis=0))


@njit(cache=True, nogil=True)
def _deposit_orders(orders, n, out):
    """Replay each row of site indices as a deposition order (free window)."""
    rows, k = orders.shape
    for r in range(rows):
        for c in range(k):
            s = orders[r, c]
            if (s == 0 or out[r, s - 1] == 0) and (s == n - 1 or out[r, s + 1] == 0):
                out[r, s] = 1


def deposit_sequence(order, n: int) -> np.ndarray:
    """Final occupancy after attempting the given sites in the given order.

    This is exactly the routine the enumerator uses internally, exposed so
    it can be cross-checked against the lattice fillers.
    """
    arr = np.asarray(order, dtype=np.int8).reshape(1, -1)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ValueError("order contains sites outside the window")
    out = np.zeros((1, n), dtype=np.uint8)
    _deposit_orders(arr, n, out)
    return out[0]


def _split_pattern(n: int, pattern: PatternSpec):
    occupied, vacant, attempted, not_attempted = [], [], [], []
    target = {OCCUPIED: occupied, VACANT: vacant, ATTEMPTED: attempted, NOT_ATTEMPTED: not_attempted}
    for site, atom in pattern.constraints:
        if not 0 <= site < n:
            raise ValueError(f"pattern site {site} outside window of {n} sites")
        target[atom].append(site)
    return occupied, vacant, attempted, not_attempted


def exact_pattern_prob(n: int, t: float, pattern: PatternSpec) -> float:
    """Exact probability of ``pattern`` on an n-site free window at time t."""
    n = int(n)
    if n < 1:
        raise ValueError("window must have at least one site")
    if n > MAX_WINDOW:
        raise ResourceLimitError(f"window of {n} sites exceeds the enumeration guard ({MAX_WINDOW})")
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"time must lie in [0, 1], got {t!r}")
    occupied, vacant, attempted, not_attempted = _split_pattern(n, pattern)
    # occupied implies attempted, so membership requirements collapse to:
    must_attempt = set(occupied) | set(attempted)
    must_skip = set(not_attempted)
    if must_attempt & must_skip:
        return 0.0

    contributions = []
    for k in range(n + 1):
        weight = t**k * (1.0 - t) ** (n - k)
        if weight == 0.0:
            continue
        perms = _perm_table(k)
        n_orders = perms.shape[0]
        for subset in itertools.combinations(range(n), k):
            chosen = set(subset)
            if not must_attempt <= chosen or chosen & must_skip:
                continue
            subset_arr = np.asarray(subset, dtype=np.int8)
            orders = np.ascontiguousarray(subset_arr[perms]) if k else perms
            occ = np.zeros((n_orders, n), dtype=np.uint8)
            _deposit_orders(orders, n, occ)
            match = np.ones(n_orders, dtype=bool)
            for site in occupied:
                match &= occ[:, site] == 1
            for site in vacant:
                match &= occ[:, site] == 0
            count = int(np.count_nonzero(match))
            if count:
                contributions.append(weight * count / math.factorial(k))
    return math.fsum(contributions)


def window_truncation_bound(radius: int, t: float) -> float:
    """Error bound for replacing the infinite lattice by a window with
    ``radius`` spare sites: influence must ride a one-sided strict descent
    chain through the whole margin, so it costs at most 2 t^(r+1) / (r+1)!."""
    r = int(radius)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return 2.0 * t ** (r + 1) / math.factorial(r + 1)


def exact_center_density(radius: int, t: float) -> float:
    """Occupation probability of the center of a (2*radius+1)-site window.

    Approximates the infinite-lattice density to within
    ``window_truncation_bound(radius, t)``.
    """
    radius = int(radius)
    if radius < 1:
        raise ValueError("radius must be positive")
    n = 2 * radius + 1
    return exact_pattern_prob(n, t, PatternSpec([(radius, OCCUPIED)]))


def exact_gamma(radius: int, s: int, t: float) -> float:
    """Window estimate of P(sites -1, 0 vacant and site s occupied).

    The window spans lattice sites -1-radius .. s+radius; the result differs
    from the infinite-lattice value by at most the window truncation bound.
    """
    radius = int(radius)
    if radius < 1:
        raise ValueError("radius must be positive")
    s = int(s)
    if s < 2 or s % 2:
        raise ValueError("separation must be a positive even integer")
    n = s + 2 + 2 * radius
    offset = 1 + radius  # lattice site x sits at window index x + offset
    pattern = PatternSpec(
        [(offset - 1, VACANT), (offset, VACANT), (offset + s, OCCUPIED)]
    )
    return exact_pattern_prob(n, t, pattern)
