"""Security analysis: combinatorics, finite-size sweeps, parameter planning.

Everything here consumes the exact engines (closed forms, aligned plans,
discrimination optima) and produces flat records: per-grid-point security
reports with a pinned CSV schema, log-linear convergence fits, and the
permutation-protocol parameter planner.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import cheat, detect
from .protocols import qbc0, qbc2

CSV_HEADER = ("protocol", "n", "m", "N", "overlap", "eta",
              "pbc", "pbc_kind", "pac", "pac_kind", "stderr", "seed")

LOG_COMB_THRESHOLD = 30


@dataclass(frozen=True)
class SecurityReport:
    """One grid point of a concealment-vs-binding sweep."""

    protocol: str
    n: int | None
    m: int | None
    N: int | None
    overlap: float | None
    eta: float | None
    pbc: float
    pbc_kind: str
    pac: float
    pac_kind: str
    stderr: float
    seed: int
    samples: int = 0
    wall_time: float = 0.0

    def __post_init__(self):
        if not 0.5 - 1e-12 <= self.pbc <= 1.0 + 1e-12:
            raise ValueError("pbc must lie in [1/2, 1]")
        if not -1e-12 <= self.pac <= 1.0 + 1e-12:
            raise ValueError("pac must lie in [0, 1]")
        if self.pac_kind == "monte-carlo" and not self.stderr > 0:
            raise ValueError("Monte-Carlo reports need a positive stderr")

    def csv_row(self) -> list[str]:
        values = []
        for key in CSV_HEADER:
            v = getattr(self, key)
            values.append("" if v is None else repr(v) if isinstance(v, float)
                          else str(v))
        return values


@dataclass(frozen=True)
class PlannerResult:
    """Parameters (m, n, N) meeting an epsilon target, with achieved bounds."""

    epsilon: float
    m: int
    n: int
    N: int
    pac_bound: float
    pu_bound: float
    p0_value: float

    def __post_init__(self):
        if self.pac_bound > self.epsilon + 1e-12:
            raise ValueError("planner violated its committer bound")
        if self.pu_bound > self.epsilon + 1e-12:
            raise ValueError("planner violated its undetected-cheat bound")


def _log_comb(n: int, k: int) -> float:
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))


def _comb_ratio(parts_num, parts_den, n: int) -> float:
    """Product of binomials over product of binomials, exact below the
    log-space threshold."""
    if n <= LOG_COMB_THRESHOLD:
        num = 1
        for a, b in parts_num:
            num *= math.comb(a, b)
        den = 1
        for a, b in parts_den:
            den *= math.comb(a, b)
        return num / den
    log = sum(_log_comb(a, b) for a, b in parts_num)
    log -= sum(_log_comb(a, b) for a, b in parts_den)
    return math.exp(log)


def hypergeometric_pk(N: int, n: int, m: int, k: int) -> float:
    """P_k(N, n, m) = C(N,k) C(n-N, m-k) / C(n,m)."""
    if not (0 <= N <= n and 0 < m <= n and 0 <= k <= min(N, m)):
        raise ValueError("hypergeometric arguments out of range")
    if m - k > n - N:
        return 0.0
    return _comb_ratio([(N, k), (n - N, m - k)], [(n, m)], n)


def hypergeometric_p0(N: int, n: int, m: int) -> float:
    """P_0 in its reduced form C(n-m, N) / C(n, N)."""
    if not (0 <= N <= n and 0 < m <= n):
        raise ValueError("hypergeometric arguments out of range")
    if N > n - m:
        return 0.0
    return _comb_ratio([(n - m, N)], [(n, N)], n)


def parity_binomial(m: int, p: float) -> float:
    """Probability that m independent p-flips produce odd parity."""
    if m < 1:
        raise ValueError("need at least one trial")
    if not 0.0 <= p <= 1.0:
        raise ValueError("flip probability must lie in [0, 1]")
    return 0.5 - 0.5 * (1.0 - 2.0 * p) ** m


def parity_binomial_direct(m: int, p: float) -> float:
    """Odd-term binomial summation; oracle for the closed form."""
    return float(sum(math.comb(m, k) * p ** k * (1.0 - p) ** (m - k)
                     for k in range(1, m + 1, 2)))


def _qbc0_point(n: int, overlap: float, seed: int) -> SecurityReport:
    start = time.perf_counter()
    pbc = qbc0.qbc0_concealment(n, overlap)
    e0, e1 = qbc0.qbc0_ensembles(n, overlap)
    plan = cheat.align_ensembles(e0, e1)
    pac = cheat.cheating_probability(plan, e1)
    return SecurityReport("qbc0", n, None, None, overlap, None,
                          pbc, "exact", pac, "exact", 0.0, seed,
                          wall_time=time.perf_counter() - start)


def _qbc2_point(m: int, seed: int) -> SecurityReport:
    start = time.perf_counter()
    pa = qbc2.qbc2_pa()
    return SecurityReport("qbc2", None, m, None, None, None,
                          0.5, "exact", pa ** m, "exact", 0.0, seed,
                          wall_time=time.perf_counter() - start)


def us_ip_sweep(protocol: str, grid, overlap: float | None = None,
                seed: int = 0) -> list[SecurityReport]:
    """Exact concealment/cheating values over a parameter grid.

    For the parity protocol the grid ranges over n (sequence length,
    `overlap` required); for the permutation protocol it ranges over m
    (retained sets).  Grid points evaluate on independent workers and are
    reported in grid order.
    """
    grid = [int(g) for g in grid]
    if protocol == "qbc0":
        if overlap is None:
            raise ValueError("qbc0 sweep needs an overlap")
        jobs = [(_qbc0_point, (g, overlap, seed)) for g in grid]
    elif protocol == "qbc2":
        jobs = [(_qbc2_point, (g, seed)) for g in grid]
    else:
        raise ValueError(f"no sweep family for protocol {protocol!r}")
    with ThreadPoolExecutor(max_workers=4) as pool:
        futures = [pool.submit(fn, *args) for fn, args in jobs]
        return [f.result() for f in futures]


def sweep_fits(reports: list[SecurityReport]) -> dict:
    """Least-squares slopes of the log-transformed sweep columns.

    Fits log(pbc - 1/2) and log(pac) (or log(1 - pac) when pac approaches
    one) against the grid coordinate; single-point grids produce no fit.
    """
    if len(reports) < 2:
        return {}
    xs = np.array([r.n if r.n is not None else r.m for r in reports],
                  dtype=float)
    fits = {}

    def add_fit(name: str, ys: np.ndarray) -> None:
        mask = ys > 0
        if mask.sum() < 2:
            return
        logy = np.log(ys[mask])
        coeffs, residuals, *_ = np.polyfit(xs[mask], logy, 1, full=True)
        res = float(residuals[0]) if len(residuals) else 0.0
        fits[name] = {"slope": float(coeffs[0]),
                      "intercept": float(coeffs[1]),
                      "residual": res}

    add_fit("log_pbc_excess", np.array([r.pbc - 0.5 for r in reports]))
    pac = np.array([r.pac for r in reports])
    if pac.mean() > 0.5:
        add_fit("log_pac_deficit", 1.0 - pac)
    else:
        add_fit("log_pac", pac)
    return fits


def qbc2_planner(epsilon: float, p_a: float, p1_bar: float) -> PlannerResult:
    """Smallest (m, n, N) meeting an epsilon security target.

    m is the least power driving p_a^m below epsilon.  For each n the
    minimal N forcing the receiver's early-guess bound 1 - P_0/2 below
    1/2 + epsilon is found by bisection on the monotone P_0; n grows
    (doubling then bisection, both monotone) until the undetected-cheat
    bound p1_bar^(N-m) also falls below epsilon.
    """
    if not 0.0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    if not 0.0 < p_a < 1.0 or not 0.0 < p1_bar < 1.0:
        raise ValueError("probabilities must lie strictly in (0, 1)")
    m = max(1, math.ceil(math.log(epsilon) / math.log(p_a) - 1e-12))
    if p_a ** m > epsilon:
        m += 1

    def min_forcing_n_value(n: int) -> int:
        """Minimal N with P_0(N, n, m) <= 1 - 2 epsilon."""
        lo, hi = 1, n - m + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if hypergeometric_p0(mid, n, m) <= 1.0 - 2.0 * epsilon:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def satisfied(n: int) -> bool:
        big_n = min_forcing_n_value(n)
        return big_n > m and p1_bar ** (big_n - m) <= epsilon

    lo = m + 1
    hi = lo
    while not satisfied(hi):
        hi *= 2
        if hi > 10 ** 9:
            raise ValueError("planner target out of reach")
    while lo < hi:
        mid = (lo + hi) // 2
        if satisfied(mid):
            hi = mid
        else:
            lo = mid + 1
    n = lo
    big_n = min_forcing_n_value(n)
    return PlannerResult(epsilon, m, n, big_n, p_a ** m,
                         p1_bar ** (big_n - m),
                         hypergeometric_p0(big_n, n, m))


def p1_max_search(m: int, epsilon: float, coarse: int = 8,
                  refinements: int = 6) -> float:
    """Largest test-pass probability of a feasible uniform cheating set.

    Cheating sets are parameterized by four qubit angles (one per claimed
    name, best claimed naming taken over all 24 assignments); feasibility
    requires the receiver's bit identification from m committed qubits to
    reach 1/2 + epsilon.  Coarse grid over [0, pi)^4 followed by shrinking
    neighborhood refinement; deterministic and heuristic by construction.
    """
    if not 1 <= m <= 4:
        raise ValueError("search supported for m in [1, 4]")
    if not 0.0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    angles_ref = np.array(qbc2.ANGLES)
    claims = [np.array(p) for p in itertools.permutations(range(4))]

    def best_p1(a: np.ndarray) -> float:
        best = 0.0
        for claim in claims:
            val = float(np.prod(np.cos(angles_ref[claim] - a) ** 2))
            if val > best:
                best = val
        return best

    def feasible(a: np.ndarray) -> bool:
        return qbc2.qbc2_identification(a, m) >= 0.5 + epsilon - 1e-12

    step = math.pi / coarse
    grid = [np.array(p) for p in itertools.product(
        np.arange(coarse) * step, repeat=4)]
    best_angles, best_val = None, -1.0
    for a in grid:
        if not feasible(a):
            continue
        val = best_p1(a)
        if val > best_val:
            best_val, best_angles = val, a
    if best_angles is None:
        raise ValueError("no feasible cheating set on the search grid")
    for _ in range(refinements):
        step /= 2.0
        moved = True
        while moved:
            moved = False
            for delta in itertools.product((-step, 0.0, step), repeat=4):
                if all(d == 0.0 for d in delta):
                    continue
                cand = (best_angles + np.array(delta)) % math.pi
                if not feasible(cand):
                    continue
                val = best_p1(cand)
                if val > best_val + 1e-15:
                    best_val, best_angles = val, cand
                    moved = True
    return best_val


def write_csv(reports: list[SecurityReport], stream) -> None:
    """Write sweep rows under the pinned CSV header."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(r.csv_row())


def render_csv(reports: list[SecurityReport]) -> str:
    buf = io.StringIO()
    write_csv(reports, buf)
    return buf.getvalue()


def render_json(reports: list[SecurityReport], fits: dict | None = None,
                planner: PlannerResult | None = None) -> str:
    """JSON mirror of the CSV rows plus fit and planner metadata.

    Wall times are dropped so identical sweeps render byte-identically.
    """
    rows = []
    for r in reports:
        row = asdict(r)
        row.pop("wall_time")
        rows.append(row)
    payload = {"reports": rows}
    if fits is not None:
        payload["fits"] = fits
    if planner is not None:
        payload["planner"] = asdict(planner)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
