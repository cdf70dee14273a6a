"""Monte Carlo simulation of the superposition-plus-binning scheme.

Codebooks are layered: cloud words u(m0) drawn i.i.d. from the U
marginal, satellites v(m0, m0p) conditionally i.i.d. given u, inputs
x(m0, m0p, m1) conditionally i.i.d. given (u, v).  The residual-message
index set is split round-robin into nu1 bins; when the conference link
is present, decoder 1 forwards the bin index of its residual estimate
and decoder 2 restricts its satellite search to that bin.

Typicality: a tuple of sequences is eps-typical for a design joint pmf
p when its joint type pi satisfies |pi(a) - p(a)| <= eps for every cell
a and pi(a) = 0 wherever p(a) = 0.  Decoders search exhaustively for a
unique typical candidate and report failure on none or several.

Error accounting follows the two error sets of the model: a trial is in
S_e when decoder 1 or the no-conference decoder 2 is wrong, and in
S'_e when additionally the conference-aided decoder 2 is wrong, so
S_e is a subset of S'_e trial by trial.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import AuxJoint, ChannelLaw
from .regions import RateTriple

__all__ = [
    "ResourceBudgetError",
    "CodeParams",
    "Codebook",
    "ErrorStats",
    "generate_codebook",
    "transmit",
    "decode1",
    "conference_map",
    "decode2_no_conf",
    "decode2_conf",
    "estimate_errors",
    "converse_witness_lower_bound",
    "GROUP_LABELS",
]

GROUP_LABELS = (
    "E(1,1,*)",
    "E(1,*,1)",
    "E(1,*,*)",
    "E(*,1,1)",
    "E(*,1,*)",
    "E(*,*,1)",
    "E(*,*,*)",
)

MAX_SYMBOLS = 1 << 26  # hard cap on stored codeword symbols


class ResourceBudgetError(RuntimeError):
    """Message counts exceed the configured enumeration budget."""


def _count_from_exponent(bits: float) -> int:
    """ceil(2**bits) with a tolerance so dyadic rates hit exact powers."""
    if bits <= 0.0:
        return 1
    if bits > 50.0:
        return 1 << math.ceil(bits - 1e-9)
    return max(int(math.ceil(2.0**bits - 1e-9)), 1)


@dataclass(frozen=True)
class CodeParams:
    """Everything needed to build and exercise one code."""

    n: int
    rates: RateTriple
    c1: float
    aux: AuxJoint
    ch: ChannelLaw
    eps: float = 0.05
    seed: int = 0
    max_total_codewords: int = 1 << 14

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("blocklength n must be >= 1")
        if not 0.0 < self.eps < 1.0:
            raise ValueError("typicality slack eps must lie in (0, 1)")
        if self.c1 < 0.0:
            raise ValueError("conference capacity must be nonnegative")
        if self.aux.x_size != self.ch.x_size:
            raise ValueError("auxiliary and channel input alphabets differ")

    @property
    def mu0(self) -> int:
        return _count_from_exponent(self.n * self.rates.r0)

    @property
    def mu0p(self) -> int:
        return _count_from_exponent(self.n * self.rates.r0p)

    @property
    def mu1(self) -> int:
        return _count_from_exponent(self.n * self.rates.r1)

    @property
    def nu1(self) -> int:
        return _count_from_exponent(self.n * self.c1)

    @property
    def total_codewords(self) -> int:
        return self.mu0 * self.mu0p * self.mu1

    def realized_rates(self) -> RateTriple:
        return RateTriple(
            math.log2(self.mu0) / self.n,
            math.log2(self.mu0p) / self.n,
            math.log2(self.mu1) / self.n,
        )

    def realized_c1(self) -> float:
        return math.log2(self.nu1) / self.n


@dataclass
class Codebook:
    """One drawn codebook plus cached decoding tables."""

    params: CodeParams
    u_words: np.ndarray  # (mu0, n)
    v_words: np.ndarray  # (mu0, mu0p, n)
    x_words: np.ndarray  # (mu0, mu0p, mu1, n)
    bin_of: np.ndarray  # (mu0p,) bin index per residual message
    nu1: int
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.x_words.shape[:3]

    def _sizes(self) -> tuple[int, int, int, int, int]:
        aux, ch = self.params.aux, self.params.ch
        return aux.u_size, aux.v_size, aux.x_size, ch.y1_size, ch.y2_size

    def _table(self, key: str):
        if key in self._cache:
            return self._cache[key]
        U, V, X, Y1, Y2 = self._sizes()
        aux, ch = self.params.aux, self.params.ch
        if key == "dec1":
            base = (
                (self.u_words[:, None, None, :] * V + self.v_words[:, :, None, :]) * X
                + self.x_words
            ).reshape(-1, self.params.n).astype(np.int32)
            p = np.einsum("uvx,xa->uvxa", aux.weights, ch.y1_given_x()).ravel()
            val = (base, Y1, p)
        elif key == "dec2":
            base = self.u_words.astype(np.int32)
            p = np.einsum("uvx,xa->ua", aux.weights, ch.y2_given_x()).ravel()
            val = (base, Y2, p)
        elif key == "dec2c":
            base = (self.u_words[:, None, :] * V + self.v_words).astype(np.int32)
            p = np.einsum("uvx,xa->uva", aux.weights, ch.y2_given_x()).ravel()
            val = (base, Y2, p)
        else:
            raise KeyError(key)
        self._cache[key] = val
        return val


# ---------------------------------------------------------------------------
# sampling helpers


def _sample_iid(rng: np.random.Generator, pmf: np.ndarray, shape) -> np.ndarray:
    cdf = np.cumsum(pmf)
    out = np.searchsorted(cdf, rng.random(shape), side="right")
    return np.minimum(out, pmf.size - 1)


def _sample_conditional(
    rng: np.random.Generator, cond: np.ndarray, idx: np.ndarray
) -> np.ndarray:
    """Draw symbol-wise from cond[idx[...]] without materializing the
    per-element cdf gather (conditioning alphabets are tiny)."""
    r = rng.random(idx.shape)
    out = np.zeros(idx.shape, dtype=np.int64)
    cdf = np.cumsum(cond, axis=1)
    for row in range(cond.shape[0]):
        m = idx == row
        if np.any(m):
            out[m] = np.minimum(
                np.searchsorted(cdf[row], r[m], side="right"), cond.shape[1] - 1
            )
    return out


def _check_budget(p: CodeParams) -> None:
    K = p.total_codewords
    if K > p.max_total_codewords:
        raise ResourceBudgetError(
            f"code has {K} codewords, budget allows {p.max_total_codewords}"
        )
    symbols = (p.mu0 + p.mu0 * p.mu0p + K) * p.n
    if symbols > MAX_SYMBOLS:
        raise ResourceBudgetError(
            f"code stores {symbols} symbols, cap is {MAX_SYMBOLS}"
        )


def generate_codebook(
    p: CodeParams, rng: np.random.Generator | None = None
) -> Codebook:
    """Draw the layered codebook; deterministic given p.seed.

    Raises ResourceBudgetError when the code would exceed the configured
    total-codeword budget or the symbol-storage cap.
    """
    _check_budget(p)
    if rng is None:
        rng = np.random.default_rng([p.seed, 2, 0])
    aux = p.aux
    u = _sample_iid(rng, aux.p_u(), (p.mu0, p.n))
    idx_v = np.broadcast_to(u[:, None, :], (p.mu0, p.mu0p, p.n))
    v = _sample_conditional(rng, aux.p_v_given_u(), idx_v)
    uv = u[:, None, :] * aux.v_size + v
    idx_x = np.broadcast_to(uv[:, :, None, :], (p.mu0, p.mu0p, p.mu1, p.n))
    x = _sample_conditional(
        rng, aux.p_x_given_uv().reshape(-1, aux.x_size), idx_x
    )
    nu1 = p.nu1
    if nu1 >= p.mu0p:
        bins = np.arange(p.mu0p)
    else:
        bins = np.arange(p.mu0p) % int(nu1)
    return Codebook(p, u, v, x, bins, nu1)


def transmit(
    cb: Codebook,
    msg: tuple[int, int, int],
    ch: ChannelLaw,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Send x(m0, m0p, m1); outputs drawn i.i.d. from P(y1,y2 | x_i)."""
    m0, m0p, m1 = msg
    mu0, mu0p, mu1 = cb.shape
    if not (0 <= m0 < mu0 and 0 <= m0p < mu0p and 0 <= m1 < mu1):
        raise ValueError(f"message {msg} out of range for shape {cb.shape}")
    x = cb.x_words[m0, m0p, m1]
    flat = ch.transition.reshape(ch.x_size, -1)
    y = _sample_conditional(rng, flat, x)
    return y // ch.y2_size, y % ch.y2_size


# ---------------------------------------------------------------------------
# typicality decoding


def _typical_rows(
    cells: np.ndarray, n_cells: int, p_flat: np.ndarray, n: int, eps: float
) -> np.ndarray:
    """Row-wise typicality of candidate cell sequences (K, n)."""
    K = cells.shape[0]
    offsets = (np.arange(K, dtype=np.int64) * n_cells)[:, None]
    flat = (offsets + cells).ravel()
    counts = np.bincount(flat, minlength=K * n_cells).reshape(K, n_cells)
    ok = np.abs(counts - n * p_flat[None, :]) <= eps * n + 1e-9
    ok &= ~((p_flat[None, :] == 0.0) & (counts > 0))
    return ok.all(axis=1)


def _typical_triples(cb: Codebook, y1: np.ndarray, eps: float) -> np.ndarray:
    base, y_card, p = cb._table("dec1")
    cells = base * y_card + y1.astype(np.int32)[None, :]
    rows = _typical_rows(cells, p.size, p, cb.params.n, eps)
    return rows.reshape(cb.shape)


def decode1(cb: Codebook, y1: np.ndarray, eps: float):
    """Unique typical (m0, m0p, m1) against the (u,v,x,y1) design law.

    Returns the triple, or None when no candidate or several candidates
    are typical.
    """
    mask = _typical_triples(cb, y1, eps)
    hits = np.argwhere(mask)
    if hits.shape[0] != 1:
        return None
    return tuple(int(i) for i in hits[0])


def conference_map(cb: Codebook, m0p_hat: int | None) -> int:
    """Bin index forwarded over the conference link.

    Decoder-1 failure (None) falls back to the first bin; the trial is
    already an error through S_e either way.
    """
    if m0p_hat is None:
        return 0
    return int(cb.bin_of[m0p_hat])


def decode2_no_conf(cb: Codebook, y2: np.ndarray, eps: float):
    """Unique typical cloud index against the (u, y2) design law."""
    base, y_card, p = cb._table("dec2")
    cells = base * y_card + y2.astype(np.int32)[None, :]
    rows = _typical_rows(cells, p.size, p, cb.params.n, eps)
    hits = np.flatnonzero(rows)
    if hits.size != 1:
        return None
    return int(hits[0])


def decode2_conf(cb: Codebook, y2: np.ndarray, bin_index: int, eps: float):
    """Unique typical (m0, m0p) with the residual index inside the bin."""
    if not 0 <= bin_index < cb.nu1:
        raise ValueError(f"bin index {bin_index} out of range")
    mu0, mu0p, _ = cb.shape
    cols = np.flatnonzero(cb.bin_of == bin_index)
    if cols.size == 0:
        return None
    base, y_card, p = cb._table("dec2c")
    sub = base[:, cols, :].reshape(-1, cb.params.n)
    cells = sub * y_card + y2.astype(np.int32)[None, :]
    rows = _typical_rows(cells, p.size, p, cb.params.n, eps)
    hits = np.flatnonzero(rows)
    if hits.size != 1:
        return None
    k = int(hits[0])
    return k // cols.size, int(cols[k % cols.size])


# ---------------------------------------------------------------------------
# error estimation


@dataclass(frozen=True)
class ErrorStats:
    trials: int
    pe_no_conf: float
    pe_conf: float
    count_s_e: int
    count_s_prime_e: int
    per_event_counts: dict[str, int]
    ci_halfwidth: float


def _group_flags(mask: np.ndarray, msg: tuple[int, int, int]) -> np.ndarray:
    """Which competing-codeword groups contain a typical triple."""
    comp = mask.copy()
    comp[msg] = False
    flags = np.zeros(len(GROUP_LABELS), dtype=bool)
    if not comp.any():
        return flags
    i0, i0p, i1 = np.nonzero(comp)
    s0, s0p, s1 = i0 == msg[0], i0p == msg[1], i1 == msg[2]
    flags[0] = np.any(s0 & s0p & ~s1)
    flags[1] = np.any(s0 & ~s0p & s1)
    flags[2] = np.any(s0 & ~s0p & ~s1)
    flags[3] = np.any(~s0 & s0p & s1)
    flags[4] = np.any(~s0 & s0p & ~s1)
    flags[5] = np.any(~s0 & ~s0p & s1)
    flags[6] = np.any(~s0 & ~s0p & ~s1)
    return flags


def _run_trial(cb: Codebook, p: CodeParams, t: int):
    rng = np.random.default_rng([p.seed, 1, t])
    msg = (
        int(rng.integers(cb.shape[0])),
        int(rng.integers(cb.shape[1])),
        int(rng.integers(cb.shape[2])),
    )
    y1, y2 = transmit(cb, msg, p.ch, rng)

    mask = _typical_triples(cb, y1, p.eps)
    hits = np.argwhere(mask)
    dec1 = tuple(int(i) for i in hits[0]) if hits.shape[0] == 1 else None
    groups = _group_flags(mask, msg)
    e10 = not bool(mask[msg])

    bin_idx = conference_map(cb, dec1[1] if dec1 is not None else None)
    dec2 = decode2_no_conf(cb, y2, p.eps)
    dec2c = decode2_conf(cb, y2, bin_idx, p.eps)

    s_e = (dec1 != msg) or (dec2 != msg[0])
    s_prime_e = s_e or (dec2c != (msg[0], msg[1]))
    return s_e, s_prime_e, e10, groups


def estimate_errors(
    p: CodeParams,
    trials: int,
    codebook_mode: str = "per_batch",
    batch_size: int = 50,
    threads: int = 1,
) -> ErrorStats:
    """Empirical error probabilities with and without the conference.

    Messages are uniform per trial; channel noise and messages use
    per-trial derived seeds and codebooks per-batch derived seeds, so
    results are identical bit for bit for any thread count.  With
    ``codebook_mode="fixed"`` one codebook serves every trial; the
    default redraws it every ``batch_size`` trials, estimating the
    random-coding average.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if codebook_mode not in ("per_batch", "fixed"):
        raise ValueError("codebook_mode must be 'per_batch' or 'fixed'")
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")

    n_batches = (trials + batch_size - 1) // batch_size
    _check_budget(p)  # fail fast before spawning workers
    fixed_cb = (
        generate_codebook(p, np.random.default_rng([p.seed, 2, 0]))
        if codebook_mode == "fixed"
        else None
    )

    def run_batch(b: int):
        cb = fixed_cb
        if cb is None:
            cb = generate_codebook(p, np.random.default_rng([p.seed, 2, b]))
        c_se = c_spe = c_e10 = 0
        c_groups = np.zeros(len(GROUP_LABELS), dtype=np.int64)
        for t in range(b * batch_size, min((b + 1) * batch_size, trials)):
            s_e, s_prime_e, e10, groups = _run_trial(cb, p, t)
            c_se += s_e
            c_spe += s_prime_e
            c_e10 += e10
            c_groups += groups
        return c_se, c_spe, c_e10, c_groups

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run_batch, range(n_batches)))
    else:
        parts = [run_batch(b) for b in range(n_batches)]

    count_se = sum(x[0] for x in parts)
    count_spe = sum(x[1] for x in parts)
    count_e10 = sum(x[2] for x in parts)
    group_counts = np.sum([x[3] for x in parts], axis=0)

    pe = count_se / trials
    pe_c = count_spe / trials
    hw = max(
        1.96 * math.sqrt(pe * (1 - pe) / trials),
        1.96 * math.sqrt(pe_c * (1 - pe_c) / trials),
    )
    per_event = {"E10": int(count_e10)}
    per_event.update(
        {lab: int(c) for lab, c in zip(GROUP_LABELS, group_counts)}
    )
    return ErrorStats(
        trials=trials,
        pe_no_conf=pe,
        pe_conf=pe_c,
        count_s_e=int(count_se),
        count_s_prime_e=int(count_spe),
        per_event_counts=per_event,
        ci_halfwidth=hw,
    )


def stats_report(p: CodeParams, stats: ErrorStats) -> dict:
    """JSON-ready simulation report with a parameter echo."""
    rr = p.realized_rates()
    return {
        "params": {
            "n": p.n,
            "rates": [p.rates.r0, p.rates.r0p, p.rates.r1],
            "realized_rates": [rr.r0, rr.r0p, rr.r1],
            "c1": p.c1,
            "realized_c1": p.realized_c1(),
            "message_counts": [p.mu0, p.mu0p, p.mu1],
            "bin_count": float(p.nu1) if p.nu1 < 1 << 53 else None,
            "bin_count_log2": math.log2(p.nu1),
            "eps": p.eps,
            "seed": p.seed,
        },
        "trials": stats.trials,
        "pe_no_conf": stats.pe_no_conf,
        "pe_conf": stats.pe_conf,
        "count_s_e": stats.count_s_e,
        "count_s_prime_e": stats.count_s_prime_e,
        "ci_halfwidth": stats.ci_halfwidth,
        "per_event_counts": stats.per_event_counts,
    }


def converse_witness_lower_bound(
    aux: AuxJoint,
    ch: ChannelLaw,
    r0: float,
    n: int,
    trials: int,
    n_competitors: int = 2048,
    eps: float = 0.05,
    seed: int = 0,
) -> tuple[float, float]:
    """Provable lower bound on the no-conference error probability at
    common-message rate r0, for blocklengths where the full codebook
    cannot be enumerated.

    The no-conference decoder errs whenever the transmitted cloud word
    is atypical with y2 or any competing cloud word is typical with y2.
    Competing words are i.i.d. from the cloud marginal and independent
    of y2, so checking a fixed number of fresh draws bounds the error
    event from below; the estimate is exact Monte Carlo for that
    sub-event.  Returns (estimate, 95%-CI halfwidth).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    bits = n * r0
    if bits <= 50 and (1 << max(math.ceil(bits - 1e-9), 0)) <= n_competitors:
        n_competitors = max(_count_from_exponent(bits) - 1, 0)
    if n_competitors < 1:
        raise ValueError("rate too small: the code has no competing words")
    p_u = aux.p_u()
    p_uy2 = np.einsum("uvx,xa->ua", aux.weights, ch.y2_given_x())
    p_flat = p_uy2.ravel()
    joint_uvx = aux.weights.ravel()
    errors = 0
    for t in range(trials):
        rng = np.random.default_rng([seed, 3, t])
        uvx = _sample_iid(rng, joint_uvx, n)
        u = uvx // (aux.v_size * aux.x_size)
        x = uvx % aux.x_size
        y = _sample_conditional(rng, ch.transition.reshape(ch.x_size, -1), x)
        y2 = y % ch.y2_size
        cells_true = (u * ch.y2_size + y2)[None, :].astype(np.int64)
        if not _typical_rows(cells_true, p_flat.size, p_flat, n, eps)[0]:
            errors += 1
            continue
        comp = _sample_iid(rng, p_u, (n_competitors, n))
        cells = comp * ch.y2_size + y2[None, :]
        if np.any(_typical_rows(cells, p_flat.size, p_flat, n, eps)):
            errors += 1
    est = errors / trials
    return est, 1.96 * math.sqrt(est * (1 - est) / trials)
