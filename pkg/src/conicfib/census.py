"""Brute-force census of everywhere locally soluble fibres."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _kernel
from .arith import primes_upto, spf_sieve
from .errors import CensusError
from .f2res import build_residue_data, generator
from .localdens import UNITS, Prediction, leading_constant, stratum_constants
from .qlocal import PlaceRef, hilbert_symbol, kronecker_symbol

MAX_STRATIFY_VARS = 5
MAX_BOX = 10**10
MAX_REDEI_BOUND = 500


@dataclass
class CensusRequest:
    fam: object
    bound: int
    mode: str | None = None
    stratify: bool = False
    threads: int | None = None
    sample: float | None = None
    seed: int | None = None
    primes_bound: int = 10**5

    def __post_init__(self):
        self.mode = self.mode or self.fam.mode
        if self.bound < 1:
            raise CensusError("bound must be positive")
        if self.mode not in ("affine", "projective", "squarefree"):
            raise CensusError(f"unknown mode {self.mode!r}")
        if self.sample is not None and not 0 < self.sample <= 1:
            raise CensusError("sample rate must lie in (0, 1]")
        exhaustive = self.sample is None or self.sample >= 1
        if exhaustive and (2 * self.bound) ** self.fam.n > MAX_BOX:
            raise CensusError("box too large for exhaustive counting; pass a sample rate")
        if self.stratify and self.fam.n > MAX_STRATIFY_VARS:
            raise CensusError(f"stratified counts need n <= {MAX_STRATIFY_VARS}")


@dataclass
class CensusResult:
    family_digest: str
    mode: str
    bound: int
    total: float
    skipped_degenerate: int
    predicted: float | None = None
    ratio: float | None = None
    per_stratum: dict | None = None
    seed: int | None = None
    wall_time_ms: float = 0.0
    vectors: int = 0
    extra: dict = field(default_factory=dict)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "family_digest": self.family_digest,
            "mode": self.mode,
            "bound": self.bound,
            "total": self.total,
            "skipped_degenerate": self.skipped_degenerate,
        }
        if self.per_stratum is not None:
            out["per_stratum"] = self.per_stratum
        out["predicted"] = self.predicted
        out["ratio"] = self.ratio
        if self.seed is not None:
            out["seed"] = self.seed
        if timing:
            out["wall_time_ms"] = self.wall_time_ms
        out.update(self.extra)
        return out


def _squarefree_mask(limit: int) -> np.ndarray:
    ok = np.ones(limit + 1, dtype=bool)
    for p in range(2, int(limit ** 0.5) + 1):
        ok[p * p :: p * p] = False
    return ok


def coordinate_values(bound: int, squarefree: bool) -> np.ndarray:
    pos = np.arange(1, bound + 1, dtype=np.int64)
    if squarefree:
        pos = pos[_squarefree_mask(bound)[1:]]
    return np.concatenate([-pos[::-1], pos])


@dataclass
class _Tables:
    vals: np.ndarray
    v2: np.ndarray
    odd8: np.ndarray
    neg: np.ndarray
    pf_ptr: np.ndarray
    pf_p: np.ndarray
    pf_par: np.ndarray
    pf_chi: np.ndarray
    qoff: np.ndarray
    chitab: np.ndarray
    gtab: np.ndarray
    cm: np.ndarray
    side: int

    def args(self, n, m):
        return (n, m, self.vals, self.v2, self.odd8, self.neg, self.pf_ptr, self.pf_p,
                self.pf_par, self.pf_chi, self.qoff, self.chitab, self.gtab, self.cm, self.side)


def _legendre_table(primes) -> tuple[np.ndarray, np.ndarray]:
    top = int(primes[-1]) if len(primes) else 2
    qoff = np.zeros(top + 1, dtype=np.int64)
    chunks = []
    pos = 0
    for p in primes:
        p = int(p)
        row = -np.ones(p, dtype=np.int64)
        row[0] = 0
        row[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
        qoff[p] = pos
        pos += p
        chunks.append(row)
    chitab = np.concatenate(chunks) if chunks else np.zeros(1, dtype=np.int64)
    return qoff, chitab


def build_tables(fam, vals: np.ndarray) -> _Tables:
    top = int(np.abs(vals).max())
    spf = spf_sieve(top)
    primes = primes_upto(top)
    primes = primes[primes > 2]
    qoff, chitab = _legendre_table(primes)
    nv = len(vals)
    v2 = np.zeros(nv, np.int64)
    odd8 = np.zeros(nv, np.int64)
    neg = (vals < 0).astype(np.int64)
    ptr = [0]
    fp, fpar, fchi = [], [], []
    for k, x in enumerate(vals.tolist()):
        a = abs(x)
        e = 0
        while a % 2 == 0:
            a //= 2
            e += 1
        v2[k] = e
        odd8[k] = a % 8
        rest = a
        while rest > 1:
            p = int(spf[rest])
            ep = 0
            while rest % p == 0:
                rest //= p
                ep += 1
            unit = x
            for _ in range(ep):
                unit //= p
            fp.append(p)
            fpar.append(ep & 1)
            fchi.append(kronecker_symbol(unit, p))
        ptr.append(len(fp))
    res_n = fam.n
    gtab = np.zeros((fam.m, 1 << res_n), dtype=np.int64)
    for c in range(fam.m):
        for S in range(1 << res_n):
            gtab[c, S] = generator(fam, c, S << 1)
    cm = np.array(fam.conics, dtype=np.int64).reshape(fam.m, 3)
    return _Tables(
        vals, v2, odd8, neg,
        np.array(ptr, np.int64), np.array(fp, np.int64), np.array(fpar, np.int64),
        np.array(fchi, np.int64), qoff, chitab, gtab, cm,
        1 if fam.side == "redei" else 0,
    )


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("CENSUS_THREADS", "0") or 0) or (os.cpu_count() or 1)
    if threads < 1:
        raise CensusError("threads must be positive")
    return threads


def _run_box(tables: _Tables, n: int, m: int, threads: int, stratify: bool):
    nv = len(tables.vals)
    nblocks = min(nv, max(threads * 4, 1))
    edges = np.linspace(0, nv, nblocks + 1).astype(np.int64)
    hsize = 1 << (4 * n) if stratify else 1
    args = tables.args(n, m)

    def work(b):
        hist = np.zeros(hsize, np.int64)
        tot = _kernel.count_block(int(edges[b]), int(edges[b + 1]), *args, hist, stratify)
        return tot, hist

    if threads == 1:
        parts = [work(b) for b in range(nblocks)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, range(nblocks)))
    total = sum(t for t, _ in parts)
    hist = sum((h for _, h in parts), np.zeros(hsize, np.int64))
    return total, hist


def _run_sample(tables: _Tables, n: int, m: int, rate: float, seed: int, stratify: bool):
    nv = len(tables.vals)
    size = nv**n
    k = max(1, math.ceil(rate * size))
    rng = np.random.default_rng(seed)
    points = rng.integers(0, nv, size=(k, n), dtype=np.int64)
    hsize = 1 << (4 * n) if stratify else 1
    hist = np.zeros(hsize, np.int64)
    hits = _kernel.count_points(points, *tables.args(n, m), hist, stratify)
    scale = size / k
    return hits * scale, hist * scale


def decode_stratum(key: int, n: int) -> tuple:
    s, lam, u = [], [], []
    for k in range(n):
        cell = key >> (4 * k) & 15
        s.append(-1 if cell & 1 else 1)
        lam.append(cell >> 1 & 1)
        u.append({0: 1, 1: 3, 2: -3, 3: -1}[cell >> 2])
    return tuple(s), tuple(u), tuple(lam)


def stratum_label(s, u, lam) -> str:
    return "s=" + ",".join(map(str, s)) + ";u=" + ",".join(map(str, u)) + ";lam=" + ",".join(map(str, lam))


def count(req: CensusRequest, prediction: Prediction | None = None) -> CensusResult:
    start = time.perf_counter()
    fam = req.fam
    n, m = fam.n, fam.m
    vals = coordinate_values(req.bound, req.mode == "squarefree" or fam.mode == "squarefree")
    tables = build_tables(fam, vals)
    threads = resolve_threads(req.threads)
    seed = None
    if req.sample is not None and req.sample < 1:
        seed = req.seed if req.seed is not None else int(np.random.SeedSequence().entropy % (1 << 32))
        total, hist = _run_sample(tables, n, m, req.sample, seed, req.stratify)
    else:
        total, hist = _run_box(tables, n, m, threads, req.stratify)
    nv = len(vals)
    skipped = (nv + 1) ** n - nv**n
    if req.mode == "projective":
        total = total / 2
    if isinstance(total, (np.integer,)) or float(total).is_integer():
        total = int(total)
    per = None
    if req.stratify:
        per = {}
        const = stratum_constants(fam, req.mode, req.primes_bound)
        scale = float(req.bound) ** n / math.log(req.bound) ** float(build_residue_data(fam).delta) if req.bound > 1 else None
        for key in np.nonzero(hist)[0]:
            s, u, lam = decode_stratum(int(key), n)
            c = const.get((s, u, lam), 0.0)
            per[stratum_label(s, u, lam)] = {
                "count": float(hist[key]) if seed is not None else int(hist[key]),
                "predicted": c * scale if scale else None,
            }
    predicted = ratio = None
    if req.bound > 1:
        if prediction is None:
            prediction = leading_constant(fam, req.mode, req.primes_bound)
        predicted = prediction.main_term(req.bound)
        ratio = total / predicted if predicted else None
    wall = (time.perf_counter() - start) * 1000
    return CensusResult(fam.digest(), req.mode, req.bound, total, skipped, predicted, ratio,
                        per, seed, wall, nv**n)


def fibre_counted(fam, t) -> bool:
    """Run the compiled test on a single fibre (coordinates within the table range)."""
    bound = max(abs(x) for x in t)
    vals = coordinate_values(bound, False)
    tables = build_tables(fam, vals)
    pos = {int(v): i for i, v in enumerate(vals)}
    idx = np.array([pos[int(x)] for x in t], np.int64)
    chis = np.zeros(fam.n + 1, np.int64)
    return bool(_kernel.fibre_ok(idx, *tables.args(fam.n, fam.m), chis))


def fibres_counted(fam, points, bound: int) -> np.ndarray:
    """Vectorised form of :func:`fibre_counted` for many points with |t_i| <= bound."""
    vals = coordinate_values(bound, False)
    tables = build_tables(fam, vals)
    pts = np.asarray(points, dtype=np.int64)
    idx = np.where(pts < 0, pts + bound, pts + bound - 1)
    out = np.zeros(len(pts), dtype=bool)
    chis = np.zeros(fam.n + 1, np.int64)
    args = tables.args(fam.n, fam.m)
    for r in range(len(pts)):
        out[r] = _kernel.fibre_ok(idx[r], *args, chis)
    return out


# Redei triples


def _disc(a: int) -> int:
    return a if a % 4 == 1 else 4 * a


@dataclass
class RedeiResult:
    bound: int
    total: int
    predicted: float | None
    ratio: float | None
    by_pattern: dict
    wall_time_ms: float

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "bound": self.bound,
            "total": self.total,
            "predicted": self.predicted,
            "ratio": self.ratio,
            "by_pattern": self.by_pattern,
        }
        if timing:
            out["wall_time_ms"] = self.wall_time_ms
        return out


def redei_pair_matrix(vals) -> np.ndarray:
    """ok[i, j] iff (a_i, a_j)_v = 1 at every place v."""
    nv = len(vals)
    top = int(max(abs(int(x)) for x in vals))
    spf = spf_sieve(max(top, 2))

    def odd_primes(x):
        x = abs(x)
        out = set()
        while x > 1:
            p = int(spf[x])
            if p != 2:
                out.add(p)
            x //= p
        return out

    plist = [odd_primes(int(x)) for x in vals]
    ok = np.ones((nv, nv), dtype=bool)
    real, two = PlaceRef(0), PlaceRef(2)
    for i in range(nv):
        a = int(vals[i])
        for j in range(i, nv):
            b = int(vals[j])
            good = hilbert_symbol(a, b, real) == 1 and hilbert_symbol(a, b, two) == 1
            if good:
                for p in plist[i] | plist[j]:
                    if hilbert_symbol(a, b, PlaceRef(p)) != 1:
                        good = False
                        break
            ok[i, j] = ok[j, i] = good
    return ok


def redei_count(B: int, primes_bound: int = 10**5, predict: bool = True) -> RedeiResult:
    """Count triples of nonzero squarefree integers with |a|,|b|,|c| <= B,
    pairwise trivial Hilbert symbols, coprime discriminants and one entry
    congruent to 1 mod 8."""
    if not 1 <= B <= MAX_REDEI_BOUND:
        raise CensusError(f"bound must lie in 1..{MAX_REDEI_BOUND}")
    start = time.perf_counter()
    vals = coordinate_values(B, True)
    ok = redei_pair_matrix(vals)
    disc = np.array([_disc(int(x)) for x in vals], dtype=np.int64)
    one8 = (vals % 8) == 1
    total = 0
    patterns = {}
    for i in range(len(vals)):
        mask = ok[i][:, None] & ok[i][None, :] & ok
        g = np.gcd(np.gcd(disc[i], disc[:, None]), disc[None, :])
        mask &= g == 1
        e_a = bool(one8[i])
        for e_b, e_c in product((False, True), repeat=2):
            if not (e_a or e_b or e_c):
                continue
            sel = mask & (one8[:, None] == e_b) & (one8[None, :] == e_c)
            c = int(sel.sum())
            if c:
                key = "".join("1" if e else "0" for e in (e_a, e_b, e_c))
                patterns[key] = patterns.get(key, 0) + c
                total += c
    predicted = ratio = None
    if predict and B > 1:
        from .family import builtin

        pred = leading_constant(builtin("redei"), "squarefree", primes_bound)
        predicted = pred.main_term(B)
        ratio = total / predicted
    wall = (time.perf_counter() - start) * 1000
    return RedeiResult(B, total, predicted, ratio, dict(sorted(patterns.items())), wall)


def report(req: CensusRequest, sweep) -> list[dict]:
    """Counts over several bounds with a trend column ("toward"/"away" from ratio 1)."""
    rows = []
    prediction = None
    prev = None
    for bound in sweep:
        sub = CensusRequest(req.fam, bound, req.mode, False, req.threads, req.sample,
                            req.seed, req.primes_bound)
        if prediction is None and bound > 1:
            prediction = leading_constant(req.fam, sub.mode, req.primes_bound)
        res = count(sub, prediction)
        trend = "-"
        if prev is not None and res.ratio is not None:
            trend = "toward" if abs(res.ratio - 1) <= abs(prev - 1) else "away"
        rows.append({"bound": bound, "observed": res.total, "predicted": res.predicted,
                     "ratio": res.ratio, "trend": trend})
        prev = res.ratio
    return rows


def redei_report(sweep, primes_bound: int = 10**5) -> list[dict]:
    rows = []
    prev = None
    for B in sweep:
        res = redei_count(B, primes_bound)
        trend = "-"
        if prev is not None and res.ratio is not None:
            trend = "toward" if abs(res.ratio - 1) <= abs(prev - 1) else "away"
        rows.append({"bound": B, "observed": res.total, "predicted": res.predicted,
                     "ratio": res.ratio, "trend": trend})
        prev = res.ratio
    return rows
