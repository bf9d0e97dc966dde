"""Counting experiments and parameter searches: exhaustive or seeded
random scans over linear maps L (with L(e_0) = 0) for the hyperplane
modification of x^3, coset-constant searches, and deterministic random
subspace samplers.

Candidate maps are encoded as one integer: the n-1 images of a fixed
basis of the trace-zero hyperplane, packed in n-bit digits.  Random mode
draws indices with a splitmix64 generator reduced modulo the space size,
so hit lists are reproducible from the seed alone.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constructions import (
    CosetDecomposition,
    HyperplaneSpec,
    admissible_sums,
    coset_modify,
    hyperplane_modify,
    th31_criterion,
)
from .field import FieldSpec
from .vbf import VBF, LinearMap, power_function

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Counter-based splitmix64; `below` reduces by modulo."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        return self.next_u64() % bound


@dataclass(frozen=True)
class SearchReport:
    space: str
    examined: int
    hits: int
    hit_list: tuple[int, ...]
    cap: int
    seed: Optional[int]
    seconds: float
    workers: int

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "examined": self.examined,
            "hits": self.hits,
            "hit_list": list(self.hit_list),
            "cap": self.cap,
            "seed": self.seed,
            "seconds": self.seconds,
            "workers": self.workers,
        }


# -- candidate encoding ----------------------------------------------------

def t0_basis(spec: FieldSpec) -> list[int]:
    """Greedy smallest-encoding basis of the trace-zero hyperplane."""
    basis: list[int] = []
    pivots: dict[int, int] = {}
    for x in range(1, spec.size):
        if spec.trace_absolute(x):
            continue
        v = x
        while v:
            b = v.bit_length() - 1
            if b in pivots:
                v ^= pivots[b]
            else:
                pivots[b] = v
                basis.append(x)
                break
        if len(basis) == spec.n - 1:
            break
    return basis


def map_space_size(spec: FieldSpec) -> int:
    return 1 << (spec.n * (spec.n - 1))


def linear_map_from_index(spec: FieldSpec, index: int,
                          e0: Optional[int] = None) -> LinearMap:
    """Decode a candidate index into the linear map on F_{2^n} sending the
    i-th trace-zero basis vector to the i-th digit and e_0 to 0."""
    n = spec.n
    if e0 is None:
        e0 = spec.trace_one_element()
    digits = [(index >> (n * i)) & (spec.size - 1) for i in range(n - 1)]
    rows: dict[int, tuple[int, int]] = {}

    def _insert(vec: int, val: int) -> None:
        while vec:
            b = vec.bit_length() - 1
            if b in rows:
                v2, w2 = rows[b]
                vec ^= v2
                val ^= w2
            else:
                rows[b] = (vec, val)
                return

    for v, img in zip(t0_basis(spec), digits):
        _insert(v, img)
    _insert(e0, 0)

    def _eval(x: int) -> int:
        val = 0
        while x:
            b = x.bit_length() - 1
            v2, w2 = rows[b]
            x ^= v2
            val ^= w2
        return val

    return LinearMap(n, n, tuple(_eval(1 << i) for i in range(n)), spec=spec)


# -- vectorized criterion for F = x^3 --------------------------------------

class _CubeCriterion:
    """Batch evaluation of the trivial-kernel criterion for x^3 + Tr*L
    over candidate indices."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.n = spec.n
        self.e0 = spec.trace_one_element()
        self.t0 = spec.trace_zero_elements()
        self.basis = t0_basis(spec)
        cube = power_function(spec, 3)
        k = len(self.t0)
        # coordinates of each trace-zero element over the basis
        pivots: dict[int, tuple[int, int]] = {}
        for i, b in enumerate(self.basis):
            v, c = b, 1 << i
            while v:
                hb = v.bit_length() - 1
                if hb in pivots:
                    v2, c2 = pivots[hb]
                    v ^= v2
                    c ^= c2
                else:
                    pivots[hb] = (v, c)
                    break
        coords = []
        for x in self.t0:
            v, c = x, 0
            while v:
                hb = v.bit_length() - 1
                v2, c2 = pivots[hb]
                v ^= v2
                c ^= c2
            coords.append(c)
        self.coords = np.array(coords, dtype=np.int64)
        # bform targets per a: C[a_idx, x_idx] = B(x, a + e0)
        self.targets = np.array(
            [[cube.bform(x, a ^ self.e0) for x in self.t0] for a in self.t0],
            dtype=np.int64,
        )
        self.nonzero = np.array([i for i, x in enumerate(self.t0) if x], dtype=np.int64)

    def l_tables(self, indices: np.ndarray) -> np.ndarray:
        n = self.n
        out = np.zeros((indices.shape[0], len(self.t0)), dtype=np.int64)
        for i in range(n - 1):
            digit = (indices >> (n * i)) & (self.spec.size - 1)
            cols = np.nonzero((self.coords >> i) & 1)[0]
            out[:, cols] ^= digit[:, None]
        return out

    def holds(self, indices: np.ndarray) -> np.ndarray:
        ltab = self.l_tables(indices)[:, self.nonzero]
        ok = np.ones(indices.shape[0], dtype=bool)
        for a_idx in range(len(self.t0)):
            live = np.nonzero(ok)[0]
            if live.size == 0:
                break
            bad = (ltab[live] == self.targets[a_idx, self.nonzero][None, :]).any(axis=1)
            ok[live[bad]] = False
        return ok


def _eval_range(spec: FieldSpec, start: int, stop: int,
                block: int = 1 << 14) -> tuple[int, list[int]]:
    crit = _CubeCriterion(spec)
    count = 0
    hits: list[int] = []
    for lo in range(start, stop, block):
        idx = np.arange(lo, min(lo + block, stop), dtype=np.int64)
        mask = crit.holds(idx)
        count += int(mask.sum())
        hits.extend(int(v) for v in idx[mask])
    return count, hits


def _eval_chunk_worker(args) -> tuple[int, list[int]]:
    spec_fields, start, stop, cap = args
    spec = FieldSpec(*spec_fields)
    count, hits = _eval_range(spec, start, stop)
    return count, hits[:cap]


def search_tr_l(spec: FieldSpec,
                mode: str = "exhaustive",
                samples: int = 0,
                seed: Optional[int] = None,
                workers: int = 1,
                cap: int = 64,
                long_ok: bool = False,
                verify: bool = True) -> SearchReport:
    """Count linear maps L with L(e_0) = 0 making x^3 + Tr(x)L(x) APN.

    Exhaustive mode scans the whole 2^(n(n-1)) space (degree >= 6 needs
    long_ok); random mode draws `samples` seeded indices.  Hits are
    spot-checked against the direct APN test (all hits for degree <= 5,
    1 in 100 above).
    """
    total = map_space_size(spec)
    t_start = time.monotonic()
    if mode == "exhaustive":
        if spec.n >= 6 and not long_ok:
            raise ValueError(
                f"exhaustive space 2^{spec.n * (spec.n - 1)} needs the long-run opt-in"
            )
        bounds = [(total * w) // workers for w in range(workers + 1)]
        chunks = [(bounds[w], bounds[w + 1]) for w in range(workers)]
        if workers > 1:
            args = [((spec.n, spec.modulus, spec.generator), a, b, cap) for a, b in chunks]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_eval_chunk_worker, args))
        else:
            results = [_eval_range(spec, a, b) for a, b in chunks]
        hits = sum(c for c, _ in results)
        hit_list = sorted(h for _, hl in results for h in hl)[:cap]
        examined = total
        space = f"trl-exhaustive-n{spec.n}"
    elif mode == "random":
        if seed is None:
            raise ValueError("random mode needs a seed")
        rng = SplitMix64(seed)
        indices = np.array([rng.below(total) for _ in range(samples)], dtype=np.int64)
        crit = _CubeCriterion(spec)
        hits = 0
        found: set[int] = set()
        for lo in range(0, samples, 1 << 14):
            blk = indices[lo:lo + (1 << 14)]
            mask = crit.holds(blk)
            hits += int(mask.sum())
            found.update(int(v) for v in blk[mask])
        hit_list = sorted(found)[:cap]
        examined = samples
        space = f"trl-random-n{spec.n}"
    else:
        raise ValueError(f"unknown mode {mode!r}")

    if verify:
        _verify_hits(spec, hit_list, every=1 if spec.n <= 5 else 100)
    return SearchReport(
        space=space, examined=examined, hits=hits, hit_list=tuple(hit_list),
        cap=cap, seed=seed, seconds=time.monotonic() - t_start, workers=workers,
    )


def _verify_hits(spec: FieldSpec, hit_list: list[int], every: int) -> None:
    cube = power_function(spec, 3)
    for h in hit_list[::every]:
        L = linear_map_from_index(spec, h)
        if not th31_criterion(cube, L):
            raise AssertionError(f"hit {h} fails the kernel criterion")
        if not hyperplane_modify(cube, L).is_apn():
            raise AssertionError(f"hit {h} fails the direct APN test")


# -- criterion-vs-oracle cross-checks --------------------------------------

@dataclass(frozen=True)
class CrossCheckReport:
    space: str
    examined: int
    agreements: int
    criterion_hits: int
    oracle_hits: int
    seconds: float

    @property
    def agrees(self) -> bool:
        return self.agreements == self.examined

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "examined": self.examined,
            "agreements": self.agreements,
            "criterion_hits": self.criterion_hits,
            "oracle_hits": self.oracle_hits,
            "seconds": self.seconds,
        }


def _full_l_tables(spec: FieldSpec, indices: np.ndarray,
                   constrained: bool) -> np.ndarray:
    """Tables of L over the whole field for each candidate index.

    Constrained indices pack images of the trace-zero basis (L(e_0) = 0);
    unconstrained indices pack images of the standard basis in n-bit
    digits."""
    n = spec.n
    out = np.zeros((indices.shape[0], spec.size), dtype=np.int64)
    xs = np.arange(spec.size)
    if constrained:
        e0 = spec.trace_one_element()
        basis = t0_basis(spec) + [e0]
        pivots: dict[int, tuple[int, int]] = {}
        for i, b in enumerate(basis):
            v, c = b, 1 << i
            while v:
                hb = v.bit_length() - 1
                if hb in pivots:
                    v2, c2 = pivots[hb]
                    v ^= v2
                    c ^= c2
                else:
                    pivots[hb] = (v, c)
                    break
        coords = []
        for x in range(spec.size):
            v, c = x, 0
            while v:
                hb = v.bit_length() - 1
                v2, c2 = pivots[hb]
                v ^= v2
                c ^= c2
            coords.append(c)
        carr = np.array(coords, dtype=np.int64)
        for i in range(n - 1):  # the e_0 digit maps to 0
            digit = (indices >> (n * i)) & (spec.size - 1)
            cols = np.nonzero((carr >> i) & 1)[0]
            out[:, cols] ^= digit[:, None]
    else:
        for i in range(n):
            digit = (indices >> (n * i)) & (spec.size - 1)
            cols = np.nonzero((xs >> i) & 1)[0]
            out[:, cols] ^= digit[:, None]
    return out


def _batch_modify_apn(spec: FieldSpec, ltabs: np.ndarray) -> np.ndarray:
    from .vbf import is_apn_batch

    cube = np.array(power_function(spec, 3).table, dtype=np.int64)
    tr = np.array([spec.trace_absolute(x) for x in range(spec.size)], dtype=np.int64)
    gtabs = cube[None, :] ^ (ltabs * tr[None, :])
    return is_apn_batch(gtabs, spec.n)


def th31_crosscheck(spec: FieldSpec,
                    samples: Optional[int] = None,
                    seed: Optional[int] = None) -> CrossCheckReport:
    """Kernel criterion vs direct APN test for x^3 + Tr*L over constrained
    maps (L(e_0) = 0): exhaustive, or `samples` seeded random indices."""
    total = map_space_size(spec)
    t0 = time.monotonic()
    if samples is None:
        indices = np.arange(total, dtype=np.int64)
        space = f"th31-vs-ddt-exhaustive-n{spec.n}"
    else:
        if seed is None:
            raise ValueError("sampled mode needs a seed")
        rng = SplitMix64(seed)
        indices = np.array([rng.below(total) for _ in range(samples)], dtype=np.int64)
        space = f"th31-vs-ddt-random-n{spec.n}"
    crit = _CubeCriterion(spec)
    agree = chits = ohits = 0
    for lo in range(0, indices.shape[0], 1 << 13):
        blk = indices[lo:lo + (1 << 13)]
        cmask = crit.holds(blk)
        omask = _batch_modify_apn(spec, _full_l_tables(spec, blk, constrained=True))
        agree += int((cmask == omask).sum())
        chits += int(cmask.sum())
        ohits += int(omask.sum())
    return CrossCheckReport(space, int(indices.shape[0]), agree, chits, ohits,
                            time.monotonic() - t0)


def exp_sum_crosscheck(spec: FieldSpec) -> CrossCheckReport:
    """Exponential-sum criterion vs direct APN test for x^3 + Tr*L over all
    2^(n*n) linear maps; integer arithmetic throughout."""
    total = 1 << (spec.n * spec.n)
    t0 = time.monotonic()
    tr = np.array([spec.trace_absolute(x) for x in range(spec.size)], dtype=np.int64)
    # per-x constants of the two sums: y = x^2 + x, u = x^2 / y^3, v = 1 / y^3
    xs = [x for x in range(spec.size) if x not in (0, 1)]
    rows_y, rows_u, rows_v = [], [], []
    for x in xs:
        y = spec.mul(x, x) ^ x
        iy3 = spec.inv(spec.pow(y, 3))
        rows_y.append(y)
        # sign tables indexed by L(y): (-1)^Tr(u * L(y)) and (-1)^Tr(v * L(y))
        rows_u.append([1 - 2 * int(tr[spec.mul(spec.mul(spec.mul(x, x), iy3), w)])
                       for w in range(spec.size)])
        rows_v.append([1 - 2 * int(tr[spec.mul(iy3, w)]) for w in range(spec.size)])
    y_arr = np.array(rows_y)
    u_sign = np.array(rows_u, dtype=np.int64)
    v_sign = np.array(rows_v, dtype=np.int64)
    target = (1 << (spec.n - 1)) - 1
    agree = chits = ohits = 0
    for lo in range(0, total, 1 << 13):
        blk = np.arange(lo, min(lo + (1 << 13), total), dtype=np.int64)
        ltabs = _full_l_tables(spec, blk, constrained=False)
        ly = ltabs[:, y_arr]  # (B, |xs|)
        rows = np.arange(len(xs))[None, :]
        s1 = u_sign[rows, ly].sum(axis=1)
        s2 = v_sign[rows, ly].sum(axis=1)
        if (s2 & 1).any():
            raise AssertionError("second exponential sum must be even")
        cmask = (s1 - s2 // 2) == target
        omask = _batch_modify_apn(spec, ltabs)
        agree += int((cmask == omask).sum())
        chits += int(cmask.sum())
        ohits += int(omask.sum())
    return CrossCheckReport(f"expsum-vs-ddt-exhaustive-n{spec.n}", total,
                            agree, chits, ohits, time.monotonic() - t0)


# -- coset-constant search -------------------------------------------------

@dataclass(frozen=True)
class CosetConstantReport:
    admissible: frozenset[int]
    sample_tuples: tuple[tuple[int, int, int, int], ...]
    examined: int
    seconds: float

    def to_dict(self) -> dict:
        return {
            "admissible": sorted(self.admissible),
            "sample_tuples": [list(t) for t in self.sample_tuples],
            "examined": self.examined,
            "seconds": self.seconds,
        }


def search_coset_constants(F: VBF, dec: CosetDecomposition) -> CosetConstantReport:
    """Admissible four-sum values for the coset modification of F, with one
    verified constant tuple per admissible sum."""
    t0 = time.monotonic()
    adm = admissible_sums(F, dec)
    tuples = []
    for s in sorted(adm):
        consts = (0, 0, 0, s)
        if not coset_modify(F, dec, consts).is_apn():
            raise AssertionError(f"admissible sum {s} fails the direct APN test")
        tuples.append(consts)
    examined = (1 << (F.n - 2)) ** 3
    return CosetConstantReport(adm, tuple(tuples), examined, time.monotonic() - t0)


# -- subspace samplers -----------------------------------------------------

def _rref_basis(vectors: list[int]) -> Optional[tuple[int, ...]]:
    """Reduced echelon basis of the span, or None if dependent."""
    rows: list[int] = []
    for v in vectors:
        for r in rows:
            v = min(v, v ^ r)
        if v == 0:
            return None
        rows.append(v)
        rows = [min(r, r ^ v) if r != v else v for r in rows]
    return tuple(sorted(rows, reverse=True))


def _hyperplane_functional(n: int, basis: tuple[int, ...]) -> int:
    for a in range(1, 1 << n):
        if all(((a & v).bit_count() & 1) == 0 for v in basis):
            return a
    raise AssertionError("no functional annihilates the basis")  # pragma: no cover


def enumerate_subspaces(n: int, codim: int, count: int, seed: int):
    """Deterministic pseudorandom sampler of distinct codimension-1
    hyperplanes or codimension-2 coset decompositions."""
    if codim not in (1, 2):
        raise ValueError("codimension must be 1 or 2")
    dim = n - codim
    rng = SplitMix64(seed)
    seen: set[tuple[int, ...]] = set()
    out = []
    attempts = 0
    limit = max(1000, 1000 * count)
    while len(out) < count and attempts < limit:
        attempts += 1
        vecs = [1 + rng.below((1 << n) - 1) for _ in range(dim)]
        basis = _rref_basis(vecs)
        if basis is None or basis in seen:
            continue
        seen.add(basis)
        if codim == 1:
            out.append(HyperplaneSpec(n, _hyperplane_functional(n, basis), 0))
        else:
            out.append(CosetDecomposition.from_basis(n, basis))
    return out
