"""(n,m)-functions as full lookup tables, plus their differential and
spectral analysis: DDT and the APN test, Walsh spectra, algebraic degree,
the symmetric form B_F, the four-sum value sets D_F / D_F*, and linear
projections with the kernel-intersection APN criterion.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .field import FieldSpec


@dataclass(frozen=True)
class LinearMap:
    """An F_2-linear map given by the images of the input basis bits.

    When the map acts on a field of degree n_in == n_out, it may carry the
    coefficient vector (a_0, ..., a_{n-1}) of the linearized polynomial
    sum a_i x^(2^i) it evaluates.
    """

    n_in: int
    n_out: int
    images: tuple[int, ...]
    spec: Optional[FieldSpec] = None
    coeffs: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if len(self.images) != self.n_in:
            raise ValueError("need one image per input basis bit")
        top = 1 << self.n_out
        if any(not 0 <= v < top for v in self.images):
            raise ValueError("image out of range")

    @classmethod
    def zero(cls, n_in: int, n_out: int) -> "LinearMap":
        return cls(n_in, n_out, (0,) * n_in)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_images(cls, n_out: int, images: Sequence[int]) -> "LinearMap":
        return cls(len(images), n_out, tuple(images))

    @classmethod
    def from_linearized(cls, spec: FieldSpec, coeffs: Sequence[int]) -> "LinearMap":
        """Map x -> sum coeffs[i] * x^(2^i) on the field of spec."""
        coeffs = tuple(coeffs) + (0,) * (spec.n - len(coeffs))
        if len(coeffs) != spec.n:
            raise ValueError("too many linearized coefficients")
        images = []
        for i in range(spec.n):
            x = 1 << i
            acc = 0
            for c in coeffs:
                acc ^= spec.mul(c, x)
                x = spec.mul(x, x)
            images.append(acc)
        return cls(spec.n, spec.n, tuple(images), spec=spec, coeffs=coeffs)

    def __call__(self, x: int) -> int:
        acc = 0
        i = 0
        while x:
            if x & 1:
                acc ^= self.images[i]
            x >>= 1
            i += 1
        return acc

    def table(self) -> tuple[int, ...]:
        return tuple(self(x) for x in range(1 << self.n_in))

    def kernel(self) -> list[int]:
        return [x for x in range(1 << self.n_in) if self(x) == 0]

    def image_rank(self) -> int:
        pivots: dict[int, int] = {}
        for v in self.images:
            while v:
                b = v.bit_length() - 1
                if b in pivots:
                    v ^= pivots[b]
                else:
                    pivots[b] = v
                    break
        return len(pivots)

    def is_injective(self) -> bool:
        return self.image_rank() == self.n_in

    def is_surjective(self) -> bool:
        return self.image_rank() == self.n_out

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if (self.n_in, self.n_out) != (other.n_in, other.n_out):
            raise ValueError("dimension mismatch")
        return LinearMap(
            self.n_in, self.n_out,
            tuple(a ^ b for a, b in zip(self.images, other.images)),
            spec=self.spec or other.spec,
        )


@dataclass(frozen=True)
class AffineMap:
    """x -> linear(x) + const."""

    linear: LinearMap
    const: int = 0

    def __call__(self, x: int) -> int:
        return self.linear(x) ^ self.const

    @property
    def n_in(self) -> int:
        return self.linear.n_in

    @property
    def n_out(self) -> int:
        return self.linear.n_out

    def is_bijection(self) -> bool:
        return self.n_in == self.n_out and self.linear.is_injective()


def projection_killing(m: int, k: int) -> LinearMap:
    """Surjective map F_2^m -> F_2^(m-1) with kernel {0, k}, k != 0."""
    if not 0 < k < (1 << m):
        raise ValueError("kernel generator out of range")
    j = (k & -k).bit_length() - 1  # lowest set bit of k
    images = []
    for i in range(m):
        # clear coordinate j via x ^= bit_j(x) * k, then drop it
        v = (1 << i) if i != j else k ^ (1 << j)
        low = v & ((1 << j) - 1)
        high = v >> (j + 1)
        images.append(low | (high << j))
    return LinearMap(m, m - 1, tuple(images))


@dataclass(frozen=True)
class DifferentialProfile:
    uniformity: int
    ddt: np.ndarray
    witness: tuple[int, int]

    def row(self, a: int) -> np.ndarray:
        return self.ddt[a]


@dataclass(frozen=True)
class WalshSpectrum:
    """Multiset of Walsh values over all (a, b) with b != 0."""

    values: tuple[tuple[int, int], ...]  # sorted (value, count) pairs

    @classmethod
    def from_counter(cls, c: Counter) -> "WalshSpectrum":
        return cls(tuple(sorted(c.items())))

    def counter(self) -> Counter:
        return Counter(dict(self.values))

    @property
    def total(self) -> int:
        return sum(c for _, c in self.values)

    def value_set(self) -> frozenset[int]:
        return frozenset(v for v, c in self.values if c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WalshSpectrum):
            return NotImplemented
        return self.values == other.values


@dataclass(frozen=True)
class VBF:
    """An (n,m)-function as a lookup table of 2^n values below 2^m."""

    n: int
    m: int
    table: tuple[int, ...]
    spec: Optional[FieldSpec] = None

    def __post_init__(self):
        if len(self.table) != 1 << self.n:
            raise ValueError(f"table must have 2^{self.n} entries, got {len(self.table)}")
        top = 1 << self.m
        if any(not 0 <= v < top for v in self.table):
            raise ValueError(f"table entry out of range for output dimension {self.m}")
        if self.spec is not None and self.spec.n != self.n:
            raise ValueError("bound field degree does not match input dimension")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    # -- the symmetric form ---------------------------------------------

    def bform(self, x: int, t: int) -> int:
        """B_F(x, t) = F(x+t) + F(x) + F(t) + F(0)."""
        T = self.table
        return T[x ^ t] ^ T[x] ^ T[t] ^ T[0]

    # -- differential analysis ------------------------------------------

    def ddt(self) -> DifferentialProfile:
        T = self.as_array()
        size = 1 << self.n
        xs = np.arange(size)
        rows = np.zeros((size, 1 << self.m), dtype=np.int64)
        rows[0, 0] = size
        for a in range(1, size):
            d = T[xs ^ a] ^ T
            rows[a] = np.bincount(d, minlength=1 << self.m)
        delta = int(rows[1:].max()) if size > 1 else 0
        a_w, b_w = np.unravel_index(int(rows[1:].argmax()), rows[1:].shape)
        return DifferentialProfile(delta, rows, (int(a_w) + 1, int(b_w)))

    def uniformity(self) -> int:
        return self.ddt().uniformity

    def is_apn(self) -> bool:
        """Early-exit APN test: abort once a derivative count exceeds 2."""
        T = self.table
        size = 1 << self.n
        counts = bytearray(1 << self.m)
        for a in range(1, size):
            for i in range(1 << self.m):
                counts[i] = 0
            for x in range(size):
                b = T[x ^ a] ^ T[x]
                c = counts[b] + 1
                if c > 2:
                    return False
                counts[b] = c
        return True

    # -- Walsh transform -------------------------------------------------

    def _pair_masks(self) -> list[int]:
        """For each b, a mask M_b with pairing(b, y) = parity(y & M_b).

        Uses the trace pairing Tr(b*y) when a field is bound and n == m,
        the bit dot product otherwise; either choice yields the same
        value multiset over all a (resp. all b).
        """
        if self.spec is not None and self.n == self.m:
            spec = self.spec
            masks = []
            for b in range(1 << self.m):
                mask = 0
                for i in range(self.m):
                    mask |= spec.trace_absolute(spec.mul(b, 1 << i)) << i
                masks.append(mask)
            return masks
        return list(range(1 << self.m))

    def walsh_at(self, a: int, b: int) -> int:
        if self.spec is not None and self.n == self.m:
            spec = self.spec
            tr = spec.trace_absolute
            mul = spec.mul
            return sum(
                -1 if (tr(mul(b, self.table[x])) ^ tr(mul(a, x))) else 1
                for x in range(1 << self.n)
            )
        return sum(
            -1 if ((b & self.table[x]).bit_count() ^ (a & x).bit_count()) & 1 else 1
            for x in range(1 << self.n)
        )

    def walsh_spectrum(self) -> WalshSpectrum:
        """Multiset of W(a, b) over all a and all b != 0."""
        masks = self._pair_masks()
        counts: Counter = Counter()
        xs = np.arange(1 << self.n)
        T = self.as_array()
        for b in range(1, 1 << self.m):
            bits = _parity_lookup(T & masks[b])
            signs = 1 - 2 * bits.astype(np.int64)
            w = _wht(signs)
            vals, cnt = np.unique(w, return_counts=True)
            for v, c in zip(vals, cnt):
                counts[int(v)] += int(c)
        return WalshSpectrum.from_counter(counts)

    # -- algebraic degree -------------------------------------------------

    def anf(self) -> tuple[int, ...]:
        """Algebraic normal form by the Moebius transform, all output
        coordinates at once."""
        a = list(self.table)
        size = 1 << self.n
        for i in range(self.n):
            bit = 1 << i
            for x in range(size):
                if x & bit:
                    a[x] ^= a[x ^ bit]
        return tuple(a)

    def algebraic_degree(self) -> int:
        return max(
            (x.bit_count() for x, c in enumerate(self.anf()) if c),
            default=0,
        )

    def is_quadratic(self) -> bool:
        """Degree at most 2; affine functions count as degenerate quadratics."""
        return self.algebraic_degree() <= 2

    # -- four-sum value sets ----------------------------------------------

    def dstar_set(self) -> frozenset[int]:
        return _dstar_set(self)

    def d_set(self) -> frozenset[int]:
        return _d_set(self)


_PARITY8 = np.array([bin(i).count("1") & 1 for i in range(256)], dtype=np.uint8)


def _parity_lookup(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    out = np.zeros(a.shape, dtype=np.uint8)
    while a.any():
        out ^= _PARITY8[(a & np.uint64(0xFF)).astype(np.intp)]
        a >>= np.uint64(8)
    return out


def _wht(signs: np.ndarray) -> np.ndarray:
    """In-place fast Walsh-Hadamard transform of a +-1 vector."""
    v = signs.copy()
    h = 1
    size = v.shape[0]
    while h < size:
        v = v.reshape(-1, 2 * h)
        left = v[:, :h].copy()
        v[:, :h] += v[:, h:]
        v[:, h:] = left - v[:, h:]
        v = v.reshape(size)
        h *= 2
    return v


@lru_cache(maxsize=64)
def _dstar_set(F: VBF) -> frozenset[int]:
    """Exact D_F* by triple enumeration; early exit on saturation."""
    size = 1 << F.n
    full = 1 << F.m
    T = F.as_array()
    xs = np.arange(size)
    seen: set[int] = set()
    for t in range(1, size):
        bt = T[xs ^ t] ^ T  # bform(x, t) up to the constant, which cancels
        grid = bt[:, None] ^ bt[None, :]
        mask = np.ones((size, size), dtype=bool)
        mask[xs, xs] = False           # x != y
        mask[xs, xs ^ t] = False       # x != y + t
        seen.update(np.unique(grid[mask]).tolist())
        if len(seen) >= full:
            break
    return frozenset(int(v) for v in seen)


@lru_cache(maxsize=64)
def _d_set(F: VBF) -> frozenset[int]:
    size = 1 << F.n
    full = 1 << F.m
    seen: set[int] = set()
    xs = np.arange(size)
    T = F.as_array()
    for t in range(size):
        bt = T[xs ^ t] ^ T ^ T[t] ^ T[0]
        grid = bt[:, None] ^ bt[None, :]
        seen.update(np.unique(grid).tolist())
        if len(seen) >= full:
            break
    return frozenset(int(v) for v in seen)


# -- constructors ---------------------------------------------------------

def from_table(n: int, m: int, values: Iterable[int], spec: Optional[FieldSpec] = None) -> VBF:
    return VBF(n, m, tuple(values), spec=spec)


def from_univariate(spec: FieldSpec, terms: Sequence[tuple[int, int]]) -> VBF:
    """F(x) = sum of c * x^d over the (c, d) terms, evaluated pointwise."""
    top = spec.order
    for c, d in terms:
        if not 0 <= d <= top:
            raise ValueError(f"exponent {d} out of range [0, {top}]")
        if not 0 <= c < spec.size:
            raise ValueError(f"coefficient 0x{c:x} out of range")
    table = []
    for x in range(spec.size):
        acc = 0
        for c, d in terms:
            acc ^= spec.mul(c, spec.pow(x, d))
        table.append(acc)
    return VBF(spec.n, spec.n, tuple(table), spec=spec)


def power_function(spec: FieldSpec, d: int) -> VBF:
    return from_univariate(spec, [(1, d)])


def inverse_function(spec: FieldSpec) -> VBF:
    """x^(2^n - 2), the inverse function with 0 -> 0."""
    return power_function(spec, spec.size - 2)


# -- projections ----------------------------------------------------------

def project(F: VBF, pi: LinearMap) -> VBF:
    if pi.n_in != F.m:
        raise ValueError("projection domain does not match output dimension")
    if not pi.is_surjective():
        raise ValueError("projection must be surjective")
    return VBF(F.n, pi.n_out, tuple(pi(v) for v in F.table))


def project_is_apn(F: VBF, pi: LinearMap) -> bool:
    """APN-ness of pi o F via D_F* meeting ker(pi), without the projected
    DDT; valid when F itself is APN."""
    if pi.n_in != F.m:
        raise ValueError("projection domain does not match output dimension")
    if not pi.is_surjective():
        raise ValueError("projection must be surjective")
    kernel = {x for x in pi.kernel() if x}
    if not kernel:
        return True
    size = 1 << F.n
    T = F.table
    for t in range(1, size):
        bt = [T[x ^ t] ^ T[x] for x in range(size)]
        for x in range(size):
            bx = bt[x]
            for y in range(x + 1, size):
                if y == x ^ t:
                    continue
                if bx ^ bt[y] in kernel:
                    return False
    return True


# -- batch helpers for searches -------------------------------------------

def is_apn_batch(tables: np.ndarray, n: int) -> np.ndarray:
    """Vectorized APN test for a stack of tables, shape (B, 2^n)."""
    size = 1 << n
    if tables.ndim != 2 or tables.shape[1] != size:
        raise ValueError("tables must have shape (B, 2^n)")
    xs = np.arange(size)
    ok = np.ones(tables.shape[0], dtype=bool)
    for a in range(1, size):
        idx = np.nonzero(ok)[0]
        if idx.size == 0:
            break
        t = tables[idx]
        d = np.sort(t[:, xs ^ a] ^ t, axis=1)
        triple = (d[:, 2:] == d[:, :-2]).any(axis=1)
        ok[idx[triple]] = False
    return ok
