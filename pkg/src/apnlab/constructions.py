"""Secondary constructions of APN functions and their iff-criteria:
switching, decomposition into differentially 4-uniform parts, inverse-based
(n, n+1) extension, hyperplane concatenation, linear modification on the
trace-zero hyperplane (kernel and exponential-sum criteria), H-equivalence
witnesses, the thirteen dimension-6 representatives, and constant
modification on the cosets of a codimension-2 subspace.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np

from .field import FieldSpec
from .vbf import VBF, AffineMap, LinearMap, inverse_function, power_function


# -- (f, g) pairs in F_2^m (+) F_2 ----------------------------------------
# Pair values are encoded as (f_value << 1) | g_bit: the Boolean
# coordinate is the last output bit.

def pair_lift(f: VBF, g: VBF) -> VBF:
    if g.m != 1 or g.n != f.n:
        raise ValueError("g must be a Boolean function on the same domain")
    table = tuple((fv << 1) | gv for fv, gv in zip(f.table, g.table))
    return VBF(f.n, f.m + 1, table)

def split_pair(F: VBF) -> tuple[VBF, VBF]:
    f = VBF(F.n, F.m - 1, tuple(v >> 1 for v in F.table))
    g = VBF(F.n, 1, tuple(v & 1 for v in F.table))
    return f, g


@dataclass(frozen=True)
class SwitchSpec:
    """Base (n, m+1)-function split as (f, g) plus a direction u."""

    f: VBF
    g: VBF
    u: int

    def __post_init__(self):
        if self.g.m != 1 or self.g.n != self.f.n:
            raise ValueError("g must be a Boolean function on the same domain")
        if not 0 < self.u < (1 << self.f.m):
            raise ValueError("direction u must be a nonzero m-bit value")

    @cached_property
    def combined(self) -> VBF:
        return pair_lift(self.f, self.g)


def switch(sw: SwitchSpec) -> tuple[VBF, bool]:
    """f + u*g together with the four-sum certificate; the certificate is
    true exactly when the switched function is APN."""
    if not sw.combined.is_apn():
        raise ValueError("the combined (n, m+1)-function must be APN")
    cert = ((sw.u << 1) | 1) not in sw.combined.dstar_set()
    table = tuple(fv ^ (sw.u if gv else 0) for fv, gv in zip(sw.f.table, sw.g.table))
    return VBF(sw.f.n, sw.f.m, table, spec=sw.f.spec), cert


@dataclass(frozen=True)
class Decomposition:
    f1: VBF
    u: int
    g: VBF
    uniformity: int


def _first_odd_g_quadruple(f: VBF, g: VBF) -> Optional[tuple[int, int]]:
    """First (in t-outer, x<y order) four-sum with odd g-part; returns
    (f_sum, g_sum_t) or None."""
    size = 1 << f.n
    Tf, Tg = f.table, g.table
    for t in range(1, size):
        fd = [Tf[x ^ t] ^ Tf[x] for x in range(size)]
        gd = [Tg[x ^ t] ^ Tg[x] for x in range(size)]
        for x in range(size):
            for y in range(x + 1, size):
                if y == x ^ t:
                    continue
                if gd[x] ^ gd[y]:
                    return fd[x] ^ fd[y], t
    return None


def decompose_to_4uniform(f: VBF, g: Optional[VBF] = None) -> Decomposition:
    """Express the APN function f as f_1 + u*g with f_1 differentially
    4-uniform, following the switching decomposition.

    When g is omitted, tries g(x) = Tr(c * f(x)) for c = 1, 2, ... and uses
    the first choice admitting a quadruple with odd g-sum.  A supplied g
    whose four-sums are all even is rejected.
    """
    if f.n != f.m:
        raise ValueError("decomposition is defined for (n, n)-functions")
    if not f.is_apn():
        raise ValueError("f must be APN")
    if g is None:
        if f.spec is None:
            raise ValueError("a bound field is needed to enumerate trace coordinates")
        spec = f.spec
        for c in range(1, spec.size):
            cand = VBF(f.n, 1, tuple(spec.trace_absolute(spec.mul(c, v)) for v in f.table))
            hit = _first_odd_g_quadruple(f, cand)
            if hit is not None:
                g = cand
                u = hit[0]
                break
        else:  # pragma: no cover - impossible for APN f by Dillon's observation
            raise ValueError("no trace coordinate admits an odd four-sum")
    else:
        if g.m != 1 or g.n != f.n:
            raise ValueError("g must be a Boolean function on the same domain")
        hit = _first_odd_g_quadruple(f, g)
        if hit is None:
            raise ValueError("all four-sums of g are even; supply another g")
        u = hit[0]
    f1 = VBF(f.n, f.m, tuple(fv ^ (u if gv else 0) for fv, gv in zip(f.table, g.table)),
             spec=f.spec)
    delta = f1.uniformity()
    if delta not in (2, 4):
        raise AssertionError(f"decomposition produced uniformity {delta}")
    return Decomposition(f1, u, g, delta)


# -- the inverse function and its (n, n+1) lift ---------------------------

def nyberg_roots(spec: FieldSpec, a: int, b: int) -> list[int]:
    """Solutions of x^-1 + (x+a)^-1 = b with the 0 -> 0 convention."""
    if a == 0:
        raise ValueError("a must be nonzero")
    T = inverse_function(spec).table
    return [x for x in range(spec.size) if T[x] ^ T[x ^ a] == b]


def nyberg_root_count(spec: FieldSpec, a: int, b: int) -> int:
    """Predicted root count of x^-1 + (x+a)^-1 = b from the trace tests;
    even degree >= 4 only.  b = 0 is decided by direct enumeration."""
    if spec.n % 2 != 0 or spec.n < 4:
        raise ValueError("requires even degree >= 4")
    if a == 0:
        raise ValueError("a must be nonzero")
    if b == 0:
        return len(nyberg_roots(spec, a, b))
    ab = spec.mul(a, b)
    if ab == 1:
        return 4
    return 2 if spec.trace_absolute(spec.inv(ab)) == 0 else 0


def inverse_extension(spec: FieldSpec) -> VBF:
    """(x^-1, g(x)) as an APN (n, n+1)-function for even degree > 2.

    g sums to 1 over every multiplicative <w>-orbit {a, wa, w^2 a}:
    within the orbit of its smallest element a, g is 1 on w^2 a only.
    """
    if spec.n % 2 != 0 or spec.n <= 2:
        raise ValueError("requires even degree > 2")
    _, w, _ = spec.cube_roots_of_unity()
    g = [0] * spec.size
    seen = [False] * spec.size
    seen[0] = True
    for a in range(1, spec.size):
        if seen[a]:
            continue
        wa = spec.mul(w, a)
        w2a = spec.mul(w, wa)
        seen[a] = seen[wa] = seen[w2a] = True
        g[w2a] = 1
    f = inverse_function(spec)
    gv = VBF(spec.n, 1, tuple(g))
    return pair_lift(f, gv)


# -- concatenation on complementary hyperplanes ---------------------------
# F_2^(n-1) embeds as the low n-1 coordinates of F_2^n; e_0 is the last
# unit vector, so F(x) = f(x) and F(x + e_0) = g(x).

def concatenate(f: VBF, g: VBF) -> VBF:
    if (f.n, f.m) != (g.n, g.m):
        raise ValueError("f and g must have identical dimensions")
    return VBF(f.n + 1, f.m, f.table + g.table)


ConcatWitness = tuple[int, int, int]  # (x, y, a)


def concat_is_apn(f: VBF, g: VBF) -> tuple[bool, Optional[ConcatWitness]]:
    """Concatenation criterion: f and g APN, and no derivative value of f
    meets one of g at the same direction a.  Returns a witness (x, y, a)
    with f(x+a)+f(x)+g(y+a)+g(y) = 0 when the second condition fails."""
    if (f.n, f.m) != (g.n, g.m):
        raise ValueError("f and g must have identical dimensions")
    if not (f.is_apn() and g.is_apn()):
        return False, None
    size = 1 << f.n
    Tf, Tg = f.table, g.table
    for a in range(1, size):
        fd = {}
        for x in range(size):
            fd.setdefault(Tf[x ^ a] ^ Tf[x], x)
        for y in range(size):
            v = Tg[y ^ a] ^ Tg[y]
            if v in fd:
                return False, (fd[v], y, a)
    return True, None


def quadratic_concat_criterion(f: VBF, L: LinearMap, c: int) -> bool:
    """For quadratic APN f and g = f + L + c: the concatenation is APN iff
    x -> L(x) + B_f(x, A) is injective for every A."""
    if not f.is_quadratic():
        raise ValueError("f must be quadratic")
    if L.n_in != f.n or L.n_out != f.m:
        raise ValueError("L must map the domain of f into its codomain")
    size = 1 << f.n
    Ltab = L.table()
    for A in range(size):
        for x in range(1, size):
            if Ltab[x] ^ f.bform(x, A) == 0:
                return False
    return True


# -- linear modification on the trace-zero hyperplane ---------------------

def hyperplane_modify(F: VBF, L: LinearMap) -> VBF:
    """G(x) = F(x) + Tr(x) L(x)."""
    if F.spec is None:
        raise ValueError("F must carry a field for the trace")
    if L.n_in != F.n or L.n_out != F.m:
        raise ValueError("L dimensions do not match F")
    spec = F.spec
    table = tuple(
        v ^ (L(x) if spec.trace_absolute(x) else 0) for x, v in enumerate(F.table)
    )
    return VBF(F.n, F.m, table, spec=spec)


def th31_criterion(F: VBF, L: LinearMap, e0: Optional[int] = None) -> bool:
    """F + Tr*L is APN iff x -> L(x) + B_F(x, a + e_0) has trivial kernel
    on the trace-zero hyperplane for every trace-zero a; F quadratic APN."""
    if F.spec is None:
        raise ValueError("F must carry a field for the trace")
    if not F.is_quadratic():
        raise ValueError("F must be quadratic")
    if not F.is_apn():
        raise ValueError("F must be APN")
    spec = F.spec
    if e0 is None:
        e0 = spec.trace_one_element()
    elif spec.trace_absolute(e0) != 1:
        raise ValueError("e0 must have absolute trace 1")
    t0 = spec.trace_zero_elements()
    Ltab = [L(x) for x in t0]
    for a in t0:
        ae = a ^ e0
        for lx, x in zip(Ltab, t0):
            if x and lx ^ F.bform(x, ae) == 0:
                return False
    return True


def exp_sum_condition(L: LinearMap, spec: FieldSpec) -> tuple[int, bool]:
    """Exponential-sum characterization of the APN-ness of x^3 + Tr(x)L(x).

    Returns (lhs, lhs == 2^(n-1) - 1), where lhs is the first sum minus
    half the (always even) second sum, computed exactly over the integers.
    """
    if L.n_in != spec.n or L.n_out != spec.n:
        raise ValueError("L must be a map on the field")
    s1 = 0
    s2 = 0
    for x in range(2, spec.size):
        y = spec.mul(x, x) ^ x  # x^2 + x, nonzero for x not in {0, 1}
        ly = L(y)
        iy3 = spec.inv(spec.pow(y, 3))
        s1 += -1 if spec.trace_absolute(spec.mul(spec.mul(spec.mul(x, x), ly), iy3)) else 1
        s2 += -1 if spec.trace_absolute(spec.mul(ly, iy3)) else 1
    if s2 % 2 != 0:
        raise AssertionError("second exponential sum must be even")
    lhs = s1 - s2 // 2
    return lhs, lhs == (1 << (spec.n - 1)) - 1


# -- H-equivalence ---------------------------------------------------------

@dataclass(frozen=True)
class HyperplaneSpec:
    """Affine hyperplane {x : a.x = beta} of F_2^n."""

    n: int
    a: int
    beta: int = 0

    def __post_init__(self):
        if not 0 < self.a < (1 << self.n):
            raise ValueError("defining functional must be nonzero")
        if self.beta not in (0, 1):
            raise ValueError("shift bit must be 0 or 1")

    @classmethod
    def trace_zero(cls, spec: FieldSpec) -> "HyperplaneSpec":
        return cls(spec.n, spec.trace_mask, 0)

    def contains(self, x: int) -> bool:
        return ((self.a & x).bit_count() & 1) == self.beta

    def members(self) -> list[int]:
        return [x for x in range(1 << self.n) if self.contains(x)]

    def complement(self) -> list[int]:
        return [x for x in range(1 << self.n) if not self.contains(x)]


class _Span:
    """Incremental GF(2) span with attached values, for solving M(x)."""

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # leading bit -> (vec, val)

    def add(self, vec: int, val: int) -> None:
        while vec:
            b = vec.bit_length() - 1
            if b in self.rows:
                v2, w2 = self.rows[b]
                vec ^= v2
                val ^= w2
            else:
                self.rows[b] = (vec, val)
                return
        # vec in span already; caller guarantees consistency

    def eval(self, x: int) -> int:
        val = 0
        while x:
            b = x.bit_length() - 1
            if b not in self.rows:
                raise KeyError("vector outside span")
            v2, w2 = self.rows[b]
            x ^= v2
            val ^= w2
        return val


def h_equivalence_witness(F: VBF, G: VBF, h: HyperplaneSpec) -> Optional[AffineMap]:
    """Affine map A with G = F on h and G = F + A off h, if one exists."""
    if (F.n, F.m) != (G.n, G.m) or h.n != F.n:
        raise ValueError("dimension mismatch")
    diff = [fv ^ gv for fv, gv in zip(F.table, G.table)]
    if any(diff[x] for x in h.members()):
        return None
    direction = HyperplaneSpec(h.n, h.a, 0).members()  # the linear hyperplane
    comp = h.complement()
    e = min(comp)
    # fit the linear part on a basis of the direction space, extend by M(e)=0
    span = _Span()
    basis = []
    rank = 0
    for u in direction:
        if u == 0:
            continue
        before = len(span.rows)
        span.add(u, diff[e ^ u] ^ diff[e])
        if len(span.rows) > before:
            basis.append(u)
            rank += 1
        if rank == F.n - 1:
            break
    span.add(e, 0)
    const = diff[e]
    # verify pointwise on the complement coset
    for u in direction:
        if diff[e ^ u] != span.eval(u) ^ const:
            return None
    images = tuple(span.eval(1 << i) for i in range(F.n))
    return AffineMap(LinearMap(F.n, F.m, images), const)


# -- the thirteen dimension-6 representatives -----------------------------

# Coefficient exponents (powers of the generator) of the linearized
# polynomials L_2 .. L_13; None marks an absent term.
_TABLE1_LOGS = [
    [42, 3, 34, 59, 59, 12],
    [18, 60, 17, 4, 17, 4],
    [18, 60, 57, 7, 32, 62],
    [42, 1, 29, 55, 9, 56],
    [42, 21, None, 4, 48, 16],
    [42, 19, 51, 59, 26, 38],
    [42, 19, 60, 11, 25, 13],
    [42, 21, 22, 31, 15, 61],
    [42, 47, 35, 54, 23, 27],
    [42, 21, 23, 32, 14, 51],
    [42, 21, 4, 56, 17, 20],
    [42, 21, None, 27, 34, 52],
]

from .field import PRESET_MODULI  # noqa: E402  (constant, no cycle)


def table1_maps(spec: FieldSpec) -> list[LinearMap]:
    """L_1 = 0 and L_2 .. L_13 on the degree-6 preset field."""
    if spec.n != 6 or spec.modulus != PRESET_MODULI[6] or spec.generator != 2:
        raise ValueError("the thirteen maps are defined on the degree-6 preset field")
    maps = [LinearMap.from_linearized(spec, [0] * 6)]
    for logs in _TABLE1_LOGS:
        coeffs = [0 if e is None else spec.gpow(e) for e in logs]
        maps.append(LinearMap.from_linearized(spec, coeffs))
    return maps


def table1_functions(spec: FieldSpec) -> list[VBF]:
    cube = power_function(spec, 3)
    return [hyperplane_modify(cube, L) for L in table1_maps(spec)]


# -- constant modification on codimension-2 cosets ------------------------

@dataclass(frozen=True)
class CosetDecomposition:
    """An (n-2)-dimensional subspace U with coset representatives
    u_1 = 0, u_2, u_3, u_4 partitioning F_2^n."""

    n: int
    basis: tuple[int, ...]
    reps: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.basis) != self.n - 2:
            raise ValueError("basis must have n - 2 vectors")
        if self.reps[0] != 0:
            raise ValueError("the first representative must be 0")
        self.coset_of  # build and validate

    @cached_property
    def subspace(self) -> tuple[int, ...]:
        out = [0]
        for b in self.basis:
            out += [x ^ b for x in out]
        if len(set(out)) != 1 << (self.n - 2):
            raise ValueError("basis vectors are dependent")
        return tuple(sorted(out))

    @cached_property
    def coset_of(self) -> tuple[int, ...]:
        idx = [-1] * (1 << self.n)
        for i, u in enumerate(self.reps):
            for x in self.subspace:
                if idx[x ^ u] != -1:
                    raise ValueError("cosets do not partition the space")
                idx[x ^ u] = i
        return tuple(idx)

    def coset(self, i: int) -> list[int]:
        u = self.reps[i]
        return [x ^ u for x in self.subspace]

    @classmethod
    def from_basis(cls, n: int, basis: tuple[int, ...]) -> "CosetDecomposition":
        """Canonical representatives: the smallest element of each coset,
        in increasing order of that minimum."""
        span = {0}
        for b in basis:
            span |= {x ^ b for x in span}
        rest = sorted(set(range(1 << n)) - span)
        u2 = rest[0]
        rest2 = sorted(set(rest) - {x ^ u2 for x in span})
        u3 = rest2[0]
        u4 = min(set(rest2) - {x ^ u3 for x in span})
        return cls(n, tuple(basis), (0, u2, u3, u4))

    @classmethod
    def from_subfield_trace(cls, spec: FieldSpec) -> "CosetDecomposition":
        """Fibers of Tr^n_2 over {0, 1, w, w^2}, as in the degree-8 example."""
        if spec.n % 2 != 0:
            raise ValueError("requires even degree")
        _, w, w2 = spec.cube_roots_of_unity()
        fibers: dict[int, list[int]] = {0: [], 1: [], w: [], w2: []}
        for x in range(spec.size):
            fibers[spec.trace_to_subfield(x, 2)].append(x)
        basis = []
        span = {0}
        for x in fibers[0]:
            if x not in span:
                basis.append(x)
                span |= {y ^ x for y in span}
        return cls(
            spec.n,
            tuple(basis),
            (0, min(fibers[1]), min(fibers[w]), min(fibers[w2])),
        )


def coset_modify(F: VBF, dec: CosetDecomposition,
                 consts: tuple[int, int, int, int]) -> VBF:
    """Add the constant a_i on the i-th coset."""
    if dec.n != F.n:
        raise ValueError("decomposition dimension does not match F")
    coset_of = dec.coset_of
    table = tuple(v ^ consts[coset_of[x]] for x, v in enumerate(F.table))
    return VBF(F.n, F.m, table, spec=F.spec)


@lru_cache(maxsize=16)
def admissible_sums(F: VBF, dec: CosetDecomposition) -> frozenset[int]:
    """Complement of the F-sums over 2-flats meeting every coset once; the
    modified function is APN exactly when a_1+a_2+a_3+a_4 lands here."""
    if dec.n != F.n:
        raise ValueError("decomposition dimension does not match F")
    if not F.is_apn():
        raise ValueError("F must be APN")
    T = F.as_array()
    u1 = np.array(dec.coset(0))
    u2 = np.array(dec.coset(1))
    u3 = np.array(dec.coset(2))
    x2g, x3g = np.meshgrid(u2, u3, indexing="ij")
    f23 = T[x2g] ^ T[x3g]
    seen: set[int] = set()
    for x1 in u1:
        x4 = x1 ^ x2g ^ x3g  # lands in the fourth coset automatically
        sums = T[x1] ^ f23 ^ T[x4]
        seen.update(np.unique(sums).tolist())
    return frozenset(range(1 << F.m)) - seen


def coset_criterion(F: VBF, dec: CosetDecomposition,
                    consts: tuple[int, int, int, int]) -> bool:
    s = consts[0] ^ consts[1] ^ consts[2] ^ consts[3]
    return s in admissible_sums(F, dec)


# -- EA transforms (sample generators for invariant testing) ---------------

def ea_transform(F: VBF, a1: AffineMap, a2: AffineMap, a3: AffineMap) -> VBF:
    """A_1 o F o A_2 + A_3; preserves APN-ness and the CCZ invariants."""
    if not (a1.is_bijection() and a2.is_bijection()):
        raise ValueError("A_1 and A_2 must be affine bijections")
    if a2.n_in != F.n or a1.n_in != F.m or (a3.n_in, a3.n_out) != (F.n, F.m):
        raise ValueError("dimension mismatch")
    table = tuple(a1(F.table[a2(x)]) ^ a3(x) for x in range(1 << F.n))
    return VBF(F.n, F.m, table, spec=F.spec)


def random_affine_bijection(dim: int, rng: random.Random) -> AffineMap:
    while True:
        images = tuple(rng.randrange(1 << dim) for _ in range(dim))
        lm = LinearMap(dim, dim, images)
        if lm.is_injective():
            return AffineMap(lm, rng.randrange(1 << dim))


def random_ea_triple(n: int, m: int, rng: random.Random) -> tuple[AffineMap, AffineMap, AffineMap]:
    a1 = random_affine_bijection(m, rng)
    a2 = random_affine_bijection(n, rng)
    a3 = AffineMap(
        LinearMap(n, m, tuple(rng.randrange(1 << m) for _ in range(n))),
        rng.randrange(1 << m),
    )
    return a1, a2, a3
