"""Exact enumeration of solutions of x.y.z = 0 of bounded multiprojective height.

Two independent implementations share one contract:

* ``count_points`` -- the production path.  It iterates (x, y) grouped by the
  pair (a, b) of exact max-coordinates, forms the coefficient vectors
  c_i = x_i * y_i, and counts admissible z through ``count_z_solutions``:
  solve for the coordinate with the largest |c_k| and accept when it divides
  the partial sum with a quotient in [-Z,-1] u [1,Z].  Sign-fixing enters
  through exact per-magnitude-class counts (negation is an involution), and
  primitivity of z through a Mobius sum over the content of z.

* ``count_points_oracle`` -- a deliberately naive scan that enumerates signed
  coordinate tuples directly, tests the trilinear sum literally, and applies
  every predicate (height, domain, primitivity, sign-fix) per tuple.

Counts are exact integers; for a fixed (n, B, convention) the result is
deterministic and independent of the number of worker threads.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import product as iter_product

import numpy as np

from .arith import mobius_sieve
from .errors import BudgetExceededError, OverflowGuardError
from .lattice import check_dim

# int64 headroom: coefficients |c_i| <= a*b <= B and partial sums are at most
# (n+1)*B*Z <= (n+1)*B^2, so B is capped well below the exact range.
_MAX_BOUND = 2**30

# Chunk caps for the vectorized kernels (cells = rows x grid points).
_CELL_CHUNK = 6_000_000
_ORACLE_OPS_BUDGET = 400_000_000


class Domain(Enum):
    """Height-exponent restriction applied on top of H <= B.

    DXY requires max|x|*max|y| <= B^(2/3) and max|x| <= B^(1/3); DYZ and DZX
    are the cyclic analogues.  Comparisons are exact: u <= B^(2/3) is tested
    as u^3 <= B^2 and u <= B^(1/3) as u^3 <= B.
    """

    FULL = "FULL"
    DXY = "DXY"
    DYZ = "DYZ"
    DZX = "DZX"


@dataclass(frozen=True)
class CountingConvention:
    """The exact subset of solutions counted."""

    primitive: bool = False
    sign_fix: frozenset = frozenset()
    domain: Domain = Domain.FULL

    def __post_init__(self):
        if not frozenset(self.sign_fix) <= frozenset("xyz"):
            raise ValueError(f"sign_fix must be a subset of {{'x','y','z'}}, got {self.sign_fix}")
        object.__setattr__(self, "sign_fix", frozenset(self.sign_fix))

    def label(self) -> str:
        sf = "".join(s for s in "xyz" if s in self.sign_fix) or "-"
        return f"prim={int(self.primitive)},sf={sf},{self.domain.value}"


#: Conventions with standard names, as accepted by the CLI.
NAMED_CONVENTIONS: dict[str, CountingConvention] = {
    "all": CountingConvention(False, frozenset(), Domain.FULL),
    "N": CountingConvention(False, frozenset("xy"), Domain.FULL),
    "Nprime": CountingConvention(False, frozenset("xy"), Domain.DXY),
    "E": CountingConvention(False, frozenset("xyz"), Domain.FULL),
    "E1": CountingConvention(False, frozenset("xyz"), Domain.DXY),
    "E2": CountingConvention(False, frozenset("xyz"), Domain.DYZ),
    "E3": CountingConvention(False, frozenset("xyz"), Domain.DZX),
    "primitive": CountingConvention(True, frozenset(), Domain.FULL),
    "primitive-signfixed": CountingConvention(True, frozenset("xy"), Domain.FULL),
}


@dataclass
class ExactCount:
    n: int
    B: int
    convention: CountingConvention
    count: int
    elapsed_ms: float = 0.0


def _icbrt(x: int) -> int:
    """Largest m >= 0 with m**3 <= x (x >= 0)."""
    if x < 0:
        raise ValueError("negative argument")
    m = round(x ** (1.0 / 3.0))
    while m > 0 and m * m * m > x:
        m -= 1
    while (m + 1) ** 3 <= x:
        m += 1
    return m


def _validate_bound(B: int) -> None:
    if not isinstance(B, int) or B < 1:
        raise ValueError(f"bound must be a positive integer, got {B!r}")
    if B > _MAX_BOUND:
        raise OverflowGuardError(f"bound {B} exceeds the int64-safe kernel range")


# ---------------------------------------------------------------------------
# Inner kernel: number of z in the punctured box with sum(c_i z_i) = 0
# ---------------------------------------------------------------------------


def _signed_range(Z: int) -> np.ndarray:
    r = np.arange(-Z, Z + 1, dtype=np.int64)
    return r[r != 0]


def _z_grid(n: int, Z: int) -> np.ndarray:
    """All assignments of the n non-solved z coordinates: shape ((2Z)**n, n)."""
    r = _signed_range(Z)
    if n == 1:
        return r.reshape(-1, 1)
    grids = np.meshgrid(*([r] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _kernel_rows(C: np.ndarray, Z: int) -> np.ndarray:
    """Per-row count of z with 1 <= |z_i| <= Z and sum_i C[r,i]*z_i = 0.

    C must have positive entries sorted in non-increasing order per row (the
    solved coordinate is column 0, the one with the largest coefficient).
    """
    M = len(C)
    out = np.zeros(M, dtype=np.int64)
    if Z < 1 or M == 0:
        return out
    n = C.shape[1] - 1
    grid = _z_grid(n, Z)
    G = len(grid)
    c0 = C[:, 0]
    row_chunk = max(1, _CELL_CHUNK // max(G, 1))
    for lo in range(0, M, row_chunk):
        hi = min(M, lo + row_chunk)
        Cc = C[lo:hi]
        s = np.multiply.outer(Cc[:, 1], grid[:, 0])
        for j in range(2, n + 1):
            s += np.multiply.outer(Cc[:, j], grid[:, j - 1])
        q, r = np.divmod(-s, c0[lo:hi, None])
        ok = (r == 0) & (q != 0) & (q >= -Z) & (q <= Z)
        out[lo:hi] = ok.sum(axis=1, dtype=np.int64)
    return out


def count_z_solutions(c, Z: int) -> int:
    """#{z : 1 <= |z_i| <= Z for all i, sum_i c_i z_i = 0} for nonzero integer c_i.

    Solves for the coordinate with the largest |c_k|: the other n coordinates
    are enumerated and a candidate is accepted iff c_k divides the partial sum
    and the quotient lands in [-Z,-1] u [1,Z].  The count depends on the c_i
    only through |c_i| (flipping z_i absorbs signs), so coefficients are
    normalized to positive and sorted.
    """
    c = [int(v) for v in c]
    if len(c) < 2:
        raise ValueError("need at least 2 coefficients")
    if any(v == 0 for v in c):
        raise ValueError("all coefficients must be nonzero")
    if not isinstance(Z, int) or Z < 1:
        raise ValueError(f"Z must be a positive integer, got {Z!r}")
    if max(abs(v) for v in c) * Z * len(c) >= 2**62:
        raise OverflowGuardError("coefficient/Z magnitudes exceed the int64-safe range")
    row = np.array(sorted((abs(v) for v in c), reverse=True), dtype=np.int64)
    return int(_kernel_rows(row.reshape(1, -1), Z)[0])


# ---------------------------------------------------------------------------
# Magnitude-class enumeration for the production path
# ---------------------------------------------------------------------------


def _exact_max_vectors(n: int, a: int) -> np.ndarray:
    """All positive vectors in [1..a]^(n+1) with max coordinate exactly a.

    Built disjointly by the subset of positions pinned to a (the rest range
    over [1..a-1]), avoiding materializing the full box.
    """
    k = n + 1
    if a == 1:
        return np.ones((1, k), dtype=np.int64)
    blocks = []
    small = np.arange(1, a, dtype=np.int64)
    for mask in range(1, 1 << k):
        free = [i for i in range(k) if not (mask >> i) & 1]
        nf = len(free)
        if nf == 0:
            blocks.append(np.full((1, k), a, dtype=np.int64))
            continue
        if nf == 1:
            rest = small.reshape(-1, 1)
        else:
            grids = np.meshgrid(*([small] * nf), indexing="ij")
            rest = np.stack([g.ravel() for g in grids], axis=1)
        block = np.full((len(rest), k), a, dtype=np.int64)
        block[:, free] = rest
        blocks.append(block)
    return np.concatenate(blocks, axis=0)


def _sign_class_weight(n: int, fixed: bool) -> int:
    """Number of sign patterns of a magnitude class passing the sign-fix filter.

    Each of the 2^(n+1) signings flips the sign-fixed predicate when the
    coordinate of first-maximal magnitude flips, so exactly half pass.
    """
    return 2**n if fixed else 2 ** (n + 1)


def _z_cap(B: int, a: int, b: int, domain: Domain) -> int:
    """Largest admissible max|z| for exact maxima (a, b), or 0 when none."""
    Z = B // (a * b)
    if domain is Domain.DYZ:
        Z = min(Z, _icbrt(B * B // (b * b * b)))
    elif domain is Domain.DZX:
        Z = min(Z, _icbrt(B * B // (a * a * a)), _icbrt(B))
    return Z


def _pair_admissible(B: int, a: int, b: int, domain: Domain) -> bool:
    if domain is Domain.DXY:
        return (a * b) ** 3 <= B * B and a**3 <= B
    if domain is Domain.DYZ:
        return b**3 <= B
    return True


def _mu_coeffs_by_floor(Z: int, mu: np.ndarray) -> list[tuple[int, int]]:
    """Group sum_d mu(d)*f(Z//d) by the distinct values v = Z//d."""
    coeffs: dict[int, int] = {}
    d = 1
    while d <= Z:
        v = Z // d
        d_hi = Z // v
        block = int(mu[d : d_hi + 1].sum())
        if block:
            coeffs[v] = coeffs.get(v, 0) + block
        d = d_hi + 1
    return sorted(coeffs.items(), reverse=True)


def _count_pair_block(
    n: int,
    a: int,
    b: int,
    Z: int,
    primitive: bool,
    half_z: bool,
    mu: np.ndarray | None,
) -> int:
    """Total inner-z count over all positive magnitude pairs with maxima (a, b)."""
    P = _exact_max_vectors(n, a)
    Q = _exact_max_vectors(n, b)
    if primitive:
        P = P[np.gcd.reduce(P, axis=1) == 1]
        Q = Q[np.gcd.reduce(Q, axis=1) == 1]
        if len(P) == 0 or len(Q) == 0:
            return 0

    total = 0
    q_rows = len(Q)
    p_chunk = max(1, _CELL_CHUNK // max(q_rows * (n + 1) * 8, 1))
    for lo in range(0, len(P), p_chunk):
        C = (P[lo : lo + p_chunk, None, :] * Q[None, :, :]).reshape(-1, n + 1)
        C = -np.sort(-C, axis=1)
        rows, counts = np.unique(C, axis=0, return_counts=True)
        if primitive:
            kern = np.zeros(len(rows), dtype=np.int64)
            for v, coeff in _mu_coeffs_by_floor(Z, mu):
                kern += coeff * _kernel_rows(rows, v)
        else:
            kern = _kernel_rows(rows, Z)
        if half_z:
            if np.any(kern & 1):
                raise AssertionError("z-solution counts must pair up under z -> -z")
            kern >>= 1
        total += int(np.dot(kern, counts))
    return total


def _run_tasks(args: tuple) -> int:
    """Worker: sum weighted pair blocks for a slice of (a, b, sym) tasks."""
    n, B, primitive, sf, domain, tasks = args
    mu = mobius_sieve(B) if primitive else None
    half_z = "z" in sf
    wx = _sign_class_weight(n, "x" in sf)
    wy = _sign_class_weight(n, "y" in sf)
    total = 0
    for a, b, sym in tasks:
        Z = _z_cap(B, a, b, domain)
        if Z < 1:
            continue
        block = _count_pair_block(n, a, b, Z, primitive, half_z, mu)
        total += sym * wx * wy * block
    return total


def count_points(
    n: int,
    B: int,
    conv: CountingConvention,
    threads: int = 1,
) -> ExactCount:
    """Exact cardinality of the solution set selected by ``conv``.

    Deterministic for fixed (n, B, conv): work is partitioned over exact
    (max|x|, max|y|) pairs and reduced by exact integer summation, so the
    result does not depend on ``threads``.
    """
    check_dim(n)
    _validate_bound(B)
    if not isinstance(conv, CountingConvention):
        raise ValueError("conv must be a CountingConvention")
    if n * B * B >= 2**62:
        raise OverflowGuardError(f"(n={n}, B={B}) would overflow the int64 kernel sums")
    start = time.perf_counter()

    # For x<->y symmetric filters on the FULL domain, (a, b) and (b, a)
    # contribute equally; fold the triangle.
    symmetric = conv.domain is Domain.FULL and (("x" in conv.sign_fix) == ("y" in conv.sign_fix))
    tasks = []
    for a in range(1, B + 1):
        b_lo = a if symmetric else 1
        for b in range(b_lo, B // a + 1):
            if not _pair_admissible(B, a, b, conv.domain):
                continue
            sym = 2 if symmetric and b > a else 1
            tasks.append((a, b, sym))

    if threads <= 1 or len(tasks) < 2:
        total = _run_tasks((n, B, conv.primitive, conv.sign_fix, conv.domain, tasks))
    else:
        chunks = [tasks[i::threads] for i in range(threads)]
        payloads = [
            (n, B, conv.primitive, conv.sign_fix, conv.domain, chunk)
            for chunk in chunks
            if chunk
        ]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            total = sum(pool.map(_run_tasks, payloads))

    elapsed = (time.perf_counter() - start) * 1000.0
    return ExactCount(n, B, conv, total, elapsed)


# ---------------------------------------------------------------------------
# Mobius reduction from the all-multiples count to the primitive count
# ---------------------------------------------------------------------------


def _mu_triple_dirichlet(B: int) -> np.ndarray:
    """g[t] = sum over k*l*m = t of mu(k)*mu(l)*mu(m), for t = 1..B."""
    mu = mobius_sieve(B).astype(np.int64)
    h = np.zeros(B + 1, dtype=np.int64)
    for k in range(1, B + 1):
        if mu[k]:
            h[k::k] += mu[k] * mu[1 : B // k + 1]
    g = np.zeros(B + 1, dtype=np.int64)
    for k in range(1, B + 1):
        if mu[k]:
            g[k::k] += mu[k] * h[1 : B // k + 1]
    return g


def mobius_count(n: int, B: int, sign_fix=frozenset(), threads: int = 1) -> int:
    """Primitive count reconstructed by the triple Mobius sum
    sum_{k,l,m} mu(k)mu(l)mu(m) * count(H*klm <= B), FULL domain.

    The inner threshold H <= B/(klm) is exact: heights are integers, so it is
    evaluated as H <= floor(B/(klm)).  Inner counts share the given sign_fix
    and are grouped by the distinct values of floor(B/t).
    """
    check_dim(n)
    _validate_bound(B)
    g = _mu_triple_dirichlet(B)
    by_floor: dict[int, int] = {}
    t = 1
    while t <= B:
        v = B // t
        t_hi = B // v
        block = int(g[t : t_hi + 1].sum())
        if block:
            by_floor[v] = by_floor.get(v, 0) + block
        t = t_hi + 1
    conv = CountingConvention(False, frozenset(sign_fix), Domain.FULL)
    total = 0
    for v in sorted(by_floor, reverse=True):
        total += by_floor[v] * count_points(n, v, conv, threads=threads).count
    return total


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def _signed_exact_max(n: int, a: int) -> np.ndarray:
    """All signed vectors with nonzero coordinates and max|v_i| exactly a."""
    mags = _exact_max_vectors(n, a)
    k = n + 1
    signs = np.array(list(iter_product((1, -1), repeat=k)), dtype=np.int64)
    return (mags[:, None, :] * signs[None, :, :]).reshape(-1, k)


def _oracle_budget(n: int, B: int) -> int:
    ops = 0
    for a in range(1, B + 1):
        na = (2 * a) ** (n + 1) - (2 * (a - 1)) ** (n + 1)
        for b in range(1, B // a + 1):
            nb = (2 * b) ** (n + 1) - (2 * (b - 1)) ** (n + 1)
            ops += na * nb * (2 * (B // (a * b))) ** (n + 1)
    return ops


def _first_max_positive(V: np.ndarray) -> np.ndarray:
    """Literal sign-fix predicate per row: first coordinate of max |.| is > 0."""
    A = np.abs(V)
    m = A.max(axis=1)
    idx = np.argmax(A == m[:, None], axis=1)
    return V[np.arange(len(V)), idx] > 0


def oracle_sweep(n: int, B: int, convs: list[CountingConvention]) -> list[ExactCount]:
    """Brute-force counts for several conventions from a single literal scan.

    The enumeration and the solution test (sum x_i y_i z_i = 0, evaluated per
    tuple) are shared; every predicate is applied literally per tuple as a
    mask.  Refuses oversized scans."""
    check_dim(n)
    _validate_bound(B)
    start = time.perf_counter()
    if _oracle_budget(n, B) > _ORACLE_OPS_BUDGET:
        raise BudgetExceededError(f"oracle scan for (n={n}, B={B}) exceeds the test budget")

    B2 = B * B
    totals = [0] * len(convs)

    z_by_cap = {}

    def z_pack(Z):
        if Z not in z_by_cap:
            grid = _z_grid(n + 1, Z)
            mz = np.abs(grid).max(axis=1)
            z_by_cap[Z] = (
                grid,
                mz,
                _first_max_positive(grid),
                np.gcd.reduce(np.abs(grid), axis=1) == 1,
            )
        return z_by_cap[Z]

    for a in range(1, B + 1):
        X = _signed_exact_max(n, a)
        x_prim = np.gcd.reduce(np.abs(X), axis=1) == 1
        x_sf = _first_max_positive(X)
        for b in range(1, B // a + 1):
            Y = _signed_exact_max(n, b)
            sf_y = _first_max_positive(Y)
            prim_y = np.gcd.reduce(np.abs(Y), axis=1) == 1
            Z = B // (a * b)
            grid, mz, sf_z, prim_z = z_pack(Z)
            height_ok = a * b * mz <= B

            # Per-convention masks depend only on (a, b); hoisted out of the
            # x loop.  None marks a convention excluded for this (a, b).
            per_conv = []
            for conv in convs:
                dom = conv.domain
                zmask = height_ok.copy()
                if dom is Domain.DXY and ((a * b) ** 3 > B2 or a**3 > B):
                    per_conv.append(None)
                    continue
                if dom is Domain.DYZ:
                    if b**3 > B:
                        per_conv.append(None)
                        continue
                    zmask &= (b * mz) ** 3 <= B2
                elif dom is Domain.DZX:
                    zmask &= ((mz * a) ** 3 <= B2) & (mz**3 <= B)
                if conv.primitive:
                    zmask &= prim_z
                if "z" in conv.sign_fix:
                    zmask &= sf_z
                ymask = np.ones(len(Y), dtype=bool)
                if conv.primitive:
                    ymask &= prim_y
                if "y" in conv.sign_fix:
                    ymask &= sf_y
                per_conv.append((ymask.astype(np.int64), zmask.astype(np.int64)))

            gridT = grid.T
            for xi, x in enumerate(X):
                sol = (Y * x) @ gridT == 0
                for ci, conv in enumerate(convs):
                    masks = per_conv[ci]
                    if masks is None:
                        continue
                    if conv.primitive and not x_prim[xi]:
                        continue
                    if "x" in conv.sign_fix and not x_sf[xi]:
                        continue
                    ymask, zmask = masks
                    totals[ci] += int(ymask @ (sol @ zmask))

    elapsed = (time.perf_counter() - start) * 1000.0
    return [ExactCount(n, B, conv, t, elapsed) for conv, t in zip(convs, totals)]


def count_points_oracle(n: int, B: int, conv: CountingConvention) -> ExactCount:
    """Independent brute-force count: scan signed tuples, test sum x_i y_i z_i = 0
    and every predicate literally, per tuple.  Refuses oversized scans."""
    return oracle_sweep(n, B, [conv])[0]


def default_threads() -> int:
    """Thread count from TRIPROX_THREADS, else 1."""
    env = os.environ.get("TRIPROX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1
