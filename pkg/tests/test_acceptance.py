"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`.  Criterion 9 contains a
known-red clause: the nominal 2/n rescaling between the plain and the
max-extracted off-diagonal density fails at n = 2 (the rescaling drops the
region where the reconstructed coordinate dominates; see notes in the test
and the corrected-identity unit test in test_archimedean.py).  It is asserted
as stated and fails honestly.
"""

import math
import time

import numpy as np

from triprox import (
    CountingConvention,
    Domain,
    NAMED_CONVENTIONS,
    count_points,
    census,
    delta_series,
    divisor_count,
    exp_sum_oracle,
    kernel_h,
    local_density,
    mc_sigma1,
    mc_sigma2,
    mc_sigma_diag,
    mc_sigma_prime,
    mobius_count,
    oracle_sweep,
    predicted_constant,
    zero_freq_total,
)
from test_delta import naive_h_partial_sum
from triprox.delta_method import bump_integral


def report(num, name, ok, detail=""):
    print(f"\nACCEPTANCE {num:2d} [{name}]: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"


def test_criterion_01_oracle_equivalence():
    start = time.perf_counter()
    convs = list(NAMED_CONVENTIONS.values())
    checked = 0
    for n, B_max in ((1, 12), (2, 8), (3, 3)):
        for B in range(1, B_max + 1):
            slow = [e.count for e in oracle_sweep(n, B, convs)]
            fast = [count_points(n, B, c).count for c in convs]
            assert fast == slow, (n, B, fast, slow)
            checked += len(convs)
    elapsed = time.perf_counter() - start
    report(1, "oracle equivalence", elapsed < 60.0,
           f"{checked} (n,B,convention) cells exact-equal; {elapsed:.1f}s < 60s")


def test_criterion_02_sign_bijections():
    start = time.perf_counter()
    rows = []
    for B in (10, 25, 50):
        for domain in (Domain.FULL, Domain.DXY):
            free = count_points(2, B, CountingConvention(False, frozenset(), domain)).count
            xy = count_points(2, B, CountingConvention(False, frozenset("xy"), domain)).count
            xyz = count_points(2, B, CountingConvention(False, frozenset("xyz"), domain)).count
            ok = free == 4 * xy == 8 * xyz
            rows.append(ok)
            assert ok, (B, domain, free, xy, xyz)
    elapsed = time.perf_counter() - start
    report(2, "sign bijections", all(rows), f"{len(rows)} (B,domain) cells exact; {elapsed:.1f}s")


def test_criterion_03_mobius_identity():
    start = time.perf_counter()
    for B in (20, 50, 100):
        direct = count_points(2, B, NAMED_CONVENTIONS["primitive"]).count
        chain = mobius_count(2, B, frozenset())
        assert chain == direct, (B, chain, direct)
        direct_sf = count_points(2, B, NAMED_CONVENTIONS["primitive-signfixed"]).count
        chain_sf = mobius_count(2, B, frozenset("xy"))
        assert chain_sf == direct_sf, (B, chain_sf, direct_sf)
    elapsed = time.perf_counter() - start
    report(3, "Mobius identity", elapsed < 120.0,
           f"exact at B in (20,50,100), both sign conventions; {elapsed:.1f}s < 120s")


def test_criterion_04_singular_series():
    start = time.perf_counter()
    # closed form == oracle double sum over all residue pairs
    for n in (1, 2):
        for q in range(1, 9):
            total = 0
            k = n + 1
            for a_idx in range(q**k):
                a = [(a_idx // q**i) % q for i in range(k)]
                for b_idx in range(q**k):
                    b = [(b_idx // q**i) % q for i in range(k)]
                    total += exp_sum_oracle(q, n, a, b)
            assert total == zero_freq_total(q, n), (q, n, total)
    # multiplicativity
    for q1 in range(1, 13):
        for q2 in range(1, 13):
            if math.gcd(q1, q2) == 1:
                for n in (2, 3):
                    assert zero_freq_total(q1 * q2, n) == zero_freq_total(q1, n) * zero_freq_total(q2, n)
    # growth bound surrogate
    for n in (2, 3):
        for q in range(1, 25):
            assert zero_freq_total(q, n) <= q ** (3 + 2 * n) * divisor_count(q) ** (n + 1)
    elapsed = time.perf_counter() - start
    report(4, "singular series", True,
           f"oracle equality q<=8, multiplicativity q<=12, growth bound q<=24; {elapsed:.1f}s")


def test_criterion_05_local_density_values():
    res = local_density(2, 2, 1)
    assert res.sigma_p == 1.421875, res.sigma_p
    assert zero_freq_total(2, 2) == 216 and 216 / 2**9 == 0.421875
    worst = 0.0
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        lo = local_density(p, 2, 40).sigma_p
        hi = local_density(p, 2, 50).sigma_p
        worst = max(worst, abs(hi - lo))
    assert worst < 1e-12, worst
    report(5, "local density", True,
           f"sigma_2 partial = 1.421875 exact; max t_max drift {worst:.2e} < 1e-12")


def test_criterion_06_delta_identity():
    start = time.perf_counter()
    raw0 = delta_series(0, 32.0)
    err0 = abs(raw0 - 1.0)
    worst = max(abs(delta_series(l, 32.0)) for l in range(1, 9))
    ladder = [abs(delta_series(0, Q) - 1.0) for Q in (4.0, 8.0, 16.0, 32.0)]
    decreasing = all(a > b for a, b in zip(ladder, ladder[1:]))
    elapsed = time.perf_counter() - start
    # stated tolerance 0.05; re-frozen after the pilot at 1e-3 / 1e-12
    ok = err0 <= 0.05 and err0 <= 1e-3 and worst <= 0.05 and worst <= 1e-12
    ok = ok and decreasing and elapsed < 10.0
    report(6, "delta identity", ok,
           f"|raw(0)-1|={err0:.2e} (<=1e-3), max|raw(l)|={worst:.2e} (<=1e-12), "
           f"ladder {['%.2e' % v for v in ladder]} strictly decreasing; {elapsed:.1f}s < 10s")


def test_criterion_07_kernel_support_and_series():
    start = time.perf_counter()
    # 10^4-point grid inside the vanishing region
    rng = np.random.default_rng(0)
    ys = rng.uniform(-1.0, 1.0, 100)
    bad = 0
    for y in ys:
        lo = max(1.0, 2.0 * abs(y))
        for x in np.linspace(lo * 1.0001, lo + 4.0, 100):
            if kernel_h(float(x), float(y)) != 0.0:
                bad += 1
    assert bad == 0, f"{bad} nonzero kernel values in the vanishing region"

    # window evaluation == literal 10^6-term partial sum on a 10^3-point grid
    c0 = bump_integral()
    xs = np.linspace(0.02, 2.0, 40)
    ys = np.linspace(-1.2, 1.2, 25)
    worst = 0.0
    for x in xs:
        for y in ys:
            win = kernel_h(float(x), float(y))
            naive = naive_h_partial_sum(float(x), float(y), 1_000_000, c0)
            worst = max(worst, abs(win - naive))
    elapsed = time.perf_counter() - start
    report(7, "kernel support/series", worst < 1e-12,
           f"zero on 10^4 support-region points; window vs 10^6-term sum "
           f"max diff {worst:.2e} < 1e-12 on 10^3 grid; {elapsed:.1f}s")


def test_criterion_08_census():
    start = time.perf_counter()
    expected = {1: 0, 2: 6, 3: 60, 4: 390}
    for n, want in expected.items():
        f = census(n, "formula").count
        o = census(n, "oracle").count
        assert f == o == want, (n, f, o, want)
    elapsed = time.perf_counter() - start
    report(8, "singular census", elapsed < 5.0,
           f"formula == enumeration == {list(expected.values())}; {elapsed:.2f}s < 5s")


def test_criterion_09_archimedean():
    start = time.perf_counter()
    n, N, seed = 2, 1_000_000, 0

    clauses = []

    s1 = mc_sigma1(n, 0, 1, N, seed)
    s1p = mc_sigma_prime(n, 0, 1, 1, N, seed)
    ratio = s1.mean / s1p.mean
    se_ratio = ratio * math.hypot(s1.stderr / s1.mean, s1p.stderr / s1p.mean)
    ratio_ok = abs(ratio - 2.0 / n) <= 3.0 * se_ratio
    clauses.append(("rescaling ratio 2/n", ratio_ok,
                    f"ratio={ratio:.4f} +- {se_ratio:.4f} vs 2/n={2.0/n:.4f}"))

    d0 = mc_sigma_diag(n, 0, N, seed)
    d1 = mc_sigma_diag(n, 1, N, seed)
    sym1 = abs(d0.mean - d1.mean) <= 3 * math.hypot(d0.stderr, d1.stderr)
    s1b = mc_sigma1(n, 1, 2, N, seed)
    sym2 = abs(s1.mean - s1b.mean) <= 3 * math.hypot(s1.stderr, s1b.stderr)
    s2 = mc_sigma2(n, 0, 1, N, seed)
    sym3 = abs(s1.mean - s2.mean) <= 3 * math.hypot(s1.stderr, s2.stderr)
    clauses.append(("index symmetries", sym1 and sym2 and sym3,
                    f"diag {d0.mean:.3f}/{d1.mean:.3f}, offdiag {s1.mean:.3f}/{s1b.mean:.3f}, "
                    f"branches {s1.mean:.3f}/{s2.mean:.3f}"))

    small = mc_sigma1(n, 0, 1, 10_000, seed)
    scale_small = small.stderr * math.sqrt(10_000)
    scale_big = s1.stderr * math.sqrt(N)
    stable = abs(scale_small - scale_big) <= 0.2 * scale_big
    clauses.append(("stderr*sqrt(N) stability", stable,
                    f"{scale_small:.3f} vs {scale_big:.3f}"))

    elapsed = time.perf_counter() - start
    clauses.append(("runtime", elapsed < 180.0, f"{elapsed:.1f}s < 180s"))

    for name, ok, detail in clauses:
        print(f"    criterion 9 clause [{name}]: {'ok' if ok else 'FAILED'} ({detail})")
    all_ok = all(ok for _, ok, _ in clauses)
    detail = "; ".join(f"{name}: {'ok' if ok else 'FAILED'}" for name, ok, _ in clauses)
    if not ratio_ok:
        detail += ("  [known red: the nominal 2/n rescaling drops the region where the "
                   "reconstructed coordinate dominates; measured ratio ~1.12 at n=2. "
                   "See test_archimedean.py::TestMaxExtractedVariant for the corrected "
                   "identity that does hold.]")
    report(9, "archimedean densities", all_ok, detail)


def test_criterion_10_end_to_end_trend():
    start = time.perf_counter()
    n = 2
    conv = NAMED_CONVENTIONS["primitive"]
    rs = {}
    for B in (60, 120, 240):
        cnt = count_points(n, B, conv).count
        rs[B] = cnt / (B**n * math.log(B) ** 2)
    spread = max(rs.values()) / min(rs.values())
    pred = predicted_constant(n, 1000, 40, 1_000_000, 0)
    factor = rs[240] / pred.C if rs[240] >= pred.C else pred.C / rs[240]
    elapsed = time.perf_counter() - start
    ok = spread <= 2.0 and factor <= 3.0 and elapsed < 900.0
    report(10, "end-to-end trend", ok,
           f"r(B) = {({B: round(v, 2) for B, v in rs.items()})}, max/min = {spread:.3f} <= 2; "
           f"C = {pred.C:.2f} +- {pred.C_stderr:.2f}, r(240)/C factor = {factor:.2f} <= 3; "
           f"{elapsed:.0f}s < 900s")
