"""Acceptance criteria 1-8 over the parameter grid.

Each test prints one ``ACCEPTANCE <n>: PASS|FAIL`` line, even under output
capture, then asserts.
"""
import contextlib
import json
import random
import time
from decimal import Decimal, localcontext
from fractions import Fraction

from conftest import GRID, contains, oracle_pow, oracle_s
from fracmeas.cli import main
from fracmeas.clusters import (cluster, cluster_diameter, enumerate_gaps, expected_gap_counts,
                               gap_length, gap_type_counts)
from fracmeas.exact import Ordering, density_compare, pow_s_bracket
from fracmeas.hausdorff import (absorption_chain, exhaustive_union_oracle, level_density,
                                max_density_consecutive)
from fracmeas.ifs import ConsecutiveUnion, Params, Word, level_set
from fracmeas.measure import cdf
from fracmeas.packing import (boundary_density_scan, candidate_interval, evaluate_centered,
                              packing_scan)

MAX_BASIC = 4096


def levels(p: Params, cap: int | None = None):
    """Levels 1, 2, ... with n**k <= 4096, optionally also k <= cap."""
    out, k = [], 1
    while p.n ** k <= MAX_BASIC and (cap is None or k <= cap):
        out.append(k)
        k += 1
    return out


@contextlib.contextmanager
def criterion(capsys, number: int, title: str):
    """Print the pass/fail line for one criterion around its body."""
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: FAIL  {title}  ({type(exc).__name__}: {exc})")
        raise
    with capsys.disabled():
        print(f"\nACCEPTANCE {number}: PASS  {title}  ({time.perf_counter() - start:.1f} s)")


def test_criterion_1_closed_forms(capsys):
    with criterion(capsys, 1, "dims brackets at >= 50 digits contain the oracle values"):
        for n, l in GRID:
            start = time.perf_counter()
            assert main(["dims", "--n", str(n), "--l", str(l), "--json", "--digits", "50"],
                        environ={}) == 0
            elapsed = time.perf_counter() - start
            data = json.loads(capsys.readouterr().out)
            r = Fraction(n - 1, l - 1)
            assert data["r"]["value"] == f"{r.numerator}/{r.denominator}"
            for key, oracle in (("s", oracle_s(n, l)),
                                ("hausdorff_measure", oracle_pow(r, n, l)),
                                ("packing_measure", oracle_pow(2, n, l))):
                lo, hi = data[key]["decimal_bracket"]
                assert len(lo.split(".")[1]) >= 50 and len(hi.split(".")[1]) >= 50
                assert contains(Fraction(lo), Fraction(hi), oracle), (n, l, key)
            assert elapsed < 1.0, (n, l, elapsed)


def test_criterion_2_hausdorff_search(capsys):
    with criterion(capsys, 2, "max_density_consecutive equals d(O_k) up to n^k <= 4096"):
        for nl in GRID:
            p = Params(*nl)
            for k in levels(p):
                res = max_density_consecutive(p, k)
                assert res.equals_Ok, (nl, k)
                assert res.max_density.pair == level_density(p, k).pair


def test_criterion_3_exhaustive_oracle(capsys):
    with criterion(capsys, 3, "all 2^(n^k) unions for n^k <= 16"):
        checked = 0
        for nl in GRID:
            p = Params(*nl)
            for k in (k for k in range(1, 5) if p.n ** k <= 16):
                best = exhaustive_union_oracle(p, k)
                assert best.pair == level_density(p, k).pair, (nl, k)
                assert best.pair == max_density_consecutive(p, k).max_density.pair
                checked += 1
        assert checked > 0


def test_criterion_4_gap_cluster_audit(capsys):
    with criterion(capsys, 4, "gap lengths, gap counts and cluster diameters at k <= 8"):
        for nl in GRID:
            p = Params(*nl)
            for k in levels(p, 8):
                gaps = enumerate_gaps(p, k)
                for g in gaps:
                    types = [i for i in range(1, k + 1) if g.length == gap_length(p, i, k)]
                    assert types == [g.type_i], (nl, k, g)
                assert gap_type_counts(gaps) == expected_gap_counts(p, k)
                assert sum(expected_gap_counts(p, k).values()) == len(gaps)
                for i in range(k + 1):
                    for v in range(p.n ** (k - i)):
                        hull = cluster(p, i, k, Word.from_index(p, v, k - i))
                        assert hull.diameter == cluster_diameter(p, i, k), (nl, k, i, v)


def test_criterion_5_measure_engine(capsys):
    with criterion(capsys, 5, "cdf self-similarity at 1000 rationals, gap plateaus, F(r) = 1"):
        for nl in GRID:
            p = Params(*nl)
            rng = random.Random(1000 * p.n + p.l)
            for _ in range(1000):
                den = rng.randint(1, 10 ** 9)
                x = Fraction(rng.randint(0, den), den)
                Fx = cdf(p, x)
                for i in p.alphabet:
                    assert cdf(p, (x + i) / p.l) == (i + Fx) / p.n, (nl, x, i)
            for k in levels(p, 8):
                for g in enumerate_gaps(p, k):
                    assert cdf(p, g.left) == cdf(p, g.right), (nl, g)
            assert cdf(p, p.r) == 1


def test_criterion_6_absorption(capsys):
    with criterion(capsys, 6, "200 absorption chains per pair end at O_k, monotone, exact lambda"):
        for nl in GRID:
            p = Params(*nl)
            rng = random.Random(7 * p.n + p.l)
            ks = levels(p, 6)
            for _ in range(200):
                k = rng.choice(ks)
                N = p.n ** k
                a, b = sorted((rng.randrange(N), rng.randrange(N)))
                chain = absorption_chain(p, ConsecutiveUnion(p, k, a, b))
                end = chain.steps[-1].after if chain.steps else None
                if end is None:
                    # the blown-down union was already a full level set
                    assert chain.start.count == p.n ** chain.level
                else:
                    assert end == level_set(p, chain.level)
                for s in chain.steps:
                    assert s.lambda_inv == s.p + (p.l - p.n) * s.N
                    assert density_compare(s.density_before,
                                           s.density_after).ordering is not Ordering.GREATER
                if chain.depth:
                    assert density_compare(level_density(p, chain.level),
                                           level_density(p, k)).ordering is Ordering.LESS


def test_criterion_7_packing(capsys):
    with criterion(capsys, 7, "packing candidate, boundary scans and packing_scan(6, 512)"):
        for nl in GRID:
            start = time.perf_counter()
            p = Params(*nl)
            cand = evaluate_centered(p, candidate_interval(p))
            assert cand.density is not None and cand.density.pair == (1, 2)
            scan = boundary_density_scan(p, 500, seed=0)
            assert scan.passed
            assert len(scan.random_left) == len(scan.random_right) == 500
            critical = scan.critical_left + scan.critical_right
            assert all(c.ordering is not Ordering.LESS for c in critical)
            eq = {(c.left, c.right) for c in scan.equalities}
            assert (0, Fraction(1, p.l)) in eq and ((p.n - 2 + p.r) / p.l, p.r) in eq
            res = packing_scan(p, center_level=6, radius_grid=512, seed=0)
            lo, hi = res.min_density_bracket
            t_lo, t_hi = res.target
            assert lo <= t_hi and t_lo <= hi, nl
            assert contains(lo, hi, oracle_pow(Fraction(1, 2), *nl))
            assert res.candidate_attains_target
            assert time.perf_counter() - start < 60, nl


def test_criterion_8_literature(capsys):
    with criterion(capsys, 8, "(2,3): P^s * 2^s = 4^s ~ 2.398 and H^s * 2^s = 1"):
        p = Params(2, 3)
        bits = 200
        P_lo, P_hi = pow_s_bracket(2, p, bits)
        H_lo, H_hi = pow_s_bracket(p.r, p, bits)
        # for (2, 3) the packing measure is 2**s itself, so P^s * 2^s = 4^s
        prod_lo, prod_hi = P_lo * P_lo, P_hi * P_hi
        four = oracle_pow(4, 2, 3)
        assert contains(prod_lo, prod_hi, four)
        with localcontext() as ctx:
            ctx.prec = 50
            assert round(Decimal(prod_lo.numerator) / prod_lo.denominator, 3) == Decimal("2.398")
            assert round(Decimal(prod_hi.numerator) / prod_hi.denominator, 3) == Decimal("2.398")
        assert H_lo * P_lo <= 1 <= H_hi * P_hi
