import itertools
import random
from fractions import Fraction

import pytest

from qpchar.fermionic import (
    andrews_gordon_product,
    char_first_pair,
    char_first_pair_pform,
    char_last_pair,
    char_last_pair_pform,
    collapse_charges,
    dynkin_flip_check,
    fermionic_char,
    support_growth,
    verify_level1_sequence,
    verify_recursion,
)
from qpchar.series import TruncatedSeries


def brute_basis_counts(n, k, k0, j, cutoff):
    """Independent oracle: enumerate admissible quasiparticle products
    directly from the published energy bounds, without any of the package's
    enumeration machinery.  Returns dict (charges, weight) -> count."""
    counts = {}

    def charge_lists(total):
        if total == 0:
            yield ()
            return
        for first in range(min(total, k), 0, -1):
            for rest in charge_lists(total - first):
                if not rest or first >= rest[0]:
                    yield (first,) + rest

    cap = 3 * k  # generous for the tiny cutoffs used here

    def delta(i, charge):
        if j is None or i != j:
            return 0
        return max(0, min(charge, k) - k0)

    def energies(cols):
        bounds = []
        prev = ()
        for i in range(1, n + 1):
            col = cols[i - 1]
            row = []
            for p, c in enumerate(col):
                ub = sum(min(c, q) for q in prev)
                ub -= delta(i, c)
                ub -= sum(2 * min(c, col[q]) for q in range(p))
                ub -= c
                row.append(ub)
            bounds.append(row)
            prev = col
        flat = [(i, p) for i in range(n) for p in range(len(cols[i]))]
        # minimal achievable remaining weight: all later energies at their
        # (untightened) bounds, which the chain condition permits
        future_min = [0] * (len(flat) + 1)
        for idx in range(len(flat) - 1, -1, -1):
            i, p = flat[idx]
            future_min[idx] = future_min[idx + 1] - bounds[i][p]

        def rec(idx, acc, ms):
            if idx == len(flat):
                yield acc
                return
            i, p = flat[idx]
            ub = bounds[i][p]
            if p and cols[i][p] == cols[i][p - 1]:
                ub = min(ub, ms[(i, p - 1)] - 2 * cols[i][p])
            lo = acc + future_min[idx + 1] - cutoff
            for m in range(ub, lo - 1, -1):
                ms[(i, p)] = m
                yield from rec(idx + 1, acc - m, ms)

        yield from rec(0, 0, {})

    per_color = [list(charge_lists(t)) for t in range(cap + 1)]
    for totals in itertools.product(range(cap + 1), repeat=n):
        for cols in itertools.product(*[per_color[t] for t in totals]):
            for w in energies(cols):
                if w <= cutoff:
                    key = (totals, w)
                    counts[key] = counts.get(key, 0) + 1
    return counts


def test_brute_oracle_agrees_n2_k1_vacuum():
    # derived low-order table, frozen from the independent oracle
    counts = brute_basis_counts(2, 1, 1, None, 3)
    assert counts[((1, 0), 1)] == 1
    assert counts[((1, 1), 2)] == 2
    assert counts[((1, 1), 1)] == 1
    assert counts[((1, 1), 3)] == 3
    s = fermionic_char(2, 1, 1, None, 3)
    for (r, w), c in counts.items():
        assert s.coefficient(r, w) == c
    for (r, w), c in s.terms.items():
        assert counts.get((r, w), 0) == c


def test_constant_term_one():
    for n, k, k0, j in [(1, 1, 1, None), (2, 2, 1, 2), (3, 2, 0, 3), (2, 3, 3, None)]:
        s = fermionic_char(n, k, k0, j, 4)
        assert s.coefficient((0,) * n, 0) == 1


def test_vacuum_coefficients_n2_k1():
    s = fermionic_char(2, 1, 1, None, 3)
    assert s.coefficient((1, 0), 1) == 1
    assert s.coefficient((1, 1), 2) == 2
    # full table through q^3: 1 + (x1+x2)(q+q^2+q^3) + x1x2(q+2q^2+3q^3) + ...
    for r, s_, c in [((0, 0), 0, 1), ((0, 1), 1, 1), ((0, 1), 2, 1), ((0, 1), 3, 1),
                     ((1, 1), 1, 1), ((1, 1), 3, 3), ((1, 2), 3, 1), ((2, 1), 3, 1)]:
        assert s.coefficient(r, s_) == c


def test_lambda1_low_orders():
    # the color-1 single-particle bound is m <= -2 for Lambda_1, so the
    # x1-row starts at q^2
    s = fermionic_char(2, 1, 0, 1, 4)
    assert [int(s.coefficient((1, 0), w)) for w in range(5)] == [0, 0, 1, 1, 1]


def test_vacuum_ignores_color():
    a = fermionic_char(2, 2, 2, 1, 6)
    b = fermionic_char(2, 2, 2, 2, 6)
    c = fermionic_char(2, 2, 2, None, 6)
    assert a == b == c


def test_parameter_validation():
    with pytest.raises(ValueError):
        fermionic_char(0, 1, 1, None, 3)
    with pytest.raises(ValueError):
        fermionic_char(2, 1, 2, None, 3)
    with pytest.raises(ValueError):
        fermionic_char(2, 1, 0, None, 3)
    with pytest.raises(ValueError):
        fermionic_char(2, 1, 0, 3, 3)
    with pytest.raises(ValueError):
        char_first_pair(1, 2, 1, 3)
    with pytest.raises(ValueError):
        char_first_pair(2, 2, 0, 3)


def test_nonnegative_integer_coefficients():
    for series in [
        fermionic_char(2, 2, 1, 1, 8),
        fermionic_char(3, 1, 0, 2, 6),
        char_first_pair(3, 2, 1, 8),
        char_last_pair(2, 3, 2, 8),
        char_first_pair_pform(2, 2, 1, 8),
    ]:
        for (r, s), c in series.terms.items():
            assert c.denominator == 1 and c >= 0
            assert all(x >= 0 for x in r)
            assert s >= 0


def test_first_pair_constant_term():
    s = char_first_pair(2, 2, 1, 6)
    assert s.coefficient((0, 0), 0) == 1


def test_first_pair_boundary_is_two_term_char():
    # k1 = k means W(k L1), also reachable as the (k0=0, j=1) family
    for n, k in [(2, 1), (2, 2), (3, 2)]:
        a = char_first_pair(n, k, k, 8)
        b = fermionic_char(n, k, 0, 1, 8)
        assert a.equal_upto(b, 8) == (True, None)


def test_last_pair_boundary_is_two_term_char():
    for n, k in [(2, 2), (3, 2)]:
        a = char_last_pair(n, k, k, 8)
        b = fermionic_char(n, k, 0, n, 8)
        assert a.equal_upto(b, 8) == (True, None)


def test_n2_first_equals_last_display():
    # at n = 2 both displays compute the same character
    for k, k1 in [(2, 1), (3, 1), (3, 2)]:
        k2 = k - k1
        if k2 < 1:
            continue
        a = char_first_pair(2, k, k1, 8)
        b = char_last_pair(2, k, k2, 8)
        assert a.equal_upto(b, 8) == (True, None)


def test_pform_equals_rform():
    for n, k in [(2, 1), (2, 2), (3, 2), (2, 3)]:
        for edge in range(1, k + 1):
            a = char_first_pair(n, k, edge, 8)
            b = char_first_pair_pform(n, k, edge, 8)
            assert a.equal_upto(b, 8) == (True, None), (n, k, edge)
            c = char_last_pair(n, k, edge, 8)
            d = char_last_pair_pform(n, k, edge, 8)
            assert c.equal_upto(d, 8) == (True, None), (n, k, edge)


def test_pform_single_sector_hand_value():
    # one-sector hand evaluation: n=2, k=1, k1=1, p1=(1), p2=(0):
    # quad = 1, tilde = 0, move = -1, factor (1-q), denom 1/(q)_1:
    # q^0 (1-q)/(1-q) x1^{-1} x1 = 1 at (0,0)
    s = char_first_pair_pform(2, 1, 1, 4)
    assert s.coefficient((0, 0), 0) == 1


def test_pform_alternative_inner_limit_rejected():
    a = char_first_pair(2, 2, 1, 8)
    b = char_first_pair_pform(2, 2, 1, 8, inner_limit_full=False)
    ok, witness = a.equal_upto(b, 8)
    assert not ok


def test_pform_alternative_tilde_rejected():
    a = char_last_pair(3, 2, 1, 8)
    b = char_last_pair_pform(3, 2, 1, 8, tilde_typo=True)
    ok, witness = a.equal_upto(b, 8)
    assert not ok


def test_recursion_examples():
    ok, rep = verify_recursion("first", 3, 2, 1, 10)
    assert ok, rep
    ok, rep = verify_recursion("second", 2, 3, 2, 10)
    assert ok, rep


def test_recursion_perturbed_reports_witness():
    ok, rep = verify_recursion("first", 2, 2, 1, 8, rhs_k_edge=2)
    assert not ok
    assert rep["witness"] is not None
    r, s, ca, cb = rep["witness"]
    assert ca != cb


def test_recursion_rank_one_edge():
    # k = 1 instance: both identities at the smallest admissible data
    ok, _ = verify_recursion("first", 2, 1, 1, 8)
    assert ok
    ok, _ = verify_recursion("second", 2, 1, 1, 8)
    assert ok


def test_level1_sequence():
    ok, rep = verify_level1_sequence(2, 1, 10)
    assert ok, rep
    ok, rep = verify_level1_sequence(3, 2, 8)
    assert ok, rep


def test_level1_sequence_perturbed():
    ok, rep = verify_level1_sequence(2, 1, 8, q_shift=2)
    assert not ok
    assert rep["witness"] is not None


def test_dynkin_flip():
    ok, _ = dynkin_flip_check(3, 2, 1, 1, 8)
    assert ok
    # middle color of odd rank: self-symmetric
    ok, _ = dynkin_flip_check(3, 1, 0, 2, 6)
    assert ok


def test_dynkin_flip_wrong_color_fails():
    a = fermionic_char(3, 2, 1, 1, 6)
    flipped = TruncatedSeries(
        3, a.cutoff, a.floor,
        {(tuple(reversed(r)), s): c for (r, s), c in a.terms.items()},
    )
    b = fermionic_char(3, 2, 1, 2, 6)  # wrong target color
    ok, _ = flipped.equal_upto(b, 6)
    assert not ok


def test_andrews_gordon_product_values():
    p = andrews_gordon_product(1, 4)
    assert [int(p.coefficient((), s)) for s in range(5)] == [1, 1, 1, 1, 2]
    assert andrews_gordon_product(2, 3).coefficient((), 0) == 1
    assert andrews_gordon_product(2, 3).coefficient((), 1) == 1


def test_andrews_gordon_identity():
    for k in (1, 2, 3):
        sum_side = collapse_charges(fermionic_char(1, k, k, None, 30))
        prod_side = andrews_gordon_product(k, 30)
        assert sum_side.equal_upto(prod_side, 30) == (True, None), k


def test_saturation_margin_invariance():
    for n, k, k0, j in [(2, 2, 1, 1), (3, 1, 0, 2), (2, 3, 2, 2)]:
        a = fermionic_char(n, k, k0, j, 8)
        b = fermionic_char(n, k, k0, j, 8, margin=2)
        assert a == b
    assert char_first_pair(2, 2, 1, 8) == char_first_pair(2, 2, 1, 8, margin=2)
    assert char_last_pair(3, 2, 1, 8) == char_last_pair(3, 2, 1, 8, margin=2)


def test_twisted_evaluation_matches_series_substitution():
    # the horizon machinery and the exact sector-level substitution agree
    # wherever the former certifies completeness
    n, k = 2, 1
    base = fermionic_char(n, k, 1, None, 16)
    growth = support_growth(n, k)
    sub = base.substitute_scale(1, -1, growth=growth).substitute_scale(
        2, 1, growth=growth
    )
    assert sub.cutoff >= 8
    twisted = fermionic_char(n, k, 1, None, 16, twist=(-1, 1))
    ok, witness = sub.equal_upto(twisted, sub.cutoff)
    assert ok, witness


def test_twist_validation():
    with pytest.raises(ValueError):
        fermionic_char(2, 1, 1, None, 4, twist=(1,))
