"""Free algebra on modes of root vectors, PBW straightening, and the
finite-window machinery for the completed enveloping algebra.

Elements live in one of three layers:

  * FreeElement: exact linear combination of words, a word being a tuple of
    (mode, root) factors with roots encoded as simple-root intervals (a, b);
  * PBWElement: combination of canonically ordered monomials, factors sorted
    by (mode, root) with nonnegative modes rightmost, so the "ends in a
    nonnegative mode" monomials span exactly the right ideal complement of
    the negative-mode subalgebra;
  * WindowedElement: the window-W truncation of a formal (possibly
    infinite) sum, keeping the PBW monomials all of whose suffix mode-sums
    are <= W.

The degree-(k+1) power sums of a single color's root vector, their
truncations, and their canonical completion representatives are built
here, together with the commutator identity and left-ideal membership
checks that exercise them at finite window.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .rootdata import add_roots, root_coords, structure_constant

# A word is a tuple of (mode, root) pairs, root = (a, b) interval; the empty
# word is the algebra unit.  Elements are dicts word -> Fraction with no
# zero values.


def free_element(terms):
    out = {}
    for word, c in terms.items():
        c = Fraction(c)
        if c:
            out[tuple(tuple(f) if isinstance(f, list) else f for f in word)] = c
    return out


def generator(mode, root):
    return {((mode, tuple(root)),): Fraction(1)}


def free_mul(a, b):
    """Concatenation product of two free elements."""
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            v = out.get(w, Fraction(0)) + ca * cb
            if v:
                out[w] = v
            elif w in out:
                del out[w]
    return out


def free_add(a, b, sign=1):
    out = dict(a)
    for w, c in b.items():
        v = out.get(w, Fraction(0)) + sign * c
        if v:
            out[w] = v
        elif w in out:
            del out[w]
    return out


def free_scale(a, c):
    c = Fraction(c)
    if not c:
        return {}
    return {w: c * v for w, v in a.items()}


def word_modes(word):
    return tuple(m for m, _ in word)


def tau_suffix(modes):
    """Suffix sums (m_1+...+m_r, m_2+...+m_r, ..., m_r)."""
    out = []
    total = 0
    for m in reversed(modes):
        total += m
        out.append(total)
    return tuple(reversed(out))


def word_leq(word, bound):
    """True when every suffix mode-sum of the word is <= bound."""
    total = 0
    for m, _ in reversed(word):
        total += m
        if total > bound:
            return False
    return True


def supp_window(a, bound):
    """The words of Supp(a) whose every suffix mode-sum is <= bound."""
    return {w for w in a if word_leq(w, bound)}


def _factor_key(f):
    m, (x, y) = f
    return (m, x, y)


def straighten(a, n):
    """Canonical PBW form of a free element over rank n.

    Repeatedly swaps adjacent out-of-order factors, adding the bracket term
    C_{r1,r2} x_{r1+r2}(m1+m2) when the roots concatenate; same-root factors
    commute.  Idempotent on straightened input and a ring morphism.
    """
    out = {}
    stack = list(a.items())
    while stack:
        word, coeff = stack.pop()
        spot = None
        for idx in range(len(word) - 1):
            if _factor_key(word[idx]) > _factor_key(word[idx + 1]):
                spot = idx
                break
        if spot is None:
            v = out.get(word, Fraction(0)) + coeff
            if v:
                out[word] = v
            elif word in out:
                del out[word]
            continue
        (m1, r1), (m2, r2) = word[spot], word[spot + 1]
        swapped = word[:spot] + ((m2, r2), (m1, r1)) + word[spot + 2 :]
        stack.append((swapped, coeff))
        merged_root = add_roots(r1, r2)
        if merged_root is not None:
            c = structure_constant(r1, r2, n)
            merged = word[:spot] + ((m1 + m2, merged_root),) + word[spot + 2 :]
            stack.append((merged, coeff * c))
    return out


def pbw_mul(a, b, n):
    return straighten(free_mul(a, b), n)


def decompose(a):
    """(negative part, rest): monomials with all modes <= -1 versus
    monomials containing a nonnegative mode.  Input must be straightened."""
    minus, plus = {}, {}
    for word, c in a.items():
        if all(m <= -1 for m, _ in word):
            minus[word] = c
        else:
            plus[word] = c
    return minus, plus


def multinomial_c(modes):
    """Number of distinct orderings of the mode tuple."""
    counts = Counter(modes)
    out = math.factorial(len(modes))
    for v in counts.values():
        out //= math.factorial(v)
    return out


def _sorted_mode_tuples(count, total, max_last, min_part=None):
    """Weakly increasing integer tuples of the given length summing to
    `total` with final (largest) entry <= max_last."""
    out = []

    def rec(prefix, remaining, lo, left):
        if left == 1:
            if lo <= remaining <= max_last:
                out.append(tuple(prefix) + (remaining,))
            return
        # entries are weakly increasing: current entry v satisfies
        # v <= remaining / left and the rest each at most max_last
        hi = remaining // left
        v_lo = max(lo, remaining - max_last * (left - 1))
        if min_part is not None:
            v_lo = max(v_lo, min_part)
        for v in range(v_lo, hi + 1):
            prefix.append(v)
            rec(prefix, remaining - v, v, left - 1)
            prefix.pop()

    rec([], total, -(10**9), count)
    return out


def truncated_R(color, t, bound_m, k, n):
    """PBW form of the degree-(k+1) power sum of color i at total mode -t,
    restricted to factor modes <= bound_m; zero when no tuple fits."""
    root = (color, color)
    out = {}
    for modes in _sorted_mode_tuples(k + 1, -t, bound_m):
        word = tuple((m, root) for m in modes)
        out[word] = Fraction(multinomial_c(modes))
    return out


@dataclass(frozen=True)
class WindowedElement:
    """Window-W truncation of a formal sum; body keeps exactly the PBW
    monomials all of whose suffix mode-sums are <= window."""

    window: int
    body: dict

    def __post_init__(self):
        for word in self.body:
            if not word_leq(word, self.window):
                raise ValueError(f"word {word} violates window {self.window}")

    def restrict(self, window):
        if window > self.window:
            raise ValueError("cannot widen a windowed truncation")
        return WindowedElement(
            window, {w: c for w, c in self.body.items() if word_leq(w, window)}
        )


def representative_R(color, t, k, window, n, assemble_via=None):
    """Window truncation of the canonical completion representative of the
    color-i power sum at total mode -t.

    In PBW coordinates the representative is the multiset sum over all
    weakly increasing mode tuples, so the window truncation keeps those
    whose suffix sums fit.  assemble_via = M builds it instead from the
    mode <= M truncation plus the tail with largest mode >= M+1 (the two
    assemblies must agree; exposed for tests).
    """
    if window < -1:
        raise ValueError("window must be >= -1")
    root = (color, color)
    if assemble_via is not None:
        M = assemble_via
        body = {
            w: c
            for w, c in truncated_R(color, t, M, k, n).items()
            if word_leq(w, window)
        }
        for modes in _sorted_mode_tuples(k + 1, -t, window):
            if modes[-1] >= M + 1:
                word = tuple((m, root) for m in modes)
                body[word] = body.get(word, Fraction(0)) + multinomial_c(modes)
        body = {w: c for w, c in body.items() if c}
        return WindowedElement(window, body)
    body = {}
    for modes in _sorted_mode_tuples(k + 1, -t, window):
        word = tuple((m, root) for m in modes)
        if word_leq(word, window):
            body[word] = Fraction(multinomial_c(modes))
    return WindowedElement(window, body)


def lemma_commutator_check(color, t, alpha, m, window, n, k, zero_mode_sign=1):
    """Window check of the commutator identity moving the completion
    representative past x_alpha(-m):

        Rep_t x_a(-m) - x_a(-m) Rep_t + zero_mode_sign * x_a(0) R_{t+m}
        has no all-negative part,

    i.e. Rep_t x_a(-m) = x_a(-m) Rep_t - x_a(0) R_{t+m} modulo monomials
    with a nonnegative mode.  The x_a(0) term enters with a minus:
    commuting x_a(0) into the power sum produces C_{alpha, alpha_i}
    brackets, the antisymmetric mates of the C_{alpha_i, alpha} brackets
    from moving x_a(-m) leftward.  zero_mode_sign = -1 is the natural
    perturbation and must fail whenever the roots interact.

    The internal window is raised to max(window, m-1, 0): beyond-window
    tails only produce monomials containing a nonnegative mode once the
    window reaches m-1, so the all-negative part is then exact.

    Returns (ok, report).
    """
    if m < 0:
        raise ValueError("m must be a nonnegative integer")
    w_eff = max(window, m - 1, 0)
    rep_t = representative_R(color, t, k, w_eff, n).body
    rep_tm = representative_R(color, t + m, k, w_eff, n).body
    x_neg = generator(-m, alpha)
    x_zero = generator(0, alpha)
    d = free_add(free_mul(rep_t, x_neg), free_mul(x_neg, rep_t), sign=-1)
    d = free_add(d, free_mul(x_zero, rep_tm), sign=zero_mode_sign)
    minus, _ = decompose(straighten(d, n))
    ok = not minus
    report = {
        "color": color,
        "t": t,
        "alpha": alpha,
        "m": m,
        "window": window,
        "window_used": w_eff,
        "residual": render(minus) if minus else None,
    }
    return ok, report


def _monomial_depth(word):
    return -sum(m for m, _ in word)


def _coords_sum(word, n):
    total = [0] * n
    for _, root in word:
        for idx, c in enumerate(root_coords(root, n)):
            total[idx] += c
    return tuple(total)


def _root_multisets(target, n, roots=None):
    """All multisets of positive roots whose coordinate vectors sum to
    target, as sorted tuples."""
    if roots is None:
        roots = [(a, b) for a in range(1, n + 1) for b in range(a, n + 1)]
    out = []

    def rec(idx, remaining, chosen):
        if all(v == 0 for v in remaining):
            out.append(tuple(chosen))
            return
        if idx == len(roots):
            return
        root = roots[idx]
        rc = root_coords(root, n)
        rec(idx + 1, remaining, chosen)
        if all(r >= c for r, c in zip(remaining, rc)):
            chosen.append(root)
            rec(idx, tuple(r - c for r, c in zip(remaining, rc)), chosen)
            chosen.pop()

    rec(0, tuple(target), [])
    return out


def _left_factor_monomials(coords, mode_total, n):
    """PBW monomials with the given root-coordinate content, modes <= 0
    summing to mode_total."""
    out = []
    for multiset in _root_multisets(coords, n):
        count = len(multiset)
        if count == 0:
            if mode_total == 0:
                out.append(())
            continue
        for modes in _mode_assignments(count, mode_total):
            word = tuple(sorted(zip(modes, multiset), key=_factor_key))
            out.append(word)
    return sorted(set(out))


def _mode_assignments(count, total):
    """Tuples of `count` modes <= 0 summing to total (order significant)."""
    out = []

    def rec(prefix, remaining, left):
        if left == 1:
            if remaining <= 0:
                out.append(tuple(prefix) + (remaining,))
            return
        for v in range(remaining - 0 * (left - 1), 1):
            prefix.append(v)
            rec(prefix, remaining - v, left - 1)
            prefix.pop()

    rec([], total, count)
    return out


def corollary_ideal_check(color, t, a, window, n, k):
    """Membership of Rep_t * a, a an all-negative element, in the left
    ideal generated by the mode <= -1 power-sum truncations, modulo
    monomials containing a nonnegative mode.

    The all-negative part of the straightened product is matched, by exact
    linear solve, against the all-negative parts of u * R_{-1,t'} over
    left factors u with modes <= 0 of matching charge and degree (t' runs
    over k+1 .. t + depth).  Returns (ok, report); ok = True exhibits an
    explicit membership witness.
    """
    for word in a:
        if any(m >= 0 for m, _ in word):
            raise ValueError("the right factor must have all modes <= -1")
    if not a:
        return True, {"witness": {}}
    depth = max(_monomial_depth(w) for w in a)
    w_eff = max(window, depth - 1, 0)
    rep = representative_R(color, t, k, w_eff, n).body
    target, _ = decompose(straighten(free_mul(rep, a), n))

    columns = []
    labels = []
    root_c = root_coords((color, color), n)
    grades = set()
    for word, _ in target.items():
        grades.add((_coords_sum(word, n), sum(m for m, _ in word)))
    for word in a:
        grades.add(
            (
                tuple(
                    c + (k + 1) * rc
                    for c, rc in zip(_coords_sum(word, n), root_c)
                ),
                sum(m for m, _ in word) - t,
            )
        )
    for coords, mode_total in sorted(grades):
        u_coords = tuple(c - (k + 1) * rc for c, rc in zip(coords, root_c))
        if any(c < 0 for c in u_coords):
            continue
        for t_prime in range(k + 1, t + depth + 1):
            u_modes_total = mode_total + t_prime
            if u_modes_total > 0:
                continue
            gen_r = truncated_R(color, t_prime, -1, k, n)
            if not gen_r:
                continue
            for u in _left_factor_monomials(u_coords, u_modes_total, n):
                col, _ = decompose(pbw_mul(dict.fromkeys([u], Fraction(1)), gen_r, n))
                if col:
                    labels.append((u, t_prime))
                    columns.append(col)
    solution = _solve_membership(target, columns)
    if solution is None:
        return False, {
            "witness": None,
            "window_used": w_eff,
            "candidates": len(columns),
        }
    witness = {
        labels[idx]: coeff for idx, coeff in solution.items() if coeff
    }
    return True, {"witness": witness, "window_used": w_eff}


def _solve_membership(target, columns):
    """Exact solve of sum_j x_j * columns[j] = target; None if inconsistent."""
    basis = sorted(set(target) | {w for col in columns for w in col})
    index = {w: r for r, w in enumerate(basis)}
    rows = len(basis)
    width = len(columns)
    mat = [[Fraction(0)] * (width + 1) for _ in range(rows)]
    for j, col in enumerate(columns):
        for w, c in col.items():
            mat[index[w]][j] = c
    for w, c in target.items():
        mat[index[w]][width] = c
    pivots = []
    r = 0
    for c in range(width):
        pr = next((i for i in range(r, rows) if mat[i][c]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [v - f * w_ for v, w_ in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if mat[i][width]:
            return None
    return {c: mat[i][width] for i, c in enumerate(pivots)}


def tau_automorphism(lam_pairings, nu_values, a, n):
    """The algebra automorphism x_root(m) -> nu(root) x_root(m - <lam, root>).

    lam_pairings gives <lam, alpha_i> per simple root (integers); nu_values
    the nonzero character values nu(alpha_i), extended multiplicatively.
    Input and output are straightened.
    """
    if len(lam_pairings) != n or len(nu_values) != n:
        raise ValueError("need one pairing and one character value per color")
    if any(Fraction(v) == 0 for v in nu_values):
        raise ValueError("character values must be nonzero")
    out = {}
    for word, c in a.items():
        factor = Fraction(1)
        new_word = []
        for m, root in word:
            a_, b_ = root
            pairing = sum(lam_pairings[i - 1] for i in range(a_, b_ + 1))
            for i in range(a_, b_ + 1):
                factor *= Fraction(nu_values[i - 1])
            new_word.append((m - pairing, root))
        w = tuple(new_word)
        v = out.get(w, Fraction(0)) + c * factor
        if v:
            out[w] = v
        elif w in out:
            del out[w]
    return straighten(out, n)


def render(a):
    """Stable text rendering: one '<coeff> * x_{a..b}(m)...' term per line."""
    if not a:
        return "0"
    lines = []
    for word in sorted(a, key=lambda w: (len(w), [_factor_key(f) for f in w])):
        factors = "".join(
            f"x_{{{x}..{y}}}({m})" if x != y else f"x_{{{x}}}({m})"
            for m, (x, y) in word
        )
        lines.append(f"{a[word]} * {factors}" if factors else f"{a[word]} * 1")
    return "\n".join(lines)
