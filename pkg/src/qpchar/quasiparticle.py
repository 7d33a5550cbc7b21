"""Direct enumeration of the quasiparticle basis of W(k0 L0 + kj Lj).

A basis element is a product of quasiparticles, each carrying a color
i in 1..n, a charge in 1..k, and an energy; within a color, particles are
listed by weakly decreasing charge.  Admissibility is the literal energy
bound

    m_{p,i} <= sum_q min(n_{p,i}, n_{q,i-1})
               - #{t <= n_{p,i} : j_t = i}
               - sum_{p' < p} 2 min(n_{p,i}, n_{p',i})
               - n_{p,i}

(the color-0 particle count is zero) together with the difference-two
chain condition m_{p+1,i} <= m_{p,i} - 2 n_{p,i} between equal charges.
Counting admissible products by charge and total weight gives the
character; this module is the combinatorial cross-check for the
fermionic sums, so it enumerates energy tuples directly instead of
using any closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fermionic import iter_sectors
from .series import TruncatedSeries


@dataclass(frozen=True)
class AdmissibilityContext:
    """Parameters of a two-term highest weight k0 L0 + kj Lj."""

    n: int
    k: int
    k0: int
    j: object = None  # None for the vacuum weight (k0 = k)

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("need rank >= 1 and level >= 1")
        if not (0 <= self.k0 <= self.k):
            raise ValueError(f"k0 must lie in [0, {self.k}]")
        if self.k0 < self.k and (self.j is None or not (1 <= self.j <= self.n)):
            raise ValueError("a color j in 1..n is required when k0 < k")

    def delta_count(self, i, charge):
        """#{1 <= t <= charge : j_t = i} with j_t = 0 for t <= k0, j after."""
        if self.j is None or i != self.j:
            return 0
        return max(0, min(charge, self.k) - self.k0)


@dataclass(frozen=True)
class QPMonomial:
    """colors[i-1] lists color-i particles as (charge, energy) pairs,
    charges weakly decreasing."""

    colors: tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "colors",
            tuple(tuple((int(c), int(m)) for c, m in col) for col in self.colors),
        )

    @property
    def n(self):
        return len(self.colors)

    def charge_vector(self):
        return tuple(sum(c for c, _ in col) for col in self.colors)

    def weight(self):
        return sum(-m for col in self.colors for _, m in col)


def energy_bounds(ctx, charges):
    """Per-particle energy upper bounds for a charge assignment.

    charges[i-1] is the weakly decreasing charge list of color i; the
    result has the same shape.  Bounds can be positive when the previous
    color is heavily populated.
    """
    bounds = []
    prev = ()
    for i in range(1, ctx.n + 1):
        col = charges[i - 1]
        row = []
        for p, m_charge in enumerate(col):
            ub = sum(min(m_charge, q) for q in prev)
            ub -= ctx.delta_count(i, m_charge)
            ub -= sum(2 * min(m_charge, col[q]) for q in range(p))
            ub -= m_charge
            row.append(ub)
        bounds.append(tuple(row))
        prev = col
    return tuple(bounds)


def is_admissible(mono, ctx):
    """Literal check of the defining energy conditions."""
    if mono.n != ctx.n:
        raise ValueError("rank mismatch")
    charges = []
    for col in mono.colors:
        cs = tuple(c for c, _ in col)
        if any(not (1 <= c <= ctx.k) for c in cs):
            raise ValueError(f"charges must lie in [1, {ctx.k}]: {cs}")
        if any(cs[p] < cs[p + 1] for p in range(len(cs) - 1)):
            raise ValueError("charges must be weakly decreasing within a color")
        charges.append(cs)
    bounds = energy_bounds(ctx, tuple(charges))
    for i in range(ctx.n):
        col = mono.colors[i]
        for p, (c, m) in enumerate(col):
            if m > bounds[i][p]:
                return False
            if p and c == col[p - 1][0] and m > col[p - 1][1] - 2 * c:
                return False
    return True


def _charge_lists(total, k):
    """Weakly decreasing lists of charges in [1, k] with the given sum."""
    out = []

    def rec(prefix, remaining, hi):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for c in range(min(hi, remaining), 0, -1):
            prefix.append(c)
            rec(prefix, remaining - c, c)
            prefix.pop()

    rec([], total, k)
    return out


def _energy_tuples(charges, bounds, budget):
    """All admissible energy assignments with total weight <= budget.

    Yields (energies, weight) with energies shaped like charges.  Works in
    descent coordinates f_p = bound_p - m_p >= 0: the chain condition turns
    into f weakly increasing inside each equal-charge block, and the weight
    is (minimal sector weight) + sum f.
    """
    flat = []
    for i, col in enumerate(charges):
        for p, c in enumerate(col):
            block_start = p == 0 or col[p - 1] != c
            flat.append((i, p, c, bounds[i][p], block_start))
    base = -sum(b for _, _, _, b, _ in flat)
    if base > budget:
        return
    slack = budget - base
    count = len(flat)
    fs = [0] * count

    def rec(idx, used):
        if idx == count:
            energies = []
            pos = 0
            for col in charges:
                row = []
                for _ in col:
                    i, p, c, b, _ = flat[pos]
                    row.append(b - fs[pos])
                    pos += 1
                energies.append(tuple(row))
            yield tuple(energies), base + used
            return
        _, _, _, _, block_start = flat[idx]
        lo = 0 if block_start else fs[idx - 1]
        for f in range(lo, slack - used + 1):
            fs[idx] = f
            yield from rec(idx + 1, used + f)

    yield from rec(0, 0)


def enumerate_sector(ctx, r, cutoff):
    """All admissible monomials with charge vector r and weight <= cutoff."""
    if len(r) != ctx.n or any(c < 0 for c in r):
        raise ValueError("charge vector must be nonnegative of length n")
    out = []
    per_color = [_charge_lists(r[i], ctx.k) for i in range(ctx.n)]

    def rec(i, chosen):
        if i == ctx.n:
            charges = tuple(chosen)
            bounds = energy_bounds(ctx, charges)
            for energies, _ in _energy_tuples(charges, bounds, cutoff):
                out.append(
                    QPMonomial(
                        tuple(
                            tuple(zip(charges[c], energies[c]))
                            for c in range(ctx.n)
                        )
                    )
                )
            return
        for cs in per_color[i]:
            chosen.append(cs)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return out


def _rows_to_charges(rows, k):
    """Decreasing-count rows (entries r^(t) = #particles of charge >= t)
    to the weakly decreasing charge list of one color."""
    out = []
    for t in range(k, 0, -1):
        mult = rows[t - 1] - (rows[t] if t < k else 0)
        out.extend([t] * mult)
    return tuple(out)


def char_from_basis(ctx, cutoff, margin=0):
    """Character of W(k0 L0 + kj Lj) by direct basis counting.

    Sector candidates come from the shared certified enumeration (identical
    quadratic support); each sector's minimal weight is recomputed here from
    the energy bounds and must agree with the enumerator's exponent, which
    pins the two modules against each other.
    """
    n, k = ctx.n, ctx.k

    def linear_for(i):
        if ctx.j is not None and i == ctx.j - 1:
            return lambda row: sum(row[ctx.k0 :])
        return lambda row: 0

    sectors = iter_sectors(
        n, k, cutoff, [linear_for(i) for i in range(n)], [0] * n, margin
    )
    terms = {}
    for rows, expo in sectors:
        charges = tuple(_rows_to_charges(row, k) for row in rows)
        bounds = energy_bounds(ctx, charges)
        base = -sum(b for col in bounds for b in col)
        if base != expo:
            raise ArithmeticError(
                f"sector minimum {base} disagrees with the fermionic exponent "
                f"{expo} for charges {charges}"
            )
        if base > cutoff:
            continue
        key_r = tuple(sum(col) for col in charges)
        counts = _count_energy_tuples(charges, bounds, cutoff)
        for w, c in counts.items():
            key = (key_r, w)
            terms[key] = terms.get(key, 0) + c
    terms = {key: Fraction(c) for key, c in terms.items() if c}
    return TruncatedSeries(n, cutoff, 0, terms)


def _count_energy_tuples(charges, bounds, budget):
    """Weight -> number of admissible energy assignments, weight <= budget.

    Same recursion as _energy_tuples, without materializing the tuples: the
    descent of each particle ranges over [previous-in-block, slack]."""
    blocks = []
    for i, col in enumerate(charges):
        for p, c in enumerate(col):
            blocks.append(p == 0 or col[p - 1] != c)
    base = -sum(b for col in bounds for b in col)
    out = {}
    if base > budget:
        return out
    slack = budget - base
    count = len(blocks)

    def rec(idx, used, prev_f):
        if idx == count:
            out[base + used] = out.get(base + used, 0) + 1
            return
        lo = 0 if blocks[idx] else prev_f
        for f in range(lo, slack - used + 1):
            rec(idx + 1, used + f, f)

    rec(0, 0, 0)
    return out


def sector_counts(ctx, cutoff):
    """Rows (r_vector, s, count) for CSV emission, sorted by (s, r)."""
    series = char_from_basis(ctx, cutoff)
    rows = [(r, s, int(c)) for (r, s), c in series.terms.items()]
    rows.sort(key=lambda x: (x[1], x[0]))
    return rows
