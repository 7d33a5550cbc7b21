"""Exact truncated multivariate series in charge variables x_1..x_n and q.

A TruncatedSeries stores finitely many terms coeff * x^r q^s with exact
rational coefficients, for q-orders s between `floor` and `cutoff`.  The
cutoff is an exactness contract, not just a storage bound: every coefficient
with floor <= s <= cutoff is complete.  Operations tighten the cutoff as
needed to preserve that contract (notably multiplication of Laurent-shifted
operands and q-rescaling of variables).

Values are immutable in spirit: no method mutates its receiver, and term
dicts are never shared with callers.
"""

from __future__ import annotations

import json
from fractions import Fraction


class TruncatedSeries:
    __slots__ = ("n", "cutoff", "floor", "terms")

    def __init__(self, n, cutoff, floor=0, terms=None):
        if cutoff < floor - 1:
            # cutoff == floor - 1 encodes "no certified coefficients at all"
            raise ValueError("cutoff below floor")
        self.n = n
        self.cutoff = cutoff
        self.floor = floor
        self.terms = {}
        if terms:
            for (r, s), c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                if len(r) != n:
                    raise ValueError("charge-vector length does not match rank")
                if floor <= s <= cutoff:
                    self.terms[(tuple(r), s)] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n, cutoff, floor=0):
        return cls(n, cutoff, floor)

    @classmethod
    def one(cls, n, cutoff):
        return cls(n, cutoff, 0, {((0,) * n, 0): Fraction(1)})

    @classmethod
    def monomial(cls, n, r, s, coeff, cutoff):
        floor = min(0, s)
        return cls(n, cutoff, floor, {(tuple(r), s): Fraction(coeff)})

    # -- basic queries -----------------------------------------------------

    def coefficient(self, r, s):
        if s > self.cutoff:
            raise ValueError(f"order {s} beyond cutoff {self.cutoff}")
        return self.terms.get((tuple(r), s), Fraction(0))

    def support(self):
        return sorted(self.terms, key=lambda k: (k[1], k[0]))

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.n == other.n
            and self.cutoff == other.cutoff
            and self.floor == other.floor
            and self.terms == other.terms
        )

    def __repr__(self):
        k = len(self.terms)
        return f"TruncatedSeries(n={self.n}, cutoff={self.cutoff}, terms={k})"

    # -- ring operations ---------------------------------------------------

    def _require_same_rank(self, other):
        if self.n != other.n:
            raise ValueError(f"rank mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._require_same_rank(other)
        cutoff = min(self.cutoff, other.cutoff)
        floor = min(self.floor, other.floor)
        terms = {}
        for src in (self.terms, other.terms):
            for key, c in src.items():
                if key[1] <= cutoff:
                    v = terms.get(key, Fraction(0)) + c
                    if v:
                        terms[key] = v
                    elif key in terms:
                        del terms[key]
        return TruncatedSeries(self.n, cutoff, floor, terms)

    def __neg__(self):
        return TruncatedSeries(
            self.n, self.cutoff, self.floor,
            {k: -c for k, c in self.terms.items()},
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return TruncatedSeries.zero(self.n, self.cutoff, self.floor)
        return TruncatedSeries(
            self.n, self.cutoff, self.floor,
            {k: c * v for k, v in self.terms.items()},
        )

    def __mul__(self, other):
        self._require_same_rank(other)
        # a coefficient at order s is complete iff every split s = u + v with
        # u, v above the operand floors has u, v within the operand cutoffs
        cutoff = min(self.cutoff + other.floor, other.cutoff + self.floor)
        floor = self.floor + other.floor
        terms = {}
        for (r1, s1), c1 in self.terms.items():
            for (r2, s2), c2 in other.terms.items():
                s = s1 + s2
                if s > cutoff:
                    continue
                key = (tuple(a + b for a, b in zip(r1, r2)), s)
                v = terms.get(key, Fraction(0)) + c1 * c2
                if v:
                    terms[key] = v
                elif key in terms:
                    del terms[key]
        return TruncatedSeries(self.n, cutoff, floor, terms)

    # -- q-series helpers ----------------------------------------------------

    def invert_unit(self):
        """Inverse series b with self * b = 1 up to the cutoff.

        Requires floor = 0 and an x-free nonzero constant term.  Layers of
        higher q-order may carry x-dependence; the inversion then solves
        layer by layer.
        """
        if self.floor != 0:
            raise ValueError("invert_unit requires q_floor = 0")
        layers = {}
        for (r, s), c in self.terms.items():
            layers.setdefault(s, {})[r] = c
        zero_layer = layers.get(0, {})
        const = zero_layer.get((0,) * self.n, Fraction(0))
        if const == 0 or len(zero_layer) != 1:
            raise ValueError("constant term must be a nonzero x-free scalar")
        inv = {0: {(0,) * self.n: 1 / const}}
        for s in range(1, self.cutoff + 1):
            acc = {}
            for u in range(1, s + 1):
                if u not in layers:
                    continue
                for ra, ca in layers[u].items():
                    for rb, cb in inv.get(s - u, {}).items():
                        key = tuple(a + b for a, b in zip(ra, rb))
                        v = acc.get(key, Fraction(0)) + ca * cb
                        if v:
                            acc[key] = v
                        elif key in acc:
                            del acc[key]
            if acc:
                inv[s] = {r: -c / const for r, c in acc.items()}
        terms = {(r, s): c for s, layer in inv.items() for r, c in layer.items()}
        return TruncatedSeries(self.n, self.cutoff, 0, terms)

    def monomial_shift(self, c, d):
        """Multiply every term by x^c q^d exactly; adjusts floor and cutoff."""
        if len(c) != self.n:
            raise ValueError("shift vector length does not match rank")
        terms = {
            (tuple(a + b for a, b in zip(r, c)), s + d): v
            for (r, s), v in self.terms.items()
        }
        return TruncatedSeries(self.n, self.cutoff + d, self.floor + d, terms)

    def substitute_scale(self, i, e, charge_bound=None, growth=None):
        """Substitute x_i -> x_i q^e: each term (r, s) maps to (r, s + e*r_i).

        When the substitution can pull terms from beyond the cutoff into low
        q-orders (e < 0 on a series with unbounded x_i-support), the result
        cutoff is tightened so every retained coefficient is provably
        complete.  The caller certifies the support of the *untruncated*
        series in one of two ways:

        - charge_bound=(lo, hi): every nonzero coefficient, at any q-order,
          has lo <= r_i <= hi;
        - growth=(a, b): every nonzero coefficient has r_i >= 0 and
          s >= a*r_i^2 - b*r_i (exact rationals), the shape of character
          supports.

        With e >= 0 and nonnegative x_i-support (growth given, or
        charge_bound with lo >= 0) no tightening is needed.
        """
        if not (1 <= i <= self.n):
            raise ValueError(f"variable index {i} out of range")
        if e == 0:
            return TruncatedSeries(self.n, self.cutoff, self.floor, dict(self.terms))
        new_cutoff = self._substituted_cutoff(i, e, charge_bound, growth)
        terms = {}
        floor = self.floor
        for (r, s), c in self.terms.items():
            s2 = s + e * r[i - 1]
            floor = min(floor, s2)
            if s2 <= new_cutoff:
                terms[(r, s2)] = c
        floor = min(floor, new_cutoff + 1)
        return TruncatedSeries(self.n, new_cutoff, floor, terms)

    def _substituted_cutoff(self, i, e, charge_bound, growth):
        if charge_bound is not None:
            lo, hi = charge_bound
            shift_min = min(e * lo, e * hi)
            return self.cutoff + shift_min
        if growth is not None:
            a, b = Fraction(growth[0]), Fraction(growth[1])
            if a <= 0:
                raise ValueError("growth certificate needs a > 0")
            if e > 0:
                return self.cutoff
            amt = -e
            # largest h such that no r >= 0 can satisfy both
            #   a r^2 - (b + amt) r <= h   (a slot at order <= h exists)
            #   h + amt * r > cutoff       (its source order is beyond cutoff)
            for h in range(self.cutoff, self.floor - 2, -1):
                r = 1
                polluted = False
                while a * r * r - (b + amt) * r <= h:
                    if h + amt * r > self.cutoff:
                        polluted = True
                        break
                    r += 1
                if not polluted:
                    return h
            return self.floor - 1
        raise ValueError(
            "substitute_scale with e != 0 needs charge_bound or growth "
            "to certify completeness"
        )

    # -- comparison ----------------------------------------------------------

    def equal_upto(self, other, order):
        """Compare coefficients with s <= order; (True, None) or (False, witness).

        The witness is the lexicographically first (by (s, r)) discrepancy as
        (r, s, coeff_self, coeff_other).  Raises when either operand does not
        certify coefficients up to the requested order.
        """
        self._require_same_rank(other)
        if order > self.cutoff or order > other.cutoff:
            raise ValueError(
                f"comparison order {order} beyond certified cutoffs "
                f"({self.cutoff}, {other.cutoff})"
            )
        keys = set(self.terms) | set(other.terms)
        for key in sorted(keys, key=lambda k: (k[1], k[0])):
            r, s = key
            if s > order:
                continue
            a = self.terms.get(key, Fraction(0))
            b = other.terms.get(key, Fraction(0))
            if a != b:
                return False, (r, s, a, b)
        return True, None

    # -- serialization -------------------------------------------------------

    def to_json_dict(self):
        out = {"n": self.n, "cutoff": self.cutoff}
        if self.floor != 0:
            out["floor"] = self.floor
        out["terms"] = [
            {"x": list(r), "q": s, "coeff": _fraction_str(self.terms[(r, s)])}
            for (r, s) in self.support()
        ]
        return out

    def to_json(self):
        return json.dumps(self.to_json_dict(), separators=(",", ":"), sort_keys=False)

    @classmethod
    def from_json_dict(cls, d):
        terms = {
            (tuple(t["x"]), t["q"]): Fraction(t["coeff"])
            for t in d["terms"]
        }
        return cls(d["n"], d["cutoff"], d.get("floor", 0), terms)

    @classmethod
    def from_json(cls, s):
        return cls.from_json_dict(json.loads(s))


def _fraction_str(c):
    return str(c)


def pochhammer(r, cutoff, n=0):
    """(q)_r = prod_{i=1}^r (1 - q^i), truncated; (q)_0 = 1."""
    if r < 0:
        raise ValueError("pochhammer index must be nonnegative")
    zero = (0,) * n
    coeffs = [Fraction(1)] + [Fraction(0)] * cutoff
    for i in range(1, r + 1):
        nxt = coeffs[:]
        for s in range(i, cutoff + 1):
            nxt[s] -= coeffs[s - i]
        coeffs = nxt
    terms = {(zero, s): c for s, c in enumerate(coeffs) if c}
    return TruncatedSeries(n, cutoff, 0, terms)


def inverse_pochhammer_coeffs(r, cutoff):
    """Integer coefficient list of 1/(q)_r up to the cutoff (partitions with
    parts <= r)."""
    coeffs = [1] + [0] * cutoff
    for part in range(1, r + 1):
        for s in range(part, cutoff + 1):
            coeffs[s] += coeffs[s - part]
    return coeffs
