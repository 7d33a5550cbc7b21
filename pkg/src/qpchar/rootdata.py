"""Static type-A root and weight lattice data.

Everything downstream (character sums, basis enumeration, enveloping-algebra
straightening, the lattice realization) shares the conventions fixed here:
the Cartan matrix, the bilinear form normalized so every root has square
length 2, the positive roots as intervals of simple roots, and one fixed
bimultiplicative 2-cocycle with values in {+1, -1}.

Weights are stored in simple-root coordinates (exact rationals), so a single
form computed from the Cartan matrix serves roots and weights uniformly.
All values are immutable and all operations pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


def cartan_matrix(n):
    """Cartan matrix of type A_n as a tuple of tuples of ints."""
    if n < 1:
        raise ValueError(f"rank must be >= 1, got {n}")
    return tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n))
        for i in range(n)
    )


# A positive root alpha_a + ... + alpha_b is encoded by the 1-based interval
# (a, b), a <= b.  Simple roots are (i, i).


def positive_roots(n):
    """All positive roots of A_n as interval pairs, sorted lexicographically."""
    if n < 1:
        raise ValueError(f"rank must be >= 1, got {n}")
    return tuple((a, b) for a in range(1, n + 1) for b in range(a, n + 1))


def root_coords(root, n):
    """0/1 coordinate vector of an interval root in the simple-root basis."""
    a, b = root
    if not (1 <= a <= b <= n):
        raise ValueError(f"{root} is not a positive root of A_{n}")
    return tuple(1 if a <= i <= b else 0 for i in range(1, n + 1))


@dataclass(frozen=True)
class Weight:
    """Element of the weight lattice P (or its rational span).

    coords holds exact simple-root coordinates, so elements of the root
    lattice Q are exactly those with integer coordinates.
    """

    coords: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coords", tuple(Fraction(c) for c in self.coords)
        )

    @property
    def n(self):
        return len(self.coords)

    def __add__(self, other):
        _check_rank(self, other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        _check_rank(self, other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Weight(tuple(-a for a in self.coords))

    def is_in_root_lattice(self):
        return all(c.denominator == 1 for c in self.coords)

    def fundamental_coords(self):
        """Integer coordinates in the fundamental-weight basis (exact)."""
        A = cartan_matrix(self.n)
        return tuple(
            sum(Fraction(A[i][j]) * self.coords[j] for j in range(self.n))
            for i in range(self.n)
        )


def _check_rank(u, v):
    if u.n != v.n:
        raise ValueError(f"rank mismatch: {u.n} vs {v.n}")


def weight_from_fundamental(w, n):
    """Weight with integer fundamental-weight coordinates w (length n).

    Uses the inverse Cartan matrix (A^-1)_ij = min(i,j) - ij/(n+1), exactly.
    """
    if len(w) != n:
        raise ValueError("coordinate length does not match rank")
    coords = tuple(
        sum(
            (Fraction(min(i, j)) - Fraction(i * j, n + 1)) * w[j - 1]
            for j in range(1, n + 1)
        )
        for i in range(1, n + 1)
    )
    return Weight(coords)


def fundamental_weight(i, n):
    """The i-th fundamental weight lambda_i, 1 <= i <= n; i = 0 gives 0."""
    if i == 0:
        return Weight((Fraction(0),) * n)
    if not (1 <= i <= n):
        raise ValueError(f"fundamental weight index {i} out of range for rank {n}")
    return weight_from_fundamental(tuple(1 if j == i else 0 for j in range(1, n + 1)), n)


def simple_root(i, n):
    if not (1 <= i <= n):
        raise ValueError(f"simple root index {i} out of range for rank {n}")
    return Weight(tuple(1 if j == i else 0 for j in range(1, n + 1)))


def inner_product(u, v):
    """Symmetric bilinear form with <alpha_i, alpha_j> = A_ij, exact rational."""
    _check_rank(u, v)
    A = cartan_matrix(u.n)
    return sum(
        u.coords[i] * A[i][j] * v.coords[j]
        for i in range(u.n)
        for j in range(u.n)
    )


def epsilon(mu, nu):
    """Cocycle value on two root-lattice points, in {+1, -1}.

    Fixed section: epsilon(alpha_i, alpha_j) = 1 for i <= j and (-1)^{A_ij}
    for i > j, extended bimultiplicatively, which reduces to the parity of
    sum_j mu_{j+1} nu_j.  Satisfies epsilon(mu, nu) * epsilon(nu, mu)
    = (-1)^{<mu, nu>} on Q x Q.

    Arguments are integer coordinate sequences or Weight values with integer
    coordinates.
    """
    mu = _as_int_coords(mu)
    nu = _as_int_coords(nu)
    if len(mu) != len(nu):
        raise ValueError(f"rank mismatch: {len(mu)} vs {len(nu)}")
    s = sum(mu[j + 1] * nu[j] for j in range(len(mu) - 1))
    return -1 if s % 2 else 1


def _as_int_coords(x):
    if isinstance(x, Weight):
        if not x.is_in_root_lattice():
            raise ValueError("cocycle arguments must lie in the root lattice")
        return tuple(int(c) for c in x.coords)
    return tuple(int(c) for c in x)


def add_roots(r1, r2):
    """Sum of two interval roots if it is again a positive root, else None."""
    a, b = r1
    c, d = r2
    if b + 1 == c:
        return (a, d)
    if d + 1 == a:
        return (c, b)
    return None


def structure_constant(r1, r2, n):
    """C with [x_{r1}, x_{r2}] = C x_{r1+r2}; 0 when r1+r2 is not a root."""
    a, b = r1
    c, d = r2
    if not (1 <= a <= b <= n and 1 <= c <= d <= n):
        raise ValueError("structure_constant arguments must be positive roots")
    if add_roots(r1, r2) is None:
        return 0
    return epsilon(root_coords(r1, n), root_coords(r2, n))


@dataclass(frozen=True)
class DominantAffineWeight:
    """Level-k dominant weight k_0 Lambda_0 + ... + k_n Lambda_n."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if len(parts) < 2:
            raise ValueError("need at least k_0 and k_1")
        if any(p < 0 for p in parts):
            raise ValueError("all k_i must be nonnegative")
        if sum(parts) < 1:
            raise ValueError("level must be positive")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self):
        return len(self.parts) - 1

    @property
    def level(self):
        return sum(self.parts)

    def two_term(self):
        """(k0, j) when the weight is of the form k0 L0 + kj Lj, else None.

        The vacuum weight k L0 is reported as (k, None).
        """
        nonzero = [i for i in range(1, self.n + 1) if self.parts[i]]
        if not nonzero:
            return (self.parts[0], None)
        if len(nonzero) == 1:
            return (self.parts[0], nonzero[0])
        return None


@lru_cache(maxsize=None)
def min_eigenvalue_lower_bound(n):
    """Certified rational 0 < x < lambda_min(A_n), via exact Sturm bisection.

    Uses the leading-principal-minor recurrence d_m(x) = (2-x) d_{m-1}(x)
    - d_{m-2}(x) of the tridiagonal Cartan matrix: no eigenvalue lies in
    (0, x] when every minor is strictly positive at x.
    """

    def minors_positive(x):
        d_prev, d = Fraction(1), Fraction(2) - x
        if d <= 0:
            return False
        for _ in range(n - 1):
            d_prev, d = d, (Fraction(2) - x) * d - d_prev
            if d <= 0:
                return False
        return True

    lo = Fraction(2)
    while not minors_positive(lo):
        lo /= 2
        if lo < Fraction(1, 1 << 20):  # unreachable for positive definite A
            raise ArithmeticError("failed to bracket the smallest eigenvalue")
    # lo is certified; push it toward the first sign failure for a tight cap
    hi = lo * 2
    for _ in range(12):
        mid = (lo + hi) / 2
        if minors_positive(mid):
            lo = mid
        else:
            hi = mid
    return lo
