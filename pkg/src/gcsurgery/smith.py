"""Smith normal form over the integers and finitely generated abelian groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank + Z/t_1 + ... + Z/t_k with t_i >= 2 and t_i | t_{i+1}."""

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(v) for v in self.torsion)
        if any(v < 2 for v in t):
            raise ValueError("torsion coefficients must be >= 2")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_divisors(cls, divisors, n_generators: int) -> "AbelianGroup":
        """Group presented by ``n_generators`` generators and relations
        whose Smith divisors are ``divisors``."""
        nonzero = [d for d in divisors if d != 0]
        return cls(n_generators - len(nonzero), normalize_torsion(nonzero))

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup(self.rank + other.rank,
                            normalize_torsion(self.torsion + other.torsion))

    @property
    def order(self):
        """Group order, or ``None`` when infinite."""
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else "Z^%d" % self.rank)
        parts += ["Z/%d" % t for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def normalize_torsion(values) -> tuple:
    """Invariant factors of a direct sum of cyclic groups of the given orders."""
    from collections import defaultdict

    powers = defaultdict(list)
    for v in values:
        v = abs(int(v))
        if v <= 1:
            continue
        for p, e in _factor(v).items():
            powers[p].append(p ** e)
    if not powers:
        return ()
    length = max(len(v) for v in powers.values())
    factors = [1] * length
    for p, vals in powers.items():
        vals.sort(reverse=True)
        for i, v in enumerate(vals):
            factors[length - 1 - i] *= v
    return tuple(f for f in factors if f > 1)


def _factor(n: int) -> dict:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass
class SmithForm:
    divisors: list
    left: list | None = None
    right: list | None = None
    shape: tuple = field(default=(0, 0))

    def divisibility_ok(self) -> bool:
        d = self.divisors
        for i in range(len(d) - 1):
            if d[i] == 0:
                if d[i + 1] != 0:
                    return False
            elif d[i + 1] % d[i]:
                return False
        return True


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix, transforms: bool = False) -> SmithForm:
    """Diagonalize an integer matrix by unimodular row and column moves.

    Returns the nonnegative diagonal ``d_1 | d_2 | ...`` of length
    ``min(rows, cols)``. With ``transforms=True`` the result also holds
    unimodular ``left`` and ``right`` with ``left @ A @ right = D``.
    """
    a = [[int(v) for v in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    for row in a:
        if len(row) != cols:
            raise ValueError("matrix rows have different lengths")
    L = _identity(rows) if transforms else None
    R = _identity(cols) if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if L is not None:
            L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if R is not None:
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        if k:
            ra, rd = a[src], a[dst]
            for c in range(cols):
                if ra[c]:
                    rd[c] += k * ra[c]
            if L is not None:
                ls, ld = L[src], L[dst]
                for c in range(rows):
                    ld[c] += k * ls[c]

    def add_col(src, dst, k):  # col dst += k * col src
        if k:
            for row in a:
                if row[src]:
                    row[dst] += k * row[src]
            if R is not None:
                for row in R:
                    row[dst] += k * row[src]

    def negate_row(i):
        a[i] = [-v for v in a[i]]
        if L is not None:
            L[i] = [-v for v in L[i]]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if done:
                # enforce divisibility against the rest of the block
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest remaining entry of row/col t to the pivot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, rows):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, cols):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    divisors = [a[i][i] for i in range(min(rows, cols))]
    return SmithForm(divisors, L, R, (rows, cols))


def cokernel(matrix, n_generators: int | None = None) -> AbelianGroup:
    """Z^n modulo the row span of ``matrix`` (rows are relations)."""
    rows = len(matrix)
    n = n_generators if n_generators is not None else (len(matrix[0]) if rows else 0)
    if rows == 0 or n == 0:
        return AbelianGroup(n)
    return AbelianGroup.from_divisors(smith_normal_form(matrix).divisors, n)


def determinant(matrix) -> int:
    """Exact integer determinant via fraction-free Bareiss elimination."""
    a = [[int(v) for v in row] for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def gcd_all(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
