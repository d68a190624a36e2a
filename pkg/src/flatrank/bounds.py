"""Closed-form lower bounds and conversion of flattening ranks to
border-rank bound certificates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, factorial, pi

from .partitions import theoretical_image_dim


@dataclass
class FormulaValue:
    n: int
    name: str
    value: Fraction

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("formula values must be positive")

    @property
    def integer_bound(self) -> int:
        return ceil(self.value)


@dataclass
class BoundCertificate:
    polynomial: str
    method: str  # koszul_full | koszul_minor | pieri
    n: int
    d: int | None
    p: int | None
    rank_F: int
    t: int
    provenance: list = field(default_factory=list)

    @property
    def bound(self) -> int:
        return flattening_bound(self.rank_F, self.t)

    def __post_init__(self):
        b = self.bound
        assert b * self.t >= self.rank_F > (b - 1) * self.t or self.rank_F == 0

    def to_json(self) -> str:
        rec = {
            "poly": self.polynomial,
            "n": self.n,
            "method": self.method,
            "d": self.d,
            "p": self.p,
            "rank": self.rank_F,
            "t": self.t,
            "bound": self.bound,
            "provenance": [c.to_json_dict() for c in self.provenance],
        }
        return json.dumps(rec)


def flattening_bound(rank_F: int, t: int) -> int:
    """Lower bound on border rank: ceiling of rank_F / t."""
    if t < 1:
        raise ValueError("t must be at least 1")
    if rank_F < 0:
        raise ValueError("rank must be nonnegative")
    return -(-rank_F // t)


def preliminary_theorem_value(n: int) -> FormulaValue:
    """The closed-form bound from the wedge-1 minor map (valid for n >= 3)."""
    if n < 3:
        raise ValueError("defined for n >= 3")
    if n % 2 == 0:
        val = (1 + Fraction(4, (n - 1) * (n + 2) ** 2)) * comb(n, n // 2) ** 2
    else:
        val = (1 + Fraction(8, (n - 1) * (n + 3) ** 2)) * comb(n, (n - 1) // 2) ** 2
    return FormulaValue(n, "preliminary", val)


def main_theorem_value(n: int) -> FormulaValue:
    """The closed-form bound from the wedge-2 minor map (valid for n >= 5)."""
    if n < 5:
        raise ValueError("defined for n >= 5")
    if n % 2 == 0:
        frac = Fraction(
            8 * (-8 + 6 * n**2 + n**3),
            (n - 1) * (n + 2) * (n + 4) ** 2 * (n**2 - 2),
        )
        val = (1 + frac) * comb(n, n // 2) ** 2
    else:
        frac = Fraction(
            16 * (9 + 8 * n + n**2),
            (n + 3) * (n + 5) ** 2 * (n**2 - 2),
        )
        val = (1 + frac) * comb(n, (n - 1) // 2) ** 2
    return FormulaValue(n, "main", val)


def f_formula(n: int, d: int) -> Fraction:
    """The five-term rational factor with image dimension f(n,d) * C(n,d)^2."""
    if not 1 <= d <= n - 2:
        raise ValueError(f"need 1 <= d <= n-2, got d={d}, n={n}")
    m = n - d
    return (
        Fraction((n + 2) * (n + 1) * m * d * (d - 1), (m + 2) ** 2 * (m + 1))
        + Fraction((n + 2) * (n + 1) ** 2 * m * d, (m + 2) ** 2)
        + Fraction((n + 2) * (n + 1) ** 2 * m * n * (m - 1), 2 * (m + 2) * (m + 1))
        + Fraction((n + 1) ** 2 * n * (m - 1) * d, (m + 1) * (m + 2))
        + Fraction((n + 1) ** 2 * d**2, (m + 2) ** 2)
    )


def optimal_d(n: int) -> int:
    """Argmax over d of the wedge-2 image dimension f(n,d) * C(n,d)^2."""
    if n < 5:
        raise ValueError("defined for n >= 5")
    best_d, best_val = None, None
    for d in range(1, n - 1):
        val = f_formula(n, d) * comb(n, d) ** 2
        if best_val is None or val > best_val:
            best_d, best_val = d, val
    return best_d


def reference_bounds(n: int, which_poly: str = "det") -> dict:
    """Named reference values for side-by-side comparison tables.

    The asymptotic estimate is a float annotation only; all other values
    are exact.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    out: dict = {"n": n, "poly": which_poly}
    half = n // 2
    out["classical_border_lower"] = comb(n, half) ** 2
    if n >= 3:
        out["preliminary_bound"] = preliminary_theorem_value(n).integer_bound
    if n >= 5:
        out["main_bound"] = main_theorem_value(n).integer_bound
    out["symmetric_rank_lower"] = comb(n, half) ** 2 + n * n - (half + 1) ** 2
    upper = Fraction(5, 6) ** (n // 3) * 2 ** (n - 1) * factorial(n)
    out["symmetric_rank_upper"] = float(upper)
    out["asymptotic_estimate"] = 2 ** (2 * n + 1) / (pi * n) + 2 ** (2 * n + 1) / (
        pi * n**4
    )
    if which_poly == "perm" and n == 3:
        out["perm3_border_lower"] = 14
        out["perm3_border_upper"] = 16
    return out


def image_dim_identity(n: int) -> bool:
    """Check that the main formula times the comparison rank equals the
    wedge-2 image dimension at the optimal d, exactly."""
    d = n // 2
    lhs = main_theorem_value(n).value * comb(n * n - 1, 2)
    rhs = f_formula(n, d) * comb(n, d) ** 2
    return lhs == rhs


def theoretical_matches_f(n: int, d: int) -> bool:
    return f_formula(n, d) * comb(n, d) ** 2 == theoretical_image_dim(n, d, 2)
