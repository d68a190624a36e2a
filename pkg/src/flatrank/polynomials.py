"""Exact homogeneous polynomials in the n*n matrix variables.

Variables are ordered row-major: index k = (row-1)*n + (col-1) for the
variable in matrix position (row, col), rows and columns 1-based.  All
coefficients are exact rationals.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

Exponents = tuple[int, ...]


def var_index(row: int, col: int, n: int) -> int:
    """Flat 0-based index of variable (row, col), both 1-based."""
    if not (1 <= row <= n and 1 <= col <= n):
        raise ValueError(f"variable ({row},{col}) out of range for n={n}")
    return (row - 1) * n + (col - 1)


def var_pos(k: int, n: int) -> tuple[int, int]:
    """Inverse of var_index: (row, col), 1-based."""
    return k // n + 1, k % n + 1


@dataclass(frozen=True)
class Polynomial:
    n: int
    degree: int
    terms: dict[Exponents, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        nv = self.n * self.n
        for exps, coeff in self.terms.items():
            if len(exps) != nv or sum(exps) != self.degree:
                raise ValueError(f"bad exponent vector {exps} for degree {self.degree}")
            if coeff == 0:
                raise ValueError("zero coefficients must not be stored")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if self.n != other.n or self.degree != other.degree:
            raise ValueError("incompatible polynomials")
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            acc = terms.get(exps, Fraction(0)) + c
            if acc:
                terms[exps] = acc
            else:
                terms.pop(exps, None)
        return Polynomial(self.n, self.degree, terms)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial(self.n, self.degree, {})
        return Polynomial(self.n, self.degree, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.n != other.n:
            raise ValueError("incompatible polynomials")
        terms: dict[Exponents, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                acc = terms.get(e, Fraction(0)) + ca * cb
                if acc:
                    terms[e] = acc
                else:
                    terms.pop(e, None)
        return Polynomial(self.n, self.degree + other.degree, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, values) -> Fraction:
        """Evaluate at a flat sequence of n*n rational values."""
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            prod = coeff
            for k, e in enumerate(exps):
                if e:
                    prod *= Fraction(values[k]) ** e
            total += prod
        return total

    def to_json(self) -> str:
        records = [
            {"exps": list(e), "num": str(c.numerator), "den": str(c.denominator)}
            for e, c in sorted(self.terms.items())
        ]
        return json.dumps({"n": self.n, "degree": self.degree, "terms": records})

    @staticmethod
    def from_json(text: str) -> "Polynomial":
        data = json.loads(text)
        terms = {
            tuple(rec["exps"]): Fraction(int(rec["num"]), int(rec["den"]))
            for rec in data["terms"]
        }
        return Polynomial(data["n"], data["degree"], terms)


def monomial(n: int, degree: int, exps: Exponents, coeff=1) -> Polynomial:
    return Polynomial(n, degree, {exps: Fraction(coeff)})


def _perm_monomial(perm, n: int) -> Exponents:
    exps = [0] * (n * n)
    for i, j in enumerate(perm, start=1):
        exps[var_index(i, j, n)] += 1
    return tuple(exps)


def determinant_poly(n: int) -> Polynomial:
    """Leibniz expansion of the n x n determinant."""
    if n < 1:
        raise ValueError("n must be at least 1")
    terms = {}
    for perm in permutations(range(1, n + 1)):
        sign = perm_sign(perm)
        terms[_perm_monomial(perm, n)] = Fraction(sign)
    return Polynomial(n, n, terms)


def permanent_poly(n: int) -> Polynomial:
    """All n! diagonal products with coefficient +1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    terms = {}
    for perm in permutations(range(1, n + 1)):
        terms[_perm_monomial(perm, n)] = Fraction(1)
    return Polynomial(n, n, terms)


def perm_sign(perm) -> int:
    """Sign of a permutation given as a sequence of distinct values."""
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


def variable_power(v: tuple[int, int], e: int, n: int) -> Polynomial:
    """The e-th power of a single variable (row, col)."""
    if e < 1:
        raise ValueError("exponent must be at least 1")
    exps = [0] * (n * n)
    exps[var_index(v[0], v[1], n)] = e
    return monomial(n, e, tuple(exps))


def linear_form_power(coeffs, e: int, n: int) -> Polynomial:
    """The e-th power of a linear form, expanded with multinomial coefficients."""
    if e < 1:
        raise ValueError("exponent must be at least 1")
    coeffs = [Fraction(c) for c in coeffs]
    if len(coeffs) != n * n:
        raise ValueError(f"expected {n * n} coefficients, got {len(coeffs)}")
    if all(c == 0 for c in coeffs):
        raise ValueError("zero linear form")
    linear = Polynomial(
        n, 1, {
            tuple(1 if k == i else 0 for k in range(n * n)): c
            for i, c in enumerate(coeffs) if c
        },
    )
    out = linear
    for _ in range(e - 1):
        out = out * linear
    return out


def partial(P: Polynomial, k: int) -> Polynomial:
    """Bare partial derivative with respect to variable index k."""
    if P.degree == 0:
        return Polynomial(P.n, 0, {})
    terms = {}
    for exps, coeff in P.terms.items():
        if exps[k]:
            e = list(exps)
            e[k] -= 1
            terms[tuple(e)] = coeff * exps[k]
    return Polynomial(P.n, P.degree - 1, terms)


def contract(alpha: Polynomial, P: Polynomial) -> Polynomial:
    """Apolarity contraction: each dual monomial acts as the corresponding
    iterated bare partial derivative (no factorial normalization)."""
    if alpha.n != P.n:
        raise ValueError("incompatible polynomials")
    if alpha.degree > P.degree:
        raise ValueError(
            f"dual degree {alpha.degree} exceeds polynomial degree {P.degree}"
        )
    out = Polynomial(P.n, P.degree - alpha.degree, {})
    for exps, coeff in alpha.terms.items():
        Q = P
        for k, e in enumerate(exps):
            for _ in range(e):
                Q = partial(Q, k)
        out = out + Q.scale(coeff)
    return out


def substitute_linear(P: Polynomial, M) -> Polynomial:
    """Apply the linear change of variables x_k -> sum_l M[k][l] x_l."""
    nv = P.n * P.n
    images = []
    for k in range(nv):
        terms = {
            tuple(1 if t == l else 0 for t in range(nv)): Fraction(M[k][l])
            for l in range(nv) if M[k][l]
        }
        images.append(Polynomial(P.n, 1, terms))
    out = Polynomial(P.n, P.degree, {})
    for exps, coeff in P.terms.items():
        prod = Polynomial(P.n, 0, {tuple([0] * nv): coeff})
        for k, e in enumerate(exps):
            for _ in range(e):
                prod = prod * images[k]
        out = out + prod
    return out


def minor_poly(n: int, I, J) -> Polynomial:
    """The |I| x |I| minor of the generic matrix on rows I and columns J (1-based)."""
    I, J = tuple(I), tuple(J)
    if len(I) != len(J):
        raise ValueError("row and column sets must have equal size")
    k = len(I)
    if k == 0:
        return Polynomial(n, 0, {tuple([0] * (n * n)): Fraction(1)})
    terms = {}
    for perm in permutations(range(k)):
        sign = perm_sign(perm)
        exps = [0] * (n * n)
        for a in range(k):
            exps[var_index(I[a], J[perm[a]], n)] += 1
        terms[tuple(exps)] = Fraction(sign)
    return Polynomial(n, k, terms)


def random_low_rank(r: int, e: int, n: int, seed: int) -> Polynomial:
    """Sum of r e-th powers of pseudorandom small-integer linear forms."""
    if r < 1 or e < 1:
        raise ValueError("r and e must be at least 1")
    rng = random.Random(seed)
    out = Polynomial(n, e, {})
    for _ in range(r):
        while True:
            coeffs = [rng.randint(-3, 3) for _ in range(n * n)]
            if any(coeffs):
                break
        out = out + linear_form_power(coeffs, e, n)
    return out
