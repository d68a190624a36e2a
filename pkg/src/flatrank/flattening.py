"""Sparse matrices of the Koszul flattening maps.

Two constructions are provided: the full map for an arbitrary polynomial
(wedge factor tensored with a catalecticant), and the minor-indexed maps
for the determinant, whose domain basis is (row set, column set, wedge of
variables).  Wedge basis elements are strictly increasing tuples of flat
variable indices; insertion signs count how many present variables precede
the inserted one.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .polynomials import Polynomial, contract, monomial, partial, var_index, var_pos

Wedge = tuple[int, ...]
MinorLabel = tuple[tuple[int, ...], tuple[int, ...], Wedge]


def wedge_insert(w: Wedge, x: int) -> tuple[int, Wedge] | None:
    """Insert variable x into the increasing wedge w.

    Returns (sign, new wedge) or None if x is already present."""
    if x in w:
        return None
    pos = sum(1 for y in w if y < x)
    sign = -1 if pos % 2 else 1
    return sign, w[:pos] + (x,) + w[pos:]


def wedge_canon(vars_: list[int]) -> tuple[int, Wedge] | None:
    """Canonical ascending form of a wedge product, with sorting sign."""
    if len(set(vars_)) != len(vars_):
        return None
    sign = 1
    v = list(vars_)
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            if v[i] > v[j]:
                v[i], v[j] = v[j], v[i]
                sign = -sign
    return sign, tuple(v)


@dataclass
class FlatteningMatrix:
    rows: list
    cols: list
    entries: list  # (row index, col index, coefficient)
    meta: dict = field(default_factory=dict)
    _hash: str | None = None

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def basis_hash(self) -> str:
        if self._hash is None:
            h = hashlib.sha256()
            h.update(repr(self.meta.get("kind")).encode())
            h.update(repr(self.rows).encode())
            h.update(repr(self.cols).encode())
            self._hash = h.hexdigest()[:16]
        return self._hash

    def to_dense(self):
        dense = [[Fraction(0)] * len(self.cols) for _ in self.rows]
        for r, c, v in self.entries:
            dense[r][c] = Fraction(v)
        return dense


def _bidegree_of_label(label, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(A-weight, B-weight) of a minor-map basis label."""
    I, J, w = label
    wa, wb = [0] * n, [0] * n
    for i in I:
        wa[i - 1] += 1
    for j in J:
        wb[j - 1] += 1
    for x in w:
        r, c = var_pos(x, n)
        wa[r - 1] += 1
        wb[c - 1] += 1
    return tuple(wa), tuple(wb)


def minor_column_image(n: int, label: MinorLabel) -> list[tuple[MinorLabel, int]]:
    """Image of one domain basis element of the minor-indexed map.

    The sign for (i, j) in I x J is (-1) to the sum of the 1-based
    positions of i in I and j in J (Laplace-expansion signs), times the
    wedge insertion sign.
    """
    I, J, w = label
    out = []
    for pi, i in enumerate(I, start=1):
        for pj, j in enumerate(J, start=1):
            ins = wedge_insert(w, var_index(i, j, n))
            if ins is None:
                continue
            wsign, neww = ins
            sign = wsign if (pi + pj) % 2 == 0 else -wsign
            newI = tuple(x for x in I if x != i)
            newJ = tuple(x for x in J if x != j)
            out.append(((newI, newJ, neww), sign))
    return out


def minor_domain_basis(n: int, d: int, p: int) -> list[MinorLabel]:
    nv = n * n
    subs = list(combinations(range(1, n + 1), n - d))
    wedges = list(combinations(range(nv), p))
    return [(I, J, w) for I in subs for J in subs for w in wedges]


def minor_codomain_basis(n: int, d: int, p: int) -> list[MinorLabel]:
    nv = n * n
    subs = list(combinations(range(1, n + 1), n - d - 1))
    wedges = list(combinations(range(nv), p + 1))
    return [(I, J, w) for I in subs for J in subs for w in wedges]


def minor_koszul_matrix(n: int, d: int, p: int, check_grading: bool = True,
                        threads: int = 1) -> FlatteningMatrix:
    """Matrix of the minor-indexed Koszul map for the n x n determinant."""
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p}")
    if not 1 <= d <= n - 1:
        raise ValueError(f"need 1 <= d <= n-1, got d={d}, n={n}")
    cols = minor_domain_basis(n, d, p)
    rows = minor_codomain_basis(n, d, p)
    row_index = {label: i for i, label in enumerate(rows)}
    entries = []

    def column_entries(ci: int) -> list:
        label = cols[ci]
        out = []
        for rlabel, coeff in minor_column_image(n, label):
            if check_grading:
                assert _bidegree_of_label(label, n) == _bidegree_of_label(rlabel, n)
            out.append((row_index[rlabel], ci, coeff))
        return out

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            for chunk in ex.map(column_entries, range(len(cols))):
                entries.extend(chunk)
    else:
        for ci in range(len(cols)):
            entries.extend(column_entries(ci))
    meta = {"kind": "minor", "polynomial": f"det{n}", "n": n, "d": d, "p": p}
    return FlatteningMatrix(rows, cols, entries, meta)


def monomials_of_degree(nv: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(nv), d):
        exps = [0] * nv
        for k in combo:
            exps[k] += 1
        out.append(tuple(exps))
    return out


def full_koszul_matrix(P: Polynomial, d: int, p: int,
                       threads: int = 1) -> FlatteningMatrix:
    """Matrix of the Koszul flattening of an arbitrary polynomial.

    Columns are (wedge of p variables, dual monomial of degree d); rows are
    (wedge of p+1 variables, monomial of degree e-d-1).  The column image
    is sum over variables x of (x wedge w) tensor d(contract(alpha, P))/dx,
    with bare (non-divided) derivatives throughout.
    """
    n, e = P.n, P.degree
    nv = n * n
    if not 1 <= d <= e - 1:
        raise ValueError(f"need 1 <= d <= degree-1, got d={d}, degree={e}")
    if not 0 <= p <= nv - 1:
        raise ValueError(f"need 0 <= p <= {nv - 1}, got p={p}")
    wedges_p = list(combinations(range(nv), p))
    wedges_p1 = list(combinations(range(nv), p + 1))
    duals = monomials_of_degree(nv, d)
    row_monos = monomials_of_degree(nv, e - d - 1)
    cols = [(w, a) for w in wedges_p for a in duals]
    rows = [(w, m) for w in wedges_p1 for m in row_monos]
    row_index = {label: i for i, label in enumerate(rows)}

    # per dual monomial: partial derivatives of the contraction, by variable
    derivs: dict[tuple[int, ...], list[Polynomial]] = {}
    for a in duals:
        Q = contract(monomial(n, d, a), P)
        derivs[a] = [partial(Q, x) for x in range(nv)]

    entries = []

    def column_entries(ci: int) -> list:
        w, a = cols[ci]
        acc: dict[int, Fraction] = {}
        for x in range(nv):
            ins = wedge_insert(w, x)
            if ins is None:
                continue
            sign, neww = ins
            for mono, coeff in derivs[a][x].terms.items():
                ri = row_index[(neww, mono)]
                acc[ri] = acc.get(ri, Fraction(0)) + sign * coeff
        return [(ri, ci, v) for ri, v in sorted(acc.items()) if v]

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            for chunk in ex.map(column_entries, range(len(cols))):
                entries.extend(chunk)
    else:
        for ci in range(len(cols)):
            entries.extend(column_entries(ci))
    meta = {"kind": "full", "polynomial": "custom", "n": n, "d": d, "p": p}
    return FlatteningMatrix(rows, cols, entries, meta)


# ---------------------------------------------------------------------------
# highest weight vectors

P1_LEMMAS = ("p1_21", "p1_1s")
P2_LEMMAS = ("p2_a", "p2_b", "p2_c", "p2_d", "p2_e", "p2_f")
ALL_LEMMAS = P1_LEMMAS + P2_LEMMAS


def lemma_shapes(lemma_id: str, n: int, d: int):
    """(A-shape, B-shape) of the irreducible module the vector generates."""
    m = n - d
    shapes = {
        "p1_21": ((2,) + (1,) * (m - 1), (2,) + (1,) * (m - 1)),
        "p1_1s": ((2,) + (1,) * (m - 1), (1,) * (m + 1)),
        "p2_a": ((3,) + (1,) * (m - 1), (1,) * (m + 2)),
        "p2_b": ((3,) + (1,) * (m - 1), (2,) + (1,) * m),
        "p2_c": ((3,) + (1,) * (m - 1), (2, 2) + (1,) * (m - 2)),
        "p2_d": ((2,) + (1,) * m, (2,) + (1,) * m),
        "p2_e": ((2, 2) + (1,) * (m - 2), (2,) + (1,) * m),
        "p2_f": ((2,) + (1,) * m, (2, 2) + (1,) * (m - 2)),
    }
    if lemma_id not in shapes:
        raise ValueError(f"unknown lemma id {lemma_id!r}")
    return shapes[lemma_id]


def hwv_vector(lemma_id: str, n: int, d: int) -> dict[MinorLabel, int]:
    """The displayed highest-weight-vector projection, in the domain basis
    of the minor-indexed map."""
    m = n - d
    if m < 2 or d < 1:
        raise ValueError(f"need n-d >= 2 and d >= 1, got n={n}, d={d}")
    sa, sb = lemma_shapes(lemma_id, n, d)
    if len(sa) > n or len(sb) > n:
        raise ValueError(
            f"shape pair {sa} x {sb} does not fit in dimension {n}"
        )
    full = tuple(range(1, m + 1))
    vec: dict[MinorLabel, int] = {}

    def add(I, J, wvars, coeff):
        canon = wedge_canon(list(wvars))
        if canon is None:
            return
        sign, w = canon
        key = (tuple(I), tuple(J), w)
        vec[key] = vec.get(key, 0) + sign * coeff
        if vec[key] == 0:
            del vec[key]

    X = lambda i, j: var_index(i, j, n)

    if lemma_id == "p1_21":
        add(full, full, [X(1, 1)], 1)
    elif lemma_id == "p1_1s":
        if m + 1 > n:
            raise ValueError(f"needs {m + 1} columns, only {n} available")
        for j in range(1, m + 2):
            J = tuple(x for x in range(1, m + 2) if x != j)
            add(full, J, [X(1, j)], -1 if j % 2 else 1)
    elif lemma_id == "p2_a":
        if m + 2 > n:
            raise ValueError(f"needs {m + 2} columns, only {n} available")
        for i in range(1, m + 3):
            for j in range(i + 1, m + 3):
                J = tuple(x for x in range(1, m + 3) if x not in (i, j))
                add(full, J, [X(1, i), X(1, j)], -1 if (i + j) % 2 else 1)
    elif lemma_id == "p2_b":
        if m + 1 > n:
            raise ValueError(f"needs {m + 1} columns, only {n} available")
        for i in range(2, m + 2):
            J = tuple(x for x in range(1, m + 2) if x != i)
            add(full, J, [X(1, 1), X(1, i)], -1 if i % 2 else 1)
    elif lemma_id == "p2_c":
        add(full, full, [X(1, 1), X(1, 2)], 1)
    elif lemma_id == "p2_d":
        if m + 1 > n:
            raise ValueError(f"needs {m + 1} rows and columns, only {n} available")
        ext = tuple(range(1, m + 2))
        for i in range(1, m + 2):
            I = tuple(x for x in ext if x != i)
            for j in range(2, m + 2):
                J = tuple(x for x in ext if x != j)
                sign = -1 if (i + j) % 2 else 1
                add(I, J, [X(1, 1), X(i, j)], sign)
                add(I, J, [X(i, 1), X(1, j)], sign)
    elif lemma_id in ("p2_e", "p2_f"):
        if m + 1 > n:
            raise ValueError(f"needs {m + 1} columns, only {n} available")
        for i in range(1, m + 2):
            J = tuple(x for x in range(1, m + 2) if x != i)
            sign = -1 if i % 2 else 1
            if lemma_id == "p2_e":
                add(full, J, [X(1, 1), X(2, i)], sign)
                add(full, J, [X(1, i), X(2, 1)], sign)
            else:  # mirror: swap the roles of rows and columns
                add(J, full, [X(1, 1), X(i, 2)], sign)
                add(J, full, [X(i, 1), X(1, 2)], sign)
    return vec


def apply_minor_map(n: int, vec: dict[MinorLabel, int | Fraction]) -> dict[MinorLabel, Fraction]:
    """Apply the minor-indexed map to a sparse domain vector without
    materializing the matrix (shares the per-column image generator)."""
    out: dict[MinorLabel, Fraction] = {}
    for label, coeff in vec.items():
        for rlabel, sign in minor_column_image(n, label):
            acc = out.get(rlabel, Fraction(0)) + Fraction(coeff) * sign
            if acc:
                out[rlabel] = acc
            else:
                out.pop(rlabel, None)
    return out


def verify_hwv_nonzero(lemma_id: str, n: int, d: int):
    """Check that the image of the lemma's highest weight vector is nonzero.

    Returns (nonzero, witness) where witness is the smallest codomain basis
    label carrying a nonzero coefficient (None if the image vanishes).
    """
    vec = hwv_vector(lemma_id, n, d)
    image = apply_minor_map(n, vec)
    if not image:
        return False, None
    return True, min(image)


# ---------------------------------------------------------------------------
# matrix cache

def cache_key(meta: dict) -> str:
    return hashlib.sha256(json.dumps(meta, sort_keys=True).encode()).hexdigest()[:16]


def write_matrix_cache(M: FlatteningMatrix, path) -> None:
    header = dict(M.meta)
    header.update(
        rows=len(M.rows), cols=len(M.cols), nnz=M.nnz, basis_hash=M.basis_hash()
    )
    with open(path, "w") as f:
        f.write(json.dumps(header, sort_keys=True) + "\n")
        for r, c, v in M.entries:
            v = Fraction(v)
            f.write(f"{r} {c} {v.numerator}/{v.denominator}\n")


def read_matrix_cache(path) -> FlatteningMatrix:
    """Load a cached matrix; row/column labels are not stored, only counts
    and the original basis hash, which is enough for rank computation."""
    with open(path) as f:
        header = json.loads(f.readline())
        entries = []
        for line in f:
            r, c, v = line.split()
            num, den = v.split("/")
            entries.append((int(r), int(c), Fraction(int(num), int(den))))
    M = FlatteningMatrix(
        rows=list(range(header["rows"])),
        cols=list(range(header["cols"])),
        entries=entries,
        meta={k: header[k] for k in header if k not in ("rows", "cols", "nnz", "basis_hash")},
    )
    M._hash = header["basis_hash"]
    if len(entries) != header["nnz"]:
        raise ValueError(f"cache corrupt: nnz mismatch in {path}")
    return M
