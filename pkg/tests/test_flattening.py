import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from flatrank.exact_linalg import rank_mod_p
from flatrank.flattening import (
    ALL_LEMMAS,
    apply_minor_map,
    full_koszul_matrix,
    hwv_vector,
    lemma_shapes,
    minor_codomain_basis,
    minor_column_image,
    minor_domain_basis,
    minor_koszul_matrix,
    read_matrix_cache,
    verify_hwv_nonzero,
    wedge_canon,
    wedge_insert,
    write_matrix_cache,
    _bidegree_of_label,
)
from flatrank.partitions import schur_dim, theoretical_image_dim
from flatrank.polynomials import (
    determinant_poly,
    minor_poly,
    partial,
    random_low_rank,
    substitute_linear,
    var_index,
    variable_power,
)


class TestWedge:
    def test_insert_signs(self):
        assert wedge_insert((1, 3), 0) == (1, (0, 1, 3))
        assert wedge_insert((1, 3), 2) == (-1, (1, 2, 3))
        assert wedge_insert((1, 3), 5) == (1, (1, 3, 5))
        assert wedge_insert((1, 3), 3) is None

    def test_canon(self):
        assert wedge_canon([3, 1]) == (-1, (1, 3))
        assert wedge_canon([1, 3]) == (1, (1, 3))
        assert wedge_canon([2, 2]) is None
        assert wedge_canon([5, 1, 3]) == (1, (1, 3, 5))


class TestMinorMap:
    def test_basis_sizes(self):
        for n, d, p in [(3, 1, 1), (4, 2, 2), (5, 2, 2)]:
            nv = n * n
            assert len(minor_domain_basis(n, d, p)) == comb(n, d) ** 2 * comb(nv, p)
            assert (
                len(minor_codomain_basis(n, d, p))
                == comb(n, d + 1) ** 2 * comb(nv, p + 1)
            )

    def test_entry_signs_match_minor_derivatives(self):
        """The Laplace signs in the map must agree with actual partial
        derivatives of the corresponding minors."""
        for n in (3, 4):
            for size in range(2, n + 1):
                for I in combinations(range(1, n + 1), size):
                    for J in combinations(range(1, n + 1), size):
                        Delta = minor_poly(n, I, J)
                        for pi, i in enumerate(I, start=1):
                            for pj, j in enumerate(J, start=1):
                                got = partial(Delta, var_index(i, j, n))
                                comp = minor_poly(
                                    n,
                                    tuple(x for x in I if x != i),
                                    tuple(x for x in J if x != j),
                                )
                                sign = 1 if (pi + pj) % 2 == 0 else -1
                                want = comp.scale(sign)
                                assert got.terms == want.terms

    def test_column_image_coefficients_are_units(self):
        for label in minor_domain_basis(3, 1, 2)[:50]:
            for _, coeff in minor_column_image(3, label):
                assert coeff in (1, -1)

    def test_grading_preserved(self):
        M = minor_koszul_matrix(3, 1, 2, check_grading=False)
        for r, c, _ in M.entries:
            assert _bidegree_of_label(M.cols[c], 3) == _bidegree_of_label(
                M.rows[r], 3
            )

    @pytest.mark.parametrize(
        "n,d,p,rank",
        [(2, 1, 1, 6), (3, 1, 1, 80), (3, 2, 1, 36), (3, 1, 2, 315),
         (3, 2, 2, 84), (4, 2, 1, 560)],
    )
    def test_rank_equals_module_dimension_count(self, n, d, p, rank):
        M = minor_koszul_matrix(n, d, p)
        assert rank_mod_p(M).rank == rank
        assert theoretical_image_dim(n, d, p) == rank

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            minor_koszul_matrix(3, 1, 3)
        with pytest.raises(ValueError):
            minor_koszul_matrix(3, 3, 1)

    def test_thread_determinism(self):
        a = minor_koszul_matrix(3, 1, 2, threads=1)
        b = minor_koszul_matrix(3, 1, 2, threads=4)
        assert a.entries == b.entries and a.rows == b.rows and a.cols == b.cols


class TestFullMap:
    def test_shape(self):
        F = full_koszul_matrix(determinant_poly(3), 1, 2)
        assert (len(F.rows), len(F.cols)) == (756, 324)

    @pytest.mark.parametrize("d,p", [(1, 1), (2, 1), (1, 2)])
    def test_full_rank_matches_minor_rank_for_det3(self, d, p):
        """At n=3 the minor-indexed map is a basis change of the full map
        restricted to the span of the minors, and the span of the d-th
        derivatives of the determinant is exactly that span; the ranks
        therefore agree."""
        F = full_koszul_matrix(determinant_poly(3), d, p)
        M = minor_koszul_matrix(3, d, p)
        assert rank_mod_p(F).rank == rank_mod_p(M).rank

    def test_power_rank_is_t(self):
        # a single e-th power contributes exactly comb(nn-1, p) to the rank
        for n, p in [(2, 1), (2, 2), (3, 1)]:
            P = variable_power((1, 1), 3, n)
            F = full_koszul_matrix(P, 1, p)
            assert rank_mod_p(F).rank == comb(n * n - 1, p)

    @pytest.mark.parametrize("seed", range(25))
    def test_low_rank_inputs_respect_the_bound(self, seed):
        """ceil(rank/t) can never exceed the number of powers used."""
        for n in (2, 3):
            for p in (1, 2):
                r = (seed % 3) + 1
                P = random_low_rank(r, 3, n, seed)
                F = full_koszul_matrix(P, 1, p)
                t = comb(n * n - 1, p)
                assert -(-rank_mod_p(F).rank // t) <= r

    def test_equivariance_under_row_column_action(self):
        """Substituting X -> A X B with invertible A, B leaves the rank of
        the flattening unchanged."""
        rng = random.Random(0)
        n = 3
        A = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        B = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        nv = n * n
        M = [[0] * nv for _ in range(nv)]
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    for l in range(1, n + 1):
                        M[var_index(i, j, n)][var_index(k, l, n)] = (
                            A[i - 1][k - 1] * B[l - 1][j - 1]
                        )
        import numpy as np

        assert round(np.linalg.det(np.array(M, dtype=float))) != 0
        P = substitute_linear(determinant_poly(n), M)
        base = rank_mod_p(full_koszul_matrix(determinant_poly(n), 1, 2)).rank
        assert rank_mod_p(full_koszul_matrix(P, 1, 2)).rank == base

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            full_koszul_matrix(determinant_poly(3), 3, 1)
        with pytest.raises(ValueError):
            full_koszul_matrix(determinant_poly(2), 1, 4)

    def test_thread_determinism(self):
        P = determinant_poly(3)
        a = full_koszul_matrix(P, 1, 2, threads=1)
        b = full_koszul_matrix(P, 1, 2, threads=4)
        assert a.entries == b.entries


class TestHighestWeightVectors:
    def test_lemma_list(self):
        assert len(ALL_LEMMAS) == 8

    def test_shapes_have_matching_box_counts(self):
        for lid in ALL_LEMMAS:
            sa, sb = lemma_shapes(lid, 6, 3)
            assert sum(sa) == sum(sb)
            assert schur_dim(sa, 6) > 0 and schur_dim(sb, 6) > 0

    @pytest.mark.parametrize("lemma_id", ALL_LEMMAS)
    def test_nonzero_at_n5(self, lemma_id):
        nz, witness = verify_hwv_nonzero(lemma_id, 5, 2)
        assert nz and witness is not None

    def test_p2_c_witness(self):
        nz, witness = verify_hwv_nonzero("p2_c", 6, 3)
        assert nz
        assert witness == ((1, 2), (1, 2), (0, 1, 14))

    def test_vector_weight_is_pure(self):
        # every monomial in a highest weight vector has the same bidegree
        for lid in ALL_LEMMAS:
            vec = hwv_vector(lid, 6, 3)
            grades = {_bidegree_of_label(label, 6) for label in vec}
            assert len(grades) == 1

    def test_mirror_pair(self):
        def transpose_var(x):
            r, c = divmod(x, 6)
            return c * 6 + r

        e = hwv_vector("p2_e", 6, 3)
        f = hwv_vector("p2_f", 6, 3)
        mirrored = {
            (J, I, tuple(sorted(transpose_var(x) for x in w)))
            for (I, J, w) in e
        }
        assert set(f) == mirrored

    def test_shape_fit_errors(self):
        with pytest.raises(ValueError):
            hwv_vector("p2_a", 4, 1)  # second shape needs 5 rows at n=4
        with pytest.raises(ValueError):
            hwv_vector("p1_21", 3, 2)  # n-d < 2
        with pytest.raises(ValueError):
            hwv_vector("nope", 6, 3)

    def test_apply_matches_matrix(self):
        n, d, p = 3, 1, 2
        M = minor_koszul_matrix(n, d, p)
        col_index = {label: i for i, label in enumerate(M.cols)}
        row_index = {label: i for i, label in enumerate(M.rows)}
        rng = random.Random(4)
        labels = rng.sample(M.cols, 20)
        vec = {label: rng.randint(-3, 3) for label in labels}
        image = apply_minor_map(n, vec)
        dense = [Fraction(0)] * len(M.rows)
        for r, c, v in M.entries:
            coeff = vec.get(M.cols[c])
            if coeff:
                dense[r] += v * coeff
        want = {
            M.rows[i]: dense[i] for i in range(len(dense)) if dense[i]
        }
        assert image == want


class TestCache:
    def test_round_trip(self, tmp_path):
        M = minor_koszul_matrix(3, 1, 1)
        path = tmp_path / "m.mat"
        write_matrix_cache(M, path)
        back = read_matrix_cache(path)
        assert back.entries == [(r, c, Fraction(v)) for r, c, v in M.entries]
        assert back.basis_hash() == M.basis_hash()
        assert len(back.rows) == len(M.rows) and len(back.cols) == len(M.cols)
        assert rank_mod_p(back).rank == rank_mod_p(M).rank

    def test_corruption_detected(self, tmp_path):
        M = minor_koszul_matrix(2, 1, 1)
        path = tmp_path / "m.mat"
        write_matrix_cache(M, path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(ValueError, match="nnz"):
            read_matrix_cache(path)
