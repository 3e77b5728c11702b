"""Integer linear algebra: normal forms, presentations, homology of pairs."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.exactlin import (
    AbelianGroup,
    CompositionNonzero,
    DimensionMismatch,
    IntMatrix,
    PresentedGroup,
    homology_of_pair,
    invert_unimodular,
    lattices_equal,
    rank_and_kernel,
    snf,
    solve,
    subgroups_equal,
)

from helpers import det, random_matrix


def diag(*vals):
    return IntMatrix.diagonal(list(vals))


class TestSmithNormalForm:
    def test_two_by_two(self):
        res = snf(IntMatrix.from_rows([[2, 4], [6, 8]]))
        assert res.factors == (2, 4)

    def test_identity(self):
        res = snf(IntMatrix.identity(3))
        assert res.factors == (1, 1, 1)

    def test_zero(self):
        res = snf(IntMatrix.zero(2, 3))
        assert res.factors == ()

    def test_empty(self):
        res = snf(IntMatrix.zero(0, 0))
        assert res.factors == ()
        assert res.left == IntMatrix.identity(0)

    def test_transforms_reconstruct(self):
        M = IntMatrix.from_rows([[2, 4], [6, 8]])
        res = snf(M)
        D = res.left @ M @ res.right
        assert D == IntMatrix.diagonal([2, 4])

    def test_divisibility_chain(self):
        M = IntMatrix.from_rows([[2, 0], [0, 3]])
        res = snf(M)
        assert res.factors == (1, 6)

    def test_product_equals_det(self):
        rng = random.Random(7)
        for _ in range(40):
            n = rng.randint(1, 4)
            M = random_matrix(rng, n, n)
            res = snf(M)
            prod = 1
            for f in res.factors:
                prod *= f
            if len(res.factors) < n:
                prod = 0
            assert prod == abs(det(M))

    def test_transforms_unimodular(self):
        rng = random.Random(11)
        for _ in range(30):
            M = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            res = snf(M)
            assert abs(det(res.left)) == 1
            assert abs(det(res.right)) == 1

    @given(st.lists(st.lists(st.integers(-9, 9), min_size=1, max_size=4),
                    min_size=1, max_size=4).filter(
                        lambda rows: len({len(r) for r in rows}) == 1))
    @settings(max_examples=60, deadline=None)
    def test_reconstruction_property(self, rows):
        M = IntMatrix.from_rows(rows)
        res = snf(M)
        D = res.left @ M @ res.right
        for i in range(D.rows):
            for j in range(D.cols):
                v = D.entries.get((i, j), 0)
                if i == j and i < len(res.factors):
                    assert v == res.factors[i] > 0
                else:
                    assert v == 0
        for i in range(1, len(res.factors)):
            assert res.factors[i] % res.factors[i - 1] == 0

    def test_field_coefficients(self):
        M = IntMatrix.from_rows([[2, 4], [6, 8]])
        res = snf(M, p=2)
        # over F_2 the matrix is zero
        assert res.factors == ()
        res5 = snf(M, p=5)
        assert res5.factors == (1, 1)


class TestKernelsAndSolve:
    def test_rank_and_kernel(self):
        M = IntMatrix.from_rows([[1, 1]])
        rank, ker = rank_and_kernel(M)
        assert rank == 1
        want = IntMatrix.from_rows([[1], [-1]])
        assert lattices_equal(ker, want)

    def test_kernel_saturated(self):
        M = IntMatrix.from_rows([[2, 2]])
        _, ker = rank_and_kernel(M)
        # (1, -1) itself must lie in the kernel lattice, not only (2, -2)
        assert solve(ker, IntMatrix.column([1, -1])) is not None

    def test_solve_round_trip(self):
        rng = random.Random(3)
        for _ in range(30):
            M = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            x = IntMatrix.column([rng.randint(-4, 4) for _ in range(M.cols)])
            b = M @ x
            y = solve(M, b)
            assert y is not None
            assert M @ y == b

    def test_solve_unsolvable(self):
        M = IntMatrix.from_rows([[2]])
        assert solve(M, IntMatrix.column([3])) is None

    def test_solve_mod_p(self):
        M = IntMatrix.from_rows([[2]])
        y = solve(M, IntMatrix.column([3]), p=5)
        assert y is not None
        assert ((M @ y) - IntMatrix.column([3])).mod(5).is_zero()

    def test_invert_unimodular(self):
        rng = random.Random(5)
        for _ in range(20):
            n = rng.randint(1, 4)
            res = snf(random_matrix(rng, n, n + 1))
            G = res.left
            Ginv = invert_unimodular(G)
            assert G @ Ginv == IntMatrix.identity(n)
            assert Ginv @ G == IntMatrix.identity(n)


class TestAbelianGroup:
    def test_torsion_validated(self):
        with pytest.raises(ValueError):
            AbelianGroup(0, (1,))
        with pytest.raises(ValueError):
            AbelianGroup(0, (4, 2))

    def test_str(self):
        assert str(AbelianGroup(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
        assert str(AbelianGroup(1, ())) == "Z"
        assert str(AbelianGroup(0, ())) == "0"


class TestHomologyOfPair:
    def test_torsion(self):
        # ambient rank 2, boundaries the image of diag(2,3), no outgoing map
        h = homology_of_pair(diag(2, 3), IntMatrix.zero(0, 2))
        assert h == AbelianGroup(0, (6,))

    def test_free(self):
        h = homology_of_pair(IntMatrix.zero(2, 0), IntMatrix.zero(0, 2))
        assert h == AbelianGroup(2, ())

    def test_cycle_restriction(self):
        # d_out = [1 1] kills one rank; nothing incoming
        h = homology_of_pair(IntMatrix.zero(2, 0),
                             IntMatrix.from_rows([[1, 1]]))
        assert h == AbelianGroup(1, ())

    def test_composition_checked(self):
        with pytest.raises(CompositionNonzero):
            homology_of_pair(IntMatrix.from_rows([[1], [0]]),
                             IntMatrix.from_rows([[1, 0]]))

    def test_shape_checked(self):
        with pytest.raises(DimensionMismatch):
            homology_of_pair(IntMatrix.zero(2, 1), IntMatrix.zero(1, 3))

    def test_mod_p(self):
        h = homology_of_pair(diag(2, 3), IntMatrix.zero(0, 2), p=2)
        # multiplication by 2 dies mod 2: one surviving line
        assert h == AbelianGroup(1, ())

    def test_klein_bottle_style(self):
        # d1 = [[0], [2]] from one 2-cell onto two 1-cycles
        h = homology_of_pair(IntMatrix.from_rows([[0], [2]]),
                             IntMatrix.zero(0, 2))
        assert h == AbelianGroup(1, (2,))


class TestPresentedGroup:
    def test_coords_round_trip(self):
        rng = random.Random(13)
        for _ in range(25):
            n = rng.randint(1, 4)
            cyc = IntMatrix.identity(n)
            rel = random_matrix(rng, n, rng.randint(0, 3))
            pg = PresentedGroup(cyc, rel)
            for k in range(pg.rank_coords()):
                amb = pg.representative(k)
                coords = pg.coords_of(amb)
                assert coords is not None
                want = [1 if i == k else 0 for i in range(pg.rank_coords())]
                nt = len(pg.torsion_moduli)
                got = [c % d for c, d in zip(coords[:nt], pg.torsion_moduli)]
                got += coords[nt:]
                assert got == [w % d for w, d in zip(want[:nt], pg.torsion_moduli)] + want[nt:]

    def test_zero_detection(self):
        # Z/2: relation 2x = 0, so 2*generator is the zero class
        pg = PresentedGroup(IntMatrix.identity(1), IntMatrix.from_rows([[2]]))
        assert pg.group == AbelianGroup(0, (2,))
        rep = pg.representative(0)
        assert not pg.coords_are_zero(pg.coords_of(rep))
        assert pg.coords_are_zero(pg.coords_of(rep.scale(2)))

    def test_subgroups_equal(self):
        no_rel = IntMatrix(2, 0)
        a = IntMatrix.from_rows([[2, 0], [0, 3]])
        b = IntMatrix.from_rows([[2, 0], [0, 9]])
        assert subgroups_equal(a, b, no_rel) is False
        c = IntMatrix.from_rows([[0, -2], [3, 0]])
        assert subgroups_equal(a, c, no_rel) is True


class TestUniversalCoefficients:
    def test_dimension_count(self):
        """dim_p H_j(C; F_p) = rank H_j + t_p(H_j) + t_p(H_{j-1}), where
        t_p counts invariant factors divisible by p.  For a two-term complex
        top -> bot, the torsion all sits at bot, so the Tor correction
        appears once at bot and once (shifted) at top."""
        rng = random.Random(17)
        for _ in range(40):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            d = random_matrix(rng, rows, cols)
            bot_out = IntMatrix.zero(0, rows)
            top_in = IntMatrix.zero(cols, 0)
            hz_bot = homology_of_pair(d, bot_out)
            hz_top = homology_of_pair(top_in, d)
            assert hz_top.torsion == ()  # kernels of integer maps are free
            for p in (2, 3, 5):
                hp_bot = homology_of_pair(d, bot_out, p=p)
                hp_top = homology_of_pair(top_in, d, p=p)
                tp = sum(1 for t in hz_bot.torsion if t % p == 0)
                assert hp_bot.free_rank == hz_bot.free_rank + tp
                assert hp_top.free_rank == hz_top.free_rank + tp
