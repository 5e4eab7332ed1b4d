from fractions import Fraction
import random

import pytest

from lincat.exact_linalg import (
    MatrixQ,
    build_quotient,
    format_scalar,
    kernel_basis,
    parse_scalar,
    rank,
    row_space_basis,
    rref,
    solve_in_span,
    unit_vector,
    vec,
    vec_add,
    vec_scale,
    zero_vector,
)


def random_matrix(rng, rows, cols, den=2):
    return MatrixQ(rows, cols, tuple(
        tuple(Fraction(rng.randint(-4, 4), rng.choice([1, den])) for _ in range(cols))
        for _ in range(rows)
    ))


def test_scalar_parse_format_round_trip():
    for text in ["0", "5", "-7", "2/3", "-11/4"]:
        s = parse_scalar(text)
        assert format_scalar(s) == text
    assert parse_scalar(3) == Fraction(3)
    assert parse_scalar("6/4") == Fraction(3, 2)
    with pytest.raises(ValueError):
        parse_scalar("1.5e3x")
    with pytest.raises(ValueError):
        parse_scalar("")


def test_vector_helpers():
    v = vec([1, "1/2", Fraction(2, 3)])
    assert v == (Fraction(1), Fraction(1, 2), Fraction(2, 3))
    assert vec_add(v, zero_vector(3)) == v
    assert vec_scale(Fraction(2), unit_vector(3, 1)) == (0, 2, 0)


def test_rref_shape_and_idempotence():
    rng = random.Random(11)
    for _ in range(25):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        r = rref(m)
        rows = [r.matrix.row(i) for i in range(r.rank)]
        # pivots strictly increase and pivot columns are unit
        pivots = [next(j for j, s in enumerate(row) if s != 0) for row in rows]
        assert pivots == sorted(set(pivots))
        assert tuple(pivots) == r.pivots
        for i, p in enumerate(pivots):
            assert rows[i][p] == 1
            for i2 in range(len(rows)):
                if i2 != i:
                    assert rows[i2][p] == 0
        if rows:
            again = rref(MatrixQ(len(rows), m.cols, tuple(rows)))
            assert [again.matrix.row(i) for i in range(again.rank)] == rows


def test_rank_nullity():
    rng = random.Random(12)
    for _ in range(25):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = random_matrix(rng, rows, cols)
        assert rank(m) + len(kernel_basis(m)) == cols
        for k in kernel_basis(m):
            assert m.apply(k) == zero_vector(rows)


def test_matrix_algebra():
    rng = random.Random(13)
    for _ in range(15):
        n = rng.randint(1, 4)
        a = random_matrix(rng, n, n)
        b = random_matrix(rng, n, n)
        c = random_matrix(rng, n, n)
        assert (a @ b) @ c == a @ (b @ c)
        assert a @ MatrixQ.identity(n) == a
        assert (a @ b).transpose() == b.transpose() @ a.transpose()
        assert (a + b).scale(Fraction(2)) == a.scale(Fraction(2)) + b.scale(Fraction(2))


def test_solve_in_span():
    rng = random.Random(14)
    hits = 0
    for _ in range(40):
        m = random_matrix(rng, 3, rng.randint(1, 3))
        target = vec([rng.randint(-3, 3) for _ in range(3)])
        sol = solve_in_span(m, target)
        if sol is not None:
            assert m.apply(sol) == target
            hits += 1
    assert hits > 0


def test_quotient_space():
    # ambient Q^3 modulo span{(1,0,0)}
    q = build_quotient(3, [vec([1, 0, 0]), vec([2, 0, 0])])
    assert q.dim == 2
    assert q.subspace_dim == 1
    assert q.reduce(vec([5, 1, 2])) == q.reduce(vec([0, 1, 2]))
    coords = q.coset_coordinates(vec([7, 3, -1]))
    assert q.reduce(q.lift(coords)) == q.reduce(vec([7, 3, -1]))
    assert q.contains(vec([4, 0, 0]))
    assert not q.contains(vec([0, 1, 0]))


def test_quotient_zero_and_full():
    q_all = build_quotient(2, [vec([1, 0]), vec([0, 1])])
    assert q_all.dim == 0
    q_none = build_quotient(2, [])
    assert q_none.dim == 2
    assert q_none.coset_coordinates(vec([3, 4])) == (3, 4)


def test_row_space_basis_canonical():
    rng = random.Random(15)
    for _ in range(20):
        cols = rng.randint(1, 4)
        rows = [vec([rng.randint(-2, 2) for _ in range(cols)]) for _ in range(rng.randint(0, 4))]
        basis1 = row_space_basis(rows, cols)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        scaled = [vec_scale(Fraction(3), r) for r in shuffled]
        assert row_space_basis(scaled, cols) == basis1
