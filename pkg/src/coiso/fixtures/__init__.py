"""Named algebras used throughout the tests and the CLI."""
from __future__ import annotations

from ..algebra import Algebra, direct_product, ground_algebra, left_ideal_generated, tensor_algebra
from ..field import QQ, Field
from ..linalg import Subspace


def qq(field: Field = QQ) -> Algebra:
    return ground_algebra(field)


def qq_x_qq(field: Field = QQ) -> Algebra:
    return direct_product(qq(field), qq(field), label="kxk")


def matrix_units(n: int, field: Field = QQ, label: str = "") -> Algebra:
    """Mat_n(k) with basis E_ab at index a*n + b."""
    entries = [(a * n + b, b * n + d, a * n + d, 1) for a in range(n) for b in range(n) for d in range(n)]
    unit = [1 if i // n == i % n else 0 for i in range(n * n)]
    return Algebra(n * n, entries, unit, field, label=label or f"M{n}")


def m2(field: Field = QQ) -> Algebra:
    """Basis E11, E12, E21, E22."""
    return matrix_units(2, field, "M2")


def t2(field: Field = QQ) -> Algebra:
    """Upper-triangular 2x2 matrices, basis E11, E12, E22."""
    entries = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 1, 1), (2, 2, 2, 1)]
    return Algebra(3, entries, [1, 0, 1], field, label="T2")


def truncated_poly(n: int, field: Field = QQ, label: str = "") -> Algebra:
    """k[x]/(x^n), basis 1, x, ..., x^(n-1)."""
    entries = [(i, j, i + j, 1) for i in range(n) for j in range(n) if i + j < n]
    return Algebra(n, entries, [1] + [0] * (n - 1), field, label=label or f"k[x]/x^{n}")


def dual(field: Field = QQ) -> Algebra:
    """k[λ]/(λ²) with λ as deformation parameter of order 2."""
    a = truncated_poly(2, field, "DUAL")
    return a.with_deformation([0, 1], 2)


def cliff(field: Field = QQ) -> Algebra:
    """Basis (1, x, λ, λx) with x² = λ, λ central and λ² = 0."""
    one, x, lam, lx = range(4)
    entries = [
        (one, one, one, 1), (one, x, x, 1), (one, lam, lam, 1), (one, lx, lx, 1),
        (x, one, x, 1), (x, x, lam, 1), (x, lam, lx, 1),
        (lam, one, lam, 1), (lam, x, lx, 1),
        (lx, one, lx, 1),
    ]
    return Algebra(4, entries, [1, 0, 0, 0], field, label="CLIFF", lam=[0, 0, 1, 0], order=2)


def j_col(field: Field = QQ) -> Subspace:
    """Left ideal of M2 generated by E11: the matrices with zero second column."""
    a = m2(field)
    return left_ideal_generated(a, [a.basis_vector(0)])


def path_algebra(vertices: int, arrows: list[tuple[int, int]], max_length: int,
                 field: Field = QQ, label: str = "") -> Algebra:
    """Path algebra modulo all paths longer than `max_length`.

    Paths compose left to right: p·q is nonzero when p ends where q starts.
    """
    paths: list[tuple[int, tuple[int, ...]]] = [(v, ()) for v in range(vertices)]
    frontier = [(v, ()) for v in range(vertices)]
    for _ in range(max_length):
        nxt = []
        for start, arr in frontier:
            end = arrows[arr[-1]][1] if arr else start
            for k, (s, _) in enumerate(arrows):
                if s == end:
                    nxt.append((start, arr + (k,)))
        paths.extend(nxt)
        frontier = nxt
    index = {p: i for i, p in enumerate(paths)}

    def end_of(p):
        start, arr = p
        return arrows[arr[-1]][1] if arr else start

    entries = []
    for p in paths:
        for q in paths:
            if end_of(p) != q[0]:
                continue
            r = (p[0], p[1] + q[1])
            if r in index:
                entries.append((index[p], index[q], index[r], 1))
    unit = [1 if not p[1] else 0 for p in paths]
    return Algebra(len(paths), entries, unit, field, label=label or "kQ")


def deformed_pool(field: Field = QQ) -> list[Algebra]:
    """Deformed algebras of dimension at most 4 with order 2."""
    d = dual(field)
    out = [d, cliff(field)]
    for base in (qq_x_qq(field), truncated_poly(2, field)):
        t = tensor_algebra(base, d.undeformed(), label=f"{base.label}[λ]")
        lam = [x * y for x in base.unit for y in d.lam]
        out.append(t.with_deformation(lam, 2))
    prod = direct_product(qq(field), d.undeformed(), label="k x DUAL")
    out.append(prod.with_deformation([0, 0, 1], 2))
    return out


def classical_pool(field: Field = QQ, max_dim: int = 4) -> list[Algebra]:
    """Small undeformed algebras for randomized instances."""
    pool = [
        qq(field), qq_x_qq(field), truncated_poly(2, field), t2(field),
        direct_product(qq_x_qq(field), qq(field), label="kxkxk"), truncated_poly(3, field),
        direct_product(qq(field), truncated_poly(2, field), label="k x k[x]/x^2"),
        path_algebra(1, [(0, 0), (0, 0)], 1, field, label="k<x,y>/(x,y)^2"),
        m2(field),
        path_algebra(2, [(0, 1), (1, 0)], 1, field, label="kQ2/rad^2"),
        direct_product(qq(field), t2(field), label="k x T2"),
    ]
    return [a for a in pool if a.dim <= max_dim]
