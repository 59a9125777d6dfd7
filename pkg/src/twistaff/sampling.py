"""Seeded generators of exact test data: operators, weights, characters.

Random unitaries are products of elementary exact moves (rational Givens
rotations, root-of-unity phases, permutations), each built together with its
inverse, so conjugating a standard form never needs matrix inversion and
stays exactly unitary.  Structure-compatible variants exist per family.
"""

from __future__ import annotations

import random
from fractions import Fraction
from .autnorm import OperatorSpec, automorphism_order
from .cyclo import Cyc, Matrix, mat_identity, mat_mul, mat_scale, working_conductor
from .rootdata import Functional

#: rational points on the unit circle used for exact rotations
PYTHAGOREAN = ((Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)),
               (Fraction(8, 17), Fraction(15, 17)), (Fraction(20, 29), Fraction(21, 29)))


def _embed(L: int, d: int, entries: dict) -> Matrix:
    z = Cyc.zero(L)
    one = Cyc.one(L)
    rows = [[one if i == j else z for j in range(d)] for i in range(d)]
    for (i, j), v in entries.items():
        rows[i][j] = v if isinstance(v, Cyc) else Cyc.rational(L, v)
    return tuple(tuple(r) for r in rows)


def _givens(L: int, d: int, i: int, j: int, c: Fraction, s: Fraction):
    fwd = _embed(L, d, {(i, i): c, (i, j): -s, (j, i): s, (j, j): c})
    inv = _embed(L, d, {(i, i): c, (i, j): s, (j, i): -s, (j, j): c})
    return fwd, inv


def _phase(L: int, d: int, i: int, k: int):
    fwd = _embed(L, d, {(i, i): Cyc.zeta(L, k)})
    inv = _embed(L, d, {(i, i): Cyc.zeta(L, -k)})
    return fwd, inv


def _swap(L: int, d: int, i: int, j: int):
    m = _embed(L, d, {(i, i): 0, (j, j): 0, (i, j): 1, (j, i): 1})
    return m, m


def random_unitary(rng: random.Random, L: int, d: int, moves: int = 6, real: bool = False):
    """An exact unitary (orthogonal when real) with its exact inverse."""
    fwd = mat_identity(L, d)
    inv = mat_identity(L, d)
    for _ in range(moves):
        kind = rng.choice(("givens", "phase", "swap") if not real else ("givens", "sign", "swap"))
        i, j = rng.sample(range(d), 2) if d >= 2 else (0, 0)
        if kind == "givens":
            c, s = rng.choice(PYTHAGOREAN)
            f, g = _givens(L, d, i, j, c, s)
        elif kind == "phase":
            f, g = _phase(L, d, i, rng.randrange(L))
        elif kind == "sign":
            f, g = _phase(L, d, i, L // 2)
        else:
            f, g = _swap(L, d, i, j)
        fwd = mat_mul(fwd, f)
        inv = mat_mul(g, inv)
    return fwd, inv


def random_quaternionic_unitary(rng: random.Random, L: int, d: int, moves: int = 6):
    """An exact unitary commuting with the doubled-model structure map."""
    r = d // 2
    fwd = mat_identity(L, d)
    inv = mat_identity(L, d)
    for _ in range(moves):
        kind = rng.choice(("rot", "phase", "flip"))
        if kind == "rot" and r >= 2:
            i, j = rng.sample(range(r), 2)
            c, s = rng.choice(PYTHAGOREAN)
            f1, g1 = _givens(L, d, i, j, c, s)
            f2, g2 = _givens(L, d, r + i, r + j, c, s)
            f, g = mat_mul(f1, f2), mat_mul(g2, g1)
        elif kind == "phase":
            i = rng.randrange(r)
            k = rng.randrange(L)
            f1, g1 = _phase(L, d, i, k)
            f2, g2 = _phase(L, d, r + i, -k)
            f, g = mat_mul(f1, f2), mat_mul(g2, g1)
        else:
            i = rng.randrange(r)
            # e_i+ -> e_i-, e_i- -> -e_i+: the structure map's own rotation
            f = _embed(L, d, {(i, i): 0, (r + i, r + i): 0, (i, r + i): -1, (r + i, i): 1})
            g = _embed(L, d, {(i, i): 0, (r + i, r + i): 0, (i, r + i): 1, (r + i, i): -1})
        fwd = mat_mul(fwd, f)
        inv = mat_mul(g, inv)
    return fwd, inv


def random_operator(rng: random.Random, family: str, dim: int, order_hint: int = 4) -> OperatorSpec:
    """A seeded finite-order operator of the given family, as an OperatorSpec."""
    if family == "C_unitary":
        m = order_hint
        L = working_conductor(2 * m)
        v, vinv = random_unitary(rng, L, dim)
        exps = [rng.randrange(m) for _ in range(dim)]
        exps[0] = 0
        exps[min(1, dim - 1)] = 1 if m > 1 else 0  # force the full order
        diag = _embed(L, dim, {(i, i): Cyc.zeta(L, (e * (L // m)) % L) for i, e in enumerate(exps)})
        a = mat_mul(mat_mul(v, diag), vinv)
        # a projective phase exercises the finite-order lift
        a = mat_scale(Cyc.zeta(L, rng.randrange(L)), a)
        spec = OperatorSpec("C", False, dim, a, 1)
        return OperatorSpec("C", False, dim, a, automorphism_order(spec))
    if family == "H":
        r = dim // 2
        m = order_hint
        L = working_conductor(2 * m)
        v, vinv = random_quaternionic_unitary(rng, L, dim)
        exps = [rng.randrange(m // 2 + 1) for _ in range(r)]
        entries = {}
        for i, e in enumerate(exps):
            entries[(i, i)] = Cyc.zeta(L, (e * (L // m)) % L)
            entries[(r + i, r + i)] = Cyc.zeta(L, (-e * (L // m)) % L)
        diag = _embed(L, dim, entries)
        a = mat_mul(mat_mul(v, diag), vinv)
        spec = OperatorSpec("H", False, dim, a, 1)
        return OperatorSpec("H", False, dim, a, automorphism_order(spec))
    if family == "R":
        m = order_hint
        L = working_conductor(2 * m)
        v, vinv = random_unitary(rng, L, dim, real=True)
        entries = {}
        i = 0
        # single +-1 axes: one for odd dims, sometimes a (+1, -1) pair for even dims
        singles = [1] if dim % 2 else (rng.choice(([], [1, -1])) if dim >= 6 else [])
        if dim % 2 and dim >= 5 and rng.random() < 0.5:
            singles = [1, -1, rng.choice([1, -1])]
        for s in singles:
            entries[(i, i)] = Cyc.rational(L, s)
            i += 1
        while i + 1 < dim:
            k = rng.randrange(m)
            c = Cyc.zeta(L, (k * (L // m)) % L)
            # real rotation block with angle 2*pi*k/m
            entries[(i, i)] = (c + c.conj()) * Cyc.rational(L, Fraction(1, 2))
            entries[(i + 1, i + 1)] = entries[(i, i)]
            sin = (c - c.conj()) * Cyc.i(L).inverse() * Cyc.rational(L, Fraction(1, 2))
            entries[(i, i + 1)] = -sin
            entries[(i + 1, i)] = sin
            i += 2
        if i < dim:
            entries[(i, i)] = Cyc.rational(L, rng.choice((1, -1)))
            i += 1
        diag = _embed(L, dim, entries)
        a = mat_mul(mat_mul(v, diag), vinv)
        spec = OperatorSpec("R", False, dim, a, 1)
        return OperatorSpec("R", False, dim, a, automorphism_order(spec))
    if family == "C_antiunitary":
        # conjugate a standard block form by an exact unitary
        n = max(2, order_hint)
        L = working_conductor(2 * n, sqrt2=True)
        r = dim // 2
        has_fixed = dim % 2 == 1
        entries = {}
        for i in range(r):
            e = rng.randrange(n // 2 + 1)
            pc, mc = i, (r + 1 if has_fixed else r) + i
            entries[(pc, pc)] = 0
            entries[(mc, mc)] = 0
            entries[(pc, mc)] = Cyc.zeta(L, (e * (L // (2 * n))) % L)
            entries[(mc, pc)] = Cyc.zeta(L, (-e * (L // (2 * n))) % L)
        if has_fixed:
            entries[(r, r)] = 1
        std = _embed(L, dim, entries)
        v, vinv = random_unitary(rng, L, dim)
        # linear part of V (Std o conj) V^-1 is V Std conj(V^-1) = V Std conj(Vinv)
        from .cyclo import mat_conj

        a = mat_mul(mat_mul(v, std), mat_conj(vinv))
        spec = OperatorSpec("C", True, dim, a, 2)
        return OperatorSpec("C", True, dim, a, automorphism_order(spec))
    raise ValueError(f"unknown family {family}")


def random_functional(rng: random.Random, rank: int, denoms=(1, 2, 3)) -> Functional:
    return Functional(
        {j: Fraction(rng.randint(-3, 3), rng.choice(denoms)) for j in range(1, rank + 1)}
    )


def random_loop_element(rng: random.Random, spec, L: int, max_mode: int = 2, density: float = 0.6):
    """A seeded element of a standard double extension, entries in 0, +-1, +-i."""
    from .cyclo import mat_identity
    from .loopalg import DoubleExtElement, LoopElement
    from .models import standard_model

    model = standard_model(spec.lars, spec.base.rank)
    out = DoubleExtElement(
        Cyc.rational(L, rng.randint(-1, 1)), LoopElement(()), Cyc.rational(L, rng.randint(-1, 1))
    )
    choices = (0, 1, -1)
    for _ in range(2):
        n = rng.randint(-max_mode, max_mode)
        raw = tuple(
            tuple(
                (Cyc.rational(L, rng.choice(choices)) * (Cyc.i(L) if rng.random() < 0.3 else Cyc.one(L)))
                if rng.random() < density
                else Cyc.zero(L)
                for _ in range(model.dim)
            )
            for _ in range(model.dim)
        )
        mm = model.mode_project(model.algebra_project(raw), n)
        out = out + DoubleExtElement.from_loop(L, n, mm)
    return out


def random_twisted_element(rng: random.Random, cert, window: int = 1, terms: int = 3):
    """A seeded element of the pre-standardization (twisted) double extension."""
    from .autnorm import cartan_mode_vectors, mode_class_vectors
    from .affine import lars_finite_parts
    from .cyclo import mat_scale
    from .loopalg import DoubleExtElement, LoopElement

    L = cert.conductor
    n_phi = cert.orders[0]
    pieces = []
    for a in lars_finite_parts(cert.lars, cert.base):
        pieces.extend(mode_class_vectors(cert, a))
    pieces.extend(cartan_mode_vectors(cert))
    out = DoubleExtElement(
        Cyc.rational(L, rng.randint(-1, 1)), LoopElement(()), Cyc.rational(L, rng.randint(-1, 1))
    )
    for _ in range(terms):
        m, vec = pieces[rng.randrange(len(pieces))]
        n = m + n_phi * rng.randint(-window, window)
        coef = Cyc.rational(L, rng.choice((1, -1, 2))) * (
            Cyc.i(L) if rng.random() < 0.3 else Cyc.one(L)
        )
        out = out + DoubleExtElement.from_loop(L, n, mat_scale(coef, vec))
    return out
