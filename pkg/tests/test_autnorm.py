import dataclasses
import random
from fractions import Fraction as Q

import pytest

from twistaff.autnorm import (
    OperatorSpec,
    StandardizeError,
    antiunitary_normal_form,
    automorphism_order,
    cartan_mode_vectors,
    eigenprojectors,
    eigensplit,
    finite_order_lift,
    mode_class,
    mode_class_vectors,
    operator_order,
    standardize,
    verify_certificate,
)
from twistaff.cyclo import (
    Cyc,
    mat_eq,
    mat_from_rows,
    mat_identity,
    mat_mul,
    mat_scale,
    mat_zero,
)
from twistaff.rootdata import Functional, Root
from twistaff.sampling import random_operator


def diag(L, *entries):
    d = len(entries)
    rows = [[Cyc.zero(L)] * d for _ in range(d)]
    for i, e in enumerate(entries):
        rows[i][i] = e if isinstance(e, Cyc) else Cyc.rational(L, e)
    return tuple(tuple(r) for r in rows)


def test_finite_order_lift_rephases_projective_input():
    # B = zeta_3 * id has order 3 projectively trivial conjugation: order 1
    L = 12
    b = mat_scale(Cyc.zeta(L, 4), mat_identity(L, 2))
    spec = OperatorSpec("C", False, 2, b, 1)
    lifted = finite_order_lift(spec)
    assert mat_eq(lifted.matrix, mat_identity(L, 2))
    # an operator already of the declared order is unchanged
    a = diag(L, 1, -1)
    spec2 = OperatorSpec("C", False, 2, a, 2)
    assert mat_eq(finite_order_lift(spec2).matrix, a)


def test_finite_order_lift_antiunitary_square():
    # A = J o conj has A^2 = -1: kept as is, operator order 4
    L = 8
    j = mat_from_rows(L, [[0, -1], [1, 0]])
    spec = OperatorSpec("C", True, 2, j, automorphism_order(OperatorSpec("C", True, 2, j, 1)))
    lifted = finite_order_lift(spec)
    assert operator_order(lifted) == 4


def test_declared_order_mismatch_is_an_error():
    L = 8
    spec = OperatorSpec("C", False, 2, diag(L, 1, -1), 4)
    with pytest.raises(StandardizeError):
        finite_order_lift(spec)


def test_eigensplit_examples_and_invariants():
    L = 8
    a = diag(L, 1, -1)
    projs = dict(eigenprojectors(a, 2))
    assert mat_eq(projs[0], diag(L, 1, 0))
    assert mat_eq(projs[1], diag(L, 0, 1))
    assert mat_eq(dict(eigenprojectors(mat_identity(L, 3), 1))[0], mat_identity(L, 3))
    # 3-cycle permutation: three rank-1 projectors, exact idempotents resolving unity
    L = 12
    p3 = mat_from_rows(L, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    projs = eigenprojectors(p3, 3)
    assert len(projs) == 3
    total = mat_zero(L, 3)
    for k, p in projs:
        assert mat_eq(mat_mul(p, p), p)
        zk = Cyc.zeta(L, (k * 4) % L)
        assert mat_eq(mat_mul(p3, p), mat_scale(zk, p))
        for k2, p2 in projs:
            if k2 != k:
                assert all(c.is_zero() for row in mat_mul(p, p2) for c in row)
        from twistaff.cyclo import mat_add

        total = mat_add(total, p)
    assert mat_eq(total, mat_identity(L, 3))
    spec = OperatorSpec("C", False, 3, p3, 3)
    assert len(eigensplit(spec)) == 3


def test_antiunitary_normal_form_plain_conjugation():
    # plain conjugation on C^2: one block with exponent 0, no fixed vector
    L = 8
    spec = OperatorSpec("C", True, 2, mat_identity(L, 2), 2)
    form = antiunitary_normal_form(spec)
    assert len(form.blocks) == 1 and form.fixed_col is None
    assert form.blocks[0][0] == 0
    # on C^3: one block plus a fixed vector
    spec3 = OperatorSpec("C", True, 3, mat_identity(L, 3), 2)
    form3 = antiunitary_normal_form(spec3)
    assert len(form3.blocks) == 1 and form3.fixed_col is not None


def test_antiunitary_normal_form_quaternionic():
    # A^2 = -1 on C^2: a single block at the half exponent
    L = 8
    j = mat_from_rows(L, [[0, -1], [1, 0]])
    spec = OperatorSpec("C", True, 2, j, 2)
    form = antiunitary_normal_form(spec)
    assert len(form.blocks) == 1 and form.fixed_col is None
    assert form.blocks[0][0] == form.half_order // 2


def test_normal_form_round_trip_on_seeded_operators():
    rng = random.Random(404)
    seen_fixed = 0
    for trial in range(12):
        dim = rng.choice([2, 3, 4, 5, 6])
        spec = random_operator(rng, "C_antiunitary", dim, order_hint=rng.choice([2, 3, 4, 5, 6]))
        form = antiunitary_normal_form(spec)
        assert 2 * len(form.blocks) + (1 if form.fixed_col is not None else 0) == dim
        seen_fixed += form.fixed_col is not None
        assert operator_order(spec) == 2 * form.half_order
    assert seen_fixed  # odd dimensions occur in the sample


def test_standardize_c_unitary_example():
    # diag(1, z3, z3^2) standardizes with slant (0, -1/3, -2/3)
    L = 12
    a = diag(L, Cyc.one(L), Cyc.zeta(L, 4), Cyc.zeta(L, 8))
    cert = standardize(OperatorSpec("C", False, 3, a, 3))
    assert cert.lars == "A1" and cert.psi_kind == "identity"
    assert cert.exponents == (0, 1, 2)
    assert cert.mu == Functional({2: Q(-1, 3), 3: Q(-2, 3)})
    assert verify_certificate(OperatorSpec("C", False, 3, a, 3), cert).all_passed


def test_standardize_r_families():
    rng = random.Random(31)
    seen = set()
    for _ in range(14):
        spec = random_operator(rng, "R", rng.choice([5, 6, 7]), order_hint=rng.choice([2, 3, 4]))
        cert = standardize(spec)
        seen.add(cert.lars)
        assert verify_certificate(spec, cert).all_passed
    assert "B2" in seen and ("B1" in seen or "D1" in seen)


def test_standardize_antiunitary_families():
    rng = random.Random(32)
    seen = set()
    for _ in range(8):
        spec = random_operator(rng, "C_antiunitary", rng.choice([4, 5, 6]), order_hint=rng.choice([2, 3]))
        cert = standardize(spec)
        seen.add(cert.lars)
        assert verify_certificate(spec, cert).all_passed
    assert seen == {"C2", "BC2"}


def test_standardize_verify_passes_all_families_larger_sizes():
    rng = random.Random(33)
    cases = [("C_unitary", 8, 8), ("H", 8, 6), ("R", 8, 8), ("C_antiunitary", 7, 6)]
    for fam, dim, order in cases:
        spec = random_operator(rng, fam, dim, order_hint=order)
        cert = standardize(spec)
        assert verify_certificate(spec, cert).all_passed, fam


def test_mode_class_examples():
    # identity twist: every root sits at the zero class
    L = 8
    cert = standardize(OperatorSpec("C", False, 3, mat_identity(L, 3), 1))
    for a in (Root(((1, 1), (2, -1))), Root(((1, 1), (3, -1)))):
        assert mode_class(cert, a) == (0,)
    # diag(1, -1): the crossing root flips sign, class 1 mod 2
    cert2 = standardize(OperatorSpec("C", False, 2, diag(L, 1, -1), 2))
    assert mode_class(cert2, Root(((1, 1), (2, -1)))) == (1,)
    for a in (Root(((1, 1), (2, -1))),):
        plus = mode_class(cert2, a)
        minus = mode_class(cert2, -a)
        n = cert2.orders[0]
        assert sorted((-m) % n for m in plus) == sorted(minus)


def test_mode_class_vectors_span_and_eigenproperty():
    rng = random.Random(35)
    spec = random_operator(rng, "C_antiunitary", 5, order_hint=3)
    cert = standardize(spec)
    from twistaff.affine import lars_finite_parts
    from twistaff.autnorm import _phi_tilde_inverse

    L = cert.conductor
    n_phi = cert.orders[0]
    for a in lars_finite_parts(cert.lars, cert.base):
        vecs = mode_class_vectors(cert, a)
        assert len(vecs) == len(cert.model.weight_space_basis(L, a))
        for m, v in vecs:
            img = _phi_tilde_inverse(cert, v)
            want = mat_scale(Cyc.zeta(L, (m * (L // n_phi)) % L), v)
            assert mat_eq(img, want)
    for m, v in cartan_mode_vectors(cert):
        img = _phi_tilde_inverse(cert, v)
        assert mat_eq(img, mat_scale(Cyc.zeta(L, (m * (L // n_phi)) % L), v))


def test_tampered_certificates_are_detected():
    rng = random.Random(36)
    spec = random_operator(rng, "R", 6, order_hint=4)
    cert = standardize(spec)
    assert verify_certificate(spec, cert).all_passed

    tampered_mu = dataclasses.replace(
        cert, mu=cert.mu + Functional({1: Q(1, 7)})
    )
    assert not verify_certificate(spec, tampered_mu).all_passed

    exps = list(cert.exponents)
    exps[0] += 1
    tampered_exp = dataclasses.replace(cert, exponents=tuple(exps))
    assert not verify_certificate(spec, tampered_exp).all_passed

    rows = [list(r) for r in cert.basis_change]
    rows[0][0] = rows[0][0] + Cyc.one(cert.conductor)
    tampered_basis = dataclasses.replace(cert, basis_change=tuple(tuple(r) for r in rows))
    assert not verify_certificate(spec, tampered_basis).all_passed

    norms = list(cert.col_norms)
    norms[0] = norms[0] * Cyc.rational(cert.conductor, 2)
    tampered_norms = dataclasses.replace(cert, col_norms=tuple(norms))
    assert not verify_certificate(spec, tampered_norms).all_passed


def test_operator_spec_json_round_trip():
    rng = random.Random(37)
    spec = random_operator(rng, "C_antiunitary", 4, order_hint=2)
    again = OperatorSpec.from_json(spec.to_json())
    assert again.field == spec.field and again.antiunitary == spec.antiunitary
    assert mat_eq(again.matrix, spec.matrix)
    assert again.declared_order == spec.declared_order


def test_structure_validation():
    L = 8
    with pytest.raises(StandardizeError):
        OperatorSpec("R", True, 2, mat_identity(L, 2), 1)
    bad = mat_from_rows(L, [[1, 1], [0, 1]])
    with pytest.raises(StandardizeError):
        finite_order_lift(OperatorSpec("C", False, 2, bad, 1))
    img = mat_scale(Cyc.i(L), mat_identity(L, 2))
    with pytest.raises(StandardizeError):
        finite_order_lift(OperatorSpec("R", False, 2, img, 1))


def test_block_form_linear_part_reconstructs_operator():
    rng = random.Random(61)
    spec = random_operator(rng, "C_antiunitary", 5, order_hint=3)
    form = antiunitary_normal_form(spec)
    u = form.reconstruct_linear_part()
    lifted = mat_from_rows(form.conductor, [[c for c in row] for row in spec.matrix])
    assert mat_eq(u, lifted)


def test_eigensplit_rejects_antiunitary():
    L = 8
    spec = OperatorSpec("C", True, 2, mat_identity(L, 2), 2)
    with pytest.raises(StandardizeError):
        eigensplit(spec)
