import random
from fractions import Fraction as Q

import pytest

from twistaff.affine import LARS_KINDS, standard_spec
from twistaff.cyclo import Cyc, mat_eq, mat_scale, mat_sub, mat_conj_transpose
from twistaff.loopalg import (
    DoubleExtElement,
    apply_derivation,
    bracket,
    kappa_form,
    validate_element,
    weight_decompose,
)
from twistaff.models import standard_model
from twistaff.rootdata import Functional, Root
from twistaff.sampling import random_loop_element

L = 4


def test_central_element_brackets_to_zero():
    spec = standard_spec("A1", 2)
    m = standard_model("A1", 2)
    x = DoubleExtElement.from_loop(L, 1, m.basis_matrix(L, 0, 1))
    assert bracket(spec, DoubleExtElement.central(L), x).is_zero()


def test_derivation_coordinate_scales_modes():
    nu = Functional({1: Q(1, 3)})
    spec = standard_spec("A1", 2, nu=nu)
    m = standard_model("A1", 2)
    x = DoubleExtElement.from_loop(L, 1, m.basis_matrix(L, 0, 1))
    got = bracket(spec, DoubleExtElement.scaling(L), x)
    scal = Cyc.i(L) * Cyc.rational(L, Q(4, 3))
    assert got == DoubleExtElement.from_loop(L, 1, mat_scale(scal, m.basis_matrix(L, 0, 1)))


def test_paired_modes_produce_the_central_charge():
    spec = standard_spec("A1", 2)
    m = standard_model("A1", 2)
    x = m.basis_matrix(L, 0, 1)
    b = bracket(
        spec,
        DoubleExtElement.from_loop(L, 1, x),
        DoubleExtElement.from_loop(L, -1, mat_conj_transpose(x)),
    )
    assert b.z == -Cyc.i(L)
    assert b.t.is_zero()
    loop = dict(b.loop.terms)
    assert list(loop) == [0]
    assert mat_eq(loop[0], mat_sub(m.cartan_matrix(1, L), m.cartan_matrix(2, L)))


def test_root_vector_bracket_display():
    # [e_n x, (e_n x)*] = (-i (n/N + s(a#)) <x,x>, <x,x> a#, 0) for weight vectors
    for kind in LARS_KINDS:
        spec = standard_spec(kind, 2, nu=Functional({1: Q(1, 4)}))
        m = standard_model(kind, 2)
        from twistaff.affine import lars_finite_parts
        from twistaff.models import model_mode_residues
        from twistaff.rootdata import inner
        from twistaff.cyclo import mat_add, mat_zero

        for a in lars_finite_parts(kind, m.base)[:4]:
            for res in model_mode_residues(m, a):
                for x in m.root_space_basis(L, a, res):
                    n = res
                    e = DoubleExtElement.from_loop(L, n, x)
                    estar = DoubleExtElement.from_loop(L, -n, mat_conj_transpose(x))
                    b = bracket(spec, e, estar)
                    nx = m.hermitian_form(x, x)
                    scal = Q(n, spec.twist_order) + inner(spec.slant, a.functional())
                    want_z = -Cyc.i(L) * Cyc.rational(L, scal) * nx
                    assert b.z == want_z
                    sharp = mat_zero(L, m.dim)
                    for j, c in a.coeffs:
                        sharp = mat_add(sharp, mat_scale(Cyc.rational(L, c), m.cartan_matrix(j, L)))
                    assert dict(b.loop.terms) == {} if nx.is_zero() else True
                    loop = dict(b.loop.terms)
                    assert mat_eq(loop[0], mat_scale(nx, sharp))


def test_kappa_examples():
    spec = standard_spec("A1", 2)
    c = DoubleExtElement.central(L)
    d = DoubleExtElement.scaling(L)
    assert kappa_form(spec, c, d) == Cyc.one(L)
    assert kappa_form(spec, c, c) == Cyc.zero(L)


def test_bracket_properties_random():
    rng = random.Random(42)
    for kind in LARS_KINDS:
        spec = standard_spec(kind, 2, mu=Functional({1: Q(1, 4)}), nu=Functional({2: Q(-1, 3)}))
        nu = spec.slant_nu
        for _ in range(6):
            a = random_loop_element(rng, spec, L)
            b = random_loop_element(rng, spec, L)
            c = random_loop_element(rng, spec, L)
            validate_element(spec, a)
            ab = bracket(spec, a, b)
            assert (ab + bracket(spec, b, a)).is_zero()
            jac = (
                bracket(spec, a, bracket(spec, b, c))
                + bracket(spec, b, bracket(spec, c, a))
                + bracket(spec, c, ab)
            )
            assert jac.is_zero()
            assert kappa_form(spec, ab, c) == kappa_form(spec, a, bracket(spec, b, c))
            da, db = apply_derivation(spec, nu, a), apply_derivation(spec, nu, b)
            assert kappa_form(spec, da, b) == -kappa_form(spec, a, db)
            assert apply_derivation(spec, nu, ab) == bracket(spec, da, b) + bracket(spec, a, db)


def test_derivation_examples():
    spec = standard_spec("A1", 2)
    m = standard_model("A1", 2)
    # constant loops with zero slant map to zero
    const = DoubleExtElement.from_loop(L, 0, m.cartan_matrix(1, L))
    assert apply_derivation(spec, Functional(()), const).is_zero()
    # weight vector scaling
    nu = Functional({1: Q(1, 2)})
    x = DoubleExtElement.from_loop(L, 2, m.basis_matrix(L, 0, 1))
    got = apply_derivation(spec, nu, x)
    scal = Cyc.i(L) * Cyc.rational(L, 2 + Q(1, 2))
    assert got == x.scale(scal)
    # linearity over a two-term element
    y = DoubleExtElement.from_loop(L, -1, m.basis_matrix(L, 1, 0))
    lhs = apply_derivation(spec, nu, x + y)
    assert lhs == apply_derivation(spec, nu, x) + apply_derivation(spec, nu, y)


def test_weight_decompose():
    spec = standard_spec("A1", 2)
    m = standard_model("A1", 2)
    from twistaff.cyclo import mat_identity, mat_add, mat_zero

    ident = mat_identity(L, 2)
    comps = weight_decompose(spec, ident)
    assert len(comps) == 1 and comps[0][0] is None
    unit = m.basis_matrix(L, 0, 1)
    comps = weight_decompose(spec, unit)
    assert len(comps) == 1 and comps[0][0] == Root(((1, 1), (2, -1)))
    dense = tuple(tuple(Cyc.rational(L, i + 2 * j + 1) for j in range(2)) for i in range(2))
    comps = weight_decompose(spec, dense)
    assert len(comps) <= 4
    total = mat_zero(L, 2)
    for _, comp in comps:
        total = mat_add(total, comp)
    assert mat_eq(total, dense)


def test_mode_eigenspace_validation():
    spec = standard_spec("C2", 2)
    m = standard_model("C2", 2)
    x = m.root_space_basis(L, Root(((1, 2),)), 0)[0]  # long roots live at even modes
    good = DoubleExtElement.from_loop(L, 2, x)
    validate_element(spec, good)
    bad = DoubleExtElement.from_loop(L, 1, x)
    with pytest.raises(ValueError):
        validate_element(spec, bad)


def test_phi_hat_rejects_inadmissible_modes():
    import random

    from twistaff.autnorm import standardize
    from twistaff.loopalg import phi_hat
    from twistaff.sampling import random_operator

    rng = random.Random(44)
    spec = random_operator(rng, "C_unitary", 3, order_hint=3)
    cert = standardize(spec)
    if all(e == 0 for e in cert.exponents):  # need a genuinely twisted instance
        spec = random_operator(rng, "C_unitary", 3, order_hint=3)
        cert = standardize(spec)
    src = cert.source_spec()
    dst = cert.target_spec()
    m = cert.model
    Lc = cert.conductor
    # pick a root whose class is nonzero and feed it at a wrong mode
    from twistaff.affine import lars_finite_parts
    from twistaff.autnorm import mode_class

    for a in lars_finite_parts(cert.lars, cert.base):
        classes = mode_class(cert, a)
        bad = next((n for n in range(cert.orders[0])), None)
        if classes != (0,):
            off = (classes[0] + 1) % cert.orders[0]
            x = m.weight_space_basis(Lc, a)[0]
            elem = DoubleExtElement.from_loop(Lc, off, x)
            with pytest.raises(ValueError):
                phi_hat(cert, src, dst, elem)
            return
    pytest.skip("sample produced an untwisted certificate")


def test_phi_hat_mode_relabel_diag_example():
    # the order-2 twist diag(1, -1): the crossing weight at source mode 1 lands at mode 0
    from twistaff.autnorm import OperatorSpec, standardize
    from twistaff.cyclo import mat_from_rows
    from twistaff.loopalg import phi_hat

    op = OperatorSpec("C", False, 2, mat_from_rows(4, [[1, 0], [0, -1]]), 2)
    cert = standardize(op)
    src, dst = cert.source_spec(), cert.target_spec()
    m = cert.model
    Lc = cert.conductor
    e12 = m.basis_matrix(Lc, 0, 1)
    moved = phi_hat(cert, src, dst, DoubleExtElement.from_loop(Lc, 1, e12))
    assert moved == DoubleExtElement.from_loop(Lc, 0, e12)
    center = DoubleExtElement.central(Lc)
    assert phi_hat(cert, src, dst, center) == center
