"""Fourier-polynomial loop algebra over a matrix model, with its double extension.

Elements carry finitely many modes, each a matrix over a cyclotomic field.
The bracket realizes the two-step extension: a central cocycle term pairing
opposite modes through the invariant trace form and the diagonal derivation,
a loop term, and a derivation coordinate that acts but never grows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .affine import AffinisationSpec
from .cyclo import (
    Cyc,
    Matrix,
    mat_add,
    mat_commutator,
    mat_eq,
    mat_is_zero,
    mat_scale,
)
from .models import StandardModel, standard_model
from .rootdata import Functional, inner


def _model_of(spec: AffinisationSpec) -> StandardModel:
    return standard_model(spec.lars, spec.base.rank)


@dataclass(frozen=True)
class LoopElement:
    """Finitely many Fourier modes, each a square cyclotomic matrix."""

    terms: tuple  # sorted tuple of (mode, Matrix), zero matrices pruned

    def __post_init__(self):
        pruned = tuple(sorted((int(n), m) for n, m in self.terms if not mat_is_zero(m)))
        object.__setattr__(self, "terms", pruned)

    @staticmethod
    def from_dict(d: dict) -> "LoopElement":
        return LoopElement(tuple(d.items()))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def modes(self) -> tuple:
        return tuple(n for n, _ in self.terms)

    def __add__(self, other: "LoopElement") -> "LoopElement":
        out = dict(self.terms)
        for n, m in other.terms:
            out[n] = mat_add(out[n], m) if n in out else m
        return LoopElement(tuple(out.items()))

    def __neg__(self) -> "LoopElement":
        return LoopElement(tuple((n, mat_scale(Cyc.rational(m[0][0].L, -1), m)) for n, m in self.terms))

    def __sub__(self, other: "LoopElement") -> "LoopElement":
        return self + (-other)

    def scale(self, c: Cyc) -> "LoopElement":
        return LoopElement(tuple((n, mat_scale(c, m)) for n, m in self.terms))

    def __eq__(self, other):
        if not isinstance(other, LoopElement):
            return NotImplemented
        if len(self.terms) != len(other.terms):
            return False
        return all(
            na == nb and mat_eq(ma, mb) for (na, ma), (nb, mb) in zip(self.terms, other.terms)
        )


@dataclass(frozen=True)
class DoubleExtElement:
    """(central coordinate, loop part, derivation coordinate)."""

    z: Cyc
    loop: LoopElement
    t: Cyc

    @staticmethod
    def zero(L: int) -> "DoubleExtElement":
        return DoubleExtElement(Cyc.zero(L), LoopElement(()), Cyc.zero(L))

    @staticmethod
    def central(L: int) -> "DoubleExtElement":
        return DoubleExtElement(Cyc.one(L), LoopElement(()), Cyc.zero(L))

    @staticmethod
    def scaling(L: int) -> "DoubleExtElement":
        return DoubleExtElement(Cyc.zero(L), LoopElement(()), Cyc.one(L))

    @staticmethod
    def from_loop(L: int, mode: int, m: Matrix) -> "DoubleExtElement":
        return DoubleExtElement(Cyc.zero(L), LoopElement(((mode, m),)), Cyc.zero(L))

    def __add__(self, other: "DoubleExtElement") -> "DoubleExtElement":
        return DoubleExtElement(self.z + other.z, self.loop + other.loop, self.t + other.t)

    def __sub__(self, other: "DoubleExtElement") -> "DoubleExtElement":
        return DoubleExtElement(self.z - other.z, self.loop - other.loop, self.t - other.t)

    def __neg__(self) -> "DoubleExtElement":
        return DoubleExtElement(-self.z, -self.loop, -self.t)

    def scale(self, c: Cyc) -> "DoubleExtElement":
        return DoubleExtElement(c * self.z, self.loop.scale(c), c * self.t)

    def is_zero(self) -> bool:
        return self.z.is_zero() and self.t.is_zero() and not self.loop.terms

    def __eq__(self, other):
        if not isinstance(other, DoubleExtElement):
            return NotImplemented
        return self.z == other.z and self.t == other.t and self.loop == other.loop


def validate_element(spec: AffinisationSpec, a: DoubleExtElement, residues=None) -> None:
    """Check the mode-eigenspace invariant against the spec's standard twist.

    For pre-standardization elements, pass `residues(root) -> admissible residue
    tuple mod the twist order` from a certificate instead.
    """
    model = _model_of(spec)
    for n, m in a.loop.terms:
        if len(m) != model.dim:
            raise ValueError(f"matrix dimension {len(m)} does not match the model ({model.dim})")
        if residues is None:
            if not model.in_mode(m, n):
                raise ValueError(f"mode {n} matrix is not in the twist eigenspace")
        else:
            for root, comp in model.weight_components(m):
                allowed = residues(root)
                if n % spec.twist_order not in tuple(r % spec.twist_order for r in allowed):
                    raise ValueError(f"mode {n} has a weight component outside its residue class")


def loop_pairing(spec: AffinisationSpec, x: LoopElement, y: LoopElement, L: int = 0) -> Cyc:
    """Invariant bilinear form: opposite modes pair through the trace form."""
    model = _model_of(spec)
    if not L:
        L = _conductor_of(x, y)
    acc = Cyc.zero(L)
    ydict = dict(y.terms)
    for n, m in x.terms:
        if -n in ydict:
            acc = acc + model.bilinear_form(m, ydict[-n])
    return acc


def _conductor_of(*items) -> int:
    for it in items:
        if isinstance(it, LoopElement):
            for _, m in it.terms:
                return m[0][0].L
        if isinstance(it, DoubleExtElement):
            return it.z.L
    raise ValueError("cannot infer a conductor from zero loop elements")


def _slant_values(model: StandardModel, nu: Functional) -> tuple:
    """nu evaluated on the weight of each basis vector; entry weights difference these."""
    vals = []
    for a in range(model.dim):
        w = model.weight_of_basis(a)
        if w > 0:
            vals.append(nu[w])
        elif w < 0:
            vals.append(-nu[-w])
        else:
            vals.append(Fraction(0))
    return tuple(vals)


def apply_derivation(spec: AffinisationSpec, nu: Functional, a: DoubleExtElement) -> DoubleExtElement:
    """The diagonal derivation: i(n/N + nu(weight sharp)) on each weight component."""
    model = _model_of(spec)
    L = a.z.L
    ii = Cyc.i(L)
    wv = _slant_values(model, nu)
    scalar_cache: dict[Fraction, Cyc] = {}
    out_terms = []
    for n, m in a.loop.terms:
        d = len(m)
        shift = Fraction(n, spec.twist_order)
        rows = []
        for r in range(d):
            row = []
            for c in range(d):
                v = m[r][c]
                if v:
                    scal = shift + wv[r] - wv[c]
                    factor = scalar_cache.get(scal)
                    if factor is None:
                        factor = ii * Cyc.rational(L, scal)
                        scalar_cache[scal] = factor
                    v = v * factor
                row.append(v)
            rows.append(tuple(row))
        out_terms.append((n, tuple(rows)))
    return DoubleExtElement(Cyc.zero(L), LoopElement(tuple(out_terms)), Cyc.zero(L))


def bracket(spec: AffinisationSpec, a: DoubleExtElement, b: DoubleExtElement) -> DoubleExtElement:
    """Exact Lie bracket of the double extension."""
    L = a.z.L
    if b.z.L != L:
        raise ValueError("conductor mismatch between elements")
    slant = spec.slant
    da = apply_derivation(spec, slant, a)
    z = loop_pairing(spec, da.loop, b.loop, L)
    loop_terms: dict[int, Matrix] = {}
    for n, m in a.loop.terms:
        for n2, m2 in b.loop.terms:
            comm = mat_commutator(m, m2)
            k = n + n2
            loop_terms[k] = mat_add(loop_terms[k], comm) if k in loop_terms else comm
    lp = LoopElement(tuple(loop_terms.items()))
    if a.t:
        db = apply_derivation(spec, slant, b)
        lp = lp + db.loop.scale(a.t)
    if b.t:
        lp = lp - da.loop.scale(b.t)
    return DoubleExtElement(z, lp, Cyc.zero(L))


def kappa_form(spec: AffinisationSpec, a: DoubleExtElement, b: DoubleExtElement) -> Cyc:
    """The invariant symmetric form of the quadratic Lie algebra."""
    return loop_pairing(spec, a.loop, b.loop, a.z.L) + a.z * b.t + b.z * a.t


def weight_decompose(spec: AffinisationSpec, x: Matrix):
    """Split a matrix into Cartan-weight components (sum reconstructs the input)."""
    return _model_of(spec).weight_components(x)


def phi_hat(cert, spec_src: AffinisationSpec, spec_dst: AffinisationSpec, a: DoubleExtElement) -> DoubleExtElement:
    """The untwisting isomorphism: relabel each weight component's mode.

    The certificate supplies the slant mu and the two twist orders; a weight-a
    component at source mode n moves to mode N_psi * (n / N_phi - mu(a sharp)),
    which is an integer exactly when the certificate is valid.  Central and
    derivation coordinates are fixed.
    """
    n_phi, n_psi = cert.orders
    model = _model_of(spec_dst)
    L = a.z.L
    out: dict[int, Matrix] = {}
    for n, m in a.loop.terms:
        for root, comp in model.weight_components(m):
            shift = inner(cert.mu, root.functional()) if root is not None else Fraction(0)
            target = n_psi * (Fraction(n, n_phi) - shift)
            if target.denominator != 1:
                raise ValueError(
                    f"relabeled mode {target} is not an integer: invalid certificate or element"
                )
            k = int(target)
            out[k] = mat_add(out[k], comp) if k in out else comp
    return DoubleExtElement(a.z, LoopElement(tuple(out.items())), a.t)
