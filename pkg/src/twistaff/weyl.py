"""The affine Weyl group: translations by scaled coroots, signed permutations on top.

Elements are kept in the normal form (translation, finite part).  The finite
part acts on the H-component only (the unslanted action); the slanted action
of a spec with slant nu is its conjugate by the shear translation along the
sharp of nu, matching the affine reflections of the spec exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .affine import (
    AffineRoot,
    AffinisationSpec,
    ExtCartanVector,
    Weight,
    admissible_mode_step,
    affine_coroot,
    eval_root,
    lars_finite_parts,
)
from .rootdata import CartanVector, Functional, Root, coroot, inner, pairing, reflect_finite


@dataclass(frozen=True)
class FiniteWeylElement:
    """A signed permutation: E_j -> signs[j] * E_perm[j], 1-based."""

    perm: tuple  # perm[j-1] = image index of j
    signs: tuple  # signs[j-1] in {1, -1}

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(1, n + 1)) or len(self.signs) != n:
            raise ValueError("not a signed permutation")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1")

    @staticmethod
    def identity(rank: int) -> "FiniteWeylElement":
        return FiniteWeylElement(tuple(range(1, rank + 1)), (1,) * rank)

    @property
    def rank(self) -> int:
        return len(self.perm)

    def apply(self, h: CartanVector) -> CartanVector:
        return CartanVector(
            tuple((self.perm[j - 1], self.signs[j - 1] * c) for j, c in h.coords)
        )

    def __mul__(self, other: "FiniteWeylElement") -> "FiniteWeylElement":
        # composition: (self * other) acts as self after other
        perm = tuple(self.perm[other.perm[j] - 1] for j in range(self.rank))
        signs = tuple(other.signs[j] * self.signs[other.perm[j] - 1] for j in range(self.rank))
        return FiniteWeylElement(perm, signs)

    def inverse(self) -> "FiniteWeylElement":
        perm = [0] * self.rank
        signs = [1] * self.rank
        for j in range(self.rank):
            perm[self.perm[j] - 1] = j + 1
            signs[self.perm[j] - 1] = self.signs[j]
        return FiniteWeylElement(tuple(perm), tuple(signs))

    def num_sign_flips(self) -> int:
        return sum(1 for s in self.signs if s == -1)

    def allowed_in(self, kind: str) -> bool:
        if kind == "A1":
            return self.num_sign_flips() == 0
        if kind == "D1":
            return self.num_sign_flips() % 2 == 0
        return True


def reflection_element(a: Root, rank: int) -> FiniteWeylElement:
    """The finite reflection r_a as a signed permutation."""
    perm = list(range(1, rank + 1))
    signs = [1] * rank
    cs = a.coeffs
    if len(cs) == 1:
        j = cs[0][0]
        signs[j - 1] = -1
    else:
        (j, cj), (k, ck) = cs
        perm[j - 1], perm[k - 1] = k, j
        if cj * ck > 0:  # eps_j + eps_k type: swap with both signs flipped
            signs[j - 1] = signs[k - 1] = -1
    return FiniteWeylElement(tuple(perm), tuple(signs))


def finite_weyl_group(kind: str, rank: int):
    """All finite Weyl elements of the kind, deterministic order."""
    from itertools import permutations, product

    out = []
    for perm in permutations(range(1, rank + 1)):
        for signs in product((1, -1), repeat=rank):
            w = FiniteWeylElement(perm, signs)
            if w.allowed_in(kind):
                out.append(w)
    return out


@dataclass(frozen=True)
class Translation:
    """A Weyl translation, stored by its i-picture direction vector."""

    y: CartanVector

    def __add__(self, other: "Translation") -> "Translation":
        return Translation(self.y + other.y)


@dataclass(frozen=True)
class AffWeylElement:
    trans: Translation
    fin: FiniteWeylElement

    @staticmethod
    def identity(rank: int) -> "AffWeylElement":
        return AffWeylElement(Translation(CartanVector(())), FiniteWeylElement.identity(rank))

    def __mul__(self, other: "AffWeylElement") -> "AffWeylElement":
        # semidirect product: (y, w)(y', w') = (y + w.y', ww')
        return AffWeylElement(
            Translation(self.trans.y + self.fin.apply(other.trans.y)),
            self.fin * other.fin,
        )

    def inverse(self) -> "AffWeylElement":
        winv = self.fin.inverse()
        return AffWeylElement(Translation(winv.apply(-self.trans.y)), winv)

    def to_json(self):
        return {
            "translation": self.trans.y.to_json(),
            "perm": list(self.fin.perm),
            "signs": list(self.fin.signs),
        }

    @staticmethod
    def from_json(obj) -> "AffWeylElement":
        return AffWeylElement(
            Translation(CartanVector.from_json(obj["translation"])),
            FiniteWeylElement(tuple(obj["perm"]), tuple(obj["signs"])),
        )


# -- actions -------------------------------------------------------------


def translate(spec: AffinisationSpec, y, v: ExtCartanVector) -> ExtCartanVector:
    """i-picture transport of the Weyl translation along y (a vector or Translation)."""
    if isinstance(y, Translation):
        y = y.y
    return ExtCartanVector(
        v.z - pairing(v.h, y) + v.t * pairing(y, y) / 2,
        v.h - y.scale(v.t),
        v.t,
    )


def act(spec: AffinisationSpec, w: AffWeylElement, v: ExtCartanVector) -> ExtCartanVector:
    """Unslanted action: signed permutation on H, then the translation."""
    moved = ExtCartanVector(v.z, w.fin.apply(v.h), v.t)
    return translate(spec, w.trans.y, moved)


def act_slanted(spec: AffinisationSpec, nu: Functional, w: AffWeylElement, v: ExtCartanVector) -> ExtCartanVector:
    """nu-slanted action: the unslanted action conjugated by the shear along nu sharp."""
    ns = nu.sharp()
    shifted = translate(spec, -ns, v)
    moved = act(spec, w, shifted)
    return translate(spec, ns, moved)


def reflect_affine(spec: AffinisationSpec, r: AffineRoot, v: ExtCartanVector) -> ExtCartanVector:
    """Reflection in a compact affine root, with the spec's slant."""
    if not r.is_compact():
        raise ValueError("cannot reflect in a non-compact root")
    val = eval_root(spec, r, v)
    return v - affine_coroot(spec, r).scale(val)


def reflection_aff_element(spec: AffinisationSpec, r: AffineRoot) -> AffWeylElement:
    """Normal form of r_(a,n): translation by (n/N) a-check, then r_a."""
    if not r.is_compact():
        raise ValueError("cannot reflect in a non-compact root")
    y = coroot(r.root).scale(Fraction(r.mode, spec.twist_order))
    return AffWeylElement(Translation(y), reflection_element(r.root, spec.base.rank))


def word_reduce(spec: AffinisationSpec, word: list[AffineRoot]) -> AffWeylElement:
    """Normal form of a product of affine reflections, written left to right.

    The word multiplies like the written product: the last letter acts first.
    The result is verified against the step-by-step slanted reflections on a
    basis of the extended Cartan model.
    """
    out = AffWeylElement.identity(spec.base.rank)
    for letter in word:
        out = out * reflection_aff_element(spec, letter)

    basis = [ExtCartanVector(1, CartanVector(()), 0), ExtCartanVector(0, CartanVector(()), 1)]
    basis += [ExtCartanVector(0, CartanVector({j: 1}), 0) for j in range(1, spec.base.rank + 1)]
    for v in basis:
        direct = v
        for letter in reversed(word):
            direct = reflect_affine(spec, letter, direct)
        if act_slanted(spec, spec.slant, out, v) != direct:
            raise AssertionError("word reduction does not match the composed reflections")
    return out


def f_word(spec: AffinisationSpec, nu: Functional, letters: list[Root], v: ExtCartanVector) -> CartanVector:
    """Finite-part displacement of a word of mode-0 reflections applied first-to-last.

    Composing the slanted mode-0 reflections of the letters (first letter
    acting first) moves v by exactly (nu(f), -f, 0) for the returned f.
    """
    out = CartanVector(())
    nletters = len(letters)
    for s in range(nletters):
        a = letters[s]
        coeff = a.functional()(v.h) + v.t * inner(nu, a.functional())
        vec = coroot(a)
        for k in range(s + 1, nletters):
            vec = reflect_finite(letters[k], vec)
        out = out + vec.scale(coeff)
    return out


def translation_lattice(spec: AffinisationSpec) -> list[CartanVector]:
    """A Z-basis of the lattice of Weyl translation vectors for a standard spec."""
    if not spec.is_standard():
        raise ValueError("translation lattice is defined for standard specs")
    gens = []
    for a in lars_finite_parts(spec.lars, spec.base):
        res, step = admissible_mode_step(spec.lars, a)
        d = gcd(res, step)
        gens.append(coroot(a).scale(Fraction(d, spec.twist_order)))
    return _lattice_reduce(gens, spec.base.rank)


def _lattice_reduce(gens: list[CartanVector], rank: int) -> list[CartanVector]:
    """Hermite-style Z-basis of the group generated by the given vectors."""
    # scale to integers
    denom = 1
    for g in gens:
        for _, c in g.coords:
            denom = denom * c.denominator // gcd(denom, c.denominator)
    rows = []
    for g in gens:
        rows.append([int(Fraction(g[j]) * denom) for j in range(1, rank + 1)])
    # integer row reduction (Hermite normal form, no pivoting surprises needed)
    mat = [r for r in rows if any(r)]
    basis: list[list[int]] = []
    for col in range(rank):
        pool = [r for r in mat if r[col] != 0]
        rest = [r for r in mat if r[col] == 0]
        while len(pool) > 1:
            pool.sort(key=lambda r: abs(r[col]))
            small = pool[0]
            new_pool = [small]
            for r in pool[1:]:
                q = r[col] // small[col]
                reduced = [x - q * y for x, y in zip(r, small)]
                if reduced[col] != 0:
                    new_pool.append(reduced)
                elif any(reduced):
                    rest.append(reduced)
            if len(new_pool) == len(pool) and all(r[col] % new_pool[0][col] == 0 for r in pool[1:]):
                # fully reduced
                for r in pool[1:]:
                    q = r[col] // new_pool[0][col]
                    reduced = [x - q * y for x, y in zip(r, new_pool[0])]
                    if any(reduced):
                        rest.append(reduced)
                new_pool = [new_pool[0]]
            pool = new_pool
        if pool:
            piv = pool[0]
            if piv[col] < 0:
                piv = [-x for x in piv]
            basis.append(piv)
            mat = rest
        else:
            mat = rest
    return [
        CartanVector({j + 1: Fraction(row[j], denom) for j in range(rank)})
        for row in basis
    ]


def lattice_contains(basis: list[CartanVector], y: CartanVector, rank: int) -> bool:
    """Membership of y in the lattice spanned by an upper-triangular-style basis."""
    rem = y
    for b in basis:
        lead = next((j for j in range(1, rank + 1) if b[j]), None)
        if lead is None:
            continue
        c = rem[lead] / b[lead]
        if c.denominator != 1:
            return False
        rem = rem - b.scale(c)
    return rem.is_zero()


def unslanted_action_check(
    spec: AffinisationSpec,
    nu: Functional,
    w: AffWeylElement,
    lam: Weight,
    chi: ExtCartanVector,
) -> tuple[Fraction, Fraction]:
    """Both sides of the slanted/unslanted comparison; the contract is lhs == rhs.

    lhs evaluates lam on the nu-slanted orbit displacement of chi; rhs evaluates
    the nu-shifted weight on the unslanted displacement of the nu-shifted vector.
    """
    lhs = lam(act_slanted(spec, nu, w, chi) - chi)
    lam_nu = Weight(lam.lc, lam.l0 - nu.scale(lam.lc), lam.ld)
    chi_nu = ExtCartanVector(chi.z, chi.h + nu.sharp().scale(chi.t), chi.t)
    rhs = lam_nu(act(spec, w, chi_nu) - chi_nu)
    return lhs, rhs
