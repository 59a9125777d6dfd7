"""Integral weights and the positive-energy decision with exact minimal level.

The energy of a Weyl-orbit point is a quadratic polynomial in the translation
part, so the infimum over the orbit reduces, for each finite Weyl element, to
a closest-vector problem in the translation lattice.  All seven kinds have
classical lattices (integer, checkerboard, sum-zero, and half-scalings), so
the closed form is an exact per-family CVP; a brute-force orbit enumeration
over a bounded box provides an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .affine import (
    AffineRoot,
    AffinisationSpec,
    ExtCartanVector,
    Weight,
    admissible_mode_step,
    affine_coroot,
    lars_finite_parts,
    standard_spec,
)
from .rootdata import CartanVector, Functional, Root, coroot, inner, pairing
from .weyl import (
    AffWeylElement,
    FiniteWeylElement,
    Translation,
    act,
    finite_weyl_group,
    translation_lattice,
)


@dataclass(frozen=True)
class Character:
    """A linear functional on affine roots, stored as an extended Cartan vector.

    chi evaluates on (a, n) as p(a sharp, chi0_sharp + chi_d * slant sharp)
    + chi_d * n / N; for the characters of the energy condition chi_d = 1.
    """

    chi_c: Fraction
    chi0_sharp: CartanVector
    chi_d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "chi_c", Fraction(self.chi_c))
        object.__setattr__(self, "chi_d", Fraction(self.chi_d))

    def as_vector(self) -> ExtCartanVector:
        return ExtCartanVector(self.chi_c, self.chi0_sharp, self.chi_d)

    def value_on(self, spec: AffinisationSpec, r: AffineRoot) -> Fraction:
        f = r.root.functional() if r.root is not None else Functional(())
        out = pairing(f.sharp(), self.chi0_sharp + spec.slant.sharp().scale(self.chi_d))
        return out + self.chi_d * Fraction(r.mode, spec.twist_order)

    def to_json(self):
        return {
            "chi_c": str(self.chi_c),
            "chi0_sharp": self.chi0_sharp.to_json(),
            "chi_d": str(self.chi_d),
        }

    @staticmethod
    def from_json(obj) -> "Character":
        return Character(
            Fraction(obj["chi_c"]),
            CartanVector.from_json(obj["chi0_sharp"]),
            Fraction(obj["chi_d"]),
        )


def character_of(spec: AffinisationSpec, nu: Functional, nu_prime: Functional, chi_c=0) -> Character:
    """The character with value (nu')(a sharp) + n/N on the nu-slanted algebra."""
    return Character(Fraction(chi_c), (nu_prime - nu).sharp(), Fraction(1))


def slant_shift(lam: Weight, chi: Character, nu: Functional) -> tuple[Weight, Character]:
    """The unslanting substitution: shift the weight by nu, the character by nu sharp."""
    lam_nu = Weight(lam.lc, lam.l0 - nu.scale(lam.lc), lam.ld)
    chi_nu = Character(chi.chi_c, chi.chi0_sharp + nu.sharp().scale(chi.chi_d), chi.chi_d)
    return lam_nu, chi_nu


def is_integral(spec: AffinisationSpec, lam: Weight, residues=None) -> bool:
    """Whether the weight takes integer values on every compact affine coroot.

    Along each residue class of admissible modes the values form an arithmetic
    progression, so integrality holds iff the value at one representative is an
    integer and the step is an integer.  Pass `residues(root)` to override the
    admissible classes (pre-standardization twists).
    """
    for a in lars_finite_parts(spec.lars, spec.base):
        norm = inner(a, a)
        step = 2 * lam.lc / (norm * spec.twist_order)
        if residues is None:
            res, mstep = admissible_mode_step(spec.lars, a)
            classes = [res]
            class_step = mstep
        else:
            classes = list(residues(a))
            class_step = spec.twist_order
        if (step * class_step).denominator != 1:
            return False
        for r in classes:
            if lam(affine_coroot(spec, AffineRoot(a, r))).denominator != 1:
                return False
    return True


@dataclass(frozen=True)
class EnergyReport:
    positive_energy: bool
    minimum: Fraction | None  # None encodes minus infinity
    witness: AffWeylElement | None
    method_agreement: bool | None
    bounds: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "schema": "v1",
            "positive_energy": self.positive_energy,
            "minimum": str(self.minimum) if self.minimum is not None else "-inf",
            "witness": self.witness.to_json() if self.witness is not None else None,
            "method_agreement": self.method_agreement,
            "bounds": dict(self.bounds),
        }


# -- closest vector problems for the seven translation lattices -----------------


def lattice_family(kind: str) -> tuple[str, Fraction]:
    """Shape and scale of the translation lattice: s * (Z^n | D_n | A_(n-1))."""
    if kind == "A1":
        return "A", Fraction(1)
    if kind in ("C1", "B2"):
        return "Z", Fraction(1)
    if kind in ("B1", "D1"):
        return "D", Fraction(1)
    if kind == "C2":
        return "D", Fraction(1, 2)
    return "Z", Fraction(1, 2)  # BC2


def _round_nearest(x: Fraction) -> int:
    # nearest integer, ties toward minus infinity for determinism
    floor = x.numerator // x.denominator
    frac = x - floor
    return floor + (1 if frac > Fraction(1, 2) else 0)


def _cvp_integer(target: list[Fraction]) -> list[int]:
    return [_round_nearest(t) for t in target]


def _cvp_checkerboard(target: list[Fraction]) -> list[int]:
    r = _cvp_integer(target)
    if sum(r) % 2 == 0:
        return r
    best_i, best_cost = None, None
    for i, (t, ri) in enumerate(zip(target, r)):
        delta = ri - t
        up = 1 + 2 * delta  # cost of r_i + 1
        down = 1 - 2 * delta  # cost of r_i - 1
        move = 1 if up <= down else -1
        cost = min(up, down)
        if best_cost is None or cost < best_cost:
            best_i, best_cost, best_move = i, cost, move
    r[best_i] += best_move
    return r


def _cvp_sum_zero(target: list[Fraction]) -> list[int]:
    n = len(target)
    mean = sum(target, Fraction(0)) / n
    t = [x - mean for x in target]
    r = [_round_nearest(x) for x in t]
    delta = sum(r)
    if delta:
        residuals = sorted(range(n), key=lambda i: (r[i] - t[i], i))
        if delta > 0:
            # decrement where the rounding went up the most
            for i in reversed(residuals[-delta:]):
                r[i] -= 1
        else:
            for i in residuals[: -delta]:
                r[i] += 1
    return r


def lattice_cvp(kind: str, rank: int, target: CartanVector) -> CartanVector:
    """An exact nearest lattice vector to the target, deterministic under ties."""
    shape, scale = lattice_family(kind)
    t = [target[j] / scale for j in range(1, rank + 1)]
    if shape == "Z":
        r = _cvp_integer(t)
    elif shape == "D":
        r = _cvp_checkerboard(t)
    else:
        r = _cvp_sum_zero(t)
    return CartanVector({j + 1: scale * r[j] for j in range(rank)})


def _orbit_value(lam: Weight, chi: Character, w: FiniteWeylElement, y: CartanVector) -> Fraction:
    """lam((y, w).chi - chi) in closed form."""
    u = w.apply(chi.chi0_sharp)
    l0s = lam.l0.sharp()
    return (
        lam.lc * chi.chi_d * pairing(y, y) / 2
        - lam.lc * pairing(u, y)
        + pairing(l0s, u - chi.chi0_sharp)
        - chi.chi_d * pairing(l0s, y)
    )


#: above this rank the finite Weyl search switches to the rearrangement heuristic
EXHAUSTIVE_RANK = 5


def min_energy(
    spec: AffinisationSpec,
    lam: Weight,
    chi: Character,
    oracle_bound: int = 10,
    with_oracle: bool = True,
    jobs: int = 1,
    exhaustive_rank: int = EXHAUSTIVE_RANK,
) -> EnergyReport:
    """Infimum of lam over the unslanted Weyl orbit displacement of the character.

    Closed form: per finite Weyl element the translation part is a positive
    definite quadratic, minimized exactly by a lattice CVP; the oracle
    enumerates the orbit over a coefficient box and must agree.  Beyond
    exhaustive_rank the signed permutations are searched by the rearrangement
    reduction (sign-aligned sorting plus local moves) instead of full
    enumeration; the report's bounds record which search ran.
    """
    if lam.lc == 0:
        raise ValueError("the central value of the weight must be nonzero")
    if not spec.is_standard():
        raise ValueError("energy minimization runs on the standard (untwisted) side")
    rank = spec.base.rank
    kind = spec.lars
    exhaustive = rank <= exhaustive_rank
    bounds = {"lattice": oracle_bound, "finite_search": "exhaustive" if exhaustive else "rearrangement"}
    group = finite_weyl_group(kind, rank) if exhaustive else _rearrangement_candidates(
        kind, rank, lam, chi
    )

    coeff = lam.lc * chi.chi_d / 2
    if coeff < 0:
        agree = _oracle_detects_divergence(spec, lam, chi, oracle_bound) if with_oracle else None
        return EnergyReport(False, None, None, agree, bounds)
    if coeff == 0:
        return _linear_case(spec, lam, chi, group, bounds, with_oracle, oracle_bound)

    l0s = lam.l0.sharp()
    best = None
    for w in group:
        u = w.apply(chi.chi0_sharp)
        grad = u.scale(lam.lc) + l0s.scale(chi.chi_d)
        target = grad.scale(Fraction(1, 2) / coeff)
        y = lattice_cvp(kind, rank, target)
        val = _orbit_value(lam, chi, w, y)
        if best is None or val < best[0]:
            best = (val, AffWeylElement(Translation(y), w))
    minimum, witness = best

    # the witness reproduces the minimum through the actual action
    chi_vec = chi.as_vector()
    if lam(act(spec, witness, chi_vec) - chi_vec) != minimum:
        raise AssertionError("witness does not reproduce the reported minimum")

    agreement = None
    if with_oracle:
        oracle_min = _oracle_minimum(spec, lam, chi, oracle_bound, jobs)
        agreement = oracle_min == minimum
    return EnergyReport(True, minimum, witness, agreement, bounds)


def _linear_case(spec, lam, chi, group, bounds, with_oracle, oracle_bound):
    # chi_d = 0: the orbit value is affine in the translation part
    basis = translation_lattice(spec)
    l0s = lam.l0.sharp()
    best = None
    for w in group:
        u = w.apply(chi.chi0_sharp)
        grad = u.scale(lam.lc) + l0s.scale(chi.chi_d)
        if any(pairing(grad, b) for b in basis):
            agree = _oracle_detects_divergence(spec, lam, chi, oracle_bound) if with_oracle else None
            return EnergyReport(False, None, None, agree, bounds)
        val = _orbit_value(lam, chi, w, CartanVector(()))
        if best is None or val < best[0]:
            best = (val, AffWeylElement(Translation(CartanVector(())), w))
    minimum, witness = best
    agreement = None
    if with_oracle:
        agreement = _oracle_minimum(spec, lam, chi, oracle_bound, 1) == minimum
    return EnergyReport(True, minimum, witness, agreement, bounds)


def _lattice_points(spec: AffinisationSpec, bound: int):
    """All lattice vectors with basis coefficients in [-bound, bound]."""
    basis = translation_lattice(spec)
    rank = spec.base.rank
    coords = [[Fraction(b[j]) for j in range(1, rank + 1)] for b in basis]
    points = []

    def rec(i, acc):
        if i == len(basis):
            points.append(tuple(acc))
            return
        for m in range(-bound, bound + 1):
            rec(i + 1, [a + m * c for a, c in zip(acc, coords[i])])

    rec(0, [Fraction(0)] * rank)
    return points


def _oracle_minimum(spec, lam, chi, bound, jobs=1) -> Fraction:
    """Brute-force orbit enumeration over a coefficient box, exact via integers."""
    rank = spec.base.rank
    group = finite_weyl_group(spec.lars, rank)
    points = _lattice_points(spec, bound)
    den = 1
    for b in translation_lattice(spec):
        for _, x in b.coords:
            den = den * x.denominator // gcd(den, x.denominator)
    ipoints = [tuple(int(x * den) for x in p) for p in points]
    l0s = lam.l0.sharp()
    c2 = lam.lc * chi.chi_d  # twice the quadratic coefficient
    best = None  # integer value of 2 * D * orbit_value
    tasks = []
    for w in group:
        u = w.apply(chi.chi0_sharp)
        gvec = [lam.lc * u[j] + chi.chi_d * l0s[j] for j in range(1, rank + 1)]
        const2 = 2 * pairing(l0s, u - chi.chi0_sharp)
        tasks.append((gvec, const2))
    scale = 1  # common integerizing multiplier D
    for gvec, const2 in tasks:
        for q in (c2 * Fraction(1, den * den), const2, *[g * Fraction(2, den) for g in gvec]):
            scale = scale * q.denominator // gcd(scale, q.denominator)

    int_tasks = []
    for gvec, const2 in tasks:
        a = int(c2 * Fraction(scale, den * den))
        bs = tuple(int(g * Fraction(2 * scale, den)) for g in gvec)
        cc = int(const2 * scale)
        int_tasks.append((a, bs, cc))

    if jobs > 1 and len(int_tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        step = (len(int_tasks) + jobs - 1) // jobs
        chunks = [int_tasks[i : i + step] for i in range(0, len(int_tasks), step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_oracle_chunk, chunks, [ipoints] * len(chunks)))
        best = min(r for r in results if r is not None)
    else:
        best = _oracle_chunk(int_tasks, ipoints)
    return Fraction(best, 2 * scale)


def _oracle_chunk(int_tasks, ipoints):
    local = None
    for a, bs, cc in int_tasks:
        for iy in ipoints:
            s_yy = sum(v * v for v in iy)
            s_gy = sum(g * v for g, v in zip(bs, iy))
            val = a * s_yy - s_gy + cc
            if local is None or val < local:
                local = val
    return local


def _oracle_detects_divergence(spec, lam, chi, bound) -> bool:
    """For minus-infinity reports: the box minimum strictly decreases with the box."""
    small = _oracle_minimum(spec, lam, chi, max(1, bound // 2))
    large = _oracle_minimum(spec, lam, chi, bound)
    return large < small


def theorem_b_pipeline(
    operator_spec,
    lam: Weight,
    nu: Functional,
    nu_prime: Functional,
    oracle_bound: int = 10,
    with_oracle: bool = True,
    require_integral: bool = True,
) -> tuple[EnergyReport, "StandardizationCertificate"]:
    """Standardize the twist, shift the weight by the computed slant, and minimize.

    The operator's conjugation automorphism is normalized to a standard twist
    with slant mu; the minimal energy of the (nu, nu')-pair on the twisted
    side equals the orbit infimum of the weight shifted by mu + nu against the
    character built from mu + nu', over the unslanted standard Weyl group.
    """
    from .autnorm import mode_class, standardize

    cert = standardize(operator_spec)
    src = cert.source_spec(nu)
    if lam.lc == 0:
        raise ValueError("the central value of the weight must be nonzero")
    if require_integral and not is_integral(src, lam, residues=lambda a: mode_class(cert, a)):
        raise ValueError("the weight is not integral on the twisted side")
    total = cert.mu + nu
    lam_shifted = Weight(lam.lc, lam.l0 - total.scale(lam.lc), lam.ld)
    chi = Character(Fraction(0), (nu_prime + cert.mu).sharp(), Fraction(1))
    dst = standard_spec(cert.lars, cert.rank)
    report = min_energy(dst, lam_shifted, chi, oracle_bound=oracle_bound, with_oracle=with_oracle)
    return report, cert
