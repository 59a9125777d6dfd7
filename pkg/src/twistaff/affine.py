"""Affine roots over the seven locally affine root system kinds.

An affinisation context couples a finite base system with a twist order and
two slant functionals.  Cartan-side data is stored in the i-picture: a triple
(Z, H, T) of exact rationals/vectors standing for the complex triple
(iZ, H, -iT), under which root evaluation, coroots, translations and the
Weyl action all become real rational formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rootdata import CartanVector, Functional, Root, RootSystem, coroot, enumerate_roots, inner

LARS_KINDS = ("A1", "B1", "C1", "D1", "B2", "C2", "BC2")

#: finite base kind compatible with each affine kind
BASE_OF = {
    "A1": "A",
    "B1": "B",
    "C1": "C",
    "D1": "D",
    "B2": "B",
    "C2": "C",
    "BC2": "B",
}


def twist_order_of(kind: str) -> int:
    return 1 if kind.endswith("1") else 2


@dataclass(frozen=True)
class AffinisationSpec:
    """Base system + affine kind + twist order + the two slant functionals."""

    base: RootSystem
    lars: str
    twist_order: int = 0  # 0 means: the standard order of the kind
    slant_mu: Functional = field(default_factory=lambda: Functional(()))
    slant_nu: Functional = field(default_factory=lambda: Functional(()))

    def __post_init__(self):
        if self.lars not in LARS_KINDS:
            raise ValueError(f"unknown affine kind {self.lars!r}")
        if BASE_OF[self.lars] != self.base.kind:
            raise ValueError(f"kind {self.lars} needs a base of type {BASE_OF[self.lars]}")
        if self.twist_order == 0:
            object.__setattr__(self, "twist_order", twist_order_of(self.lars))
        if self.twist_order < 1:
            raise ValueError("twist order must be positive")

    @property
    def slant(self) -> Functional:
        """Total slant entering root evaluation."""
        return self.slant_mu + self.slant_nu

    def is_standard(self) -> bool:
        return self.twist_order == twist_order_of(self.lars)

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "lars": self.lars,
            "twist_order": self.twist_order,
            "slant_mu": self.slant_mu.to_json(),
            "slant_nu": self.slant_nu.to_json(),
        }

    @staticmethod
    def from_json(obj) -> "AffinisationSpec":
        return AffinisationSpec(
            base=RootSystem.from_json(obj["base"]),
            lars=str(obj["lars"]),
            twist_order=int(obj.get("twist_order", 0)),
            slant_mu=Functional.from_json(obj.get("slant_mu", {"coords": {}})),
            slant_nu=Functional.from_json(obj.get("slant_nu", {"coords": {}})),
        )


def standard_spec(kind: str, rank: int, mu=None, nu=None) -> AffinisationSpec:
    return AffinisationSpec(
        base=RootSystem(BASE_OF[kind], rank),
        lars=kind,
        slant_mu=mu if mu is not None else Functional(()),
        slant_nu=nu if nu is not None else Functional(()),
    )


@dataclass(frozen=True)
class AffineRoot:
    """A pair (finite part, mode); a zero finite part encodes the non-compact roots."""

    root: Root | None
    mode: int

    def __post_init__(self):
        if self.root is None and self.mode == 0:
            raise ValueError("(0, 0) is not a root")

    def is_compact(self) -> bool:
        return self.root is not None

    def __neg__(self) -> "AffineRoot":
        return AffineRoot(None if self.root is None else -self.root, -self.mode)

    def to_json(self):
        return {"root": None if self.root is None else self.root.to_json(), "mode": self.mode}

    @staticmethod
    def from_json(obj) -> "AffineRoot":
        r = obj["root"]
        return AffineRoot(None if r is None else Root.from_json(r), int(obj["mode"]))


@dataclass(frozen=True)
class ExtCartanVector:
    """i-picture triple (Z, H, T) in the extended Cartan model."""

    z: Fraction
    h: CartanVector
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "z", Fraction(self.z))
        object.__setattr__(self, "t", Fraction(self.t))

    def __add__(self, other: "ExtCartanVector") -> "ExtCartanVector":
        return ExtCartanVector(self.z + other.z, self.h + other.h, self.t + other.t)

    def __sub__(self, other: "ExtCartanVector") -> "ExtCartanVector":
        return ExtCartanVector(self.z - other.z, self.h - other.h, self.t - other.t)

    def __neg__(self) -> "ExtCartanVector":
        return ExtCartanVector(-self.z, -self.h, -self.t)

    def scale(self, c) -> "ExtCartanVector":
        c = Fraction(c)
        return ExtCartanVector(c * self.z, self.h.scale(c), c * self.t)

    def to_json(self):
        return {"z": str(self.z), "h": self.h.to_json(), "t": str(self.t)}

    @staticmethod
    def from_json(obj) -> "ExtCartanVector":
        return ExtCartanVector(Fraction(obj["z"]), CartanVector.from_json(obj["h"]), Fraction(obj["t"]))


CENTRAL = ExtCartanVector(1, CartanVector(()), 0)  # image of the central generator bc
SCALING = ExtCartanVector(0, CartanVector(()), 1)  # image of the scaling generator bd


@dataclass(frozen=True)
class Weight:
    """A weight of the extended algebra, split as (central value, finite part, scaling value)."""

    lc: Fraction
    l0: Functional
    ld: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lc", Fraction(self.lc))
        object.__setattr__(self, "ld", Fraction(self.ld))

    def __call__(self, v: ExtCartanVector) -> Fraction:
        return self.lc * v.z + self.l0(v.h) + self.ld * v.t

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.lc - other.lc, self.l0 - other.l0, self.ld - other.ld)

    def to_json(self):
        return {"lc": str(self.lc), "l0": self.l0.to_json(), "ld": str(self.ld)}

    @staticmethod
    def from_json(obj) -> "Weight":
        return Weight(Fraction(obj["lc"]), Functional.from_json(obj["l0"]), Fraction(obj["ld"]))


# -- membership in the seven realizations ------------------------------------


def lars_finite_parts(kind: str, base: RootSystem) -> list[Root]:
    """All finite parts occurring in the realization (the non-reduced union for BC2)."""
    roots = enumerate_roots(base)
    if kind == "BC2":
        roots = roots + [Root(((j, s),)) for j in range(1, base.rank + 1) for s in (2, -2)]
    return sorted(roots, key=lambda r: r.coeffs)


def _pattern(a: Root) -> str:
    pat = tuple(abs(c) for _, c in a.coeffs)
    if pat == (1,):
        return "short"
    if pat == (2,):
        return "long"
    if pat == (1, 1):
        return "pair"
    raise ValueError(f"unexpected root pattern {a.coeffs}")


def admissible_mode_step(kind: str, a: Root) -> tuple[int, int]:
    """The modes admissible for a finite part, as a residue class (r, s): n = r mod s."""
    pat = _pattern(a)
    if kind in ("A1", "B1", "C1", "D1"):
        ok = {"A1": ("pair",), "B1": ("short", "pair"), "C1": ("long", "pair"), "D1": ("pair",)}
        if pat not in ok[kind]:
            raise ValueError(f"{a} is not a root of the {kind} base system")
        return (0, 1)
    if kind == "B2":
        if pat == "short":
            return (0, 1)
        if pat == "pair":
            return (0, 2)
    if kind == "C2":
        if pat == "long":
            return (0, 2)
        if pat == "pair":
            return (0, 1)
    if kind == "BC2":
        if pat == "short":
            return (0, 1)
        if pat == "pair":
            return (0, 1)
        if pat == "long":
            return (1, 2)
    raise ValueError(f"{a} has no admissible modes in kind {kind}")


def lars_contains(kind: str, r: AffineRoot, base: RootSystem) -> bool:
    """Membership of (finite part, mode) in the realization of the given kind."""
    if r.root is None:
        return r.mode != 0
    if not any(r.root.coeffs == b.coeffs for b in lars_finite_parts(kind, base)):
        return False
    res, step = admissible_mode_step(kind, r.root)
    return r.mode % step == res % step


def enumerate_affine_roots(kind: str, base: RootSystem, window: int) -> list[AffineRoot]:
    """Compact affine roots with |mode| <= window, deterministic order."""
    out = []
    for a in lars_finite_parts(kind, base):
        res, step = admissible_mode_step(kind, a)
        for n in range(-window, window + 1):
            if n % step == res % step:
                out.append(AffineRoot(a, n))
    return out


# -- evaluation, coroots, reparametrization -----------------------------------


def eval_root(spec: AffinisationSpec, r: AffineRoot, v: ExtCartanVector) -> Fraction:
    """alpha(H) + T*(n/N + slant(alpha sharp)), exactly."""
    if any(j > spec.base.rank for j in v.h.support()):
        raise ValueError("vector support exceeds the base rank")
    shift = Fraction(r.mode, spec.twist_order)
    if r.root is None:
        return v.t * shift
    f = r.root.functional()
    return f(v.h) + v.t * (shift + inner(spec.slant, f))


def affine_coroot(spec: AffinisationSpec, r: AffineRoot) -> ExtCartanVector:
    """The coroot of a compact affine root, in the i-picture."""
    if not r.is_compact():
        raise ValueError("non-compact affine roots have no coroot")
    f = r.root.functional()
    norm = inner(f, f)
    zc = -2 * (Fraction(r.mode, spec.twist_order) + inner(spec.slant, f)) / norm
    return ExtCartanVector(zc, coroot(r.root), 0)


def reparam_weight(w: Weight, n: int) -> Weight:
    """Weight after switching from the long-period to the 1/N-period convention."""
    if n < 1:
        raise ValueError("period divisor must be positive")
    return Weight(w.lc / n, w.l0, w.ld * n)


def reparam_vector(v: ExtCartanVector, n: int) -> ExtCartanVector:
    """Cartan vector under the same convention switch; pairing with weights is preserved."""
    if n < 1:
        raise ValueError("period divisor must be positive")
    return ExtCartanVector(v.z * n, v.h, v.t / n)
