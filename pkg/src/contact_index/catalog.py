"""Fixed-point data models of concrete contact circle actions.

A model is a finite table of exact numbers per fixed component: dimension,
tangential and normal Chern roots (with torsion eigenvalues), the constant
moment pairing, and the top pairing values of the contact volume monomials.
Presets cover the free circle, the round odd spheres, weighted three-spheres
and the prequantum circle bundle over complex projective space; arbitrary
component tables load from a JSON document with exact rationals as strings.

All preset pairing values are derived from the `oracle.ball_integral`
Stokes computation (magnitude (2 pi)^{k+1}, orientation applied uniformly)
or from orbit lengths (2 pi divided by the speed of the circle action on
the fixed circle).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .scalars import ExactScalar
from .forms import ChernRoot


class ModelError(ValueError):
    """Raised when a model document violates the component invariants."""


IDENTITY = Fraction(0, 1)


@dataclass
class FixedComponentData:
    """One connected component of a fixed-point set, as exact numbers."""

    dim_odd: int
    generators: tuple
    tangential: list
    normal: list
    mu: Fraction
    reeb_weight: tuple
    pairing: dict  # generator exponent tuple -> ExactScalar

    @property
    def k(self):
        return (self.dim_odd - 1) // 2

    def validate(self, rank, ambient_n, at, path="component"):
        if self.dim_odd < 1 or self.dim_odd % 2 == 0:
            raise ModelError(f"{path}.dim: component dimension must be odd and positive")
        if self.mu <= 0:
            raise ModelError(f"{path}.moment.mu: ellipticity violated, moment must be "
                             f"positive (got {self.mu})")
        if len(self.reeb_weight) != rank:
            raise ModelError(f"{path}.moment.reeb_weight: expected {rank} entries")
        if self.k + len(self.normal) != ambient_n:
            raise ModelError(
                f"{path}: dimension bookkeeping failed: k={self.k} plus "
                f"{len(self.normal)} normal roots must equal ambient rank {ambient_n}")
        for i, root in enumerate(self.tangential):
            if len(root.weight) != rank:
                raise ModelError(f"{path}.tangential_roots[{i}].weight: expected {rank} entries")
            if Fraction(root.eigenvalue_exponent) % 1 != 0:
                raise ModelError(f"{path}.tangential_roots[{i}].eig: tangential roots "
                                 f"must have eigenvalue 1")
            if len(root.curvature) != len(self.generators):
                raise ModelError(f"{path}.tangential_roots[{i}].curv: expected "
                                 f"{len(self.generators)} coefficients")
        for i, root in enumerate(self.normal):
            if len(root.weight) != rank:
                raise ModelError(f"{path}.normal_roots[{i}].weight: expected {rank} entries")
            if at is not None and Fraction(root.eigenvalue_exponent) % 1 == 0:
                raise ModelError(
                    f"{path}.normal_roots[{i}].eig: normal eigenvalue 1 at a fixed "
                    f"component means the direction is tangential (fixed-set mismatch)")
        for mono in self.pairing:
            if len(mono) != len(self.generators):
                raise ModelError(f"{path}.pairing: monomial {mono} does not match the "
                                 f"generator count")
        for mono, value in self.pairing.items():
            if sum(mono) == self.k and value.is_zero():
                raise ModelError(f"{path}.pairing: top pairing value for {mono} is zero")
        if not any(sum(mono) == self.k for mono in self.pairing):
            raise ModelError(f"{path}.pairing: no entry of top degree {self.k}")


@dataclass
class FiberFamily:
    """A circle-fiber component that exists over every torsion point.

    The fiber over a base fixed point appears at the pair (g0, g0^sigma);
    its normal roots carry covector weights on the two torus factors and the
    eigenvalue at a concrete pair follows from those weights.
    """

    sigma: int
    component: FixedComponentData


@dataclass
class ContactModel:
    """Everything the engine needs about one elliptic contact circle action."""

    rank: int
    ambient_n: int
    model_id: str
    components: dict = field(default_factory=dict)  # torsion point -> [components]
    fiber_families: list = field(default_factory=list)  # rank-2 only
    identity_model: "ContactModel | None" = None  # rank-2: principal-only reduction

    @property
    def torsion_support(self):
        return sorted(self.components, key=lambda t: (t.denominator, t.numerator))

    def validate(self):
        if self.rank not in (1, 2):
            raise ModelError("rank: only torus ranks 1 and 2 are supported")
        if self.rank == 1:
            if IDENTITY not in self.components:
                raise ModelError("components: the identity must always carry components")
            for at, comps in self.components.items():
                if not comps:
                    raise ModelError(f"components[{at}]: empty component list; drop the point")
                for idx, comp in enumerate(comps):
                    comp.validate(self.rank, self.ambient_n,
                                  at if at != IDENTITY else None,
                                  path=f"components[{at}][{idx}]")
        else:
            if self.identity_model is None:
                raise ModelError("identity_model: rank-2 models need the principal reduction")
            self.identity_model.validate()
            for idx, fam in enumerate(self.fiber_families):
                fam.component.validate(self.rank, self.ambient_n, None,
                                       path=f"fiber_families[{idx}]")
        return self


def fixed_submodel(model, at):
    """The model seen by the fixed set of a single torsion point.

    Components of the given point become identity components; a point
    outside the torsion support yields the empty model (zero germ).  The
    operation is idempotent and the moments stay positive, so ellipticity
    is inherited.
    """
    if model.rank != 1:
        raise ModelError("fixed submodels are defined for rank-1 models")
    at = Fraction(at) % 1
    comps = model.components.get(at, [])
    return ContactModel(rank=1, ambient_n=model.ambient_n,
                        model_id=f"{model.model_id}@{at}",
                        components={IDENTITY: comps} if comps else {})


# ----------------------------------------------------------------------
# presets
# ----------------------------------------------------------------------

def _top_pairing(k, orientation):
    """o * (2 pi)^{k+1}: Stokes magnitude with the calibrated orientation."""
    return ExactScalar.pi_power(k + 1, Fraction(orientation * 2 ** (k + 1)))


def preset_circle(orientation=1):
    """The free circle acting on itself: one 1-dimensional identity component."""
    comp = FixedComponentData(
        dim_odd=1, generators=(), tangential=[], normal=[],
        mu=Fraction(1), reeb_weight=(1,),
        pairing={(): ExactScalar.pi_power(1, 2 * orientation)},  # orbit length 2 pi
    )
    return ContactModel(rank=1, ambient_n=0, model_id="circle",
                        components={IDENTITY: [comp]}).validate()


def preset_hopf_sphere(n, orientation=1):
    """The round sphere S^{2n+1} with its free diagonal circle action.

    The tangential data is the pullback of the base tangent bundle written
    as n+1 line factors of equal curvature i * dA (the base Euler-sequence
    splitting), weight 0 because the quotient action is trivial.  The top
    pairing is the Stokes value of alpha (dA)^n.
    """
    if n < 1:
        raise ModelError("hopf sphere needs n >= 1")
    i = ExactScalar.i()
    comp = FixedComponentData(
        dim_odd=2 * n + 1, generators=("dA",),
        tangential=[ChernRoot(curvature=(i,), weight=(0,)) for _ in range(n + 1)],
        normal=[],
        mu=Fraction(1), reeb_weight=(1,),
        pairing={(n,): _top_pairing(n, orientation)},
    )
    return ContactModel(rank=1, ambient_n=n, model_id=f"hopf-{n}",
                        components={IDENTITY: [comp]}).validate()


def preset_weighted_s3(a, b, orientation=1):
    """S^3 with the circle acting with coprime speeds (a, b) on the two axes.

    The identity component carries the two quotient line classes with
    curvatures i*a*dA and i*b*dA and the weighted volume (2 pi)^2/(a b).
    Each nontrivial root of unity of order dividing a fixes the first axis
    circle, whose single normal direction carries weight -b and eigenvalue
    the (-b)-th power of the torsion point; symmetrically for b.  Orbit
    lengths on the fixed circles are 2 pi over the rotation speed.
    """
    a, b = int(a), int(b)
    if a < 1 or b < 1:
        raise ModelError("weights must be positive")
    if math.gcd(a, b) != 1:
        raise ModelError(f"weights ({a}, {b}) are not coprime: orbifold strata "
                         f"beyond the supported scope")
    i = ExactScalar.i()
    identity = FixedComponentData(
        dim_odd=3, generators=("dA",),
        tangential=[ChernRoot(curvature=(i * a,), weight=(0,)),
                    ChernRoot(curvature=(i * b,), weight=(0,))],
        normal=[],
        mu=Fraction(1), reeb_weight=(1,),
        pairing={(1,): ExactScalar.pi_power(2, Fraction(4 * orientation, a * b))},
    )
    components = {IDENTITY: [identity]}

    def circle_component(speed, normal_weight, at):
        return FixedComponentData(
            dim_odd=1, generators=(),
            tangential=[],
            normal=[ChernRoot(curvature=(), weight=(normal_weight,),
                              eigenvalue_exponent=(normal_weight * at) % 1)],
            mu=Fraction(1), reeb_weight=(1,),
            pairing={(): ExactScalar.pi_power(1, Fraction(2 * orientation, speed))},
        )

    for p in range(1, a):
        at = Fraction(p, a)
        components.setdefault(at, []).append(circle_component(a, -b, at))
    for p in range(1, b):
        at = Fraction(p, b)
        components.setdefault(at, []).append(circle_component(b, -a, at))
    return ContactModel(rank=1, ambient_n=1, model_id=f"weighted-s3-{a}-{b}",
                        components=components).validate()


def preset_prequantum_cpn(n, orientation=1):
    """The unit circle bundle over CP^n with the extra base rotation.

    Rank-2 torus: the base rotation (variable X) times the principal circle
    (variable phi).  The principal reduction is the round sphere model; the
    base rotation has n+1 isolated fixed points with lift weights 0..n, and
    the fiber over the j-th one appears at pairs (g0, g0^j).  Its n normal
    directions carry covector weights (l, -1) for l != j, and the moment
    covector is (j, -1).
    """
    if n < 1:
        raise ModelError("prequantum model needs n >= 1")
    families = []
    for j in range(n + 1):
        comp = FixedComponentData(
            dim_odd=1, generators=(),
            tangential=[],
            normal=[ChernRoot(curvature=(), weight=(l, -1)) for l in range(n + 1) if l != j],
            mu=Fraction(1), reeb_weight=(j, -1),
            pairing={(): ExactScalar.pi_power(1, 2 * orientation)},
        )
        families.append(FiberFamily(sigma=j, component=comp))
    return ContactModel(rank=2, ambient_n=n, model_id=f"prequantum-cp{n}",
                        fiber_families=families,
                        identity_model=preset_hopf_sphere(n, orientation)).validate()


def scaled_model(model, lam):
    """Rescale the contact form by a positive rational factor.

    The moment constants multiply by lam, the d-alpha generator absorbs a
    factor lam (so stored curvature coefficients divide by it), and a top
    pairing of degree |J| picks up lam^{|J|+1}.  Germs are invariant under
    this transformation; the engine test suite asserts it bit for bit.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ModelError("scaling factor must be positive")
    inv = ExactScalar.from_rational(1 / lam)

    def scale_root(root):
        return replace(root, curvature=tuple(c * inv for c in root.curvature))

    def scale_component(comp):
        return FixedComponentData(
            dim_odd=comp.dim_odd, generators=comp.generators,
            tangential=[scale_root(r) for r in comp.tangential],
            normal=[scale_root(r) for r in comp.normal],
            mu=comp.mu * lam, reeb_weight=comp.reeb_weight,
            pairing={mono: value * ExactScalar.from_rational(lam ** (sum(mono) + 1))
                     for mono, value in comp.pairing.items()},
        )

    return ContactModel(
        rank=model.rank, ambient_n=model.ambient_n, model_id=model.model_id,
        components={at: [scale_component(c) for c in comps]
                    for at, comps in model.components.items()},
        fiber_families=[FiberFamily(f.sigma, scale_component(f.component))
                        for f in model.fiber_families],
        identity_model=scaled_model(model.identity_model, lam)
        if model.identity_model else None,
    )


# ----------------------------------------------------------------------
# document IO (exact rationals as strings; floats are rejected)
# ----------------------------------------------------------------------

def _parse_fraction(text, path):
    if isinstance(text, float):
        raise ModelError(f"{path}: floats are not accepted; use exact 'p/q' strings")
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"{path}: malformed rational {text!r} ({exc})") from None


def _parse_scalar(text, path):
    try:
        return ExactScalar.from_text(text)
    except Exception as exc:
        raise ModelError(f"{path}: malformed scalar {text!r} ({exc})") from None


def _root_from_doc(doc, path):
    curv = tuple(_parse_scalar(c, f"{path}.curv[{i}]") for i, c in enumerate(doc.get("curv", [])))
    weight = doc.get("weight", 0)
    if isinstance(weight, int):
        weight = (weight,)
    else:
        weight = tuple(int(w) for w in weight)
    eig = _parse_fraction(doc.get("eig", "0/1"), f"{path}.eig") % 1
    return ChernRoot(curvature=curv, weight=weight, eigenvalue_exponent=eig)


def _root_to_doc(root):
    return {
        "curv": [c.to_text() for c in root.curvature],
        "weight": list(root.weight) if len(root.weight) > 1 else root.weight[0],
        "eig": str(Fraction(root.eigenvalue_exponent) % 1),
    }


def _component_from_doc(doc, rank, path):
    dim = int(doc["dim"])
    k = (dim - 1) // 2
    gen_count = None
    for key in ("tangential_roots", "normal_roots"):
        for r in doc.get(key, []):
            c = len(r.get("curv", []))
            gen_count = c if gen_count is None else gen_count
            if c != gen_count:
                raise ModelError(f"{path}.{key}: inconsistent curvature vector lengths")
    for p in doc.get("pairing", []):
        c = len(p["mono"])
        gen_count = c if gen_count is None else gen_count
        if c != gen_count:
            raise ModelError(f"{path}.pairing: inconsistent monomial lengths")
    gen_count = gen_count or 0
    generators = tuple(["dA"] + [f"e{i}" for i in range(1, gen_count)])[:gen_count]
    moment = doc.get("moment", {})
    reeb = moment.get("reeb_weight", [1] * rank)
    if isinstance(reeb, int):
        reeb = (reeb,)
    pairing = {}
    for i, p in enumerate(doc.get("pairing", [])):
        pairing[tuple(int(e) for e in p["mono"])] = _parse_scalar(p["value"],
                                                                 f"{path}.pairing[{i}].value")
    return FixedComponentData(
        dim_odd=dim, generators=generators,
        tangential=[_root_from_doc(r, f"{path}.tangential_roots[{i}]")
                    for i, r in enumerate(doc.get("tangential_roots", []))],
        normal=[_root_from_doc(r, f"{path}.normal_roots[{i}]")
                for i, r in enumerate(doc.get("normal_roots", []))],
        mu=_parse_fraction(moment.get("mu", "1"), f"{path}.moment.mu"),
        reeb_weight=tuple(int(w) for w in reeb),
        pairing=pairing,
    )


def _component_to_doc(comp, at=None):
    doc = {}
    if at is not None:
        doc["at"] = str(at)
    doc.update({
        "dim": comp.dim_odd,
        "tangential_roots": [_root_to_doc(r) for r in comp.tangential],
        "normal_roots": [_root_to_doc(r) for r in comp.normal],
        "moment": {"mu": str(comp.mu),
                   "reeb_weight": (list(comp.reeb_weight) if len(comp.reeb_weight) > 1
                                   else comp.reeb_weight[0])},
        "pairing": [{"mono": list(mono), "value": value.to_text()}
                    for mono, value in sorted(comp.pairing.items())],
    })
    return doc


def model_from_document(doc, model_id=None):
    """Build and validate a model from its JSON-compatible document."""
    rank = int(doc.get("rank", 1))
    ambient = int(doc["ambient_n"])
    mid = model_id or doc.get("model_id", "model")
    if rank == 1:
        components = {}
        for i, cdoc in enumerate(doc.get("components", [])):
            at = _parse_fraction(cdoc.get("at", "0/1"), f"components[{i}].at") % 1
            components.setdefault(at, []).append(
                _component_from_doc(cdoc, rank, f"components[{i}]"))
        model = ContactModel(rank=1, ambient_n=ambient, model_id=mid,
                             components=components)
    elif rank == 2:
        identity = model_from_document(doc["identity_model"])
        families = [FiberFamily(sigma=int(f["sigma"]),
                                component=_component_from_doc(f, rank,
                                                              f"fiber_families[{i}]"))
                    for i, f in enumerate(doc.get("fiber_families", []))]
        model = ContactModel(rank=2, ambient_n=ambient, model_id=mid,
                             fiber_families=families, identity_model=identity)
    else:
        raise ModelError("rank: only 1 and 2 are supported")
    return model.validate()


def model_to_document(model):
    if model.rank == 1:
        return {
            "rank": 1,
            "ambient_n": model.ambient_n,
            "model_id": model.model_id,
            "components": [
                _component_to_doc(comp, at=at)
                for at in model.torsion_support
                for comp in model.components[at]
            ],
        }
    return {
        "rank": 2,
        "ambient_n": model.ambient_n,
        "model_id": model.model_id,
        "identity_model": model_to_document(model.identity_model),
        "fiber_families": [
            {"sigma": fam.sigma, **_component_to_doc(fam.component)}
            for fam in model.fiber_families
        ],
    }


def load_model(path):
    with open(path) as fh:
        doc = json.load(fh, parse_float=_reject_float)
    return model_from_document(doc)


def _reject_float(text):
    raise ModelError(f"model documents accept exact rationals only, got float {text}")


def dump_model(model, path):
    with open(path, "w") as fh:
        json.dump(model_to_document(model), fh, indent=2, sort_keys=True)
        fh.write("\n")
