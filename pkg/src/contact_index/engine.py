"""Localization engine: germs at torsion points, characters, calibration.

The contributions are assembled per torsion point: each fixed component
yields (2 pi i)^-k times the pairing of its Todd factor, its inverse normal
determinant and the contact delta form; Fourier conversion of the germs
gives exact quasi-polynomial character coefficients.  A separate direct
evaluation of the coefficients is interpolated per residue class and
verified on held-out samples, so the fitted quasi-polynomial never rests on
the same arithmetic path twice.

Three global convention bits (orientation of the top pairing, Fourier sign,
Todd series direction) are fixed once by `calibrate_conventions`, which
demands that exactly one of the eight combinations reproduces both anchor
characters (the free circle and the round three-sphere).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import ExactScalar, approx_display
from .deltas import DeltaError, DeltaGerm, fourier_contribution, germ_to_document
from .forms import dc_inverse, integrate_component, j_form, todd
from .catalog import (IDENTITY, fixed_submodel, preset_circle, preset_hopf_sphere,
                      preset_prequantum_cpn, preset_weighted_s3)


class EngineError(ValueError):
    pass


class UnsupportedModelError(EngineError):
    """Feature outside the supported scope (maps to CLI exit code 3)."""


class FitError(EngineError):
    """Quasi-polynomial fitting failed verification on held-out samples."""

    def __init__(self, message, residuals):
        super().__init__(message)
        self.residuals = residuals


class CalibrationError(EngineError):
    """Zero or several convention combinations pass the anchors (exit code 5)."""


@dataclass(frozen=True)
class CalibrationConfig:
    poisson_sign: int = 1
    orientation_sign: int = 1
    todd_direction: str = "plus"

    def as_dict(self):
        return {"poisson_sign": self.poisson_sign,
                "orientation_sign": self.orientation_sign,
                "todd_direction": self.todd_direction}

    @staticmethod
    def from_dict(d):
        cfg = CalibrationConfig(int(d["poisson_sign"]), int(d["orientation_sign"]),
                                str(d["todd_direction"]))
        if cfg.poisson_sign not in (1, -1) or cfg.orientation_sign not in (1, -1) \
                or cfg.todd_direction not in ("plus", "minus"):
            raise EngineError(f"invalid calibration record {d!r}")
        return cfg


DEFAULT_CALIBRATION = CalibrationConfig()

GERM_VAR = "phi"


def build_preset(name, params, calibration=DEFAULT_CALIBRATION):
    o = calibration.orientation_sign
    if name == "circle":
        return preset_circle(orientation=o)
    if name == "hopf":
        (n,) = params
        return preset_hopf_sphere(n, orientation=o)
    if name == "weighted-s3":
        a, b = params
        return preset_weighted_s3(a, b, orientation=o)
    if name == "prequantum-cpn":
        (n,) = params
        return preset_prequantum_cpn(n, orientation=o)
    raise EngineError(f"unknown preset {name!r}")


def _scalar_power(base, k):
    out = ExactScalar.one()
    for _ in range(abs(k)):
        out = out * base
    return out if k >= 0 else out.inverse()


def _component_germ(comp, calibration):
    """(2 pi i)^-k times the pairing of Todd, inverse determinant and delta form."""
    k = comp.k
    jet_order = k + 4  # default truncation: enough for every derivative the germ carries
    for attempt in range(4):
        try:
            vars = (GERM_VAR,)
            td = todd(comp.tangential, comp.generators, k, vars, jet_order,
                      calibration.todd_direction)
            dc = dc_inverse(comp.normal, comp.generators, k, vars, jet_order)
            integrand = td * dc * j_form(comp, vars, jet_order)
            germ = integrate_component(integrand, comp.pairing)
            break
        except DeltaError as exc:
            if "raise the truncation" in str(exc) and attempt < 3:
                jet_order *= 2
                continue
            raise
    prefactor = _scalar_power(ExactScalar.pi_power(1, 2) * ExactScalar.i(), -k)
    return germ * prefactor


def germ_at(model, at, calibration=DEFAULT_CALIBRATION):
    """Germ of the index at one torsion point of a rank-1 model.

    The sum over the components of the fixed submodel; an empty fixed set
    gives the zero germ.  Components are evaluated in their listed order
    after sorting torsion data, so results are deterministic.
    """
    if model.rank != 1:
        raise UnsupportedModelError(
            "germs at single points are computed for rank-1 models; rank-2 models "
            "go through corollary_expand")
    at = Fraction(at) % 1
    sub = fixed_submodel(model, at)
    total = DeltaGerm.zero((GERM_VAR,))
    for comp in sub.components.get(IDENTITY, []):
        total = total + _component_germ(comp, calibration)
    return total


def identity_germ(model, calibration=DEFAULT_CALIBRATION):
    """Germ at the identity; same as germ_at at 0/1, where no normal factor appears."""
    return germ_at(model, IDENTITY, calibration)


def dh_fourier(model, calibration=DEFAULT_CALIBRATION):
    """The volume transform: the identity computation with the Todd factor dropped."""
    if model.rank != 1:
        raise UnsupportedModelError("the volume transform is computed for rank-1 models")
    n = model.ambient_n
    total = DeltaGerm.zero((GERM_VAR,))
    for comp in model.components.get(IDENTITY, []):
        jet_order = comp.k + 4
        form = j_form(comp, (GERM_VAR,), jet_order)
        total = total + integrate_component(form, comp.pairing)
    prefactor = _scalar_power(ExactScalar.pi_power(1, 2) * ExactScalar.i(), -n)
    return total * prefactor


# ----------------------------------------------------------------------
# quasi-polynomials
# ----------------------------------------------------------------------

@dataclass
class QuasiPolynomial:
    """Per-residue polynomials in m; period 1 is a plain polynomial."""

    period: int
    polys: dict  # residue -> ascending ExactScalar coefficients

    def __post_init__(self):
        if self.period < 1:
            raise EngineError("period must be positive")
        trimmed = {}
        for r in range(self.period):
            coeffs = list(self.polys.get(r, []))
            while coeffs and coeffs[-1].is_zero():
                coeffs.pop()
            trimmed[r] = coeffs
        self.polys = trimmed

    def evaluate(self, m):
        coeffs = self.polys[m % self.period]
        acc = ExactScalar.zero()
        for c in reversed(coeffs):
            acc = acc * m + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, QuasiPolynomial):
            return NotImplemented
        period = math.lcm(self.period, other.period)
        for r in range(period):
            a = self.polys[r % self.period]
            b = other.polys[r % other.period]
            if len(a) != len(b) or any(not (x - y).is_zero() for x, y in zip(a, b)):
                return False
        return True

    __hash__ = None

    def to_document(self):
        return {
            "period": self.period,
            "polys": [{"residue": r,
                       "coefficients": [c.to_text() for c in self.polys[r]]}
                      for r in range(self.period)],
        }


def _interpolate(nodes, values):
    """Newton interpolation through integer nodes with exact scalar values."""
    n = len(nodes)
    dd = list(values)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            span = Fraction(nodes[i] - nodes[i - level])
            dd[i] = (dd[i] - dd[i - 1]) * ExactScalar.from_rational(1 / span)
    # expand the Newton form sum_j dd[j] prod_{i<j} (m - nodes[i])
    coeffs = [ExactScalar.zero() for _ in range(n)]
    basis = [Fraction(1)]  # polynomial prod (m - nodes[i]) as ascending Fractions
    for j in range(n):
        for power, q in enumerate(basis):
            coeffs[power] = coeffs[power] + dd[j] * ExactScalar.from_rational(q)
        new = [Fraction(0)] * (len(basis) + 1)
        for power, q in enumerate(basis):
            new[power + 1] += q
            new[power] -= q * nodes[j]
        basis = new
    return coeffs


def fit_quasi_polynomial(samples, period, degree):
    """Interpolate per residue class on degree+1 samples; verify the rest.

    Exact linear solving only: Newton interpolation through the samples
    closest to zero, then every held-out sample is checked.  Any mismatch
    raises `FitError` with the residual list.
    """
    polys = {}
    residuals = []
    for r in range(period):
        ms = sorted((m for m in samples if m % period == r), key=abs)
        if len(ms) < degree + 2:
            raise FitError(
                f"residue {r}: need at least {degree + 2} samples to fit degree "
                f"{degree} and verify, have {len(ms)}", [])
        fit_nodes = sorted(ms[:degree + 1])
        coeffs = _interpolate(fit_nodes, [samples[m] for m in fit_nodes])
        polys[r] = coeffs
        qp_eval = lambda m, c=coeffs: _poly_eval(c, m)
        for m in ms[degree + 1:]:
            got = qp_eval(m)
            if not (got - samples[m]).is_zero():
                residuals.append({"m": m, "fitted": got.to_text(),
                                  "actual": samples[m].to_text()})
    if residuals:
        raise FitError(
            f"coefficients are not quasi-polynomial of period {period} and degree "
            f"{degree}: {len(residuals)} held-out samples disagree", residuals)
    return QuasiPolynomial(period, polys)


def _poly_eval(coeffs, m):
    acc = ExactScalar.zero()
    for c in reversed(coeffs):
        acc = acc * m + c
    return acc


# ----------------------------------------------------------------------
# character assembly
# ----------------------------------------------------------------------

@dataclass
class CharacterResult:
    model_id: str
    calibration: CalibrationConfig
    germs: dict            # torsion point -> DeltaGerm
    coefficients: dict     # m -> ExactScalar
    quasi: QuasiPolynomial
    non_integer: list

    def coefficient_int(self, m):
        c = self.coefficients[m]
        if not c.is_integer():
            raise EngineError(f"coefficient at m={m} is not an integer: {c}")
        return int(c.rational_value())


def assemble_character(model, max_m, calibration=DEFAULT_CALIBRATION):
    """Sum the Fourier contributions of every torsion germ of a rank-1 model.

    Returns the exact coefficients for |m| <= max_m together with the
    quasi-polynomial fitted per residue class modulo the lcm of the torsion
    orders and verified on the held-out samples.
    """
    if model.rank != 1:
        raise UnsupportedModelError("characters are assembled for rank-1 models")
    if max_m < 1:
        raise EngineError("max_m must be at least 1")
    germs = {}
    contributions = []
    period = 1
    for at in model.torsion_support:
        germ = germ_at(model, at, calibration)
        germs[at] = germ
        if germ.is_zero():
            continue
        q, table = fourier_contribution(germ, at, calibration.poisson_sign)
        contributions.append((q, table))
        period = math.lcm(period, q)
    coefficients = {}
    for m in range(-max_m, max_m + 1):
        total = ExactScalar.zero()
        for q, table in contributions:
            total = total + _poly_eval(table[m % q], m)
        coefficients[m] = total
    degree = max((c.k for comps in model.components.values() for c in comps), default=0)
    quasi = fit_quasi_polynomial(coefficients, period, degree)
    non_integer = [m for m, c in coefficients.items() if not c.is_integer()]
    return CharacterResult(model.model_id, calibration, germs, coefficients, quasi,
                           non_integer)


# ----------------------------------------------------------------------
# the rank-2 double expansion
# ----------------------------------------------------------------------

def _laurent_mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = e1 + e2
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def _laurent_divide(num, den):
    """Exact division of Laurent polynomials over Q; the remainder must vanish."""
    if not num:
        return {}
    if not den:
        raise EngineError("division by the zero polynomial")
    shift_n = min(num)
    shift_d = min(den)
    n = {e - shift_n: c for e, c in num.items()}
    d = {e - shift_d: c for e, c in den.items()}
    deg_n = max(n)
    deg_d = max(d)
    if deg_n < deg_d:
        raise EngineError("residual character is not a Laurent polynomial "
                          "(degree deficit)")
    d0 = d[0]
    quotient = {}
    work = dict(n)
    for e in range(deg_n - deg_d + 1):
        c = work.get(e, Fraction(0))
        if c == 0:
            continue
        q = c / d0
        quotient[e] = q
        for ed, cd in d.items():
            key = e + ed
            work[key] = work.get(key, Fraction(0)) - q * cd
            if work[key] == 0:
                del work[key]
    if work:
        raise EngineError(
            "residual character is not a Laurent polynomial: nonzero remainder "
            f"{sorted(work.items())}")
    return {e + shift_n - shift_d: c for e, c in quotient.items() if c != 0}


def residual_factors(model, m, calibration=DEFAULT_CALIBRATION):
    """Per-fiber data of the m-th principal Fourier slice.

    Each fiber contributes the power m*sigma of the group variable divided by
    the product over its normal roots of (1 - x^e), where e is the root's
    covector paired with (1, sigma).  The contact-form normalization enters
    through the orbit pairing divided by 2 pi and the moment constant.
    """
    out = []
    s = calibration.poisson_sign
    for fam in model.fiber_families:
        comp = fam.component
        amp = comp.pairing[()] * ExactScalar.pi_power(-1, Fraction(1, 2)) \
            * ExactScalar.from_rational(1 / Fraction(comp.mu))
        if not amp.is_rational():
            raise EngineError("fiber amplitude must be rational")
        exponents = [w[0] + fam.sigma * w[1] for w in (r.weight for r in comp.normal)]
        if any(e == 0 for e in exponents):
            raise UnsupportedModelError(
                "a fiber normal root pairs to zero with its own pair exponent; "
                "the model does not separate")
        out.append({
            "amplitude": amp.rational_value(),
            "power": s * m * fam.sigma,
            "denominator_exponents": exponents,
        })
    return out


def corollary_expand(model, max_m, max_k, calibration=DEFAULT_CALIBRATION):
    """Weight multiplicities of the group character per principal index m.

    For each |m| <= max_m, sums the per-fiber residual factors into one
    rational function of the group variable and performs the exact Laurent
    division; the zero remainder is itself the check that the slice is a
    finite character.  Returns {m: {weight: multiplicity}} with weights
    clipped to |weight| <= max_k (entries outside the window raise).
    """
    if model.rank != 2 or not model.fiber_families:
        raise UnsupportedModelError(
            "the double expansion needs a rank-2 model with separating fibers")
    table = {}
    for m in range(-max_m, max_m + 1):
        factors = residual_factors(model, m, calibration)
        denominators = [_denominator_poly(f["denominator_exponents"]) for f in factors]
        total_num = {}
        for i, f in enumerate(factors):
            term = {f["power"]: Fraction(f["amplitude"])}
            for j, d in enumerate(denominators):
                if j != i:
                    term = _laurent_mul(term, d)
            for e, c in term.items():
                total_num[e] = total_num.get(e, Fraction(0)) + c
            total_num = {e: c for e, c in total_num.items() if c != 0}
        total_den = {0: Fraction(1)}
        for d in denominators:
            total_den = _laurent_mul(total_den, d)
        weights = _laurent_divide(total_num, total_den)
        entry = {}
        for k, c in sorted(weights.items()):
            if c.denominator != 1:
                raise EngineError(f"non-integer multiplicity {c} at weight {k}, m={m}")
            if abs(k) > max_k:
                raise EngineError(
                    f"weight {k} exceeds the requested window {max_k} at m={m}; "
                    f"raise max_k")
            entry[k] = int(c)
        table[m] = entry
    return table


def _denominator_poly(exponents):
    out = {0: Fraction(1)}
    for e in exponents:
        out = _laurent_mul(out, {0: Fraction(1), e: Fraction(-1)})
    return out


def principal_limit(model, max_m, calibration=DEFAULT_CALIBRATION):
    """chi_m at the trivial group element, from the principal reduction.

    The principal-only character coefficient at -m equals the weight sum of
    the m-th slice; this is the consistency check between the fiber data and
    the identity stratum.
    """
    if model.identity_model is None:
        raise UnsupportedModelError("model has no principal reduction")
    result = assemble_character(model.identity_model, max_m, calibration)
    return {m: result.coefficients[-m] for m in range(-max_m, max_m + 1)}


# ----------------------------------------------------------------------
# calibration
# ----------------------------------------------------------------------

def _anchor_pass(calibration, max_m=20):
    circle = build_preset("circle", (), calibration)
    res = assemble_character(circle, max_m, calibration)
    for m in range(-max_m, max_m + 1):
        if not (res.coefficients[m] - ExactScalar.one()).is_zero():
            return False
    hopf = build_preset("hopf", (1,), calibration)
    res = assemble_character(hopf, max_m, calibration)
    for m in range(-max_m, max_m + 1):
        if not (res.coefficients[m] - ExactScalar.from_rational(1 - m)).is_zero():
            return False
    return True


def calibrate_conventions(max_m=20, perturb=False):
    """Select the unique convention combination passing both anchors.

    Iterates the eight (orientation, Fourier sign, Todd direction) triples;
    exactly one must reproduce the all-ones circle character and the 1 - m
    sphere character.  Zero or several passing triples signal an
    implementation bug and raise `CalibrationError`.  The `perturb` hook
    damages the second anchor, forcing that failure path for tests.
    """
    passing = []
    for o in (1, -1):
        for s in (1, -1):
            for direction in ("plus", "minus"):
                cfg = CalibrationConfig(poisson_sign=s, orientation_sign=o,
                                        todd_direction=direction)
                ok = _anchor_pass(cfg, max_m)
                if ok and perturb:
                    hopf = build_preset("hopf", (1,), cfg)
                    res = assemble_character(hopf, max_m, cfg)
                    ok = all((res.coefficients[m] - ExactScalar.from_rational(1 - 2 * m)).is_zero()
                             for m in range(-max_m, max_m + 1))
                if ok:
                    passing.append(cfg)
    if len(passing) != 1:
        raise CalibrationError(
            f"calibration must single out exactly one convention combination; "
            f"{len(passing)} of 8 passed the anchors")
    return passing[0]


# ----------------------------------------------------------------------
# report documents
# ----------------------------------------------------------------------

def character_document(result, digits=4):
    def coeff_entry(m):
        c = result.coefficients[m]
        entry = {"m": m, "value": c.to_text(), "approx": approx_display(c, digits)}
        if c.is_integer():
            entry["integer"] = int(c.rational_value())
        return entry

    return {
        "model_id": result.model_id,
        "calibration": result.calibration.as_dict(),
        "germs": [germ_to_document(result.germs[at], at)
                  for at in sorted(result.germs, key=lambda t: (t.denominator, t.numerator))],
        "coefficients": [coeff_entry(m) for m in sorted(result.coefficients)],
        "quasi_polynomial": result.quasi.to_document(),
        "non_integer_coefficients": result.non_integer,
    }
