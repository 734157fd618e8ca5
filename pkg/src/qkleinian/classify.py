"""Dynamical taxonomy of elements of PSL(3, H) and their canonical forms.

Two input modes exist. Structured specs declare the subclass and its
eigenvalue data with exact angle rationality; classification is then exact.
Matrix specs go through the numerical spectrum and decide rationality with
continued-fraction convergents, so their result is only heuristic.
"""
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import jsonschema
import numpy as np

from . import hmat, spectra
from .errors import SchemaError, ValidationError

EXACT = "exact"
HEURISTIC = "heuristic"


class Coarse(str, Enum):
    ELLIPTIC = "elliptic"
    LOXODROMIC = "loxodromic"
    PARABOLIC = "parabolic"


class Fine(str, Enum):
    RATIONAL_ELLIPTIC = "rational_elliptic"
    SIMPLE_IRRATIONAL_ELLIPTIC = "simple_irrational_elliptic"
    COMPOUND_I = "compound_irrational_elliptic_i"
    COMPOUND_II = "compound_irrational_elliptic_ii"
    COMPOUND_III = "compound_irrational_elliptic_iii"
    REGULAR_LOXODROMIC = "regular_loxodromic"
    SCREW = "screw"
    HOMOTHETY_REAL = "homothety_real"
    HOMOTHETY_COMPLEX = "homothety_complex"
    LOXO_PARABOLIC = "loxo_parabolic"
    VERTICAL_TRANSLATION = "vertical_translation"
    NON_VERTICAL_TRANSLATION = "non_vertical_translation"
    RATIONAL_ELLIPTO_PARABOLIC = "rational_ellipto_parabolic"
    IRRATIONAL_ELLIPTO_PARABOLIC = "irrational_ellipto_parabolic"
    ELLIPTO_TRANSLATION = "ellipto_translation"

    @property
    def coarse(self):
        if self in _ELLIPTIC:
            return Coarse.ELLIPTIC
        if self in _LOXODROMIC:
            return Coarse.LOXODROMIC
        return Coarse.PARABOLIC


_ELLIPTIC = {Fine.RATIONAL_ELLIPTIC, Fine.SIMPLE_IRRATIONAL_ELLIPTIC, Fine.COMPOUND_I, Fine.COMPOUND_II,
             Fine.COMPOUND_III}
_LOXODROMIC = {Fine.REGULAR_LOXODROMIC, Fine.SCREW, Fine.HOMOTHETY_REAL, Fine.HOMOTHETY_COMPLEX,
               Fine.LOXO_PARABOLIC}

# Family names accepted in structured specs; the exact subclass is derived.
FAMILIES = {
    "elliptic": _ELLIPTIC,
    "compound_irrational_elliptic": {Fine.COMPOUND_I, Fine.COMPOUND_II, Fine.COMPOUND_III},
    "homothety": {Fine.HOMOTHETY_REAL, Fine.HOMOTHETY_COMPLEX},
    "ellipto_parabolic": {Fine.RATIONAL_ELLIPTO_PARABOLIC, Fine.IRRATIONAL_ELLIPTO_PARABOLIC},
}

# Subclasses whose orbits approach their limits at a polynomial rate.
POLYNOMIAL = {Fine.LOXO_PARABOLIC, Fine.VERTICAL_TRANSLATION, Fine.NON_VERTICAL_TRANSLATION,
              Fine.RATIONAL_ELLIPTO_PARABOLIC, Fine.IRRATIONAL_ELLIPTO_PARABOLIC, Fine.ELLIPTO_TRANSLATION}


# ------------------------------------------------------------------ angles

@dataclass(frozen=True)
class Rational:
    p: int
    q: int = 1

    def __post_init__(self):
        if self.q <= 0:
            raise ValidationError("angle denominator positive", f"q = {self.q}")
        g = math.gcd(self.p, self.q)
        object.__setattr__(self, "p", self.p // g)
        object.__setattr__(self, "q", self.q // g)

    @property
    def value(self):
        return self.p / self.q

    def fraction(self):
        return Fraction(self.p, self.q)

    def to_json(self):
        return {"type": "rational", "p": self.p, "q": self.q}


@dataclass(frozen=True)
class Irrational:
    value: float
    label: str = ""

    def __post_init__(self):
        if not 0.0 <= self.value < 1.0:
            raise ValidationError("irrational angle in [0, 1)", f"value = {self.value}")

    def to_json(self):
        return {"type": "irrational", "value": self.value, "label": self.label}


GOLDEN = Irrational((math.sqrt(5) - 1) / 2, "golden")
SILVER = Irrational(math.sqrt(2) - 1, "sqrt2-1")
PI_FRAC = Irrational(math.pi - 3, "pi-3")


def class_turn(angle):
    """Turn in [0, 1/2] of the class representative of e^{2 pi i angle}."""
    if isinstance(angle, Rational):
        t = angle.fraction() % 1
        return min(t, 1 - t)
    t = angle.value % 1.0
    return min(t, 1.0 - t)


def same_class(a, b, tol=1e-12):
    if isinstance(a, Rational) != isinstance(b, Rational):
        return False
    if isinstance(a, Rational):
        return class_turn(a) == class_turn(b)
    return abs(class_turn(a) - class_turn(b)) <= tol


def is_trivial_angle(angle):
    """True when e^{2 pi i angle} = 1."""
    return isinstance(angle, Rational) and angle.fraction() % 1 == 0


def convergents(x, max_denominator):
    """Continued-fraction convergents p/q of x with q <= max_denominator."""
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    y = x
    while True:
        a = math.floor(y)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_denominator:
            return
        yield Fraction(h1, k1)
        frac = y - a
        if frac <= 1e-300:
            return
        y = 1.0 / frac
        if not math.isfinite(y):
            return


def rational_approximation(x, max_denominator=1000, tol=1e-9):
    """First convergent within tol of x, or None."""
    for f in convergents(x, max_denominator):
        if abs(x - f) <= tol:
            return f
    return None


# ------------------------------------------------------------------ specs

@dataclass(frozen=True)
class Eigen:
    modulus: float
    angle: object = Rational(0)

    @property
    def value(self):
        return self.modulus * complex(np.exp(2j * np.pi * self.angle.value))

    def to_json(self):
        return {"modulus": self.modulus, "angle": self.angle.to_json()}


def eig(modulus, angle=None):
    if angle is None:
        angle = Rational(0)
    elif isinstance(angle, Fraction):
        angle = Rational(angle.numerator, angle.denominator)
    return Eigen(float(modulus), angle)


@dataclass
class ElementSpec:
    mode: str  # "structured" | "matrix"
    subclass: str = None
    params: dict = field(default_factory=dict)
    matrix: np.ndarray = None

    def to_json(self):
        if self.mode == "matrix":
            return {"mode": "matrix", "matrix": np.asarray(self.matrix).tolist()}
        return {"mode": "structured", "class": self.subclass,
                "params": {k: v.to_json() for k, v in self.params.items()}}


@dataclass
class ElementClass:
    coarse: Coarse
    fine: Fine
    params: dict
    provenance: str = EXACT
    case_label: str = None

    def to_json(self):
        out = {"coarse": self.coarse.value, "fine": self.fine.value, "provenance": self.provenance,
               "params": {k: v.to_json() for k, v in self.params.items()}}
        if self.case_label:
            out["case_label"] = self.case_label
        return out


def structured(subclass, **params):
    return ElementSpec("structured", subclass, params)


def matrix_spec(A):
    return ElementSpec("matrix", matrix=hmat.asmat(A))


# ------------------------------------------------------------------ exact route

def _close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _require(params, names, subclass):
    missing = [n for n in names if n not in params]
    if missing:
        raise ValidationError(f"{subclass} requires parameters {', '.join(names)}", f"missing {missing}")
    extra = [n for n in params if n not in names]
    if extra:
        raise ValidationError(f"{subclass} takes parameters {', '.join(names)}", f"unexpected {extra}")
    return [params[n] for n in names]


def _elliptic_fine(angles):
    rational = [isinstance(a, Rational) for a in angles]
    n_rat = sum(rational)
    if n_rat == 3:
        return Fine.RATIONAL_ELLIPTIC, None
    if n_rat == 0 and same_class(angles[0], angles[1]) and same_class(angles[1], angles[2]):
        return Fine.SIMPLE_IRRATIONAL_ELLIPTIC, None
    if n_rat == 2:
        return Fine.COMPOUND_I, None
    if n_rat == 1:
        return Fine.COMPOUND_II, None
    pairs = [(0, 1), (0, 2), (1, 2)]
    if any(same_class(angles[i], angles[j]) for i, j in pairs):
        return Fine.COMPOUND_III, "type III with two coincident irrational angles"
    return Fine.COMPOUND_III, None


def _check_unit(eigs, subclass):
    for name, e in eigs.items():
        if not _close(e.modulus, 1.0):
            raise ValidationError(f"{subclass} eigenvalues have modulus 1", f"|{name}| = {e.modulus}")


def _check_det_pair(lam, xi, subclass):
    if _close(lam.modulus, 1.0):
        raise ValidationError(f"{subclass} requires |lambda| != 1")
    if not _close(xi.modulus, 1.0 / lam.modulus ** 2):
        raise ValidationError(f"{subclass} requires |xi| = 1/|lambda|^2",
                              f"|xi| = {xi.modulus}, 1/|lambda|^2 = {1 / lam.modulus ** 2}")


def classify_fine(spec):
    """Exact subclass of a structured spec."""
    if spec.mode != "structured":
        raise ValidationError("classify_fine takes structured specs; use classify_fine_numeric")
    name = spec.subclass
    p = dict(spec.params)
    allowed = FAMILIES.get(name)
    if allowed is None:
        try:
            allowed = {Fine(name)}
        except ValueError:
            raise ValidationError("known subclass name", repr(name)) from None
    family = next(iter(allowed)).coarse
    label = None

    if family is Coarse.ELLIPTIC:
        lam, mu, xi = _require(p, ["lambda", "mu", "xi"], name)
        _check_unit(p, name)
        fine, label = _elliptic_fine([lam.angle, mu.angle, xi.angle])
    elif allowed & {Fine.HOMOTHETY_REAL, Fine.HOMOTHETY_COMPLEX}:
        if "mu" in p:
            if not (_close(p["mu"].modulus, p["lambda"].modulus) and same_class(p["mu"].angle, p["lambda"].angle)):
                raise ValidationError("homothety requires mu = lambda")
            p.pop("mu")
        lam, xi = _require(p, ["lambda", "xi"], name)
        _check_det_pair(lam, xi, name)
        p["mu"] = lam
        real = isinstance(lam.angle, Rational) and class_turn(lam.angle) in (0, Fraction(1, 2))
        fine = Fine.HOMOTHETY_REAL if real else Fine.HOMOTHETY_COMPLEX
    elif name == Fine.REGULAR_LOXODROMIC.value:
        lam, mu, xi = _require(p, ["lambda", "mu", "xi"], name)
        if not (lam.modulus < mu.modulus * (1 - 1e-12) and mu.modulus < xi.modulus * (1 - 1e-12)):
            raise ValidationError("regular loxodromic requires |lambda| < |mu| < |xi|")
        fine = Fine.REGULAR_LOXODROMIC
    elif name == Fine.SCREW.value:
        lam, mu, xi = _require(p, ["lambda", "mu", "xi"], name)
        if not _close(lam.modulus, mu.modulus):
            raise ValidationError("screw requires |lambda| = |mu|")
        if same_class(lam.angle, mu.angle):
            raise ValidationError("screw requires lambda != mu")
        _check_det_pair(lam, xi, name)
        fine = Fine.SCREW
    elif name == Fine.LOXO_PARABOLIC.value:
        lam, xi = _require(p, ["lambda", "xi"], name)
        _check_det_pair(lam, xi, name)
        fine = Fine.LOXO_PARABOLIC
    elif name in (Fine.VERTICAL_TRANSLATION.value, Fine.NON_VERTICAL_TRANSLATION.value):
        _require(p, [], name)
        fine = Fine(name)
    elif allowed & FAMILIES["ellipto_parabolic"]:
        lam, xi = _require(p, ["lambda", "xi"], name)
        _check_unit(p, name)
        if is_trivial_angle(lam.angle):
            raise ValidationError("ellipto-parabolic requires e^{2 pi i alpha} != 1")
        both = isinstance(lam.angle, Rational) and isinstance(xi.angle, Rational)
        fine = Fine.RATIONAL_ELLIPTO_PARABOLIC if both else Fine.IRRATIONAL_ELLIPTO_PARABOLIC
    elif name == Fine.ELLIPTO_TRANSLATION.value:
        (lam,) = _require(p, ["lambda"], name)
        _check_unit(p, name)
        if is_trivial_angle(lam.angle):
            raise ValidationError("ellipto-translation requires e^{2 pi i alpha} != 1")
        fine = Fine.ELLIPTO_TRANSLATION
    else:  # pragma: no cover
        raise ValidationError("known subclass name", repr(name))

    if fine not in allowed:
        raise ValidationError(f"parameters describe {fine.value}, not {name}")
    return ElementClass(fine.coarse, fine, p, EXACT, label)


# ------------------------------------------------------------------ canonical forms

def _e(angle):
    return complex(np.exp(2j * np.pi * angle.value))


def canonical_form(cls):
    """Jordan representative of the class, rescaled so that det_h = 1."""
    f = cls.fine
    p = cls.params
    if f.coarse is Coarse.ELLIPTIC:
        M = np.diag([_e(p[k].angle) for k in ("lambda", "mu", "xi")])
    elif f in (Fine.REGULAR_LOXODROMIC, Fine.SCREW, Fine.HOMOTHETY_REAL, Fine.HOMOTHETY_COMPLEX):
        M = np.diag([p["lambda"].value, p["mu"].value, p["xi"].value])
    elif f is Fine.LOXO_PARABOLIC:
        M = hmat.block_diag(hmat.jordan_block(p["lambda"].value, 2), [[p["xi"].value]])
    elif f is Fine.VERTICAL_TRANSLATION:
        M = hmat.block_diag(hmat.jordan_block(1.0, 2), [[1.0]])
    elif f is Fine.NON_VERTICAL_TRANSLATION:
        M = hmat.jordan_block(1.0, 3)
    elif f in (Fine.RATIONAL_ELLIPTO_PARABOLIC, Fine.IRRATIONAL_ELLIPTO_PARABOLIC):
        M = hmat.block_diag(hmat.jordan_block(_e(p["lambda"].angle), 2), [[_e(p["xi"].angle)]])
    else:
        M = hmat.jordan_block(_e(p["lambda"].angle), 3)
    return hmat.normalize_to_sl(hmat.asmat(M))


def projective_order(cls):
    """Least n with g^n a real multiple of the identity, or math.inf."""
    if cls.fine is not Fine.RATIONAL_ELLIPTIC:
        return math.inf
    fr = [cls.params[k].angle.fraction() for k in ("lambda", "mu", "xi")]
    bound = 2 * math.lcm(*(f.denominator for f in fr))
    for n in range(1, bound + 1):
        turns = {(n * f) % 1 for f in fr}
        if turns in ({0}, {Fraction(1, 2)}):
            return n
    raise AssertionError("order search exceeded 2 lcm")  # pragma: no cover


# ------------------------------------------------------------------ numeric route

def classify_coarse(A, tol=1e-6):
    A = hmat.normalize_to_sl(hmat.asmat(A))
    classes = spectra.eigen_classes(A)
    if any(abs(c.modulus - 1.0) > tol for c in classes):
        return Coarse.LOXODROMIC
    if spectra.jordan_structure(A, classes=classes).is_semisimple():
        return Coarse.ELLIPTIC
    return Coarse.PARABOLIC


def _numeric_angle(z, max_denominator, tol):
    t = float(np.angle(z)) / (2 * np.pi)
    t = min(abs(t), 0.5)
    f = rational_approximation(t, max_denominator, tol)
    if f is None:
        return Irrational(t, "numeric")
    return Rational(f.numerator, f.denominator)


def classify_fine_numeric(A, tol=1e-9, max_denominator=1000, modulus_tol=1e-6):
    """Subclass of a matrix; returns (ElementClass, HEURISTIC).

    Moduli, Jordan block sizes and angle rationality are all decided with
    tolerances here, so the result is always flagged heuristic.
    """
    A = hmat.normalize_to_sl(hmat.asmat(A))
    classes = spectra.eigen_classes(A)
    js = spectra.jordan_structure(A, classes=classes)

    def mk(c):
        return Eigen(c.modulus, _numeric_angle(c.representative, max_denominator, tol))

    def is_one(z):
        return abs(z - 1.0) <= modulus_tol

    lox = any(abs(c.modulus - 1.0) > modulus_tol for c in classes)
    label = None
    if not lox and js.is_semisimple():
        expanded = [c for c in classes for _ in range(c.multiplicity)]
        p = dict(zip(("lambda", "mu", "xi"), (mk(c) for c in expanded)))
        fine, label = _elliptic_fine([e.angle for e in p.values()])
    elif lox:
        big = [(l, s) for l, s in js.blocks if s > 1]
        if big:
            lam = big[0][0]
            other = next(l for l, s in js.blocks if s == 1)
            p = {"lambda": mk(spectra.EigenClass(lam, 2)), "xi": mk(spectra.EigenClass(other, 1))}
            fine = Fine.LOXO_PARABOLIC
        else:
            double = [c for c in classes if c.multiplicity == 2]
            if double:
                other = next(c for c in classes if c.multiplicity == 1)
                p = {"lambda": mk(double[0]), "mu": mk(double[0]), "xi": mk(other)}
                real = abs(double[0].representative.imag) <= modulus_tol
                fine = Fine.HOMOTHETY_REAL if real else Fine.HOMOTHETY_COMPLEX
            else:
                mods = [c.modulus for c in classes]
                equal = [(i, j) for i in range(3) for j in range(i + 1, 3)
                         if abs(mods[i] - mods[j]) <= modulus_tol * max(mods[i], mods[j])]
                if equal:
                    i, j = equal[0]
                    k = 3 - i - j
                    p = {"lambda": mk(classes[i]), "mu": mk(classes[j]), "xi": mk(classes[k])}
                    fine = Fine.SCREW
                else:
                    p = dict(zip(("lambda", "mu", "xi"), (mk(c) for c in classes)))
                    fine = Fine.REGULAR_LOXODROMIC
    else:
        sizes = js.sizes()
        lam = next(l for l, s in js.blocks if s > 1)
        if sizes[0] == 3:
            if is_one(lam):
                p, fine = {}, Fine.NON_VERTICAL_TRANSLATION
            else:
                p, fine = {"lambda": mk(spectra.EigenClass(lam, 3))}, Fine.ELLIPTO_TRANSLATION
        else:
            other = next(l for l, s in js.blocks if s == 1)
            if is_one(lam) and is_one(other):
                p, fine = {}, Fine.VERTICAL_TRANSLATION
            else:
                p = {"lambda": mk(spectra.EigenClass(lam, 2)), "xi": mk(spectra.EigenClass(other, 1))}
                both = all(isinstance(e.angle, Rational) for e in p.values())
                fine = Fine.RATIONAL_ELLIPTO_PARABOLIC if both else Fine.IRRATIONAL_ELLIPTO_PARABOLIC
                if is_one(lam):
                    label = "ellipto-parabolic with block eigenvalue 1"
    return ElementClass(fine.coarse, fine, p, HEURISTIC, label), HEURISTIC


def classify(spec, tol=1e-9, max_denominator=1000):
    if spec.mode == "structured":
        return classify_fine(spec)
    cls, _ = classify_fine_numeric(spec.matrix, tol, max_denominator)
    return cls


def element_matrix(spec, cls=None):
    """Generator matrix (det_h = 1) for a spec."""
    if spec.mode == "matrix":
        return hmat.normalize_to_sl(spec.matrix)
    return canonical_form(cls or classify_fine(spec))


# ------------------------------------------------------------------ canonical specs

def canonical_specs():
    """One structured spec per subclass, keyed by subclass."""
    R = Rational
    u = lambda a: eig(1.0, a)  # noqa: E731
    return {
        Fine.RATIONAL_ELLIPTIC: structured("rational_elliptic", **{"lambda": u(R(1, 3)), "mu": u(R(1, 5)),
                                                                   "xi": u(R(-8, 15))}),
        Fine.SIMPLE_IRRATIONAL_ELLIPTIC: structured("simple_irrational_elliptic",
                                                    **{"lambda": u(GOLDEN), "mu": u(GOLDEN), "xi": u(GOLDEN)}),
        Fine.COMPOUND_I: structured("compound_irrational_elliptic_i",
                                    **{"lambda": u(R(1, 3)), "mu": u(R(1, 5)), "xi": u(GOLDEN)}),
        Fine.COMPOUND_II: structured("compound_irrational_elliptic_ii",
                                     **{"lambda": u(R(1, 3)), "mu": u(GOLDEN), "xi": u(SILVER)}),
        Fine.COMPOUND_III: structured("compound_irrational_elliptic_iii",
                                      **{"lambda": u(GOLDEN), "mu": u(SILVER), "xi": u(PI_FRAC)}),
        Fine.REGULAR_LOXODROMIC: structured("regular_loxodromic", **{"lambda": eig(0.5), "mu": eig(1.0),
                                                                      "xi": eig(2.0)}),
        Fine.SCREW: structured("screw", **{"lambda": eig(2.0, R(1, 4)), "mu": eig(2.0), "xi": eig(0.25)}),
        Fine.HOMOTHETY_REAL: structured("homothety_real", **{"lambda": eig(2.0), "xi": eig(0.25)}),
        Fine.HOMOTHETY_COMPLEX: structured("homothety_complex", **{"lambda": eig(2.0, R(1, 4)), "xi": eig(0.25)}),
        Fine.LOXO_PARABOLIC: structured("loxo_parabolic", **{"lambda": eig(2.0), "xi": eig(0.25)}),
        Fine.VERTICAL_TRANSLATION: structured("vertical_translation"),
        Fine.NON_VERTICAL_TRANSLATION: structured("non_vertical_translation"),
        Fine.RATIONAL_ELLIPTO_PARABOLIC: structured("rational_ellipto_parabolic",
                                                    **{"lambda": u(R(1, 4)), "xi": u(R(1, 3))}),
        Fine.IRRATIONAL_ELLIPTO_PARABOLIC: structured("irrational_ellipto_parabolic",
                                                      **{"lambda": u(R(1, 4)), "xi": u(GOLDEN)}),
        Fine.ELLIPTO_TRANSLATION: structured("ellipto_translation", **{"lambda": u(R(1, 4))}),
    }


# ------------------------------------------------------------------ spec files

_ANGLE = {
    "oneOf": [
        {"type": "object", "required": ["type", "p", "q"], "additionalProperties": False,
         "properties": {"type": {"const": "rational"}, "p": {"type": "integer"},
                        "q": {"type": "integer", "minimum": 1}}},
        {"type": "object", "required": ["type", "value"], "additionalProperties": False,
         "properties": {"type": {"const": "irrational"},
                        "value": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                        "label": {"type": "string"}}},
    ]
}
_EIGEN = {"type": "object", "required": ["angle"], "additionalProperties": False,
          "properties": {"modulus": {"type": "number", "exclusiveMinimum": 0}, "angle": _ANGLE}}
_QUAT = {"type": "array", "items": {"type": "number"}, "minItems": 4, "maxItems": 4}
_ROW = {"type": "array", "items": _QUAT, "minItems": 3, "maxItems": 3}

SPEC_SCHEMA = {
    "oneOf": [
        {"type": "object", "required": ["mode", "class"], "additionalProperties": False,
         "properties": {"mode": {"const": "structured"},
                        "class": {"enum": [f.value for f in Fine] + list(FAMILIES)},
                        "params": {"type": "object", "additionalProperties": False,
                                   "properties": {k: _EIGEN for k in ("lambda", "mu", "xi")}}}},
        {"type": "object", "required": ["mode", "matrix"], "additionalProperties": False,
         "properties": {"mode": {"const": "matrix"},
                        "matrix": {"type": "array", "items": _ROW, "minItems": 3, "maxItems": 3}}},
    ]
}


def _angle_from_json(d):
    if d["type"] == "rational":
        return Rational(d["p"], d["q"])
    return Irrational(float(d["value"]), d.get("label", ""))


def spec_from_json(doc):
    validator = jsonschema.Draft202012Validator(SPEC_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: len(list(e.absolute_path)))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        path = "$" + "".join(f"[{p!r}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
        raise SchemaError(path, err.message)
    if doc["mode"] == "matrix":
        return ElementSpec("matrix", matrix=np.array(doc["matrix"], dtype=float))
    params = {k: Eigen(float(v.get("modulus", 1.0)), _angle_from_json(v["angle"]))
              for k, v in doc.get("params", {}).items()}
    return ElementSpec("structured", doc["class"], params)


def load_spec(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from None
    return spec_from_json(doc)
