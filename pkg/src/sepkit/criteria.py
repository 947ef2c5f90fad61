"""Extended correlation tensor, its separability bounds, and named presets.

For a separable state the trace norm of the extended correlation tensor
``M_{x,y}^{(n)}`` never exceeds the bound built from ``(d, κ, x, y, n)``;
exceeding it certifies entanglement. A criterion never certifies
separability, so the only verdicts are ``ENTANGLED`` and ``INCONCLUSIVE``.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from sepkit.bases import gell_mann_basis, heisenberg_weyl_basis, rescale_basis
from sepkit.bloch import Convention, decompose
from sepkit.linalg import hermitian_eigenvalues, partial_transpose, realign, trace_norm

VERDICT_TOL = 1e-9


class Verdict(enum.Enum):
    ENTANGLED = "ENTANGLED"
    INCONCLUSIVE = "INCONCLUSIVE"


def verdict_for(margin, tol=VERDICT_TOL):
    return Verdict.ENTANGLED if margin < -tol else Verdict.INCONCLUSIVE


@dataclass(frozen=True)
class TensorParams:
    x: float = 0.0
    y: float = 0.0
    n: int = 1
    convention: Convention = Convention.PLAIN

    def __post_init__(self):
        if not (self.x >= 0 and self.y >= 0):
            raise ValueError(f"x and y must be nonnegative, got x={self.x}, y={self.y}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))


@dataclass(frozen=True, eq=False)
class ExtendedTensor:
    m: np.ndarray
    params: TensorParams
    d_a: int
    d_b: int
    kappa_a: float
    kappa_b: float

    @property
    def trace_norm(self):
        return trace_norm(self.m)


def build_extended_tensor(dec, params):
    """Block matrix ``[[c xy E_nn, a x ω_n(s)^t], [b y ω_n(r), T]]``.

    In the plain convention ``a = 1/sqrt(κA dA)``, ``b = 1/sqrt(κB dB)`` and
    ``c = ab``; in the hatted convention all three are 1 and the hatted
    coefficients are used.
    """
    if dec.convention is not params.convention:
        raise ValueError(
            f"decomposition is in {dec.convention.value} convention but parameters ask for {params.convention.value}"
        )
    d_a, d_b = dec.dims
    ka, kb = dec.basis_a.kappa, dec.basis_b.kappa
    if params.convention is Convention.PLAIN:
        a, b = 1 / np.sqrt(ka * d_a), 1 / np.sqrt(kb * d_b)
    else:
        a = b = 1.0
    x, y, n = params.x, params.y, params.n
    top = np.hstack([np.full((n, n), x * y * a * b, dtype=complex), np.tile(x * a * dec.s, (n, 1))])
    bottom = np.hstack([np.tile((y * b * dec.r)[:, None], (1, n)), dec.t])
    return ExtendedTensor(np.vstack([top, bottom]), params, d_a, d_b, ka, kb)


def theorem1_bound(d_a, d_b, kappa_a, kappa_b, params):
    """``sqrt((n x² + dA - 1)/(κA dA) · (n y² + dB - 1)/(κB dB))`` (plain convention)."""
    if params.convention is not Convention.PLAIN:
        raise ValueError("theorem1_bound applies to the plain convention")
    n, x, y = params.n, params.x, params.y
    return float(np.sqrt((n * x * x + d_a - 1) / (kappa_a * d_a) * (n * y * y + d_b - 1) / (kappa_b * d_b)))


def prop1_bound(d_a, d_b, kappa_a, kappa_b, params):
    """``sqrt((n x² + (dA² - dA)/κA) · (n y² + (dB² - dB)/κB))`` (hatted convention)."""
    if params.convention is not Convention.HATTED:
        raise ValueError("prop1_bound applies to the hatted convention")
    n, x, y = params.n, params.x, params.y
    return float(np.sqrt((n * x * x + (d_a * d_a - d_a) / kappa_a) * (n * y * y + (d_b * d_b - d_b) / kappa_b)))


def separable_bound(d_a, d_b, kappa_a, kappa_b, params):
    """Whichever of the two bounds matches ``params.convention``."""
    if params.convention is Convention.PLAIN:
        return theorem1_bound(d_a, d_b, kappa_a, kappa_b, params)
    return prop1_bound(d_a, d_b, kappa_a, kappa_b, params)


@dataclass(frozen=True)
class CriterionReport:
    name: str
    lhs: float
    rhs: float
    margin: float
    verdict: Verdict
    params: TensorParams = None
    basis: str = ""
    kappa_a: float = None
    kappa_b: float = None

    @property
    def entangled(self):
        return self.verdict is Verdict.ENTANGLED

    def to_dict(self):
        def num(v):
            return None if v is None else float(f"{v:.15g}")

        p = self.params
        return {
            "name": self.name,
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "margin": num(self.margin),
            "verdict": self.verdict.value,
            "x": num(p.x) if p else None,
            "y": num(p.y) if p else None,
            "n": p.n if p else None,
            "convention": p.convention.value if p else None,
            "basis": self.basis,
            "kappaA": num(self.kappa_a),
            "kappaB": num(self.kappa_b),
        }


def _basis_label(basis_a, basis_b):
    if basis_a.descriptor == basis_b.descriptor:
        return basis_a.descriptor
    return f"{basis_a.descriptor}|{basis_b.descriptor}"


@dataclass(frozen=True, eq=False)
class Criterion:
    """A fixed choice of local bases and tensor parameters."""

    name: str
    basis_a: object
    basis_b: object
    params: TensorParams = field(default_factory=TensorParams)

    @property
    def dims(self):
        return (self.basis_a.dim, self.basis_b.dim)

    @property
    def bound(self):
        return separable_bound(*self.dims, self.basis_a.kappa, self.basis_b.kappa, self.params)

    def tensor(self, rho):
        dec = decompose(rho, self.basis_a, self.basis_b, self.params.convention)
        return build_extended_tensor(dec, self.params)

    def evaluate(self, rho):
        lhs = self.tensor(rho).trace_norm
        rhs = self.bound
        margin = rhs - lhs
        return CriterionReport(
            name=self.name,
            lhs=lhs,
            rhs=rhs,
            margin=margin,
            verdict=verdict_for(margin),
            params=self.params,
            basis=_basis_label(self.basis_a, self.basis_b),
            kappa_a=self.basis_a.kappa,
            kappa_b=self.basis_b.kappa,
        )


def evaluate(rho, basis_a, basis_b, params, name=None):
    """Compare ``||M_{x,y}^{(n)}(ρ)||_tr`` against the matching separable bound."""
    if name is None:
        name = "thm1" if params.convention is Convention.PLAIN else "prop1"
    return Criterion(name, basis_a, basis_b, params).evaluate(rho)


PRESETS = ("ccnr", "dv", "li", "shen", "sarbicki", "thm1-hw", "prop1-hw")


def preset(name, d_a, d_b, x=None, y=None, n=None):
    """Named special case of the criterion.

    ``ccnr``, ``dv`` and ``li`` have fixed parameters and reject overrides.
    ``shen``, ``thm1-hw`` and ``prop1-hw`` take ``(x, y, n)``; ``sarbicki``
    takes ``(x, y)`` with ``n = 1``. Missing free parameters default to
    ``x = y = n = 1``.
    """
    key = name.lower()
    fixed = {
        "ccnr": dict(x=1.0, y=1.0, n=1, convention=Convention.PLAIN),
        "dv": dict(x=0.0, y=0.0, n=1, convention=Convention.HATTED),
        "li": dict(x=1.0, y=1.0, n=1, convention=Convention.HATTED),
    }
    if key in fixed:
        if any(v is not None for v in (x, y, n)):
            raise ValueError(f"preset {key!r} has fixed parameters; x, y, n cannot be set")
        params = TensorParams(**fixed[key])
    elif key == "sarbicki":
        if n not in (None, 1):
            raise ValueError("preset 'sarbicki' fixes n = 1")
        params = TensorParams(1.0 if x is None else x, 1.0 if y is None else y, 1, Convention.PLAIN)
    elif key in ("shen", "thm1-hw", "prop1-hw"):
        conv = Convention.PLAIN if key == "thm1-hw" else Convention.HATTED
        params = TensorParams(1.0 if x is None else x, 1.0 if y is None else y, 1 if n is None else n, conv)
    else:
        raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")

    if key in ("ccnr", "sarbicki"):
        ba, bb = rescale_basis(gell_mann_basis(d_a), 1.0), rescale_basis(gell_mann_basis(d_b), 1.0)
    elif key.endswith("-hw"):
        ba, bb = heisenberg_weyl_basis(d_a), heisenberg_weyl_basis(d_b)
    else:
        ba, bb = gell_mann_basis(d_a), gell_mann_basis(d_b)
    return Criterion(key, ba, bb, params)


def ppt_check(rho, tol=VERDICT_TOL):
    """Smallest eigenvalue of the partial transpose, and the PPT verdict."""
    low = float(hermitian_eigenvalues(partial_transpose(rho.mat, rho.d_a, rho.d_b))[0])
    return low, Verdict.ENTANGLED if low < -tol else Verdict.INCONCLUSIVE


def realignment_check(rho, tol=VERDICT_TOL):
    """``||ρ^R||_tr`` and the realignment (CCNR) verdict against 1."""
    norm = trace_norm(realign(rho.mat, rho.d_a, rho.d_b))
    return norm, Verdict.ENTANGLED if norm > 1 + tol else Verdict.INCONCLUSIVE


class RealignmentCriterion:
    """Realignment test with the :class:`Criterion` evaluation interface."""

    name = "realignment"

    def evaluate(self, rho):
        norm, verdict = realignment_check(rho)
        return CriterionReport(self.name, norm, 1.0, 1.0 - norm, verdict)


class PPTCriterion:
    """PPT test as a report: ``margin`` is the smallest eigenvalue of ``ρ^τ``."""

    name = "ppt"

    def evaluate(self, rho):
        low, verdict = ppt_check(rho)
        return CriterionReport(self.name, -low, 0.0, low, verdict)
