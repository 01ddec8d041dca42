"""Indented inversion contours and their diagnostics.

The inversion contours in both spectral planes are realised by the
rational parametrisation ``A(s) = s + s / (a (s^4 + c))`` with complex
shape constants ``a`` and ``c``.  With the reference constants
(``k = 3``, ``a = 0.0012 + 0.0006j``, ``c = 1000j``) the contour passes
through the origin, above ``-k`` and below ``+k``, and returns to the
real axis like ``1/(a s^3)``.

Because no scaling rule for ``(a, c)`` comes with the method, constants
for other wavenumbers are derived by exact geometric similarity
(``a -> a (k0/k)^4``, ``c -> c (k/k0)^4``) or supplied by the user, and
either way are gated at startup by the two quantitative diagnostics
below: the sign-compatibility scan (``Im(1/K) >= 0`` on the contour
product) and the branch-loci clearance (the contour keeps a positive
distance from the curves ``+-kappa(k, A(s))``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContourError, DomainError, NonFiniteInputError
from .specfun import _kappa_raw

K_REF = 3.0
A_REF = 0.0012 + 0.0006j
C_REF = 1000j


@dataclass(frozen=True)
class ContourSpec:
    """Shape constants and truncation bound for one inversion contour.

    The same constants serve both spectral planes; ``label`` only tags
    which plane an instance is meant for in reports and portraits.
    """

    a: complex
    c: complex
    s_max: float = 1e4
    label: str = "A"

    def __post_init__(self):
        if self.a == 0:
            raise ContourError("contour constant a must be nonzero")
        if self.s_max <= 0:
            raise ContourError("s_max must be positive")


@dataclass(frozen=True)
class ShiftedContour:
    """A contour translated off the base by ``1j * offset`` (positive = above)."""

    base: ContourSpec
    offset: float

    def __post_init__(self):
        if self.offset == 0:
            raise DomainError("shifted contour requires a nonzero offset")

    def point(self, s):
        return contour_point(self.base, s) + 1j * self.offset

    def derivative(self, s):
        return contour_derivative(self.base, s)


def contour_point(spec: ContourSpec, s):
    """Contour point ``A(s) = s + s / (a (s^4 + c))``."""
    s = np.asarray(s, dtype=np.float64)
    if not np.all(np.isfinite(s)):
        raise NonFiniteInputError("contour parameter contains NaN/Inf")
    denom = spec.a * (s.astype(np.complex128) ** 4 + spec.c)
    if np.any(denom == 0):
        raise ContourError("degenerate contour constants: a (s^4 + c) = 0")
    out = s + s / denom
    return complex(out) if out.ndim == 0 else out


def contour_derivative(spec: ContourSpec, s):
    """Closed-form ``dA/ds = 1 + (c - 3 s^4) / (a (s^4 + c)^2)``."""
    s = np.asarray(s, dtype=np.float64)
    if not np.all(np.isfinite(s)):
        raise NonFiniteInputError("contour parameter contains NaN/Inf")
    s4 = s.astype(np.complex128) ** 4
    denom = spec.a * (s4 + spec.c) ** 2
    if np.any(denom == 0):
        raise ContourError("degenerate contour constants: a (s^4 + c) = 0")
    out = 1.0 + (spec.c - 3.0 * s4) / denom
    return complex(out) if out.ndim == 0 else out


def scaled_constants(k: float, k_ref: float = K_REF,
                     a_ref: complex = A_REF, c_ref: complex = C_REF):
    """Shape constants for wavenumber ``k`` by geometric similarity.

    ``A_k(s) = (k/k_ref) A_ref(s k_ref / k)`` maps the reference contour
    onto one whose indentation sits at ``-+k`` instead of ``-+k_ref``.
    """
    if k <= 0:
        raise DomainError("wavenumber must be positive")
    ratio = k_ref / k
    return a_ref * ratio ** 4, c_ref / ratio ** 4


def default_contour(k: float = K_REF, s_max: float = 1e4, label: str = "A") -> ContourSpec:
    """Reference contour for ``k = 3``; exact similarity scaling otherwise."""
    a, c = scaled_constants(k)
    return ContourSpec(a=a, c=c, s_max=s_max, label=label)


# --------------------------------------------------------------------------
# geometry helpers: projection, side classification
# --------------------------------------------------------------------------

_geometry_cache: dict = {}


def _geometry(spec: ContourSpec):
    """Cached monotonicity check and bump bound for a contour.

    Verifies once per constants that Re A(s) is strictly increasing
    (sampled at 10^4 points; required by side classification) and
    records max |A(s) - s| for projection bracketing.
    """
    key = (spec.a, spec.c)
    hit = _geometry_cache.get(key)
    if hit is not None:
        return hit
    s = np.linspace(-60.0, 60.0, 10001)
    pts = contour_point(spec, s)
    re = pts.real
    if np.any(np.diff(re) <= 0):
        raise ContourError(
            "Re A(s) is not strictly increasing; side classification "
            "is undefined for these constants"
        )
    bump = float(np.max(np.abs(pts - s)))
    info = {"bump": bump}
    _geometry_cache[key] = info
    return info


def contour_projection(spec: ContourSpec, z: complex) -> float:
    """Parameter ``s*`` with ``Re A(s*) = Re z``, found by bisection."""
    geo = _geometry(spec)
    x = float(np.real(z))
    pad = geo["bump"] + 1.0
    lo, hi = x - pad, x + pad
    flo = np.real(contour_point(spec, lo)) - x
    fhi = np.real(contour_point(spec, hi)) - x
    for _ in range(8):
        if flo < 0.0 < fhi:
            break
        pad *= 2.0
        lo, hi = x - pad, x + pad
        flo = np.real(contour_point(spec, lo)) - x
        fhi = np.real(contour_point(spec, hi)) - x
    else:
        raise ContourError("projection bracket not found; invalid contour")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        fm = np.real(contour_point(spec, mid)) - x
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14 * (1.0 + abs(x)):
            break
    return 0.5 * (lo + hi)


def classify_side(spec: ContourSpec, z: complex, tol: float = 1e-12) -> str:
    """Which side of the contour ``z`` lies on: ``"above"``, ``"on"`` or ``"below"``."""
    s_star = contour_projection(spec, z)
    gap = float(np.imag(z)) - float(np.imag(contour_point(spec, s_star)))
    if gap > tol:
        return "above"
    if gap < -tol:
        return "below"
    return "on"


def distance_to_contour(spec: ContourSpec, z: complex) -> float:
    """Vertical distance from ``z`` to the contour (signed magnitude).

    The contour graph has bounded slope for valid constants, so the
    vertical gap at the Re-projection is an adequate proxy for the true
    distance wherever the quadrature guard needs it.
    """
    s_star = contour_projection(spec, z)
    return abs(float(np.imag(z)) - float(np.imag(contour_point(spec, s_star))))


# --------------------------------------------------------------------------
# diagnostics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SignScanReport:
    """Result of the sign-compatibility scan over a parameter grid."""

    min_value: float
    s1_at_min: float
    s2_at_min: float
    n: int
    s_range: float

    @property
    def ok(self) -> bool:
        return self.min_value >= -1e-10


def sign_compatibility_scan(spec1: ContourSpec, spec2: ContourSpec, k: float,
                            n: int, s_range: float = 10.0) -> SignScanReport:
    """Scan ``Im(1/K(A1(s1), A2(s2)))`` on an n-by-n parameter grid.

    A valid contour pair keeps this quantity nonnegative, vanishing only
    at the origin of both planes; a negative minimum flags constants
    that are unusable for the factorisation.
    """
    if n < 2:
        raise DomainError("scan grid needs n >= 2")
    s = np.linspace(-s_range, s_range, n)
    a1 = contour_point(spec1, s)
    a2 = contour_point(spec2, s)
    inner = _kappa_raw(np.complex128(k), a2)  # kappa(k, A2(s2)), shape (n,)
    vals = _kappa_raw(inner[None, :], a1[:, None]).imag  # Im 1/K on the grid
    idx = np.unravel_index(np.argmin(vals), vals.shape)
    return SignScanReport(
        min_value=float(vals[idx]),
        s1_at_min=float(s[idx[0]]),
        s2_at_min=float(s[idx[1]]),
        n=n,
        s_range=s_range,
    )


def branch_loci(spec: ContourSpec, k: float, n: int, s_range: float = 30.0):
    """The loci ``+-kappa(k, A(s))`` sampled at ``n`` parameters.

    These curves are the branch-point trajectories the *other* plane's
    contour must avoid; returned as a flat array of ``2 n`` points for
    overlays and clearance measurements.
    """
    s = np.linspace(-s_range, s_range, n)
    kap = _kappa_raw(np.complex128(k), contour_point(spec, s))
    return np.concatenate([kap, -kap])


def loci_clearance(spec: ContourSpec, loci_spec: ContourSpec, k: float,
                   n: int = 1500, s_range: float = 30.0) -> float:
    """Minimum distance from contour samples to the branch loci set.

    This is the quantitative form of the visual validity argument: the
    factorisation integrals are safe as long as the margin is positive.
    """
    s = np.linspace(-s_range, s_range, n)
    pts = contour_point(spec, s)
    loci = branch_loci(loci_spec, k, n, s_range)
    d = np.abs(pts[:, None] - loci[None, :])
    return float(d.min())


@dataclass(frozen=True)
class ContourReport:
    """Validation summary produced by ``validate_contour``."""

    passes_origin: bool
    asymptotic_rel_error: float
    monotone: bool
    indentation_ok: bool
    scan: SignScanReport
    clearance: float

    @property
    def ok(self) -> bool:
        return (self.passes_origin and self.asymptotic_rel_error < 1e-6
                and self.monotone and self.indentation_ok
                and self.scan.ok and self.clearance > 0.0)


def validate_contour(spec: ContourSpec, k: float, scan_n: int = 120,
                     raise_on_failure: bool = False) -> ContourReport:
    """Run the acceptance diagnostics for a contour at wavenumber ``k``.

    Checks, in order: A(0) = 0; the relative asymptote |A(s)/s - 1| at
    s = +-10^3; Re-monotonicity (sampled, not proven); indentation above
    -k / below +k; the sign-compatibility scan; the loci clearance.
    """
    passes_origin = contour_point(spec, 0.0) == 0.0
    big = 1e3
    rel = max(abs(contour_point(spec, sgn * big) - sgn * big) / big for sgn in (-1, 1))
    try:
        _geometry(spec)
        monotone = True
    except ContourError:
        monotone = False
    indentation_ok = False
    if monotone:
        s_minus = contour_projection(spec, -k)
        s_plus = contour_projection(spec, +k)
        indentation_ok = (np.imag(contour_point(spec, s_minus)) > 0
                          and np.imag(contour_point(spec, s_plus)) < 0)
    scan = sign_compatibility_scan(spec, spec, k, scan_n,
                                   s_range=10.0 * k / K_REF)
    clearance = loci_clearance(spec, spec, k, s_range=30.0 * k / K_REF) if monotone else 0.0
    report = ContourReport(
        passes_origin=bool(passes_origin),
        asymptotic_rel_error=float(rel),
        monotone=monotone,
        indentation_ok=bool(indentation_ok),
        scan=scan,
        clearance=clearance,
    )
    if raise_on_failure and not report.ok:
        raise ContourError(f"contour failed validation: {report}")
    return report


def default_shift(spec: ContourSpec, k: float, target=None, floor: float = 1e-3):
    """Shift magnitude for the Cauchy contours serving a given target.

    Takes the smaller of 0.05 k (strip safety) and a ninth of the
    target's distance to the base contour, so that the target stays at
    least ten shifts away from the shifted contour; clamped below at
    ``floor``.  Callers re-halve it for the shift-independence check.
    """
    cap = 0.05 * k
    if target is None:
        return max(floor, cap)
    d = distance_to_contour(spec, target)
    return float(max(floor, min(cap, d / 9.0)))
