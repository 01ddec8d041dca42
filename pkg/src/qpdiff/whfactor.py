"""Cauchy-integral machinery and the four quarter-plane kernel factors.

The kernel splits multiplicatively across both spectral planes,

    K = K_pp * K_pm * K_mp * K_mm,

with each *quarter factor* analytic on a product of half-planes fixed by
its label (first character: alpha1 side, second: alpha2 side; ``p`` for
above the contour, ``m`` for below).  Each factor is an exponentiated
Cauchy integral along a shifted inversion contour,

    K_s1,s2(a1, a2) = fourth_root_down(k +- a2)^-1
        * exp( -+1/(4 i pi) * int diag_log(1 +- a1/kappa(k, z)) / (z - a2) dz ),

where the sign inside the log is the alpha1 subscript, and the alpha2
subscript selects the shifted contour (below for ``p``, above for
``m``), the prefactor argument (``k + a2`` vs ``k - a2``) and the
exponent sign.  The diagonally-cut logarithm and the strict
double-``sqrt_down`` prefactor are what keep the integrand cut-free
along the contour; both choices are checked at run time rather than
assumed.

Also here: the generic sum-split and multiplicative factorisation of a
function analytic on a strip around the contour (``cauchy_split``,
``cauchy_factorize``), and ``continue_factor``, which extends each
quarter factor past its natural domain by dividing the explicit
half-plane factors by the complementary quarter factor.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .contour import (ContourSpec, ShiftedContour, classify_side,
                      contour_point, contour_projection, default_shift)
from .errors import (BranchCrossingError, ContinuationError, DomainError,
                     NonFiniteInputError, WindingError)
from .quadrature import QuadratureConfig, integrate_over_shifted
from .specfun import _kappa_raw, diag_log, fourth_root_down, half_factor

_ROT_BACK = np.exp(-0.25j * np.pi)  # undoes the diag_log cut rotation


@dataclass(frozen=True)
class FactorLabel:
    """One of the four quarter factors and its analyticity bookkeeping."""

    tag: str  # 'pp', 'pm', 'mp', 'mm'

    def __post_init__(self):
        if self.tag not in ("pp", "pm", "mp", "mm"):
            raise DomainError(f"unknown factor tag {self.tag!r}")

    @property
    def sign1(self) -> int:
        """Sign of alpha1 inside the log (+1 for 'p?', -1 for 'm?')."""
        return +1 if self.tag[0] == "p" else -1

    @property
    def side2(self) -> int:
        """Natural alpha2 half-plane (+1 above the contour, -1 below)."""
        return +1 if self.tag[1] == "p" else -1

    @property
    def side1(self) -> int:
        """Natural alpha1 half-plane."""
        return self.sign1

    def flip1(self) -> "FactorLabel":
        return FactorLabel(("m" if self.tag[0] == "p" else "p") + self.tag[1])

    def flip2(self) -> "FactorLabel":
        return FactorLabel(self.tag[0] + ("m" if self.tag[1] == "p" else "p"))


PP = FactorLabel("pp")
PM = FactorLabel("pm")
MP = FactorLabel("mp")
MM = FactorLabel("mm")
ALL_LABELS = (PP, PM, MP, MM)

_SIDE_NAME = {+1: "above", -1: "below"}
_HALF_CH = {"p": "+", "m": "-"}


def _side_ok(side_name: str, required: int) -> bool:
    return side_name == "on" or side_name == _SIDE_NAME[required]


def _shifted_for(contour: ContourSpec, side2: int, eps: float) -> ShiftedContour:
    """The integration contour serving an alpha2 half-plane: opposite shift."""
    return ShiftedContour(contour, -eps if side2 > 0 else +eps)


def _projection_breaks(contour: ContourSpec, target: complex, eps: float):
    """Panel edges clustered around the target's contour projection."""
    s_star = contour_projection(contour, target)
    widths = eps * np.array([1.0, 4.0, 16.0, 64.0, 256.0])
    return np.concatenate([[s_star], s_star + widths, s_star - widths])


# --------------------------------------------------------------------------
# generic sum-split and factorisation (strip functions)
# --------------------------------------------------------------------------

def _split_guard(contour: ShiftedContour, target: complex):
    """Reject targets the Cauchy kernel cannot survive.

    The sum-split formulae put targets on the base contour, one shift
    away from the integration path, which adaptive refinement resolves
    comfortably; what destroys accuracy is a target hugging the shifted
    contour itself.  Hence the guard triggers on separations below half
    a shift, asking the caller for a different eps.
    """
    base = contour.base
    s_star = contour_projection(base, target)
    gap = abs(complex(target) - (contour_point(base, s_star) + 1j * contour.offset))
    if gap < 0.5 * abs(contour.offset):
        raise DomainError(
            f"target is within half a shift of the shifted contour "
            f"(gap {gap:.3e}, eps {abs(contour.offset):.3e}); "
            "request a different eps"
        )


def cauchy_split(f, target, side: str, contour: ShiftedContour,
                 cfg: QuadratureConfig, scale: float = 3.0) -> complex:
    """One half of the additive split of a strip-analytic function.

    ``side="plus"`` returns the part analytic above the base contour,
    computed as ``1/(2 i pi) int f(z)/(z - target) dz`` along the
    below-shifted copy; ``side="minus"`` the part analytic below, with
    the opposite sign along the above-shifted copy.  ``f`` must decay
    like ``|z|^-lambda`` (lambda > 0) on the strip.
    """
    target = complex(target)
    if not np.isfinite(target):
        raise NonFiniteInputError("target contains NaN/Inf")
    if side == "plus":
        if contour.offset >= 0:
            raise DomainError("plus part integrates over the below-shifted contour")
        coef = 1.0 / (2j * np.pi)
    elif side == "minus":
        if contour.offset <= 0:
            raise DomainError("minus part integrates over the above-shifted contour")
        coef = -1.0 / (2j * np.pi)
    else:
        raise DomainError("side must be 'plus' or 'minus'")
    _split_guard(contour, target)

    def integrand(z):
        return np.asarray(f(z), dtype=np.complex128) / (z - target)

    breaks = _projection_breaks(contour.base, target, abs(contour.offset))
    res = integrate_over_shifted(integrand, contour, cfg, scale,
                                 inner_breaks=breaks)
    return coef * res.value


def cauchy_factorize(g, target, side: str, contour: ShiftedContour,
                     cfg: QuadratureConfig, scale: float = 3.0) -> complex:
    """One factor of the multiplicative split of a strip function.

    Requires ``g -> 1`` at the strip ends and ``g`` nonvanishing with
    single-valued log along the contour; the winding number of ``g`` is
    measured on the quadrature samples and a nonzero value raises
    ``WindingError`` rather than returning a wrong branch.
    """
    target = complex(target)
    if side == "plus":
        if contour.offset >= 0:
            raise DomainError("plus factor integrates over the below-shifted contour")
        coef = 1.0 / (2j * np.pi)
    elif side == "minus":
        if contour.offset <= 0:
            raise DomainError("minus factor integrates over the above-shifted contour")
        coef = -1.0 / (2j * np.pi)
    else:
        raise DomainError("side must be 'plus' or 'minus'")
    _split_guard(contour, target)

    samples = []

    def integrand(z):
        gz = np.asarray(g(z), dtype=np.complex128)
        if np.any(gz == 0):
            raise DomainError("g vanishes on the contour; cannot factorise")
        samples.append((np.asarray(z).real.copy(), gz.copy()))
        return np.log(gz) / (z - target)

    breaks = _projection_breaks(contour.base, target, abs(contour.offset))
    res = integrate_over_shifted(integrand, contour, cfg, scale,
                                 inner_breaks=breaks)

    re = np.concatenate([s[0] for s in samples])
    gz = np.concatenate([s[1] for s in samples])
    order = np.argsort(re)
    unwrapped = np.unwrap(np.angle(gz[order]))
    winding = (unwrapped[-1] - unwrapped[0]) / (2.0 * np.pi)
    if abs(winding) > 0.5:
        raise WindingError(
            f"log g is not single-valued along the contour "
            f"(winding number {winding:+.2f})"
        )
    return np.exp(coef * res.value)


# --------------------------------------------------------------------------
# quarter factors
# --------------------------------------------------------------------------

def _check_log_track(rotated_samples):
    """Detect a crossing of the diagonal log cut along the contour.

    ``rotated_samples`` are ``exp(-i pi/4) * w`` ordered by contour
    parameter; the cut of ``diag_log`` maps to the negative real axis,
    so a sign change of the imaginary part while the real part is
    negative marks a crossing.
    """
    im = rotated_samples.imag
    re = rotated_samples.real
    crossed = (im[:-1] * im[1:] < 0.0) & ((re[:-1] < 0.0) | (re[1:] < 0.0))
    if np.any(crossed):
        raise BranchCrossingError(
            "the log argument crossed its diagonal branch cut along the "
            "contour; the point is outside this factor's reachable domain"
        )


def quarter_factor(label: FactorLabel, alpha1, alpha2, k: float,
                   contour: ContourSpec, cfg: QuadratureConfig,
                   eps: float | None = None,
                   enforce_domain: bool = True) -> complex:
    """One quarter factor by its own integral representation.

    Valid for points in the label's natural domain (boundary included);
    callers needing other points go through ``continue_factor``.  The
    shift ``eps`` defaults to the guarded rule in
    ``contour.default_shift`` and is reduced automatically for targets
    close to the contour.

    Raises
    ------
    DomainError
        If the point is outside the label's natural domain.
    BranchCrossingError
        If the log argument vanishes on, or crosses its cut along, the
        integration contour (the factorisation does not reach there).
    """
    a1 = complex(alpha1)
    a2 = complex(alpha2)
    if not (np.isfinite(a1) and np.isfinite(a2)):
        raise NonFiniteInputError("spectral point contains NaN/Inf")
    if enforce_domain:
        if not _side_ok(classify_side(contour, a1), label.side1):
            raise DomainError(
                f"alpha1 outside the natural domain of K_{label.tag}; "
                "use continue_factor"
            )
        if not _side_ok(classify_side(contour, a2), label.side2):
            raise DomainError(
                f"alpha2 outside the natural domain of K_{label.tag}; "
                "use continue_factor"
            )

    pref_arg = k + a2 if label.side2 > 0 else k - a2
    pref = fourth_root_down(pref_arg)
    if a1 == 0:
        # log argument is identically 1: the integral vanishes exactly.
        return 1.0 / pref

    if eps is None:
        eps = default_shift(contour, k, a2)
    shifted = _shifted_for(contour, label.side2, eps)
    coef = -1.0 / (4j * np.pi) if label.side2 > 0 else 1.0 / (4j * np.pi)
    sign1 = label.sign1

    samples = []

    def integrand(z):
        w = 1.0 + sign1 * a1 / _kappa_raw(np.complex128(k), z)
        if np.any(np.abs(w) < 1e-12):
            raise BranchCrossingError(
                "log argument vanished on the integration contour"
            )
        samples.append((np.asarray(z).real.copy(), w.copy()))
        return diag_log(w) / (z - a2)

    breaks = _projection_breaks(contour, a2, eps)
    if abs(a1) > 4.0 * k:
        # the log term stays O(log) out to |z| ~ |alpha1|
        hump = abs(a1) * np.array([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])
        breaks = np.concatenate([breaks, hump])
    res = integrate_over_shifted(integrand, shifted, cfg, k,
                                 inner_breaks=breaks)

    re = np.concatenate([s[0] for s in samples])
    ws = np.concatenate([s[1] for s in samples])
    _check_log_track((_ROT_BACK * ws)[np.argsort(re)])
    return np.exp(coef * res.value) / pref


@functools.lru_cache(maxsize=64)
def continuation_constant(label: FactorLabel, k: float, contour: ContourSpec,
                          cfg: QuadratureConfig) -> complex:
    """Branch constant of the alpha1-plane continuation, measured once.

    The swapped half-plane factors give ``K_label = C * K_o? / K_comp``
    with ``comp`` the alpha1-flipped label; no closed form fixes ``C``,
    so it is measured on an overlap set (alpha1 on the contour, alpha2
    strictly inside the natural half-plane), checked to be constant and
    unimodular, and then applied uniformly.

    Raises
    ------
    ContinuationError
        If the measured ratios are not constant or not unimodular.
    """
    comp = label.flip1()
    tag2 = label.tag[1]
    ratios = []
    for s1 in (-5.0, -1.5, 1.5, 5.0):
        a1 = contour_point(contour, s1)
        for s2 in (-2.2, 0.0, 3.0):
            a2 = contour_point(contour, s2) + 1j * label.side2 * 0.8 * k / 3.0
            direct = quarter_factor(label, a1, a2, k, contour, cfg)
            comp_val = quarter_factor(comp, a1, a2, k, contour, cfg)
            swapped = half_factor("o" + _HALF_CH[tag2], a1, a2, k)
            ratios.append(direct * comp_val / swapped)
    ratios = np.array(ratios)
    c = ratios.mean()
    if np.max(np.abs(ratios - c)) > 2e-4 or abs(abs(c) - 1.0) > 2e-4:
        raise ContinuationError(
            f"alpha1 continuation of K_{label.tag} failed its branch "
            f"consistency check: ratios {ratios}"
        )
    return complex(c)


def continue_factor(label: FactorLabel, alpha1, alpha2, k: float,
                    contour: ContourSpec, cfg: QuadratureConfig,
                    with_route: bool = False):
    """A quarter factor anywhere off the explicit half-factor cuts.

    Dispatches on which side of the contour each variable falls:

    * natural domain: the factor's own integral;
    * alpha2 on the wrong side: divide the explicit alpha1-plane
      half-factor by the complementary (alpha2-flipped) quarter factor,
      whose integral is valid there;
    * alpha1 on the wrong side: divide the swapped half-plane factor by
      the alpha1-flipped quarter factor, times the session branch
      constant;
    * both wrong: compose the two continuations.

    Returns the complex value, or ``(value, route)`` when
    ``with_route`` is set.
    """
    a1 = complex(alpha1)
    a2 = complex(alpha2)
    ok1 = _side_ok(classify_side(contour, a1), label.side1)
    ok2 = _side_ok(classify_side(contour, a2), label.side2)
    if ok1 and ok2:
        value, route = quarter_factor(label, a1, a2, k, contour, cfg), "direct"
    elif ok1:
        own_half = half_factor(_HALF_CH[label.tag[0]] + "o", a1, a2, k)
        comp = quarter_factor(label.flip2(), a1, a2, k, contour, cfg)
        value, route = own_half / comp, "alpha2-div"
    else:
        cst = continuation_constant(label, k, contour, cfg)
        swapped = half_factor("o" + _HALF_CH[label.tag[1]], a1, a2, k)
        if ok2:
            comp = quarter_factor(label.flip1(), a1, a2, k, contour, cfg)
            value, route = cst * swapped / comp, "alpha1-div"
        else:
            comp = continue_factor(label.flip1(), a1, a2, k, contour, cfg)
            value, route = cst * swapped / comp, "alpha1+alpha2"
    return (value, route) if with_route else value
