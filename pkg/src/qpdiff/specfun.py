"""Branch-controlled elementary functions of one complex variable.

Every kernel evaluation in this library rests on two primitives with
non-standard branch cuts:

* ``sqrt_down`` -- a square root whose cut runs down the negative
  imaginary axis,
* ``diag_log``  -- a logarithm whose cut runs diagonally down-left
  (along ``arg z = -3*pi/4``).

Both are realised as rotations of the principal (numpy) branch and are
never re-derived from raw ``arg`` arithmetic.  Everything else here is a
composition of the two: the two-sheeted ``kappa``, the spectral kernel
``big_k`` and its companion ``gamma_fn``, and the four explicit
half-plane factors of the kernel.

Conventions
-----------
The principal argument lives in ``(-pi, pi]``.  Values exactly on a
branch cut are defined by continuity from the ``arg -> pi`` side of the
rotated argument (the standard principal-branch convention, under which
``sqrt(-4) = 2j``); this makes results independent of the sign of a
floating-point zero.  ``big_k`` and ``half_factor`` refuse to evaluate
exactly on a cut of an *inner* composition and raise
``OnBranchCutError`` instead, because there the composite value is not
the limit of a single branch.

All functions are pure and reentrant, accept scalars or numpy arrays,
and raise ``NonFiniteInputError`` on NaN/Inf input rather than
propagating it.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, NonFiniteInputError, OnBranchCutError

_ROT_QUARTER = np.exp(0.25j * np.pi)  # e^{i pi/4}


def _as_complex(z, name="z"):
    """Coerce to a complex array, rejecting non-finite entries."""
    arr = np.asarray(z, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError(f"{name} contains NaN/Inf")
    return arr


def _maybe_scalar(result, scalar):
    return complex(result) if scalar else result


def _is_scalar(*originals):
    return all(np.ndim(v) == 0 and not isinstance(v, np.ndarray) for v in originals)


def _canonical_cut(w):
    """Force +0.0 imaginary part on the principal-branch cut ray.

    Makes sqrt/log of on-cut arguments independent of signed zeros,
    pinning the value to the limit from arg -> pi.
    """
    w = np.array(w, copy=True)
    on_cut = (w.real < 0.0) & (w.imag == 0.0)
    if np.any(on_cut):
        w[on_cut] = w[on_cut].real + 0.0j
    return w


def _on_down_cut(w):
    """True where w lies exactly on the open negative imaginary axis."""
    w = np.asarray(w)
    return (w.real == 0.0) & (w.imag < 0.0)


def sqrt_down(z):
    """Square root with branch cut on the negative imaginary axis.

    Computed as ``exp(i pi/4) * sqrt(-i z)`` with the principal square
    root, so it agrees with the real square root on the positive real
    axis and satisfies ``sqrt_down(z)**2 == z`` everywhere.
    """
    scalar = _is_scalar(z)
    z = _as_complex(z)
    w = _canonical_cut(-1j * z)
    return _maybe_scalar(_ROT_QUARTER * np.sqrt(w), scalar)


def diag_log(z):
    """Logarithm with branch cut along the ray ``arg z = -3*pi/4``.

    Computed as ``log(exp(-i pi/4) z) + i pi/4`` with the principal
    logarithm; agrees with the real logarithm on the positive real axis
    and is continuous across the negative real axis.
    """
    scalar = _is_scalar(z)
    z = _as_complex(z)
    if np.any(z == 0):
        raise DomainError("diag_log is undefined at z = 0")
    w = _canonical_cut(np.exp(-0.25j * np.pi) * z)
    return _maybe_scalar(np.log(w) + 0.25j * np.pi, scalar)


def _sqrt_down_raw(w):
    """sqrt_down on pre-validated complex arrays (no input checks)."""
    return _ROT_QUARTER * np.sqrt(_canonical_cut(-1j * w))


def _kappa_raw(kk, z):
    """kappa without the admissibility check; used inside compositions."""
    return _sqrt_down_raw(kk - z) * _sqrt_down_raw(kk + z)


def kappa(kk, z):
    """Two-cut square root of ``kk**2 - z**2`` normalised by ``kappa(kk, 0) = kk``.

    Defined as ``sqrt_down(kk - z) * sqrt_down(kk + z)`` for parameters
    in the closed upper-right quadrant (``Im kk >= 0``, ``Re kk > 0``).
    Its branch cuts in the z plane run vertically up from ``+kk`` and
    vertically down from ``-kk``.

    Raises
    ------
    DomainError
        If ``kk`` lies outside the admissible quadrant.
    """
    scalar = _is_scalar(kk, z)
    kk = _as_complex(kk, "kk")
    z = _as_complex(z)
    if np.any(kk.imag < 0.0) or np.any(kk.real <= 0.0):
        raise DomainError("kappa requires Im(kk) >= 0 and Re(kk) > 0")
    return _maybe_scalar(_kappa_raw(kk, z), scalar)


def _check_composition_cuts(*sqrt_args):
    """Signal evaluation exactly on a cut of an inner sqrt_down."""
    for w in sqrt_args:
        if np.any(_on_down_cut(w)):
            raise OnBranchCutError(
                "evaluation lies exactly on a branch cut; offset the point"
            )


def big_k(alpha1, alpha2, k):
    """Spectral kernel ``1 / kappa(kappa(k, alpha2), alpha1)``.

    Satisfies ``big_k(a1, a2, k)**2 == 1 / (k**2 - a1**2 - a2**2)`` with
    ``big_k(0, 0, k) == 1/k``.  The nested definition breaks the symmetry
    between the two spectral variables: the squares of ``big_k(a1, a2)``
    and ``big_k(a2, a1)`` agree everywhere but the values themselves may
    differ in sign away from the contours.

    Raises
    ------
    OnBranchCutError
        If the point lies exactly on a branch cut of the composition,
        or exactly on a branch point.
    """
    scalar = _is_scalar(alpha1, alpha2)
    a1 = _as_complex(alpha1, "alpha1")
    a2 = _as_complex(alpha2, "alpha2")
    k = _as_complex(k, "k")
    inner = _kappa_raw(k, a2)
    _check_composition_cuts(k - a2, k + a2, inner - a1, inner + a1)
    denom = _kappa_raw(inner, a1)
    if np.any(denom == 0):
        raise OnBranchCutError("kernel branch point hit exactly")
    return _maybe_scalar(1.0 / denom, scalar)


def gamma_fn(alpha1, alpha2, k):
    """Vertical-decay exponent ``-i / big_k``; ``gamma_fn(0, 0, k) = -i k``.

    Satisfies ``gamma_fn(a1, a2, k)**2 == a1**2 + a2**2 - k**2``.  The
    reciprocal of the kernel is evaluated directly as the nested kappa
    composition rather than by dividing twice.
    """
    scalar = _is_scalar(alpha1, alpha2)
    a1 = _as_complex(alpha1, "alpha1")
    a2 = _as_complex(alpha2, "alpha2")
    k = _as_complex(k, "k")
    inner = _kappa_raw(k, a2)
    _check_composition_cuts(k - a2, k + a2, inner - a1, inner + a1)
    return _maybe_scalar(-1j * _kappa_raw(inner, a1), scalar)


# Half-plane factor tags: first character is the alpha1 subscript, second
# the alpha2 subscript, 'o' marking the undistinguished variable.
HALF_FACTOR_TAGS = ("-o", "+o", "o-", "o+")


def half_factor(tag, alpha1, alpha2, k):
    """Explicit half-plane factors of the kernel.

    ``"-o"``: ``1/sqrt_down(kappa(k, a2) - a1)`` -- analytic in the lower
    alpha1 half-plane; ``"+o"``: ``1/sqrt_down(kappa(k, a2) + a1)`` -- in
    the upper one.  Their product reconstructs ``big_k`` pointwise.

    ``"o-"`` and ``"o+"`` swap the roles of the two variables
    (``1/sqrt_down(kappa(k, a1) -+ a2)``); they serve the analytic
    continuation of the quarter factors in the alpha1 plane.  Their
    product squares to ``big_k**2`` but may differ from ``big_k`` itself
    by a sign on parts of C^2.
    """
    scalar = _is_scalar(alpha1, alpha2)
    a1 = _as_complex(alpha1, "alpha1")
    a2 = _as_complex(alpha2, "alpha2")
    k = _as_complex(k, "k")
    if tag == "-o":
        inner_var, sign = a2, -1.0
    elif tag == "+o":
        inner_var, sign = a2, +1.0
    elif tag == "o-":
        inner_var, sign = a1, -1.0
    elif tag == "o+":
        inner_var, sign = a1, +1.0
    else:
        raise DomainError(
            f"unknown half-factor tag {tag!r}; expected one of {HALF_FACTOR_TAGS}"
        )
    outer_var = a1 if inner_var is a2 else a2
    arg = _kappa_raw(k, inner_var) + sign * outer_var
    _check_composition_cuts(k - inner_var, k + inner_var, arg)
    if np.any(arg == 0):
        raise OnBranchCutError("half-factor branch point hit exactly")
    return _maybe_scalar(1.0 / _sqrt_down_raw(arg), scalar)


def fourth_root_down(z):
    """``sqrt_down(sqrt_down(z))``, the quarter-factor prefactor root.

    Strictly the composition of two ``sqrt_down`` calls, never
    ``exp(log(z)/4)``: any other realisation introduces spurious branch
    cuts into the quarter factors.
    """
    return sqrt_down(sqrt_down(z))
