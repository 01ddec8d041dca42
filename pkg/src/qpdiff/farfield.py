"""Far-field layer: incidence handling, the closed-form (++) candidate,
the compatibility residual, and the spherical diffraction coefficient.

With the forcing pole term

    g_pp(a) = 1 / ((alpha1 - a1) (alpha2 - a2)),

the closed-form candidate for the (++) spectral unknown (the remainder
term of the full split set to zero) is

    F_pp(a) = g_pp(a) / ( K_pp(a) K_mp(a1, alpha2)
                          K_mm(a1, a2) K_pm(alpha1, a2) ),

and the corner diffraction coefficient observed at spherical angles
(theta, phi) is

    f_d = k F_pp(-k cos(phi) sin(theta), -k sin(phi) sin(theta)) / (4 pi^2 i).

The candidate is knowingly inexact: the compatibility residual

    g_pp(a) [ 1/(K_mm(a1, alpha2) K_pm(a))
              - 1/(K_mm(a1, a2) K_pm(alpha1, a2)) ]

measures by how much, vanishing identically only on alpha2 = a2.

Observation points put the spectral variables on the real interval
(-k, k), partly below the inversion contours, so every factor access
goes through ``continue_factor``; evaluations whose route was not
"direct" are flagged ``continued`` in sweep output.
"""

from __future__ import annotations

import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .contour import ContourSpec, default_contour, validate_contour
from .errors import DomainError, QpdiffError
from .quadrature import QuadratureConfig
from .whfactor import MM, MP, PM, PP, continue_factor

#: default imaginary shift of positive spectral constants, as a fraction
#: of k.  Small enough that halving it moves the diffraction coefficient
#: by less than the quadrature noise floor (the shift-robustness guard).
EPS_SHIFT_FRACTION = 1e-8

#: |xi + xi0| (or eta analogue) below which a row is flagged near_pole.
NEAR_POLE_THRESHOLD = 1e-3

#: |Im f| / |Re f| below which a row is flagged real_branch.
REAL_BRANCH_THRESHOLD = 1e-3


@dataclass(frozen=True)
class Incidence:
    """Physical incidence and its derived spectral constants.

    ``a1, a2`` carry the stored (possibly shifted) values: a constant
    with positive real part receives a small negative imaginary part
    ``-i eps_shift`` so that the forcing pole sits off the real axis.
    """

    theta0: float
    phi0: float
    k: float
    eps_shift: float
    a1: complex
    a2: complex
    a3: float

    @property
    def xi0(self) -> float:
        return math.sin(self.theta0) * math.cos(self.phi0)

    @property
    def eta0(self) -> float:
        return math.sin(self.theta0) * math.sin(self.phi0)

    @property
    def is_degenerate(self) -> bool:
        """Normal incidence: both forcing poles collapse onto the origin."""
        return self.theta0 == 0.0


def make_incidence(theta0: float, phi0: float, k: float,
                   eps_shift: float | None = None) -> Incidence:
    """Build an ``Incidence``, enforcing the reduced angle ranges.

    Symmetry reduces the problem to ``theta0 in [0, pi/2]`` and
    ``phi0 in [-3 pi/4, pi/4]``; other inputs are redundant and
    rejected.  ``eps_shift`` defaults to ``EPS_SHIFT_FRACTION * k``.
    """
    if not (0.0 <= theta0 <= math.pi / 2):
        raise DomainError("theta0 must lie in [0, pi/2]")
    if not (-3 * math.pi / 4 <= phi0 <= math.pi / 4):
        raise DomainError("phi0 must lie in [-3 pi/4, pi/4]")
    if k <= 0:
        raise DomainError("wavenumber must be positive")
    if eps_shift is None:
        eps_shift = EPS_SHIFT_FRACTION * k
    if eps_shift < 0:
        raise DomainError("eps_shift must be nonnegative")
    a1 = k * math.sin(theta0) * math.cos(phi0)
    a2 = k * math.sin(theta0) * math.sin(phi0)
    a3 = k * math.cos(theta0)
    a1c = complex(a1, -eps_shift) if a1 > 0 else complex(a1)
    a2c = complex(a2, -eps_shift) if a2 > 0 else complex(a2)
    return Incidence(theta0=theta0, phi0=phi0, k=k, eps_shift=eps_shift,
                     a1=a1c, a2=a2c, a3=a3)


@dataclass(frozen=True)
class Observation:
    """Spherical observation direction restricted to the upper half-space."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi / 2):
            raise DomainError("theta must lie in [0, pi/2]")
        if not (0.0 <= self.phi < 2 * math.pi):
            raise DomainError("phi must lie in [0, 2 pi)")

    @property
    def xi(self) -> float:
        return math.cos(self.phi) * math.sin(self.theta)

    @property
    def eta(self) -> float:
        return math.sin(self.phi) * math.sin(self.theta)


def g_pp(alpha1, alpha2, inc: Incidence):
    """Forcing term ``1 / ((alpha1 - a1)(alpha2 - a2))``.

    Exact rational value with simple poles at the shifted incidence
    constants; evaluation at a pole raises.
    """
    d1 = np.asarray(alpha1, dtype=np.complex128) - inc.a1
    d2 = np.asarray(alpha2, dtype=np.complex128) - inc.a2
    if np.any(d1 == 0) or np.any(d2 == 0):
        raise DomainError("g_pp evaluated at its pole")
    out = 1.0 / (d1 * d2)
    return complex(out) if out.ndim == 0 else out


@dataclass
class PointValue:
    """A single far-field evaluation with its bookkeeping."""

    value: complex
    flag: str
    continued: bool


@dataclass
class ArcSweepResult:
    """Tabulated diffraction coefficient along one observation arc."""

    incidence: Incidence
    phi: float
    thetas: np.ndarray
    values: np.ndarray
    flags: list
    meta: dict = field(default_factory=dict)

    def to_csv(self, path: str) -> None:
        """Write the wire format: one row per theta, atomic replace."""
        lines = ["theta,phi,theta0,phi0,k,re_fd,im_fd,flag"]
        inc = self.incidence
        for theta, val, flag in zip(self.thetas, self.values, self.flags):
            lines.append(
                f"{theta:.17e},{self.phi:.17e},{inc.theta0:.17e},"
                f"{inc.phi0:.17e},{inc.k:.17e},{val.real:.17e},"
                f"{val.imag:.17e},{flag}"
            )
        payload = "\n".join(lines) + "\n"
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(payload)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @property
    def all_ok(self) -> bool:
        return all(f == "ok" for f in self.flags)


class AnsatzEvaluator:
    """Evaluator bound to one incidence, with the per-incidence cache.

    Quantities depending only on the incidence (``K_mm(a1, a2)``) are
    computed once on first use and reused by every point evaluation;
    arc sweeps populate the cache before fanning out.
    """

    def __init__(self, inc: Incidence, contour: ContourSpec | None = None,
                 cfg: QuadratureConfig | None = None,
                 validate: bool = False):
        self.inc = inc
        self.contour = contour if contour is not None else default_contour(inc.k)
        self.cfg = cfg if cfg is not None else QuadratureConfig()
        if validate:
            validate_contour(self.contour, inc.k, raise_on_failure=True)
        self._kmm_aa = None
        self._kmm_aa_continued = False

    # -- factor plumbing ---------------------------------------------------

    def _factor(self, label, a1, a2):
        value, route = continue_factor(label, a1, a2, self.inc.k,
                                       self.contour, self.cfg,
                                       with_route=True)
        return value, route != "direct"

    def _kmm_incidence(self):
        if self._kmm_aa is None:
            self._kmm_aa, self._kmm_aa_continued = self._factor(
                MM, self.inc.a1, self.inc.a2)
        return self._kmm_aa, self._kmm_aa_continued

    # -- spectral-plane quantities ------------------------------------------

    def fpp(self, alpha1, alpha2, with_continued: bool = False):
        """The closed-form (++) candidate at a spectral point."""
        inc = self.inc
        kpp, c1 = self._factor(PP, alpha1, alpha2)
        kmp, c2 = self._factor(MP, inc.a1, alpha2)
        kpm, c3 = self._factor(PM, alpha1, inc.a2)
        kmm, c4 = self._kmm_incidence()
        value = g_pp(alpha1, alpha2, inc) / (kpp * kmp * kmm * kpm)
        if with_continued:
            return value, (c1 or c2 or c3 or c4)
        return value

    def compatibility_residual(self, alpha1, alpha2) -> complex:
        """Residual of the compatibility equation with the remainder zeroed.

        Cancels exactly at ``alpha2 = a2``; elsewhere its size measures
        the inexactness of the closed-form candidate at this point.
        """
        inc = self.inc
        kmm_a2var, _ = self._factor(MM, inc.a1, alpha2)
        kpm_full, _ = self._factor(PM, alpha1, alpha2)
        kmm_aa, _ = self._kmm_incidence()
        kpm_a2fix, _ = self._factor(PM, alpha1, inc.a2)
        bracket = (1.0 / (kmm_a2var * kpm_full)
                   - 1.0 / (kmm_aa * kpm_a2fix))
        if bracket == 0:
            # exact cancellation (alpha2 == a2): the zero wins against the
            # forcing pole, which would otherwise trip the g_pp guard
            return 0.0 + 0.0j
        return g_pp(alpha1, alpha2, inc) * bracket

    # -- physical far field --------------------------------------------------

    def diffraction(self, obs: Observation) -> PointValue:
        """Diffraction coefficient at one observation direction.

        ``f_d = k F_pp(-k xi, -k eta) / (4 pi^2 i)``; the flag records
        pole proximity, the detected real-branch regime, or the use of
        analytic continuation (in that precedence), else ``ok``.
        """
        inc = self.inc
        alpha1 = -inc.k * obs.xi
        alpha2 = -inc.k * obs.eta
        near_pole = (abs(obs.xi + inc.xi0) < NEAR_POLE_THRESHOLD
                     or abs(obs.eta + inc.eta0) < NEAR_POLE_THRESHOLD)
        try:
            fpp, continued = self.fpp(alpha1, alpha2, with_continued=True)
        except QpdiffError:
            # A genuinely singular direction: the forcing pole itself, or
            # an arc boundary where the spectral point meets the circle
            # alpha1^2 + alpha2^2 = k^2 and a factor branch point is hit
            # exactly (theta = pi/2 endpoints).  Flagged, never fatal.
            return PointValue(value=complex(np.nan, np.nan),
                              flag="near_pole", continued=False)
        value = inc.k * fpp / (4j * np.pi ** 2)
        if near_pole:
            flag = "near_pole"
        elif abs(value.imag) < REAL_BRANCH_THRESHOLD * abs(value.real):
            flag = "real_branch"
        elif continued:
            flag = "continued"
        else:
            flag = "ok"
        return PointValue(value=value, flag=flag, continued=continued)

    def arc_sweep(self, phi: float, n_theta: int,
                  workers: int = 1) -> ArcSweepResult:
        """Sweep theta over [0, pi/2] at fixed phi.

        Rows are independent; a failing row is reported through its
        flag rather than aborting the sweep.  Output is deterministic
        for fixed inputs regardless of ``workers``.
        """
        if n_theta < 2:
            raise DomainError("arc sweep needs n_theta >= 2")
        self._kmm_incidence()  # populate the cache before any fan-out
        thetas = np.linspace(0.0, math.pi / 2, n_theta)

        def row(theta):
            return self.diffraction(Observation(theta=float(theta), phi=phi))

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                points = list(pool.map(row, thetas))
        else:
            points = [row(t) for t in thetas]
        values = np.array([p.value for p in points], dtype=np.complex128)
        flags = [p.flag for p in points]
        meta = {
            "k": self.inc.k,
            "contour_a": self.contour.a,
            "contour_c": self.contour.c,
            "abs_tol": self.cfg.abs_tol,
            "rel_tol": self.cfg.rel_tol,
            "s_max": self.cfg.s_max,
            "eps_shift": self.inc.eps_shift,
        }
        return ArcSweepResult(incidence=self.inc, phi=phi, thetas=thetas,
                              values=values, flags=flags, meta=meta)


def radlow_fpp(alpha1, alpha2, inc: Incidence,
               cfg: QuadratureConfig | None = None,
               contour: ContourSpec | None = None) -> complex:
    """Functional form of the (++) candidate for one-off evaluations."""
    return AnsatzEvaluator(inc, contour=contour, cfg=cfg).fpp(alpha1, alpha2)


def compatibility_residual(alpha1, alpha2, inc: Incidence,
                           cfg: QuadratureConfig | None = None,
                           contour: ContourSpec | None = None) -> complex:
    """Functional form of the compatibility residual."""
    ev = AnsatzEvaluator(inc, contour=contour, cfg=cfg)
    return ev.compatibility_residual(alpha1, alpha2)


def diffraction_coefficient(obs: Observation, inc: Incidence,
                            cfg: QuadratureConfig | None = None,
                            contour: ContourSpec | None = None) -> PointValue:
    """Functional form of the diffraction coefficient."""
    return AnsatzEvaluator(inc, contour=contour, cfg=cfg).diffraction(obs)


def arc_sweep(inc: Incidence, phi: float, n_theta: int,
              cfg: QuadratureConfig | None = None,
              contour: ContourSpec | None = None,
              workers: int = 1) -> ArcSweepResult:
    """Functional form of the arc sweep."""
    ev = AnsatzEvaluator(inc, contour=contour, cfg=cfg)
    return ev.arc_sweep(phi, n_theta, workers=workers)
