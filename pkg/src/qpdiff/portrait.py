"""Phase portraits (domain coloring) of the library's functions.

A portrait maps a complex-plane window to pixels, colouring each pixel
by the argument of the rendered function (hue = (arg f + pi)/(2 pi),
full saturation and value), or -- in ``sign`` mode -- red where the
selected real quantity is nonnegative and blue elsewhere.  Evaluation
failures are painted black; they are diagnostic signal (a branch cut
hit exactly, a quadrature breakdown), never interpolated over.

Output is binary PPM (P6): bit-exact golden files without any codec
dependence, trivially convertible downstream.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .contour import ContourSpec, contour_point, default_contour
from .errors import DomainError
from .grid_eval import factor_field
from .quadrature import QuadratureConfig
from .specfun import _kappa_raw, diag_log, sqrt_down
from .whfactor import MM, MP, PM, PP

#: quadrature tolerances used for portrait pixels; hue needs far less
#: than the factor identities do, and the relaxed setting keeps a
#: 400x400 quarter-factor portrait well inside its time budget.
PORTRAIT_CFG = QuadratureConfig(abs_tol=1e-8, rel_tol=1e-6)

_QUARTER = {"k_pp": PP, "k_pm": PM, "k_mp": MP, "k_mm": MM}


@dataclass(frozen=True)
class PortraitSpec:
    """Window, resolution, colouring mode and function binding."""

    window: tuple  # (re_min, re_max, im_min, im_max)
    resolution: tuple  # (width, height)
    function: str
    mode: str = "phase"
    params: tuple = ()  # frozen (key, value) pairs

    def __post_init__(self):
        re_min, re_max, im_min, im_max = self.window
        if not (re_min < re_max and im_min < im_max):
            raise DomainError("degenerate window")
        w, h = self.resolution
        if w < 2 or h < 2:
            raise DomainError("resolution must be at least 2x2")
        if self.mode not in ("phase", "sign"):
            raise DomainError("mode must be 'phase' or 'sign'")

    def param(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default


def pixel_grid(spec: PortraitSpec):
    """Pixel-centre sample points, row-major, top row first."""
    re_min, re_max, im_min, im_max = spec.window
    w, h = spec.resolution
    re = re_min + (np.arange(w) + 0.5) * (re_max - re_min) / w
    im = im_max - (np.arange(h) + 0.5) * (im_max - im_min) / h
    return re[None, :] + 1j * im[:, None]


def _fn_identity(z, contour, cfg, params):
    return z.astype(np.complex128)


def _fn_constant(z, contour, cfg, params):
    return np.full(z.shape, complex(params.get("value", 1.0)))


def _fn_sqrt_down(z, contour, cfg, params):
    return sqrt_down(z)


def _fn_diag_log(z, contour, cfg, params):
    out = np.empty(z.shape, dtype=np.complex128)
    zero = z == 0
    out[zero] = np.nan
    out[~zero] = diag_log(z[~zero])
    return out


def _fixed_point(params, contour):
    """The frozen variable of a one-plane slice: value or 'A:s' anchor."""
    if "alpha1" in params:
        return "alpha1", params["alpha1"]
    if "alpha2" in params:
        return "alpha2", params["alpha2"]
    raise DomainError("portrait function needs a frozen alpha1 or alpha2")


def _fn_kernel(z, contour, cfg, params):
    k = params["k"]
    which, val = _fixed_point(params, contour)
    if which == "alpha1":
        inner = _kappa_raw(np.complex128(k), z)
        return 1.0 / _kappa_raw(inner, np.complex128(val))
    inner = _kappa_raw(np.complex128(k), np.complex128(val))
    return 1.0 / _kappa_raw(inner, z)


def _fn_im_inv_k(z, contour, cfg, params):
    k = params["k"]
    which, val = _fixed_point(params, contour)
    if which == "alpha1":
        inv = _kappa_raw(_kappa_raw(np.complex128(k), z), np.complex128(val))
    else:
        inv = _kappa_raw(_kappa_raw(np.complex128(k), np.complex128(val)), z)
    return inv.imag + 0j


def _make_quarter(label):
    def run(z, contour, cfg, params):
        k = params["k"]
        alpha1 = params.get("alpha1")
        if alpha1 is None:
            raise DomainError("quarter-factor portraits are alpha2-plane "
                              "slices; freeze alpha1")
        vals, ok = factor_field(label, alpha1, z, k, contour, cfg)
        vals = vals.copy()
        vals[~ok] = np.nan
        return vals

    return run


REGISTRY = {
    "identity": _fn_identity,
    "constant": _fn_constant,
    "sqrt_down": _fn_sqrt_down,
    "diag_log": _fn_diag_log,
    "kernel": _fn_kernel,
    "im_inv_k": _fn_im_inv_k,
    "k_pp": _make_quarter(PP),
    "k_pm": _make_quarter(PM),
    "k_mp": _make_quarter(MP),
    "k_mm": _make_quarter(MM),
}


def _hsv_wheel_rgb(hue):
    """HSV (h, 1, 1) -> RGB bytes, vectorised."""
    h6 = (hue % 1.0) * 6.0
    i = np.floor(h6).astype(np.int64) % 6
    f = h6 - np.floor(h6)
    q = 1.0 - f
    r = np.choose(i, [1.0, q, 0.0, 0.0, f, 1.0])
    g = np.choose(i, [f, 1.0, 1.0, q, 0.0, 0.0])
    b = np.choose(i, [0.0, 0.0, f, 1.0, 1.0, q])
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8)


def render(spec: PortraitSpec, contour: ContourSpec | None = None,
           cfg: QuadratureConfig | None = None) -> np.ndarray:
    """Render a portrait to an (height, width, 3) uint8 RGB buffer."""
    fn = REGISTRY.get(spec.function)
    if fn is None:
        raise DomainError(f"unknown portrait function {spec.function!r}; "
                          f"known: {sorted(REGISTRY)}")
    params = dict(spec.params)
    params.setdefault("k", 3.0)
    if contour is None:
        contour = default_contour(params["k"])
    if cfg is None:
        cfg = PORTRAIT_CFG
    z = pixel_grid(spec)
    vals = np.asarray(fn(z, contour, cfg, params), dtype=np.complex128)
    ok = np.isfinite(vals)

    h, w = z.shape
    img = np.zeros((h, w, 3), dtype=np.uint8)
    if spec.mode == "phase":
        hue = (np.angle(vals[ok]) + np.pi) / (2.0 * np.pi)
        img[ok] = _hsv_wheel_rgb(hue)
    else:
        pos = ok & (vals.real >= 0.0)
        neg = ok & (vals.real < 0.0)
        img[pos] = (255, 0, 0)
        img[neg] = (0, 0, 255)
    return img


def write_image(buffer: np.ndarray, path: str) -> None:
    """Write an RGB buffer as binary PPM (P6), atomically."""
    if buffer.ndim != 3 or buffer.shape[2] != 3 or buffer.dtype != np.uint8:
        raise DomainError("expected an (h, w, 3) uint8 buffer")
    h, w = buffer.shape[:2]
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(header)
            handle.write(buffer.tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def contour_overlay_points(contour: ContourSpec, spec: PortraitSpec, n=2000):
    """Contour samples inside the window, for plotting overlays."""
    re_min, re_max, im_min, im_max = spec.window
    s = np.linspace(re_min - 3.0, re_max + 3.0, n)
    pts = contour_point(contour, s)
    keep = ((pts.real >= re_min) & (pts.real <= re_max)
            & (pts.imag >= im_min) & (pts.imag <= im_max))
    return pts[keep]
