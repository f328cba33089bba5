"""Symmetric integral kernels k(x, xi), their file format, and Galerkin projection.

A kernel enters the dynamics through the integral operator
(K w)(x) = int_Omega k(x, xi) w(xi) dxi.  Four representations are supported:

* ZeroKernel          -- k = 0 (decoupled heat equation);
* SeparableKernel     -- k = (g(x) h(xi) + h(x) g(xi)) / 2 with g, h given by
                         sine-basis coefficients (symmetrized by construction);
* GaussianKernel      -- translation-invariant bump; `amplitude` is the
                         integrated mass of each cross-section, i.e.
                         k = amplitude / (width sqrt(2 pi)) *
                             exp(-(x - xi)^2 / (2 width^2)),
                         so amplitudes compare directly against the spectral
                         gap when judging stability of the coupled generator;
* GridKernel          -- tabulated midpoint samples on a uniform n x n grid,
                         bilinearly interpolated and extended by nearest value
                         in the half-cell margins.

Symmetry k(x, xi) = k(xi, x) is structural for the first three; grid kernels
must pass check_symmetry and are rejected (not silently symmetrized) when
they fail it at the caller's tolerance.
"""

import os
import re
from dataclasses import dataclass, field

import numpy as np

from .basis import composite_gauss_nodes
from .errors import ArgumentError, KernelFormatError, NumericError

SYMMETRY_LATTICE = 33  # fixed evaluation lattice for check_symmetry
DEFAULT_SYMMETRY_TOL = 1e-10


class KernelSpec:
    """Base class; concrete kernels implement evaluate(x, xi, length)."""

    def evaluate(self, x, xi, length):
        raise NotImplementedError


@dataclass(frozen=True)
class ZeroKernel(KernelSpec):
    def evaluate(self, x, xi, length):
        x, xi = np.broadcast_arrays(np.asarray(x, float), np.asarray(xi, float))
        return np.zeros_like(x)


@dataclass(frozen=True, eq=False)
class SeparableKernel(KernelSpec):
    """k = (g(x) h(xi) + h(x) g(xi)) / 2 with g = sum g_m psi_m, h = sum h_m psi_m."""

    g_coeffs: np.ndarray
    h_coeffs: np.ndarray

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.g_coeffs, dtype=float))
        h = np.atleast_1d(np.asarray(self.h_coeffs, dtype=float))
        if g.ndim != 1 or h.ndim != 1 or g.size == 0 or h.size == 0:
            raise ArgumentError("SeparableKernel: coefficient vectors must be non-empty 1-d")
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(h))):
            raise ArgumentError("SeparableKernel: coefficients must be finite")
        object.__setattr__(self, "g_coeffs", g)
        object.__setattr__(self, "h_coeffs", h)

    def _factor(self, coeffs, x, length):
        m = np.arange(1, coeffs.size + 1)
        modes = np.sqrt(2.0 / length) * np.sin(np.multiply.outer(np.asarray(x, float), m) * np.pi / length)
        return modes @ coeffs

    def evaluate(self, x, xi, length):
        x, xi = np.broadcast_arrays(np.asarray(x, float), np.asarray(xi, float))
        g_x = self._factor(self.g_coeffs, x, length)
        g_xi = self._factor(self.g_coeffs, xi, length)
        h_x = self._factor(self.h_coeffs, x, length)
        h_xi = self._factor(self.h_coeffs, xi, length)
        return 0.5 * (g_x * h_xi + h_x * g_xi)


@dataclass(frozen=True)
class GaussianKernel(KernelSpec):
    amplitude: float
    width: float

    def __post_init__(self):
        if not (np.isfinite(self.amplitude)):
            raise ArgumentError("GaussianKernel: amplitude must be finite")
        if not (np.isfinite(self.width) and self.width > 0):
            raise ArgumentError(f"GaussianKernel: width must be positive, got {self.width}")

    def evaluate(self, x, xi, length):
        x = np.asarray(x, float)
        xi = np.asarray(xi, float)
        peak = self.amplitude / (self.width * np.sqrt(2.0 * np.pi))
        return peak * np.exp(-((x - xi) ** 2) / (2.0 * self.width ** 2))


@dataclass(frozen=True, eq=False)
class GridKernel(KernelSpec):
    """Midpoint samples on (0, length)^2; midpoint m_i = (i + 1/2) length / n."""

    n: int
    length: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if self.n < 2:
            raise ArgumentError(f"GridKernel: need n >= 2, got {self.n}")
        if samples.shape != (self.n, self.n):
            raise ArgumentError(
                f"GridKernel: samples must be {self.n}x{self.n}, got {samples.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise ArgumentError("GridKernel: samples contain non-finite values")
        object.__setattr__(self, "samples", samples)

    @property
    def midpoints(self):
        return (np.arange(self.n) + 0.5) * self.length / self.n

    def evaluate(self, x, xi, length=None):
        # clamping to the midpoint hull realises the nearest-value extension
        x, xi = np.broadcast_arrays(np.asarray(x, float), np.asarray(xi, float))
        mids = self.midpoints
        h = self.length / self.n

        def locate(z):
            zc = np.clip(z, mids[0], mids[-1])
            idx = np.clip(((zc - mids[0]) / h).astype(int), 0, self.n - 2)
            frac = (zc - mids[idx]) / h
            return idx, np.clip(frac, 0.0, 1.0)

        ix, fx = locate(x)
        iy, fy = locate(xi)
        s = self.samples
        # single-multiply weights and cross terms grouped first keep the
        # evaluation bitwise invariant under (x, xi) swap for symmetric tables
        w00 = (1 - fx) * (1 - fy)
        w11 = fx * fy
        w10 = fx * (1 - fy)
        w01 = (1 - fx) * fy
        diag = s[ix, iy] * w00 + s[ix + 1, iy + 1] * w11
        cross = s[ix + 1, iy] * w10 + s[ix, iy + 1] * w01
        return diag + cross


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Galerkin matrix K[i, j] = int int k(x, xi) psi_i(x) psi_j(xi) dx dxi,
    together with the L^2(Omega x Omega) norm of the underlying kernel."""

    n_modes: int
    matrix: np.ndarray = field(repr=False)
    hs_of_k: float

    @property
    def frobenius(self):
        return float(np.linalg.norm(self.matrix))

    @property
    def spectral_radius(self):
        return float(np.max(np.abs(np.linalg.eigvalsh(self.matrix))))


# ---------------------------------------------------------------------------
# file format and parsing

def read_grid_kernel(path):
    """Parse a grid-kernel file.

    Line 1: `n ell`; lines 2..n+1: n whitespace-separated samples each,
    row i giving k at x-midpoint i over all xi-midpoints.  `#` starts a
    comment line.  Decimal point `.`, no thousands separators.
    """
    rows = []
    header = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                parts = line.split()
                if len(parts) != 2:
                    raise KernelFormatError(
                        f"read_grid_kernel: header must be 'n ell', got {line!r}", line=lineno)
                try:
                    n = int(parts[0])
                    ell = float(parts[1])
                except ValueError:
                    raise KernelFormatError(
                        f"read_grid_kernel: unparsable header {line!r}", line=lineno)
                if n < 2:
                    raise KernelFormatError(
                        f"read_grid_kernel: need n >= 2, got {n}", line=lineno)
                if not (np.isfinite(ell) and ell > 0):
                    raise KernelFormatError(
                        f"read_grid_kernel: bad domain length {parts[1]}", line=lineno)
                header = (n, ell, lineno)
                continue
            try:
                vals = [float(tok) for tok in line.split()]
            except ValueError:
                raise KernelFormatError(
                    f"read_grid_kernel: unparsable sample row", line=lineno)
            if len(vals) != header[0]:
                raise KernelFormatError(
                    f"read_grid_kernel: row has {len(vals)} samples, expected {header[0]}",
                    line=lineno)
            if not all(np.isfinite(v) for v in vals):
                raise KernelFormatError(
                    "read_grid_kernel: non-finite sample", line=lineno)
            rows.append((lineno, vals))
            if len(rows) == header[0]:
                break
    if header is None:
        raise KernelFormatError(f"read_grid_kernel: {path}: empty file", line=1)
    n, ell, _ = header
    if len(rows) != n:
        raise KernelFormatError(
            f"read_grid_kernel: expected {n} sample rows, found {len(rows)}",
            line=rows[-1][0] if rows else header[2])
    samples = np.array([vals for _, vals in rows])
    return GridKernel(n=n, length=ell, samples=samples)


def write_grid_kernel(path, kernel_fn, n, length, comment=None):
    """Write midpoint samples of kernel_fn(x, xi) in the grid file format."""
    mids = (np.arange(n) + 0.5) * length / n
    X, Y = np.meshgrid(mids, mids, indexing="ij")
    samples = np.asarray(kernel_fn(X, Y), dtype=float)
    with open(path, "w", encoding="ascii") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(f"{n} {length!r}\n")
        for row in samples:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")
    return GridKernel(n=n, length=length, samples=samples)


_INLINE_KV = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)=(.*)$")


def _parse_kv(tokens, op):
    out = {}
    for tok in tokens:
        m = _INLINE_KV.match(tok)
        if not m:
            raise ArgumentError(f"{op}: expected key=value, got {tok!r}")
        key, val = m.group(1), m.group(2)
        if key in out:
            raise ArgumentError(f"{op}: duplicate key {key!r}")
        out[key] = val
    return out


def _parse_coeffs(text, op):
    try:
        return np.array([float(t) for t in text.split(",") if t != ""])
    except ValueError:
        raise ArgumentError(f"{op}: unparsable coefficient list {text!r}")


def load_kernel(source):
    """Build a KernelSpec from an inline description or a grid file path.

    Inline forms: `zero`, `gaussian amplitude=<f> width=<f>`,
    `separable g=<c,c,..> [h=<c,..>]`, `grid file=<path>`.
    A bare string naming an existing file is read as a grid file.
    """
    if isinstance(source, KernelSpec):
        return source
    if isinstance(source, os.PathLike):
        return read_grid_kernel(os.fspath(source))
    if not isinstance(source, str):
        raise ArgumentError(f"load_kernel: unsupported source {type(source).__name__}")
    text = source.strip()
    if not text:
        raise ArgumentError("load_kernel: empty kernel description")
    tokens = text.split()
    variant = tokens[0].lower()
    if variant == "zero":
        if len(tokens) > 1:
            raise ArgumentError("load_kernel: 'zero' takes no parameters")
        return ZeroKernel()
    if variant == "gaussian":
        kv = _parse_kv(tokens[1:], "load_kernel[gaussian]")
        missing = {"amplitude", "width"} - set(kv)
        if missing:
            raise ArgumentError(f"load_kernel[gaussian]: missing {sorted(missing)}")
        extra = set(kv) - {"amplitude", "width"}
        if extra:
            raise ArgumentError(f"load_kernel[gaussian]: unknown keys {sorted(extra)}")
        try:
            return GaussianKernel(amplitude=float(kv["amplitude"]), width=float(kv["width"]))
        except ValueError:
            raise ArgumentError(f"load_kernel[gaussian]: unparsable parameters {kv}")
    if variant == "separable":
        kv = _parse_kv(tokens[1:], "load_kernel[separable]")
        if "g" not in kv:
            raise ArgumentError("load_kernel[separable]: missing g=")
        extra = set(kv) - {"g", "h"}
        if extra:
            raise ArgumentError(f"load_kernel[separable]: unknown keys {sorted(extra)}")
        g = _parse_coeffs(kv["g"], "load_kernel[separable]")
        h = _parse_coeffs(kv["h"], "load_kernel[separable]") if "h" in kv else g.copy()
        return SeparableKernel(g_coeffs=g, h_coeffs=h)
    if variant == "grid":
        kv = _parse_kv(tokens[1:], "load_kernel[grid]")
        if set(kv) != {"file"}:
            raise ArgumentError("load_kernel[grid]: expected exactly `grid file=<path>`")
        return read_grid_kernel(kv["file"])
    if os.path.exists(text):
        return read_grid_kernel(text)
    raise ArgumentError(f"load_kernel: unknown kernel description {source!r}")


# ---------------------------------------------------------------------------
# symmetry, projection, Hilbert-Schmidt norm

def check_symmetry(spec, basis, tol=0.0):
    """Sup over a fixed 33 x 33 lattice of |k(x, xi) - k(xi, x)|.

    Zero for the construction-symmetric variants.  The tolerance is the
    caller's acceptance threshold and does not change the returned defect.
    """
    if isinstance(spec, (ZeroKernel, SeparableKernel, GaussianKernel)):
        return 0.0
    ell = spec.length if isinstance(spec, GridKernel) else basis.domain.length
    grid = np.linspace(0.0, ell, SYMMETRY_LATTICE)
    X, Y = np.meshgrid(grid, grid, indexing="ij")
    vals = spec.evaluate(X, Y, ell)
    return float(np.max(np.abs(vals - vals.T)))


def _check_grid_against_basis(spec, basis, symmetry_tol, op):
    if abs(spec.length - basis.domain.length) > 1e-12 * max(1.0, basis.domain.length):
        raise ArgumentError(
            f"{op}: grid kernel declares length {spec.length} but the basis domain "
            f"has length {basis.domain.length}"
        )
    defect = check_symmetry(spec, basis)
    if defect > symmetry_tol:
        raise ArgumentError(
            f"{op}: grid kernel fails the symmetry check (defect {defect:.3e} > "
            f"tol {symmetry_tol:.3e}); symmetrize the data or fix the file"
        )


def _grid_axis_nodes(spec, basis):
    # panels aligned to the interpolation kinks (the sample midpoints),
    # subdivided so no panel exceeds a half-wavelength of the highest mode
    ell = basis.domain.length
    max_width = ell / basis.n_modes
    edges = np.concatenate(([0.0], spec.midpoints, [ell]))
    xs = []
    ws = []
    for a, b in zip(edges[:-1], edges[1:]):
        sub = max(1, int(np.ceil((b - a) / max_width)))
        x, w = composite_gauss_nodes(a, b, sub, basis.quadrature_order)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def _gaussian_axis_nodes(spec, basis):
    ell = basis.domain.length
    width = min(spec.width / 2.0, ell / basis.n_modes)
    panels = max(1, int(np.ceil(ell / width)))
    return composite_gauss_nodes(0.0, ell, panels, basis.quadrature_order)


def _mode_values(basis, x):
    ell = basis.domain.length
    m = np.arange(1, basis.n_modes + 1)
    return np.sqrt(2.0 / ell) * np.sin(np.outer(m, x) * np.pi / ell)


def project_kernel(spec, basis, symmetry_tol=DEFAULT_SYMMETRY_TOL):
    """Project a kernel onto the sine basis, returning its KernelMatrix.

    Separable kernels use the exact outer-product closed form; Gaussian and
    grid kernels use tensor Gauss-Legendre quadrature with panels resolving
    both the kernel scale and the highest-mode oscillation.  The result is
    symmetrized by averaging with its transpose (exact for symmetric input).
    """
    n = basis.n_modes
    hs = hs_norm(spec, basis)
    if isinstance(spec, ZeroKernel):
        return KernelMatrix(n_modes=n, matrix=np.zeros((n, n)), hs_of_k=hs)
    if isinstance(spec, SeparableKernel):
        g = np.zeros(n)
        h = np.zeros(n)
        gc = spec.g_coeffs[:n]
        hc = spec.h_coeffs[:n]
        g[: gc.size] = gc
        h[: hc.size] = hc
        K = 0.5 * (np.outer(g, h) + np.outer(h, g))
        return KernelMatrix(n_modes=n, matrix=(K + K.T) / 2, hs_of_k=hs)
    if isinstance(spec, GaussianKernel):
        x, w = _gaussian_axis_nodes(spec, basis)
    elif isinstance(spec, GridKernel):
        _check_grid_against_basis(spec, basis, symmetry_tol, "project_kernel")
        x, w = _grid_axis_nodes(spec, basis)
    else:
        raise ArgumentError(f"project_kernel: unsupported kernel {type(spec).__name__}")
    vals = spec.evaluate(x[:, None], x[None, :], basis.domain.length)
    psi_w = _mode_values(basis, x) * w
    K = psi_w @ vals @ psi_w.T
    if not np.all(np.isfinite(K)):
        bad = np.argwhere(~np.isfinite(K))[0]
        raise NumericError(
            f"project_kernel: non-finite entry at ({bad[0]}, {bad[1]})"
        )
    return KernelMatrix(n_modes=n, matrix=(K + K.T) / 2, hs_of_k=hs)


def hs_norm(spec, basis):
    """L^2(Omega x Omega) norm of the kernel.

    Closed form for Zero and Separable; tensor quadrature otherwise.  For a
    symmetrized separable kernel the closed form is

        ||k||^2 = (||g||^2 ||h||^2 + <g, h>^2) / 2

    in terms of the coefficient vectors.
    """
    if isinstance(spec, ZeroKernel):
        return 0.0
    if isinstance(spec, SeparableKernel):
        g = spec.g_coeffs
        h = spec.h_coeffs
        m = min(g.size, h.size)
        gh = float(g[:m] @ h[:m])
        return float(np.sqrt((g @ g) * (h @ h) / 2.0 + gh * gh / 2.0))
    if isinstance(spec, GaussianKernel):
        x, w = _gaussian_axis_nodes(spec, basis)
    elif isinstance(spec, GridKernel):
        x, w = _grid_axis_nodes(spec, basis)
    else:
        raise ArgumentError(f"hs_norm: unsupported kernel {type(spec).__name__}")
    vals = spec.evaluate(x[:, None], x[None, :], basis.domain.length)
    sq = float(w @ (vals ** 2) @ w)
    if not np.isfinite(sq):
        raise NumericError("hs_norm: quadrature produced a non-finite value")
    return float(np.sqrt(max(sq, 0.0)))
