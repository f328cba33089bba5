"""Bundled reference kernels and the default experiment configuration."""

from importlib import resources

import numpy as np

from .kernels import GaussianKernel, SeparableKernel, ZeroKernel, read_grid_kernel


def data_path(name):
    return resources.files("nullheat") / "data" / name


def grid_demo_kernel():
    with resources.as_file(data_path("grid_demo.txt")) as path:
        return read_grid_kernel(path)


def grid_demo_function(x, xi):
    """The smooth symmetric function the bundled grid file samples."""
    x = np.asarray(x, float)
    xi = np.asarray(xi, float)
    return (2.5 * np.exp(-((x - xi) ** 2) / (2 * 0.18 ** 2))
            + 1.2 * np.sin(np.pi * x) * np.sin(np.pi * xi))


def bundled_kernels():
    """The five reference kernels every certificate runs over."""
    return [
        ("zero", ZeroKernel()),
        ("separable-mode1", SeparableKernel(g_coeffs=np.array([1.0]),
                                            h_coeffs=np.array([1.0]))),
        ("gaussian-stable", GaussianKernel(amplitude=5.0, width=0.2)),
        ("gaussian-unstable", GaussianKernel(amplitude=20.0, width=0.15)),
        ("grid-demo", grid_demo_kernel()),
    ]


def default_config_path():
    return data_path("default.cfg")
