"""Static SVG figures of the descent sectors of e^P and the contour representatives of a cycle basis."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .algebra import PolyC  # noqa: E402
from .homology import CycleBasis  # noqa: E402

LOGGER = logging.getLogger(__name__)


def plot_surface(poly: PolyC, basis: CycleBasis, path: Union[str, Path], extent: Optional[float] = None) -> Path:
    """
    Draws the sign of Re P (descent sectors shaded), the central descent rays and the connectors of the basis.

    :param poly: (PolyC): The exponent P.
    :param basis: (CycleBasis): The cycles to draw.
    :param path: (Union[str, Path]): Where the SVG goes.
    :param extent: (Optional[float]): Half width of the plotted square; by default three times the connector radius, at least 2.
    :returns: (Path): The written file.
    """
    radius = max((abs(c.connector[0]) for c in basis), default=1.0)
    half = extent if extent is not None else max(2.0, 3 * radius)
    xs = np.linspace(-half, half, 301)
    grid = xs[None, :] + 1j * xs[:, None]
    real_part = np.real(poly(grid))

    fig, ax = plt.subplots(figsize=(5, 5))
    ax.contourf(xs, xs, np.sign(real_part), levels=[-1.5, 0, 1.5], colors=["#c6dbef", "#ffffff"])
    ax.contour(xs, xs, real_part, levels=[0], colors="grey", linewidths=0.5)
    for index, cycle in enumerate(basis):
        connector = np.asarray(cycle.connector)
        line, = ax.plot(connector.real, connector.imag, lw=1.2, label=f"gamma_{index + 1}")
        for ray in (cycle.inbound_ray, cycle.outbound_ray):
            end = ray.start + 2 * half * ray.direction
            ax.plot([ray.start.real, end.real], [ray.start.imag, end.imag], color=line.get_color(), lw=1.2)
    ax.set_xlim(-half, half)
    ax.set_ylim(-half, half)
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(f"descent sectors, degree {poly.degree}")
    if len(basis):
        ax.legend(loc="upper right", fontsize="small")
    target = Path(path)
    fig.savefig(target, format="svg")
    plt.close(fig)
    LOGGER.info("wrote %s", target)
    return target
