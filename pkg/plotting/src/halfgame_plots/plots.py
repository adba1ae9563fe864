"""Chart builders: win probability vs bias, and winning-round counts vs n.

Rendering is file-to-file and deterministic: identical inputs give identical
SVG bytes (PNG may differ in compressor metadata only).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .reader import SchemaError, read_sweep  # noqa: E402

#: asymptotic threshold bias as a fraction of n, per game
ASYMPTOTIC_FRACTION = {
    "pm": 1.0,
    "mindeg1": 1.0,
    "ham": 0.5,
    "conn": 0.5,
    "mindeg2": 0.5,
}

matplotlib.rcParams["svg.hashsalt"] = "halfgame-plots"


@dataclass
class PlotSpec:
    input_paths: list[str]
    output_path: str
    overlay_threshold: float | None = None
    overlay_auto: bool = False
    normalize_bias: bool = True
    title: str | None = None
    xlabel: str | None = None
    ylabel: str = "Maker win rate"


@dataclass
class CurveData:
    """What actually got drawn for one input file (kept for testing)."""

    label: str
    x: list[float]
    y: list[float]
    lo: list[float]
    hi: list[float]
    threshold_x: float | None = None
    markers: list[float] = field(default_factory=list)


def _crossing(x: list[float], y: list[float]) -> float | None:
    """Linear-interpolated first crossing of y = 1/2 along the curve."""
    for i in range(len(x) - 1):
        y0, y1 = y[i], y[i + 1]
        if y0 >= 0.5 >= y1:
            if y0 == y1:
                return x[i]
            return x[i] + (y0 - 0.5) * (x[i + 1] - x[i]) / (y0 - y1)
    return None


def build_curves(spec: PlotSpec) -> list[CurveData]:
    curves = []
    for path in spec.input_paths:
        sweep = read_sweep(path)
        scale = sweep.n if (spec.normalize_bias and sweep.n) else 1
        x = [r.bias / scale for r in sweep.rows]
        curve = CurveData(
            label=sweep.label,
            x=x,
            y=[r.win_rate for r in sweep.rows],
            lo=[r.wilson_lo for r in sweep.rows],
            hi=[r.wilson_hi for r in sweep.rows],
        )
        thr = sweep.estimated_threshold
        if thr is not None:
            curve.threshold_x = thr / scale
        if spec.overlay_auto:
            frac = ASYMPTOTIC_FRACTION.get(sweep.meta.get("game"))
            if frac is not None and sweep.n:
                curve.markers.append(frac if scale != 1 else frac * sweep.n)
        curves.append(curve)
    if spec.overlay_threshold is not None:
        for c in curves:
            c.markers.append(spec.overlay_threshold)
    return curves


def plot_sweep(spec: PlotSpec) -> list[CurveData]:
    """Render win-rate curves with Wilson bands; returns the drawn series."""
    curves = build_curves(spec)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for curve in curves:
        (line,) = ax.plot(curve.x, curve.y, marker="o", label=curve.label)
        ax.fill_between(curve.x, curve.lo, curve.hi, alpha=0.2,
                        color=line.get_color())
        if curve.threshold_x is not None:
            ax.axvline(curve.threshold_x, color=line.get_color(),
                       linestyle=":", alpha=0.8)
        for m in curve.markers:
            ax.axvline(m, color="grey", linestyle="--", alpha=0.8)
    ax.axhline(0.5, color="black", linewidth=0.6, alpha=0.5)
    ax.set_xlabel(
        spec.xlabel
        or ("Breaker bias / n" if spec.normalize_bias else "Breaker bias")
    )
    ax.set_ylabel(spec.ylabel)
    ax.set_ylim(-0.02, 1.02)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    _save(fig, spec.output_path)
    plt.close(fig)
    return curves


def plot_rounds(input_paths: list[str], output_path: str,
                title: str | None = None) -> list[tuple[int, float]]:
    """Winning-round count against n, one point per sweep file.

    Uses the roundsMean of each file's lowest bias with at least one win;
    all numbers come straight from the CSV.
    """
    points = []
    for path in input_paths:
        sweep = read_sweep(path)
        if sweep.n is None:
            raise SchemaError(f"{path}: rounds chart needs an 'n' in the sidecar")
        for row in sweep.rows:
            if row.rounds_mean is not None:
                points.append((sweep.n, row.rounds_mean))
                break
    points.sort()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([p[0] for p in points], [p[1] for p in points], marker="s")
    ax.set_xlabel("n")
    ax.set_ylabel("Maker moves per win (lowest swept bias)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    _save(fig, output_path)
    plt.close(fig)
    return points


def _save(fig, path: str) -> None:
    # strip volatile metadata so identical inputs give identical bytes
    if path.endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    elif path.endswith(".png"):
        fig.savefig(path, metadata={"Software": None})
    else:
        fig.savefig(path)
