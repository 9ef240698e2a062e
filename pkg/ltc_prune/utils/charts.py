"""Self-contained SVG line and bar charts."""

import logging
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from ..errors import DataError

logger = logging.getLogger(__name__)

WIDTH, HEIGHT = 640, 360
MARGIN = 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")

Series = tuple[Sequence[float], Sequence[float]]


def _canvas(title: str) -> ET.Element:
    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(WIDTH),
        height=str(HEIGHT),
        viewBox=f"0 0 {WIDTH} {HEIGHT}",
    )
    ET.SubElement(svg, "rect", x="0", y="0", width=str(WIDTH), height=str(HEIGHT), fill="white")
    heading = ET.SubElement(svg, "text", x=str(WIDTH // 2), y="24", attrib={"text-anchor": "middle", "font-size": "16"})
    heading.text = title
    # Axes
    ET.SubElement(svg, "line", x1=str(MARGIN), y1=str(HEIGHT - MARGIN), x2=str(WIDTH - MARGIN), y2=str(HEIGHT - MARGIN), stroke="black")
    ET.SubElement(svg, "line", x1=str(MARGIN), y1=str(MARGIN), x2=str(MARGIN), y2=str(HEIGHT - MARGIN), stroke="black")
    return svg


def _label(svg: ET.Element, x: float, y: float, text: str, anchor: str = "middle", size: int = 11) -> None:
    el = ET.SubElement(svg, "text", x=f"{x:.1f}", y=f"{y:.1f}", attrib={"text-anchor": anchor, "font-size": str(size)})
    el.text = text


def _scale(values: np.ndarray, lo: float, hi: float, out_lo: float, out_hi: float) -> np.ndarray:
    span = hi - lo if hi > lo else 1.0
    return out_lo + (values - lo) / span * (out_hi - out_lo)


def _write(svg: ET.Element, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ET.ElementTree(svg).write(path, encoding="utf-8", xml_declaration=True)
    logger.debug(f"Chart written: {path}")
    return path


def line_chart(series: dict[str, Series], title: str, path: Union[str, Path], x_label: str = "", y_label: str = "") -> Path:
    """One polyline per named (x, y) series on shared axes."""
    arrays = {name: (np.asarray(x, dtype=float), np.asarray(y, dtype=float)) for name, (x, y) in series.items()}
    arrays = {name: xy for name, xy in arrays.items() if xy[0].size}
    if not arrays:
        raise DataError(f"No data for chart '{title}'", code="EMPTY_INPUT")

    xs = np.concatenate([x for x, _ in arrays.values()])
    ys = np.concatenate([y for _, y in arrays.values()])
    finite = ys[np.isfinite(ys)]
    if not finite.size:
        raise DataError(f"No finite values for chart '{title}'", code="EMPTY_INPUT")
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(finite.min()), float(finite.max())

    svg = _canvas(title)
    for i, (name, (x, y)) in enumerate(arrays.items()):
        px = _scale(x, x_lo, x_hi, MARGIN, WIDTH - MARGIN)
        py = _scale(y, y_lo, y_hi, HEIGHT - MARGIN, MARGIN)
        points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py) if np.isfinite(b))
        color = PALETTE[i % len(PALETTE)]
        ET.SubElement(svg, "polyline", points=points, fill="none", stroke=color, attrib={"stroke-width": "1.5"})
        _label(svg, WIDTH - MARGIN, MARGIN + 14 * (i + 1), name, anchor="end")
        svg[-1].set("fill", color)

    _label(svg, MARGIN, HEIGHT - MARGIN + 16, f"{x_lo:.4g}")
    _label(svg, WIDTH - MARGIN, HEIGHT - MARGIN + 16, f"{x_hi:.4g}")
    _label(svg, MARGIN - 4, HEIGHT - MARGIN, f"{y_lo:.4g}", anchor="end")
    _label(svg, MARGIN - 4, MARGIN + 4, f"{y_hi:.4g}", anchor="end")
    if x_label:
        _label(svg, WIDTH / 2, HEIGHT - 12, x_label)
    if y_label:
        _label(svg, 14, HEIGHT / 2, y_label)
    return _write(svg, path)


def bar_chart(names: Sequence[str], values: Sequence[float], title: str, path: Union[str, Path]) -> Path:
    """Vertical bars in the given order, one per name."""
    if not len(names):
        raise DataError(f"No data for chart '{title}'", code="EMPTY_INPUT")
    values = np.asarray(values, dtype=float)
    top = float(values.max()) if values.max() > 0 else 1.0

    svg = _canvas(title)
    slot = (WIDTH - 2 * MARGIN) / len(names)
    base = HEIGHT - MARGIN
    for i, (name, value) in enumerate(zip(names, values)):
        height = value / top * (HEIGHT - 2 * MARGIN)
        x = MARGIN + i * slot + slot * 0.15
        ET.SubElement(
            svg, "rect",
            x=f"{x:.2f}", y=f"{base - height:.2f}", width=f"{slot * 0.7:.2f}", height=f"{height:.2f}",
            fill=PALETTE[0], attrib={"class": "bar"},
        )
        _label(svg, x + slot * 0.35, base + 16, name, size=10)
        _label(svg, x + slot * 0.35, base - height - 4, f"{value:.3g}", size=9)
    return _write(svg, path)
