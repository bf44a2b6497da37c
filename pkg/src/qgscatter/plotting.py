"""Render sweep and average tables to PNG files.

Purely presentational: every number in a figure comes from a `Table`
that is also written as CSV, so plots never carry information the
delimited output lacks. Uses the Agg backend and never opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .sweeps import Table  # noqa: E402

_AVERAGE_HEADER = ("family", "n", "parameter", "value", "quad_error_estimate")


def _parse_cell(text: str):
    if text == "NA":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_table(path: str | Path) -> Table:
    """Load a CSV written by `Table.write` back into a `Table`."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = tuple(lines[0].split(","))
    rows = tuple(
        tuple(_parse_cell(cell) for cell in line.split(","))
        for line in lines[1:]
    )
    return Table(header, rows)


def _plot_sweep(table: Table, ax: plt.Axes) -> None:
    ks = table.column("k")
    for name in table.header[1:]:
        ys = [y if y is not None else float("nan")
              for y in table.column(name)]
        ax.plot(ks, ys, linewidth=1.0, label=name)
    ax.set_xlabel("k")
    ax.set_ylabel("value")


def _plot_average(table: Table, ax: plt.Axes) -> None:
    series: dict[str, tuple[list[float], list[float]]] = {}
    for row in table.rows:
        family, n, parameter, value = row[0], row[1], row[2], row[3]
        key = f"{family} n={n}"
        xs, ys = series.setdefault(key, ([], []))
        xs.append(parameter)
        ys.append(value)
    for key, (xs, ys) in series.items():
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.0, label=key)
    ax.set_xlabel("parameter")
    ax.set_ylabel("mean entropy (bits)")


def render_table(table: Table, path: str | Path, title: str = "") -> Path:
    """Write ``table`` as a PNG line plot; returns the path written."""
    fig, ax = plt.subplots(figsize=(8.0, 5.0), dpi=150)
    try:
        if table.header == _AVERAGE_HEADER:
            _plot_average(table, ax)
        elif table.header and table.header[0] == "k":
            _plot_sweep(table, ax)
        else:
            raise ValueError(f"cannot plot table with header {table.header}")
        if title:
            ax.set_title(title)
        ncols = len(table.header)
        ax.legend(fontsize="x-small", ncols=2 if ncols > 10 else 1)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        out = Path(path)
        fig.savefig(out)
    finally:
        plt.close(fig)
    return out


def render_csv(csv_path: str | Path, png_path: str | Path | None = None,
               title: str = "") -> Path:
    """Render an existing CSV next to itself (or to ``png_path``)."""
    csv_path = Path(csv_path)
    if png_path is None:
        png_path = csv_path.with_suffix(".png")
    return render_table(read_table(csv_path), png_path,
                        title=title or csv_path.stem)
