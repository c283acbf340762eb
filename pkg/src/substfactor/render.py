"""Render patterns as color grids (png/svg/pdf via matplotlib, plain ppm)."""

from __future__ import annotations

import os

from .core import Alphabet, Pattern

# fixed palette, letter index -> RGB
PALETTE = [
    (31, 119, 180), (255, 127, 14), (44, 160, 44), (214, 39, 40),
    (148, 103, 189), (140, 86, 75), (227, 119, 194), (127, 127, 127),
    (188, 189, 34), (23, 190, 207),
]


def _index_rows(pattern: Pattern, alphabet: Alphabet) -> list[list[int]]:
    if pattern.dim == 1:
        return [[alphabet.index(c) for c in pattern.cells]]
    return [[alphabet.index(c) for c in row] for row in pattern.rows()]


def write_ppm(pattern: Pattern, alphabet: Alphabet, path: str) -> None:
    rows = _index_rows(pattern, alphabet)
    h, w = len(rows), len(rows[0])
    lines = ["P3", f"{w} {h}", "255"]
    for row in rows:
        lines.append(" ".join(" ".join(str(c) for c in PALETTE[i % len(PALETTE)])
                              for i in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def render_pattern(pattern: Pattern, alphabet: Alphabet, path: str) -> None:
    """Write the pattern as an image; the format follows the extension."""
    ext = os.path.splitext(path)[1].lower()
    if ext == ".ppm":
        write_ppm(pattern, alphabet, path)
        return
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.colors import ListedColormap

    rows = _index_rows(pattern, alphabet)
    colors = [tuple(c / 255 for c in PALETTE[i % len(PALETTE)])
              for i in range(len(alphabet))]
    fig, ax = plt.subplots(figsize=(6, 6 * len(rows) / len(rows[0])))
    ax.imshow(rows, cmap=ListedColormap(colors), vmin=0, vmax=len(alphabet) - 1,
              interpolation="nearest")
    ax.set_axis_off()
    fig.savefig(path, bbox_inches="tight", pad_inches=0.05, dpi=200)
    plt.close(fig)
