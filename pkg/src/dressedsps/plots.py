"""Render report figures from sweep CSV files.

Each recipe maps the swept variable to a set of result columns; files are
written next to the CSV (or into an output directory) as
``<csv-stem>_<recipe>.png``.  A generic ``xy:COL[,COL...]`` recipe plots
arbitrary columns.  Rendering never touches the CSV itself.
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .exceptions import RecipeError

RECIPES = {
    "fig3a": dict(ys=("I", "I_plus", "I_minus"), xlabel="omega_cw / gamma_X",
                  ylabel="indistinguishability", xlog=True, ylog=False),
    "fig3b": dict(ys=("I", "I_minus", "I_plus"), xlabel="delta / |Delta_ac|",
                  ylabel="indistinguishability", xlog=True, ylog=False),
    "fig3n": dict(ys=("N", "N_plus", "N_minus"), xlabel="swept variable",
                  ylabel="photons per pulse", xlog=True, ylog=False),
    "fig5": dict(ys=("I_minus",), xlabel="delta / |Delta_ac|",
                 ylabel="dominant-peak indistinguishability", xlog=True, ylog=False),
    "fig7": dict(ys=("N", "I", "I_minus"), xlabel="gamma_X / gamma_0",
                 ylabel="figure of merit", xlog=True, ylog=False),
    "fig8a": dict(ys=("E_cw",), xlabel="omega_cw / gamma_X",
                  ylabel="cw error rate", xlog=True, ylog=True),
    "fig8b": dict(ys=("E_cw",), xlabel="delta / |Delta_ac|",
                  ylabel="cw error rate", xlog=True, ylog=True),
    "fig9": dict(ys=("g2_0",), xlabel="pulse FWHM tau_p (ps)",
                 ylabel="g2[0]", xlog=True, ylog=True),
}


def read_sweep_csv(path):
    """Parse a sweep CSV back into {column: float array}; empty fields
    become NaN."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines()
             if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise RecipeError(f"{path} has no header row")
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    if not rows:
        raise RecipeError(f"{path} contains no data rows")
    data = {}
    for j, name in enumerate(header):
        col = np.array([float(r[j]) if r[j] != "" else np.nan for r in rows])
        data[name] = col
    return data


def emit_plots(csv_path, recipe: str, out_dir=None):
    """Render one recipe from a sweep CSV.

    Returns:
        list of written image paths (one per recipe).

    Raises:
        RecipeError: unknown recipe, unknown column, or an empty CSV.
    """
    csv_path = Path(csv_path)
    data = read_sweep_csv(csv_path)
    if recipe.startswith("xy:"):
        ys = tuple(c for c in recipe[3:].split(",") if c)
        if not ys:
            raise RecipeError("xy: recipe needs at least one column")
        style = dict(ys=ys, xlabel="swept variable", ylabel=", ".join(ys),
                     xlog=False, ylog=False)
    elif recipe in RECIPES:
        style = RECIPES[recipe]
    else:
        raise RecipeError(f"unknown recipe {recipe!r}; known: {sorted(RECIPES)} or xy:COL,...")
    for col in ("swept_value",) + tuple(style["ys"]):
        if col not in data:
            raise RecipeError(f"column {col!r} not present in {csv_path.name}")
    x = data["swept_value"]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    plotted = 0
    for col in style["ys"]:
        y = data[col]
        mask = np.isfinite(y)
        if not mask.any():
            continue
        ax.plot(x[mask], y[mask], marker="o", markersize=3, linewidth=1.2, label=col)
        plotted += 1
    if plotted == 0:
        plt.close(fig)
        raise RecipeError(f"recipe {recipe!r}: all requested columns are empty")
    if style.get("xlog"):
        ax.set_xscale("log")
    if style.get("ylog"):
        ax.set_yscale("log")
    ax.set_xlabel(style["xlabel"])
    ax.set_ylabel(style["ylabel"])
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out_base = Path(out_dir) if out_dir is not None else csv_path.parent
    out_base.mkdir(parents=True, exist_ok=True)
    safe = recipe.replace(":", "_").replace(",", "-")
    out_file = out_base / f"{csv_path.stem}_{safe}.png"
    fig.savefig(out_file, dpi=150)
    plt.close(fig)
    return [out_file]
