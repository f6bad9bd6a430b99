"""
Gnuplot script over a run directory's CSV tables.

The script is plain text next to the tables; running ``gnuplot plots.gp``
inside the run directory renders one PNG per figure.
"""
from pathlib import Path
from typing import List, Sequence

from ..diagnostics.export import BOUNDS_COLUMNS, PROFILE_COLUMNS

PLOT_FILE = "plots.gp"

HEADER = [
    "# generated by least-energy-lab; run inside the run directory",
    "set datafile separator ','",
    "set key autotitle columnhead",
    "set terminal pngcairo size 900,600",
    "set grid",
]


def _column(columns: Sequence[str], name: str) -> int:
    return columns.index(name) + 1


def _profile_figure(files: List[str]) -> List[str]:
    radius = _column(PROFILE_COLUMNS, "radius")
    phi = _column(PROFILE_COLUMNS, "phi")
    bubble = _column(PROFILE_COLUMNS, "bubble")
    series = [f"'{name}' using {radius}:{phi} with points title '{name}'" for name in files]
    series.append(f"'{files[-1]}' using {radius}:{bubble} with lines lw 2 title 'bubble'")
    return [
        "",
        "set output 'profile.png'",
        "set title 'rescaled profile against the limit bubble'",
        "set xlabel '|X|'",
        "set ylabel 'phi'",
        "plot " + ", \\\n     ".join(series),
    ]


def _bounds_figure(files: List[str], column: str, label: str, logscale: bool = False) -> List[str]:
    p = _column(BOUNDS_COLUMNS, "p")
    y = _column(BOUNDS_COLUMNS, column)
    series = [f"'{name}' using {p}:{y} with linespoints title '{name}'" for name in files]
    return [
        "",
        f"set output 'bounds_{column}.png'",
        f"set title '{label}'",
        "set xlabel 'p'",
        f"set ylabel '{column}'",
        "set logscale y" if logscale else "unset logscale y",
        "plot " + ", \\\n     ".join(series),
    ]


def plot_script(run_dir: Path) -> str:
    """Script text for the profile and bounds tables present under ``run_dir``."""
    profiles = sorted(
        path.relative_to(run_dir).as_posix() for path in (run_dir / "profile").glob("*_p*.csv")
    )
    bounds = sorted(
        path.relative_to(run_dir).as_posix()
        for path in (run_dir / "bounds").glob("*.csv")
        if path.name not in ("claims.csv", "amplitudes.csv")
    )
    lines = list(HEADER)
    if profiles:
        lines.extend(_profile_figure(profiles))
    if bounds:
        lines.extend(_bounds_figure(bounds, "sup_norm", "sup-norm along p"))
        lines.extend(
            _bounds_figure(bounds, "sup_norm_pow", "sup-norm^(p-1) along p", logscale=True)
        )
        lines.extend(_bounds_figure(bounds, "c_squared_p", "p c^2 along p"))
        lines.extend(_bounds_figure(bounds, "p_int_u_p1", "p int u^(p+1) along p"))
    if not profiles and not bounds:
        lines.append("# no profile or bounds tables in this run")
    return "\n".join(lines) + "\n"


def write_plot_script(run_dir: Path) -> Path:
    path = Path(run_dir) / PLOT_FILE
    path.write_text(plot_script(Path(run_dir)), encoding="utf-8")
    return path
