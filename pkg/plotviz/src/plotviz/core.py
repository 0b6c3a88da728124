"""CSV to figure, no simulation dependencies.

Reads one or more sweep CSVs (one row per measured point), groups rows into
series by the requested key columns, and renders every series as a curve on
a log-scale axis. Points whose error count is zero have no measurable rate;
they are drawn as open markers at the 1/trials censoring floor instead of
being dropped.
"""

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


class MissingColumnError(ValueError):
    """A required column is absent from an input CSV."""


class EmptySeriesError(ValueError):
    """Grouping produced no rows for any series."""


X_CANDIDATES = ("snr_db", "rho_db")


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple
    group_keys: tuple = ("code",)
    metric: str = "ber"
    out: str = "figure.png"
    title: str = ""


@dataclass
class Series:
    label: str
    x: list = field(default_factory=list)
    y: list = field(default_factory=list)
    censored: list = field(default_factory=list)   # True where y is a floor


def read_rows(path):
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise MissingColumnError(f"{path}: empty file")
        return reader.fieldnames, list(reader)


def _require(fieldnames, column, path):
    if column not in fieldnames:
        raise MissingColumnError(f"{path}: missing column {column!r}")


def load_series(spec):
    """Returns a list of Series, one per distinct group-key combination,
    with points sorted by the x column."""
    buckets = {}
    for path in spec.inputs:
        fieldnames, rows = read_rows(path)
        x_col = next((c for c in X_CANDIDATES if c in fieldnames), None)
        if x_col is None:
            raise MissingColumnError(
                f"{path}: missing column {' or '.join(X_CANDIDATES)!s}")
        _require(fieldnames, spec.metric, path)
        for key in spec.group_keys:
            _require(fieldnames, key, path)
        for row in rows:
            label = ", ".join(str(row[k]) for k in spec.group_keys)
            s = buckets.setdefault(label, Series(label))
            y = float(row[spec.metric])
            censored = False
            if y <= 0.0:
                trials = float(row.get("trials", 0) or 0)
                if trials <= 0:
                    continue      # nothing measurable and no floor available
                y = 1.0 / trials
                censored = True
            s.x.append(float(row[x_col]))
            s.y.append(y)
            s.censored.append(censored)
    series = [s for s in buckets.values() if s.x]
    if not series:
        raise EmptySeriesError("no plottable rows after grouping")
    for s in series:
        order = sorted(range(len(s.x)), key=lambda i: s.x[i])
        s.x = [s.x[i] for i in order]
        s.y = [s.y[i] for i in order]
        s.censored = [s.censored[i] for i in order]
    series.sort(key=lambda s: s.label)
    return series


def render(spec):
    """Renders the figure for spec and writes spec.out. Returns the series
    list so callers (and tests) can inspect what was drawn."""
    series = load_series(spec)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for s in series:
        line, = ax.semilogy(s.x, s.y, marker="o", label=s.label)
        cens_x = [x for x, c in zip(s.x, s.censored) if c]
        cens_y = [y for y, c in zip(s.y, s.censored) if c]
        if cens_x:
            ax.semilogy(cens_x, cens_y, linestyle="none", marker="o",
                        markerfacecolor="none",
                        markeredgecolor=line.get_color())
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel(spec.metric.upper())
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    # strip the creation timestamp so identical inputs give identical bytes
    fig.savefig(spec.out, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return series
