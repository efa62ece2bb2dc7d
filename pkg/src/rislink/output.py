"""Deterministic result serialization: CSV tables, JSON metadata sidecars,
and gnuplot scripts (written, never executed)."""

from __future__ import annotations

import json
from pathlib import Path

from .experiments import SweepResult


def _format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        if v != v:  # NaN
            return "nan"
        if v in (float("inf"), float("-inf")):
            return "inf" if v > 0 else "-inf"
        return format(v, ".9g")
    return str(v)


def emit_csv(result: SweepResult, path: str | Path) -> Path:
    """Write the rows as UTF-8 CSV plus a `.meta.json` sidecar.

    Output is byte-deterministic for identical inputs: fixed float format,
    fixed row order, no timestamps in the sidecar.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(result.header)]
    for row in result.rows:
        if len(row) != len(result.header):
            raise ValueError("row width does not match the header")
        lines.append(",".join(_format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    sidecar = path.with_suffix(path.suffix + ".meta.json")
    meta = dict(sorted(result.meta.items()))
    meta["rows"] = len(result.rows)
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n",
                       encoding="utf-8")
    return path


def _column(result: SweepResult, name: str) -> int:
    return result.header.index(name) + 1  # gnuplot columns are 1-based


def emit_plot_script(result: SweepResult, csv_path: str | Path,
                     script_path: str | Path) -> Path:
    """Write a gnuplot script that renders the CSV next to it.

    Line sweeps plot the watt columns on a log scale; plane sweeps and
    robustness maps render heatmaps (the latter with a 0.1 contour).
    """
    csv_path = Path(csv_path)
    script_path = Path(script_path)
    png = csv_path.with_suffix(".png").name
    lines = [
        "set terminal pngcairo size 900,620",
        f"set output '{png}'",
        "set datafile separator ','",
        "set key outside",
    ]
    if result.kind == "line":
        watt_cols = [(i + 1, name) for i, name in enumerate(result.header)
                     if name.endswith("_w")]
        xcol = 1
        lines += [
            "set logscale y",
            f"set xlabel '{result.header[0]}'",
            "set ylabel 'received power (W)'",
        ]
        plots = [f"'{csv_path.name}' skip 1 using {xcol}:{c} "
                 f"with lines title '{name}'" for c, name in watt_cols]
        lines.append("plot " + ", \\\n     ".join(plots))
    elif result.kind == "heatmap":
        zcol = _column(result, "total_dbm") if "total_dbm" in result.header \
            else _column(result, "ris_dbm")
        lines += [
            "set view map",
            "set xlabel 'x (m)'",
            "set ylabel 'y (m)'",
            "set cblabel 'received power (dBm)'",
            f"splot '{csv_path.name}' skip 1 using 1:2:{zcol} "
            "with points pt 5 ps 1 palette notitle",
        ]
    elif result.kind == "robustness":
        zcol = _column(result, "deviation")
        lines += [
            "set view map",
            "set xlabel 'x offset (m)'",
            "set ylabel 'y offset (m)'",
            "set cblabel 'normalized power deviation'",
            "set contour base",
            "set cntrparam levels discrete 0.1",
            f"splot '{csv_path.name}' skip 1 using 1:2:{zcol} "
            "with points pt 5 ps 1 palette notitle",
        ]
    else:
        raise ValueError(f"unknown result kind {result.kind!r}")
    script_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return script_path
