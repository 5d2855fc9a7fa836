"""Row records and CSV emission.

Reals are rendered with 17 significant digits so every 64-bit float
round-trips exactly; flags render as 1/0. Values never contain commas, so
no quoting is needed.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class TrialRow:
    """One experiment record: ordered (column, value) payload."""

    experiment: str
    trial_index: int
    payload: tuple

    def columns(self):
        return tuple(name for name, _ in self.payload)


def render_value(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, str)):
        return str(v)
    return f"{float(v):.17g}"


def emit_csv(rows, sink, columns=None):
    """Write a header line plus one line per row; rows share one column set.

    ``columns`` names the header for an empty row list (header-only output).
    """
    rows = list(rows)
    if not rows:
        if columns:
            sink.write(",".join(columns) + "\n")
        return
    cols = rows[0].columns()
    if columns is not None and tuple(columns) != cols:
        raise ValueError(f"declared columns {tuple(columns)} != row columns {cols}")
    for r in rows:
        if r.columns() != cols:
            raise ValueError(
                f"row {r.trial_index} columns {r.columns()} != {cols}")
    sink.write(",".join(cols) + "\n")
    for r in rows:
        rendered = [render_value(v) for _, v in r.payload]
        for cell in rendered:
            if "," in cell:
                raise ValueError(f"value {cell!r} contains a comma")
        sink.write(",".join(rendered) + "\n")
