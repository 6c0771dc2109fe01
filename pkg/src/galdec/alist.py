"""Reading and writing the alist sparse parity-check interchange format.

Layout: ``n m`` / ``dv_max dc_max`` / n variable degrees / m check degrees /
n lines of 1-based check indices per variable (zero-padded to dv_max) /
m lines of 1-based variable indices per check (zero-padded to dc_max).
Output is canonical: single-space separators, LF line endings, sorted
indices.  Input tolerates arbitrary whitespace and unpadded lines.
"""
from __future__ import annotations

from .graph import TannerGraph


class AlistError(ValueError):
    """Malformed alist input; carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def to_alist(g: TannerGraph) -> bytes:
    """Serialize a graph to canonical alist bytes.

    ``from_alist(to_alist(g))`` reproduces g exactly.
    """
    dv_max = max((len(a) for a in g.var_adj), default=0)
    dc_max = max((len(a) for a in g.chk_adj), default=0)
    lines = [
        f"{g.n} {g.m}",
        f"{dv_max} {dc_max}",
        " ".join(str(len(a)) for a in g.var_adj),
        " ".join(str(len(a)) for a in g.chk_adj),
    ]
    for adj in g.var_adj:
        row = [str(c + 1) for c in adj] + ["0"] * (dv_max - len(adj))
        lines.append(" ".join(row))
    for adj in g.chk_adj:
        row = [str(v + 1) for v in adj] + ["0"] * (dc_max - len(adj))
        lines.append(" ".join(row))
    return ("\n".join(lines) + "\n").encode("ascii")


def _ints(tokens: list[str], lineno: int) -> list[int]:
    out = []
    for t in tokens:
        try:
            out.append(int(t))
        except ValueError:
            raise AlistError(lineno, f"expected integer, got {t!r}") from None
    return out


def _entry_line(lines, lineno, degree, pad_width, n_nodes, what):
    """Parse one adjacency line: `degree` 1-based indices plus zero padding."""
    if lineno > len(lines):
        if degree == 0:
            return []  # trailing all-zero-degree lines may be absent
        raise AlistError(lineno, f"missing {what} adjacency line")
    vals = _ints(lines[lineno - 1].split(), lineno)
    nonzero = [x for x in vals if x != 0]
    if any(x < 0 for x in vals):
        raise AlistError(lineno, f"negative {what} index")
    if len(nonzero) != degree:
        raise AlistError(
            lineno, f"expected {degree} {what} indices, found {len(nonzero)}")
    if len(vals) not in (degree, pad_width):
        raise AlistError(
            lineno,
            f"expected {degree} or {pad_width} entries, found {len(vals)}")
    for x in nonzero:
        if x > n_nodes:
            raise AlistError(lineno, f"{what} index {x} out of range [1, {n_nodes}]")
    if len(set(nonzero)) != degree:
        raise AlistError(lineno, f"duplicate {what} index")
    return [x - 1 for x in nonzero]


def from_alist(data: bytes | str) -> TannerGraph:
    """Parse alist text into a TannerGraph (indices converted to 0-based)."""
    if isinstance(data, bytes):
        data = data.decode("ascii", errors="replace")
    lines = data.splitlines()
    if not lines:
        raise AlistError(1, "empty input")

    def header(lineno: int, count: int, what: str) -> list[int]:
        if lineno > len(lines):
            if count == 0:
                return []
            raise AlistError(lineno, f"missing {what}")
        vals = _ints(lines[lineno - 1].split(), lineno)
        if len(vals) != count:
            raise AlistError(lineno, f"expected {count} values for {what}, found {len(vals)}")
        return vals

    n, m = header(1, 2, "node counts 'n m'")
    if n < 0 or m < 0:
        raise AlistError(1, "negative node count")
    dv_max, dc_max = header(2, 2, "max degrees 'dv_max dc_max'")
    var_deg = header(3, n, "variable degrees")
    chk_deg = header(4, m, "check degrees")
    for i, d in enumerate(var_deg):
        if d < 0 or d > dv_max:
            raise AlistError(3, f"variable {i + 1} degree {d} outside [0, {dv_max}]")
    for i, d in enumerate(chk_deg):
        if d < 0 or d > dc_max:
            raise AlistError(4, f"check {i + 1} degree {d} outside [0, {dc_max}]")

    edges = []
    for v in range(n):
        lineno = 5 + v
        checks = _entry_line(lines, lineno, var_deg[v], dv_max, m, "check")
        if len(set(checks)) != len(checks):
            raise AlistError(lineno, "duplicate edge")
        edges.extend((v, c) for c in checks)

    # The check-side section is redundant; parse and cross-validate it.
    by_check: dict[int, list[int]] = {}
    for v, c in edges:
        by_check.setdefault(c, []).append(v)
    for c in range(m):
        lineno = 5 + n + c
        vars_ = _entry_line(lines, lineno, chk_deg[c], dc_max, n, "variable")
        if sorted(vars_) != sorted(by_check.get(c, [])):
            raise AlistError(
                lineno,
                f"check {c + 1} adjacency disagrees with the variable section")

    try:
        return TannerGraph.from_edges(n, m, edges)
    except Exception as exc:  # range/duplicate errors carry no line; re-tag
        raise AlistError(5, str(exc)) from exc


def load_alist(path) -> TannerGraph:
    with open(path, "rb") as fh:
        return from_alist(fh.read())


def save_alist(g: TannerGraph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(to_alist(g))
