"""CSV table builders and the writer (LF line endings, UTF-8, header row,
canonical ordinal printing, no trailing separator).

The walks table has one row per ordered grid pair; measures are left blank
when alpha exceeds beta (walks are only defined upward).  The rho-phi table
is a matrix over the declared alpha x beta grid; the xyz table has one row
per proper-inclusion chain of the declared family.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .cseq import CSeqProvider
from .errors import WalkslabError
from .ordinal import Ordinal, ord_cmp
from .rhophi import PhiFamily, rho_phi
from .scenario import Scenario
from .twowalks import color_c, triple_min
from .walks import walk_trace

Rows = List[List[str]]


def build_walks_table(provider: CSeqProvider,
                      grid: Sequence[Ordinal]) -> Tuple[List[str], Rows]:
    header = ["alpha", "beta", "rho2", "rho0", "lambda", "lambda_bar"]
    rows: Rows = []
    for alpha in grid:
        for beta in grid:
            if ord_cmp(alpha, beta) <= 0:
                wt = walk_trace(provider, alpha, beta)
                rows.append([str(alpha), str(beta), str(wt.steps),
                             ";".join(str(c) for c in wt.code),
                             str(wt.lam), str(wt.lam_bar)])
            else:
                rows.append([str(alpha), str(beta), "", "", "", ""])
    return header, rows


def build_rhophi_table(provider: CSeqProvider, phi: PhiFamily,
                       grid: Sequence[Ordinal]) -> Tuple[List[str], Rows]:
    header = ["alpha\\beta"] + [str(b) for b in grid]
    memo: Dict = {}
    rows: Rows = []
    for alpha in grid:
        row = [str(alpha)]
        for beta in grid:
            if ord_cmp(alpha, beta) <= 0:
                row.append(str(rho_phi(provider, phi, alpha, beta, memo)))
            else:
                row.append("")
        rows.append(row)
    return header, rows


def build_xyz_table(scn: Scenario, family: str,
                    partition: Optional[str] = None) -> Tuple[List[str], Rows]:
    roster = scn.family_roster(family)
    part = scn.partitions[partition] if partition else None
    if part is None and scn.partitions:
        part = next(iter(scn.partitions.values()))
    header = ["x", "y", "z", "xyz", "color"]
    rows: Rows = []
    n = len(roster)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) < 3:
                    continue
                (nx, x), (ny, y), (nz, z) = roster[i], roster[j], roster[k]
                if not (x.subset_of(y) and x != y and y.subset_of(z) and y != z):
                    continue
                value = triple_min(x, y, z, scn.set_cseq)
                color = (str(color_c(x, y, z, part, scn.set_cseq))
                         if part is not None else "")
                rows.append([nx, ny, nz, str(value), color])
    return header, rows


def write_csv(path: str, header: Sequence[str], rows: Rows) -> None:
    for row in rows:
        if len(row) != len(header):
            raise WalkslabError("csv row width does not match the header")
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
