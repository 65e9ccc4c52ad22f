"""Tabulate the slit-ratio obstruction for every three-tori prototype up to a discriminant.

    python3 scripts/obstruction_scan.py --max-disc 100 --csv scan.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from prymforms.degeneration import ObstructionInconsistency, class_beta, veech_obstruction
from prymforms.prototypes import enumerate_three_tori
from prymforms.quadfield import format_qf, square_root_of


@dataclass(frozen=True)
class ScanConfig:
    max_disc: int = 100
    csv_path: str | None = None


FIELDS = ["proto", "disc", "beta", "beta_prime", "status", "s2", "s2_float", "threshold"]


def scan(cfg: ScanConfig) -> list[dict]:
    rows = []
    for D in range(5, cfg.max_disc + 1):
        if D % 4 not in (0, 1) or square_root_of(D) is not None:
            continue
        for p in enumerate_three_tori(D):
            row = {"proto": str(p), "disc": D,
                   "beta": str(class_beta(p, (0, 1))[0]), "beta_prime": str(class_beta(p, (1, 2))[0])}
            try:
                o = veech_obstruction(p)
            except ObstructionInconsistency:
                row["status"] = "coincident"
            else:
                row.update(status="ok" if o.s2 > 0 else "nonpositive", s2=format_qf(o.s2),
                           s2_float=o.s2.approx(), threshold=format_qf(o.threshold))
            rows.append(row)
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-disc", type=int, default=ScanConfig.max_disc)
    ap.add_argument("--csv", dest="csv_path")
    args = ap.parse_args(argv)
    cfg = ScanConfig(args.max_disc, args.csv_path)
    rows = scan(cfg)
    out = open(cfg.csv_path, "w", newline="") if cfg.csv_path else sys.stdout
    try:
        w = csv.DictWriter(out, FIELDS, restval="")
        w.writeheader()
        w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    counts = {}
    for r in rows:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    print(f"# {len(rows)} prototypes: {counts}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
