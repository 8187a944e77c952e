"""Scan a preset of Segre-Veronese shapes and list the defective ones.

    python3 scripts/reproduce_table.py --preset P1P2 --jobs 4 --csv out.csv
"""
import argparse
import time

from toricsecant.bounds import PRESETS, rows_to_csv, table_rows, table_scan


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--preset", default="P1P2", choices=sorted(PRESETS))
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--csv")
    args = ap.parse_args()

    t0 = time.perf_counter()
    cells = table_scan(PRESETS[args.preset], runs=args.runs, trials=args.trials,
                       seed=args.seed, jobs=args.jobs)
    counts = {}
    for c in cells:
        counts[(c.verdict, c.proof)] = counts.get((c.verdict, c.proof), 0) + 1
    print(f"preset {args.preset}, seed {args.seed}: {len(cells)} shapes in {time.perf_counter() - t0:.1f}s")
    for (verdict, proof), k in sorted(counts.items()):
        print(f"  {verdict:14s} via {proof:10s} {k}")
    for c in cells:
        if c.verdict != "non_defective":
            print(f"  {c.verdict}: degrees {list(c.shape.degs)} h={c.defective_hs}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rows_to_csv(table_rows(cells)))


if __name__ == "__main__":
    main()
