"""Defective secants of (P1)^3 embeddings via Cremona reduction, checked against Terracini."""
import argparse

from toricsecant.cremona import sv111_defect_scan
from toricsecant.shape import SvShape
from toricsecant.terracini import defect_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-d", type=int, default=8)
    args = ap.parse_args()
    for d3 in (1, 2):
        for d in range(1, args.max_d + 1):
            degs = (1, d, d3)
            scan = sv111_defect_scan(degs)
            ref = defect_report(SvShape((1, 1, 1), degs))
            agree = scan.report.statuses() == ref.statuses()
            print(f"degrees {degs}: defective h {scan.report.defective_hs()}  terracini agrees: {agree}")


if __name__ == "__main__":
    main()
