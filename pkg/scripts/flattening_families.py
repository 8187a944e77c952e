"""Flattening certificates on the three-factor families with factors P1 x P1 x Pn."""
import argparse

from toricsecant.flattening import split_search
from toricsecant.shape import SvShape
from toricsecant.terracini import secant_dim_mod_p


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-d", type=int, default=9)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4, 5])
    args = ap.parse_args()
    for n in args.n:
        for d in range(2, args.max_d + 1):
            shape = SvShape((1, 1, n), (1, d, 1))
            for h in range(2, -(-shape.num_points // (shape.dim + 1)) + 1):
                certs = split_search(shape, h, max_side=80)
                if not certs:
                    continue
                c = certs[0]
                oracle = secant_dim_mod_p(shape, h, trials=2)
                print(f"{shape.label()} h={h}: split a={c.split.a} {c.split.rows}x{c.split.cols} "
                      f"dim<={min(c.dim_upper_bounds)} expected {c.expected_dim} oracle {oracle} "
                      f"{c.status} {c.family or ''}")


if __name__ == "__main__":
    main()
