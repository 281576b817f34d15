"""Print cell counts and rational Betti numbers of every ΣQ_{n,c} up to a rank."""
import argparse
import time

from cactus_morse.complexes import betti
from cactus_morse.quotient import cached_sigma_q


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-rank", type=int, default=4)
    ap.add_argument("--cache-dir", default=None)
    args = ap.parse_args()
    print(f"{'n':>2} {'c':>3}  {'cells':<32} {'betti':<20} seconds")
    for n in range(1, args.max_rank + 1):
        for c in list(range(n)) + [None]:
            t0 = time.perf_counter()
            q = cached_sigma_q(n, c, args.cache_dir)
            b = betti(q.complex)
            label = "all" if c is None else str(c)
            print(f"{n:>2} {label:>3}  {str(q.counts):<32} {str(list(b.unreduced)):<20} "
                  f"{time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
