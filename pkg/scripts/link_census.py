"""Per-graph census of link types: sphere dimension of the down-link,
up-link and descending link for every catalog graph of a rank."""
import argparse

from cactus_morse import blowup, graphs, morse
from cactus_morse.complexes import join, sphere_dimension


def describe(X):
    d = sphere_dimension(X)
    return "acyclic" if d is None else f"S^{d}"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rank", type=int, default=3)
    args = ap.parse_args()
    print(f"{'code':<28} {'V':>2} {'c':>2} thin  {'down':<8} {'up':<8} dlk")
    for g in graphs.catalog_graphs(args.rank):
        down, up = morse.down_link_complex(g), blowup.up_link_complex(g)
        print(f"{graphs.canonical_code(g):<28} {g.num_vertices:>2} {graphs.coweight(g):>2} "
              f"{'yes ' if morse.is_thin(g) else 'no  '}  {describe(down):<8} "
              f"{describe(up) if morse.is_thin(g) else '-':<8} {describe(join(down, up))}")


if __name__ == "__main__":
    main()
