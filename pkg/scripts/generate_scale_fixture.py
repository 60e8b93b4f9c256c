#!/usr/bin/env python3
"""Generate the large synthetic category graph used by the scale smoke test.

Writes categories.tsv, pages.tsv, edges.tsv, and taxonomy.json into the
given directory and prints the resulting counts as JSON.
"""

import argparse
import json

from wikicat.synth import make_scale_graph


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir", help="directory to write the fixture into")
    ap.add_argument("--roots", type=int, default=5)
    ap.add_argument("--categories", type=int, default=20_000)
    ap.add_argument("--pages", type=int, default=100_000)
    ap.add_argument("--edges", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    stats = make_scale_graph(
        args.out_dir,
        n_roots=args.roots,
        n_categories=args.categories,
        n_pages=args.pages,
        n_edges=args.edges,
        seed=args.seed,
    )
    print(json.dumps(stats, sort_keys=True))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
