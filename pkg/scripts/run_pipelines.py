"""Seed one instance per shape, save it, and run its pipeline.

    python3 scripts/run_pipelines.py [--out DIR] [--seed N] [--skip-slow]
"""

import argparse
import time
from pathlib import Path

from symtensor.claims import DEFAULT_FIELDS, STATEMENTS, seeded_pipeline
from symtensor.exactfield import field_make
from symtensor.fileio import save_tensor
from symtensor.instances import seed

SLOW = {"genus5", "quintic"}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="seeded", help="directory for tensor files")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--skip-slow", action="store_true", help="only genus 3 and genus 4")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failures = 0
    for shape, pe in DEFAULT_FIELDS.items():
        if args.skip_slow and shape in SLOW:
            continue
        spec = field_make(*pe)
        t0 = time.perf_counter()
        s = seed(shape, spec, args.seed)
        path = out / f"{shape}_{spec.p}_{args.seed}.json"
        path.write_text(save_tensor(s.tensor))
        res = seeded_pipeline(shape, spec, args.seed, s.tensor)
        print(f"{shape} over F_{spec.order}: {res.cayley_count} Cayley points, {res.secant_count} secants "
              f"({time.perf_counter() - t0:.1f} s) -> {path}")
        for c in res.checks:
            mark = "ok  " if c.passed else "FAIL"
            print(f"  {mark} {c.claim}: {STATEMENTS.get(c.claim, '')} {c.detail}".rstrip())
        failures += not res.passed
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
