"""Decompose the diagonal restriction of E^2_k for every weight and print the diagonal coefficients."""
import argparse
import json
import time

from siegel_pullback.cache import Cache
from siegel_pullback.config import PullbackConfig, load_config
from siegel_pullback.modular import siegel_eisenstein2
from siegel_pullback.pullback import decompose_pullback, restrict_diagonal


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="JSON overrides for PullbackConfig")
    ap.add_argument("--no-cache", action="store_true")
    args = ap.parse_args()
    cfg = load_config(PullbackConfig, args.config)
    cache = None if args.no_cache else Cache()
    rows = []
    for k in cfg.weights:
        t0 = time.perf_counter()
        F2 = siegel_eisenstein2(k, cfg.trunc**2, cache)
        dec = decompose_pullback(restrict_diagonal(F2, cfg.trunc), k, cache=cache)
        rows.append({
            "k": k,
            "ok": dec.ok,
            "surplus": dec.surplus,
            "diagonal": {name: str(c) for name, c in dec.diagonal()},
            "seconds": round(time.perf_counter() - t0, 2),
        })
        print(f"k={k:2d} ok={dec.ok} surplus={dec.surplus} "
              + " ".join(f"{n}={c}" for n, c in dec.diagonal()), flush=True)
    print(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
