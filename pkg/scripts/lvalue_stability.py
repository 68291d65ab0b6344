"""L(s, f, St) by partial Euler products at increasing prime cutoffs, with tail bounds."""
import argparse

from siegel_pullback.config import LValueConfig, load_config
from siegel_pullback.lfunction import lvalue_numeric
from siegel_pullback.modular import cusp_eigenform


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="JSON overrides for LValueConfig")
    args = ap.parse_args()
    cfg = load_config(LValueConfig, args.config)
    f = cusp_eigenform(cfg.weight, max(cfg.cutoffs))
    prev = None
    for P in cfg.cutoffs:
        v = lvalue_numeric(f, cfg.s, P)
        delta = "" if prev is None else f"  change={abs(v.value - prev):.2e}"
        print(f"cutoff={P:>7d} primes={v.primes_used:>6d} value={v.value.real:.16f} tail<={v.tail_bound:.2e}{delta}")
        prev = v.value


if __name__ == "__main__":
    main()
