"""Evaluate the normalized c-integral quotient on an s grid for lambda = 1 and 2."""
import argparse

from siegel_pullback.config import ConjectureConfig, load_config
from siegel_pullback.pullback import c_integral_disk, normalized_c_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="JSON overrides for ConjectureConfig")
    args = ap.parse_args()
    cfg = load_config(ConjectureConfig, args.config)
    for lam in sorted({cfg.lam, 1, 2}):
        rep = normalized_c_check(lam, cfg.k, list(cfg.s_grid))
        print(f"lambda={lam} k={cfg.k} constant={rep.constant:.15g} max rel deviation={rep.max_relative_deviation:.2e}")
        for sample, q in zip(rep.samples, rep.quotients):
            disk = c_integral_disk(lam, cfg.k, sample.s).value
            print(f"  s={sample.s:.4g}  c={sample.value:.15g}  disk={disk:.15g}  quotient={q:.15g}")


if __name__ == "__main__":
    main()
