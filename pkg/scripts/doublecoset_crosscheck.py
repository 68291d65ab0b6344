"""Dirichlet coefficients of D(s, f) against explicit double-coset eigenvalues."""
import argparse

from siegel_pullback.config import DoubleCosetConfig, load_config
from siegel_pullback.lfunction import dirichlet_from_L
from siegel_pullback.modular import cusp_eigenform, hecke_doublecoset_eigenvalue


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="JSON overrides for DoubleCosetConfig")
    args = ap.parse_args()
    cfg = load_config(DoubleCosetConfig, args.config)
    tmax = max(cfg.ts)
    bad = 0
    for k in cfg.weights:
        f = cusp_eigenform(k, 3 * tmax * tmax)
        D = dirichlet_from_L(f, tmax)
        for t in cfg.ts:
            lam = hecke_doublecoset_eigenvalue(f, t).value
            same = lam == D[t]
            bad += not same
            print(f"k={k:2d} t={t:2d} D={D[t]}  doublecoset={'=' if same else lam}")
    print("all equal" if not bad else f"{bad} mismatches")


if __name__ == "__main__":
    main()
