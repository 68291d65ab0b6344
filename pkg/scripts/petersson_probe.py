"""Compare the adaptive q-expansion Petersson norm with tensor Gauss quadrature of the product formula."""
import argparse

from siegel_pullback.config import PeterssonConfig, load_config
from siegel_pullback.modular import ModularError, cusp_eigenform, delta_product, petersson_norm_gauss, petersson_norm_numeric


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="JSON overrides for PeterssonConfig")
    args = ap.parse_args()
    cfg = load_config(PeterssonConfig, args.config)
    for N in cfg.truncs:
        try:
            v, err = petersson_norm_numeric(cusp_eigenform(cfg.weight, N), tol=cfg.tol, y_max=cfg.y_max)
            print(f"trunc={N:>3d} value={v:.15e} err<={err:.1e}")
        except ModularError as exc:
            print(f"trunc={N:>3d} {exc}")
    if cfg.weight == 12:
        g = petersson_norm_gauss(delta_product, 12, nodes=cfg.gauss_nodes, y_max=cfg.y_max)
        print(f"gauss/product value={g:.15e}")


if __name__ == "__main__":
    main()
