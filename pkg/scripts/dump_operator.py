"""Print the POVM matrices for a parameter set, for eyeballing.

    python scripts/dump_operator.py --config configs/fig4_params.json
    python scripts/dump_operator.py --override L=300 --regime ideal
"""

import argparse

from src.protocol.povm import OUTCOMES, build_ideal, build_realistic
from src.utils.config import build_params


def main():
    parser = argparse.ArgumentParser(description="Dump POVM operators")
    parser.add_argument("--config", default=None, help="JSON or YAML parameter file")
    parser.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    parser.add_argument("--regime", default="realistic", choices=["ideal", "realistic"])
    parser.add_argument("--intensity", type=float, default=None, help="Build intensity (default: mu)")
    args = parser.parse_args()

    params = build_params(args.config, args.override)
    intensity = params.mu if args.intensity is None else args.intensity
    print(f"L={params.L:g} km  eta={params.eta:.6e}  I={intensity:g}\n")
    for outcome in OUTCOMES:
        if args.regime == "ideal":
            op = build_ideal(outcome, intensity, params.eta)
        else:
            op = build_realistic(outcome, intensity, params.eta, params.delta, params.V, params.p_dark)
        print(op.to_text())
        print(f"  hermiticity residual {op.hermiticity_residual():.2e}  "
              f"min eigenvalue {op.min_eigenvalue():+.3e}\n")


if __name__ == "__main__":
    main()
