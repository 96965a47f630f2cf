"""Run the max-distance search for every phase-mismatch preset and report
how the reach of the randomized protocol degrades as delta grows.

The fig6 presets share the detector-limited fig4 setup and differ only in
delta (pi/60, pi/10, pi/8, pi/3). Reach should be non-increasing in delta.

Output: prints one line per preset as it goes, writes a structured
summary to results/delta_tolerance.json.
"""

import math
import time
from pathlib import Path

from src.analysis.presets import PRESET_GROUPS, get_preset
from src.analysis.sweep import max_distance
from src.protocol.errors import NumericalDegeneracyError
from src.utils.output import write_json

OUTPUT_PATH = Path("results/delta_tolerance.json")
TOL_KM = 0.5


def reach_for(name: str):
    preset = get_preset(name)
    t0 = time.time()
    try:
        L_star = max_distance(preset.params, preset.variant, preset.bracket, TOL_KM)
        note = ""
    except NumericalDegeneracyError as exc:
        L_star = math.nan
        note = str(exc)
    elapsed = time.time() - t0
    delta = preset.params.delta
    reach = f"{L_star:8.1f} km" if math.isfinite(L_star) else "     n/a   "
    print(f"  {name:<12} delta={delta:.4f} rad  reach={reach}  ({elapsed:.1f}s)", flush=True)
    return {"preset": name, "delta": delta, "variant": preset.variant,
            "max_distance_km": L_star, "note": note}


def main():
    print(f"\n=== phase-mismatch tolerance ({len(PRESET_GROUPS['fig6'])} presets) ===")
    rows = [reach_for(name) for name in PRESET_GROUPS["fig6"]]

    reaches = [r["max_distance_km"] for r in rows if math.isfinite(r["max_distance_km"])]
    monotone = all(a >= b - TOL_KM for a, b in zip(reaches, reaches[1:]))

    print("\n" + "=" * 70)
    print("SUMMARY")
    print("=" * 70)
    print(f"{'preset':<14} {'delta/pi':>10} {'reach_km':>12}")
    for r in rows:
        print(f"{r['preset']:<14} {r['delta'] / math.pi:>10.4f} {r['max_distance_km']:>12.1f}")
    print(f"\nreach non-increasing in delta: {'yes' if monotone else 'NO'}")

    write_json({"rows": rows, "monotone": monotone}, OUTPUT_PATH)
    print(f"\nWrote: {OUTPUT_PATH}")


if __name__ == "__main__":
    main()
