"""Fit the calibration constants to the 31 GHz anchor set and write them out.

Usage: python3 scripts/calibrate_nominal.py [--out PATH]

Starts from the documented initial guess, so the result does not depend on
the constants currently shipped.
"""

from __future__ import annotations

import argparse
import time

from hwmlwa import io
from hwmlwa.config import shipped_path
from hwmlwa.steering import DEFAULT_FREE, INITIAL_GUESS, AntennaModel, calibrate, reference_anchors


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(shipped_path("calibration_31ghz.yaml")))
    args = parser.parse_args()

    model = AntennaModel()
    anchors = reference_anchors(model)
    t0 = time.perf_counter()
    result = calibrate(model, anchors, DEFAULT_FREE, initial=INITIAL_GUESS)
    print(result.report())
    print(f"converged={result.converged} iterations={result.iterations} in {time.perf_counter() - t0:.0f} s")
    for name, value in result.constants.as_dict().items():
        print(f"  {name} = {value:.9g}")
    io.write_calibration(
        args.out,
        result.constants,
        {
            "free": list(DEFAULT_FREE),
            "converged": result.converged,
            "iterations": result.iterations,
            "residuals": {a.label: r for a, r in zip(result.anchors, result.residuals)},
        },
    )
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
