"""Regenerate the data behind the steering, Q and dispersion studies.

Usage: python3 scripts/sweeps.py [--out DIR] [--config PATH]

Writes CSV/Touchstone files through the command-line front end and prints a
short summary of each steering map.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from hwmlwa.cli import main as cli
from hwmlwa.config import default_config, load_config
from hwmlwa.steering import steering_map


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results")
    parser.add_argument("--config", default=None)
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    common = ["--config", args.config] if args.config else []

    def run(*argv: str) -> None:
        code = cli([argv[0], *common, *argv[1:]])
        if code:
            raise SystemExit(f"hwmlwa {' '.join(argv)} failed with exit code {code}")

    run("dispersion", "-o", str(out / "dispersion_nominal.csv"))
    for c in ("0.2", "0.6", "1.0"):
        run("dispersion", "--c-pf", c, "-o", str(out / f"dispersion_c{c}pf.csv"))
    run("qsense", "--q", "10,15,20", "-o", str(out / "qsense.csv"))
    run("touchstone", "-o", str(out / "nominal.s2p"))
    run("pattern", "--f", "31e9", "-o", str(out / "pattern_nominal_31ghz.csv"))

    cfg = load_config(args.config) if args.config else default_config()
    model = cfg.model()
    print(f"{'f_ghz':>6} {'valid':>5} {'theta range':>18} {'phi range':>18} {'ripple_db':>9}")
    for f in (29e9, 31e9, 32e9, 33e9):
        run("map", "--f", f"{f:.6g}", "-o", str(out / f"map_{f / 1e9:g}ghz.csv"))
        m = steering_map(model, f)
        print(
            f"{f / 1e9:6g} {len(m.valid()):5d} "
            f"{m.theta_range[0]:8.1f} {m.theta_range[1]:8.1f} "
            f"{m.phi_range[0]:8.1f} {m.phi_range[1]:8.1f} {m.gain_ripple():9.2f}"
        )
    print(f"wrote {out}/")


if __name__ == "__main__":
    main()
