"""Relay and direct outage against transmit power, with optional simulation."""
import argparse

import numpy as np

from owc_relay.channel import FogParams, SystemParams, link_at, snr_cdf
from owc_relay.geometry import PointingGeometry
from owc_relay.montecarlo import SimSpec, simulate
from owc_relay.relay import RelayConfig, e2e_cdf_bound, outage_closed_form, outage_exact


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--distances", type=float, nargs="+", default=[0.8, 1.6], help="km")
    ap.add_argument("--pt", type=float, nargs=3, default=[0.0, 30.0, 7], metavar=("LO", "HI", "N"))
    ap.add_argument("--gamma-th-db", type=float, default=6.0)
    ap.add_argument("--trials", type=int, default=0, help="simulated trials per point (0 skips)")
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()

    gth = 10 ** (args.gamma_th_db / 10)
    fog, geom = FogParams(), PointingGeometry()
    for d in args.distances:
        print(f"\nd = {d} km")
        print(f"{'pt dBm':>7} {'approx':>11} {'min-bound':>11} {'harmonic':>11} {'sim':>11} {'direct':>11}")
        for pt in np.linspace(args.pt[0], args.pt[1], int(args.pt[2])):
            system = SystemParams(pt_dbm=float(pt))
            cfg = RelayConfig.from_geometry(d, d / 2, fog, geom, system)
            sim = float("nan")
            if args.trials:
                sim = simulate(SimSpec(trials=args.trials, master_seed=args.seed, gamma_th=gth), cfg).outage_hat
            direct = snr_cdf(gth, link_at(d, fog, geom, system), tolerant=True)
            print(f"{pt:7.1f} {outage_closed_form(gth, cfg):11.4e} {e2e_cdf_bound(gth, cfg):11.4e} "
                  f"{outage_exact(gth, cfg, 'harmonic'):11.4e} {sim:11.4e} {direct:11.4e}")


if __name__ == "__main__":
    main()
