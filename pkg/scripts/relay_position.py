"""Outage against relay position on a fixed source-destination link."""
import argparse

import numpy as np

from owc_relay.channel import FogParams, SystemParams
from owc_relay.geometry import PointingGeometry
from owc_relay.relay import RelayConfig, e2e_cdf_bound, outage_exact


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=float, default=1.0, help="link length, km")
    ap.add_argument("--pt", type=float, default=15.0, help="transmit power, dBm")
    ap.add_argument("--gamma-th-db", type=float, default=6.0)
    ap.add_argument("--points", type=int, default=11)
    args = ap.parse_args()

    gth = 10 ** (args.gamma_th_db / 10)
    system = SystemParams(pt_dbm=args.pt)
    print(f"{'d_r km':>8} {'min-bound':>12} {'harmonic':>12}")
    rows = []
    for d_r in np.linspace(0.25 * args.d, 0.75 * args.d, args.points):
        cfg = RelayConfig.from_geometry(args.d, float(d_r), FogParams(), PointingGeometry(), system)
        rows.append((d_r, e2e_cdf_bound(gth, cfg), outage_exact(gth, cfg, "harmonic")))
        print(f"{d_r:8.3f} {rows[-1][1]:12.5f} {rows[-1][2]:12.5f}")
    best = min(rows, key=lambda r: r[1])
    print(f"minimum outage at d_r = {best[0]:.3f} km")


if __name__ == "__main__":
    main()
