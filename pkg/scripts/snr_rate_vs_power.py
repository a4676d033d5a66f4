"""Average end-to-end SNR and rate bounds against transmit power."""
import argparse
import math

import numpy as np

from owc_relay.channel import FogParams, SystemParams, link_at
from owc_relay.geometry import PointingGeometry
from owc_relay.relay import (RelayConfig, avg_snr_k2, direct_avg_snr_closed, direct_rate_lower,
                             ergodic_rate_k2)


def db(x):
    return 10 * math.log10(x)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--distances", type=float, nargs="+", default=[0.6, 1.0, 2.0], help="km")
    ap.add_argument("--pt", type=float, nargs=3, default=[10.0, 30.0, 5], metavar=("LO", "HI", "N"))
    args = ap.parse_args()

    fog, geom = FogParams(), PointingGeometry()
    print(f"{'d km':>5} {'pt dBm':>7} {'relay dB':>9} {'direct dB':>10} {'relay b/s/Hz':>13} {'direct b/s/Hz':>14}")
    for d in args.distances:
        for pt in np.linspace(args.pt[0], args.pt[1], int(args.pt[2])):
            system = SystemParams(pt_dbm=float(pt))
            cfg = RelayConfig.from_geometry(d, d / 2, fog, geom, system)
            ln = link_at(d, fog, geom, system)
            print(f"{d:5.2f} {pt:7.1f} {db(avg_snr_k2(cfg)):9.3f} {db(direct_avg_snr_closed(ln)):10.3f} "
                  f"{ergodic_rate_k2(cfg):13.4f} {direct_rate_lower(ln):14.4f}")


if __name__ == "__main__":
    main()
