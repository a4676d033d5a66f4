"""Transmit power needed for a target outage, relayed against direct."""
import argparse

from owc_relay.channel import FogParams, SystemParams, link_at, snr_cdf
from owc_relay.geometry import PointingGeometry
from owc_relay.montecarlo import SimSpec, simulate
from owc_relay.relay import RelayConfig, e2e_cdf_bound, outage_closed_form


def crossing(f, target, lo=-20.0, hi=100.0):
    """Bisect for the power (dBm) where the decreasing curve f meets target."""
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f(mid) > target else (lo, mid)
    return 0.5 * (lo + hi)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--distances", type=float, nargs="+", default=[0.8, 1.6], help="km")
    ap.add_argument("--target", type=float, default=0.1)
    ap.add_argument("--gamma-th-db", type=float, default=6.0)
    ap.add_argument("--trials", type=int, default=200_000)
    args = ap.parse_args()

    gth = 10 ** (args.gamma_th_db / 10)
    fog, geom = FogParams(), PointingGeometry()

    def cfg(d, pt):
        return RelayConfig.from_geometry(d, d / 2, fog, geom, SystemParams(pt_dbm=pt))

    for d in args.distances:
        direct = crossing(lambda p: snr_cdf(gth, link_at(d, fog, geom, SystemParams(pt_dbm=p)), tolerant=True),
                          args.target)
        print(f"d = {d} km, direct link needs {direct:.2f} dBm")
        for name, f in (("approximation", outage_closed_form), ("min-bound CDF", e2e_cdf_bound)):
            pt = crossing(lambda p: f(gth, cfg(d, p)), args.target)
            sim = simulate(SimSpec(trials=args.trials, gamma_th=gth), cfg(d, pt))
            print(f"  relay ({name}) needs {pt:.2f} dBm, gain {direct - pt:.2f} dB; simulated outage there "
                  f"{sim.outage_hat:.4f} [{sim.outage_lo:.4f}, {sim.outage_hi:.4f}]")


if __name__ == "__main__":
    main()
