"""Performance of a dual-hop amplify-and-forward optical wireless link under fog and pointing error."""

__version__ = "0.1.0"

from .channel import FogParams, LinkParams, SystemParams, link_at, make_link, snr_cdf, snr_pdf
from .errors import (ConfigError, DomainError, EvaluationFailure, NonConvergence, NotSymmetric,
                     OWCError, SingularParameter)
from .geometry import PointingGeometry, PointingParams, beam_waist, pointing_params
from .montecarlo import SimResult, SimSpec, simulate
from .relay import (MetricReport, RelayConfig, avg_snr_closed, avg_snr_k2, diversity_order,
                    direct_metrics, e2e_cdf_bound, e2e_pdf_bound, e2e_pdf_exact, ergodic_rate_closed,
                    ergodic_rate_k2, outage_closed_form, outage_exact, relay_metrics)

__all__ = [
    "FogParams", "LinkParams", "SystemParams", "link_at", "make_link", "snr_cdf", "snr_pdf",
    "ConfigError", "DomainError", "EvaluationFailure", "NonConvergence", "NotSymmetric", "OWCError",
    "SingularParameter", "PointingGeometry", "PointingParams", "beam_waist", "pointing_params",
    "SimResult", "SimSpec", "simulate", "MetricReport", "RelayConfig", "avg_snr_closed", "avg_snr_k2",
    "diversity_order", "direct_metrics", "e2e_cdf_bound", "e2e_pdf_bound", "e2e_pdf_exact",
    "ergodic_rate_closed", "ergodic_rate_k2", "outage_closed_form", "outage_exact", "relay_metrics",
]
