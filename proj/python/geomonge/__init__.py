"""Transport-ray decomposition of the Monge problem on finite geodesic spaces.

Thin wrapper over the compiled module: spaces, exact couplings, ray
systems, disintegration, one-dimensional rearrangement, currents and
curvature-dimension checks.
"""

import json as _json

from ._geomonge import *  # noqa: F401,F403
from ._geomonge import run_scenario as _run_scenario_raw


def run_scenario(name, seed=0, config=None):
    """Run a built-in scenario and return the report as a dict."""
    cfg = "" if config is None else _json.dumps(config)
    return _json.loads(_run_scenario_raw(name, seed, cfg))
