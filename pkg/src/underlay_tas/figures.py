"""Reference parameter sets and sweep grids used by the shipped configs."""

from __future__ import annotations

import numpy as np

from .model import SystemParams

# Outage and AF figures: P_M = 1, P_S = 0.5, N0 = 1e-2, lam_ps = lam_sp = 10, lam_ss = 3.
FIG2 = SystemParams(n_antennas=4, pt_power=1.0, st_power=0.5, noise=1e-2,
                    interference_threshold=0.1, rate_ps=10.0, rate_ss=3.0, rate_sp=10.0,
                    outage_threshold=1.0, ds_weight=0.2)
FIG3 = FIG2
# Capacity figures: T = 0.1, P_S swept from 0.1 to 100.
FIG4 = FIG2.replace(st_power=1.0)
FIG5 = FIG4

ANTENNA_COUNTS = (2, 4, 8)
# Spans halt-dominated to nearly unconstrained operation at P_S = 0.5, lam_sp = 10.
T_GRID = (0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0)
PS_GRID = tuple(float(v) for v in np.geomspace(0.1, 100.0, 7))
PS_DB_GRID = (10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
