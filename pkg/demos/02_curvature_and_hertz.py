"""
Curvature and Hertz pressure
============================

Discrete curvatures give each face an effective radius, and Hertz theory
turns that radius into a peak contact pressure.
"""
import math

import numpy as np

from rollscore import (MaterialSuite, RollerGenome, compute_curvatures, generate_icosphere,
                       generate_two_circle_roller, hertz_peak_pressure)
from rollscore.curvature import angle_defects

# the angle defects of any closed genus-0 mesh add up to 4 pi
sphere = generate_icosphere(4)
print("sphere defect sum / 4pi:", angle_defects(sphere).sum() / (4 * math.pi))
curv = compute_curvatures(sphere)
print("sphere mean H: %.3f" % np.average(curv.vertex_mean, weights=curv.vertex_area))

# the oloid is developable, but the hull facets still carry discrete curvature
oloid = generate_two_circle_roller(RollerGenome.oloid())
curv = compute_curvatures(oloid)
print("oloid mean |K|: %.3f" % np.average(np.abs(curv.vertex_gaussian), weights=curv.vertex_area))

steel = MaterialSuite()
p = hertz_peak_pressure(curv.r_eff, steel.hertz_load, steel)
print("peak pressure at %g N: mean %.1f MPa, cv %.3f"
      % (steel.hertz_load, p.mean() / 1e6, p.std() / p.mean()))

# pressure grows as F^(1/3); 5000 N stays below the 250 MPa endurance limit here
p_fatigue = hertz_peak_pressure(curv.r_eff, steel.fatigue_load, steel)
print("max pressure at %g N: %.1f MPa" % (steel.fatigue_load, p_fatigue.max() / 1e6))
