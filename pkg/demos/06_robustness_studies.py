"""
Convergence, resolution and threshold studies
=============================================

How the oloid's rigid-body CDS depends on trajectory length, mesh
resolution and contact threshold.
"""
from rollscore import RollerGenome, generate_two_circle_roller
from rollscore.search import OLOID, convergence_study, resolution_study, threshold_study

oloid = generate_two_circle_roller(RollerGenome.oloid())

(n0, c0), (n1, c1) = convergence_study(oloid, [50, 600])
print("CDS %.3e at %d samples, %.3e at %d: reduction %.1fx" % (c0, n0, c1, n1, c0 / c1))

fit = resolution_study(OLOID, [100, 200, 350, 600])
print("CDS ~ faces^%.2f  (R^2 = %.3f)" % (fit.exponent, fit.r_squared))

for eps, co, cc, ratio in threshold_study([0.01, 0.02, 0.04, 0.08, 0.16]):
    print("eps %.2f  oloid %.3e  cylinder %.3e  ratio %.1f" % (eps, co, cc, ratio))
