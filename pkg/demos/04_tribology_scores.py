"""
Stress, heat, fatigue and wear
==============================

The same variance template scores Hertz stress, frictional heat, Miner
fatigue damage and Archard wear along the rigid-body trajectory.
"""
from rollscore import (MaterialSuite, RigidParams, RollerGenome, compute_curvatures,
                       generate_two_circle_roller, matched_cylinder, rigid_roll_with_physics,
                       score_report, uniform_contact_ledger)

materials = MaterialSuite(fatigue_load=5000.0)
oloid = generate_two_circle_roller(RollerGenome.oloid())
cylinder = matched_cylinder(oloid)

reports = {}
for mesh in (oloid, cylinder):
    ledger = rigid_roll_with_physics(mesh, RigidParams(), materials, compute_curvatures(mesh))
    reports[mesh.name] = score_report(mesh, ledger)

for name, rep in reports.items():
    print(name)
    for key, value in rep.vector().items():
        print("   %-10s %.3e" % (key, value))

# with contact spread exactly in proportion to area, only curvature is left
geometry_only = score_report(oloid, uniform_contact_ledger(oloid, compute_curvatures(oloid)))
print("uniform-contact oloid SDS: %.3e" % geometry_only.sds)
