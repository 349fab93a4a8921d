"""
Rolling the oloid and a cylinder
================================

The approximate oracle sweeps a wobbling roll; the rigid-body oracle
integrates gravity-driven rolling from a few pushes. Contact uniformity is
measured with the area-weighted contact distribution score (CDS).
"""
from rollscore import (ApproxParams, RigidParams, RollerGenome, approx_roll, distribution_score,
                       generate_two_circle_roller, matched_cylinder, rigid_roll)

oloid = generate_two_circle_roller(RollerGenome.oloid())
cylinder = matched_cylinder(oloid)


def cds(mesh, ledger):
    return distribution_score(mesh.face_areas, ledger.contacts)


for mesh in (oloid, cylinder):
    print("%-28s approx %.3e" % (mesh.name, cds(mesh, approx_roll(mesh, ApproxParams()))))

params = RigidParams()
scores = {m.name: cds(m, rigid_roll(m, params)) for m in (oloid, cylinder)}
for name, value in scores.items():
    print("%-28s rigid  %.3e" % (name, value))
print("discrimination ratio: %.1f" % (scores[cylinder.name] / scores[oloid.name]))

# pushed across its axis, the cylinder rocks on a narrow band of faces
touched = (rigid_roll(cylinder, params).contacts > 0).mean()
print("fraction of cylinder faces ever touched: %.3f" % touched)
