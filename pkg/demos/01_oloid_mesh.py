"""
Building an oloid mesh
======================

Two unit circles in perpendicular planes, each through the other's
centre, span a convex hull called the oloid. Its surface area equals that
of the unit sphere.
"""
import math

import numpy as np

from rollscore import RollerGenome, generate_two_circle_roller, matched_cylinder
from rollscore.io import write_obj

genome = RollerGenome.oloid()
mesh = generate_two_circle_roller(genome, samples_per_circle=350)
print(mesh.name, mesh.n_faces, "faces")

# area against 4 pi, and the classical volume 3.0524
print("area   %.5f  (4 pi = %.5f)" % (mesh.total_area, 4 * math.pi))
print("volume %.5f" % mesh.volume)

# inertia about the centre of mass, unit mass
np.set_printoptions(precision=4, suppress=True)
print(mesh.inertia_tensor)

# a cylinder with about the same number of faces serves as the baseline
cyl = matched_cylinder(mesh)
print("baseline cylinder:", cyl.n_faces, "faces")

write_obj(mesh, "oloid.obj")
