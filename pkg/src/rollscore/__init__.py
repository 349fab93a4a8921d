"""Contact-uniformity scores for rolling solids.

Generate two-circle rollers, roll them with an approximate or rigid-body
oracle, and measure how evenly contact, stress, heat, fatigue damage and
wear spread over the surface.
"""
from .curvature import CurvatureField, compute_curvatures
from .dynamics import (ApproxParams, ContactLedger, RigidParams, approx_roll, rigid_roll,
                       rigid_roll_with_physics, rigid_trajectory, uniform_contact_ledger)
from .errors import (DegenerateHull, DegenerateTriangle, InsufficientPoints, IntegrationDiverged,
                     MismatchedLengths, MissingCurvature, NonClosedMesh, NonPositiveRadius,
                     RollscoreError)
from .mesh import (RollerGenome, TriangleMesh, generate_box, generate_cylinder, generate_icosphere,
                   generate_oloid, generate_two_circle_roller, matched_cylinder, mesh_from_points)
from .scores import (MaterialSuite, ScoreReport, archard_wear_volume, basquin_cycles_to_failure,
                     distribution_score, frictional_heat_flux, hertz_peak_pressure, miner_damage,
                     score_report)
from .search import (SearchGrid, SearchResult, convergence_study, resolution_study, run_search,
                     sensitivity_sweep, threshold_study)

__version__ = "0.1.0"
