"""Linear-elastic quad4/hex8 finite elements with a decomposed stiffness."""
from mdecomp.fem.assembly import (
    BoundaryConditions,
    GlobalSystem,
    SingularSystemError,
    SolverError,
    assemble,
    reassemble_deviatoric,
    solve,
)
from mdecomp.fem.element import (
    DEV_REDUCED,
    FULL,
    VOL_REDUCED,
    IntegrationScheme,
    b_matrix,
    element_stiffness,
    scheme_named,
)
from mdecomp.fem.io import read_bcs, write_results
from mdecomp.fem.locking import locking_study, write_report
from mdecomp.fem.mesh import Mesh, MeshError, box_mesh, read_mesh, rectangle_mesh, write_mesh
from mdecomp.fem.recovery import FieldRecovery, recover_fields

__all__ = [
    "BoundaryConditions", "GlobalSystem", "SingularSystemError", "SolverError",
    "assemble", "reassemble_deviatoric", "solve",
    "DEV_REDUCED", "FULL", "VOL_REDUCED", "IntegrationScheme", "b_matrix",
    "element_stiffness", "scheme_named",
    "read_bcs", "write_results", "locking_study", "write_report",
    "Mesh", "MeshError", "box_mesh", "read_mesh", "rectangle_mesh", "write_mesh",
    "FieldRecovery", "recover_fields",
]
