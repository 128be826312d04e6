"""Quantum statistics of ideal gases in finite containers.

Boundary (perimeter) and connectivity (hole-count) corrections to the
density of states of 2-D domains and 3-D tubes, the resulting equations of
state and thermodynamic quantities, and an exact Dirichlet-spectrum oracle
used to verify every asymptotic formula.
"""

from .errors import (
    AccuracyError,
    ConfinedGasError,
    ConvergenceError,
    DomainError,
    GeometryError,
    ModelError,
    NoBracketError,
    NonMonotoneError,
    ResourceError,
    SingularityError,
    TruncationError,
)
from .statfun import (
    FERMI_Z_MAX,
    FunctionValue,
    Method,
    Order,
    StatKind,
    bose_limit_at_unity,
    eval_h,
    eval_h_closed_form,
    eval_h_quadrature,
    eval_h_recurrence,
    eval_h_series,
)
from .geometry import (
    Annulus,
    AspectRatioWarning,
    Disk,
    FreePlane,
    PlanarDomain,
    PolygonWithHoles,
    Rectangle,
    ShapeSpec,
    TubeDomain,
    UnitSystem,
    free_plane,
    make_domain,
    parse_shape,
    thermal_wavelength,
    weyl_state_sum,
)
from .eos import (
    GasState,
    ValidityReport,
    log_grand_potential_2d,
    log_grand_potential_tube,
    particle_number_2d,
    particle_number_tube,
    pressure,
    solve_fugacity,
)
from .thermo import (
    Aux2D,
    Aux3D,
    ThermoReport,
    aux_2d,
    aux_3d,
    dz_dT_2d,
    dz_dT_3d,
    thermo_2d,
    thermo_3d,
)
from .spectral import (
    Spectrum,
    ThetaQuery,
    annulus_spectrum,
    disk_spectrum,
    exact_thermo,
    rectangle_spectrum,
    theta_sum,
)

__version__ = "0.1.0"
