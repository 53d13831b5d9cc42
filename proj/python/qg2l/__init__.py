from ._qg2l import (
    Lattice,
    __version__,
    build_background,
    constants_ledger,
    growth_rate,
    instability_scan,
    invert_pv,
    jacobian,
    pv_from_streamfunction,
    run,
    sobolev_norm,
)

__all__ = [
    "Lattice",
    "__version__",
    "build_background",
    "constants_ledger",
    "growth_rate",
    "instability_scan",
    "invert_pv",
    "jacobian",
    "pv_from_streamfunction",
    "run",
    "sobolev_norm",
]
