from ._core import (
    Channel,
    Error,
    LabelError,
    OperatorRangeError,
    ParseError,
    PsdError,
    ResourceError,
    ShapeError,
    ValidationError,
    __version__,
    bound,
    channel_violations,
    holevo_chi,
    lemma_sweeps,
    run_cli,
    simulate,
    symmetrize,
    trace_norm,
    von_neumann_entropy,
)

__all__ = [
    "Channel",
    "Error",
    "LabelError",
    "OperatorRangeError",
    "ParseError",
    "PsdError",
    "ResourceError",
    "ShapeError",
    "ValidationError",
    "__version__",
    "bound",
    "channel_violations",
    "holevo_chi",
    "lemma_sweeps",
    "run_cli",
    "simulate",
    "symmetrize",
    "trace_norm",
    "von_neumann_entropy",
]
