import os
from dataclasses import dataclass

ENV_EPS_REL = "HELLY_EPS_REL"
ENV_CONTAINMENT_SLACK = "HELLY_CONTAINMENT_SLACK"


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by all geometric routines.

    ``eps_rel`` governs comparisons of coordinates (deduplication, facet
    incidence, degenerate-branch detection); ``containment_slack`` is the
    relative slack granted to every containment certificate.
    """

    eps_rel: float = 1e-9
    containment_slack: float = 1e-7

    def __post_init__(self):
        for name in ("eps_rel", "containment_slack"):
            value = getattr(self, name)
            if not (0.0 < value < 1e-3):
                raise ValueError(f"{name} must lie in (0, 1e-3), got {value!r}")

    @classmethod
    def from_env(cls, environ=None):
        """Build a tolerance honouring the ``HELLY_*`` environment overrides."""
        environ = os.environ if environ is None else environ
        kwargs = {}
        if environ.get(ENV_EPS_REL):
            kwargs["eps_rel"] = float(environ[ENV_EPS_REL])
        if environ.get(ENV_CONTAINMENT_SLACK):
            kwargs["containment_slack"] = float(environ[ENV_CONTAINMENT_SLACK])
        return cls(**kwargs)


DEFAULT_TOLERANCE = Tolerance()
