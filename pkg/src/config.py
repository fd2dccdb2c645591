"""Resource guards, tolerances and the validated run configuration."""

import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidInputError

MAX_ENUMERATION_K = 8
MAX_DENSE_K = 6
MAX_COMMUTATIVITY_K = 4
MAX_QUOTIENT_K = 7
MAX_ASSEMBLY_K = 5
MAX_SPECTRUM_K = 6
MAX_COCLIQUE_VERTICES = 1200
MAX_EXACT_QUOTIENT_DIM = 12
MAX_QUOTIENT_CELLS = 2500  # Sym[2^7] has 2461 orbits at k = 7
MAX_ORBIT_BFS_K = 6

EIGEN_TOL = 1e-6
QUOTIENT_TOL = 1e-8

CACHE_ENV_VAR = "PMSCHEME_CACHE"
_DEFAULT_CACHE = Path.home() / ".cache" / "pmscheme"

SUBCOMMANDS = (
    "enumerate",
    "classes",
    "degrees",
    "scheme-check",
    "quotient",
    "chartable",
    "ekr",
    "coclique",
    "conjectures",
)


def resolve_cache_dir(flag: str | None = None) -> Path:
    """Pick the cache directory: explicit flag, then env var, then ~/.cache."""
    if flag:
        return Path(flag).expanduser()
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env).expanduser()
    return _DEFAULT_CACHE


def default_workers() -> int:
    return os.cpu_count() or 1


@dataclass
class RunConfig:
    subcommand: str
    k: int | None = None
    k_range: tuple[int, int] | None = None
    t: int | None = None
    mode: str = "implicit"
    method: str = "quotient"
    cache_dir: Path = field(default_factory=resolve_cache_dir)
    output: str = "table"
    workers: int = field(default_factory=default_workers)
    seed: int = 0

    def validate(self) -> "RunConfig":
        if self.subcommand not in SUBCOMMANDS:
            raise InvalidInputError(f"unknown subcommand {self.subcommand!r}")
        if self.k is not None and self.k < 1:
            raise InvalidInputError(f"k must be positive, got {self.k}")
        if self.k_range is not None:
            lo, hi = self.k_range
            if lo < 1 or hi < lo:
                raise InvalidInputError(f"bad k range {lo}..{hi}")
        if self.t is not None:
            if self.t < 1:
                raise InvalidInputError(f"t must be positive, got {self.t}")
            if self.k is not None and self.t > self.k // 2:
                raise InvalidInputError(
                    f"t={self.t} exceeds floor(k/2)={self.k // 2}"
                )
        if self.mode not in ("dense", "implicit"):
            raise InvalidInputError(f"unknown mode {self.mode!r}")
        if self.method not in ("quotient", "spectrum", "both"):
            raise InvalidInputError(f"unknown method {self.method!r}")
        if self.output not in ("table", "json"):
            raise InvalidInputError(f"unknown output format {self.output!r}")
        if self.workers < 1:
            raise InvalidInputError("--workers must be at least 1")
        if self.mode == "dense" and self.k is not None and self.k > MAX_DENSE_K:
            raise InvalidInputError(
                f"dense mode supports k <= {MAX_DENSE_K}, got {self.k}"
            )
        return self
