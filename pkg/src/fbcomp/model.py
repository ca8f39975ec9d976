"""Core value types: model parameters, initial data, numerics, simulation state."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidSpec, InvalidState

__all__ = ["ModelParams", "InitialData", "NumericsConfig", "SimState"]


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the two-species competition system.

    u diffuses with coefficient d and grows logistically at rate r; v has unit
    diffusivity and growth.  k is the competition pressure of v on u, h the
    pressure of u on v.  mu1/mu2 convert the front density gradient into front
    velocity (Stefan condition).  N is the space dimension (radial symmetry).
    """

    d: float
    r: float
    h: float
    k: float
    mu1: float
    mu2: float
    N: int = 1

    def validate(self) -> "ModelParams":
        for name in ("d", "r", "h", "k", "mu1", "mu2"):
            if not getattr(self, name) > 0:
                raise InvalidSpec(f"parameter {name} must be > 0")
        if not (isinstance(self.N, int) and self.N >= 1):
            raise InvalidSpec("N must be an integer >= 1")
        return self

    @property
    def weak_strong(self) -> bool:
        return 0 < self.k < 1 < self.h

    def require_weak_strong(self):
        if not self.weak_strong:
            raise InvalidSpec(f"need 0 < k < 1 < h, got k={self.k}, h={self.h}")


@dataclass(frozen=True)
class InitialData:
    """Initial fronts and profiles, sampled on uniform grids over [0, front].

    The v side may be omitted (None) for single-free-boundary setups.  A
    species may also be identically zero, meaning it is absent; otherwise the
    profile must be positive inside its support and vanish at the front.
    """

    s1_0: float
    u0: np.ndarray
    s2_0: float | None = None
    v0: np.ndarray | None = None

    def validate(self) -> "InitialData":
        _check_profile("u0", self.s1_0, self.u0)
        if (self.s2_0 is None) != (self.v0 is None):
            raise InvalidSpec("s2_0 and v0 must be given together")
        if self.s2_0 is not None:
            _check_profile("v0", self.s2_0, self.v0)
        return self


def _check_profile(name, front, values):
    if not front > 0:
        raise InvalidSpec(f"{name}: front must be > 0")
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or len(v) < 5:
        raise InvalidSpec(f"{name}: need a 1-d profile with >= 5 samples")
    if not np.isfinite(v).all():
        raise InvalidSpec(f"{name}: non-finite values")
    if v[-1] != 0.0:
        raise InvalidSpec(f"{name}: profile must vanish at the front")
    if np.all(v == 0.0):
        return  # absent species
    if np.any(v < 0.0) or np.any(v[:-1] <= 0.0):
        raise InvalidSpec(f"{name}: profile must be positive inside [0, front)")
    # discrete symmetry at the origin (one-sided second-order derivative)
    dr = front / (len(v) - 1)
    d0 = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * dr)
    if abs(d0) > 0.05 * np.max(v) / front:
        raise InvalidSpec(f"{name}: profile derivative at r=0 must vanish")


@dataclass(frozen=True)
class NumericsConfig:
    """Discretization controls for the time integrator."""

    n_cells: int = 2000
    dt: float = 1e-3
    scheme: str = "imex"
    snapshot_every: int = 2000
    t_end: float = 100.0

    def validate(self) -> "NumericsConfig":
        if self.n_cells < 32:
            raise InvalidSpec("n_cells must be >= 32")
        if not self.dt > 0:
            raise InvalidSpec("dt must be > 0")
        if self.scheme not in ("imex", "explicit"):
            raise InvalidSpec(f"unknown scheme {self.scheme!r}")
        if self.snapshot_every < 1:
            raise InvalidSpec("snapshot_every must be >= 1")
        if not self.t_end > 0:
            raise InvalidSpec("t_end must be > 0")
        return self

    def with_(self, **kw) -> "NumericsConfig":
        return replace(self, **kw)


@dataclass(frozen=True)
class SimState:
    """Snapshot of the straightened system at one time.

    U lives on the fixed grid R in [0,1] with physical radius r = R*s1; V
    likewise with r = R*s2.  In single-free-boundary mode V lives on a fixed
    physical grid and s2 is the (constant) truncation radius.
    """

    t: float
    s1: float
    s2: float
    s1_dot: float
    s2_dot: float
    U: np.ndarray
    V: np.ndarray

    def validate(self, tol: float = 0.0) -> "SimState":
        for name, front in (("s1", self.s1), ("s2", self.s2)):
            if not front > 0:
                raise InvalidState(f"{name} must be > 0")
        for name, prof in (("U", self.U), ("V", self.V)):
            p = np.asarray(prof)
            if not np.isfinite(p).all():
                raise InvalidState(f"{name}: non-finite values")
            if np.any(p < -tol):
                raise InvalidState(f"{name}: negative values")
        return self
