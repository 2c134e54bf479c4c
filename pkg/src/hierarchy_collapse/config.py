"""Resource caps shared by the enumeration and LP routines."""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    pivots: int = 10**6  # simplex pivots per solve
    tuple_orbit: int = 10**7  # ordered tuples visited by the transitivity BFS
    group_order: int = 10**6  # elements enumerated by full group closure
    vertex_dim: int = 6
    vertex_rows: int = 40
    hull_dim: int = 5
    hull_points: int = 64
    ls_dim: int = 3  # Fourier-Motzkin projection of the symmetric lift
    fm_rows: int = 10**5
    integer_dim: int = 24


class ResourceLimit(RuntimeError):
    """A configured cap was hit; the question is left undecided, not answered."""

    def __init__(self, kind: str, detail: str = ""):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind


_current = Limits()


def limits() -> Limits:
    return _current


def set_limits(**overrides) -> Limits:
    global _current
    _current = replace(_current, **overrides)
    return _current


def reset_limits() -> None:
    global _current
    _current = Limits()
