"""GDOP, satellite weighting and greedy subset selection.

The weighting minimizes ``f(W) = trace((A^T W A)^-1)`` over diagonal
non-negative weights with ``sum(w) == r``. A satellite's final weight is
its selection priority: the greedy selector starts from the highest
weighted satellites and grows the subset until its GDOP is within a
relative gap of the full-set GDOP.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometryError

MAX_CONDITION = 1e12


def is_ill_conditioned(normal: np.ndarray) -> bool:
    """Condition estimate of a symmetric normal matrix above ``MAX_CONDITION``."""
    ev = np.linalg.eigvalsh(normal)
    return not (ev[0] > 0.0 and ev[-1] <= MAX_CONDITION * ev[0])


@dataclass(frozen=True)
class SelectionConfig:
    gdop_gap_threshold: float = 0.05
    altitude_aided: bool = False
    max_weight_iterations: int = 3
    initial_step: float = 0.2
    step_shrink: float = 0.5
    max_step_retries: int = 30

    def __post_init__(self):
        if not 0.0 < self.gdop_gap_threshold < 1.0:
            raise ValueError("gdop_gap_threshold must lie in (0, 1)")
        if self.max_weight_iterations < 1:
            raise ValueError("max_weight_iterations must be >= 1")
        if self.initial_step <= 0.0 or not 0.0 < self.step_shrink < 1.0:
            raise ValueError("initial_step must be > 0 and step_shrink in (0, 1)")

    @property
    def min_satellites(self) -> int:
        return 3 if self.altitude_aided else 4


@dataclass(frozen=True)
class SelectionResult:
    selected_indices: tuple[int, ...]
    full_gdop: float
    subset_gdop: float
    relative_gap: float
    weights: np.ndarray = field(repr=False, compare=False)


def _inverse_normal(a: np.ndarray, w: np.ndarray | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    n = a.T @ a if w is None else (a.T * w) @ a
    if a.shape[0] < a.shape[1] or is_ill_conditioned(n):
        raise DegenerateGeometryError("normal matrix is singular or ill-conditioned")
    return np.linalg.inv(n)


def gdop(a: np.ndarray) -> float:
    """``sqrt(trace((A^T A)^-1))``."""
    return float(np.sqrt(np.trace(_inverse_normal(a))))


def weighted_dilution(a: np.ndarray, w: np.ndarray) -> float:
    """Objective ``trace((A^T W A)^-1)`` for diagonal weights ``w``."""
    return float(np.trace(_inverse_normal(a, np.asarray(w, dtype=float))))


def weight_gradient(a: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Gradient of :func:`weighted_dilution` with respect to each weight.

    With ``M = A (A^T W A)^-1`` the k-th component is ``-sum_j M[k, j]**2``.
    """
    a = np.asarray(a, dtype=float)
    m = a @ _inverse_normal(a, np.asarray(w, dtype=float))
    return -np.sum(m * m, axis=1)


def _project(w: np.ndarray, total: float) -> np.ndarray:
    w = np.clip(w, 0.0, None)
    s = w.sum()
    return w * (total / s) if s > 0 else np.full_like(w, total / w.size)


def optimize_weights(a: np.ndarray, config: SelectionConfig = SelectionConfig(),
                     history: list | None = None) -> np.ndarray:
    """Projected gradient descent on the weighted dilution.

    Starts from uniform weights. Each iteration steps along the negative
    gradient projected onto ``sum(w) == r``, clamps negatives and rescales.
    A step that fails to decrease the objective (or makes the normal
    matrix singular) is retried at ``step_shrink`` times the step size.
    The objective value of every accepted iterate is appended to
    ``history`` when given.
    """
    a = np.asarray(a, dtype=float)
    r = a.shape[0]
    if r < 4:
        raise DegenerateGeometryError("weight optimization needs at least 4 rows")
    w = np.ones(r)
    fw = weighted_dilution(a, w)
    if history is not None:
        history.append(fw)
    step = config.initial_step

    for _ in range(config.max_weight_iterations):
        g = weight_gradient(a, w)
        d = -(g - g.mean())
        scale = np.max(np.abs(d))
        if scale == 0.0:
            break
        d /= scale
        for _ in range(config.max_step_retries):
            cand = _project(w + step * d, float(r))
            try:
                fc = weighted_dilution(a, cand)
            except DegenerateGeometryError:
                fc = np.inf
            if fc < fw:
                w, fw = cand, fc
                if history is not None:
                    history.append(fw)
                break
            step *= config.step_shrink
        else:
            break
    return w


def with_altitude_row(a: np.ndarray, up: np.ndarray) -> np.ndarray:
    """Append the virtual height row ``(-up, 1)`` to a geometry matrix."""
    row = np.ones((1, 4))
    row[0, :3] = -np.asarray(up, dtype=float) / np.linalg.norm(up)
    return np.vstack([np.asarray(a, dtype=float), row])


def priority_order(w: np.ndarray) -> list[int]:
    """Indices by descending weight, ties to the lower index."""
    return sorted(range(len(w)), key=lambda i: (-w[i], i))


def relative_gap(full: float, subset: float) -> float:
    return abs(full - subset) / full


def select_subset(a: np.ndarray, config: SelectionConfig = SelectionConfig(),
                  up: np.ndarray | None = None) -> SelectionResult:
    """Greedy weight-ordered selection of a GDOP-qualified subset.

    ``up`` is the receiver's local vertical, required when
    ``config.altitude_aided`` is set; the virtual height row is then part
    of both the full-set and subset GDOP.
    """
    a = np.asarray(a, dtype=float)
    r = a.shape[0]
    k0 = config.min_satellites
    if r < k0:
        raise DegenerateGeometryError(f"need at least {k0} satellites, got {r}")
    if config.altitude_aided:
        if up is None:
            raise ValueError("altitude-aided selection needs the receiver up vector")
        extend = lambda m: with_altitude_row(m, up)  # noqa: E731
    else:
        extend = lambda m: m  # noqa: E731

    full = gdop(extend(a))
    w = optimize_weights(extend(a), config)[:r]
    order = priority_order(w)

    chosen = order[:k0]
    remaining = order[k0:]
    while True:
        if len(chosen) == r:
            sub = full
            break
        try:
            sub = gdop(extend(a[chosen]))
        except DegenerateGeometryError:
            sub = None
        if sub is not None and relative_gap(full, sub) < config.gdop_gap_threshold:
            break
        chosen.append(remaining.pop(0))

    return SelectionResult(
        selected_indices=tuple(chosen),
        full_gdop=full,
        subset_gdop=sub,
        relative_gap=relative_gap(full, sub),
        weights=w,
    )
