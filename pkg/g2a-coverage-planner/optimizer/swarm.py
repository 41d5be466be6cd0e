"""
Particle swarm primitives shared by the SLBC and ABC optimizers.

Velocity/position update (continuous):

    V' = w·V + c1·F1·(S_L - B) + c2·F2·(S_G - B)
    B' = B + V'

The discrete variant uses (g, d1, d2) and floors B + G' to a codebook index.
Local and global bests only move to feasible points (κ ≤ T); a particle
without a feasible best yet feels no attraction towards it.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import config


class SwarmConfig(BaseModel):
    """Swarm hyper-parameters and the overlap cap."""

    model_config = ConfigDict(frozen=True)

    particle_count: int = Field(default_factory=lambda: config.SWARM_PARTICLES, ge=1)
    iterations: int = Field(default_factory=lambda: config.SWARM_ITERATIONS, ge=1)
    c1: float = Field(default_factory=lambda: config.SWARM_C1, gt=0.0)
    c2: float = Field(default_factory=lambda: config.SWARM_C2, gt=0.0)
    d1: float = Field(default_factory=lambda: config.SWARM_D1, gt=0.0)
    d2: float = Field(default_factory=lambda: config.SWARM_D2, gt=0.0)
    w_min: float = Field(default_factory=lambda: config.SWARM_W_MIN, gt=0.0)
    w_max: float = Field(default_factory=lambda: config.SWARM_W_MAX, gt=0.0)
    overlap_cap: float = Field(default_factory=lambda: config.DEFAULT_OVERLAP_CAP, ge=0.0, le=1.0)
    seed: int = Field(0, ge=0)
    init_velocity_fraction: float = Field(default_factory=lambda: config.SWARM_INIT_VELOCITY_FRACTION, ge=0.0)
    velocity_clamp_fraction: float = Field(default_factory=lambda: config.SWARM_VELOCITY_CLAMP_FRACTION, gt=0.0)
    leakage_weight: float = Field(default_factory=lambda: config.LEAKAGE_WEIGHT, ge=0.0)

    @model_validator(mode="after")
    def _inertia_bounds(self):
        if self.w_min > self.w_max:
            raise ValueError(f"w_min={self.w_min} exceeds w_max={self.w_max}")
        return self


def inertia_weight(l: int, swarm_config: SwarmConfig) -> float:
    """
    Linearly decreasing inertia w(l), from w_max at l = 1 to w_min at l = N_iter.

    Args:
        l: Iteration counter, 1 <= l <= N_iter
        swarm_config: Swarm configuration

    Returns:
        Inertia weight (w_max when N_iter = 1)
    """
    n_iter = swarm_config.iterations
    if not 1 <= l <= n_iter:
        raise ValueError(f"Iteration {l} outside 1..{n_iter}")
    if n_iter == 1 or l == 1:
        return swarm_config.w_max
    if l == n_iter:
        return swarm_config.w_min
    return swarm_config.w_max - (l - 1) * (swarm_config.w_max - swarm_config.w_min) / (n_iter - 1)


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    rng: np.random.Generator = field(repr=False)
    best_position: Optional[np.ndarray] = None
    best_fitness: float = -np.inf
    best_cor: float = np.nan

    @property
    def dimension(self) -> int:
        return int(self.position.shape[0])


def _attraction(coeff: float, factor: float, target: Optional[np.ndarray], position: np.ndarray) -> np.ndarray:
    if target is None:
        return np.zeros_like(position)
    return coeff * factor * (target - position)


def _new_velocity(
    particle: Particle,
    global_best: Optional[np.ndarray],
    w: float,
    local_coeff: float,
    global_coeff: float,
    f1: Optional[float],
    f2: Optional[float],
) -> np.ndarray:
    f1 = particle.rng.random() if f1 is None else f1
    f2 = particle.rng.random() if f2 is None else f2
    return (
        w * particle.velocity
        + _attraction(local_coeff, f1, particle.best_position, particle.position)
        + _attraction(global_coeff, f2, global_best, particle.position)
    )


def update_continuous(
    particle: Particle,
    global_best: Optional[np.ndarray],
    w: float,
    swarm_config: SwarmConfig,
    lower: Sequence[float],
    upper: Sequence[float],
    f1: Optional[float] = None,
    f2: Optional[float] = None,
) -> Particle:
    """
    Continuous velocity/position update.

    F1 and F2 are drawn once per call from the particle's own RNG unless
    forced. Velocities are clamped to half the box width per dimension,
    positions to the box.

    Args:
        particle: Particle to move (its best_position is S_L)
        global_best: Swarm global best S_G, or None if not found yet
        w: Inertia weight
        swarm_config: Coefficients c1, c2
        lower: Box lower bounds
        upper: Box upper bounds
        f1: Forced F1 in [0, 1]
        f2: Forced F2 in [0, 1]

    Returns:
        The moved particle (bests untouched)
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    limit = swarm_config.velocity_clamp_fraction * (upper - lower)

    velocity = _new_velocity(particle, global_best, w, swarm_config.c1, swarm_config.c2, f1, f2)
    velocity = np.clip(velocity, -limit, limit)
    particle.velocity = velocity
    particle.position = np.clip(particle.position + velocity, lower, upper)
    return particle


def update_discrete(
    particle: Particle,
    global_best: Optional[np.ndarray],
    g: float,
    swarm_config: SwarmConfig,
    size: int,
    f1: Optional[float] = None,
    f2: Optional[float] = None,
) -> Particle:
    """
    Discrete update over codebook indices 1..size.

    Same velocity form with (g, d1, d2); the new position is floor(X + G')
    clamped to [1, size].
    """
    limit = swarm_config.velocity_clamp_fraction * max(size - 1, 0)

    velocity = _new_velocity(particle, global_best, g, swarm_config.d1, swarm_config.d2, f1, f2)
    velocity = np.clip(velocity, -limit, limit)
    particle.velocity = velocity
    particle.position = np.clip(np.floor(particle.position + velocity), 1, size)
    return particle


@dataclass
class SwarmState:
    """Particles plus the global best of one swarm."""

    particles: List[Particle]
    lower: np.ndarray
    upper: np.ndarray
    discrete: bool = False
    global_best_position: Optional[np.ndarray] = None
    global_best_fitness: float = -np.inf
    global_best_cor: float = np.nan
    iteration: int = 0

    @classmethod
    def initialize(
        cls,
        seeds: Sequence[np.random.SeedSequence],
        lower: Sequence[float],
        upper: Sequence[float],
        swarm_config: SwarmConfig,
        discrete: bool = False,
    ) -> "SwarmState":
        """
        Uniform positions over the box (integers for a discrete swarm) and
        velocities uniform in ±init_velocity_fraction of the box width.
        """
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        spread = swarm_config.init_velocity_fraction * (upper - lower)

        particles = []
        for seed in seeds:
            rng = np.random.default_rng(seed)
            if discrete:
                position = rng.integers(lower.astype(int), upper.astype(int) + 1).astype(float)
            else:
                position = rng.uniform(lower, upper)
            velocity = rng.uniform(-spread, spread)
            particles.append(Particle(position=position, velocity=velocity, rng=rng))
        return cls(particles=particles, lower=lower, upper=upper, discrete=discrete)

    def accept(self, index: int, fitness: float, cor: float, feasible: bool) -> bool:
        """Move particle `index`'s local best to its current position if feasible and strictly better."""
        particle = self.particles[index]
        if feasible and fitness > particle.best_fitness:
            particle.best_position = particle.position.copy()
            particle.best_fitness = fitness
            particle.best_cor = cor
            return True
        return False

    def refresh_global(self) -> None:
        """Global best = max over local bests; the lowest particle index wins ties."""
        best = None
        for particle in self.particles:
            if particle.best_position is None:
                continue
            if best is None or particle.best_fitness > best.best_fitness:
                best = particle
        if best is not None:
            self.global_best_position = best.best_position.copy()
            self.global_best_fitness = best.best_fitness
            self.global_best_cor = best.best_cor

    def step(self, w: float, swarm_config: SwarmConfig) -> None:
        """Move every particle once."""
        for particle in self.particles:
            if self.discrete:
                update_discrete(particle, self.global_best_position, w, swarm_config, int(self.upper[0]))
            else:
                update_continuous(particle, self.global_best_position, w, swarm_config, self.lower, self.upper)
        self.iteration += 1

    def trace_row(self, l: int) -> Tuple[int, Optional[float], Optional[float]]:
        """(l, best ξ, best κ); None before the first feasible best."""
        if not self.has_feasible:
            return (l, None, None)
        return (l, float(self.global_best_fitness), float(self.global_best_cor))

    @property
    def has_feasible(self) -> bool:
        return self.global_best_position is not None


def particle_seeds(seed: int, swarms: int, particles: int) -> List[List[np.random.SeedSequence]]:
    """Independent per-particle seed sequences for each swarm, derived from one master seed."""
    return [child.spawn(particles) for child in np.random.SeedSequence(seed).spawn(swarms)]
