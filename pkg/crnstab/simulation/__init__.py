from crnstab.simulation.dde import aligned_step, simulate
from crnstab.simulation.trajectory import Trajectory, TrajectorySegment

__all__ = [
    "Trajectory",
    "TrajectorySegment",
    "aligned_step",
    "simulate",
]
