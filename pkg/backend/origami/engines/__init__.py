from .base_engine import BaseCountingEngine
from .direct import DirectEngine
from .lattice import LatticeEngine
from .train_track import TrainTrackEngine

__all__ = [
    "BaseCountingEngine",
    "DirectEngine",
    "LatticeEngine",
    "TrainTrackEngine",
]
