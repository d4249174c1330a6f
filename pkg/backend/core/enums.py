from enum import Enum, IntEnum

# Include str inheritance within the method signature to allow enums to behave like strings

class Side(IntEnum):
    # Counterclockwise order, so side + 1 is a quarter turn to the left
    RIGHT = 0
    TOP = 1
    LEFT = 2
    BOTTOM = 3

class GluingFlag(str, Enum):
    TRANSLATION = "translation"
    ROTATION = "rotation"

class ComponentFilter(str, Enum):
    ANY = "any"
    HYP = "hyp"
    NONHYP = "nonhyp"
    EVEN = "even"
    ODD = "odd"

class CountingEngine(str, Enum):
    CENSUS = "census"
    DIRECT = "direct"
    LATTICE = "lattice"
    TRAIN_TRACK = "train-track"

class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"

class Subcommand(str, Enum):
    CENSUS = "census"
    COUNT_DIRECT = "count-direct"
    COUNT_LATTICE = "count-lattice"
    VOLUME = "volume"
    DIAGRAMS = "diagrams"
    VERIFY = "verify"
    FIT = "fit"
