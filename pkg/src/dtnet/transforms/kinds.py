"""Transform identifiers, the default bag, and dimension planning."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DimensionError
from .filters import BANKS

_TRIG_TAGS = ("dct2", "dst1", "dht")
_POW2_TAGS = ("fwht_natural", "fwht_sequency", "haar")
_WAVELET_TAGS = ("haar", "db4", "db20", "sym2", "coif1", "bior1.3", "rbior1.1")
_ALL_TAGS = ("dct2", "dst1", "fwht_natural", "fwht_sequency", "dht",
             "haar", "db4", "db20", "sym2", "coif1", "bior1.3", "rbior1.1",
             "random")

_DISPLAY = {
    "dct2": "DCT", "dst1": "DST", "fwht_natural": "FWHT1",
    "fwht_sequency": "FWHT2", "dht": "DHT", "haar": "Haar",
    "db4": "DB4", "db20": "DB20", "sym2": "sym2", "coif1": "coif1",
    "bior1.3": "bior1.3", "rbior1.1": "rbior1.1",
}
_PARSE = {name.lower(): tag for tag, name in _DISPLAY.items()}
_PARSE.update({tag: tag for tag in _ALL_TAGS if tag != "random"})


@dataclass(frozen=True)
class TransformKind:
    """One member of the transform bag, or the seeded random baseline.

    Two random kinds compare equal iff their seeds match; deterministic
    kinds carry no seed.
    """

    tag: str
    seed: int | None = None

    def __post_init__(self):
        if self.tag not in _ALL_TAGS:
            raise ValueError(f"unknown transform tag {self.tag!r}")
        if self.tag == "random":
            if self.seed is None:
                raise ValueError("random kind requires a seed")
        elif self.seed is not None:
            raise ValueError(f"{self.tag} does not take a seed")

    @property
    def is_random(self) -> bool:
        return self.tag == "random"

    @property
    def is_wavelet(self) -> bool:
        return self.tag in _WAVELET_TAGS

    @property
    def bank(self):
        return BANKS[self.tag]

    def __str__(self) -> str:
        if self.is_random:
            return f"random:{self.seed}"
        return _DISPLAY[self.tag]


DCT2 = TransformKind("dct2")
DST1 = TransformKind("dst1")
FWHT_NATURAL = TransformKind("fwht_natural")
FWHT_SEQUENCY = TransformKind("fwht_sequency")
DHT = TransformKind("dht")
HAAR = TransformKind("haar")
DB4 = TransformKind("db4")
DB20 = TransformKind("db20")
SYM2 = TransformKind("sym2")
COIF1 = TransformKind("coif1")
BIOR1_3 = TransformKind("bior1.3")
RBIOR1_1 = TransformKind("rbior1.1")


def random_kind(seed: int) -> TransformKind:
    return TransformKind("random", int(seed))


def parse_kind(name: str) -> TransformKind:
    """Parse a kind from its report name, e.g. ``DB20`` or ``random:7``."""
    name = name.strip()
    low = name.lower()
    if low.startswith("random:"):
        try:
            return random_kind(int(low.split(":", 1)[1]))
        except ValueError:
            raise ValueError(f"bad random seed in {name!r}") from None
    if low in _PARSE:
        return TransformKind(_PARSE[low])
    raise ValueError(f"unknown transform name {name!r}")


def bag_default() -> list[TransformKind]:
    """The deterministic transform bag, in canonical (tie-break) order."""
    return [DCT2, DST1, FWHT_NATURAL, FWHT_SEQUENCY, DHT, HAAR,
            DB4, DB20, SYM2, COIF1, BIOR1_3, RBIOR1_1]


@dataclass(frozen=True)
class TransformPlan:
    """Resolved dimensions for applying one kind at one input size.

    ``padded_dim`` is the next power of two for the power-of-two kinds
    (inputs are zero-padded up to it) and equals ``input_dim`` otherwise.
    Wavelet kinds decompose over ``wavelet_levels = floor(log2(padded_dim))``
    levels with circular boundary handling, so coefficient counts stay equal
    to ``padded_dim`` at every level.
    """

    kind: TransformKind
    input_dim: int
    padded_dim: int
    output_dim: int
    wavelet_levels: int = 0


def next_pow2(n: int) -> int:
    return 1 << max(0, (int(n) - 1).bit_length())


def plan(kind: TransformKind, input_dim: int) -> TransformPlan:
    """Resolve the dimension policy of ``kind`` at ``input_dim``."""
    if input_dim < 2:
        raise DimensionError(f"input_dim must be >= 2, got {input_dim}")
    padded = next_pow2(input_dim) if kind.tag in _POW2_TAGS else input_dim
    levels = padded.bit_length() - 1 if kind.is_wavelet else 0
    return TransformPlan(kind, input_dim, padded, padded, levels)
