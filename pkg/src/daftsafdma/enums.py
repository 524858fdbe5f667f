"""Enumerations shared by the transmit, receive and experiment layers."""

from enum import Enum


class Strategy(str, Enum):
    """Chirp-subcarrier allocation strategy."""

    INTERLEAVED = "interleaved"
    LOCALIZED = "localized"


class Scheme(str, Enum):
    """Multiple-access scheme: DAFT-spread or the unspread orthogonal baseline."""

    DAFT_S = "daft-s"
    O_AFDMA = "o-afdma"


class PaprMode(str, Enum):
    """Which time-domain signal a PAPR sample is measured on."""

    COMPOSITE = "composite"
    PER_USER = "per-user"
