"""Analysis/synthesis filter banks for the wavelet transform kinds.

All lowpass filters are normalized so that sum(h) = sqrt(2) and are stored
in analysis order (the order in which taps multiply x[2k], x[2k+1], ...).
Orthogonal banks store only the analysis lowpass; the synthesis side is the
adjoint. Biorthogonal banks carry an explicit synthesis lowpass, zero-padded
to the analysis length.

Sources of the constants: Haar/bior/rbior values are exact closed forms
(powers of sqrt(2)/16), coif1 is the closed form in sqrt(7), and the
Daubechies/Symlet filters come from minimal-phase spectral factorization
carried out in 120-digit arithmetic and rounded to 17 significant digits.
The defining algebraic identities (sum, double-shift orthonormality,
vanishing moments) are asserted by the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_INV_SQRT2 = 0.70710678118654752

_HAAR_LO = (_INV_SQRT2, _INV_SQRT2)

# reversed minimal-phase Daubechies-2 scaling filter (identical to sym2)
_SYM2_LO = (
    -0.12940952255126038,
    0.22414386804201338,
    0.83651630373780791,
    0.48296291314453414,
)

_DB4_LO = (
    -0.010597401785069032,
    0.0328830116668852,
    0.030841381835560764,
    -0.18703481171909308,
    -0.027983769416859854,
    0.63088076792985891,
    0.71484657055291565,
    0.2303778133088965,
)

_DB20_LO = (
    -2.9988364896193196e-10,
    4.0561270555518328e-09,
    -1.814843248299696e-08,
    2.0143220235505127e-10,
    2.6339242262700011e-07,
    -6.8470795970005569e-07,
    -1.0119940100188862e-06,
    7.2412482876736201e-06,
    -4.3761438621839968e-06,
    -3.7105861833947129e-05,
    6.7742808283777296e-05,
    0.00010153288973670291,
    -0.00038510474869921761,
    -5.3497598439976951e-05,
    0.0013925596193231363,
    -0.00083156217282255692,
    -0.0035814942596096228,
    0.004420542387045791,
    0.0067216273022594568,
    -0.01381052613715192,
    -0.0087893249239015613,
    0.032294299530769582,
    0.0058746818118118265,
    -0.06172289962468046,
    0.0056322468573074355,
    0.10229171917444256,
    -0.024716827338613584,
    -0.15545875070726796,
    0.039850246457771202,
    0.22829105081991632,
    -0.016727088309077008,
    -0.32678680043403497,
    -0.13921208801148387,
    0.36150229873933106,
    0.61049323893859382,
    0.4726961853109017,
    0.21994211355139705,
    0.063423780459081515,
    0.010549394624950398,
    0.00077995361366684632,
)

# coif1: sqrt(2)/32 * [-3+s, 1-s, 14-2s, 14+2s, 5+s, 1-s], s = sqrt(7)
_COIF1_LO = (
    -0.015655728135791993,
    -0.072732619512526448,
    0.38486484686485775,
    0.85257202021160042,
    0.33789766245748177,
    -0.072732619512526448,
)

# bior1.3: analysis sqrt(2)/16 * [-1, 1, 8, 8, 1, -1], synthesis is Haar
_BIOR1_3_LO = (
    -0.088388347648318441,
    0.088388347648318441,
    _INV_SQRT2,
    _INV_SQRT2,
    0.088388347648318441,
    -0.088388347648318441,
)
_BIOR1_3_SYN_LO = (0.0, 0.0, _INV_SQRT2, _INV_SQRT2, 0.0, 0.0)

# rbior1.1: both sides reduce to the Haar pair
_RBIOR1_1_LO = _HAAR_LO


@dataclass(frozen=True)
class FilterBank:
    """Two-channel analysis/synthesis filters of one wavelet family."""

    dec_lo: np.ndarray
    dec_hi: np.ndarray
    rec_lo: np.ndarray
    rec_hi: np.ndarray
    orthogonal: bool

    @property
    def length(self) -> int:
        return len(self.dec_lo)


def _bank(dec_lo, rec_lo=None) -> FilterBank:
    dec_lo = np.asarray(dec_lo, dtype=np.float64)
    orthogonal = rec_lo is None
    rec_lo = dec_lo[::-1].copy() if orthogonal else np.asarray(rec_lo, dtype=np.float64)
    sign = (-1.0) ** np.arange(len(dec_lo))
    dec_hi = sign * rec_lo
    rec_hi = sign * dec_lo
    for arr in (dec_lo, dec_hi, rec_lo, rec_hi):
        arr.setflags(write=False)
    return FilterBank(dec_lo, dec_hi, rec_lo, rec_hi, orthogonal)


BANKS: dict[str, FilterBank] = {
    "haar": _bank(_HAAR_LO),
    "db4": _bank(_DB4_LO),
    "db20": _bank(_DB20_LO),
    "sym2": _bank(_SYM2_LO),
    "coif1": _bank(_COIF1_LO),
    "bior1.3": _bank(_BIOR1_3_LO, _BIOR1_3_SYN_LO),
    "rbior1.1": _bank(_RBIOR1_1_LO, _RBIOR1_1_LO),
}
