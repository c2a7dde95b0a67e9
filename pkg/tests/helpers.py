import math
from fractions import Fraction as F


def digamma_oracle(x):
    """psi(x) by upward recurrence to x >= 8 and the asymptotic Bernoulli series."""
    shift = 0.0
    while x < 8.0:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = inv2 * (1 / 12 - inv2 * (1 / 120 - inv2 * (1 / 252 - inv2 * (1 / 240 - inv2 / 132))))
    return shift + math.log(x) - 0.5 / x - tail


# exact lambda-expansions of kappa_{m,n}, index = power
KAPPA_00 = [
    F(6),
    F(0),
    F(-1),
    F(-1, 2),
    F(-229, 720),
    F(-109, 480),
    F(-62999, 362880),
    F(-20159, 145152),
    F(-299803787, 2612736000),
    F(-72503387, 746496000),
    F(-173336436487, 2069286912000),
]

KAPPA_10 = [
    F(18),
    F(-4),
    F(-16, 9),
    F(-352, 405),
    F(-1972, 3645),
    F(-17408, 45927),
    F(-701314, 2460375),
    F(-34835788, 155003625),
    F(-204567413, 1116026100),
    F(-1588447666493, 10358117240625),
    F(-4782354354298021, 36543437624925000),
]

KAPPA_01 = [
    F(54),
    F(-24),
    F(-27, 5),
    F(-27, 10),
    F(-23949, 14000),
    F(-34047, 28000),
    F(-370287, 400000),
    F(-826209, 1120000),
    F(-146655243891, 241472000000),
    F(-35351959491, 68992000000),
    F(-197594782006203, 448448000000000),
]

KAPPA_11 = [
    F(90),
    F(-196, 5),
    F(-9664, 1125),
    F(-7627904, 1771875),
    F(-217386688, 79734375),
    F(-173655964928, 89701171875),
    F(-485256409132928, 329651806640625),
    F(-955858372577612032, 815888221435546875),
    F(-176847414696606187696, 183574849822998046875),
    F(-12815580494902423265411456, 15786519210528717041015625),
]

REFERENCE_SERIES = {(0, 0): KAPPA_00, (1, 0): KAPPA_10, (0, 1): KAPPA_01, (1, 1): KAPPA_11}


def horner(coeffs, x):
    value = 0.0
    for c in reversed(coeffs):
        value = value * x + float(c)
    return value
