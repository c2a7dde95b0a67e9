import math
import argparse
from fractions import Fraction


def validate_finite_float(arg_value):
    try:
        value = float(arg_value)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"[{arg_value}] is not a number")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"[{arg_value}] must be finite")
    return value


def validate_positive_float(arg_value):
    value = validate_finite_float(arg_value)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"[{arg_value}] must be positive")
    return value


def validate_nonneg_int(arg_value):
    try:
        value = int(arg_value)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"[{arg_value}] is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError(f"[{arg_value}] must be non-negative")
    return value


def validate_positive_int(arg_value):
    value = validate_nonneg_int(arg_value)
    if value < 1:
        raise argparse.ArgumentTypeError(f"[{arg_value}] must be at least 1")
    return value


def validate_dynkin_rank(arg_value):
    value = validate_positive_int(arg_value)
    if value < 4:
        raise argparse.ArgumentTypeError(f"N must be at least 4, got [{arg_value}]")
    return value


def validate_half_integer(arg_value):
    """Accepts 1, 1.5 or 3/2; returns an exact Fraction."""
    try:
        value = Fraction(str(arg_value).strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"[{arg_value}] is not a number")
    if (2 * value).denominator != 1 or value < 0:
        raise argparse.ArgumentTypeError(f"[{arg_value}] must be a non-negative half-integer")
    return value


def parse_bool(arg_value):
    text = str(arg_value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"[{arg_value}] is not a boolean")
