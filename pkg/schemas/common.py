from typing import Annotated, Any, List, Tuple

from mpmath import mp
from pydantic import BeforeValidator, PlainSerializer


def to_complex(value: Any) -> complex:
    """Accept complex, real, '[re, im]' pairs (numbers or decimal strings) and complex literals"""
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        from utils.parsing import parse_complex

        return parse_complex(value)
    if hasattr(value, "real") and hasattr(value, "imag"):
        return complex(float(value.real), float(value.imag))
    raise ValueError(f"cannot interpret {value!r} as a complex number")


def complex_pair(z: complex) -> List[str]:
    """[re, im] as round-trippable decimal strings"""
    z = complex(z)
    return [repr(z.real), repr(z.imag)]


def mp_pair(z: Any, digits: int) -> List[str]:
    """[re, im] of a multiprecision value with ``digits`` significant digits"""
    return [mp.nstr(mp.re(z), digits), mp.nstr(mp.im(z), digits)]


ComplexPair = Annotated[
    complex,
    BeforeValidator(to_complex),
    PlainSerializer(complex_pair, return_type=List[str]),
]

SectorPair = Tuple[int, int]
