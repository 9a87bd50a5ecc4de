"""First-order optical systems in dimensionless ray-matrix form.

With a single length scale ``s`` for the whole system, positions are
``rho = x / s`` and momenta ``q = s * k * theta``.  Free space of length z
is then a shear ``[[1, z/(k s^2)], [0, 1]]`` and a thin lens of focal
length f is ``[[1, 0], [-k s^2 / f, 1]]``.  A system realises an FRFT of
order a exactly when its matrix is the rotation ``[[cos a, sin a],
[-sin a, cos a]]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateGeometry, NotAnFrft, OrderOutOfRange
from .frft import FrftOrder, OrderLike, as_order

__all__ = [
    "ThinLens",
    "FreeSpace",
    "OpticalSystem",
    "RayMatrix",
    "FrftRealization",
    "TypeIDesign",
    "FreeSpaceFrft",
    "element_matrix",
    "compose",
    "match_frft",
    "type1_design",
    "type1_elements",
    "free_space_frft",
    "free_space_system",
    "scale_per_meter",
    "realization",
    "parse_system",
    "format_system",
]

MATCH_TOL = 1e-9


@dataclass(frozen=True)
class ThinLens:
    focal_f: float

    def __post_init__(self):
        if self.focal_f == 0 or not math.isfinite(self.focal_f):
            raise ValueError("lens focal length must be finite and non-zero")


@dataclass(frozen=True)
class FreeSpace:
    dist_z: float

    def __post_init__(self):
        if not (math.isfinite(self.dist_z) and self.dist_z >= 0):
            raise ValueError("free-space distance must be finite and >= 0")


OpticalElement = Union[ThinLens, FreeSpace]


@dataclass(frozen=True)
class OpticalSystem:
    elements: tuple
    wavelength: float
    scale_s: float

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("optical system needs at least one element")
        if not (self.wavelength > 0 and self.scale_s > 0):
            raise ValueError("wavelength and scale must be > 0")

    @property
    def wavenumber(self) -> float:
        return 2 * math.pi / self.wavelength


@dataclass(frozen=True)
class RayMatrix:
    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_array(cls, m: np.ndarray) -> "RayMatrix":
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "RayMatrix") -> "RayMatrix":
        return RayMatrix.from_array(self.as_array() @ other.as_array())


@dataclass(frozen=True)
class FrftRealization:
    order: FrftOrder
    scaled_focal_m: float
    scale_per_m: float


@dataclass(frozen=True)
class TypeIDesign:
    z_alpha: float
    f_prime: float


@dataclass(frozen=True)
class FreeSpaceFrft:
    order: FrftOrder
    scale_s: float


def element_matrix(e: OpticalElement, wavelength: float, scale_s: float) -> RayMatrix:
    k = 2 * math.pi / wavelength
    if isinstance(e, FreeSpace):
        return RayMatrix(1.0, e.dist_z / (k * scale_s ** 2), 0.0, 1.0)
    if isinstance(e, ThinLens):
        return RayMatrix(1.0, 0.0, -k * scale_s ** 2 / e.focal_f, 1.0)
    raise TypeError(f"not an optical element: {e!r}")


def compose(sys: OpticalSystem) -> RayMatrix:
    """Product of element matrices; the last element acts last (leftmost)."""
    m = np.eye(2)
    for e in sys.elements:
        m = element_matrix(e, sys.wavelength, sys.scale_s).as_array() @ m
    return RayMatrix.from_array(m)


def match_frft(m: RayMatrix, tol: float = MATCH_TOL) -> FrftOrder:
    residuals = {
        "a-d": abs(m.a - m.d),
        "b+c": abs(m.b + m.c),
        "a^2+b^2-1": abs(m.a ** 2 + m.b ** 2 - 1),
    }
    if max(residuals.values()) > tol:
        detail = ", ".join(f"|{k}|={v:.3g}" for k, v in residuals.items())
        raise NotAnFrft(f"ray matrix is not a rotation ({detail})", residuals)
    return FrftOrder(math.atan2(m.b, m.a))


def type1_design(focal_f: float, order: OrderLike) -> TypeIDesign:
    """Symmetric lens system: distance z_alpha, lens f, distance z_alpha."""
    a = as_order(order).alpha
    if not 0 < a < math.pi:
        raise OrderOutOfRange(f"single-lens type-I design needs 0 < alpha < pi, got {a:.6g}")
    if focal_f <= 0:
        raise OrderOutOfRange("type-I design needs a converging lens (f > 0)")
    return TypeIDesign(2 * focal_f * math.sin(a / 2) ** 2, focal_f * math.sin(a))


def type1_elements(focal_f: float, order: OrderLike) -> list:
    d = type1_design(focal_f, order)
    return [FreeSpace(d.z_alpha), ThinLens(focal_f), FreeSpace(d.z_alpha)]


def scale_per_meter(f_prime: float, wavelength: float) -> float:
    """sqrt(k / f'), the factor turning metres into dimensionless rho."""
    if f_prime <= 0 or wavelength <= 0:
        raise ValueError("f_prime and wavelength must be > 0")
    return math.sqrt(2 * math.pi / (wavelength * f_prime))


def realization(focal_f: float, order: OrderLike, wavelength: float) -> FrftRealization:
    d = type1_design(focal_f, order)
    return FrftRealization(as_order(order), d.f_prime, scale_per_meter(d.f_prime, wavelength))


def free_space_frft(z: float, radius_R: float, wavelength: float) -> FreeSpaceFrft:
    """Order and scale for free diffraction between spherical caps of radius R."""
    if z <= 0:
        raise DegenerateGeometry("propagation distance must be > 0")
    g = 1.0 - z / radius_R
    if abs(g) >= 1.0:
        raise DegenerateGeometry(f"|1 - z/R| = {abs(g):.6g} >= 1")
    k = 2 * math.pi / wavelength
    s = math.sqrt(z / k) * (1.0 - g * g) ** -0.25
    return FreeSpaceFrft(FrftOrder(math.acos(g)), s)


def free_space_system(z: float, radius_R: float, wavelength: float) -> OpticalSystem:
    """Cap-to-cap diffraction with the cap curvatures as equivalent thin lenses."""
    fs = free_space_frft(z, radius_R, wavelength)
    elems = [ThinLens(radius_R), FreeSpace(z), ThinLens(radius_R)]
    return OpticalSystem(elems, wavelength, fs.scale_s)


def parse_system(text: str) -> OpticalSystem:
    """Parse the line-based system description.

    Header lines ``wavelength=<m>`` and ``scale=<m>``; element lines
    ``lens f=<m>`` or ``space z=<m>``. ``#`` starts a comment.
    """
    wavelength = scale = None
    elements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head not in ("lens", "space"):
                key, _, val = (t.strip() for t in line.partition("="))
                if key == "wavelength":
                    wavelength = float(val)
                elif key == "scale":
                    scale = float(val)
                else:
                    raise ValueError(f"unknown header key {key!r}")
                continue
            key, _, val = (t.strip() for t in rest.partition("="))
            if head == "lens" and key == "f":
                elements.append(ThinLens(float(val)))
            elif head == "space" and key == "z":
                elements.append(FreeSpace(float(val)))
            else:
                raise ValueError(f"unrecognised element {line!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if wavelength is None or scale is None:
        raise ValueError("system file needs 'wavelength=' and 'scale=' header lines")
    return OpticalSystem(elements, wavelength, scale)


def format_system(sys: OpticalSystem) -> str:
    lines = [f"wavelength={sys.wavelength!r}", f"scale={sys.scale_s!r}"]
    for e in sys.elements:
        if isinstance(e, ThinLens):
            lines.append(f"lens f={e.focal_f!r}")
        else:
            lines.append(f"space z={e.dist_z!r}")
    return "\n".join(lines) + "\n"
