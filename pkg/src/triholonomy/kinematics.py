"""Jacobi vectors, shape coordinates and the kinematic (democracy) group.

Positions of three bodies are reduced to a pair of mass-weighted Jacobi
vectors (translation symmetry), then to the internal shape coordinates
(r, s, phi) and to the coordinates (w1, w2, w3) in which shape space is
the open half space w3 > 0.  The module also implements the SO(2) family
of kinematic rotations relating the three possible clusterings, and the
angular momentum of a moving configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    CollinearConfiguration,
    CollisionalPair,
    DomainError,
    NoSuchRotation,
)

# Non-collinearity floor: configurations with sin(phi) below this are
# rejected rather than clamped, because they lie outside the configuration
# space and would silently corrupt holonomy bookkeeping downstream.
SIN_PHI_MIN = 1e-12

# shape_from_jacobi refuses |cos phi| within this margin of 1.
COS_PHI_MARGIN = 1e-12


def _vec3(value, name: str) -> np.ndarray:
    """Coerce to a read-only float 3-vector."""
    v = np.array(value, dtype=float)
    if v.shape != (3,):
        raise DomainError(f"{name} must be a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} must be finite, got {v}")
    v.setflags(write=False)
    return v


class Clustering(Enum):
    """Which pair of bodies the first Jacobi vector connects.

    The ordered index triples follow the cyclic convention

        (1,3)+2 -> (i,j,k) = (1,3,2)
        (1,2)+3 -> (i,j,k) = (2,1,3)
        (2,3)+1 -> (i,j,k) = (3,2,1)

    with the first Jacobi vector proportional to x_i - x_j and body k the
    spectator.  Cycling the labels this way makes every change of
    clustering a proper (det +1) kinematic rotation, so the set of all of
    them is SO(2).
    """

    PAIR_13 = "(1,3)+2"
    PAIR_12 = "(1,2)+3"
    PAIR_23 = "(2,3)+1"

    @property
    def indices(self) -> tuple[int, int, int]:
        """Ordered (i, j, k): first vector ~ x_i - x_j, spectator k."""
        return _CLUSTER_INDICES[self]

    @classmethod
    def from_label(cls, text: str) -> "Clustering":
        """Parse a label such as ``(1,3)+2`` (whitespace ignored)."""
        compact = "".join(text.split())
        for member in cls:
            if member.value == compact:
                return member
        raise DomainError(
            f"unknown clustering {text!r}; expected one of "
            + ", ".join(m.value for m in cls)
        )


_CLUSTER_INDICES = {
    Clustering.PAIR_13: (1, 3, 2),
    Clustering.PAIR_12: (2, 1, 3),
    Clustering.PAIR_23: (3, 2, 1),
}


@dataclass(frozen=True)
class MassTriple:
    """The three body masses, in any consistent unit."""

    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        for name in ("m1", "m2", "m3"):
            m = getattr(self, name)
            if not (math.isfinite(m) and m > 0.0):
                raise DomainError(f"{name} must be positive and finite, got {m}")

    @property
    def total(self) -> float:
        return self.m1 + self.m2 + self.m3

    def of(self, index: int) -> float:
        """Mass of body 1, 2 or 3."""
        return (self.m1, self.m2, self.m3)[index - 1]


@dataclass(frozen=True)
class JacobiPair:
    """Two mass-weighted Jacobi vectors; a translation-reduced configuration.

    The pair must be linearly independent (equivalently, the underlying
    three bodies are not collinear and the clustered pair does not
    coincide).
    """

    rvec: np.ndarray
    svec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rvec", _vec3(self.rvec, "rvec"))
        object.__setattr__(self, "svec", _vec3(self.svec, "svec"))
        rn = float(np.linalg.norm(self.rvec))
        sn = float(np.linalg.norm(self.svec))
        if rn == 0.0 or sn == 0.0:
            raise CollinearConfiguration("a Jacobi vector is zero")
        sin_phi = float(np.linalg.norm(np.cross(self.rvec, self.svec))) / (rn * sn)
        if sin_phi < SIN_PHI_MIN:
            raise CollinearConfiguration(
                f"Jacobi vectors are (nearly) parallel: sin(phi) = {sin_phi:.3e}"
            )

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.rvec))

    @property
    def s(self) -> float:
        return float(np.linalg.norm(self.svec))


@dataclass(frozen=True)
class ShapePoint:
    """Internal coordinates (r, s, phi) with r, s > 0 and 0 < phi < pi."""

    r: float
    s: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 0.0):
            raise DomainError(f"r must be positive, got {self.r}")
        if not (math.isfinite(self.s) and self.s > 0.0):
            raise DomainError(f"s must be positive, got {self.s}")
        if not (math.isfinite(self.phi) and 0.0 < self.phi < math.pi):
            raise DomainError(f"phi must lie in (0, pi), got {self.phi}")


@dataclass(frozen=True)
class WPoint:
    """Shape-space coordinates (w1, w2, w3) on the half space w3 > 0."""

    w1: float
    w2: float
    w3: float

    def __post_init__(self):
        for name in ("w1", "w2", "w3"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.w3 <= 0.0:
            raise DomainError(f"w3 must be positive, got {self.w3}")


@dataclass(frozen=True)
class FullState:
    """A translation-reduced configuration together with its velocity."""

    config: JacobiPair
    rvel: np.ndarray
    svel: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rvel", _vec3(self.rvel, "rvel"))
        object.__setattr__(self, "svel", _vec3(self.svel, "svel"))


def _weights(masses: MassTriple, clustering: Clustering):
    """Index triple and reduced masses for one clustering."""
    i, j, k = clustering.indices
    mi, mj, mk = masses.of(i), masses.of(j), masses.of(k)
    mu_pair = mi * mj / (mi + mj)
    mu_spec = mk * (mi + mj) / masses.total
    return i, j, k, mi, mj, mu_pair, mu_spec


def jacobi_from_positions(
    masses: MassTriple,
    x1,
    x2,
    x3,
    clustering: Clustering,
) -> JacobiPair:
    """Mass-weighted Jacobi vectors of three position vectors.

    For clustering (1,3)+2,

        rvec = sqrt(m1 m3 / (m1 + m3)) (x1 - x3)
        svec = sqrt(m2 (m1 + m3) / M) (x2 - (m1 x1 + m3 x3) / (m1 + m3))

    and the other clusterings follow by cyclic relabeling.  The square
    roots are the reduced mass of the clustered pair and of the spectator
    against the pair, the unique weights for which the kinetic energy is
    (|d rvec/dt|^2 + |d svec/dt|^2) / 2.

    Raises CollisionalPair when the clustered pair coincides and
    CollinearConfiguration when the three points are collinear.
    """
    xs = (_vec3(x1, "x1"), _vec3(x2, "x2"), _vec3(x3, "x3"))
    i, j, k, mi, mj, mu_pair, mu_spec = _weights(masses, clustering)
    xi, xj, xk = xs[i - 1], xs[j - 1], xs[k - 1]
    pair_diff = xi - xj
    if float(np.linalg.norm(pair_diff)) == 0.0:
        raise CollisionalPair(
            f"bodies {i} and {j} coincide; clustering {clustering.value} is undefined"
        )
    rvec = math.sqrt(mu_pair) * pair_diff
    svec = math.sqrt(mu_spec) * (xk - (mi * xi + mj * xj) / (mi + mj))
    return JacobiPair(rvec, svec)


def jacobi_velocities(
    masses: MassTriple,
    v1,
    v2,
    v3,
    clustering: Clustering,
) -> tuple[np.ndarray, np.ndarray]:
    """Apply the (linear) Jacobi map to body velocities.

    No non-collinearity requirement applies to velocities, so this
    returns plain vectors rather than a JacobiPair.
    """
    vs = (_vec3(v1, "v1"), _vec3(v2, "v2"), _vec3(v3, "v3"))
    i, j, k, mi, mj, mu_pair, mu_spec = _weights(masses, clustering)
    vi, vj, vk = vs[i - 1], vs[j - 1], vs[k - 1]
    rdot = math.sqrt(mu_pair) * (vi - vj)
    sdot = math.sqrt(mu_spec) * (vk - (mi * vi + mj * vj) / (mi + mj))
    return rdot, sdot


def positions_from_jacobi(
    masses: MassTriple,
    pair: JacobiPair,
    clustering: Clustering,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Positions (x1, x2, x3) with the mass-weighted centre of mass at 0.

    Inverse of jacobi_from_positions up to an overall translation.
    """
    i, j, k, mi, mj, mu_pair, mu_spec = _weights(masses, clustering)
    rho = pair.rvec / math.sqrt(mu_pair)
    sigma = pair.svec / math.sqrt(mu_spec)
    mk = masses.of(k)
    cm_pair = -(mk / masses.total) * sigma
    out = [None, None, None]
    out[i - 1] = cm_pair + (mj / (mi + mj)) * rho
    out[j - 1] = cm_pair - (mi / (mi + mj)) * rho
    out[k - 1] = cm_pair + sigma
    return tuple(out)


def shape_from_jacobi(pair: JacobiPair) -> ShapePoint:
    """Shape coordinates r = |rvec|, s = |svec|, phi = angle between them."""
    rn = float(np.linalg.norm(pair.rvec))
    sn = float(np.linalg.norm(pair.svec))
    dot = float(np.dot(pair.rvec, pair.svec))
    cos_phi = dot / (rn * sn)
    if abs(cos_phi) >= 1.0 - COS_PHI_MARGIN:
        raise CollinearConfiguration(
            f"|cos(phi)| = {abs(cos_phi):.17g} is within {COS_PHI_MARGIN} of 1"
        )
    # atan2 form of arccos: identical value, well conditioned at both ends
    cross = float(np.linalg.norm(np.cross(pair.rvec, pair.svec)))
    return ShapePoint(rn, sn, math.atan2(cross, dot))


def w_from_shape(p: ShapePoint) -> WPoint:
    """(w1, w2, w3) = (r^2 - s^2, 2 r s cos phi, 2 r s sin phi)."""
    return WPoint(
        p.r * p.r - p.s * p.s,
        2.0 * p.r * p.s * math.cos(p.phi),
        2.0 * p.r * p.s * math.sin(p.phi),
    )


def shape_from_w(w: WPoint) -> ShapePoint:
    """Invert w_from_shape using r^2 + s^2 = sqrt(w1^2 + w2^2 + w3^2)."""
    rho = math.hypot(w.w1, math.hypot(w.w2, w.w3))
    r_sq = 0.5 * (rho + w.w1)
    s_sq = 0.5 * (rho - w.w1)
    if r_sq <= 0.0 or s_sq <= 0.0:
        raise DomainError("w coordinates do not describe a valid shape")
    return ShapePoint(math.sqrt(r_sq), math.sqrt(s_sq), math.atan2(w.w3, w.w2))


def democracy_rotate(pair: JacobiPair, theta: float) -> JacobiPair:
    """Kinematic rotation mixing the two Jacobi vectors.

    (rvec', svec') = (cos t rvec - sin t svec, sin t rvec + cos t svec).
    Preserves rvec x svec exactly, and rotates (w1, w2) by 2 theta while
    leaving w3 unchanged.
    """
    c, s = math.cos(theta), math.sin(theta)
    return JacobiPair(c * pair.rvec - s * pair.svec, s * pair.rvec + c * pair.svec)


def democracy_angle(
    masses: MassTriple,
    positions,
    c_a: Clustering,
    c_b: Clustering,
    tol: float = 1e-10,
) -> float:
    """Rotation angle taking the clustering ``c_a`` pair to the ``c_b`` pair.

    The angle is read off in closed form from the rotation of the
    (w1, w2) vector, which turns by exactly 2 theta; that fixes theta up
    to a half turn, and the残 sign is resolved by applying both candidates.
    Raises NoSuchRotation when neither candidate maps the pair within
    ``tol`` (componentwise), which would indicate an internal
    inconsistency rather than bad input.
    """
    x1, x2, x3 = positions
    pair_a = jacobi_from_positions(masses, x1, x2, x3, c_a)
    pair_b = jacobi_from_positions(masses, x1, x2, x3, c_b)

    wa = w_from_shape(shape_from_jacobi(pair_a))
    wb = w_from_shape(shape_from_jacobi(pair_b))
    scale = wa.w3  # = 2 r s sin(phi) > 0, the natural size of the w vector
    if math.hypot(wa.w1, wa.w2) > 1e-12 * scale:
        theta = 0.5 * (math.atan2(wb.w2, wb.w1) - math.atan2(wa.w2, wa.w1))
    else:
        # (w1, w2) sits at the origin (r = s, phi = pi/2); fall back to the
        # closed-form best-fit rotation of the vectors themselves.
        ra, sa, rb, sb = pair_a.rvec, pair_a.svec, pair_b.rvec, pair_b.svec
        theta = math.atan2(
            float(np.dot(sb, ra) - np.dot(rb, sa)),
            float(np.dot(rb, ra) + np.dot(sb, sa)),
        )

    best = None
    for candidate in (theta, theta + math.pi):
        rotated = democracy_rotate(pair_a, candidate)
        residual = max(
            float(np.max(np.abs(rotated.rvec - pair_b.rvec))),
            float(np.max(np.abs(rotated.svec - pair_b.svec))),
        )
        if best is None or residual < best[1]:
            best = (candidate, residual)
    angle, residual = best
    if residual > tol:
        raise NoSuchRotation(
            f"no kinematic rotation maps {c_a.value} to {c_b.value}: "
            f"best residual {residual:.3e} exceeds {tol:.3e}"
        )
    # normalize to (-pi, pi]
    angle = math.remainder(angle, 2.0 * math.pi)
    if angle <= -math.pi:
        angle += 2.0 * math.pi
    return angle


def angular_momentum(state: FullState) -> np.ndarray:
    """J = rvec x d(rvec)/dt + svec x d(svec)/dt."""
    return np.cross(state.config.rvec, state.rvel) + np.cross(
        state.config.svec, state.svel
    )


def distance_squares(
    masses: MassTriple,
    clustering: Clustering,
    r: float,
    s: float,
    phi: float,
) -> tuple[float, float, float]:
    """Squared interatomic distances (d12^2, d13^2, d23^2) of a shape.

    With (i, j, k) the ordered clustering indices, the pair distance is
    d_ij = r / sqrt(mu_pair) and the spectator distances follow from the
    law of cosines with the offsets of i and j from the pair's centre of
    mass.
    """
    i, j, k, mi, mj, mu_pair, mu_spec = _weights(masses, clustering)
    a = mj / (mi + mj)  # offset coefficient of body i from the pair centre
    b = mi / (mi + mj)
    cross = r * s * math.cos(phi) / math.sqrt(mu_pair * mu_spec)
    d_pair = r * r / mu_pair
    d_ik = a * a * r * r / mu_pair + s * s / mu_spec - 2.0 * a * cross
    d_jk = b * b * r * r / mu_pair + s * s / mu_spec + 2.0 * b * cross
    out = [0.0, 0.0, 0.0]
    out[_pair_slot(i, j)] = d_pair
    out[_pair_slot(i, k)] = d_ik
    out[_pair_slot(j, k)] = d_jk
    return tuple(out)


def distance_square_gradients(
    masses: MassTriple,
    clustering: Clustering,
    r: float,
    s: float,
    phi: float,
) -> tuple[tuple[float, float, float], ...]:
    """Gradients of the three squared distances w.r.t. (r, s, phi).

    Returned in the same (12, 13, 23) slot order as distance_squares.
    Working with squared distances keeps the phi derivative free of the
    square-root singularity near right angles.
    """
    i, j, k, mi, mj, mu_pair, mu_spec = _weights(masses, clustering)
    a = mj / (mi + mj)
    b = mi / (mi + mj)
    inv_cross = 1.0 / math.sqrt(mu_pair * mu_spec)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)

    g_pair = (2.0 * r / mu_pair, 0.0, 0.0)
    g_ik = (
        2.0 * a * a * r / mu_pair - 2.0 * a * s * cos_phi * inv_cross,
        2.0 * s / mu_spec - 2.0 * a * r * cos_phi * inv_cross,
        2.0 * a * r * s * sin_phi * inv_cross,
    )
    g_jk = (
        2.0 * b * b * r / mu_pair + 2.0 * b * s * cos_phi * inv_cross,
        2.0 * s / mu_spec + 2.0 * b * r * cos_phi * inv_cross,
        -2.0 * b * r * s * sin_phi * inv_cross,
    )
    out = [None, None, None]
    out[_pair_slot(i, j)] = g_pair
    out[_pair_slot(i, k)] = g_ik
    out[_pair_slot(j, k)] = g_jk
    return tuple(out)


def _pair_slot(i: int, j: int) -> int:
    """Slot of the unordered pair {i, j} in (d12, d13, d23) order."""
    return {frozenset((1, 2)): 0, frozenset((1, 3)): 1, frozenset((2, 3)): 2}[
        frozenset((i, j))
    ]


def interatomic_distances(
    masses: MassTriple,
    clustering: Clustering,
    p: ShapePoint,
) -> tuple[float, float, float]:
    """Interatomic distances (d12, d13, d23) of a shape."""
    d12_sq, d13_sq, d23_sq = distance_squares(masses, clustering, p.r, p.s, p.phi)
    return math.sqrt(d12_sq), math.sqrt(d13_sq), math.sqrt(d23_sq)
