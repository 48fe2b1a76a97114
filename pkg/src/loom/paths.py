"""Piecewise linear paths in the weight lattice and the root operators.

A path starts at the origin and is stored as a sequence of
``(direction, duration)`` segments whose durations sum to one; the
direction is the derivative, so the displacement across a segment is
``duration * direction``.  Paths that differ only by a piecewise linear
reparametrisation are equal: equality and hashing use the sequence of
displacements of maximal straight stretches, which is exactly the data a
reparametrisation cannot touch.

The raising operator acts on the height function ``h(tau)``, the negated
coroot pairing along the path.  It leaves the path alone until the last
time ``h`` sits one below its maximum, reflects the stretch where ``h``
climbs to the maximum, and translates the rest; the lowering operator is
the mirror image.  Both reduce to pure surgery on segment directions:
the translated tail keeps its directions, only the climbing stretch gets
reflected.

The height maximum is required to be an integer.  Paths produced by
closure from linear seeds satisfy this; anything else is outside the
model and fails with :class:`IntegralityError` instead of being guessed
at.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cartan import AffineCartan, AmbientError, Weight, frac


class PathError(ValueError):
    """Malformed path input."""


class IntegralityError(PathError):
    """The height function has a non-integral maximum."""


def _collinear_merge(u: Weight, du: Fraction, v: Weight, dv: Fraction):
    """Merge two consecutive segments if v is a positive multiple of u."""
    ucoords = list(u.coords) + ([u.delta] if u.delta is not None else [])
    vcoords = list(v.coords) + ([v.delta] if v.delta is not None else [])
    ratio = None
    for a, b in zip(ucoords, vcoords):
        if a == 0:
            if b != 0:
                return None
        else:
            r = b / a
            if ratio is None:
                ratio = r
            elif ratio != r:
                return None
    if ratio is None or ratio <= 0:
        return None
    incr = u * du + v * dv
    total = du + dv
    return (incr * (1 / total), total)


@dataclass(frozen=True, eq=False)
class Path:
    """Canonical piecewise linear path from the origin."""

    segments: tuple[tuple[Weight, Fraction], ...]
    ambient: str
    ncoords: int

    @property
    def is_constant(self) -> bool:
        return not self.segments

    def weight(self) -> Weight:
        """Endpoint of the path."""
        w = _zero_weight(self.ambient, self.ncoords)
        for d, t in self.segments:
            w = w + d * t
        return w

    def key(self):
        """Reparametrisation-invariant identity: the stretch displacements."""
        return tuple(d * t for d, t in self.segments)

    def __eq__(self, other):
        return (
            isinstance(other, Path)
            and self.ambient == other.ambient
            and self.ncoords == other.ncoords
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash((self.ambient, self.key()))

    def breakpoints(self) -> list[Fraction]:
        """Cumulative times 0 = t_0 < ... < t_k = 1."""
        out = [Fraction(0)]
        for _, t in self.segments:
            out.append(out[-1] + t)
        if out[-1] != 1:
            # the constant path still parametrises the full interval
            out.append(Fraction(1))
        return out

    def to_json(self):
        segments = []
        for d, t in self.segments:
            entry = {
                "dir": ["%d/%d" % (c.numerator, c.denominator) for c in d.coords],
                "len": "%d/%d" % (t.numerator, t.denominator),
            }
            if d.delta is not None:
                entry["dir_delta"] = "%d/%d" % (d.delta.numerator, d.delta.denominator)
            segments.append(entry)
        return {"ambient": self.ambient, "segments": segments}

    def __repr__(self):
        if self.is_constant:
            return "Path(constant)"
        return "Path(%s)" % "; ".join("%r x %s" % (d, t) for d, t in self.segments)


def _zero_weight(ambient: str, ncoords: int) -> Weight:
    delta = None if ambient == "classical" else Fraction(0)
    return Weight((Fraction(0),) * ncoords, delta)


def make_path(segments, ambient: str | None = None, ncoords: int | None = None) -> Path:
    """Build a path in canonical form.

    Zero-direction stretches are pauses and are removed; the remaining
    durations are rescaled to fill [0, 1], which is a reparametrisation.
    Consecutive segments pointing along the same ray are merged.  The
    endpoint must be a lattice weight.
    """
    moving = []
    total = Fraction(0)
    for d, t in segments:
        t = frac(t)
        if t < 0:
            raise PathError("segment durations must be positive")
        if t == 0:
            continue
        amb = "classical" if d.is_classical else "affine"
        if ambient is None:
            ambient = amb
        elif ambient != amb:
            raise AmbientError("path mixes classical and affine directions")
        if ncoords is None:
            ncoords = len(d.coords)
        elif ncoords != len(d.coords):
            raise PathError("path mixes weights of different ranks")
        total += t
        if not d.is_zero:
            moving.append((d, t))
    if ambient is None or ncoords is None:
        raise PathError("ambient of a constant path cannot be inferred")
    if not moving:
        return Path((), ambient, ncoords)
    if total != 1:
        raise PathError("durations must sum to one")
    # removing pauses stretches the remaining time; slow the directions
    # down by the same factor so every displacement is preserved
    scale = sum(t for _, t in moving)
    merged: list[tuple[Weight, Fraction]] = []
    for d, t in moving:
        d = d * scale
        t = t / scale
        if merged:
            joined = _collinear_merge(merged[-1][0], merged[-1][1], d, t)
            if joined is not None:
                merged[-1] = joined
                continue
        merged.append((d, t))
    path = Path(tuple(merged), ambient, ncoords)
    if not path.weight().is_integral:
        raise PathError("path endpoint is not a lattice weight")
    return path


def linear_path(w: Weight) -> Path:
    """The straight path from the origin to w."""
    if not w.is_integral:
        raise PathError("linear paths need an integral endpoint")
    amb = "classical" if w.is_classical else "affine"
    return make_path([(w, Fraction(1))], ambient=amb, ncoords=len(w.coords))


def constant_path(cartan: AffineCartan, classical: bool = True) -> Path:
    return linear_path(cartan.zero_weight(classical=classical))


# -- height data -------------------------------------------------------


@dataclass(frozen=True)
class HeightExtrema:
    """Exact extremum data of the height function for one index."""

    max_value: Fraction
    eps: int
    e_minus: Fraction | None
    e_plus: Fraction
    f_plus: Fraction
    f_minus: Fraction | None


def height_values(cartan: AffineCartan, path: Path, i: int):
    """Times and values of the height function at the breakpoints."""
    times = path.breakpoints()
    values = [Fraction(0)]
    for d, t in path.segments:
        values.append(values[-1] - t * cartan.pairing(i, d))
    while len(values) < len(times):
        values.append(values[-1])
    return times, values


def _cross_backward(times, values, upto, level):
    """Largest time <= upto where the height equals level."""
    best = None
    for j in range(len(times) - 1):
        t0, t1 = times[j], times[j + 1]
        h0, h1 = values[j], values[j + 1]
        lo = min(t1, upto)
        if t0 > upto:
            break
        for cand in _segment_hits(t0, t1, h0, h1, level):
            if cand <= lo and (best is None or cand > best):
                best = cand
    return best


def _cross_forward(times, values, start, level):
    """Smallest time >= start where the height equals level."""
    for j in range(len(times) - 1):
        t0, t1 = times[j], times[j + 1]
        if t1 < start:
            continue
        h0, h1 = values[j], values[j + 1]
        hits = [c for c in _segment_hits(t0, t1, h0, h1, level) if c >= start]
        if hits:
            return min(hits)
    return None


def _segment_hits(t0, t1, h0, h1, level):
    if h0 == h1:
        return [t0, t1] if h0 == level else []
    if not (min(h0, h1) <= level <= max(h0, h1)):
        return []
    return [t0 + (level - h0) * (t1 - t0) / (h1 - h0)]


def h_extrema(cartan: AffineCartan, path: Path, i: int) -> HeightExtrema:
    """Extremum of the height function, with the four split times.

    The maximum of a piecewise linear function sits at a breakpoint; it
    must be an integer here, which is the integrality property of paths
    generated from linear seeds.
    """
    times, values = height_values(cartan, path, i)
    hmax = max(values)
    if hmax.denominator != 1:
        raise IntegralityError(
            "height maximum %s for index %d is not an integer" % (hmax, i)
        )
    eps = int(hmax)
    e_plus = next(t for t, v in zip(times, values) if v == hmax)
    f_plus = next(t for t, v in reversed(list(zip(times, values))) if v == hmax)
    e_minus = _cross_backward(times, values, e_plus, hmax - 1) if eps > 0 else None
    f_minus = _cross_forward(times, values, f_plus, hmax - 1) if f_plus != 1 else None
    return HeightExtrema(hmax, eps, e_minus, e_plus, f_plus, f_minus)


def epsilon(cartan: AffineCartan, path: Path, i: int) -> int:
    return h_extrema(cartan, path, i).eps


def phi(cartan: AffineCartan, path: Path, i: int) -> int:
    ext = h_extrema(cartan, path, i)
    end = -cartan.pairing(i, path.weight())
    return int(ext.max_value - end)


# -- root operators ----------------------------------------------------


def _split_reflect(cartan, path, i, a, b):
    """Reflect the directions of the stretch [a, b] by the i-th reflection."""
    out = []
    t = Fraction(0)
    for d, dur in path.segments:
        lo, hi = t, t + dur
        for x0, x1 in ((lo, min(hi, a)), (max(lo, a), min(hi, b)), (max(lo, b), hi)):
            if x1 <= x0:
                continue
            dd = cartan.reflect(i, d) if a <= x0 and x1 <= b else d
            out.append((dd, x1 - x0))
        t = hi
    return make_path(out, ambient=path.ambient, ncoords=path.ncoords)


def raising_op(cartan: AffineCartan, path: Path, i: int) -> Path | None:
    """The raising root operator; None when the height maximum is zero."""
    ext = h_extrema(cartan, path, i)
    if ext.eps == 0:
        return None
    if ext.e_minus is None:
        raise PathError("height never sits one below its maximum before the climb")
    return _split_reflect(cartan, path, i, ext.e_minus, ext.e_plus)


def lowering_op(cartan: AffineCartan, path: Path, i: int) -> Path | None:
    """The lowering root operator; None when the maximum is last attained at 1."""
    ext = h_extrema(cartan, path, i)
    if ext.f_plus == 1:
        return None
    if ext.f_minus is None:
        raise PathError("height never descends one below its maximum after the peak")
    return _split_reflect(cartan, path, i, ext.f_plus, ext.f_minus)


def weyl_act(cartan: AffineCartan, path: Path, i: int) -> Path:
    """Simple-reflection action: iterate a root operator endpoint-pairing times."""
    n = cartan.pairing(i, path.weight())
    if n.denominator != 1:
        raise PathError("endpoint pairing is not integral")
    n = int(n)
    out = path
    for _ in range(abs(n)):
        out = lowering_op(cartan, out, i) if n > 0 else raising_op(cartan, out, i)
        if out is None:
            raise PathError("Weyl action ran out of string; operators are inconsistent")
    return out


def concat(paths) -> Path:
    """Concatenation with equal time windows per non-constant operand."""
    paths = list(paths)
    if not paths:
        raise PathError("concatenation needs at least one path")
    ambient = paths[0].ambient
    ncoords = paths[0].ncoords
    for p in paths:
        if p.ambient != ambient:
            raise AmbientError("concatenation mixes ambients")
        if p.ncoords != ncoords:
            raise PathError("concatenation mixes ranks")
    movers = [p for p in paths if not p.is_constant]
    k = len(movers)
    if k == 0:
        return Path((), ambient, ncoords)
    segs = []
    for p in movers:
        for d, t in p.segments:
            segs.append((d * k, t / k))
    return make_path(segs, ambient=ambient, ncoords=ncoords)


def stretch(path: Path, n: int) -> Path:
    """Dilate the path by a positive integer factor."""
    if n < 1:
        raise PathError("stretch factor must be a positive integer")
    return make_path(
        [(d * n, t) for d, t in path.segments], ambient=path.ambient, ncoords=path.ncoords
    )


def project(path: Path) -> Path:
    """Kill the null-root component of every direction."""
    if path.ambient != "affine":
        raise AmbientError("path is already classical")
    return make_path(
        [(d.classical(), t) for d, t in path.segments],
        ambient="classical",
        ncoords=path.ncoords,
    )


def segment_uniform(path: Path, n: int) -> list[Weight]:
    """Directions of the path on the uniform grid of step 1/n.

    Every breakpoint must lie on the grid; the j-th entry is the constant
    derivative of the path on ((j-1)/n, j/n).
    """
    if n < 1:
        raise PathError("grid size must be a positive integer")
    if path.is_constant:
        return [_zero_weight(path.ambient, path.ncoords)] * n
    out = []
    t = Fraction(0)
    for d, dur in path.segments:
        cells = dur * n
        if cells.denominator != 1:
            raise PathError(
                "breakpoint %s is not a multiple of 1/%d" % (t + dur, n)
            )
        out.extend([d] * int(cells))
        t += dur
    return out


def grid_size(path: Path) -> int:
    """Least n putting every breakpoint of the path on the 1/n grid."""
    return lcm(*[t.denominator for t in path.breakpoints()])


class PathOps:
    """Crystal operations on paths of a fixed ambient, for the generator."""

    def __init__(self, cartan: AffineCartan, ambient: str = "classical"):
        if ambient not in ("classical", "affine"):
            raise PathError("ambient must be 'classical' or 'affine'")
        self.cartan = cartan
        self.ambient = ambient
        self.indices = tuple(cartan.indices)
        self.infinite = ambient == "affine"

    def key(self, x: Path):
        # the ambient decides whether closure needs a window, so a stray
        # element of the other ambient must not slip into a generation
        if x.ambient != self.ambient:
            raise AmbientError("path ambient does not match the crystal ambient")
        return x.key()

    def wt(self, x: Path) -> Weight:
        return x.weight()

    def eps(self, x: Path, i: int) -> int:
        return epsilon(self.cartan, x, i)

    def phi(self, x: Path, i: int) -> int:
        return phi(self.cartan, x, i)

    def e(self, x: Path, i: int):
        return raising_op(self.cartan, x, i)

    def f(self, x: Path, i: int):
        return lowering_op(self.cartan, x, i)

    def pairing(self, i: int, w: Weight) -> Fraction:
        return self.cartan.pairing(i, w)

    def level(self, x: Path) -> Fraction:
        if self.ambient != "affine":
            raise AmbientError("classical paths have no null-root level")
        return x.weight().delta
