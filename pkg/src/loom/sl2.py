"""Exact divided-power computations in tensors of simple rank-one modules.

Basis vectors of a tensor of simple modules are tagged by the divided
powers applied to each highest weight vector.  All actions are exact
over the rational function field; the crystal-limit machinery expresses
a vector in the string basis through the singular vectors, checks that
every coordinate is regular at the origin, and evaluates there.

The singular vectors are built from their hypergeometric-style closed
form and re-derived independently by solving for the kernel of the
raising action, so the two routes police each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .qfield import Q_ONE, Q_ZERO, QScalar, qfact, qint


class NotInLatticeError(ArithmeticError):
    """A coordinate in the string basis has a pole at the origin."""


class HomogeneityError(ValueError):
    """Operation needs a weight-homogeneous vector."""


def _index_weight(shape, idx) -> int:
    return sum(t - 2 * s for t, s in zip(shape, idx))


@dataclass(frozen=True)
class TensorVector:
    """Vector in a tensor of simple modules, keyed by divided-power tags."""

    shape: tuple[int, ...]
    coords: tuple

    @staticmethod
    def make(shape, coords: dict) -> "TensorVector":
        shape = tuple(shape)
        clean = {}
        for idx, c in coords.items():
            idx = tuple(idx)
            if len(idx) != len(shape):
                raise ValueError("index arity does not match the shape")
            if any(not 0 <= s <= t for s, t in zip(idx, shape)):
                raise ValueError("index %r outside shape %r" % (idx, shape))
            if not c.is_zero:
                clean[idx] = c
        return TensorVector(shape, tuple(sorted(clean.items())))

    @staticmethod
    def basis(shape, idx) -> "TensorVector":
        return TensorVector.make(shape, {tuple(idx): Q_ONE})

    @staticmethod
    def zero(shape) -> "TensorVector":
        return TensorVector.make(shape, {})

    def items(self):
        return self.coords

    def as_dict(self) -> dict:
        return dict(self.coords)

    @property
    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: "TensorVector") -> "TensorVector":
        if self.shape != other.shape:
            raise ValueError("shapes differ")
        out = self.as_dict()
        for idx, c in other.coords:
            out[idx] = out.get(idx, Q_ZERO) + c
        return TensorVector.make(self.shape, out)

    def __sub__(self, other: "TensorVector") -> "TensorVector":
        return self + other.scale(QScalar.const(-1))

    def scale(self, c: QScalar) -> "TensorVector":
        return TensorVector.make(self.shape, {idx: c * x for idx, x in self.coords})

    def weight(self) -> int:
        """Common weight of the support; fails on mixed support."""
        if self.is_zero:
            raise HomogeneityError("the zero vector has every weight")
        weights = {_index_weight(self.shape, idx) for idx, _ in self.coords}
        if len(weights) != 1:
            raise HomogeneityError("vector is not weight homogeneous")
        return weights.pop()

    def __repr__(self):
        if self.is_zero:
            return "TensorVector(0; shape=%r)" % (self.shape,)
        body = " + ".join("%r*%r" % (c, idx) for idx, c in self.coords)
        return "TensorVector(%s)" % body


# -- generator actions ---------------------------------------------------


def act_E(v: TensorVector) -> TensorVector:
    out: dict = {}
    for idx, c in v.coords:
        tail_weight = 0
        for j in reversed(range(len(idx))):
            s, t = idx[j], v.shape[j]
            if s >= 1:
                coeff = c * qint(t - s + 1) * QScalar.q_power(-tail_weight)
                nidx = idx[:j] + (s - 1,) + idx[j + 1 :]
                out[nidx] = out.get(nidx, Q_ZERO) + coeff
            tail_weight += t - 2 * s
    return TensorVector.make(v.shape, out)


def act_F(v: TensorVector) -> TensorVector:
    out: dict = {}
    for idx, c in v.coords:
        head_weight = 0
        for j in range(len(idx)):
            s, t = idx[j], v.shape[j]
            if s + 1 <= t:
                coeff = c * qint(s + 1) * QScalar.q_power(head_weight)
                nidx = idx[:j] + (s + 1,) + idx[j + 1 :]
                out[nidx] = out.get(nidx, Q_ZERO) + coeff
            head_weight += t - 2 * s
    return TensorVector.make(v.shape, out)


def act_K(v: TensorVector, power: int = 1) -> TensorVector:
    return TensorVector.make(
        v.shape,
        {
            idx: c * QScalar.q_power(power * _index_weight(v.shape, idx))
            for idx, c in v.coords
        },
    )


def act_F_div(v: TensorVector, r: int) -> TensorVector:
    out = v
    for _ in range(r):
        out = act_F(out)
    return out.scale(Q_ONE / qfact(r)) if r else out


def act_E_div(v: TensorVector, r: int) -> TensorVector:
    out = v
    for _ in range(r):
        out = act_E(out)
    return out.scale(Q_ONE / qfact(r)) if r else out


def act(generator: str, v: TensorVector, r: int = 1) -> TensorVector:
    """Named-generator dispatch: E, F, K, K-1, E(r), F(r)."""
    table = {
        "E": lambda: act_E(v),
        "F": lambda: act_F(v),
        "K": lambda: act_K(v, 1),
        "K-1": lambda: act_K(v, -1),
        "E(r)": lambda: act_E_div(v, r),
        "F(r)": lambda: act_F_div(v, r),
    }
    if generator not in table:
        raise ValueError("unknown generator %r" % generator)
    return table[generator]()


def _tensor_join(shape, left: TensorVector, right: TensorVector) -> TensorVector:
    out: dict = {}
    for lidx, lc in left.coords:
        for ridx, rc in right.coords:
            out[lidx + ridx] = out.get(lidx + ridx, Q_ZERO) + lc * rc
    return TensorVector.make(shape, out)


def act_F_div_split(v: TensorVector, r: int, cut: int) -> TensorVector:
    """Divided lowering power through the two-sided coproduct at a cut.

    Exercises the explicit expansion of the coproduct of a divided power
    with the factors grouped as (first ``cut``) against (rest); it must
    agree with the ungrouped action whatever the cut.
    """
    if not 0 < cut < len(v.shape):
        raise ValueError("cut must split the factors properly")
    lshape, rshape = v.shape[:cut], v.shape[cut:]
    total = TensorVector.zero(v.shape)
    for idx, c in v.coords:
        left = TensorVector.basis(lshape, idx[:cut])
        right = TensorVector.basis(rshape, idx[cut:])
        for s in range(r + 1):
            lpart = act_F_div(act_K(left, s), r - s)
            rpart = act_F_div(right, s)
            piece = _tensor_join(v.shape, lpart, rpart)
            total = total + piece.scale(c * QScalar.q_power(-s * (r - s)))
    return total


def act_E_div_split(v: TensorVector, r: int, cut: int) -> TensorVector:
    if not 0 < cut < len(v.shape):
        raise ValueError("cut must split the factors properly")
    lshape, rshape = v.shape[:cut], v.shape[cut:]
    total = TensorVector.zero(v.shape)
    for idx, c in v.coords:
        left = TensorVector.basis(lshape, idx[:cut])
        right = TensorVector.basis(rshape, idx[cut:])
        for s in range(r + 1):
            lpart = act_E_div(left, s)
            rpart = act_E_div(act_K(right, -s), r - s)
            piece = _tensor_join(v.shape, lpart, rpart)
            total = total + piece.scale(c * QScalar.q_power(-s * (r - s)))
    return total


# -- string decomposition and the Kashiwara operators ---------------------


def string_decompose(v: TensorVector) -> list[tuple[int, TensorVector]]:
    """Unique expansion into divided lowering powers of raising-kernel parts.

    Peels the top of the longest string first: the highest surviving
    raising power is a kernel vector up to an invertible balanced-integer
    product, which is divided out exactly.
    """
    if v.is_zero:
        return []
    nu = v.weight()
    parts: list[tuple[int, TensorVector]] = []
    rest = v
    while not rest.is_zero:
        chain = [rest]
        while not chain[-1].is_zero:
            chain.append(act_E(chain[-1]))
        smax = len(chain) - 2
        top = chain[smax]
        mu = nu + 2 * smax
        denom = Q_ONE
        for j in range(1, smax + 1):
            denom = denom * qint(mu - j + 1)
        u = top.scale(Q_ONE / denom)
        if not act_E(u).is_zero:
            raise ArithmeticError("string top is not in the raising kernel")
        parts.append((smax, u))
        rest = rest - act_F_div(u, smax)
        if not rest.is_zero and rest.weight() != nu:
            raise ArithmeticError("string peeling changed the weight")
    parts.sort()
    check = TensorVector.zero(v.shape)
    for s, u in parts:
        check = check + act_F_div(u, s)
    if check != v:
        raise ArithmeticError("string decomposition does not reassemble")
    if any(s < max(0, -nu) for s, _ in parts):
        raise ArithmeticError("string decomposition violates the weight bound")
    return parts


def kashiwara_e(v: TensorVector) -> TensorVector:
    out = TensorVector.zero(v.shape)
    for s, u in string_decompose(v):
        if s >= 1:
            out = out + act_F_div(u, s - 1)
    return out


def kashiwara_f(v: TensorVector) -> TensorVector:
    out = TensorVector.zero(v.shape)
    for s, u in string_decompose(v):
        out = out + act_F_div(u, s + 1)
    return out


# -- singular vectors and the string lattice ------------------------------


def singular_coefficient(t1: int, t2: int, r: int, a: int) -> QScalar:
    """Closed-form coordinate of the r-th singular vector at lowering split a."""
    if a == 0:
        return Q_ONE
    sign = QScalar.const((-1) ** a)
    out = sign * QScalar.q_power(a * (t1 + 1 - r))
    for j in range(1, a + 1):
        num = Q_ONE - QScalar.q_power(2 * (t2 - r + j))
        den = Q_ONE - QScalar.q_power(2 * (t1 - j + 1))
        out = out * (num / den)
    return out


def singular_vector(t1: int, t2: int, r: int) -> TensorVector:
    if not 0 <= r <= min(t1, t2):
        raise ValueError("singular index out of range")
    coords = {
        (a, r - a): singular_coefficient(t1, t2, r, a) for a in range(r + 1)
    }
    u = TensorVector.make((t1, t2), coords)
    if not act_E(u).is_zero:
        raise ArithmeticError("closed-form singular vector is not singular")
    return u


def singular_vectors(t1: int, t2: int) -> list[TensorVector]:
    return [singular_vector(t1, t2, r) for r in range(min(t1, t2) + 1)]


def _solve_square(matrix, rhs):
    """Exact Gaussian elimination; matrix rows of QScalar, one solution."""
    n = len(matrix)
    a = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((k for k in range(col, n) if not a[k][col].is_zero), None)
        if piv is None:
            raise ArithmeticError("singular linear system")
        a[col], a[piv] = a[piv], a[col]
        inv = Q_ONE / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for k in range(n):
            if k != col and not a[k][col].is_zero:
                f = a[k][col]
                a[k] = [x - f * y for x, y in zip(a[k], a[col])]
    return [a[k][n] for k in range(n)]


class StringLattice:
    """The divided-power string basis of a two-factor tensor.

    Holds every string vector through the singular vectors, the exact
    change of basis per weight level, and the class each string vector
    occupies at the origin.
    """

    def __init__(self, t1: int, t2: int):
        self.shape = (t1, t2)
        self.singular = {r: singular_vector(t1, t2, r) for r in range(min(t1, t2) + 1)}
        self.strings: dict = {}
        for r, u in self.singular.items():
            top = t1 + t2 - 2 * r
            vec = u
            for b in range(top + 1):
                if b:
                    vec = act_F(vec).scale(Q_ONE / qint(b))
                if vec.is_zero:
                    raise ArithmeticError("string vector vanished early")
                self.strings[(r, b)] = vec
        by_level: dict = {}
        for (r, b), vec in self.strings.items():
            by_level.setdefault(r + b, []).append((r, b))
        for level in by_level:
            by_level[level].sort()
        self._levels = by_level
        self._dp_keys = {
            level: sorted(
                (s1, level - s1)
                for s1 in range(max(0, level - t2), min(t1, level) + 1)
            )
            for level in by_level
        }
        for level, tags in by_level.items():
            if len(tags) != len(self._dp_keys[level]):
                raise ArithmeticError("string basis does not fill the level")
        self.class_of_string = {}
        self.string_of_class = {}
        for tag, vec in sorted(self.strings.items()):
            limit = {idx: c.at_zero() for idx, c in vec.coords if c.at_zero() != 0}
            if len(limit) != 1 or set(limit.values()) != {Fraction(1)}:
                raise ArithmeticError("string vector has no clean origin class")
            (idx,) = limit
            self.class_of_string[tag] = idx
            self.string_of_class[idx] = tag
        if len(self.string_of_class) != len(self.strings):
            raise ArithmeticError("origin classes are not distinct")

    def coords(self, v: TensorVector) -> dict:
        """Coordinates of v in the string basis, exact."""
        out: dict = {}
        by_level: dict = {}
        for idx, c in v.coords:
            by_level.setdefault(idx[0] + idx[1], {})[idx] = c
        for level, comp in by_level.items():
            tags = self._levels[level]
            keys = self._dp_keys[level]
            matrix = [
                [self.strings[tag].as_dict().get(key, Q_ZERO) for tag in tags]
                for key in keys
            ]
            rhs = [comp.get(key, Q_ZERO) for key in keys]
            sol = _solve_square(matrix, rhs)
            for tag, c in zip(tags, sol):
                if not c.is_zero:
                    out[tag] = c
        return out

    def in_lattice(self, v: TensorVector) -> bool:
        return all(c.regular_at_zero for c in self.coords(v).values())

    def reduce_at_zero(self, v: TensorVector) -> dict:
        """Classes surviving at the origin; poles raise."""
        out = {}
        for tag, c in self.coords(v).items():
            if not c.regular_at_zero:
                raise NotInLatticeError(
                    "coordinate at %r has a pole at the origin" % (tag,)
                )
            val = c.at_zero()
            if val != 0:
                out[tag] = val
        return out

    def origin_class(self, v: TensorVector):
        """The basis class of v at the origin, or None; must be clean."""
        red = self.reduce_at_zero(v)
        if not red:
            return None
        if len(red) != 1 or set(red.values()) != {Fraction(1)}:
            raise ArithmeticError("origin reduction is not a single class")
        (tag,) = red
        return self.class_of_string[tag]


def crystal_limit_table(t1: int, t2: int) -> dict:
    """Exact origin behaviour of both Kashiwara operators on every tag.

    Maps ('e'|'f', s1, s2) to the resulting tag or None.  The arithmetic
    is the ground truth; the four-case split and the two-factor tensor
    rule are checked against it by the callers.
    """
    lattice = StringLattice(t1, t2)
    table = {}
    for s1 in range(t1 + 1):
        for s2 in range(t2 + 1):
            vec = TensorVector.basis((t1, t2), (s1, s2))
            table[("e", s1, s2)] = lattice.origin_class(kashiwara_e(vec))
            table[("f", s1, s2)] = lattice.origin_class(kashiwara_f(vec))
    return table


def origin_case_table(t1: int, t2: int) -> dict:
    """Four-case split of the origin action, decided by t1 against s1+s2."""
    table = {}
    for s1 in range(t1 + 1):
        for s2 in range(t2 + 1):
            if t1 >= s1 + s2:
                e = (s1 - 1, s2) if s1 >= 1 else None
            else:
                e = (s1, s2 - 1) if s2 >= 1 else None
            if t1 > s1 + s2:
                f = (s1 + 1, s2) if s1 + 1 <= t1 else None
            else:
                f = (s1, s2 + 1) if s2 + 1 <= t2 else None
            table[("e", s1, s2)] = e
            table[("f", s1, s2)] = f
    return table


def tensor_rule_table(t1: int, t2: int) -> dict:
    """Two-factor tensor rule on string tags, via the phi/eps comparison."""
    table = {}
    for s1 in range(t1 + 1):
        for s2 in range(t2 + 1):
            phi1, eps2 = t1 - s1, s2
            if phi1 >= eps2:
                e = (s1 - 1, s2) if s1 >= 1 else None
            else:
                e = (s1, s2 - 1) if s2 >= 1 else None
            if phi1 > eps2:
                f = (s1 + 1, s2) if s1 + 1 <= t1 else None
            else:
                f = (s1, s2 + 1) if s2 + 1 <= t2 else None
            table[("e", s1, s2)] = e
            table[("f", s1, s2)] = f
    return table
