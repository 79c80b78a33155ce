"""Counts of field-rational conjugates of maximal-rank subgroups.

Everything here reduces to Weyl-group combinatorics on a root datum: a
subsystem with N' positive roots inside a system with N of them, the
complement group C stabilizing the subsystem's simple system, and the
graded fixed spaces of harmonics.  The split count is

    q^{2(N - N')} * sum_d  dim H(W)^{W'C}_d * q^{-d}

over 0 <= d <= N - N'.  The twisted count replaces the plain dimension
with an inner product over the finite group generated by C and a twisting
matrix F0 of finite order: the weight function is supported on the coset
C*F0^{-1} and takes the prescribed class-function values there.  The
action of a coset element on the fixed harmonics is its literal matrix
action on polynomials; reports carry that convention as metadata since
other normalizations are conceivable.

With F0 the identity and weight constantly 1 the twisted formula
collapses to the split one exactly; that collapse and the partition of
the split count over the F-classes of C are both covered by tests.
"""

from __future__ import annotations

from .errors import CapError, DomainError, UsageError
from .groups import ReflectionGroup, matrix_key
from .harmonics import action_matrix, fixed_point_basis, harmonic_basis
from .linalg import identity_matrix, mat_inv, mat_mul
from .mpoly import coerce_matrix
from .rootdata import RootDatum, SubsystemData, complement_group, _apply
from .scalars import QQ, CycloScalar, RatPoly

_ORDER_CAP = 1000


def _matrix_order(mat, cap=_ORDER_CAP) -> int:
    ident = identity_matrix(len(mat), CycloScalar.rational(1))
    key_id = matrix_key(ident)
    acc = mat
    for k in range(1, cap + 1):
        if matrix_key(acc) == key_id:
            return k
        acc = mat_mul(acc, mat)
    raise CapError("matrix order exceeds %d" % cap)


def _normalizes_group(group: ReflectionGroup, mat, mat_inverse) -> bool:
    return all(group.contains_matrix(mat_mul(mat_mul(mat, g), mat_inverse))
               for g in group.generators)


class TwistData:
    """A finite-order twisting matrix together with a weight function on C.

    The weight is one of: the constant 1 ("one"), the characteristic
    function of the F-class of a given element ("indicator"), or explicit
    per-element values ("values", a list of (matrix, scalar) pairs that
    must cover C and be constant on F-classes).
    """

    def __init__(self, f0, g_kind: str = "one", g_data=None):
        self.f0 = coerce_matrix(f0)
        if g_kind not in ("one", "indicator", "values"):
            raise UsageError("unknown weight kind %r" % (g_kind,))
        self.g_kind = g_kind
        self.g_data = g_data

    @staticmethod
    def split(dim: int) -> "TwistData":
        return TwistData(identity_matrix(dim, CycloScalar.rational(1)))

    @staticmethod
    def indicator(f0, element) -> "TwistData":
        return TwistData(f0, "indicator", coerce_matrix(element))

    @staticmethod
    def from_json(data) -> "TwistData":
        if not isinstance(data, dict) or "F0" not in data:
            raise UsageError("twist JSON needs an F0 matrix")
        g = data.get("g", "one")
        if g == "one":
            return TwistData(data["F0"])
        if isinstance(g, dict) and "indicator" in g:
            return TwistData.indicator(data["F0"], g["indicator"])
        if isinstance(g, dict) and "values" in g:
            values = [(entry["element"], CycloScalar.coerce(entry["value"]))
                      for entry in g["values"]]
            return TwistData(data["F0"], "values", values)
        raise UsageError("twist weight must be \"one\", an indicator, or "
                         "explicit values")

    def weight_values(self, cgroup: ReflectionGroup, f0) -> dict:
        """Map matrix_key of each element of C to its weight, validated to
        be constant on F-classes."""
        classes = f_classes(cgroup, f0)
        values = {}
        if self.g_kind == "one":
            one = CycloScalar.rational(1)
            for cls in classes:
                for key in cls:
                    values[key] = one
        elif self.g_kind == "indicator":
            target = matrix_key(coerce_matrix(self.g_data))
            hit = [cls for cls in classes if target in cls]
            if not hit:
                raise UsageError("indicator element does not lie in C")
            chosen = hit[0]
            one = CycloScalar.rational(1)
            zero = CycloScalar.rational(0)
            for cls in classes:
                v = one if cls is chosen else zero
                for key in cls:
                    values[key] = v
        else:
            explicit = {}
            for mat, val in self.g_data:
                explicit[matrix_key(coerce_matrix(mat))] = \
                    CycloScalar.coerce(val)
            for cls in classes:
                vals = [explicit.get(key) for key in cls]
                if any(v is None for v in vals):
                    raise UsageError("weight values do not cover C")
                if any(v != vals[0] for v in vals):
                    raise UsageError("weight is not constant on an F-class")
                for key in cls:
                    values[key] = vals[0]
        return values


def f_classes(cgroup: ReflectionGroup, f0):
    """Partition of C into F-conjugacy classes c ~ x c F0(x)^{-1} F0,
    as a list of frozensets of matrix keys, deterministic order."""
    f0_inv = mat_inv(f0)
    twisted = {}
    for i in range(cgroup.order):
        x = cgroup.element(i)
        phi = mat_mul(mat_mul(f0, x), f0_inv)
        j = cgroup.index_of(phi)
        if j is None:
            raise UsageError("twisting matrix does not normalize C")
        twisted[i] = j
    seen = set()
    classes = []
    for i in range(cgroup.order):
        if i in seen:
            continue
        orbit = set()
        stack = [i]
        while stack:
            c = stack.pop()
            if c in orbit:
                continue
            orbit.add(c)
            for x in range(cgroup.order):
                xc = cgroup.mul_index(x, c)
                img = cgroup.mul_index(xc, cgroup.inverse_index(twisted[x]))
                if img not in orbit:
                    stack.append(img)
        seen |= orbit
        classes.append(frozenset(matrix_key(cgroup.element(c))
                                 for c in orbit))
    return classes


def _counting_context(datum: RootDatum, sub: SubsystemData):
    w = datum.group
    n, nprime = datum.npositive, sub.nprime
    cgroup = complement_group(datum, sub)
    return w, n, nprime, cgroup


def count_split(datum: RootDatum, sub: SubsystemData) -> RatPoly:
    """Polynomial in q counting the split-case stable conjugates."""
    w, n, nprime, cgroup = _counting_context(datum, sub)
    mats = list(sub.group.generators) + list(cgroup.elements)
    wc = w.subgroup_from_matrices(mats, name="%s-normalizer" % datum.label)
    fixed = fixed_point_basis(harmonic_basis(w), wc)
    span = n - nprime
    coeffs = [QQ(0)] * (2 * span + 1)
    for d in sorted(fixed.degrees):
        if d > span:
            raise DomainError("fixed harmonics reach degree %d, above the "
                              "summation bound %d" % (d, span))
        coeffs[2 * span - d] += fixed.dim(d)
    return RatPoly(coeffs)


def count_twisted(datum: RootDatum, sub: SubsystemData,
                  twist: TwistData) -> RatPoly:
    """Polynomial in q for the twisted count; the weight lives on the
    coset C*F0^{-1} inside the group generated by C and F0."""
    w, n, nprime, cgroup = _counting_context(datum, sub)
    f0 = twist.f0
    if len(f0) != w.dim or any(len(r) != w.dim for r in f0):
        raise UsageError("twisting matrix size does not match the datum")
    _matrix_order(f0)
    f0_inv = mat_inv(f0)
    if not _normalizes_group(w, f0, f0_inv):
        raise UsageError("twisting matrix does not normalize the Weyl group")
    if not _normalizes_group(sub.group, f0, f0_inv):
        raise UsageError("twisting matrix does not normalize the subsystem "
                         "group")
    simple_set = set(sub.simples)
    if {_apply(f0, s) for s in simple_set} != simple_set:
        raise UsageError("twisting matrix does not stabilize the "
                         "subsystem's simple system")

    cbar = ReflectionGroup(list(cgroup.elements) + [f0],
                           name="%s-twisted-complement" % datum.label)
    weights = twist.weight_values(cgroup, f0)
    fixed = fixed_point_basis(harmonic_basis(w), sub.group)
    span = n - nprime
    unit = QQ(1, cbar.order)
    coeffs = [QQ(0)] * (2 * span + 1)
    for d in sorted(fixed.degrees):
        if d > span:
            raise DomainError("fixed harmonics reach degree %d, above the "
                              "summation bound %d" % (d, span))
        basis = fixed.basis(d)
        total = CycloScalar.rational(0)
        for c in cgroup.elements:
            weight = weights[matrix_key(c)]
            if not weight:
                continue
            rows = action_matrix(basis, mat_mul(c, f0_inv))
            trace = CycloScalar.rational(0)
            for i in range(len(rows)):
                trace = trace + CycloScalar.coerce(rows[i][i])
            total = total + trace * weight.conj()
        if not total.is_rational():
            raise DomainError("twisted count coefficient at degree %d is "
                              "not rational" % d)
        coeffs[2 * span - d] += total.as_rational() * unit
    return RatPoly(coeffs)


def stabilizes_ambient_simples(datum: RootDatum, f0) -> bool:
    """Whether a twisting matrix also permutes the ambient simple system;
    reported as metadata, not required."""
    mat = coerce_matrix(f0)
    simple_set = set(datum.simples)
    return {_apply(mat, s) for s in simple_set} == simple_set


def split_report(datum: RootDatum, sub: SubsystemData) -> dict:
    poly = count_split(datum, sub)
    cgroup = complement_group(datum, sub)
    return {
        "datum": datum.label,
        "N": datum.npositive,
        "Nprime": sub.nprime,
        "C_order": cgroup.order,
        "polynomial": poly.to_json(),
    }


def twisted_report(datum: RootDatum, sub: SubsystemData,
                   twist: TwistData) -> dict:
    poly = count_twisted(datum, sub, twist)
    cgroup = complement_group(datum, sub)
    return {
        "datum": datum.label,
        "N": datum.npositive,
        "Nprime": sub.nprime,
        "C_order": cgroup.order,
        "polynomial": poly.to_json(),
        "coset_action": "matrix action of c*F0^{-1} on polynomials",
        "stabilizes_ambient_simples":
            stabilizes_ambient_simples(datum, twist.f0),
    }
