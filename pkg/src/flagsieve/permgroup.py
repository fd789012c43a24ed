"""Concrete permutation actions for the small groups the search stage needs.

Everything is deterministic: element lists are sorted, orbit enumerations run
breadth-first over sorted generator lists, and the builtin actions are
constructed the same way in every process.  Groups here are tiny (at most a
few tens of thousands of elements), so elements are stored as plain tuples
and closures are computed by brute breadth-first multiplication.
"""

from __future__ import annotations

import functools
import os
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .exactmath import factorize, prime_power

__all__ = [
    "FieldTable",
    "PermAction",
    "Perm",
    "compose",
    "inverse_perm",
    "identity_perm",
    "perm_order",
    "conjugate_perm",
    "projective_points",
    "hermitian_isotropic_points",
    "classical_action",
    "pair_action",
    "subgroup_conjugation_action",
    "subgroups_of_order",
    "subgroup_classes",
    "find_two_generated_subgroup",
    "builtin_action",
    "BUILTIN_NAMES",
    "load_action",
    "save_action",
]

Perm = Tuple[int, ...]


# ---------------------------------------------------------------------------
# finite fields


class FieldTable:
    """Arithmetic of GF(p^f) on the element set {0, 1, ..., q-1}.

    An element's base-p digits are the coefficients of its polynomial
    representative, so 0 and 1 are the additive and multiplicative
    identities.  For f > 1 the modulus is x^f = x + c with the smallest c
    making x a generator of the multiplicative group; if no such c exists
    (e.g. GF(32)) the lexicographically first working right-hand side is
    used.  Multiplication runs off discrete-log tables, so the element p,
    the class of x, is always a primitive element.
    """

    def __init__(self, q: int):
        pp = prime_power(q)
        if pp is None:
            raise ValueError(f"{q} is not a prime power")
        if q > 2**16:
            raise ValueError(f"field GF({q}) too large for table arithmetic")
        self.q = q
        self.p = pp.p
        self.f = pp.f
        self._exp: List[int] = []
        self._log: Dict[int, int] = {}
        if self.f > 1:
            self._modulus_rhs = self._pick_modulus()
        else:
            self._modulus_rhs = 0

    # -- construction helpers

    def _digit_add(self, a: int, b: int) -> int:
        p, out, shift = self.p, 0, 1
        for _ in range(self.f):
            out += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return out

    def _scalar_mul(self, c: int, a: int) -> int:
        p, out, shift = self.p, 0, 1
        for _ in range(self.f):
            out += ((a % p) * c % p) * shift
            a //= p
            shift *= p
        return out

    def _times_x(self, a: int, rhs: int) -> int:
        lead, low = divmod(a * self.p, self.q)
        return self._digit_add(low, self._scalar_mul(lead, rhs)) if lead else low

    def _walk(self, rhs: int) -> Optional[List[int]]:
        """Powers of x mod (x^f - rhs); None unless x has full order q-1."""
        exp = [1]
        cur = 1
        for _ in range(self.q - 2):
            cur = self._times_x(cur, rhs)
            if cur == 1 or cur == 0:
                return None
            exp.append(cur)
        if self._times_x(cur, rhs) != 1:
            return None
        return exp

    def _pick_modulus(self) -> int:
        for c in range(1, self.p):
            exp = self._walk(self._digit_add(self.p, c))  # rhs = x + c
            if exp is not None:
                self._install(exp)
                return self._digit_add(self.p, c)
        for rhs in range(1, self.q):
            if rhs % self.p == 0:
                continue  # x would divide the modulus
            exp = self._walk(rhs)
            if exp is not None:
                self._install(exp)
                return rhs
        raise ArithmeticError(f"no primitive modulus found for GF({self.q})")

    def _install(self, exp: List[int]) -> None:
        self._exp = exp
        self._log = {e: i for i, e in enumerate(exp)}

    # -- arithmetic

    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        return self._digit_add(a, b)

    def neg(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        return self._scalar_mul(self.p - 1, a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("field inverse of zero")
        if self.f == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def power(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        if self.f == 1:
            return pow(a, e % (self.p - 1) if e else 0, self.p)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self.power(a, self.p)

    def generator(self) -> int:
        """A fixed generator of the multiplicative group."""
        if self.f > 1:
            return self.p  # the class of x, primitive by construction
        for g in range(2, self.p):
            seen, cur = 1, g
            while cur != 1:
                cur = cur * g % self.p
                seen += 1
            if seen == self.p - 1:
                return g
        return 1  # p == 2

    def elements(self) -> range:
        return range(self.q)


# ---------------------------------------------------------------------------
# linear algebra over a FieldTable (row-vector convention: x -> x*A)

Matrix = Tuple[Tuple[int, ...], ...]


def _mat_identity(F: FieldTable, n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _mat_mul(F: FieldTable, A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = F.add(acc, F.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _vec_mat(F: FieldTable, x: Sequence[int], A: Matrix) -> Tuple[int, ...]:
    n = len(A)
    return tuple(
        functools.reduce(
            lambda acc, i: F.add(acc, F.mul(x[i], A[i][j])), range(n), 0
        )
        for j in range(n)
    )


def _mat_inv(F: FieldTable, A: Matrix) -> Matrix:
    n = len(A)
    work = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if work[r][col] != 0)
        work[col], work[pivot] = work[pivot], work[col]
        scale = F.inv(work[col][col])
        work[col] = [F.mul(scale, e) for e in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                c = work[r][col]
                work[r] = [
                    F.sub(work[r][j], F.mul(c, work[col][j])) for j in range(2 * n)
                ]
    return tuple(tuple(row[n:]) for row in work)


def _mat_transpose(A: Matrix) -> Matrix:
    n = len(A)
    return tuple(tuple(A[j][i] for j in range(n)) for i in range(n))


def _mat_det3(F: FieldTable, A: Matrix) -> int:
    pos = F.add(
        F.add(
            F.mul(A[0][0], F.mul(A[1][1], A[2][2])),
            F.mul(A[0][1], F.mul(A[1][2], A[2][0])),
        ),
        F.mul(A[0][2], F.mul(A[1][0], A[2][1])),
    )
    neg = F.add(
        F.add(
            F.mul(A[0][2], F.mul(A[1][1], A[2][0])),
            F.mul(A[0][0], F.mul(A[1][2], A[2][1])),
        ),
        F.mul(A[0][1], F.mul(A[1][0], A[2][2])),
    )
    return F.sub(pos, neg)


# ---------------------------------------------------------------------------
# projective and hermitian point sets


def projective_points(F: FieldTable, n: int) -> Tuple[Tuple[int, ...], ...]:
    """Projective space points, scaled to leading coefficient 1, sorted."""
    pts = set()
    for code in range(1, F.q**n):
        vec = []
        c = code
        for _ in range(n):
            vec.append(c % F.q)
            c //= F.q
        vec = tuple(vec)
        lead = next(e for e in vec if e != 0)
        scale = F.inv(lead)
        pts.add(tuple(F.mul(scale, e) for e in vec))
    return tuple(sorted(pts))


def _hermitian_form(F: FieldTable, q0: int, x: Sequence[int], y: Sequence[int]) -> int:
    # antidiagonal form: <x, y> = x0*conj(y2) + x1*conj(y1) + x2*conj(y0)
    acc = 0
    for i in range(3):
        acc = F.add(acc, F.mul(x[i], F.power(y[2 - i], q0)))
    return acc


def hermitian_isotropic_points(q0: int) -> Tuple[Tuple[int, ...], ...]:
    """Isotropic projective points of the 3-dimensional hermitian form."""
    F = FieldTable(q0 * q0)
    pts = [
        x for x in projective_points(F, 3) if _hermitian_form(F, q0, x, x) == 0
    ]
    assert len(pts) == q0**3 + 1
    return tuple(pts)


# ---------------------------------------------------------------------------
# permutations


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """Apply p first, then q."""
    return tuple(q[i] for i in p)


def inverse_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, image in enumerate(p):
        out[image] = i
    return tuple(out)


def perm_order(p: Perm) -> int:
    n = len(p)
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length, cur = 0, start
        while not seen[cur]:
            seen[cur] = True
            cur = p[cur]
            length += 1
        if length > 1:
            g = _gcd2(order, length)
            order = order // g * length
    return order


def conjugate_perm(x: Perm, g: Perm) -> Perm:
    """x conjugated by g: apply g-inverse, then x, then g."""
    return compose(compose(inverse_perm(g), x), g)


def _gcd2(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class PermAction:
    """A permutation group given by generators on {0, ..., degree-1}."""

    def __init__(self, degree: int, generators: Iterable[Perm], label: str = ""):
        gens = []
        for g in generators:
            g = tuple(g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of degree {degree}: {g!r}")
            if g != identity_perm(degree) and g not in gens:
                gens.append(g)
        if not gens:
            gens = [identity_perm(degree)]
        self.degree = degree
        self.generators: Tuple[Perm, ...] = tuple(gens)
        self.label = label
        self._elements: Optional[Tuple[Perm, ...]] = None

    def __repr__(self) -> str:
        return f"PermAction({self.label or 'unnamed'}, degree={self.degree})"

    def elements(self, limit: int = 10**6) -> Tuple[Perm, ...]:
        """All group elements, sorted; BFS closure over the generators."""
        if self._elements is None:
            ident = identity_perm(self.degree)
            seen = {ident}
            queue = [ident]
            head = 0
            while head < len(queue):
                cur = queue[head]
                head += 1
                for g in self.generators:
                    nxt = compose(cur, g)
                    if nxt not in seen:
                        if len(seen) >= limit:
                            raise RuntimeError(
                                f"group exceeds element budget {limit}"
                            )
                        seen.add(nxt)
                        queue.append(nxt)
            self._elements = tuple(sorted(seen))
        return self._elements

    def order(self) -> int:
        return len(self.elements())

    def orbit(self, point: int) -> Tuple[int, ...]:
        seen = {point}
        queue = [point]
        head = 0
        while head < len(queue):
            cur = queue[head]
            head += 1
            for g in self.generators:
                if g[cur] not in seen:
                    seen.add(g[cur])
                    queue.append(g[cur])
        return tuple(sorted(seen))

    def orbits(self) -> Tuple[Tuple[int, ...], ...]:
        left = set(range(self.degree))
        out = []
        while left:
            orb = self.orbit(min(left))
            out.append(orb)
            left -= set(orb)
        return tuple(out)

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def stabilizer_elements(self, point: int) -> Tuple[Perm, ...]:
        return tuple(e for e in self.elements() if e[point] == point)

    def point_stabilizer(self, point: int) -> "PermAction":
        """Stabilizer as its own action, with a small generating set."""
        stab = self.stabilizer_elements(point)
        target = len(stab)
        ident = identity_perm(self.degree)
        gens: List[Perm] = []
        closure = {ident}
        for e in stab:
            if e in closure:
                continue
            gens.append(e)
            closure = set(_closure_perms(gens, ident))
            if len(closure) == target:
                break
        assert len(closure) == target
        return PermAction(
            self.degree, gens or [ident], label=f"{self.label}_stab{point}"
        )

    def suborbit_lengths(self, point: int) -> Tuple[int, ...]:
        """Sorted orbit lengths of the stabilizer of point."""
        stab = self.stabilizer_elements(point)
        left = set(range(self.degree))
        lengths = []
        while left:
            start = min(left)
            seen = {start}
            queue = [start]
            head = 0
            while head < len(queue):
                cur = queue[head]
                head += 1
                for g in stab:
                    if g[cur] not in seen:
                        seen.add(g[cur])
                        queue.append(g[cur])
            lengths.append(len(seen))
            left -= seen
        return tuple(sorted(lengths))

    def reduced(self) -> "PermAction":
        """Same group with a greedily chosen small generating set."""
        elements = self.elements()
        ident = identity_perm(self.degree)
        gens: List[Perm] = []
        closure = {ident}
        for e in elements:
            if e in closure:
                continue
            gens.append(e)
            closure = set(_closure_perms(gens, ident))
            if len(closure) == len(elements):
                break
        act = PermAction(self.degree, gens or [ident], label=self.label)
        act._elements = elements
        return act

    def set_orbit(self, points: Iterable[int]) -> Tuple[FrozenSet[int], ...]:
        """Orbit of a point set under the group, sorted canonically."""
        start = frozenset(points)
        if not all(0 <= i < self.degree for i in start):
            raise ValueError("set contains points outside the domain")
        seen = {start}
        queue = [start]
        head = 0
        while head < len(queue):
            cur = queue[head]
            head += 1
            for g in self.generators:
                nxt = frozenset(g[i] for i in cur)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return tuple(sorted(seen, key=sorted))


def _closure_perms(
    gens: Sequence[Perm], ident: Perm, cap: Optional[int] = None
) -> Optional[Tuple[Perm, ...]]:
    """Group closure of gens; None if a cap is given and exceeded."""
    seen = {ident}
    queue = [ident]
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        for g in gens:
            nxt = compose(cur, g)
            if nxt not in seen:
                if cap is not None and len(seen) >= cap:
                    return None
                seen.add(nxt)
                queue.append(nxt)
    return tuple(sorted(seen))


# ---------------------------------------------------------------------------
# classical actions


def _linear_matrix_generators(F: FieldTable, n: int) -> List[Matrix]:
    """Transvection plus signed cycle: generators of the special linear group."""
    gens: List[Matrix] = []
    gamma = F.generator()
    for j in range(F.f):
        c = F.power(gamma, j) if F.f > 1 else 1
        t = [list(row) for row in _mat_identity(F, n)]
        t[0][1] = c
        gens.append(tuple(tuple(row) for row in t))
    sign = 1 if n % 2 == 1 else F.neg(1)
    cyc = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        cyc[i][i + 1] = 1
    cyc[n - 1][0] = sign
    gens.append(tuple(tuple(row) for row in cyc))
    return gens


def _matrix_point_perm(
    F: FieldTable, A: Matrix, points: Sequence[Tuple[int, ...]], index: Dict
) -> Perm:
    out = []
    for x in points:
        y = _vec_mat(F, x, A)
        lead = next(e for e in y if e != 0)
        scale = F.inv(lead)
        out.append(index[tuple(F.mul(scale, e) for e in y)])
    return tuple(out)


def _linear_action(n: int, q: int, variant: str) -> PermAction:
    F = FieldTable(q)
    points = projective_points(F, n)
    if len(points) > 10000:
        raise ValueError(f"projective domain of size {len(points)} too large")
    index = {x: i for i, x in enumerate(points)}
    mats = _linear_matrix_generators(F, n)
    if variant == "socle.2":
        if n != 3:
            raise ValueError("point-hyperplane doubling implemented for n = 3 only")
        return _linear_doubled_action(F, n, q, points, index, mats)
    if variant in ("pgl", "pgammal"):
        diag = [list(row) for row in _mat_identity(F, n)]
        diag[0][0] = F.generator()
        mats.append(tuple(tuple(row) for row in diag))
    perms = [_matrix_point_perm(F, A, points, index) for A in mats]
    if variant == "pgammal" and F.f > 1:
        frob = []
        for x in points:
            y = tuple(F.frobenius(e) for e in x)
            lead = next(e for e in y if e != 0)
            scale = F.inv(lead)
            frob.append(index[tuple(F.mul(scale, e) for e in y)])
        perms.append(tuple(frob))
    label = {"socle": f"psl{n}_{q}", "pgl": f"pgl{n}_{q}", "pgammal": f"pgammal{n}_{q}"}[
        variant
    ]
    return PermAction(len(points), perms, label=label)


def _linear_doubled_action(
    F: FieldTable,
    n: int,
    q: int,
    points: Sequence[Tuple[int, ...]],
    index: Dict,
    mats: Sequence[Matrix],
) -> PermAction:
    """Socle extended by the point-hyperplane correspondence, degree 2N.

    A hyperplane with coefficient vector h is the point set {x : x.h = 0};
    indices N..2N-1 store hyperplanes by their normalized coefficient
    vectors.  Matrices act on coefficients through the inverse transpose,
    and the swap delta conjugates each matrix to its inverse transpose.
    """
    N = len(points)
    perms = []
    for A in mats:
        point_part = _matrix_point_perm(F, A, points, index)
        dual_mat = _mat_transpose(_mat_inv(F, A))
        dual_part = _matrix_point_perm(F, dual_mat, points, index)
        perms.append(tuple(list(point_part) + [N + i for i in dual_part]))
    delta = tuple(list(range(N, 2 * N)) + list(range(N)))
    perms.append(delta)
    return PermAction(2 * N, perms, label=f"psl{n}_{q}_2")


def _unitary_matrix_ok(F: FieldTable, q0: int, A: Matrix) -> bool:
    # invariance of the antidiagonal hermitian form plus determinant one
    n = 3
    for i in range(n):
        for j in range(n):
            acc = 0
            for a in range(n):
                for b in range(n):
                    if a + b == 2:
                        acc = F.add(acc, F.mul(A[i][a], F.power(A[j][b], q0)))
            want = 1 if i + j == 2 else 0
            if acc != want:
                return False
    return _mat_det3(F, A) == 1


def _unitary_action(q0: int, variant: str) -> PermAction:
    if q0 > 5:
        raise ValueError("hermitian action supported for q <= 5 only")
    if q0 == 2:
        raise ValueError("the 3-dimensional hermitian group over GF(4) is solvable")
    F = FieldTable(q0 * q0)
    points = hermitian_isotropic_points(q0)
    index = {x: i for i, x in enumerate(points)}
    mats: List[Matrix] = []
    # full upper unitriangular root subgroup, found by direct search
    for a in F.elements():
        for b in F.elements():
            for c in F.elements():
                A = ((1, a, b), (0, 1, c), (0, 0, 1))
                if _unitary_matrix_ok(F, q0, A):
                    mats.append(A)
    assert len(mats) == q0**3
    for a in F.elements():
        if a == 0:
            continue
        for b in F.elements():
            if b == 0:
                continue
            c_inv = F.inv(F.power(a, q0))
            A = ((a, 0, 0), (0, b, 0), (0, 0, c_inv))
            if _unitary_matrix_ok(F, q0, A):
                mats.append(A)
    found_weyl = False
    for a in F.elements():
        if found_weyl:
            break
        for b in F.elements():
            for c in F.elements():
                A = ((0, 0, a), (0, b, 0), (c, 0, 0))
                if a and b and c and _unitary_matrix_ok(F, q0, A):
                    mats.append(A)
                    found_weyl = True
                    break
            if found_weyl:
                break
    assert found_weyl
    perms = [_matrix_point_perm(F, A, points, index) for A in mats]
    if variant == "socle.2":
        frob = []
        for x in points:
            y = tuple(F.frobenius(e) for e in x)
            lead = next(e for e in y if e != 0)
            scale = F.inv(lead)
            frob.append(index[tuple(F.mul(scale, e) for e in y)])
        perms.append(tuple(frob))
        return PermAction(len(points), perms, label=f"psu3_{q0}_2")
    return PermAction(len(points), perms, label=f"psu3_{q0}")


def classical_action(family: str, n: int, q: int, variant: str = "socle") -> PermAction:
    """Natural projective action of a classical group.

    family 'linear': projective points, variants socle / pgl / pgammal /
    socle.2 (n = 3 point-hyperplane doubling).  family 'unitary': n must be
    3, isotropic points of the hermitian form, variants socle / socle.2
    (field automorphism adjoined).
    """
    if variant not in ("socle", "pgl", "pgammal", "socle.2"):
        raise ValueError(f"unknown variant {variant!r}")
    if family == "linear":
        if n < 3:
            raise ValueError("need dimension at least 3")
        return _linear_action(n, q, variant)
    if family == "unitary":
        if n != 3:
            raise ValueError("hermitian actions implemented for n = 3 only")
        if variant in ("pgl", "pgammal"):
            raise ValueError(f"variant {variant!r} not available for unitary groups")
        return _unitary_action(q, variant)
    raise ValueError(f"unknown family {family!r}")


def pair_action(action: PermAction) -> PermAction:
    """Induced action on unordered point pairs, in lexicographic order."""
    pairs = [(i, j) for i in range(action.degree) for j in range(i + 1, action.degree)]
    index = {p: c for c, p in enumerate(pairs)}
    perms = []
    for g in action.generators:
        perms.append(
            tuple(index[tuple(sorted((g[i], g[j])))] for i, j in pairs)
        )
    return PermAction(len(pairs), perms, label=f"{action.label}_pairs")


# ---------------------------------------------------------------------------
# subgroup machinery


def subgroup_conjugation_action(
    action: PermAction, subgroup: Iterable[Perm]
) -> PermAction:
    """Action on the conjugates of a subgroup, in discovery order."""
    start = frozenset(subgroup)
    seen = {start: 0}
    queue = [start]
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        for g in action.generators:
            nxt = frozenset(conjugate_perm(x, g) for x in cur)
            if nxt not in seen:
                seen[nxt] = len(queue)
                queue.append(nxt)
    perms = []
    for g in action.generators:
        perms.append(
            tuple(
                seen[frozenset(conjugate_perm(x, g) for x in queue[i])]
                for i in range(len(queue))
            )
        )
    return PermAction(len(queue), perms, label=f"{action.label}_conj")


def _index_tables(elements: Sequence[Perm]):
    index = {e: i for i, e in enumerate(elements)}
    mult = [
        [index[compose(a, b)] for b in elements] for a in elements
    ]
    return index, mult


def _close_indices(
    mult: Sequence[Sequence[int]], id_idx: int, base: Sequence[int], cap: int
) -> Optional[FrozenSet[int]]:
    seen = set(base)
    seen.add(id_idx)
    queue = list(seen)
    head = 0
    base = list(base)
    while head < len(queue):
        a = queue[head]
        head += 1
        row = mult[a]
        for b in base:
            c = row[b]
            if c not in seen:
                if len(seen) >= cap:
                    return None
                seen.add(c)
                queue.append(c)
    return frozenset(seen)


def _lattice_route(
    action: PermAction, m: int
) -> Tuple[FrozenSet[Perm], ...]:
    """Every subgroup of order m, grown one generator at a time.

    Any order-m subgroup K admits a chain of subgroups 1 < ... < K in which
    each term adds a single element of K, and all terms have order dividing
    m; breadth-first search over such chains is therefore complete.
    """
    elements = action.elements()
    index, mult = _index_tables(elements)
    id_idx = index[identity_perm(action.degree)]
    candidates = [
        i for i, e in enumerate(elements) if m % perm_order(e) == 0
    ]
    trivial = frozenset({id_idx})
    seen = {trivial}
    queue = [trivial]
    head = 0
    found = []
    while head < len(queue):
        sub = queue[head]
        head += 1
        if len(sub) == m:
            found.append(sub)
            continue
        for y in candidates:
            if y in sub:
                continue
            grown = _close_indices(mult, id_idx, list(sub) + [y], m + 1)
            if grown is None or m % len(grown) != 0:
                continue
            if grown not in seen:
                seen.add(grown)
                queue.append(grown)
    packed = [frozenset(elements[i] for i in sub) for sub in found]
    return tuple(sorted(packed, key=lambda s: sorted(s)))


def _sylow_route(action: PermAction, m: int) -> Optional[Tuple[FrozenSet[Perm], ...]]:
    """Order-m subgroups when they are exactly the normalizers of a Sylow.

    Applies when some prime ell divides m and the group order exactly once,
    and the count restrictions force a normal Sylow ell-subgroup in every
    group of order m.  Then each order-m subgroup normalizes a Sylow
    ell-subgroup P of the whole group, hence equals the normalizer of P
    whenever that normalizer has order m; conjugacy of Sylow subgroups makes
    the enumeration complete.
    """
    elements = action.elements()
    n = len(elements)
    if n % m != 0:
        return ()
    for ell, e in factorize(m).pairs:
        if e != 1:
            continue
        if (n // ell) % ell == 0:
            continue  # need the full ell-part of the group
        cofactor = m // ell
        forced = all(
            t == 1
            for t in range(1, cofactor + 1)
            if cofactor % t == 0 and t % ell == 1
        )
        if not forced:
            continue
        gen = next((x for x in elements if perm_order(x) == ell), None)
        if gen is None:
            return ()
        power = gen
        sylow = {identity_perm(action.degree)}
        while power not in sylow:
            sylow.add(power)
            power = compose(power, gen)
        normalizer = frozenset(
            g for g in elements if conjugate_perm(gen, g) in sylow
        )
        if len(normalizer) != m:
            return None  # normalizer bigger than m: route not conclusive
        seen = {normalizer}
        queue = [normalizer]
        head = 0
        while head < len(queue):
            cur = queue[head]
            head += 1
            for g in action.generators:
                nxt = frozenset(conjugate_perm(x, g) for x in cur)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return tuple(sorted(seen, key=lambda s: sorted(s)))
    return None


def subgroups_of_order(action: PermAction, m: int) -> Tuple[FrozenSet[Perm], ...]:
    """Complete list of order-m subgroups, or an error.

    Uses the exhaustive one-generator-at-a-time lattice search for small
    groups and the Sylow-normalizer argument for larger ones; raises when
    neither method can certify completeness.
    """
    order = action.order()
    if m < 1 or order % m != 0:
        return ()
    if m == 1:
        return (frozenset({identity_perm(action.degree)}),)
    if order <= 1000 and m <= 64:
        return _lattice_route(action, m)
    sylow = _sylow_route(action, m)
    if sylow is not None:
        return sylow
    raise RuntimeError(
        f"cannot certify a complete order-{m} subgroup enumeration "
        f"in a group of order {order}"
    )


def subgroup_classes(
    action: PermAction, subgroups: Sequence[FrozenSet[Perm]]
) -> Tuple[Tuple[FrozenSet[Perm], int], ...]:
    """Partition subgroups into conjugacy classes: (representative, size)."""
    remaining = set(subgroups)
    out = []
    for sub in subgroups:
        if sub not in remaining:
            continue
        seen = {sub}
        queue = [sub]
        head = 0
        while head < len(queue):
            cur = queue[head]
            head += 1
            for g in action.generators:
                nxt = frozenset(conjugate_perm(x, g) for x in cur)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        unseen = seen - set(subgroups)
        if unseen:
            raise AssertionError("conjugate fell outside the supplied list")
        out.append((sub, len(seen)))
        remaining -= seen
    return tuple(out)


def find_two_generated_subgroup(
    action: PermAction, order: int, order_a: int, order_b: int, order_ab: int
) -> FrozenSet[Perm]:
    """First subgroup of the given order generated by an (order_a, order_b)
    pair whose product has order order_ab, scanning elements in sorted order."""
    ident = identity_perm(action.degree)
    elements = action.elements()
    firsts = [e for e in elements if perm_order(e) == order_a]
    seconds = [e for e in elements if perm_order(e) == order_b]
    for a in firsts:
        for b in seconds:
            if perm_order(compose(a, b)) != order_ab:
                continue
            closed = _closure_perms([a, b], ident, cap=order + 1)
            if closed is not None and len(closed) == order:
                return frozenset(closed)
    raise RuntimeError(
        f"no order-{order} subgroup with a ({order_a},{order_b},{order_ab}) "
        "generating pair"
    )


# ---------------------------------------------------------------------------
# builtin actions


def _a8_action() -> PermAction:
    seven = tuple(list((1, 2, 3, 4, 5, 6, 0)) + [7])
    three = (0, 1, 2, 3, 4, 6, 7, 5)
    return PermAction(8, [seven, three], label="psl4_2")


def _projective_line_7(with_scalar: bool) -> PermAction:
    # points 0..6 plus 7 for the point at infinity
    shift = tuple([(i + 1) % 7 for i in range(7)] + [7])
    minus_inv = [0] * 8
    minus_inv[7] = 0
    minus_inv[0] = 7
    for x in range(1, 7):
        minus_inv[x] = (-pow(x, 5, 7)) % 7
    gens = [shift, tuple(minus_inv)]
    label = "psl2_7"
    if with_scalar:
        gens.append(tuple([(3 * i) % 7 for i in range(7)] + [7]))
        label = "pgl2_7"
    return PermAction(8, gens, label=label)


def _unitary_cosets_36(extended: bool) -> PermAction:
    base = builtin_action("psu3_3_2" if extended else "psu3_3").reduced()
    socle = builtin_action("psu3_3")
    sub = find_two_generated_subgroup(socle, 168, 2, 3, 7)
    act = subgroup_conjugation_action(base, sub)
    act.label = "psu3_3_2_36" if extended else "psu3_3_36"
    assert act.degree == 36
    return act


def _sylow13_action_144(extended: bool) -> PermAction:
    base = builtin_action("psl3_3_2")
    gen = next(e for e in base.elements() if perm_order(e) == 13)
    sylow = set()
    cur = identity_perm(base.degree)
    for _ in range(13):
        sylow.add(cur)
        cur = compose(cur, gen)
    source = base.reduced()
    if not extended:
        # restrict to the matrix generators: the swap is the last one listed
        source = PermAction(
            base.degree, base.generators[:-1], label="psl3_3_doubled"
        ).reduced()
    act = subgroup_conjugation_action(source, frozenset(sylow))
    act.label = "psl3_3_2_144" if extended else "psl3_3_144"
    assert act.degree == 144
    return act


@functools.lru_cache(maxsize=None)
def builtin_action(name: str) -> PermAction:
    """Named ready-made actions used by the command line and the searches."""
    if name == "psl3_2":
        return classical_action("linear", 3, 2, "socle")
    if name == "psl3_3":
        return classical_action("linear", 3, 3, "socle")
    if name == "psl3_3_2":
        return classical_action("linear", 3, 3, "socle.2")
    if name == "psl4_2":
        return _a8_action()
    if name == "psl2_7":
        return _projective_line_7(False)
    if name == "pgl2_7":
        return _projective_line_7(True)
    if name == "psu3_3":
        return classical_action("unitary", 3, 3, "socle")
    if name == "psu3_3_2":
        return classical_action("unitary", 3, 3, "socle.2")
    if name == "psu3_3_36":
        return _unitary_cosets_36(False)
    if name == "psu3_3_2_36":
        return _unitary_cosets_36(True)
    if name == "psl3_3_144":
        return _sylow13_action_144(False)
    if name == "psl3_3_2_144":
        return _sylow13_action_144(True)
    raise ValueError(f"unknown builtin action {name!r}")


BUILTIN_NAMES = (
    "psl3_2",
    "psl3_3",
    "psl3_3_2",
    "psl4_2",
    "psl2_7",
    "pgl2_7",
    "psu3_3",
    "psu3_3_2",
    "psu3_3_36",
    "psu3_3_2_36",
    "psl3_3_144",
    "psl3_3_2_144",
)


# ---------------------------------------------------------------------------
# file format: "degree N" then one line of N images per generator


def load_action(path: str, label: str = "") -> PermAction:
    degree = None
    gens: List[Perm] = []
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if degree is None:
                parts = line.split()
                if len(parts) != 2 or parts[0] != "degree":
                    raise ValueError(f"expected 'degree N' header, got {line!r}")
                degree = int(parts[1])
                if degree < 1:
                    raise ValueError("degree must be positive")
                continue
            images = tuple(int(tok) for tok in line.split())
            if len(images) != degree:
                raise ValueError(
                    f"generator line has {len(images)} entries, expected {degree}"
                )
            gens.append(images)
    if degree is None:
        raise ValueError(f"no 'degree N' header in {path}")
    return PermAction(
        degree, gens, label=label or os.path.splitext(os.path.basename(path))[0]
    )


def save_action(action: PermAction, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"# generators of {action.label or 'a permutation group'}\n")
        handle.write(f"degree {action.degree}\n")
        for g in action.generators:
            handle.write(" ".join(str(i) for i in g) + "\n")
