"""Connection calculus for affine connections with polynomial coefficients.

Conventions, fixed once here and relied on everywhere else:

* ``gamma(l, i, j)`` is the coefficient of the l-th frame vector in the
  covariant derivative of the j-th frame vector along the i-th direction.
* ``curvature`` components R^l_{ijk} satisfy
  R^l_{ijk} = dGamma^l_{jk}/dx_i - dGamma^l_{ik}/dx_j
              + Gamma^m_{jk} Gamma^l_{im} - Gamma^m_{ik} Gamma^l_{jm},
  antisymmetric in the pair (i,j); slot k is the endomorphism input.
* ``covariant_derivative`` appends the differentiation direction as the
  LAST covariant slot: (DT)^l_{i...k} differentiates along k.
* The exterior covariant differential of a k-form is the alternating sum
  over k+1 directions of the covariant derivative of the form's value,
  with partial derivatives on the form slots (coordinate frames commute,
  so no bracket terms appear).  For degree 1 applied to the identity this
  yields exactly the torsion, and the two Bianchi identities hold
  componentwise; the test suite enforces both, which pins the convention.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .poly import ParseError, Polynomial, parse, to_string
from .tensor import TensorField, TensorShape, _flat, delta, is_antisymmetric


@dataclass(frozen=True)
class Connection:
    """An affine connection: dimension n and the n^3 Christoffel entries.

    No symmetry is imposed on the lower index pair; torsion is allowed.
    """

    dimension: int
    christoffel: tuple[Polynomial, ...]  # flat over (l, i, j), each 1..n

    def __post_init__(self) -> None:
        n = self.dimension
        if n < 1:
            raise ValueError(f"dimension must be >= 1, got {n}")
        if len(self.christoffel) != n**3:
            raise ValueError(f"expected {n**3} Christoffel entries, got {len(self.christoffel)}")
        for entry in self.christoffel:
            if entry.dimension != n:
                raise ValueError(
                    f"Christoffel entry has polynomial dimension {entry.dimension}, expected {n}"
                )

    def gamma(self, l: int, i: int, j: int) -> Polynomial:
        """Christoffel symbol with upper index l and lower indices (i, j), 1-based."""
        n = self.dimension
        return self.christoffel[((l - 1) * n + (i - 1)) * n + (j - 1)]

    @property
    def is_flat_zero(self) -> bool:
        return all(g.is_zero for g in self.christoffel)


def connection_from_entries(n: int, entries: dict[tuple[int, int, int], Polynomial]) -> Connection:
    """Build a connection from a sparse {(l, i, j): polynomial} map; rest zero."""
    zero_poly = Polynomial.zero(n)
    flat = [zero_poly] * n**3
    for (l, i, j), poly in entries.items():
        if not all(1 <= v <= n for v in (l, i, j)):
            raise ValueError(f"Christoffel index ({l},{i},{j}) out of range 1..{n}")
        flat[((l - 1) * n + (i - 1)) * n + (j - 1)] = poly
    return Connection(n, tuple(flat))


def flat_connection(n: int) -> Connection:
    return connection_from_entries(n, {})


def reference_connection() -> Connection:
    """The bundled example connection on R^4 (three nonzero Christoffel entries).

    It is the default input of the verification suite; all independence
    claims checked there are established on this connection.  The same
    data ships as ``testdata/paper_connection.json``.
    """
    return connection_from_entries(
        4,
        {
            (1, 1, 2): parse("x3", 4),
            (3, 4, 3): parse("x1*x4", 4),
            (3, 3, 1): parse("x2*x4", 4),
        },
    )


# -- connection file format ----------------------------------------------------

def connection_from_json_obj(obj: dict) -> Connection:
    try:
        n = int(obj["dim"])
        raw = obj["christoffel"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed connection document: {exc}") from exc
    if n < 2:
        raise ValueError(f"dimension out of supported range (n >= 2), got {n}")
    entries: dict[tuple[int, int, int], Polynomial] = {}
    for item in raw:
        try:
            upper = int(item["upper"])
            lower = tuple(int(v) for v in item["lower"])
            text = item["poly"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed Christoffel entry {item!r}: {exc}") from exc
        if len(lower) != 2:
            raise ValueError(f"lower index list must have 2 entries, got {list(lower)}")
        key = (upper, lower[0], lower[1])
        if not all(1 <= v <= n for v in key):
            raise ValueError(f"Christoffel index {key} out of range 1..{n}")
        if key in entries:
            raise ValueError(
                f"duplicate Christoffel entry: upper={upper}, lower={list(lower)}"
            )
        try:
            entries[key] = parse(text, n)
        except ParseError as exc:
            raise ValueError(
                f"invalid polynomial for upper={upper}, lower={list(lower)}: {exc}"
            ) from exc
    return connection_from_entries(n, entries)


def connection_to_json_obj(conn: Connection) -> dict:
    n = conn.dimension
    items = []
    for l, i, j in itertools.product(range(1, n + 1), repeat=3):
        poly = conn.gamma(l, i, j)
        if not poly.is_zero:
            items.append({"upper": l, "lower": [i, j], "poly": to_string(poly)})
    items.sort(key=lambda e: (e["upper"], e["lower"]))
    return {"dim": n, "christoffel": items}


def load_connection(path: str) -> Connection:
    with open(path, "r", encoding="utf-8") as handle:
        return connection_from_json_obj(json.load(handle))


def _gamma_tables(conn: Connection):
    """Sparse views of the Christoffel symbols, keyed by direction.

    out_table[i][l] lists (m, Gamma^l_{im}) over nonzero entries: the terms
    feeding a contravariant slot.  in_table[i][a] lists (m, Gamma^m_{ia}):
    the terms feeding a covariant slot.
    """
    n = conn.dimension
    out_table: list[list[list[tuple[int, Polynomial]]]] = [
        [[] for _ in range(n + 1)] for _ in range(n + 1)
    ]
    in_table: list[list[list[tuple[int, Polynomial]]]] = [
        [[] for _ in range(n + 1)] for _ in range(n + 1)
    ]
    for l, i, j in itertools.product(range(1, n + 1), repeat=3):
        poly = conn.gamma(l, i, j)
        if not poly.is_zero:
            out_table[i][l].append((j, poly))
            in_table[i][j].append((l, poly))
    return out_table, in_table


# -- form wrappers ---------------------------------------------------------------

def _form_pairs(degree: int) -> tuple[tuple[int, int], ...]:
    # adjacent transpositions generate the full symmetric group
    return tuple((s, s + 1) for s in range(1, degree))


@dataclass(frozen=True)
class VectorValuedForm:
    """Degree-k form valued in tangent vectors: a (k,1) field, alternating."""

    degree: int
    tensor: TensorField

    def __post_init__(self) -> None:
        expected = TensorShape(self.degree, 1, self.tensor.shape.n)
        if self.tensor.shape != expected:
            raise ValueError(
                f"vector-valued {self.degree}-form needs shape {expected}, got {self.tensor.shape}"
            )
        pairs = _form_pairs(self.degree)
        for s1, s2 in pairs:
            if not is_antisymmetric(self.tensor, s1, s2):
                raise ValueError(f"form slots ({s1},{s2}) are not antisymmetric")
        object.__setattr__(
            self, "tensor", TensorField(self.tensor.shape, self.tensor.components, pairs)
        )

    @property
    def n(self) -> int:
        return self.tensor.shape.n


@dataclass(frozen=True)
class EndValuedForm:
    """Degree-k form valued in endomorphisms: a (k+1,1) field.

    Covariant slots are (form_1..form_k, endo-input); the contravariant slot
    is the endomorphism output.  Only the k form slots alternate; the input
    slot is deliberately not alternated with them.
    """

    degree: int
    tensor: TensorField

    def __post_init__(self) -> None:
        expected = TensorShape(self.degree + 1, 1, self.tensor.shape.n)
        if self.tensor.shape != expected:
            raise ValueError(
                f"endomorphism-valued {self.degree}-form needs shape {expected}, "
                f"got {self.tensor.shape}"
            )
        pairs = _form_pairs(self.degree)
        for s1, s2 in pairs:
            if not is_antisymmetric(self.tensor, s1, s2):
                raise ValueError(f"form slots ({s1},{s2}) are not antisymmetric")
        object.__setattr__(
            self, "tensor", TensorField(self.tensor.shape, self.tensor.components, pairs)
        )

    @property
    def n(self) -> int:
        return self.tensor.shape.n


# -- first-order invariants ------------------------------------------------------

def torsion(conn: Connection) -> VectorValuedForm:
    """Tor^l_{ij} = Gamma^l_{ij} - Gamma^l_{ji}, a vector-valued 2-form."""
    n = conn.dimension
    comps = []
    for i, j, l in itertools.product(range(1, n + 1), repeat=3):
        comps.append(conn.gamma(l, i, j) - conn.gamma(l, j, i))
    return VectorValuedForm(2, TensorField(TensorShape(2, 1, n), tuple(comps)))


def curvature(conn: Connection) -> EndValuedForm:
    """Curvature as an endomorphism-valued 2-form; see the module docstring."""
    n = conn.dimension
    comps = []
    for i, j, k, l in itertools.product(range(1, n + 1), repeat=4):
        acc = conn.gamma(l, j, k).partial_derivative(i) - conn.gamma(l, i, k).partial_derivative(j)
        for m in range(1, n + 1):
            g_jk = conn.gamma(m, j, k)
            if not g_jk.is_zero:
                g_im = conn.gamma(l, i, m)
                if not g_im.is_zero:
                    acc = acc + g_jk * g_im
            g_ik = conn.gamma(m, i, k)
            if not g_ik.is_zero:
                g_jm = conn.gamma(l, j, m)
                if not g_jm.is_zero:
                    acc = acc - g_ik * g_jm
        comps.append(acc)
    return EndValuedForm(2, TensorField(TensorShape(3, 1, n), tuple(comps)))


def covariant_derivative(conn: Connection, field: TensorField) -> TensorField:
    """Covariant derivative of a (p,q) field; direction appended as last slot.

    One -Gamma term per covariant slot, one +Gamma term per contravariant
    slot, e.g. (DTor)^l_{ijk} = Tor^l_{ij,k} - Gamma^m_{ki} Tor^l_{mj}
    - Gamma^m_{kj} Tor^l_{im} + Gamma^l_{km} Tor^m_{ij}.
    """
    if field.shape.n != conn.dimension:
        raise ValueError(
            f"dimension mismatch: field n={field.shape.n}, connection n={conn.dimension}"
        )
    n, p, q = field.shape.n, field.shape.p, field.shape.q
    out_table, in_table = _gamma_tables(conn)
    out_shape = TensorShape(p + 1, q, n)
    comps: list[Polynomial] = []
    for idx in itertools.product(range(1, n + 1), repeat=p + 1 + q):
        cov, k, contra = idx[:p], idx[p], idx[p + 1 :]
        base = tuple(v - 1 for v in cov + contra)
        acc = field.components[_flat(n, base)].partial_derivative(k)
        for s in range(p):
            for m, g in in_table[k][cov[s]]:
                src = base[:s] + (m - 1,) + base[s + 1 :]
                comp = field.components[_flat(n, src)]
                if not comp.is_zero:
                    acc = acc - g * comp
        for t in range(q):
            for m, g in out_table[k][contra[t]]:
                src = base[: p + t] + (m - 1,) + base[p + t + 1 :]
                comp = field.components[_flat(n, src)]
                if not comp.is_zero:
                    acc = acc + g * comp
        comps.append(acc)
    return TensorField(out_shape, tuple(comps))


# -- exterior covariant differentials ---------------------------------------------

def ext_cov_deriv_vector(conn: Connection, alpha: VectorValuedForm) -> VectorValuedForm:
    """Exterior covariant differential of a vector-valued k-form (degree k+1).

    (d alpha)^l_{i0..ik} = sum_r (-1)^r [ d_{i_r} alpha^l_{..omit r..}
                                          + Gamma^l_{i_r m} alpha^m_{..omit r..} ].
    """
    if alpha.n != conn.dimension:
        raise ValueError("dimension mismatch between form and connection")
    n, k = conn.dimension, alpha.degree
    out_table, _ = _gamma_tables(conn)
    src = alpha.tensor.components
    comps: list[Polynomial] = []
    for idx in itertools.product(range(1, n + 1), repeat=k + 2):
        directions, l = idx[: k + 1], idx[k + 1]
        acc = Polynomial.zero(n)
        sign = 1
        for r in range(k + 1):
            rest = directions[:r] + directions[r + 1 :]
            base = tuple(v - 1 for v in rest)
            term = src[_flat(n, base + (l - 1,))].partial_derivative(directions[r])
            for m, g in out_table[directions[r]][l]:
                comp = src[_flat(n, base + (m - 1,))]
                if not comp.is_zero:
                    term = term + g * comp
            acc = acc + term if sign > 0 else acc - term
            sign = -sign
        comps.append(acc)
    return VectorValuedForm(k + 1, TensorField(TensorShape(k + 1, 1, n), tuple(comps)))


def ext_cov_deriv_endo(conn: Connection, beta: EndValuedForm) -> EndValuedForm:
    """Exterior covariant differential of an endomorphism-valued k-form.

    Like the vector-valued case, with +Gamma on the output slot and -Gamma
    on the endomorphism input slot.
    """
    if beta.n != conn.dimension:
        raise ValueError("dimension mismatch between form and connection")
    n, k = conn.dimension, beta.degree
    out_table, in_table = _gamma_tables(conn)
    src = beta.tensor.components
    comps: list[Polynomial] = []
    for idx in itertools.product(range(1, n + 1), repeat=k + 3):
        directions, a, l = idx[: k + 1], idx[k + 1], idx[k + 2]
        acc = Polynomial.zero(n)
        sign = 1
        for r in range(k + 1):
            rest = directions[:r] + directions[r + 1 :]
            base = tuple(v - 1 for v in rest)
            term = src[_flat(n, base + (a - 1, l - 1))].partial_derivative(directions[r])
            for m, g in out_table[directions[r]][l]:
                comp = src[_flat(n, base + (a - 1, m - 1))]
                if not comp.is_zero:
                    term = term + g * comp
            for m, g in in_table[directions[r]][a]:
                comp = src[_flat(n, base + (m - 1, l - 1))]
                if not comp.is_zero:
                    term = term - g * comp
            acc = acc + term if sign > 0 else acc - term
            sign = -sign
        comps.append(acc)
    return EndValuedForm(k + 1, TensorField(TensorShape(k + 2, 1, n), tuple(comps)))


# -- wedge/tensor constructions with the identity ---------------------------------

def wedge_endo_identity(beta: EndValuedForm) -> VectorValuedForm:
    """Plug the identity into a degree-2 endomorphism-valued form:
    (beta ^ I)^l_{ijk} = beta^l_{ij,k} + beta^l_{jk,i} + beta^l_{ki,j}."""
    if beta.degree != 2:
        raise ValueError(f"wedge with identity implemented for degree 2, got {beta.degree}")
    n = beta.n
    t = beta.tensor
    comps = []
    for i, j, k, l in itertools.product(range(1, n + 1), repeat=4):
        comps.append(t.get((i, j, k), (l,)) + t.get((j, k, i), (l,)) + t.get((k, i, j), (l,)))
    return VectorValuedForm(3, TensorField(TensorShape(3, 1, n), tuple(comps)))


def wedge_oneform_identity(theta: TensorField) -> VectorValuedForm:
    """(theta ^ I)^l_{ij} = theta_i delta^l_j - theta_j delta^l_i."""
    if theta.shape.p != 1 or theta.shape.q != 0:
        raise ValueError(f"expected a 1-form, got shape {theta.shape}")
    n = theta.shape.n
    zero_poly = Polynomial.zero(n)
    comps = []
    for i, j, l in itertools.product(range(1, n + 1), repeat=3):
        acc = zero_poly
        if j == l:
            acc = acc + theta.get((i,), ())
        if i == l:
            acc = acc - theta.get((j,), ())
        comps.append(acc)
    return VectorValuedForm(2, TensorField(TensorShape(2, 1, n), tuple(comps)))


def tensor_identity(omega: TensorField) -> EndValuedForm:
    """Scalar 2-form times the identity endomorphism: components w_ij delta^l_a."""
    if omega.shape.p != 2 or omega.shape.q != 0:
        raise ValueError(f"expected a 2-form, got shape {omega.shape}")
    if not is_antisymmetric(omega, 1, 2):
        raise ValueError("2-form must be antisymmetric")
    n = omega.shape.n
    zero_poly = Polynomial.zero(n)
    comps = []
    for i, j, a, l in itertools.product(range(1, n + 1), repeat=4):
        comps.append(omega.get((i, j), ()) if a == l else zero_poly)
    return EndValuedForm(2, TensorField(TensorShape(3, 1, n), tuple(comps)))


def exterior_derivative(theta: TensorField) -> TensorField:
    """d of a 1-form: (d theta)_{ij} = d_i theta_j - d_j theta_i."""
    if theta.shape.p != 1 or theta.shape.q != 0:
        raise ValueError(f"expected a 1-form, got shape {theta.shape}")
    n = theta.shape.n
    comps = []
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        comps.append(
            theta.get((j,), ()).partial_derivative(i)
            - theta.get((i,), ()).partial_derivative(j)
        )
    return TensorField(TensorShape(2, 0, n), tuple(comps), ((1, 2),))


def identity_oneform(n: int) -> VectorValuedForm:
    """The identity as a vector-valued 1-form; its differential is the torsion."""
    return VectorValuedForm(1, delta(n))


# -- normal tensors ----------------------------------------------------------------

def normal0(conn: Connection) -> TensorField:
    """Half the torsion, as a (2,1) field antisymmetric in its covariant pair."""
    half = torsion(conn).tensor.scale(Fraction(1, 2))
    return TensorField(half.shape, half.components, ((1, 2),))


def normal1(conn: Connection) -> TensorField:
    """First-order normal tensor, expressed through curvature and torsion:

    N^l_{ijk} = -1/6 ( -3 R^l_{kij} + R^l_{jki} - R^l_{ijk}
                       - 2 (DTor)^l_{ijk} - 2 (DTor)^l_{kji}
                       + Tor^m_{kj} Tor^l_{mi} + 1/2 Tor^m_{ij} Tor^l_{km} ).

    Its full symmetrization over (i,j,k) vanishes; the verification suite
    checks that identity on randomized connections.
    """
    n = conn.dimension
    tor = torsion(conn).tensor
    r = curvature(conn).tensor
    dtor = covariant_derivative(conn, tor)
    minus_sixth = Fraction(-1, 6)
    half = Fraction(1, 2)
    comps = []
    for i, j, k, l in itertools.product(range(1, n + 1), repeat=4):
        acc = r.get((k, i, j), (l,)).scale(-3)
        acc = acc + r.get((j, k, i), (l,)) - r.get((i, j, k), (l,))
        acc = acc - dtor.get((i, j, k), (l,)).scale(2) - dtor.get((k, j, i), (l,)).scale(2)
        for m in range(1, n + 1):
            t_kj = tor.get((k, j), (m,))
            if not t_kj.is_zero:
                acc = acc + t_kj * tor.get((m, i), (l,))
            t_ij = tor.get((i, j), (m,))
            if not t_ij.is_zero:
                acc = acc + (t_ij * tor.get((k, m), (l,))).scale(half)
        comps.append(acc.scale(minus_sixth))
    return TensorField(TensorShape(3, 1, n), tuple(comps))
