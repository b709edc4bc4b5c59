"""Dense tensor fields with polynomial components.

A (p,q)-tensor field over R^n is stored as a flat tuple of n^(p+q)
polynomials in row-major order, covariant indices first, each index
running over 1..n.  This fixed layout is the contract for the
coefficient-flattening in :mod:`natforms.exactla`.

Slot arguments in the public API are 1-based throughout, matching the
index conventions of the formulas this library implements.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from .poly import Polynomial, parse, to_string


@dataclass(frozen=True)
class TensorShape:
    """Type (p,q) in ambient dimension n: p covariant slots, q contravariant."""

    p: int
    q: int
    n: int

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0:
            raise ValueError(f"slot counts must be non-negative, got ({self.p},{self.q})")
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")

    @property
    def size(self) -> int:
        return self.n ** (self.p + self.q)


def _flat(n: int, idx: Sequence[int]) -> int:
    f = 0
    for v in idx:
        f = f * n + v
    return f


@dataclass(frozen=True)
class TensorField:
    """Immutable dense tensor field; components indexed covariant-first.

    ``antisym_pairs`` declares covariant slot pairs in which the field is
    antisymmetric.  It is validation metadata, not a storage optimization:
    components are always stored densely, and :meth:`validate` checks each
    declared pair exactly.
    """

    shape: TensorShape
    components: tuple[Polynomial, ...]
    antisym_pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if len(self.components) != self.shape.size:
            raise ValueError(
                f"expected {self.shape.size} components, got {len(self.components)}"
            )
        for s1, s2 in self.antisym_pairs:
            if not (1 <= s1 <= self.shape.p and 1 <= s2 <= self.shape.p and s1 != s2):
                raise ValueError(f"invalid antisymmetry pair ({s1},{s2})")

    @property
    def n(self) -> int:
        return self.shape.n

    def get(self, cov: Sequence[int] = (), contra: Sequence[int] = ()) -> Polynomial:
        """Component at the given 1-based covariant/contravariant indices."""
        if len(cov) != self.shape.p or len(contra) != self.shape.q:
            raise ValueError(
                f"index arity mismatch for shape ({self.shape.p},{self.shape.q})"
            )
        idx = tuple(v - 1 for v in cov) + tuple(v - 1 for v in contra)
        if any(not 0 <= v < self.n for v in idx):
            raise ValueError(f"index out of range 1..{self.n}: cov={cov} contra={contra}")
        return self.components[_flat(self.n, idx)]

    def indices(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        """All (cov, contra) index tuples, 1-based, in storage order."""
        n, p, q = self.n, self.shape.p, self.shape.q
        for idx in itertools.product(range(1, n + 1), repeat=p + q):
            yield idx[:p], idx[p:]

    # -- pointwise linear structure ---------------------------------------

    def _check_shape(self, other: TensorField) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: TensorField) -> TensorField:
        if not isinstance(other, TensorField):
            return NotImplemented
        self._check_shape(other)
        shared = tuple(p for p in self.antisym_pairs if p in other.antisym_pairs)
        return TensorField(
            self.shape,
            tuple(a + b for a, b in zip(self.components, other.components)),
            shared,
        )

    def __sub__(self, other: TensorField) -> TensorField:
        if not isinstance(other, TensorField):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> TensorField:
        return TensorField(self.shape, tuple(-c for c in self.components), self.antisym_pairs)

    def scale(self, factor) -> TensorField:
        return TensorField(
            self.shape, tuple(c.scale(factor) for c in self.components), self.antisym_pairs
        )

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def validate(self) -> None:
        """Check every declared antisymmetry pair componentwise, exactly."""
        for s1, s2 in self.antisym_pairs:
            if not is_antisymmetric(self, s1, s2):
                raise ValueError(f"declared antisymmetry in slots ({s1},{s2}) does not hold")


def zero(shape: TensorShape) -> TensorField:
    z = Polynomial.zero(shape.n)
    return TensorField(shape, (z,) * shape.size)


def scalar(n: int, value) -> TensorField:
    """The (0,0) tensor holding a constant polynomial."""
    return TensorField(TensorShape(0, 0, n), (Polynomial.constant(n, value),))


def delta(n: int) -> TensorField:
    """Kronecker delta as a (1,1) tensor field."""
    one = Polynomial.constant(n, 1)
    z = Polynomial.zero(n)
    comps = tuple(one if i == l else z for i in range(n) for l in range(n))
    return TensorField(TensorShape(1, 1, n), comps)


def equal(a: TensorField, b: TensorField) -> bool:
    """Exact componentwise equality; raises on shape mismatch."""
    a._check_shape(b)
    return a.components == b.components


def tensor_product(a: TensorField, b: TensorField) -> TensorField:
    """Product with a's slots preceding b's in each variance class."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    n = a.n
    pa, qa, pb, qb = a.shape.p, a.shape.q, b.shape.p, b.shape.q
    out_shape = TensorShape(pa + pb, qa + qb, n)
    comps: list[Polynomial] = [None] * out_shape.size  # type: ignore[list-item]
    for ia, full_a in enumerate(itertools.product(range(n), repeat=pa + qa)):
        ca, ka = full_a[:pa], full_a[pa:]
        poly_a = a.components[ia]
        for ib, full_b in enumerate(itertools.product(range(n), repeat=pb + qb)):
            cb, kb = full_b[:pb], full_b[pb:]
            comps[_flat(n, ca + cb + ka + kb)] = poly_a * b.components[ib]
    return TensorField(out_shape, tuple(comps))


def contract(a: TensorField, cov_slot: int, contra_slot: int) -> TensorField:
    """Sum the paired covariant/contravariant index (Einstein convention)."""
    p, q, n = a.shape.p, a.shape.q, a.shape.n
    if not 1 <= cov_slot <= p:
        raise ValueError(f"covariant slot {cov_slot} out of range 1..{p}")
    if not 1 <= contra_slot <= q:
        raise ValueError(f"contravariant slot {contra_slot} out of range 1..{q}")
    out_shape = TensorShape(p - 1, q - 1, n)
    ci, ki = cov_slot - 1, contra_slot - 1
    comps: list[Polynomial] = []
    for idx in itertools.product(range(n), repeat=out_shape.p + out_shape.q):
        cov, contra = idx[: p - 1], idx[p - 1 :]
        acc = Polynomial.zero(n)
        for m in range(n):
            src = cov[:ci] + (m,) + cov[ci:] + contra[:ki] + (m,) + contra[ki:]
            acc = acc + a.components[_flat(n, src)]
        comps.append(acc)
    return TensorField(out_shape, tuple(comps))


def _check_permutation(perm: Sequence[int], count: int) -> None:
    if sorted(perm) != list(range(1, count + 1)):
        raise ValueError(f"{tuple(perm)} is not a permutation of 1..{count}")


def permute_covariant(a: TensorField, perm: Sequence[int]) -> TensorField:
    """Reindex covariant slots: result slot s reads input index v[perm[s]].

    With perm=(2,3,1) the result X satisfies X_{ijk} = A_{jki}.
    """
    p, q, n = a.shape.p, a.shape.q, a.shape.n
    _check_permutation(perm, p)
    comps: list[Polynomial] = []
    for idx in itertools.product(range(n), repeat=p + q):
        cov, contra = idx[:p], idx[p:]
        src_cov = tuple(cov[s - 1] for s in perm)
        comps.append(a.components[_flat(n, src_cov + contra)])
    return TensorField(a.shape, tuple(comps))


def permute_contravariant(a: TensorField, perm: Sequence[int]) -> TensorField:
    p, q, n = a.shape.p, a.shape.q, a.shape.n
    _check_permutation(perm, q)
    comps: list[Polynomial] = []
    for idx in itertools.product(range(n), repeat=p + q):
        cov, contra = idx[:p], idx[p:]
        src_contra = tuple(contra[s - 1] for s in perm)
        comps.append(a.components[_flat(n, cov + src_contra)])
    return TensorField(a.shape, tuple(comps))


def insert_delta(a: TensorField, r: int) -> TensorField:
    """Append r Kronecker-delta factors: a ⊗ δ ⊗ ... ⊗ δ."""
    if r < 0:
        raise ValueError(f"delta count must be >= 0, got {r}")
    out = a
    d = delta(a.n)
    for _ in range(r):
        out = tensor_product(out, d)
    return out


def _swap_perm(p: int, s1: int, s2: int) -> tuple[int, ...]:
    perm = list(range(1, p + 1))
    perm[s1 - 1], perm[s2 - 1] = perm[s2 - 1], perm[s1 - 1]
    return tuple(perm)


def antisymmetrize_pair(a: TensorField, s1: int, s2: int) -> TensorField:
    """a minus a with covariant slots s1,s2 swapped; no 1/2 factor.

    Applied to an already antisymmetric field this doubles it.
    """
    p = a.shape.p
    if not (1 <= s1 <= p and 1 <= s2 <= p) or s1 == s2:
        raise ValueError(f"invalid covariant slot pair ({s1},{s2}) for p={p}")
    swapped = permute_covariant(a, _swap_perm(p, s1, s2))
    result = a - swapped
    pair = (min(s1, s2), max(s1, s2))
    return TensorField(result.shape, result.components, (pair,))


def is_antisymmetric(a: TensorField, s1: int, s2: int) -> bool:
    swapped = permute_covariant(a, _swap_perm(a.shape.p, s1, s2))
    return a.components == tuple(-c for c in swapped.components)


# -- interchange format -------------------------------------------------------

def to_json_obj(a: TensorField) -> dict:
    """Interchange document: shape plus the nonzero components, sorted."""
    entries = []
    for cov, contra in a.indices():
        poly = a.get(cov, contra)
        if not poly.is_zero:
            entries.append({"cov": list(cov), "contra": list(contra), "poly": to_string(poly)})
    entries.sort(key=lambda e: (e["cov"], e["contra"]))
    return {
        "shape": {"p": a.shape.p, "q": a.shape.q, "n": a.shape.n},
        "components": entries,
    }


def from_json_obj(obj: dict) -> TensorField:
    try:
        sh = obj["shape"]
        shape = TensorShape(int(sh["p"]), int(sh["q"]), int(sh["n"]))
        raw = obj["components"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed tensor document: {exc}") from exc
    comps = [Polynomial.zero(shape.n)] * shape.size
    seen: set[tuple[int, ...]] = set()
    for entry in raw:
        cov = tuple(int(v) for v in entry["cov"])
        contra = tuple(int(v) for v in entry["contra"])
        if len(cov) != shape.p or len(contra) != shape.q:
            raise ValueError(f"component index arity mismatch: cov={cov} contra={contra}")
        idx = tuple(v - 1 for v in cov + contra)
        if any(not 0 <= v < shape.n for v in idx):
            raise ValueError(f"component index out of range: cov={cov} contra={contra}")
        if idx in seen:
            raise ValueError(f"duplicate component entry: cov={cov} contra={contra}")
        seen.add(idx)
        comps[_flat(shape.n, idx)] = parse(entry["poly"], shape.n)
    return TensorField(shape, tuple(comps))


def dumps(a: TensorField) -> str:
    return json.dumps(to_json_obj(a), indent=2)


def loads(text: str) -> TensorField:
    return from_json_obj(json.loads(text))
