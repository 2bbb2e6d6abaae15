"""GF(2) linear algebra, the Hadamard code and exact distance helpers.

Vectors are :class:`BitString` values; arithmetic runs on their packed integers
so XOR and popcount scans stay word-parallel.
"""

import logging
from collections.abc import Collection, Iterable, Iterator, Sequence
from typing import Any

import numpy as np
import numpy.typing as npt

from models.bits import Basis, BitString

logger = logging.getLogger(__name__)


def inner_product(a: BitString, b: BitString) -> int:
    """Return ``sum_j a[j] b[j] mod 2``.

    Raises:
        ValueError: If the lengths differ.

    Examples:
        >>> inner_product(BitString.from_label("01"), BitString.from_label("01"))
        1
    """
    if a.length != b.length:
        raise ValueError(f"Inner product needs equal lengths, got {a.length} and {b.length}")
    return (a.value & b.value).bit_count() & 1


def hamming(a: BitString, b: BitString) -> int:
    """Number of coordinates where ``a`` and ``b`` differ."""
    if a.length != b.length:
        raise ValueError(f"Hamming distance needs equal lengths, got {a.length} and {b.length}")
    return (a.value ^ b.value).bit_count()


def parity_array(values: npt.NDArray[np.integer]) -> npt.NDArray[np.uint8]:
    """Element-wise popcount parity of non-negative integers."""
    return (np.bitwise_count(values.astype(np.uint64)) & 1).astype(np.uint8)


def log2_exact(n: int) -> int:
    """Return ``log2(n)`` for a power of two ``n >= 1``.

    Raises:
        ValueError: If ``n`` is not a power of two.
    """
    if n < 1 or n & (n - 1):
        raise ValueError(f"Length must be a power of two, got {n}")
    return n.bit_length() - 1


def hadamard_encode(y: BitString) -> BitString:
    """Hadamard codeword h(y) of length 2^|y| with position i holding ``y . i``.

    Examples:
        >>> hadamard_encode(BitString.from_label("01")).to_table()
        '0101'
    """
    positions = np.arange(1 << y.length, dtype=np.uint64)
    return BitString.from_bits(parity_array(positions & np.uint64(y.value)))


def hadamard_decode_candidate(x: BitString) -> BitString:
    """Read ``y_i = x[2^i]``; exact on codewords."""
    m = log2_exact(x.length)
    return BitString(sum(x[1 << i] << i for i in range(m)), m)


def distance_to_PA(x: BitString, A: Collection[BitString]) -> int:  # noqa: N802
    """Exact distance from ``x`` to ``P_A = {h(y) : y in A}`` by enumerating A.

    Raises:
        ValueError: If A is empty or a member has the wrong length.
    """
    if not A:
        raise ValueError("A must be nonempty")
    m = log2_exact(x.length)
    best = x.length
    for y in A:
        if y.length != m:
            raise ValueError(f"Members of A must have length {m}, got {y.length}")
        best = min(best, hamming(x, hadamard_encode(y)))
        if best == 0:
            break
    return best


def rank_extend(basis: Basis, z: BitString) -> Basis | None:
    """Extend a reduced basis by ``z`` or report dependence with ``None``.

    ``z`` is reduced against the existing pivots; if anything survives, its
    lowest set coordinate becomes a fresh pivot and is cleared from the
    earlier vectors, so leading indices stay distinct and reduced.

    Raises:
        ValueError: If ``z`` has the wrong length.
    """
    if z.length != basis.n:
        raise ValueError(f"Vector length {z.length} != basis dimension {basis.n}")
    residue = z.value
    for v in basis.vectors:
        if (residue >> v.leading_index) & 1:
            residue ^= v.value
    if residue == 0:
        return None
    pivot = (residue & -residue).bit_length() - 1
    reduced = tuple(
        BitString(v.value ^ residue, basis.n) if (v.value >> pivot) & 1 else v
        for v in basis.vectors
    )
    return Basis(basis.n, (*reduced, BitString(residue, basis.n)))


def basis_of(vectors: Iterable[BitString], n: int) -> Basis:
    """Reduced basis of ``span(vectors)``; dependent vectors are skipped."""
    basis = Basis.empty(n)
    for v in vectors:
        extended = rank_extend(basis, v)
        if extended is not None:
            basis = extended
    return basis


def rank(vectors: Iterable[BitString], n: int) -> int:
    return basis_of(vectors, n).k


def in_span(basis: Basis, z: BitString) -> bool:
    return rank_extend(basis, z) is None


def span(basis: Basis) -> list[BitString]:
    """All ``2^k`` elements of the span, zero first."""
    elements = [0]
    for v in basis.vectors:
        elements += [e ^ v.value for e in elements]
    return [BitString(e, basis.n) for e in elements]


def orthogonal_space(vectors: Sequence[BitString], n: int) -> Basis:
    """Basis of ``S^perp = {z : z . s = 0 for all s in S}``.

    Each free (non-pivot) coordinate f contributes the vector with a 1 at f and
    ``r[f]`` at the pivot of every reduced row r.
    """
    rows = basis_of(vectors, n)
    pivots = set(rows.leading)
    complement: list[BitString] = []
    for free in range(n):
        if free in pivots:
            continue
        value = 1 << free
        for r in rows.vectors:
            if (r.value >> free) & 1:
                value |= 1 << r.leading_index
        complement.append(BitString(value, n))
    result = basis_of(complement, n)
    logger.debug(f"orthogonal_space: rank {rows.k} -> complement dimension {result.k}")
    return result


def enumerate_reduced_bases(n: int, max_k: int | None = None) -> Iterator[Basis]:
    """Yield one reduced basis per subspace of ``{0,1}^n`` (dimension <= max_k).

    Subspaces are generated breadth-first by extending with every vector and
    deduplicated by their element sets.
    """
    limit = n if max_k is None else max_k
    frontier = [Basis.empty(n)]
    seen: set[frozenset[int]] = {frozenset({0})}
    yield frontier[0]
    for _ in range(limit):
        next_frontier: list[Basis] = []
        for basis in frontier:
            for value in range(1, 1 << n):
                extended = rank_extend(basis, BitString(value, n))
                if extended is None:
                    continue
                key = frozenset(e.value for e in span(extended))
                if key in seen:
                    continue
                seen.add(key)
                next_frontier.append(extended)
                yield extended
        frontier = next_frontier


def walsh_spectrum(x: BitString) -> npt.NDArray[np.float64]:
    """Normalized Walsh spectrum ``F(y) = E_i[(-1)^(x_i + y . i)]``.

    Computed with the in-place butterfly of the fast Walsh-Hadamard transform;
    ``x`` must have power-of-two length.
    """
    log2_exact(x.length)
    signs = 1.0 - 2.0 * x.to_array().astype(np.float64)
    return fwht(signs) / x.length


def fwht(values: npt.NDArray[Any]) -> npt.NDArray[Any]:
    """Unnormalized fast Walsh-Hadamard transform along axis 0 (returns a copy)."""
    out = np.array(values, copy=True)
    size = out.shape[0]
    log2_exact(size)
    tail = out.shape[1:]
    h = 1
    while h < size:
        view = out.reshape(size // (2 * h), 2, h, *tail)
        a = view[:, 0].copy()
        b = view[:, 1].copy()
        view[:, 0] = a + b
        view[:, 1] = a - b
        h *= 2
    return out


def random_bitstring(length: int, rng: np.random.Generator) -> BitString:
    return BitString.from_bits(rng.integers(0, 2, size=length, dtype=np.uint8))
