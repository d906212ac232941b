from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..errors import DomainError

log = logging.getLogger("polarkit.kernel")


@dataclass(frozen=True, eq=False)
class Permutation:
    q: int
    image: tuple

    def __post_init__(self) -> None:
        image = tuple(int(v) for v in self.image)
        if len(image) != self.q or sorted(image) != list(range(self.q)):
            raise DomainError(f"{list(image)} is not a bijection on 0..{self.q - 1}")
        object.__setattr__(self, "image", image)

    def __call__(self, value: int) -> int:
        return self.image[value]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Permutation({','.join(map(str, self.image))})"


def identity_permutation(q: int) -> Permutation:
    return Permutation(q, tuple(range(q)))


def cyclic_shift(pi: Permutation, c: int) -> Permutation:
    """pi'(u) = pi(u) + c mod q; yields the same kernel rows in another order."""
    return Permutation(pi.q, tuple((v + c) % pi.q for v in pi.image))


@dataclass(frozen=True, eq=False)
class Kernel:
    """Polarizing kernel f(u1, u2) = table[u1][u2]; the pair maps to (f(u1, u2), u2)."""

    q: int
    table: np.ndarray
    name: str = "custom"

    def __post_init__(self) -> None:
        table = np.array(self.table, dtype=np.int64)
        if self.q < 2:
            raise DomainError(f"kernel needs q >= 2, got {self.q}")
        if table.shape != (self.q, self.q):
            raise DomainError(f"kernel table must be {self.q}x{self.q}, got {table.shape}")
        if table.min() < 0 or table.max() >= self.q:
            raise DomainError(f"kernel entries must lie in 0..{self.q - 1}")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        # inverse of row u1: x1 -> u2
        inverse = np.full((self.q, self.q), -1, dtype=np.int64)
        if _rows_are_permutations(table):
            rows = np.arange(self.q)[:, None]
            inverse[rows, table] = np.arange(self.q)[None, :]
        inverse.setflags(write=False)
        object.__setattr__(self, "_row_inverse", inverse)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Kernel) and self.q == other.q and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.q, self.table.tobytes()))


def _rows_are_permutations(table: np.ndarray) -> bool:
    q = table.shape[0]
    expected = np.arange(q)
    return bool(np.all(np.sort(table, axis=1) == expected[None, :]))


def _columns_are_permutations(table: np.ndarray) -> bool:
    return _rows_are_permutations(table.T)


def validate(kernel: Kernel) -> bool:
    """True iff f is invertible in u2 for every u1 and in u1 for every u2."""
    table = np.asarray(kernel.table)
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        return False
    return _rows_are_permutations(table) and _columns_are_permutations(table)


def kernel_from_table(table: Sequence[Sequence[int]], name: str = "custom") -> Kernel:
    arr = np.array(table, dtype=np.int64)
    if arr.ndim != 2:
        raise DomainError("kernel table must be two-dimensional")
    kernel = Kernel(q=arr.shape[0], table=arr, name=name)
    if not validate(kernel):
        raise DomainError("kernel table is not invertible in each argument")
    return kernel


def standard_kernel(q: int) -> Kernel:
    if q < 2:
        raise DomainError(f"kernel needs q >= 2, got {q}")
    u = np.arange(q)
    return Kernel(q=q, table=(u[:, None] + u[None, :]) % q, name="standard")


def permutation_kernel(q: int, pi: Permutation | Sequence[int]) -> Kernel:
    if not isinstance(pi, Permutation):
        pi = Permutation(q, tuple(pi))
    if pi.q != q:
        raise DomainError(f"permutation has size {pi.q}, kernel needs {q}")
    u = np.arange(q)
    image = np.array(pi.image)
    name = "standard" if pi == identity_permutation(q) else "pi:" + ",".join(map(str, pi.image))
    return Kernel(q=q, table=(u[:, None] + image[None, :]) % q, name=name)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def gamma_notes(gamma: int) -> List[str]:
    """Remarks about a Reed-Solomon coefficient that is valid but unusual."""
    if is_prime(gamma):
        return []
    return [f"gamma={gamma} is not prime; accepted because only invertibility mod q is needed"]


def reed_solomon_kernel(q: int, gamma: int) -> Kernel:
    """f(u1, u2) = u1 + gamma*u2 mod q over the prime field."""
    if not is_prime(q):
        raise DomainError(f"Reed-Solomon kernel needs a prime q, got {q}")
    if gamma % q == 0:
        raise DomainError(f"gamma must be a nonzero residue mod {q}, got {gamma}")
    for note in gamma_notes(gamma):
        log.warning(note)
    pi = Permutation(q, tuple((gamma * u) % q for u in range(q)))
    kernel = permutation_kernel(q, pi)
    return Kernel(q=q, table=kernel.table, name=f"rs:{gamma}")


def _check(kernel: Kernel, *values: int) -> None:
    for value in values:
        if not isinstance(value, (int, np.integer)) or not 0 <= value < kernel.q:
            raise DomainError(f"symbol {value!r} out of range 0..{kernel.q - 1}")


def apply(kernel: Kernel, u1: int, u2: int) -> int:
    _check(kernel, u1, u2)
    return int(kernel.table[u1, u2])


def invert_u2(kernel: Kernel, u1: int, x1: int) -> int:
    """Recover u2 from (u1, f(u1, u2))."""
    _check(kernel, u1, x1)
    if not validate(kernel):
        raise DomainError("kernel is not invertible")
    return int(kernel._row_inverse[u1, x1])


def invert_u1(kernel: Kernel, u2: int, x1: int) -> int:
    """Recover u1 from (u2, f(u1, u2))."""
    _check(kernel, u2, x1)
    if not validate(kernel):
        raise DomainError("kernel is not invertible")
    return int(np.flatnonzero(kernel.table[:, u2] == x1)[0])


def is_permutation_kernel(kernel: Kernel) -> Optional[Permutation]:
    """Return pi when the table has the form u1 + pi(u2) mod q, otherwise None."""
    q = kernel.q
    row0 = kernel.table[0]
    shifted = (np.arange(q)[:, None] + row0[None, :]) % q
    if not np.array_equal(shifted, kernel.table):
        return None
    try:
        return Permutation(q, tuple(row0))
    except DomainError:
        return None
