"""PGL_2 over F_q[t]/(g) for squarefree g, as a product over its prime factors.

For g = w_1 ... w_s (distinct irreducibles) the ring is a product of fields
and PGL_2 of the ring is the product of the PGL_2(F_q[t]/(w_j)).  A batch of
matrices is an int array of shape (n, s, 4) holding residue codes of
(a, b, c, d) in each factor.  Each factor is scaled so that its first nonzero
entry in row-major order is 1; for irreducible g this is the usual canonical
form of a projective matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..ffcore import GF, Poly, PolyError, ResidueRing, crt, factor


class PGL2:
    def __init__(self, g: Poly):
        if g.deg < 1:
            raise PolyError("g must have positive degree")
        fac = factor(g)
        if any(e > 1 for _, e in fac):
            raise PolyError(f"g = {g} is not squarefree")
        self.g = g.monic()
        self.F: GF = g.F
        self.factors = [w for w, _ in fac]
        self.rings = [ResidueRing.get(w) for w in self.factors]
        self.sizes = [R.size for R in self.rings]
        base = 1
        self._base = []
        for N in self.sizes:
            self._base.append(base)
            base *= N**4
        if base >= 2**63:
            raise OverflowError("vertex keys would not fit in 64 bits")

    @property
    def order(self) -> int:
        """|PGL_2| of the ring."""
        out = 1
        for N in self.sizes:
            out *= N * (N * N - 1)
        return out

    # conversion ----------------------------------------------------------

    def from_polys(self, entries) -> np.ndarray:
        """One matrix (a, b, c, d) of Polys (or ints) as a (1, s, 4) batch."""
        F = self.F
        out = np.zeros((1, len(self.rings), 4), dtype=np.int64)
        for j, R in enumerate(self.rings):
            for k, x in enumerate(entries):
                x = Poly.const(F, F.from_int(x)) if isinstance(x, int) else x
                out[0, j, k] = R.elem(x)
        return out

    def to_polys(self, M: np.ndarray) -> tuple[Poly, Poly, Poly, Poly]:
        """Entries mod g of one canonical matrix (CRT over the factors)."""
        M = np.asarray(M).reshape(len(self.rings), 4)
        out = []
        for k in range(4):
            res = [R.poly(int(M[j, k])) for j, R in enumerate(self.rings)]
            out.append(crt(res, self.factors) if len(res) > 1 else res[0])
        return tuple(out)

    def identity(self) -> np.ndarray:
        return self.from_polys((1, 0, 0, 1))

    # arithmetic ----------------------------------------------------------

    def canon(self, M: np.ndarray) -> np.ndarray:
        out = np.empty_like(M)
        rows = np.arange(M.shape[0])
        for j, R in enumerate(self.rings):
            E = M[:, j, :]
            nz = E != 0
            if not nz.any(axis=1).all():
                raise ValueError("zero matrix has no projective class")
            lead = E[rows, nz.argmax(axis=1)]
            out[:, j, :] = R.mul(E, R.inv[lead][:, None])
        return out

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Entrywise-broadcast product A B (not canonicalized)."""
        out = np.empty(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
        for j, R in enumerate(self.rings):
            a, b = A[:, j, :], B[:, j, :]
            out[:, j, 0] = R.add(R.mul(a[:, 0], b[:, 0]), R.mul(a[:, 1], b[:, 2]))
            out[:, j, 1] = R.add(R.mul(a[:, 0], b[:, 1]), R.mul(a[:, 1], b[:, 3]))
            out[:, j, 2] = R.add(R.mul(a[:, 2], b[:, 0]), R.mul(a[:, 3], b[:, 2]))
            out[:, j, 3] = R.add(R.mul(a[:, 2], b[:, 1]), R.mul(a[:, 3], b[:, 3]))
        return out

    def det(self, M: np.ndarray) -> np.ndarray:
        out = np.empty(M.shape[:2], dtype=np.int64)
        for j, R in enumerate(self.rings):
            E = M[:, j, :]
            out[:, j] = R.sub(R.mul(E[:, 0], E[:, 3]), R.mul(E[:, 1], E[:, 2]))
        return out

    def adjugate(self, M: np.ndarray) -> np.ndarray:
        """[[d, -b], [-c, a]], the projective inverse."""
        out = np.empty_like(M)
        for j, R in enumerate(self.rings):
            E = M[:, j, :]
            out[:, j, 0] = E[:, 3]
            out[:, j, 1] = R.neg(E[:, 1])
            out[:, j, 2] = R.neg(E[:, 2])
            out[:, j, 3] = E[:, 0]
        return out

    def square_class(self, M: np.ndarray) -> np.ndarray:
        """+1 / -1 per factor: whether det is a square (well defined projectively)."""
        D = self.det(M)
        out = np.empty(D.shape, dtype=np.int64)
        for j, R in enumerate(self.rings):
            sq = self._square_mask(j)
            out[:, j] = np.where(sq[D[:, j]], 1, -1)
        return out

    def _square_mask(self, j: int) -> np.ndarray:
        R = self.rings[j]
        mask = np.zeros(R.size, dtype=bool)
        mask[R.squares_table()] = True
        return mask

    # keys ----------------------------------------------------------------

    def key(self, M: np.ndarray) -> np.ndarray:
        k = np.zeros(M.shape[0], dtype=np.int64)
        for j, N in enumerate(self.sizes):
            E = M[:, j, :]
            kj = ((E[:, 0] * N + E[:, 1]) * N + E[:, 2]) * N + E[:, 3]
            k += kj * self._base[j]
        return k

    def unkey(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        out = np.empty((keys.size, len(self.rings), 4), dtype=np.int64)
        for j, N in enumerate(self.sizes):
            kj = (keys // self._base[j]) % N**4
            for k in range(3, -1, -1):
                out[:, j, k] = kj % N
                kj //= N
        return out


@dataclass(frozen=True)
class ProjMat:
    """A projective 2x2 matrix over F_q[t]/(g), stored canonically."""

    group: PGL2
    data: tuple  # flattened (s, 4) codes

    @classmethod
    def make(cls, group: PGL2, entries) -> "ProjMat":
        M = group.from_polys(entries)
        if (group.det(M) == 0).any():
            raise ValueError("matrix is not invertible modulo g")
        return cls(group, tuple(int(x) for x in group.canon(M).reshape(-1)))

    @classmethod
    def from_array(cls, group: PGL2, M: np.ndarray) -> "ProjMat":
        return cls(group, tuple(int(x) for x in group.canon(M.reshape(1, -1, 4)).reshape(-1)))

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.data, dtype=np.int64).reshape(1, len(self.group.rings), 4)

    @property
    def key(self) -> int:
        return int(self.group.key(self.array)[0])

    @property
    def entries(self) -> tuple[Poly, Poly, Poly, Poly]:
        return self.group.to_polys(self.array)

    def __mul__(self, other: "ProjMat") -> "ProjMat":
        return ProjMat.from_array(self.group, self.group.mul(self.array, other.array))

    def inverse(self) -> "ProjMat":
        return ProjMat.from_array(self.group, self.group.adjugate(self.array))

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjMat) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)

    def __str__(self) -> str:
        a, b, c, d = (str(x) for x in self.entries)
        return f"[[{a}, {b}], [{c}, {d}]]"
