"""Residue rings F_q[t]/(M) with vectorized (numpy) arithmetic.

Elements are coded as ints: the residue ``sum c_i t^i`` (deg < deg M) has code
``sum c_i q^i``.  Whole-ring arrays (``coeffs``, ``psi_exp``, ``inv``) are built
lazily and cached on the ring object, which is shared through
:func:`ResidueRing.get`.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .field import GF
from .poly import Poly, PolyError, gcd_monic, inv_mod, is_irreducible


class ResidueRing:
    def __init__(self, M: Poly):
        if not M:
            raise PolyError("residue ring modulo zero")
        self.M = M.monic()
        self.F: GF = M.F
        self.q = self.F.q
        self.p = self.F.p
        self.n = self.M.deg
        self.size = self.q**self.n
        self._cache: dict = {}

    @staticmethod
    @lru_cache(maxsize=256)
    def _get(q: int, c: tuple) -> "ResidueRing":
        return ResidueRing(Poly(GF.get(q), c))

    @classmethod
    def get(cls, M: Poly) -> "ResidueRing":
        M = M.monic()
        return cls._get(M.F.q, M.c)

    def __repr__(self) -> str:
        return f"ResidueRing(q={self.q}, {self.M})"

    # conversions -------------------------------------------------------

    def elem(self, p: Poly | int) -> int:
        if isinstance(p, int):
            p = Poly(self.F, [self.F.from_int(p)])
        if self.n == 0:
            return 0
        return (p % self.M).code()

    def poly(self, code: int) -> Poly:
        return Poly.from_code(self.F, int(code))

    def coeffs(self, codes) -> np.ndarray:
        """Coefficient arrays of shape codes.shape + (n,)."""
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty(codes.shape + (self.n,), dtype=np.int64)
        rest = codes.copy()
        for i in range(self.n):
            out[..., i] = rest % self.q
            rest //= self.q
        return out

    def codes(self, coeffs: np.ndarray) -> np.ndarray:
        weights = self.q ** np.arange(self.n, dtype=np.int64)
        return (np.asarray(coeffs, dtype=np.int64) * weights).sum(axis=-1)

    @property
    def all_coeffs(self) -> np.ndarray:
        if "all_coeffs" not in self._cache:
            self._cache["all_coeffs"] = self.coeffs(np.arange(self.size, dtype=np.int64))
        return self._cache["all_coeffs"]

    def lex_key(self, code: int) -> tuple:
        """Padded ascending coefficient tuple, c_0 most significant."""
        return tuple(int(x) for x in self.coeffs(np.array(code)))

    # vectorized arithmetic --------------------------------------------

    def add(self, a, b):
        F = self.F
        return self.codes(F.vadd(self.coeffs(a), self.coeffs(b)))

    def sub(self, a, b):
        F = self.F
        return self.codes(F.vsub(self.coeffs(a), self.coeffs(b)))

    def neg(self, a):
        return self.codes(self.F.vneg(self.coeffs(a)))

    def mul_coeffs(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Multiply coefficient arrays (..., n) and reduce modulo M."""
        F, n = self.F, self.n
        if n == 0:
            return A
        shape = np.broadcast_shapes(A.shape[:-1], B.shape[:-1])
        prod = np.zeros(shape + (2 * n - 1,), dtype=np.int64)
        if F.n == 1:
            p = F.p
            for i in range(n):
                prod[..., i : i + n] += A[..., i : i + 1] * B
            prod %= p
            Mc = np.array(self.M.c, dtype=np.int64)
            for k in range(2 * n - 2, n - 1, -1):
                c = prod[..., k : k + 1]
                prod[..., k - n : k + 1] = (prod[..., k - n : k + 1] - c * Mc) % p
            return prod[..., :n]
        for i in range(n):
            for j in range(n):
                prod[..., i + j] = F.vadd(prod[..., i + j], F.vmul(A[..., i], B[..., j]))
        Mc = self.M.c
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[..., k].copy()
            for j in range(n + 1):
                if Mc[j]:
                    prod[..., k - n + j] = F.vsub(prod[..., k - n + j], F.vmul(c, Mc[j]))
        return prod[..., :n]

    def mul(self, a, b):
        return self.codes(self.mul_coeffs(self.coeffs(a), self.coeffs(b)))

    def scalar_mul(self, a, s: int):
        """Multiply codes by a field element s."""
        return self.codes(self.F.vmul(self.coeffs(a), s))

    def mul_table(self) -> np.ndarray:
        if "mul_table" not in self._cache:
            if self.size > 4096:
                raise MemoryError(f"multiplication table of size {self.size}^2 refused")
            allc = self.all_coeffs
            self._cache["mul_table"] = self.codes(self.mul_coeffs(allc[:, None, :], allc[None, :, :]))
        return self._cache["mul_table"]

    def add_table(self) -> np.ndarray:
        if "add_table" not in self._cache:
            if self.size > 4096:
                raise MemoryError(f"addition table of size {self.size}^2 refused")
            allc = self.all_coeffs
            self._cache["add_table"] = self.codes(self.F.vadd(allc[:, None, :], allc[None, :, :]))
        return self._cache["add_table"]

    def neg_table(self) -> np.ndarray:
        if "neg_table" not in self._cache:
            self._cache["neg_table"] = self.neg(np.arange(self.size))
        return self._cache["neg_table"]

    def pow(self, a: int, e: int) -> int:
        acc, base = self.elem(1), int(a)
        while e:
            if e & 1:
                acc = int(self.mul(acc, base))
            base = int(self.mul(base, base))
            e >>= 1
        return acc

    # units -------------------------------------------------------------

    @property
    def inv(self) -> np.ndarray:
        """inv[x] = inverse of x for units, -1 otherwise."""
        if "inv" not in self._cache:
            out = np.full(self.size, -1, dtype=np.int64)
            if self.n == 0:
                out[0] = 0
            else:
                for x in range(self.size):
                    px = self.poly(x)
                    if px and gcd_monic(px, self.M).deg == 0:
                        out[x] = inv_mod(px, self.M).code()
            self._cache["inv"] = out
        return self._cache["inv"]

    @property
    def units(self) -> np.ndarray:
        """Codes of the units, ascending."""
        if "units" not in self._cache:
            self._cache["units"] = np.nonzero(self.inv >= 0)[0].astype(np.int64)
        return self._cache["units"]

    def is_unit(self, x: int) -> bool:
        return bool(self.inv[int(x)] >= 0)

    # the character psi_M ----------------------------------------------

    @property
    def psi_functional(self) -> np.ndarray:
        """ell[i] = coefficient of t^-1 in t^i / M, for i < n (values in F_q)."""
        if "ell" not in self._cache:
            # coefficient of t^-1 in t^i/M is the coefficient of t^(-1-i) in 1/M
            vals = []
            cur = Poly(self.F, [1])
            for _ in range(self.n):
                cur = cur.shift(1)
                qt, cur = divmod(cur, self.M)
                vals.append(qt.coeff(0))
            self._cache["ell"] = np.array(vals, dtype=np.int64)
        return self._cache["ell"]

    def psi_exp_coeffs(self, A: np.ndarray) -> np.ndarray:
        """Exponent in F_p of psi_M for coefficient arrays (..., n)."""
        F = self.F
        ell = self.psi_functional
        if F.n == 1:
            return (A * ell).sum(axis=-1) % F.p
        acc = np.zeros(A.shape[:-1], dtype=np.int64)
        for i in range(self.n):
            if ell[i]:
                acc = F.vadd(acc, F.vmul(A[..., i], int(ell[i])))
        return F.vtrace(acc)

    @property
    def psi_exp(self) -> np.ndarray:
        """psi_exp[z] = k with psi_M(z) = exp(2 pi i k / p)."""
        if "psi_exp" not in self._cache:
            self._cache["psi_exp"] = self.psi_exp_coeffs(self.all_coeffs)
        return self._cache["psi_exp"]

    # fields ------------------------------------------------------------

    @property
    def is_field(self) -> bool:
        if "is_field" not in self._cache:
            self._cache["is_field"] = is_irreducible(self.M)
        return self._cache["is_field"]

    def euler_is_square(self, x: int) -> bool:
        if not self.is_field:
            raise PolyError("euler_is_square needs an irreducible modulus")
        if x == 0:
            return True
        return self.pow(x, (self.size - 1) // 2) == self.elem(1)

    def squares_table(self) -> np.ndarray:
        if "sq" not in self._cache:
            allc = self.all_coeffs
            self._cache["sq"] = self.codes(self.mul_coeffs(allc, allc))
        return self._cache["sq"]

    def sqrt_all(self, x: int) -> list[int]:
        """All square roots of x, sorted lexicographically (c_0 first)."""
        roots = np.nonzero(self.squares_table() == int(x))[0]
        return sorted((int(r) for r in roots), key=self.lex_key)

    def sqrt(self, x: int) -> int:
        roots = self.sqrt_all(x)
        if not roots:
            raise PolyError(f"{self.poly(x)} is not a square modulo {self.M}")
        return roots[0]


def residue_field(g: Poly) -> ResidueRing:
    R = ResidueRing.get(g)
    if not R.is_field:
        raise PolyError(f"{g} is reducible; no residue field")
    return R


class ResidueRingElem:
    """A residue class value mod r, carrying its modulus."""

    __slots__ = ("ring", "value")

    def __init__(self, value: Poly, modulus: Poly | ResidueRing):
        ring = modulus if isinstance(modulus, ResidueRing) else ResidueRing.get(modulus)
        self.ring = ring
        self.value = value % ring.M if ring.n else Poly(ring.F)

    @property
    def modulus(self) -> Poly:
        return self.ring.M

    def _wrap(self, p: Poly) -> "ResidueRingElem":
        return ResidueRingElem(p, self.ring)

    def _val(self, other) -> Poly:
        if isinstance(other, ResidueRingElem):
            if other.ring is not self.ring:
                raise PolyError("residues modulo different polynomials")
            return other.value
        if isinstance(other, Poly):
            return other
        return Poly(self.ring.F, [self.ring.F.from_int(other)])

    def __add__(self, other):
        return self._wrap(self.value + self._val(other))

    def __sub__(self, other):
        return self._wrap(self.value - self._val(other))

    def __mul__(self, other):
        return self._wrap(self.value * self._val(other))

    __radd__, __rmul__ = __add__, __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def is_unit(self) -> bool:
        if self.ring.n == 0:
            return True
        return bool(self.value) and gcd_monic(self.value, self.ring.M).deg == 0

    def inverse(self) -> "ResidueRingElem":
        return self._wrap(inv_mod(self.value, self.ring.M))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._wrap(self.value.pow_mod(e, self.ring.M) if self.ring.n else self.value)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResidueRingElem):
            return NotImplemented
        return self.ring is other.ring and self.value == other.value

    def __hash__(self):
        return hash((self.ring.M, self.value))

    def __repr__(self) -> str:
        return f"{self.value} mod {self.ring.M}"
