"""Binary primitive BCH encoder/decoder over GF(2^m).

Polynomials over GF(2) are stored as Python ints (bit i = coefficient of
x^i), so addition is XOR. Field elements of GF(2^m) are ints in [0, 2^m)
with multiplication through exp/log tables of a primitive element alpha.

A designed-distance code correcting t errors has generator polynomial
g(x) = lcm of the minimal polynomials of alpha^1 ... alpha^2t; the code
length is 2^m - 1 and the message length is (2^m - 1) - deg(g). Encoding
is systematic (message bits occupy the high-order coefficients). Decoding
runs syndrome computation, Berlekamp-Massey, and a Chien root search, and
reports failure when the error locator is inconsistent with any pattern
of weight <= t.
"""

from __future__ import annotations

import numpy as np

# One primitive polynomial per field degree (standard tables).
_PRIMITIVE_POLY = {
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
}

SUPPORTED_LENGTHS = tuple(sorted((1 << m) - 1 for m in _PRIMITIVE_POLY))


def _poly_mod(a: int, b: int) -> int:
    # remainder of GF(2)[x] division
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def _poly_mul(a: int, b: int) -> int:
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


class BchCode:
    """A (2^m - 1, msg_len) binary BCH code correcting ``t`` bit errors."""

    def __init__(self, m: int, t: int):
        if m not in _PRIMITIVE_POLY:
            raise ValueError(f"field degree must be one of {sorted(_PRIMITIVE_POLY)}")
        if t < 1:
            raise ValueError("t must be at least 1")
        self.m = m
        self.t = t
        self.length = (1 << m) - 1
        if 2 * t >= self.length:
            raise ValueError(
                f"designed distance 2t+1 must not exceed the code length {self.length}"
            )
        self._build_field()
        self.generator = self._build_generator()
        self.parity_len = self.generator.bit_length() - 1
        self.msg_len = self.length - self.parity_len
        if self.msg_len <= 0:
            raise ValueError(f"t={t} leaves no message bits at length {self.length}")

    @classmethod
    def for_length(cls, length: int, t: int) -> "BchCode":
        m = (length + 1).bit_length() - 1
        if (1 << m) - 1 != length:
            raise ValueError(f"code length must be 2^m - 1, one of {SUPPORTED_LENGTHS}")
        return cls(m, t)

    @classmethod
    def smallest_for(cls, length: int, t: int) -> "BchCode":
        """Smallest primitive code whose length covers ``length`` (for shortening)."""
        for m in sorted(_PRIMITIVE_POLY):
            if (1 << m) - 1 >= length:
                return cls(m, t)
        raise ValueError(f"code length must be at most {SUPPORTED_LENGTHS[-1]}")

    def _build_field(self) -> None:
        order = self.length
        prim = _PRIMITIVE_POLY[self.m]
        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.zeros(order + 1, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & (order + 1):
                x ^= prim
        exp[order:] = exp[:order]
        self._exp = exp
        self._log = log

    def _gf_mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def _gf_inv(self, a: int) -> int:
        return int(self._exp[self.length - self._log[a]])

    def _minimal_poly(self, i: int) -> int:
        # product of (x - alpha^j) over the cyclotomic coset of i
        coset = []
        c = i
        while c not in coset:
            coset.append(c)
            c = (c * 2) % self.length
        poly = [1]  # coefficients in GF(2^m), poly[k] = coeff of x^k
        for j in coset:
            root = int(self._exp[j])
            nxt = [0] * (len(poly) + 1)
            for k, coeff in enumerate(poly):
                nxt[k + 1] ^= coeff
                nxt[k] ^= self._gf_mul(coeff, root)
            poly = nxt
        if any(c not in (0, 1) for c in poly):
            raise AssertionError("minimal polynomial is not binary")
        out = 0
        for k, coeff in enumerate(poly):
            out |= coeff << k
        return out

    def _build_generator(self) -> int:
        g = 1
        seen = set()
        for i in range(1, 2 * self.t + 1):
            rep = i
            c = i
            while True:
                c = (c * 2) % self.length
                rep = min(rep, c)
                if c == i:
                    break
            if rep in seen:
                continue
            seen.add(rep)
            g = _poly_mul(g, self._minimal_poly(i))
        return g

    def encode(self, message: np.ndarray) -> np.ndarray:
        """Systematic encoding; message bits land in positions parity_len..length-1."""
        message = np.asarray(message, dtype=np.uint8)
        if message.shape != (self.msg_len,):
            raise ValueError(f"message must have length {self.msg_len}")
        data = 0
        for i in range(self.msg_len - 1, -1, -1):
            data = (data << 1) | int(message[i])
        shifted = data << self.parity_len
        word = shifted | _poly_mod(shifted, self.generator)
        return self._int_to_bits(word)

    def decode(self, word: np.ndarray):
        """Return the message bits, or None when decoding fails."""
        word = np.asarray(word, dtype=np.uint8)
        if word.shape != (self.length,):
            raise ValueError(f"word must have length {self.length}")
        positions = np.flatnonzero(word)
        syndromes = self._syndromes(positions)
        if not any(syndromes):
            return word[self.parity_len :].copy()
        locator = self._berlekamp_massey(syndromes)
        if locator is None:
            return None
        errors = self._chien_search(locator)
        if errors is None:
            return None
        corrected = word.copy()
        corrected[errors] ^= 1
        if any(self._syndromes(np.flatnonzero(corrected))):
            return None
        return corrected[self.parity_len :]

    def _int_to_bits(self, word: int) -> np.ndarray:
        bits = np.zeros(self.length, dtype=np.uint8)
        i = 0
        while word:
            bits[i] = word & 1
            word >>= 1
            i += 1
        return bits

    def _syndromes(self, positions: np.ndarray) -> list[int]:
        # S_j = r(alpha^j) = XOR of alpha^{i*j} over set bit positions i
        out = []
        for j in range(1, 2 * self.t + 1):
            s = 0
            for i in positions:
                s ^= int(self._exp[(int(i) * j) % self.length])
            out.append(s)
        return out

    def _berlekamp_massey(self, syndromes: list[int]):
        # returns the error-locator polynomial as a coefficient list, or None
        sigma = [1]
        prev = [1]
        length = 0
        shift = 1
        prev_disc = 1
        for n, s_n in enumerate(syndromes):
            disc = s_n
            for i in range(1, length + 1):
                if i < len(sigma):
                    disc ^= self._gf_mul(sigma[i], syndromes[n - i])
            if disc == 0:
                shift += 1
                continue
            coeff = self._gf_mul(disc, self._gf_inv(prev_disc))
            update = [0] * shift + [self._gf_mul(coeff, c) for c in prev]
            if 2 * length <= n:
                old = sigma[:]
                sigma = [a ^ b for a, b in self._pad(sigma, update)]
                length = n + 1 - length
                prev = old
                prev_disc = disc
                shift = 1
            else:
                sigma = [a ^ b for a, b in self._pad(sigma, update)]
                shift += 1
        while sigma and sigma[-1] == 0:
            sigma.pop()
        if len(sigma) - 1 > self.t:
            return None
        return sigma

    @staticmethod
    def _pad(a: list[int], b: list[int]):
        n = max(len(a), len(b))
        return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))

    def _chien_search(self, sigma: list[int]):
        degree = len(sigma) - 1
        if degree == 0:
            return None
        errors = []
        for i in range(self.length):
            # evaluate sigma at alpha^{-i}; a root marks an error at position i
            val = 0
            for k, coeff in enumerate(sigma):
                if coeff:
                    val ^= int(self._exp[(self._log[coeff] + k * (self.length - i)) % self.length])
            if val == 0:
                errors.append(i)
        if len(errors) != degree:
            return None
        return np.array(errors, dtype=np.int64)
