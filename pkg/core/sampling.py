"""
Reproducible random streams and channel samplers for UnderlaySim
"""

import hashlib
import struct
from dataclasses import dataclass

import numpy as np
from scipy.linalg import qr

_MASK64 = (1 << 64) - 1


def derive_stream_id(*parts) -> int:
    """Hash integers/strings into a 64-bit stream label"""
    digest = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, str):
            payload = b"s" + part.encode("utf-8")
        else:
            payload = b"i" + struct.pack("<Q", int(part) & _MASK64)
        digest.update(struct.pack("<I", len(payload)))
        digest.update(payload)
    return int.from_bytes(digest.digest(), "little")


@dataclass(frozen=True)
class RandomStream:
    """Immutable (seed, stream_id) token keying a Philox generator"""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        object.__setattr__(self, "stream_id", int(self.stream_id) & _MASK64)

    def generator(self) -> np.random.Generator:
        # A fresh generator on each call keeps the token pure
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, *labels) -> "RandomStream":
        return RandomStream(self.seed, derive_stream_id(self.stream_id, *labels))


def cn_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """i.i.d. CN(0,1) entries drawn from an existing generator"""
    real = rng.standard_normal((rows, cols))
    imag = rng.standard_normal((rows, cols))
    return (real + 1j * imag) / np.sqrt(2.0)


def sample_cn_matrix(stream: RandomStream, rows: int, cols: int) -> np.ndarray:
    """
    Draw a rows x cols matrix of i.i.d. circularly-symmetric CN(0,1) entries.

    Real and imaginary parts are independent N(0, 1/2). Empty shapes are allowed.
    """
    if rows < 0 or cols < 0:
        raise ValueError("matrix dimensions must be non-negative")
    return cn_matrix(stream.generator(), rows, cols)


def haar_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    """Haar-distributed m x m unitary from an existing generator"""
    z = cn_matrix(rng, m, m)
    q, r = qr(z)
    # Fix the phase ambiguity of QR so R has a positive real diagonal
    d = np.diag(r)
    phases = d / np.abs(d)
    return q * phases


def sample_haar_beams(stream: RandomStream, m: int) -> np.ndarray:
    """m orthonormal beam vectors (columns), Haar-distributed on U(m)"""
    if m < 1:
        raise ValueError("beam count must be at least 1")
    return haar_unitary(stream.generator(), m)
