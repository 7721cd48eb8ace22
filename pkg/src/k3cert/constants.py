"""Typed access to the pinned data files shipped with the package.

Every file is covered by a sha256 manifest; the first access verifies all
digests and any mismatch fails loudly.  Loaders are cached and return
immutable values.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, Tuple

from .poly import GF, Polynomial, PolyRing, ZZ, parse_polynomials


class DataIntegrityError(RuntimeError):
    pass


def _data_root():
    return resources.files(__package__) / "data"


@lru_cache(maxsize=None)
def _manifest() -> Dict[str, str]:
    with (_data_root() / "manifest.json").open() as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def _verify_all() -> bool:
    for name, digest in _manifest().items():
        text = (_data_root() / name).read_text()
        actual = hashlib.sha256(text.encode()).hexdigest()
        if actual != digest:
            raise DataIntegrityError(f"digest mismatch for {name}")
    return True


@lru_cache(maxsize=None)
def _read(name: str) -> str:
    _verify_all()
    if name not in _manifest():
        raise DataIntegrityError(f"{name} is not in the manifest")
    return (_data_root() / name).read_text()


def _read_int(name: str) -> int:
    for line in _read(name).splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            return int(line)
    raise DataIntegrityError(f"no integer found in {name}")


def _read_polys(name: str) -> Tuple[PolyRing, dict]:
    return parse_polynomials(_read(name))


@lru_cache(maxsize=None)
def fourfold_ring() -> PolyRing:
    return PolyRing(("x0", "x1", "x2", "x3", "x4", "x5"), ZZ)


@lru_cache(maxsize=None)
def surface_ring() -> PolyRing:
    return PolyRing(("x", "y", "z"), ZZ)


@lru_cache(maxsize=None)
def quadrics() -> Tuple[Polynomial, Polynomial, Polynomial]:
    _, polys = _read_polys("quadrics.txt")
    return (polys["quadric1"], polys["quadric2"], polys["quadric3"])


@lru_cache(maxsize=None)
def plane_cubics() -> Tuple[Polynomial, Polynomial]:
    _, polys = _read_polys("plane_cubics.txt")
    return (polys["plane_cubic1"], polys["plane_cubic2"])


@lru_cache(maxsize=None)
def fourfold_cubic() -> Polynomial:
    return _read_polys("fourfold_cubic.txt")[1]["cubic"]


@lru_cache(maxsize=None)
def cubic_multipliers() -> Tuple[Polynomial, Polynomial, Polynomial]:
    _, polys = _read_polys("cubic_multipliers.txt")
    return (polys["multiplier1"], polys["multiplier2"], polys["multiplier3"])


@lru_cache(maxsize=None)
def branch_sextic() -> Polynomial:
    return _read_polys("branch_sextic.txt")[1]["sextic"]


@lru_cache(maxsize=None)
def char2_sqrt() -> Polynomial:
    return _read_polys("char2_sqrt.txt")[1]["cubic"]


@lru_cache(maxsize=None)
def char2_sextic() -> Polynomial:
    return _read_polys("char2_sextic.txt")[1]["sextic"]


@lru_cache(maxsize=None)
def sextic_disc() -> int:
    return _read_int("sextic_disc.txt")


@lru_cache(maxsize=None)
def fourfold_disc() -> int:
    return _read_int("fourfold_disc.txt")


@lru_cache(maxsize=None)
def disc_gcd() -> int:
    return _read_int("disc_gcd.txt")


@lru_cache(maxsize=None)
def bad_primes() -> Tuple[int, ...]:
    out = []
    for line in _read("bad_primes.txt").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(int(line))
    return tuple(out)


@lru_cache(maxsize=None)
def small_prime_powers() -> Tuple[Tuple[int, int], ...]:
    out = []
    for line in _read("small_prime_powers.txt").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            p, e = line.split()
            out.append((int(p), int(e)))
    return tuple(out)


@dataclass(frozen=True)
class LocalWitnessRow:
    prime: int
    x: int
    y: int
    z: int
    w: int


@lru_cache(maxsize=None)
def local_points() -> Tuple[LocalWitnessRow, ...]:
    out = []
    for line in _read("local_points.txt").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            p, x, y, z, w = (int(v) for v in line.split())
            out.append(LocalWitnessRow(p, x, y, z, w))
    return tuple(out)


@lru_cache(maxsize=None)
def weil_factor_13() -> Tuple[int, Tuple[int, ...]]:
    prime = None
    coeffs: Tuple[int, ...] = ()
    for line in _read("weil_13.txt").splitlines():
        line = line.strip()
        if line.startswith("prime:"):
            prime = int(line.split(":")[1])
        elif line.startswith("factor_coeffs_desc:"):
            coeffs = tuple(int(v) for v in line.split(":")[1].split())
    if prime is None or not coeffs:
        raise DataIntegrityError("weil_13.txt incomplete")
    return prime, coeffs


@lru_cache(maxsize=None)
def tritangent_display_13() -> dict:
    _, polys = _read_polys("tritangent_13.txt")
    return dict(polys)


@lru_cache(maxsize=None)
def twist() -> int:
    return _read_int("twist.txt")


def verify_manifest() -> bool:
    """Re-check every pinned file against its digest."""
    return _verify_all()
