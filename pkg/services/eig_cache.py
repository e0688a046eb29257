import hashlib
import os
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np

from config import get_eig_cache_dir, get_logger
from constants import EIG_CACHE_HEADER
from filterbank.spectral import SpectralDecomposition, eig_sym

logger = get_logger(__name__)

LE_FLOAT = np.dtype('<f8')


def cache_key(L: np.ndarray) -> str:
    """SHA-256 over the shape and little-endian float64 bytes of ``L``."""
    L = np.ascontiguousarray(L, dtype=LE_FLOAT)
    digest = hashlib.sha256()
    digest.update(f"{L.shape[0]}x{L.shape[1]}".encode())
    digest.update(L.tobytes())
    return digest.hexdigest()


def cache_path(L: np.ndarray, cache_dir: Path) -> Path:
    return Path(cache_dir) / f"{cache_key(L)}.eig"


def save_decomposition(sd: SpectralDecomposition, path: Path) -> None:
    """Write header, eigenvalues, then ``U`` row-major; replaced atomically."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"{EIG_CACHE_HEADER} {sd.n}\n".encode("ascii")
    payload = (
        np.ascontiguousarray(sd.eigenvalues, dtype=LE_FLOAT).tobytes()
        + np.ascontiguousarray(sd.basis, dtype=LE_FLOAT).tobytes(order='C')
    )
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(header + payload)
        os.replace(tmp_name, path)
    except OSError:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def load_decomposition(path: Path) -> SpectralDecomposition:
    """Read a cache file; raise ``ValueError`` if it is truncated or foreign."""
    raw = Path(path).read_bytes()
    newline = raw.find(b"\n")
    if newline < 0:
        raise ValueError(f"Missing header in {path}")
    parts = raw[:newline].decode("ascii", errors="replace").split()
    expected = EIG_CACHE_HEADER.split()
    if parts[:len(expected)] != expected or len(parts) != len(expected) + 1:
        raise ValueError(f"Unexpected header in {path}")
    n = int(parts[-1])
    body = raw[newline + 1:]
    if len(body) != (n + n * n) * LE_FLOAT.itemsize:
        raise ValueError(f"Cache file {path} has {len(body)} payload bytes, expected {(n + n * n) * 8}")
    values = np.frombuffer(body, dtype=LE_FLOAT).astype(float)
    return SpectralDecomposition(values[:n], values[n:].reshape(n, n))


def cached_eig_sym(L: np.ndarray, cache_dir: Optional[Path] = None) -> SpectralDecomposition:
    """
    ``eig_sym`` with an on-disk cache keyed by the content of ``L``.

    ``cache_dir`` defaults to ``GRAPHFB_EIG_CACHE``; with neither set the
    decomposition is computed directly. Unreadable entries are recomputed.
    """
    directory = Path(cache_dir) if cache_dir is not None else get_eig_cache_dir()
    if directory is None:
        return eig_sym(L)

    path = cache_path(L, directory)
    if path.exists():
        try:
            sd = load_decomposition(path)
            if sd.n == L.shape[0]:
                logger.info("Eigendecomposition cache hit: %s", path.name)
                return sd
            logger.warning("Cache entry %s has the wrong size; recomputing", path.name)
        except (OSError, ValueError) as exc:
            logger.warning("Ignoring unreadable cache entry %s: %s", path.name, exc)

    logger.info("Eigendecomposition cache miss: %s", path.name)
    sd = eig_sym(L)
    try:
        save_decomposition(sd, path)
    except OSError as exc:
        logger.warning("Could not write cache entry %s: %s", path, exc)
    return sd
