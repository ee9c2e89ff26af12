"""Reading and writing PNG (8/16-bit gray or RGB) and PFM images."""
import os
import tempfile
from pathlib import Path

import cv2
import numpy as np

from .imaging import as_image

FORMATS = ("png8", "png16", "pfm")


def atomic_write(path, data):
    """Write bytes to `path` through a temporary file and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_pfm(path):
    with open(path, "rb") as fh:
        tag = fh.readline().strip()
        if tag == b"PF":
            channels = 3
        elif tag == b"Pf":
            channels = 1
        else:
            raise ValueError(f"{path}: not a PFM file (header {tag!r})")
        dims = fh.readline().split()
        scale_line = fh.readline().strip()
        try:
            width, height = int(dims[0]), int(dims[1])
            scale = float(scale_line)
        except (IndexError, ValueError):
            raise ValueError(f"{path}: malformed PFM header") from None
        dtype = "<f4" if scale < 0 else ">f4"
        count = width * height * channels
        data = np.frombuffer(fh.read(), dtype=dtype)
    if data.size != count:
        raise ValueError(f"{path}: expected {count} samples, found {data.size}")
    shape = (height, width, 3) if channels == 3 else (height, width)
    # PFM stores rows bottom to top
    return data.reshape(shape)[::-1].astype(np.float64)


def _encode_pfm(img):
    height, width = img.shape[:2]
    if img.ndim == 3 and img.shape[2] == 3:
        tag, arr = b"PF", img
    else:
        tag, arr = b"Pf", img.reshape(height, width)
    header = tag + b"\n" + f"{width} {height}\n-1.0\n".encode("ascii")
    body = np.ascontiguousarray(arr[::-1], dtype="<f4").tobytes()
    return header + body


def load_image(path):
    """Load a PNG or PFM image as float64 samples.

    8-bit PNG samples are mapped by ``v / 255`` and 16-bit ones by
    ``v / 65535``. PFM samples are returned unchanged. Gray images come back
    as (H, W) arrays, color ones as (H, W, 3) in RGB order.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"{path}: no such file")
    with open(path, "rb") as fh:
        magic = fh.read(8)
    if magic[:2] in (b"PF", b"Pf"):
        return as_image(_read_pfm(path))
    if magic != b"\x89PNG\r\n\x1a\n":
        raise ValueError(f"{path}: unsupported format (expected PNG or PFM)")
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ValueError(f"{path}: unreadable PNG")
    if raw.dtype == np.uint8:
        scale = 255.0
    elif raw.dtype == np.uint16:
        scale = 65535.0
    else:
        raise ValueError(f"{path}: unsupported PNG sample type {raw.dtype}")
    if raw.ndim == 3:
        if raw.shape[2] != 3:
            raise ValueError(f"{path}: unsupported PNG colour type with {raw.shape[2]} channels")
        raw = raw[:, :, ::-1]
    return raw.astype(np.float64) / scale


def quantize(img, levels):
    """Clamp to [0, 1] and round half away from zero onto 0..levels."""
    v = np.clip(img, 0.0, 1.0) * levels
    return np.floor(v + 0.5)


def save_image(img, path, format=None):
    """Save an image as ``png8``, ``png16`` or ``pfm``.

    The format defaults to ``pfm`` for a ``.pfm`` suffix and ``png8``
    otherwise. The file is written atomically.
    """
    img = as_image(img)
    path = Path(path)
    if format is None:
        format = "pfm" if path.suffix.lower() == ".pfm" else "png8"
    if format not in FORMATS:
        raise ValueError(f"unknown image format {format!r}, expected one of {FORMATS}")
    if format == "pfm":
        data = _encode_pfm(img)
    else:
        dtype, levels = (np.uint8, 255) if format == "png8" else (np.uint16, 65535)
        arr = quantize(img, levels).astype(dtype)
        if arr.ndim == 3:
            arr = arr[:, :, 0] if arr.shape[2] == 1 else arr[:, :, ::-1]
        ok, buf = cv2.imencode(".png", np.ascontiguousarray(arr))
        if not ok:
            raise OSError(f"{path}: PNG encoding failed")
        data = buf.tobytes()
    atomic_write(path, data)
