"""Image ingestion/egress at exact bit depths.

16-bit inputs are linear light (sample/65535); 8-bit inputs are sRGB and get
routed through the inverse-ISP linearizer.  The PPM flavor is binary P6 with
maxval 65535 and big-endian samples, bit-exact for cross-tool fixtures.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from .core import LinearImage
from .inverse_isp import InverseConfig, linearize, srgb_oetf


class ImageFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ImageFile:
    path: Path
    format: str      # "ppm16" | "png16" | "png8"
    colorspace: str  # "linear" | "srgb"


def probe(path) -> ImageFile:
    """Identify format and colorspace tag from the file itself."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".ppm":
        return ImageFile(path=path, format="ppm16", colorspace="linear")
    if suffix == ".png":
        raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
        if raw is None:
            raise ImageFormatError(f"cannot read PNG {path}")
        if raw.dtype == np.uint16:
            return ImageFile(path=path, format="png16", colorspace="linear")
        if raw.dtype == np.uint8:
            return ImageFile(path=path, format="png8", colorspace="srgb")
        raise ImageFormatError(f"unsupported PNG sample type {raw.dtype}")
    raise ImageFormatError(f"unsupported image format {suffix!r}")


def _read_ppm16(path: Path) -> np.ndarray:
    data = path.read_bytes()
    # header: magic, width, height, maxval as whitespace-separated tokens,
    # '#' comments allowed
    tokens = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(data):
            raise ImageFormatError(f"truncated PPM header in {path}")
        ch = data[pos:pos + 1]
        if ch == b"#":
            pos = data.find(b"\n", pos)
            if pos < 0:
                raise ImageFormatError(f"truncated PPM header in {path}")
            continue
        if ch.isspace():
            pos += 1
            continue
        end = pos
        while end < len(data) and not data[end:end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    magic, w, h, maxval = tokens[0], int(tokens[1]), int(tokens[2]), int(tokens[3])
    if magic != b"P6":
        raise ImageFormatError(f"not a binary PPM (magic {magic!r})")
    if maxval != 65535:
        raise ImageFormatError(f"expected maxval 65535, got {maxval}")
    if w < 1 or h < 1 or w * h > 2 ** 28:
        raise ImageFormatError(f"bad dimensions {w}x{h}")
    pos += 1  # single whitespace after maxval
    body = data[pos:]
    need = w * h * 3 * 2
    if len(body) < need:
        raise ImageFormatError(f"truncated PPM body ({len(body)} < {need} bytes)")
    samples = np.frombuffer(body[:need], dtype=">u2").reshape(h, w, 3)
    return samples


def _write_ppm16(path: Path, samples: np.ndarray) -> None:
    h, w = samples.shape[:2]
    header = f"P6\n{w} {h}\n65535\n".encode("ascii")
    path.write_bytes(header + samples.astype(">u2").tobytes())


def load_image(path, inverse_cfg: InverseConfig | None = None) -> LinearImage:
    """Load a file into linear light.

    16-bit data maps by sample/65535; 8-bit sRGB goes through linearize with
    inverse_cfg (default: exact sRGB EOTF).
    """
    info = probe(path)
    if info.format == "ppm16":
        samples = _read_ppm16(info.path)
        return LinearImage(samples.astype(np.float64) / 65535.0)
    raw = cv2.imread(str(info.path), cv2.IMREAD_UNCHANGED)
    if raw is None or raw.ndim != 3 or raw.shape[2] < 3:
        raise ImageFormatError(f"cannot read {path} as an RGB image")
    rgb = cv2.cvtColor(raw[..., :3], cv2.COLOR_BGR2RGB)
    if info.format == "png16":
        return LinearImage(rgb.astype(np.float64) / 65535.0)
    return linearize(rgb, inverse_cfg)


def save_image(img: LinearImage, path, bit_depth: int = 16) -> None:
    """Write linear data at the requested depth.

    16-bit writes round(sample*65535) to linear PPM/PNG by extension; 8-bit
    writes the sRGB encoding (delinearize) as PNG.  load(save(x)) is the
    identity at the stored precision.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if bit_depth == 16:
        samples = np.floor(img.data * 65535.0 + 0.5).astype(np.uint16)
        if suffix == ".ppm":
            _write_ppm16(path, samples)
        elif suffix == ".png":
            ok = cv2.imwrite(str(path), cv2.cvtColor(samples, cv2.COLOR_RGB2BGR))
            if not ok:
                raise IOError(f"cannot write {path}")
        else:
            raise ImageFormatError(f"unsupported 16-bit format {suffix!r}")
    elif bit_depth == 8:
        if suffix != ".png":
            raise ImageFormatError(f"8-bit output must be PNG, got {suffix!r}")
        codes = np.floor(np.clip(srgb_oetf(img.data), 0.0, 1.0) * 255.0 + 0.5)
        ok = cv2.imwrite(str(path), cv2.cvtColor(codes.astype(np.uint8),
                                                 cv2.COLOR_RGB2BGR))
        if not ok:
            raise IOError(f"cannot write {path}")
    else:
        raise ValueError(f"bit_depth must be 8 or 16, got {bit_depth}")


def encode_png8(img: LinearImage) -> bytes:
    """sRGB-encode to in-memory 8-bit PNG bytes (used by the preview service)."""
    codes = np.floor(np.clip(srgb_oetf(img.data), 0.0, 1.0) * 255.0 + 0.5)
    ok, buf = cv2.imencode(".png", cv2.cvtColor(codes.astype(np.uint8),
                                                cv2.COLOR_RGB2BGR))
    if not ok:
        raise IOError("PNG encoding failed")
    return buf.tobytes()
