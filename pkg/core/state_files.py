"""Reading and writing state, density and operator files.

Files are JSON objects::

    {"format_version": "1", "kind": "pure", "dims": [2, 2],
     "data": [[0.7071067811865476, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]]}

``kind`` is ``pure``, ``density`` or ``operator``. Complex entries are always
``[re, im]`` pairs; matrices are flattened row-major. ``dims`` is optional and
records a bipartition. Operator files may carry ``hbar``.
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from core.numkernel import DEFAULT_HERMITICITY_TOL, DimensionError
from core.states import DEFAULT_PSD_TOL, DEFAULT_TRACE_TOL, BipartiteDims, DensityState, PureState

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1"
KINDS = ("pure", "density", "operator")


class StateFileError(ValueError):
    """Malformed state file; ``line``/``column`` point at the offending text when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, path: str = ""):
        self.line = line
        self.column = column
        self.path = path
        where = path or "<input>"
        if line is not None:
            where = f"{where}:{line}:{column or 1}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True, eq=False)
class StateFile:
    kind: str
    data: np.ndarray
    dims: tuple[int, int] | None = None
    hbar: float | None = None
    digest: str = ""
    format_version: str = FORMAT_VERSION

    @property
    def size(self) -> int:
        return int(self.data.shape[0])

    def bipartite_dims(self) -> BipartiteDims:
        """Declared dims, else the square split ``sqrt(size) x sqrt(size)``."""
        if self.dims is not None:
            dims = BipartiteDims(*self.dims)
        else:
            root = math.isqrt(self.size)
            if root * root != self.size:
                raise DimensionError(f"Size {self.size} has no square bipartition; declare dims")
            dims = BipartiteDims(root, root)
        if dims.total != self.size:
            raise DimensionError(f"dims {dims.as_tuple()} do not match size {self.size}")
        return dims

    def to_pure(self) -> PureState:
        if self.kind != "pure":
            raise ValueError(f"Expected a pure state file, got kind {self.kind!r}")
        return PureState(self.data)

    def to_density(
        self,
        psd_tol: float = DEFAULT_PSD_TOL,
        trace_tol: float = DEFAULT_TRACE_TOL,
        hermiticity_tol: float = DEFAULT_HERMITICITY_TOL,
    ) -> DensityState:
        """Density matrix of the file; pure states become their normalized projector."""
        if self.kind == "pure":
            ket = PureState(self.data).normalized()
            matrix = np.outer(ket, ket.conj())
        elif self.kind == "density":
            matrix = self.data
        else:
            raise ValueError(f"Expected a state file, got kind {self.kind!r}")
        return DensityState(matrix, psd_tol=psd_tol, trace_tol=trace_tol, hermiticity_tol=hermiticity_tol)


def file_digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def _complex_entry(entry, index: int, path: str) -> complex:
    if (
        not isinstance(entry, list)
        or len(entry) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
    ):
        raise StateFileError(f"data[{index}] must be a [re, im] pair of numbers, got {entry!r}", path=path)
    try:
        re, im = float(entry[0]), float(entry[1])
    except OverflowError as e:
        raise StateFileError(f"data[{index}] is out of floating-point range", path=path) from e
    if not (math.isfinite(re) and math.isfinite(im)):
        raise StateFileError(f"data[{index}] is not finite: {entry!r}", path=path)
    return complex(re, im)


def _parse_dims(raw, path: str) -> tuple[int, int] | None:
    if raw is None:
        return None
    if (
        not isinstance(raw, list)
        or len(raw) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw)
    ):
        raise StateFileError(f"dims must be a pair of integers, got {raw!r}", path=path)
    return int(raw[0]), int(raw[1])


def _reject_constant(name: str):
    raise ValueError(f"{name} is not a valid number in a state file")


def parse_state_text(text: str, path: str = "") -> StateFile:
    try:
        payload = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise StateFileError(e.msg, line=e.lineno, column=e.colno, path=path) from e
    except ValueError as e:
        raise StateFileError(str(e), path=path) from e
    if not isinstance(payload, dict):
        raise StateFileError("Top level must be an object", line=1, column=1, path=path)

    version = str(payload.get("format_version", ""))
    if version != FORMAT_VERSION:
        raise StateFileError(f"Unsupported format_version {version!r} (expected {FORMAT_VERSION!r})", path=path)
    kind = payload.get("kind")
    if kind not in KINDS:
        raise StateFileError(f"kind must be one of {', '.join(KINDS)}; got {kind!r}", path=path)
    entries = payload.get("data")
    if not isinstance(entries, list) or not entries:
        raise StateFileError("data must be a non-empty list of [re, im] pairs", path=path)
    values = np.array([_complex_entry(e, i, path) for i, e in enumerate(entries)], dtype=np.complex128)

    if kind == "pure":
        data = values
    else:
        n = math.isqrt(values.size)
        if n * n != values.size:
            raise StateFileError(f"{kind} data has {values.size} entries, not a square matrix", path=path)
        data = values.reshape(n, n)

    hbar = payload.get("hbar")
    if hbar is not None:
        if isinstance(hbar, bool) or not isinstance(hbar, (int, float)):
            raise StateFileError(f"hbar must be a number, got {hbar!r}", path=path)
        try:
            hbar = float(hbar)
        except OverflowError as e:
            raise StateFileError("hbar is out of floating-point range", path=path) from e
        if not math.isfinite(hbar):
            raise StateFileError(f"hbar is not finite: {hbar!r}", path=path)

    return StateFile(
        kind=kind,
        data=data,
        dims=_parse_dims(payload.get("dims"), path),
        hbar=hbar,
        digest=file_digest(text.encode("utf-8")),
        format_version=version,
    )


def load_state_file(path: str | Path) -> StateFile:
    path = Path(path)
    raw = path.read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise StateFileError(f"File is not UTF-8: {e}", path=str(path)) from e
    parsed = parse_state_text(text, path=str(path))
    logger.debug("Loaded %s file %s (size %d)", parsed.kind, path, parsed.size)
    return parsed


def dump_state_text(kind: str, data, dims: tuple[int, int] | None = None, hbar: float | None = None) -> str:
    """Serialize a vector or matrix in the file format (inverse of ``parse_state_text``)."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {', '.join(KINDS)}; got {kind!r}")
    flat = np.asarray(data, dtype=np.complex128).reshape(-1)
    payload: dict = {"format_version": FORMAT_VERSION, "kind": kind}
    if dims is not None:
        payload["dims"] = [int(dims[0]), int(dims[1])]
    if hbar is not None:
        payload["hbar"] = float(hbar)
    payload["data"] = [[float(z.real), float(z.imag)] for z in flat]
    return json.dumps(payload, indent=2) + "\n"
