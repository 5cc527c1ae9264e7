"""Self-describing text serialization of problem instances.

Layout::

    # family=lasso
    # rows=50
    # cols=500
    # lambda=5
    # seed=7
    # generator=numpy-pcg64-ziggurat/1
    [A]
    <rows lines of cols space-separated values>
    [b]
    <one value per line>

QP instances carry ``s`` instead of ``lambda``; logistic instances add ``c``
when known. Values are written with 17 significant digits so a load restores
every entry bit for bit.
"""

import io
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from .._exceptions import ArgumentError
from .._utils import format_float
from ..types.common import Family
from ..types.problems import LassoInstance, LogisticInstance, SimplexQpInstance
from ._random import GENERATOR_VERSION

logger = logging.getLogger(__name__)

ProblemInstance = Union[LassoInstance, LogisticInstance, SimplexQpInstance]

_FMT = "%.17g"


def _dump_array(arr: np.ndarray) -> str:
    buf = io.StringIO()
    np.savetxt(buf, arr, fmt=_FMT)
    return buf.getvalue()


def save_instance(inst: ProblemInstance, path: Union[str, Path]) -> Path:
    """Write ``inst`` to ``path`` and return the path."""
    path = Path(path)
    rows, cols = inst.A.shape
    header: Dict[str, str] = {
        "family": inst.family.value,
        "rows": str(rows),
        "cols": str(cols),
    }
    if isinstance(inst, SimplexQpInstance):
        header["s"] = format_float(inst.s)
    else:
        header["lambda"] = format_float(inst.lam)
    if isinstance(inst, LogisticInstance) and inst.c is not None:
        header["c"] = format_float(inst.c)
    header["seed"] = str(inst.seed)
    header["generator"] = GENERATOR_VERSION

    with path.open("w", encoding="utf-8") as fh:
        for key, value in header.items():
            fh.write(f"# {key}={value}\n")
        fh.write("[A]\n")
        fh.write(_dump_array(inst.A))
        fh.write("[b]\n")
        fh.write(_dump_array(inst.b))
    logger.info("saved %s instance (%dx%d) to %s", inst.family.value, rows, cols, path)
    return path


def _parse(text: str) -> Tuple[Dict[str, str], Dict[str, List[str]]]:
    header: Dict[str, str] = {}
    sections: Dict[str, List[str]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if not sep:
                raise ArgumentError(f"line {lineno}: expected '# key=value', got {raw!r}")
            header[key.strip()] = value.strip()
        elif line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections[current] = []
        elif current is None:
            raise ArgumentError(f"line {lineno}: data before the first section")
        else:
            sections[current].append(line)
    return header, sections


def _require(header: Dict[str, str], key: str) -> str:
    if key not in header:
        raise ArgumentError(f"instance header is missing '{key}'")
    return header[key]


def load_instance(path: Union[str, Path]) -> ProblemInstance:
    """Read an instance written by :func:`save_instance`.

    Raises:
        ArgumentError: If the file is malformed or its shapes disagree with the header
    """
    header, sections = _parse(Path(path).read_text(encoding="utf-8"))
    name = _require(header, "family")
    try:
        family = Family(name)
    except ValueError as exc:
        raise ArgumentError(f"unknown family '{name}' in instance header") from exc
    rows, cols = int(_require(header, "rows")), int(_require(header, "cols"))
    if "A" not in sections or "b" not in sections:
        raise ArgumentError("instance file needs both [A] and [b] sections")

    A = np.loadtxt(sections["A"], dtype=np.float64, ndmin=2)
    b = np.loadtxt(sections["b"], dtype=np.float64, ndmin=1)
    if A.shape != (rows, cols):
        raise ArgumentError(f"[A] has shape {A.shape}, header says {(rows, cols)}")
    generator = header.get("generator")
    if generator is not None and generator != GENERATOR_VERSION:
        logger.warning("instance written by generator %s, running %s", generator, GENERATOR_VERSION)

    seed = int(header.get("seed", "0"))
    if family is Family.QP:
        return SimplexQpInstance(A=A, b=b, s=float(_require(header, "s")), seed=seed)
    lam = float(_require(header, "lambda"))
    if family is Family.LOGISTIC:
        c = float(header["c"]) if "c" in header else None
        return LogisticInstance(A=A, b=b, lam=lam, c=c, seed=seed)
    return LassoInstance(A=A, b=b, lam=lam, seed=seed)
