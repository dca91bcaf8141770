"""Loss-of-orthogonality measurements for Gram-Schmidt and the equiangular generator.

The harness only measures.  Which method wins on which family is recorded,
never asserted.
"""
import csv
import io
import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import EquiangularError, InputError
from .generator import generate, gs_reference
from .gram import gram_deviation

FAMILIES = ("hilbert", "vandermonde", "random-graded")
MAX_DIM = 64


def hilbert(n):
    i = np.arange(n)
    return 1.0 / (i[:, None] + i[None, :] + 1.0)


def vandermonde(n):
    """Increasing-power Vandermonde matrix on equispaced nodes in [0, 1]."""
    return np.vander(np.linspace(0.0, 1.0, n), increasing=True)


def random_graded(n, seed=0, decades=8.0):
    """``U diag(10^-decades * i/(n-1)) V^T`` with fixed-seed orthogonal ``U``, ``V``."""
    rng = np.random.default_rng(seed + n)
    u, _ = np.linalg.qr(rng.standard_normal((n, n)))
    v, _ = np.linalg.qr(rng.standard_normal((n, n)))
    sv = 10.0 ** (-decades * np.arange(n) / max(n - 1, 1))
    return (u * sv) @ v.T


def make_family(name, n):
    if name == "hilbert":
        return hilbert(n)
    if name == "vandermonde":
        return vandermonde(n)
    if name == "random-graded":
        return random_graded(n)
    raise InputError(f"unknown family {name!r}; choose from {FAMILIES}")


@dataclass(frozen=True)
class StabilityRecord:
    method: str
    family: str
    n: int
    theta: float
    condition: float
    gram_deviation: float
    norm_deviation: float
    mgs_difference: float
    status: str


def _measure(s, alpha):
    return gram_deviation(s, alpha), float(np.max(np.abs(np.linalg.norm(s, axis=0) - 1.0)))


def stability_harness(families=FAMILIES, dims=(8,), thetas=(math.pi / 3,)):
    """Run every method on every ``(family, n)`` instance.

    Methods are classical and modified Gram-Schmidt, the generator at
    ``theta = pi/2`` (pure orthogonalization through the difference basis)
    and the generator at each requested angle.  ``mgs_difference`` is
    ``max |S - Q_mgs|`` for the orthogonalizing methods and NaN otherwise.
    A method that raises is recorded with its error name in ``status``.
    """
    for d in dims:
        if int(d) != d or not 1 <= d <= MAX_DIM:
            raise InputError(f"dimensions must be integers in [1, {MAX_DIM}], got {d!r}")
    for fam in families:
        if fam not in FAMILIES:
            raise InputError(f"unknown family {fam!r}; choose from {FAMILIES}")
    records = []
    for fam in families:
        for n in dims:
            a = make_family(fam, int(n))
            cond = float(np.linalg.cond(a))
            q_mgs = None
            runs = [("classical-gs", math.pi / 2, lambda: gs_reference(a, "classical")[0]),
                    ("modified-gs", math.pi / 2, lambda: gs_reference(a, "modified")[0]),
                    ("ev-b-basis", math.pi / 2, lambda: generate(a, alpha=0.0)[0])]
            for th in thetas:
                runs.append(("ev", float(th), lambda th=th: generate(a, th)[0]))
            for method, theta, fn in runs:
                alpha = 0.0 if theta == math.pi / 2 else math.cos(theta)
                try:
                    s = fn()
                except EquiangularError as exc:
                    records.append(StabilityRecord(method, fam, int(n), theta, cond,
                                                   math.nan, math.nan, math.nan, type(exc).__name__))
                    continue
                if method == "modified-gs":
                    q_mgs = s
                gdev, ndev = _measure(s, alpha)
                diff = math.nan
                if alpha == 0.0 and q_mgs is not None:
                    diff = float(np.max(np.abs(s - q_mgs)))
                records.append(StabilityRecord(method, fam, int(n), theta, cond, gdev, ndev, diff, "ok"))
    return records


def report_csv(records):
    """CSV text with a header row; floats at 17 significant digits."""
    buf = io.StringIO()
    names = [f.name for f in fields(StabilityRecord)]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for rec in records:
        row = asdict(rec)
        w.writerow(["%.17g" % row[k] if isinstance(row[k], float) else row[k] for k in names])
    return buf.getvalue()
