"""Parameter schedules for the rows of a triangular array.

A :class:`RowSchedule` is one row: the cell kind plus the success
probabilities ``p_{k,n}``. A :class:`ScheduleFamily` produces rows for any
``(n, k(n))``; for geometric families the generator shapes ``q = 1 - p`` (the
quantity the limit theorems constrain) and stores ``p = 1 - q``.

Config file grammar
-------------------
One ``key = value`` pair per line. ``#`` starts a comment, blank lines are
ignored, keys are case-sensitive and may appear once::

    kind      = bernoulli | geometric                 (required)
    generator = iid_classic | linear_weights | power_weights
                | perturbed_iid | explicit            (default: explicit if
                                                       params given)
    lambda    = <positive real>          required unless generator=explicit
    gamma     = <real>                   power_weights exponent
    delta     = <real in [0, 1)>         perturbed_iid amplitude
    params    = <real>, <real>, ...      explicit only; optional [ ]
    n         = <positive integer>       explicit only; row label

Families:

* ``iid_classic``    weight_k = lambda / kn
* ``linear_weights`` weight_k = 2 lambda k / (kn (kn + 1)), sums to lambda
* ``power_weights``  weight_k = lambda k**gamma / sum_i i**gamma
* ``perturbed_iid``  weight_k = lambda / kn * (1 + delta cos k); the sum is
  within ``2.1 delta lambda / kn`` of lambda since ``|sum cos k| <= 1/sin(1/2)``

where weight is ``p`` for Bernoulli rows and ``q`` for geometric rows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distributions import CellLaw, Kind, RowMoments, row_moments


class ScheduleError(ValueError):
    """Invalid schedule parameter; ``index`` is the 1-based cell index."""

    def __init__(self, msg: str, index: int | None = None):
        super().__init__(msg)
        self.index = index


class ScheduleParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field '{key}'")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)
        self.line = line
        self.key = key


class Generator(str, enum.Enum):
    IID_CLASSIC = "iid_classic"
    LINEAR_WEIGHTS = "linear_weights"
    POWER_WEIGHTS = "power_weights"
    PERTURBED_IID = "perturbed_iid"
    EXPLICIT = "explicit"


def _validate_params(params: np.ndarray) -> None:
    if params.ndim != 1 or params.size == 0:
        raise ScheduleError("a row needs at least one cell")
    bad = np.flatnonzero(~((params > 0.0) & (params < 1.0)))
    if bad.size:
        i = int(bad[0])
        raise ScheduleError(
            f"cell k={i + 1} (index {i}) has p={params[i]!r}, outside (0, 1)", i + 1)


@dataclass(frozen=True, eq=False)
class RowSchedule:
    kind: Kind
    params: np.ndarray
    n_index: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        p = np.array(self.params, dtype=np.float64).ravel()
        _validate_params(p)
        p.flags.writeable = False
        object.__setattr__(self, "params", p)
        if int(self.n_index) < 1:
            raise ScheduleError(f"row label n={self.n_index!r} must be positive")
        object.__setattr__(self, "n_index", int(self.n_index))

    def __eq__(self, other):
        if not isinstance(other, RowSchedule):
            return NotImplemented
        return (self.kind is other.kind and self.n_index == other.n_index
                and np.array_equal(self.params, other.params))

    __hash__ = None

    def __len__(self):
        return self.params.size

    @property
    def q(self) -> np.ndarray:
        return 1.0 - self.params

    @property
    def weights(self) -> np.ndarray:
        """The constrained quantity: p for Bernoulli rows, q for geometric."""
        return self.params if self.kind is Kind.BERNOULLI else self.q

    def cells(self) -> list[CellLaw]:
        return [CellLaw(self.kind, float(p)) for p in self.params]

    def moments(self) -> RowMoments:
        return row_moments(self.kind, self.params)


@dataclass(frozen=True, eq=False)
class ScheduleFamily:
    generator: Generator
    kind: Kind = Kind.BERNOULLI
    lambda_target: float | None = None
    gamma: float | None = None
    delta: float | None = None
    params: tuple[float, ...] | None = field(default=None)

    def __post_init__(self):
        gen = Generator(self.generator)
        object.__setattr__(self, "generator", gen)
        object.__setattr__(self, "kind", Kind(self.kind))
        if gen is Generator.EXPLICIT:
            if self.params is None:
                raise ScheduleError("explicit schedule needs params")
            p = tuple(float(x) for x in self.params)
            _validate_params(np.asarray(p))
            object.__setattr__(self, "params", p)
        else:
            lam = self.lambda_target
            if lam is None or not (float(lam) > 0.0 and math.isfinite(float(lam))):
                raise ScheduleError(f"lambda={lam!r} must be a positive real")
            object.__setattr__(self, "lambda_target", float(lam))
        if gen is Generator.POWER_WEIGHTS:
            if self.gamma is None or not math.isfinite(float(self.gamma)):
                raise ScheduleError("power_weights needs a finite gamma")
            object.__setattr__(self, "gamma", float(self.gamma))
        if gen is Generator.PERTURBED_IID:
            d = self.delta
            if d is None or not (0.0 <= float(d) < 1.0):
                raise ScheduleError(f"perturbed_iid needs delta in [0, 1), got {d!r}")
            object.__setattr__(self, "delta", float(d))

    def __eq__(self, other):
        if not isinstance(other, ScheduleFamily):
            return NotImplemented
        return ((self.generator, self.kind, self.lambda_target, self.gamma,
                 self.delta, self.params)
                == (other.generator, other.kind, other.lambda_target,
                    other.gamma, other.delta, other.params))

    def __hash__(self):
        return hash((self.generator, self.kind, self.lambda_target, self.gamma,
                     self.delta, self.params))

    def row(self, n: int, kn: int | None = None) -> RowSchedule:
        return generate_row(self, n, kn)


def family_weights(family: ScheduleFamily, kn: int) -> np.ndarray:
    lam = family.lambda_target
    k = np.arange(1, kn + 1, dtype=np.float64)
    gen = family.generator
    if gen is Generator.IID_CLASSIC:
        return np.full(kn, lam / kn)
    if gen is Generator.LINEAR_WEIGHTS:
        return 2.0 * lam * k / (kn * (kn + 1.0))
    if gen is Generator.POWER_WEIGHTS:
        w = k ** family.gamma
        return lam * w / math.fsum(w)
    if gen is Generator.PERTURBED_IID:
        return lam / kn * (1.0 + family.delta * np.cos(k))
    raise AssertionError(gen)


def generate_row(family: ScheduleFamily, n: int, kn: int | None = None) -> RowSchedule:
    """Row ``n`` of ``family`` with ``kn`` cells (``kn`` defaults to ``n``).

    Raises :class:`ScheduleError` naming the first cell whose parameter
    escapes (0, 1).
    """
    n = int(n)
    if n < 1:
        raise ScheduleError(f"row label n={n} must be positive")
    if family.generator is Generator.EXPLICIT:
        if kn is not None and int(kn) != len(family.params):
            raise ScheduleError(
                f"explicit schedule has {len(family.params)} cells, kn={kn} requested")
        return RowSchedule(family.kind, family.params, n)
    kn = n if kn is None else int(kn)
    if kn < 1:
        raise ScheduleError(f"kn={kn} must be positive")
    w = family_weights(family, kn)
    params = w if family.kind is Kind.BERNOULLI else 1.0 - w
    # check the generated weight too: 1 - q rounds to 1 for tiny q
    _validate_params(w)
    return RowSchedule(family.kind, params, n)


# --- config text ------------------------------------------------------------

_KEYS = ("kind", "generator", "lambda", "gamma", "delta", "params", "n")


def _parse_real(text: str, line: int, key: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ScheduleParseError(f"expected a real number, got {text!r}", line, key) from None
    if not math.isfinite(v):
        raise ScheduleParseError(f"expected a finite real, got {text!r}", line, key)
    return v


def parse_schedule(text: str) -> ScheduleFamily | RowSchedule:
    """Parse config text; explicit schedules come back as a RowSchedule."""
    fields: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScheduleParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ScheduleParseError(f"unknown key (allowed: {', '.join(_KEYS)})", lineno, key)
        if key in fields:
            raise ScheduleParseError("duplicate key", lineno, key)
        if not value:
            raise ScheduleParseError("empty value", lineno, key)
        fields[key] = (value, lineno)

    if "kind" not in fields:
        raise ScheduleParseError("missing required field", key="kind")
    kind_text, kline = fields["kind"]
    try:
        kind = Kind(kind_text)
    except ValueError:
        raise ScheduleParseError(
            f"unknown kind {kind_text!r} (bernoulli, geometric)", kline, "kind") from None

    if "generator" in fields:
        gtext, gline = fields["generator"]
        try:
            gen = Generator(gtext)
        except ValueError:
            allowed = ", ".join(g.value for g in Generator)
            raise ScheduleParseError(f"unknown generator {gtext!r} ({allowed})",
                                     gline, "generator") from None
    elif "params" in fields:
        gen = Generator.EXPLICIT
    else:
        raise ScheduleParseError("missing required field", key="generator")

    def real(key):
        if key not in fields:
            return None
        return _parse_real(fields[key][0], fields[key][1], key)

    def reject(*keys):
        for key in keys:
            if key in fields:
                raise ScheduleParseError(f"not allowed with generator={gen.value}",
                                         fields[key][1], key)

    if gen is Generator.EXPLICIT:
        reject("lambda", "gamma", "delta")
        if "params" not in fields:
            raise ScheduleParseError("explicit schedule needs params", key="params")
        ptext, pline = fields["params"]
        body = ptext
        if body.startswith("[") != body.endswith("]"):
            raise ScheduleParseError("unbalanced brackets", pline, "params")
        body = body.strip("[]").strip()
        items = [s.strip() for s in body.split(",")] if body else []
        if not items or any(not s for s in items):
            raise ScheduleParseError("expected a comma-separated list of reals", pline, "params")
        params = [_parse_real(s, pline, "params") for s in items]
        n = len(params)
        if "n" in fields:
            ntext, nline = fields["n"]
            try:
                n = int(ntext)
            except ValueError:
                raise ScheduleParseError(f"expected an integer, got {ntext!r}", nline, "n") from None
        try:
            return RowSchedule(kind, params, n)
        except ScheduleError as exc:
            raise ScheduleParseError(str(exc), pline if exc.index else fields.get("n", (None, None))[1],
                                     "params" if exc.index else "n") from None

    reject("params", "n")
    if gen is not Generator.POWER_WEIGHTS:
        reject("gamma")
    if gen is not Generator.PERTURBED_IID:
        reject("delta")
    if "lambda" not in fields:
        raise ScheduleParseError("missing required field", key="lambda")
    try:
        return ScheduleFamily(gen, kind, real("lambda"), real("gamma"), real("delta"))
    except ScheduleError as exc:
        bad = "gamma" if gen is Generator.POWER_WEIGHTS and "gamma" in str(exc) else (
            "delta" if "delta" in str(exc) else "lambda")
        raise ScheduleParseError(str(exc), fields.get(bad, (None, None))[1], bad) from None


def emit_schedule(obj: ScheduleFamily | RowSchedule) -> str:
    """Canonical config text; ``parse_schedule`` of the result equals ``obj``."""
    if isinstance(obj, RowSchedule):
        params = ", ".join(repr(float(p)) for p in obj.params)
        return (f"kind = {obj.kind.value}\ngenerator = explicit\n"
                f"params = [{params}]\nn = {obj.n_index}\n")
    if obj.generator is Generator.EXPLICIT:
        return emit_schedule(RowSchedule(obj.kind, obj.params, len(obj.params)))
    lines = [f"kind = {obj.kind.value}", f"generator = {obj.generator.value}",
             f"lambda = {obj.lambda_target!r}"]
    if obj.gamma is not None:
        lines.append(f"gamma = {obj.gamma!r}")
    if obj.delta is not None:
        lines.append(f"delta = {obj.delta!r}")
    return "\n".join(lines) + "\n"


def explicit_row(kind: Kind | str, params: Sequence[float], n: int | None = None) -> RowSchedule:
    params = list(params)
    return RowSchedule(Kind(kind), params, len(params) if n is None else n)
