"""Causal structure definitions: the nine binary-variable topologies.

Every structure has a collider C with two marginally independent causes
(except the Nabla variant, where the exposure also affects the outcome
directly).  The exposure X and outcome Y either are those causes or are
children of them; four structures add a child D of the collider.

Index convention for the collider table: ``p_c_given`` entries are keyed
(left parent value, right parent value), so ``given_01`` is
P(C=1 | left=0, right=1).  Use the named accessors; never unpack the four
probabilities positionally.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterator, Mapping

import numpy as np

from .errors import (
    DegenerateStratumError,
    ExtraFieldError,
    MissingFieldError,
    OutOfRangeError,
    ParameterError,
)


class StructureKind(str, Enum):
    """The nine supported DAG topologies."""

    V = "V"                        # X -> C <- Y
    NABLA = "Nabla"                # X -> C <- Y plus X -> Y
    Y = "Y"                        # X -> C <- Y, C -> D
    M = "M"                        # A -> X, B -> Y, A -> C <- B
    LEFT_M = "LeftM"               # A -> X, A -> C <- Y
    RIGHT_M = "RightM"             # B -> Y, X -> C <- B
    LONG_M = "LongM"               # M plus C -> D
    LEFT_LONG_M = "LeftLongM"      # LeftM plus C -> D
    RIGHT_LONG_M = "RightLongM"    # RightM plus C -> D

    @property
    def has_child_d(self) -> bool:
        """True when the structure conditions on a child D of the collider."""
        return self in _D_KINDS

    @property
    def has_left_a(self) -> bool:
        """True when the left cause of the collider is A rather than X."""
        return self in _A_KINDS

    @property
    def has_right_b(self) -> bool:
        """True when the right cause of the collider is B rather than Y."""
        return self in _B_KINDS

    @property
    def conditioning_variable(self) -> str:
        """The variable conditioned on: D where present, otherwise C."""
        return "D" if self.has_child_d else "C"


# The properties above resolve these at call time, after the enum exists.
_D_KINDS = frozenset(
    {StructureKind.Y, StructureKind.LONG_M, StructureKind.LEFT_LONG_M, StructureKind.RIGHT_LONG_M}
)
_A_KINDS = frozenset(
    {StructureKind.M, StructureKind.LEFT_M, StructureKind.LONG_M, StructureKind.LEFT_LONG_M}
)
_B_KINDS = frozenset(
    {StructureKind.M, StructureKind.RIGHT_M, StructureKind.LONG_M, StructureKind.RIGHT_LONG_M}
)


class Sign(IntEnum):
    """Direction of a bias or effect; integer values compose by product."""

    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    def __mul__(self, other: "Sign") -> "Sign":  # type: ignore[override]
        return Sign(int(self) * int(other))

    __rmul__ = __mul__

    @property
    def label(self) -> str:
        return self.name.lower()


class Scale(str, Enum):
    """Effect scale on which an association (and its bias) is measured."""

    COV = "cov"
    RD = "rd"
    RR = "rr"
    OR = "or"
    LM_COEF = "lm"


@dataclass(frozen=True)
class Stratum:
    """Conditioning event ``variable = level`` with variable C or D."""

    variable: str
    level: int

    def __post_init__(self) -> None:
        if self.variable not in ("C", "D"):
            raise ParameterError(f"stratum variable must be C or D, got {self.variable!r}")
        if self.level not in (0, 1):
            raise ParameterError(f"stratum level must be 0 or 1, got {self.level!r}")

    def __str__(self) -> str:
        return f"{self.variable}={self.level}"


class LinearModel:
    """Marker for linear-regression adjustment (coefficient of X given the
    collider or its child as covariate)."""

    _instance = None

    def __new__(cls) -> "LinearModel":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "LinearModel"

    def __str__(self) -> str:
        return "lm"


LINEAR_MODEL = LinearModel()

Conditioning = Stratum | LinearModel


@dataclass(frozen=True)
class BiasQuery:
    """Which bias to compute: a conditioning event plus an effect scale.

    The scale field is ignored (fixed to RD-coefficient semantics) when the
    conditioning is linear-model adjustment.
    """

    conditioning: Conditioning
    scale: Scale = Scale.RD

    def check_valid_for(self, kind: StructureKind) -> None:
        """Reject conditioning events not defined for this structure."""
        if isinstance(self.conditioning, Stratum):
            want = kind.conditioning_variable
            if self.conditioning.variable != want:
                raise ParameterError(
                    f"{kind.value} conditions on {want}, not "
                    f"{self.conditioning.variable}"
                )
            if self.scale is Scale.LM_COEF:
                raise ParameterError("lm scale requires linear-model conditioning")


@dataclass(frozen=True)
class ColliderCpt:
    """P(C=1 | left parent, right parent).

    Field suffix is (left value, right value): ``given_01`` is the entry for
    left=0, right=1.  The matching JSON keys are "00", "01", "10", "11".
    """

    given_00: float
    given_01: float
    given_10: float
    given_11: float

    def given(self, left: int, right: int) -> float:
        """P(C=1 | left, right)."""
        return (
            (self.given_11 if right else self.given_10)
            if left
            else (self.given_01 if right else self.given_00)
        )

    def level_given(self, c: int, left: int, right: int) -> float:
        """P(C=c | left, right)."""
        p1 = self.given(left, right)
        return p1 if c == 1 else 1.0 - p1

    def items(self) -> Iterator[tuple[str, float]]:
        yield "00", self.given_00
        yield "01", self.given_01
        yield "10", self.given_10
        yield "11", self.given_11


@dataclass(frozen=True)
class EdgeCpt:
    """P(child=1 | parent) along a single edge."""

    given_0: float
    given_1: float

    def given(self, parent: int) -> float:
        return self.given_1 if parent else self.given_0

    def level_given(self, value: int, parent: int) -> float:
        p1 = self.given(parent)
        return p1 if value == 1 else 1.0 - p1

    @property
    def risk_difference(self) -> float:
        return self.given_1 - self.given_0

    def items(self) -> Iterator[tuple[str, float]]:
        yield "0", self.given_0
        yield "1", self.given_1


@dataclass(frozen=True)
class RoleMap:
    """Variables of a structure, their parents, and their roles.

    ``order`` is a topological order of the DAG; ``parents`` maps each
    variable to its parent tuple.
    """

    kind: StructureKind
    order: tuple[str, ...]
    parents: Mapping[str, tuple[str, ...]]
    exposure: str
    outcome: str
    collider: str
    left_cause: str
    right_cause: str
    collider_child: str | None

    def roles_of(self, variable: str) -> frozenset[str]:
        roles = set()
        if variable == self.exposure:
            roles.add("exposure")
        if variable == self.outcome:
            roles.add("outcome")
        if variable == self.collider:
            roles.add("collider")
        if variable == self.collider_child:
            roles.add("collider-child")
        if variable == self.left_cause:
            roles.add("left-cause")
        if variable == self.right_cause:
            roles.add("right-cause")
        return frozenset(roles)


def variable_roles(kind: StructureKind) -> RoleMap:
    """Role map for one of the nine structure kinds.

    The left cause of the collider is A when present, otherwise X; the right
    cause is B when present, otherwise Y.  In the Nabla structure X is also
    a parent of Y (the direct exposure-outcome edge).
    """
    left = "A" if kind.has_left_a else "X"
    right = "B" if kind.has_right_b else "Y"
    parents: dict[str, tuple[str, ...]] = {left: (), "C": (left, right)}
    if kind is StructureKind.NABLA:
        parents["Y"] = ("X",)
    elif kind.has_right_b:
        parents["B"] = ()
        parents["Y"] = ("B",)
    else:
        parents["Y"] = ()
    if kind.has_left_a:
        parents["X"] = ("A",)
    if kind.has_child_d:
        parents["D"] = ("C",)

    order: list[str] = [left]
    if kind.has_right_b:
        order.append("B")
    if kind.has_left_a:
        order.append("X")
    order.append("Y")
    order.append("C")
    if kind.has_child_d:
        order.append("D")

    return RoleMap(
        kind=kind,
        order=tuple(order),
        parents={v: parents[v] for v in order},
        exposure="X",
        outcome="Y",
        collider="C",
        left_cause=left,
        right_cause=right,
        collider_child="D" if kind.has_child_d else None,
    )


# Structure fields that exist only for some kinds, with their presence rule.
_CONDITIONAL_FIELDS = ("p_x_given_a", "p_y_given_b", "p_d_given_c")


@dataclass(frozen=True)
class StructureParams:
    """Full parameterization of one structure instance.

    ``p_left`` and ``p_right`` are the marginal probabilities of the
    collider's left and right causes (P(X=1) or P(A=1), and P(Y=1) or
    P(B=1)).  For the Nabla structure the outcome is endogenous, so
    ``p_right`` must be absent and ``p_y_given_b`` holds P(Y=1 | X=x)
    instead of P(Y=1 | B=b).

    Construction performs lenient validation: every probability must lie in
    [0, 1] and fields not applicable to the kind must be absent.  Use
    :func:`validate` with ``strict=True`` to additionally require interior
    probabilities and non-degenerate C and D strata.
    """

    kind: StructureKind
    p_left: float
    p_c_given: ColliderCpt
    p_right: float | None = None
    p_x_given_a: EdgeCpt | None = None
    p_y_given_b: EdgeCpt | None = None
    p_d_given_c: EdgeCpt | None = None

    def __post_init__(self) -> None:
        kind = self.kind
        if kind is StructureKind.NABLA:
            if self.p_right is not None:
                raise ExtraFieldError(kind.value, "p_right")
        elif self.p_right is None:
            raise MissingFieldError(kind.value, "p_right")
        needs = {
            "p_x_given_a": kind.has_left_a,
            "p_y_given_b": kind.has_right_b or kind is StructureKind.NABLA,
            "p_d_given_c": kind.has_child_d,
        }
        for field_name, needed in needs.items():
            value = getattr(self, field_name)
            if needed and value is None:
                raise MissingFieldError(kind.value, field_name)
            if not needed and value is not None:
                raise ExtraFieldError(kind.value, field_name)
        for field_name, value in self._probability_items():
            if not (0.0 <= value <= 1.0) or math.isnan(value):
                raise OutOfRangeError(field_name, value)

    def _probability_items(self) -> Iterator[tuple[str, float]]:
        yield "p_left", self.p_left
        if self.p_right is not None:
            yield "p_right", self.p_right
        for key, value in self.p_c_given.items():
            yield f"p_c_given[{key}]", value
        for field_name in _CONDITIONAL_FIELDS:
            cpt = getattr(self, field_name)
            if cpt is not None:
                for key, value in cpt.items():
                    yield f"{field_name}[{key}]", value

    # -- implied marginals -------------------------------------------------

    def collider_parent_marginals(self) -> tuple[float, float]:
        """(P(left cause = 1), P(right cause = 1)).

        For Nabla the right cause is the endogenous Y, whose marginal is the
        X-mixture of p_y_given_b (which there holds P(Y=1 | X=x)).
        """
        if self.kind is StructureKind.NABLA:
            assert self.p_y_given_b is not None
            p_y = (
                self.p_left * self.p_y_given_b.given_1
                + (1.0 - self.p_left) * self.p_y_given_b.given_0
            )
            return self.p_left, p_y
        assert self.p_right is not None
        return self.p_left, self.p_right

    def prob_collider(self, c: int) -> float:
        """P(C=c) implied by the parameterization."""
        if self.kind is StructureKind.NABLA:
            assert self.p_y_given_b is not None
            total = 0.0
            for x in (0, 1):
                px = self.p_left if x else 1.0 - self.p_left
                for y in (0, 1):
                    py = self.p_y_given_b.level_given(y, x)
                    total += px * py * self.p_c_given.level_given(c, x, y)
            return total
        p_l, p_r = self.collider_parent_marginals()
        total = 0.0
        for left in (0, 1):
            pl = p_l if left else 1.0 - p_l
            for right in (0, 1):
                pr = p_r if right else 1.0 - p_r
                total += pl * pr * self.p_c_given.level_given(c, left, right)
        return total

    def prob_child(self, d: int) -> float:
        """P(D=d) implied by the parameterization (kinds with a child D)."""
        if self.p_d_given_c is None:
            raise MissingFieldError(self.kind.value, "p_d_given_c")
        pc1 = self.prob_collider(1)
        return pc1 * self.p_d_given_c.level_given(d, 1) + (1.0 - pc1) * self.p_d_given_c.level_given(d, 0)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        doc: dict = {
            "kind": self.kind.value,
            "p_left": self.p_left,
            "p_c_given": dict(self.p_c_given.items()),
        }
        if self.p_right is not None:
            doc["p_right"] = self.p_right
        for field_name in _CONDITIONAL_FIELDS:
            cpt = getattr(self, field_name)
            if cpt is not None:
                doc[field_name] = dict(cpt.items())
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(doc: Mapping) -> "StructureParams":
        return params_from_dict(doc)

    @staticmethod
    def from_json(text: str) -> "StructureParams":
        return params_from_dict(json.loads(text))


def _float_field(doc: Mapping, field: str) -> float:
    value = doc[field]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise OutOfRangeError(field, value)
    return float(value)


def _collider_cpt_from(doc: Mapping, field: str, kind: str) -> ColliderCpt:
    table = doc[field]
    if not isinstance(table, Mapping):
        raise ParameterError(f"{field} must be an object with keys 00/01/10/11")
    missing = {"00", "01", "10", "11"} - set(table)
    if missing:
        raise MissingFieldError(kind, f"{field}[{sorted(missing)[0]}]")
    extra = set(table) - {"00", "01", "10", "11"}
    if extra:
        raise ExtraFieldError(kind, f"{field}[{sorted(extra)[0]}]")
    return ColliderCpt(
        given_00=float(table["00"]),
        given_01=float(table["01"]),
        given_10=float(table["10"]),
        given_11=float(table["11"]),
    )


def _edge_cpt_from(doc: Mapping, field: str, kind: str) -> EdgeCpt:
    table = doc[field]
    if not isinstance(table, Mapping):
        raise ParameterError(f"{field} must be an object with keys 0/1")
    missing = {"0", "1"} - set(table)
    if missing:
        raise MissingFieldError(kind, f"{field}[{sorted(missing)[0]}]")
    extra = set(table) - {"0", "1"}
    if extra:
        raise ExtraFieldError(kind, f"{field}[{sorted(extra)[0]}]")
    return EdgeCpt(given_0=float(table["0"]), given_1=float(table["1"]))


def params_from_dict(doc: Mapping) -> StructureParams:
    """Parse the JSON parameter schema into a validated StructureParams."""
    if "kind" not in doc:
        raise MissingFieldError("?", "kind")
    try:
        kind = StructureKind(doc["kind"])
    except ValueError:
        raise ParameterError(f"unknown structure kind {doc['kind']!r}") from None
    allowed = {"kind", "p_left", "p_c_given"}
    if kind is not StructureKind.NABLA:
        allowed.add("p_right")
    if kind.has_left_a:
        allowed.add("p_x_given_a")
    if kind.has_right_b or kind is StructureKind.NABLA:
        allowed.add("p_y_given_b")
    if kind.has_child_d:
        allowed.add("p_d_given_c")
    extra = set(doc) - allowed
    if extra:
        raise ExtraFieldError(kind.value, sorted(extra)[0])
    missing = allowed - set(doc)
    if missing:
        raise MissingFieldError(kind.value, sorted(missing)[0])

    kwargs: dict = {
        "kind": kind,
        "p_left": _float_field(doc, "p_left"),
        "p_c_given": _collider_cpt_from(doc, "p_c_given", kind.value),
    }
    if "p_right" in doc:
        kwargs["p_right"] = _float_field(doc, "p_right")
    for field_name in _CONDITIONAL_FIELDS:
        if field_name in doc:
            kwargs[field_name] = _edge_cpt_from(doc, field_name, kind.value)
    return StructureParams(**kwargs)


def validate(params: StructureParams, strict: bool = False) -> StructureParams:
    """Check parameter invariants, returning the params unchanged on success.

    Lenient mode repeats the construction-time checks (range and field
    presence).  Strict mode additionally requires every probability to lie in
    the open interval (0, 1) and both collider strata -- and child strata,
    where applicable -- to have positive implied probability, so that all
    conditional quantities used by the ratio scales exist.
    """
    # Frozen dataclass construction already ran the lenient checks; re-run the
    # range scan so hand-built subclasses or replaced fields cannot slip by.
    for field_name, value in params._probability_items():
        if not (0.0 <= value <= 1.0) or math.isnan(value):
            raise OutOfRangeError(field_name, value)
    if not strict:
        return params
    for c in (0, 1):
        if params.prob_collider(c) <= 0.0:
            raise DegenerateStratumError("C", c)
    if params.kind.has_child_d:
        for d in (0, 1):
            if params.prob_child(d) <= 0.0:
                raise DegenerateStratumError("D", d)
    for field_name, value in params._probability_items():
        if not (0.0 < value < 1.0):
            raise OutOfRangeError(field_name, value, open_interval=True)
    return params


def random_structure_params(
    kind: StructureKind,
    rng: np.random.Generator,
    low: float = 0.05,
    high: float = 0.95,
) -> StructureParams:
    """Draw a random strictly-valid parameter set for ``kind``.

    Every probability is uniform on [low, high] (default [0.05, 0.95], which
    keeps all implied strata safely non-degenerate).  Draw order is fixed --
    p_left, p_right (when applicable), the four collider entries in key order
    00/01/10/11, then p_x_given_a, p_y_given_b, p_d_given_c (each 0 then 1) --
    so a parameter set is reproducible from the generator state alone.
    """

    def u() -> float:
        return float(rng.uniform(low, high))

    p_left = u()
    p_right = None if kind is StructureKind.NABLA else u()
    cpt = ColliderCpt(given_00=u(), given_01=u(), given_10=u(), given_11=u())
    kwargs: dict = {
        "kind": kind,
        "p_left": p_left,
        "p_right": p_right,
        "p_c_given": cpt,
    }
    if kind.has_left_a:
        kwargs["p_x_given_a"] = EdgeCpt(given_0=u(), given_1=u())
    if kind.has_right_b or kind is StructureKind.NABLA:
        kwargs["p_y_given_b"] = EdgeCpt(given_0=u(), given_1=u())
    if kind.has_child_d:
        kwargs["p_d_given_c"] = EdgeCpt(given_0=u(), given_1=u())
    return StructureParams(**kwargs)
