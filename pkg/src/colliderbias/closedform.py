"""Closed-form collider bias expressions.

Each evaluator computes one analytic bias formula exactly as written, with
no algebraic rearrangement, and returns a :class:`BiasReport` carrying the
decomposition factors actually used.  Several evaluators end with a
self-check against either an internal identity or the brute-force joint
oracle; those checks are cheap (at most 2^6 cells) and raise AssertionError
on disagreement, which would indicate a formula transcription bug.

Vocabulary used throughout:

* cross-product difference of the collider table at level c:
  P(C=c|0,0)P(C=c|1,1) - P(C=c|1,0)P(C=c|0,1).  Its sign is the sign of the
  stratum bias; it is zero exactly when the two causes do not interact on
  the risk-ratio scale in producing C=c.
* lm kernel: the negated product of the two causes' marginal effects on the
  collider; it carries the sign (and part of the magnitude) of the bias due
  to linear-regression adjustment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from . import joint as joint_mod
from .errors import (
    DegenerateStratumError,
    ParameterError,
    UndefinedRatioError,
)
from .structures import (
    LINEAR_MODEL,
    ColliderCpt,
    Conditioning,
    Scale,
    Sign,
    Stratum,
    StructureKind,
    StructureParams,
)

# Sign classification bands: a value within SIGN_TOL of the null point is
# reported as Zero rather than guessed.  The null point is 1 on the OR scale
# (with a 10x wider band, since OR is a ratio of products), 0 elsewhere.
SIGN_TOL = 1e-12
SIGN_TOL_OR = 1e-11

# Internal self-checks compare two routes to the same number; they are not
# acceptance tolerances, just generous guards against transcription bugs.
_CHECK_REL = 1e-9
_CHECK_ABS = 1e-12

_EXTENDED_KINDS = frozenset(
    {
        StructureKind.M,
        StructureKind.LEFT_M,
        StructureKind.RIGHT_M,
        StructureKind.LONG_M,
        StructureKind.LEFT_LONG_M,
        StructureKind.RIGHT_LONG_M,
    }
)


def classify_sign(value: float, scale: Scale) -> Sign:
    """Negative/Zero/Positive relative to the scale's null point."""
    if scale is Scale.OR:
        delta = value - 1.0
        tol = SIGN_TOL_OR
    else:
        delta = value
        tol = SIGN_TOL
    if abs(delta) <= tol:
        return Sign.ZERO
    return Sign.POSITIVE if delta > 0 else Sign.NEGATIVE


@dataclass(frozen=True)
class BiasReport:
    """Value, sign and decomposition factors of one closed-form bias."""

    value: float
    scale: Scale
    conditioning: Conditioning
    sign: Sign
    factors: Mapping[str, float]

    def __post_init__(self) -> None:
        for name, factor in self.factors.items():
            if not math.isfinite(factor):
                raise AssertionError(f"non-finite factor {name} = {factor!r}")


def _require_kind(params: StructureParams, *kinds: StructureKind) -> None:
    if params.kind not in kinds:
        wanted = ", ".join(k.value for k in kinds)
        raise ParameterError(f"operation requires kind in {{{wanted}}}, got {params.kind.value}")


def cross_product_difference(p_c_given: ColliderCpt, level: int) -> float:
    """P(C=c|00)P(C=c|11) - P(C=c|10)P(C=c|01) at c = level."""
    t = p_c_given
    return (
        t.level_given(level, 0, 0) * t.level_given(level, 1, 1)
        - t.level_given(level, 1, 0) * t.level_given(level, 0, 1)
    )


def v_stratum_bias(params: StructureParams, level: int, scale: Scale) -> BiasReport:
    """Bias of the X-Y association in the V structure within stratum C=level.

    cov:  var-product of the cause marginals times the cross-product
          difference, divided by P(C=c)^2.
    rd:   outcome var times the cross-product difference, divided by
          P(C=c|X=1) P(C=c|X=0).
    or:   P(C=c|00)P(C=c|11) / {P(C=c|10)P(C=c|01)}.
    """
    _require_kind(params, StructureKind.V)
    assert params.p_right is not None
    g = cross_product_difference(params.p_c_given, level)
    t = params.p_c_given
    p_x1, p_y1 = params.p_left, params.p_right
    p_x0, p_y0 = 1.0 - p_x1, 1.0 - p_y1
    p_c = params.prob_collider(level)
    factors = {"cross_product_diff": g, "p_stratum": p_c}

    if scale is Scale.COV:
        if p_c <= 0.0:
            raise DegenerateStratumError("C", level)
        value = p_x1 * p_x0 * p_y1 * p_y0 * g / (p_c * p_c)
    elif scale is Scale.RD:
        c_given_x1 = p_y1 * t.level_given(level, 1, 1) + p_y0 * t.level_given(level, 1, 0)
        c_given_x0 = p_y1 * t.level_given(level, 0, 1) + p_y0 * t.level_given(level, 0, 0)
        if c_given_x1 * c_given_x0 <= 0.0:
            raise UndefinedRatioError(f"P(C={level} | X=x) = 0 for some x")
        value = p_y1 * p_y0 * g / (c_given_x1 * c_given_x0)
    elif scale is Scale.OR:
        denom = t.level_given(level, 1, 0) * t.level_given(level, 0, 1)
        if denom <= 0.0:
            raise UndefinedRatioError(f"P(C={level}|10) P(C={level}|01) = 0")
        value = t.level_given(level, 0, 0) * t.level_given(level, 1, 1) / denom
    else:
        raise ParameterError(f"no closed stratum form on scale {scale.value}")
    return BiasReport(
        value=value,
        scale=scale,
        conditioning=Stratum("C", level),
        sign=classify_sign(value, scale),
        factors=factors,
    )


def nabla_or_bias_factor(params: StructureParams, level: int) -> BiasReport:
    """Multiplicative OR-scale bias factor for the Nabla structure.

    The X-Y odds ratio conditional on C=level equals the marginal odds ratio
    times this factor, which depends only on the collider table; the V
    result is the special case with marginal OR equal to 1.  The identity is
    re-checked here against the joint oracle.
    """
    _require_kind(params, StructureKind.NABLA)
    t = params.p_c_given
    denom = t.level_given(level, 1, 0) * t.level_given(level, 0, 1)
    if denom <= 0.0:
        raise UndefinedRatioError(f"P(C={level}|10) P(C={level}|01) = 0")
    value = t.level_given(level, 0, 0) * t.level_given(level, 1, 1) / denom

    table = joint_mod.build_joint(params)
    conditional = joint_mod.cond_measure(table, Scale.OR, Stratum("C", level)).value
    marginal = joint_mod.cond_measure(table, Scale.OR, None).value
    assert math.isclose(conditional, marginal * value, rel_tol=_CHECK_REL), (
        "conditional OR does not factor into marginal OR times the bias factor"
    )
    return BiasReport(
        value=value,
        scale=Scale.OR,
        conditioning=Stratum("C", level),
        sign=classify_sign(value, Scale.OR),
        factors={"marginal_or": marginal, "conditional_or": conditional},
    )


def _child_mixture(params: StructureParams, d: int, left: int, right: int) -> float:
    """P(D=d | collider parents = (left, right)), mixing over C."""
    assert params.p_d_given_c is not None
    t = params.p_c_given
    return t.level_given(1, left, right) * params.p_d_given_c.level_given(d, 1) + t.level_given(
        0, left, right
    ) * params.p_d_given_c.level_given(d, 0)


def y_stratum_bias(params: StructureParams, level: int, scale: Scale) -> BiasReport:
    """Bias of the X-Y association in the Y structure within stratum D=level.

    All three forms are driven by the child-effect contrast
    P(D=d|C=1) - P(D=d|C=0) and the two cross-product differences of the
    collider table; when the child carries no information about the collider
    the bias vanishes on every scale.
    """
    _require_kind(params, StructureKind.Y)
    assert params.p_right is not None and params.p_d_given_c is not None
    t = params.p_c_given
    d = level
    pd1 = params.p_d_given_c.level_given(d, 1)  # P(D=d | C=1)
    pd0 = params.p_d_given_c.level_given(d, 0)  # P(D=d | C=0)
    g1 = cross_product_difference(t, 1)
    g0 = cross_product_difference(t, 0)
    core = (pd1 - pd0) * (pd1 * g1 - pd0 * g0)
    p_x1, p_y1 = params.p_left, params.p_right
    p_x0, p_y0 = 1.0 - p_x1, 1.0 - p_y1
    p_d = params.prob_child(d)
    factors = {
        "cross_product_diff_c1": g1,
        "cross_product_diff_c0": g0,
        "child_effect": pd1 - pd0,
        "p_stratum": p_d,
    }

    if scale is Scale.COV:
        if p_d <= 0.0:
            raise DegenerateStratumError("D", d)
        value = p_x1 * p_x0 * p_y1 * p_y0 / (p_d * p_d) * core
    elif scale is Scale.RD:
        d_given_x1 = p_y1 * _child_mixture(params, d, 1, 1) + p_y0 * _child_mixture(params, d, 1, 0)
        d_given_x0 = p_y1 * _child_mixture(params, d, 0, 1) + p_y0 * _child_mixture(params, d, 0, 0)
        if d_given_x1 * d_given_x0 <= 0.0:
            raise UndefinedRatioError(f"P(D={d} | X=x) = 0 for some x")
        value = p_y1 * p_y0 * core / (d_given_x1 * d_given_x0)
    elif scale is Scale.OR:
        num = (pd1 - pd0) * (
            pd1 * t.level_given(1, 0, 0) * t.level_given(1, 1, 1)
            - pd0 * t.level_given(0, 0, 0) * t.level_given(0, 1, 1)
        ) + pd1 * pd0
        den = (pd1 - pd0) * (
            pd1 * t.level_given(1, 1, 0) * t.level_given(1, 0, 1)
            - pd0 * t.level_given(0, 1, 0) * t.level_given(0, 0, 1)
        ) + pd1 * pd0
        if den <= 0.0:
            raise UndefinedRatioError(f"odds-ratio denominator vanishes at D={d}")
        value = num / den
    else:
        raise ParameterError(f"no closed stratum form on scale {scale.value}")
    return BiasReport(
        value=value,
        scale=scale,
        conditioning=Stratum("D", d),
        sign=classify_sign(value, scale),
        factors=factors,
    )


def y_bias_from_embedded_v(params: StructureParams, level: int) -> float:
    """Covariance-scale Y-structure bias written as a contrast of the two
    embedded V-structure stratum biases:

        (pd1 - pd0) / P(D=d)^2 * [ pd1 P(C=1)^2 Vbias(C=1, cov)
                                 - pd0 P(C=0)^2 Vbias(C=0, cov) ]

    with pdc = P(D=d | C=c).  The result is checked against the direct
    stratum formula before being returned.
    """
    _require_kind(params, StructureKind.Y)
    assert params.p_d_given_c is not None
    d = level
    p_d = params.prob_child(d)
    if p_d <= 0.0:
        raise DegenerateStratumError("D", d)
    embedded = StructureParams(
        kind=StructureKind.V,
        p_left=params.p_left,
        p_right=params.p_right,
        p_c_given=params.p_c_given,
    )
    pd1 = params.p_d_given_c.level_given(d, 1)
    pd0 = params.p_d_given_c.level_given(d, 0)
    pc1 = params.prob_collider(1)
    pc0 = params.prob_collider(0)
    value = (pd1 - pd0) / (p_d * p_d) * (
        pd1 * pc1 * pc1 * v_stratum_bias(embedded, 1, Scale.COV).value
        - pd0 * pc0 * pc0 * v_stratum_bias(embedded, 0, Scale.COV).value
    )
    direct = y_stratum_bias(params, d, Scale.COV).value
    assert math.isclose(value, direct, rel_tol=_CHECK_REL, abs_tol=_CHECK_ABS), (
        "embedded-V contrast disagrees with the direct stratum formula"
    )
    return value


def embedded_core(params: StructureParams) -> StructureParams:
    """The V or Y structure sitting inside an extended structure.

    The core keeps the collider table and the cause marginals; the causes
    are simply renamed to the exposure/outcome slots of the core.
    """
    _require_kind(params, *_EXTENDED_KINDS)
    if params.kind.has_child_d:
        return StructureParams(
            kind=StructureKind.Y,
            p_left=params.p_left,
            p_right=params.p_right,
            p_c_given=params.p_c_given,
            p_d_given_c=params.p_d_given_c,
        )
    return StructureParams(
        kind=StructureKind.V,
        p_left=params.p_left,
        p_right=params.p_right,
        p_c_given=params.p_c_given,
    )


def extension_rds(params: StructureParams) -> tuple[float, float]:
    """(left, right) extension-path risk differences; 1 where there is no
    extension edge on that side."""
    rd_left = params.p_x_given_a.risk_difference if params.p_x_given_a is not None else 1.0
    rd_right = params.p_y_given_b.risk_difference if params.p_y_given_b is not None else 1.0
    return rd_left, rd_right


def extension_variance_ratio(params: StructureParams, level: int) -> float:
    """var(A | G=g) / var(X | G=g) for structures whose exposure hangs off a
    left cause A, with G the conditioning variable; 1 for right-only
    extensions.

    Evaluated from the closed mixture expressions, not from the joint table
    (the joint-based ratio is what the oracle tests compare against).
    """
    _require_kind(params, *_EXTENDED_KINDS)
    if not params.kind.has_left_a:
        return 1.0
    assert params.p_x_given_a is not None and params.p_right is not None
    p_a1 = params.p_left
    p_a0 = 1.0 - p_a1
    t = params.p_c_given
    p_r1 = params.p_right
    p_r0 = 1.0 - p_r1

    def stratum_given_a(a: int) -> float:
        # P(G=level | A=a), with G = C or D depending on the kind.
        if params.kind.has_child_d:
            return p_r1 * _child_mixture(params, level, a, 1) + p_r0 * _child_mixture(
                params, level, a, 0
            )
        return p_r1 * t.level_given(level, a, 1) + p_r0 * t.level_given(level, a, 0)

    g_a1 = stratum_given_a(1)
    g_a0 = stratum_given_a(0)
    x1 = params.p_x_given_a.given_1
    x0 = params.p_x_given_a.given_0
    num = p_a1 * g_a1 * p_a0 * g_a0
    den = (x1 * p_a1 * g_a1 + x0 * p_a0 * g_a0) * (
        (1.0 - x1) * p_a1 * g_a1 + (1.0 - x0) * p_a0 * g_a0
    )
    if den <= 0.0:
        raise UndefinedRatioError("var(X | stratum) = 0")
    return num / den


def extended_stratum_bias(params: StructureParams, level: int, scale: Scale) -> BiasReport:
    """Stratum bias for the six extended structures (cov and rd scales).

    The bias factors into the embedded V- or Y-structure bias times the
    extension-path risk differences, plus (on the rd scale, for left-side
    extensions) the conditional variance ratio of the left cause to the
    exposure.
    """
    _require_kind(params, *_EXTENDED_KINDS)
    if scale not in (Scale.COV, Scale.RD):
        raise ParameterError(
            f"no closed stratum form on scale {scale.value} for extended structures"
        )
    core = embedded_core(params)
    if core.kind is StructureKind.Y:
        inner = y_stratum_bias(core, level, scale)
    else:
        inner = v_stratum_bias(core, level, scale)
    rd_left, rd_right = extension_rds(params)
    factors = dict(inner.factors)
    factors.update(
        {"embedded_value": inner.value, "rd_left": rd_left, "rd_right": rd_right}
    )
    value = rd_left * inner.value * rd_right
    if scale is Scale.RD:
        vr = extension_variance_ratio(params, level)
        value *= vr
        factors["variance_ratio"] = vr
    conditioning = Stratum(params.kind.conditioning_variable, level)
    return BiasReport(
        value=value,
        scale=scale,
        conditioning=conditioning,
        sign=classify_sign(value, scale),
        factors=factors,
    )


def lm_bias_kernel(params: StructureParams) -> float:
    """Negated product of the collider causes' marginal effects on it.

    With (p_l, p_r) the marginal probabilities of the collider's actual
    parents and the collider table at level 1:

        -[p_l (p11 - p10) + (1-p_l)(p01 - p00)]
         * [p_r (p11 - p01) + (1-p_r)(p10 - p00)]

    The first bracket is the right parent's marginal effect on the collider
    and the second the left parent's; either parent being marginally
    independent of the collider kills the kernel.  Also equal to the
    stratum-size-weighted mixture of the two cross-product differences,
    P(C=0) times the level-1 difference plus P(C=1) times the level-0
    difference, which is re-checked here.
    """
    if params.kind is StructureKind.NABLA:
        raise ParameterError("lm kernel is undefined for the Nabla structure")
    t = params.p_c_given
    p_l, p_r = params.collider_parent_marginals()
    right_effect = p_l * (t.given_11 - t.given_10) + (1.0 - p_l) * (t.given_01 - t.given_00)
    left_effect = p_r * (t.given_11 - t.given_01) + (1.0 - p_r) * (t.given_10 - t.given_00)
    value = -right_effect * left_effect

    pc1 = params.prob_collider(1)
    mixture = (1.0 - pc1) * cross_product_difference(t, 1) + pc1 * cross_product_difference(t, 0)
    assert math.isclose(value, mixture, rel_tol=_CHECK_REL, abs_tol=_CHECK_ABS), (
        "lm kernel disagrees with its stratum-size mixture identity"
    )
    return value


def lm_stratum_weights(params: StructureParams) -> tuple[float, float]:
    """(w1, w0): the variance-times-size weights that average the two
    stratum risk differences into the adjusted regression coefficient,
    normalized to sum to 1.  The conditioning variable is C or D per kind.
    """
    table = joint_mod.build_joint(params)
    g_name = params.kind.conditioning_variable
    g1 = table.expectation(g_name)
    g0 = 1.0 - g1
    x_and_g1 = table.expectation("X", g_name)
    x1 = table.expectation("X")
    raw1 = g0 * x_and_g1 * (g1 - x_and_g1)
    raw0 = g1 * (x1 - x_and_g1) * (1.0 - x1 - (g1 - x_and_g1))
    total = raw1 + raw0
    if total <= 0.0:
        raise DegenerateStratumError(g_name, 1 if raw1 <= 0 else 0)
    return raw1 / total, raw0 / total


def v_lm_bias(params: StructureParams) -> BiasReport:
    """Bias of the X coefficient when Y is regressed on {1, X, C} in the V
    structure.

    The value is the lm kernel times the outcome variance, divided by the
    two-term mixture of within-stratum design products; it equals the
    variance-weighted average of the two stratum risk differences, which is
    re-checked here.
    """
    _require_kind(params, StructureKind.V)
    assert params.p_right is not None
    t = params.p_c_given
    p_x1, p_y1 = params.p_left, params.p_right
    p_x0, p_y0 = 1.0 - p_x1, 1.0 - p_y1
    kernel = lm_bias_kernel(params)
    denominator = p_x1 * (t.given_11 * p_y1 + t.given_10 * p_y0) * (
        (1.0 - t.given_11) * p_y1 + (1.0 - t.given_10) * p_y0
    ) + p_x0 * (t.given_01 * p_y1 + t.given_00 * p_y0) * (
        (1.0 - t.given_01) * p_y1 + (1.0 - t.given_00) * p_y0
    )
    if denominator <= 0.0:
        raise DegenerateStratumError("C", 1)
    value = kernel * p_y1 * p_y0 / denominator

    w1, w0 = lm_stratum_weights(params)
    averaged = w1 * v_stratum_bias(params, 1, Scale.RD).value + w0 * v_stratum_bias(
        params, 0, Scale.RD
    ).value
    assert math.isclose(value, averaged, rel_tol=_CHECK_REL, abs_tol=_CHECK_ABS), (
        "lm bias disagrees with the weighted average of stratum risk differences"
    )
    return BiasReport(
        value=value,
        scale=Scale.LM_COEF,
        conditioning=LINEAR_MODEL,
        sign=classify_sign(value, Scale.LM_COEF),
        factors={"lm_kernel": kernel, "weight_1": w1, "weight_0": w0},
    )


def lm_weight_normalizer(params: StructureParams) -> float:
    """Closed form of the normalizing constant of the lm stratum weights.

    Definitionally P(G=0) P(G=1,X=1) P(G=1,X=0) + P(G=1) P(G=0,X=1) P(G=0,X=0)
    with G the conditioning variable; there are four distinct closed
    expressions, shared pairwise by structures in which the exposure sits in
    the same position relative to the conditioning variable.
    """
    if params.kind is StructureKind.NABLA:
        raise ParameterError("lm weights are undefined for the Nabla structure")
    t = params.p_c_given
    kind = params.kind
    p_r1 = params.p_right
    assert p_r1 is not None
    p_r0 = 1.0 - p_r1

    if not kind.has_left_a:
        # Exposure X is itself the left cause of the collider.
        p_x1 = params.p_left
        p_x0 = 1.0 - p_x1
        if not kind.has_child_d:
            c1_x1 = t.given_11 * p_r1 + t.given_10 * p_r0
            c0_x1 = (1.0 - t.given_11) * p_r1 + (1.0 - t.given_10) * p_r0
            c1_x0 = t.given_01 * p_r1 + t.given_00 * p_r0
            c0_x0 = (1.0 - t.given_01) * p_r1 + (1.0 - t.given_00) * p_r0
            return p_x1 * p_x0 * (p_x1 * c1_x1 * c0_x1 + p_x0 * c1_x0 * c0_x0)

        def d_given_x(d: int, x: int) -> float:
            return p_r1 * _child_mixture(params, d, x, 1) + p_r0 * _child_mixture(params, d, x, 0)

        return p_x1 * p_x0 * (
            p_x1 * d_given_x(1, 1) * d_given_x(0, 1)
            + p_x0 * d_given_x(1, 0) * d_given_x(0, 0)
        )

    # Exposure X is a child of the left cause A.
    assert params.p_x_given_a is not None
    p_a1 = params.p_left
    p_a0 = 1.0 - p_a1
    x1 = params.p_x_given_a.given_1
    x0 = params.p_x_given_a.given_0
    p_x1 = p_a1 * x1 + p_a0 * x0
    p_x0 = p_a1 * (1.0 - x1) + p_a0 * (1.0 - x0)
    pc1 = (
        p_a1 * (p_r1 * t.given_11 + p_r0 * t.given_10)
        + p_a0 * (p_r1 * t.given_01 + p_r0 * t.given_00)
    )
    pc0 = (
        p_a1 * (p_r1 * (1.0 - t.given_11) + p_r0 * (1.0 - t.given_10))
        + p_a0 * (p_r1 * (1.0 - t.given_01) + p_r0 * (1.0 - t.given_00))
    )
    left_effect = p_r1 * (t.given_11 - t.given_01) + p_r0 * (t.given_10 - t.given_00)
    rd_x = params.p_x_given_a.risk_difference
    correction = (p_a1 * p_a0 * rd_x * left_effect) ** 2
    if not kind.has_child_d:
        return p_x1 * p_x0 * pc1 * pc0 - correction
    assert params.p_d_given_c is not None
    d_cpt = params.p_d_given_c
    pd1 = d_cpt.given_1 * pc1 + d_cpt.given_0 * pc0
    pd0 = (1.0 - d_cpt.given_1) * pc1 + (1.0 - d_cpt.given_0) * pc0
    return p_x1 * p_x0 * pd1 * pd0 - correction * d_cpt.risk_difference**2


def lm_bias(params: StructureParams) -> BiasReport:
    """Bias due to linear-regression adjustment, in one formula for all
    eight structures with marginally independent collider causes:

        kernel * rd_left * rd_right * rd_child^2 * var_left * var_right / phi

    where rd factors are 1 for absent extension/child edges, the variances
    are those of the collider's causes, and phi is the weight normalizer.
    The closed phi is re-checked against its definitional form computed from
    the joint table.
    """
    if params.kind is StructureKind.NABLA:
        raise ParameterError("no closed lm form for the Nabla structure")
    assert params.p_right is not None
    kernel = lm_bias_kernel(params)
    rd_left, rd_right = extension_rds(params)
    rd_child = (
        params.p_d_given_c.risk_difference if params.p_d_given_c is not None else 1.0
    )
    var_left = params.p_left * (1.0 - params.p_left)
    var_right = params.p_right * (1.0 - params.p_right)
    phi = lm_weight_normalizer(params)
    if phi <= 0.0:
        raise DegenerateStratumError(params.kind.conditioning_variable, 1)

    table = joint_mod.build_joint(params)
    g_name = params.kind.conditioning_variable
    g1 = table.expectation(g_name)
    xg1 = table.expectation("X", g_name)
    x1 = table.expectation("X")
    definitional = (1.0 - g1) * xg1 * (g1 - xg1) + g1 * (x1 - xg1) * (
        1.0 - x1 - g1 + xg1
    )
    assert math.isclose(phi, definitional, rel_tol=_CHECK_REL, abs_tol=_CHECK_ABS), (
        "closed weight normalizer disagrees with its definitional form"
    )

    value = kernel * rd_left * rd_right * rd_child**2 * var_left * var_right / phi
    return BiasReport(
        value=value,
        scale=Scale.LM_COEF,
        conditioning=LINEAR_MODEL,
        sign=classify_sign(value, Scale.LM_COEF),
        factors={
            "lm_kernel": kernel,
            "rd_left": rd_left,
            "rd_right": rd_right,
            "rd_child": rd_child,
            "var_left": var_left,
            "var_right": var_right,
            "lm_normalizer": phi,
        },
    )
