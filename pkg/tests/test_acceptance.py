"""Acceptance suite.

Each test covers one acceptance criterion at its stated tolerance and
prints a single pass/fail line (run pytest with -s, or read captured
output).  The randomized criteria share one seeded verification battery:
1000 strict parameter draws per structure kind.
"""

import math
import time

import numpy as np
import pytest

from colliderbias import (
    LINEAR_MODEL,
    BiasQuery,
    ColliderCpt,
    Scale,
    Sign,
    Stratum,
    StructureKind,
    StructureParams,
    bias,
    build_joint,
    classify_effects,
    cross_product_difference,
    lm_bias,
    lm_bias_kernel,
    random_structure_params,
    sample,
    v_lm_bias,
    v_stratum_bias,
    v_stratum_sign,
    y_bias_from_embedded_v,
    y_stratum_bias,
)
from colliderbias.cli import main as cli_main
from colliderbias.signmap import Pattern
from colliderbias.verification import KindVerification, verify_kind

ABS_TOL = 1e-12
REL_TOL_OR = 1e-10
DRAWS = 1000
BASE_SEED = 977

ALL_KINDS = list(StructureKind)

REFERENCE_CPT = ColliderCpt(given_00=0.15, given_01=0.25, given_10=0.25, given_11=0.75)


@pytest.fixture(scope="session")
def battery() -> dict[StructureKind, KindVerification]:
    return {
        kind: verify_kind(kind, draws=DRAWS, seed=BASE_SEED + offset)
        for offset, kind in enumerate(ALL_KINDS)
    }


def _report(number: int, name: str, ok: bool) -> None:
    print(f"\nacceptance criterion {number} [{name}]: {'PASS' if ok else 'FAIL'}")


def _identity_ok(runs, names) -> tuple[bool, list[str]]:
    problems = []
    for kind, run in runs.items():
        present = {result.name for result in run.identities}
        for name in names:
            if name not in present:
                continue
            result = run.result(name)
            if not result.passed:
                problems.append(
                    f"{kind.value}/{name}: max {result.max_discrepancy:.3e} "
                    f"> tol {result.tolerance:g} in {result.failures} draws"
                )
    return not problems, problems


# -- criterion 1: closed forms match the oracle on 1000 draws per kind -------


def test_criterion_1_oracle_equivalence(battery):
    names = (
        "stratum_cov_vs_oracle",
        "stratum_rd_vs_oracle",
        "stratum_or_vs_oracle",
        "or_factor_vs_oracle",
        "lm_vs_oracle",
        "lm_two_routes_agree",
    )
    ok, problems = _identity_ok(battery, names)
    # every kind must actually exercise its applicable closed forms
    for kind, run in battery.items():
        present = {result.name for result in run.identities}
        if kind is StructureKind.NABLA:
            assert "or_factor_vs_oracle" in present
            continue
        assert "stratum_cov_vs_oracle" in present
        assert "stratum_rd_vs_oracle" in present
        assert "lm_vs_oracle" in present
        if kind in (StructureKind.V, StructureKind.Y):
            assert "stratum_or_vs_oracle" in present
        assert run.result("stratum_cov_vs_oracle").checked == 2 * DRAWS
    elapsed = sum(run.elapsed_seconds for run in battery.values())
    ok = ok and elapsed < 30.0
    _report(1, "oracle equivalence", ok)
    assert ok, problems + [f"battery elapsed {elapsed:.1f}s"]


# -- criterion 2: oracle-identity suite plus the mean-spread inequality ------


def test_criterion_2_identity_suite(battery):
    names = (
        "cov_bracket_identity",
        "rd_cov_ratio_identity",
        "lm_weighted_average_identity",
        "design_symmetry_identity",
    )
    ok, problems = _identity_ok(battery, names)
    for run in battery.values():
        for name in names:
            assert run.result(name).checked >= DRAWS

    # Mean-spread inequality: 0 < a' < a < b < b' with a'b' = ab forces
    # a' + b' > a + b.  Quadruples share a geometric mean by construction.
    rng = np.random.default_rng(BASE_SEED)
    checked = 0
    for _ in range(10_000):
        center = rng.uniform(0.05, 2.0)
        r = rng.uniform(1.0 + 1e-4, 5.0)
        r_wide = r * rng.uniform(1.0 + 1e-4, 3.0)
        a, b = center / r, center * r
        a_wide, b_wide = center / r_wide, center * r_wide
        assert 0 < a_wide < a < b < b_wide
        assert math.isclose(a_wide * b_wide, a * b, rel_tol=1e-12)
        if not a_wide + b_wide > a + b:
            ok = False
            problems.append(f"mean-spread inequality failed at {(a_wide, a, b, b_wide)}")
        checked += 1
    assert checked == 10_000
    _report(2, "identity suite", ok)
    assert ok, problems


# -- criterion 3: sign rules on draws targeted at their premises -------------


def _distinct_sorted(rng, n=4, gap=1e-3):
    while True:
        values = np.sort(rng.uniform(0.05, 0.95, size=n))
        if np.min(np.diff(values)) >= gap:
            return values


def _monotone_cpt(rng, increasing: bool) -> ColliderCpt:
    low, mid_a, mid_b, high = _distinct_sorted(rng)
    if rng.random() < 0.5:
        mid_a, mid_b = mid_b, mid_a
    if increasing:
        return ColliderCpt(given_00=low, given_01=mid_a, given_10=mid_b, given_11=high)
    return ColliderCpt(given_00=high, given_01=mid_a, given_10=mid_b, given_11=low)


def _opposite_cpt(rng) -> ColliderCpt:
    low, mid_a, mid_b, high = _distinct_sorted(rng)
    if rng.random() < 0.5:
        mid_a, mid_b = mid_b, mid_a
    if rng.random() < 0.5:
        # exposure raises P(C=1), outcome lowers it
        return ColliderCpt(given_00=mid_a, given_01=low, given_10=high, given_11=mid_b)
    return ColliderCpt(given_00=mid_a, given_01=high, given_10=low, given_11=mid_b)


def _qualitative_cpt(rng) -> ColliderCpt:
    while True:
        p00, p01, p10, p11 = rng.uniform(0.05, 0.95, size=4)
        x_at_y0 = p10 - p00
        x_at_y1 = p11 - p01
        if min(abs(x_at_y0), abs(x_at_y1)) >= 1e-3 and x_at_y0 * x_at_y1 < 0:
            return ColliderCpt(given_00=p00, given_01=p01, given_10=p10, given_11=p11)


def test_criterion_3_targeted_sign_rules():
    rng = np.random.default_rng(BASE_SEED + 100)
    ok = True
    problems = []

    for _ in range(DRAWS):
        increasing = bool(rng.random() < 0.5)
        cpt = _monotone_cpt(rng, increasing)
        pattern = classify_effects(cpt).pattern
        assert pattern is (Pattern.BOTH_POSITIVE if increasing else Pattern.BOTH_NEGATIVE)
        signs = {v_stratum_sign(cpt, 1), v_stratum_sign(cpt, 0)}
        if Sign.NEGATIVE not in signs:
            ok = False
            problems.append(f"monotone table without a negative stratum: {cpt}")
        params = StructureParams(
            kind=StructureKind.V,
            p_left=float(rng.uniform(0.05, 0.95)),
            p_right=float(rng.uniform(0.05, 0.95)),
            p_c_given=cpt,
        )
        if not lm_bias_kernel(params) < 0.0:
            ok = False
            problems.append(f"monotone table with non-negative lm kernel: {params}")

    for _ in range(DRAWS):
        cpt = _opposite_cpt(rng)
        assert classify_effects(cpt).pattern is Pattern.OPPOSITE_SIGNS
        signs = {v_stratum_sign(cpt, 1), v_stratum_sign(cpt, 0)}
        if Sign.POSITIVE not in signs:
            ok = False
            problems.append(f"opposite-effects table without a positive stratum: {cpt}")
        params = StructureParams(
            kind=StructureKind.V,
            p_left=float(rng.uniform(0.05, 0.95)),
            p_right=float(rng.uniform(0.05, 0.95)),
            p_c_given=cpt,
        )
        if not lm_bias_kernel(params) > 0.0:
            ok = False
            problems.append(f"opposite-effects table with non-positive lm kernel: {params}")

    for _ in range(DRAWS):
        cpt = _qualitative_cpt(rng)
        signs = {v_stratum_sign(cpt, 1), v_stratum_sign(cpt, 0)}
        if signs != {Sign.POSITIVE, Sign.NEGATIVE}:
            ok = False
            problems.append(f"qualitative table without opposite stratum signs: {cpt}")

    for _ in range(DRAWS):
        params = random_structure_params(StructureKind.Y, rng)
        for level in (0, 1):
            contrast = y_bias_from_embedded_v(params, level)
            direct = y_stratum_bias(params, level, Scale.COV).value
            if abs(contrast - direct) > ABS_TOL:
                ok = False
                problems.append(f"embedded-V contrast off by {abs(contrast - direct):.2e}")

    _report(3, "targeted sign rules", ok)
    assert ok, problems[:5]


# -- criterion 4: supplementary closed expressions ----------------------------


def test_criterion_4_supplementary_expressions(battery):
    ok, problems = _identity_ok(
        battery, ("lm_normalizer_identity", "variance_ratio_identity")
    )
    for kind, run in battery.items():
        if kind is StructureKind.NABLA:
            continue
        assert run.result("lm_normalizer_identity").checked == DRAWS
        if kind.has_left_a:
            assert run.result("variance_ratio_identity").checked == 2 * DRAWS
    _report(4, "supplementary expressions", ok)
    assert ok, problems


# -- criterion 5: the reference-point regression ------------------------------


def test_criterion_5_reference_point():
    params = StructureParams(
        kind=StructureKind.V, p_left=0.5, p_right=0.5, p_c_given=REFERENCE_CPT
    )
    table = build_joint(params)
    ok = True

    # cross-product difference at level 1, confirmed by the oracle identity
    # against P(C=0) g(1) + P(C=1) g(0) = kernel
    g1 = cross_product_difference(REFERENCE_CPT, 1)
    ok &= math.isclose(g1, 0.05, abs_tol=1e-15)

    # stratum odds-ratio bias factor, closed and oracle
    or_closed = v_stratum_bias(params, 1, Scale.OR).value
    or_oracle = bias(table, BiasQuery(Stratum("C", 1), Scale.OR)).value
    ok &= math.isclose(or_closed, 1.8, rel_tol=1e-14)
    ok &= math.isclose(or_oracle, 1.8, rel_tol=REL_TOL_OR)

    # positive sign at C=1 on all scales, closed and oracle
    for scale in (Scale.COV, Scale.RD, Scale.OR):
        closed = v_stratum_bias(params, 1, scale)
        ok &= closed.sign is Sign.POSITIVE
        oracle_value = bias(table, BiasQuery(Stratum("C", 1), scale)).value
        null = 1.0 if scale is Scale.OR else 0.0
        ok &= oracle_value > null

    # regression adjustment: negative value (both routes and oracle agree)
    lm_closed = v_lm_bias(params)
    lm_general = lm_bias(params)
    lm_oracle = bias(table, BiasQuery(LINEAR_MODEL)).value
    ok &= lm_closed.value < 0.0 and lm_general.value < 0.0 and lm_oracle < 0.0
    ok &= math.isclose(lm_closed.value, lm_oracle, abs_tol=ABS_TOL)
    ok &= math.isclose(lm_closed.value, -9.0 / 82.0, rel_tol=1e-13)

    # kernel: value and sign, cross-checked against its mixture identity
    kernel = lm_bias_kernel(params)
    mixture = (1 - 0.35) * g1 + 0.35 * cross_product_difference(REFERENCE_CPT, 0)
    ok &= math.isclose(kernel, -0.09, abs_tol=1e-15)
    ok &= math.isclose(kernel, mixture, abs_tol=1e-15)
    ok &= kernel < 0.0

    _report(5, "reference-point regression", ok)
    assert ok


# -- criterion 6: interaction-region containment ------------------------------


def test_criterion_6_interaction_containment():
    p00, p11 = 0.15, 0.75
    resolution = 200
    axis = (np.arange(resolution) + 0.5) / resolution
    special = [(p00, p11), (p11, p00)]
    cell_tol = 1.0 / resolution
    ok = True
    problems = []
    inspected = 0

    def odds(p: float) -> float:
        return p / (1.0 - p)

    odds_fixed = odds(p00) * odds(p11)
    for u in axis:
        for v in axis:
            if not (p00 < u < p11 and p00 < v < p11):
                continue
            inspected += 1
            rr = p00 * p11 - u * v
            rd = (p00 + p11) - (u + v)
            or_contrast = odds_fixed - odds(u) * odds(v)
            if or_contrast <= 0.0 or rd <= 0.0:
                near_special = any(
                    math.hypot(u - a, v - b) <= cell_tol for a, b in special
                )
                if rr > 0.0:
                    ok = False
                    problems.append(f"containment broken at ({u}, {v})")
                elif abs(rr) <= 1e-12 and not near_special:
                    ok = False
                    problems.append(f"unexpected zero at ({u}, {v})")
    assert inspected > 10_000
    _report(6, "interaction-region containment", ok)
    assert ok, problems[:5]


# -- criterion 7: Monte Carlo smoke -------------------------------------------


def test_criterion_7_monte_carlo_smoke():
    params = StructureParams(
        kind=StructureKind.V, p_left=0.5, p_right=0.5, p_c_given=REFERENCE_CPT
    )
    exact = build_joint(params).mass
    started = time.perf_counter()
    freq = sample(params, 1_000_000, seed=BASE_SEED)
    elapsed = time.perf_counter() - started
    worst = float(np.max(np.abs(freq.frequencies - exact)))
    ok = worst < 0.005 and elapsed < 10.0
    _report(7, "monte carlo smoke", ok)
    assert ok, f"worst cell deviation {worst:.4f}, elapsed {elapsed:.2f}s"


# -- criterion 8: byte determinism of verify and grid -------------------------


def test_criterion_8_determinism(tmp_path):
    pairs = []
    for label, argv in (
        (
            "verify",
            ["verify", "--kind", "LongM", "--draws", "50", "--seed", "42",
             "--format", "json"],
        ),
        (
            "grid",
            ["grid", "--family", "stratum", "--p-c00", "0.15", "--p-c11", "0.75",
             "--resolution", "200"],
        ),
    ):
        outputs = []
        for attempt in (1, 2):
            path = tmp_path / f"{label}-{attempt}"
            code = cli_main(argv + ["--out", str(path)])
            assert code == 0
            outputs.append(path.read_bytes())
        pairs.append((label, outputs[0] == outputs[1]))
    ok = all(same for _, same in pairs)
    _report(8, "determinism", ok)
    assert ok, pairs
