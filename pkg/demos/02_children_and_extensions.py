"""Conditioning on a child of the collider, and extended structures.

Two themes.  First, selecting on a noisy descendant D of the collider
still biases the X-Y association, attenuated by how well D tracks C; the
bias is an explicit contrast of the two embedded collider-stratum biases.
Second, when the exposure and outcome are merely children of the
collider's causes (the M family), the bias factorizes into the embedded
bias times the extension-path risk differences.
"""

from colliderbias import (
    BiasQuery,
    ColliderCpt,
    EdgeCpt,
    Scale,
    Stratum,
    StructureKind,
    StructureParams,
    bias,
    build_joint,
    extended_stratum_bias,
    v_stratum_bias,
    y_bias_from_embedded_v,
    y_stratum_bias,
)

cpt = ColliderCpt(given_00=0.15, given_01=0.25, given_10=0.25, given_11=0.75)

print("== conditioning on a child of the collider ==")
for fidelity, d_edge in [
    ("no signal ", EdgeCpt(given_0=0.45, given_1=0.45)),
    ("weak proxy", EdgeCpt(given_0=0.35, given_1=0.55)),
    ("good proxy", EdgeCpt(given_0=0.10, given_1=0.90)),
]:
    params = StructureParams(
        kind=StructureKind.Y, p_left=0.5, p_right=0.5, p_c_given=cpt, p_d_given_c=d_edge
    )
    value = y_stratum_bias(params, 1, Scale.COV).value
    contrast = y_bias_from_embedded_v(params, 1)
    print(f"  {fidelity}: cov bias in D=1 stratum = {value:+.6f} "
          f"(embedded contrast {contrast:+.6f})")

embedded = StructureParams(kind=StructureKind.V, p_left=0.5, p_right=0.5, p_c_given=cpt)
print(f"  embedded stratum bias at C=1 for comparison: "
      f"{v_stratum_bias(embedded, 1, Scale.COV).value:+.6f}")
print()

print("== extensions: exposure and outcome one step removed ==")
m_params = StructureParams(
    kind=StructureKind.M,
    p_left=0.4,           # P(A=1)
    p_right=0.6,          # P(B=1)
    p_c_given=cpt,        # collider given (A, B)
    p_x_given_a=EdgeCpt(given_0=0.3, given_1=0.8),
    p_y_given_b=EdgeCpt(given_0=0.2, given_1=0.7),
)
table = build_joint(m_params)
for scale in (Scale.COV, Scale.RD):
    report = extended_stratum_bias(m_params, 1, scale)
    oracle = bias(table, BiasQuery(Stratum("C", 1), scale)).value
    pieces = [f"embedded {report.factors['embedded_value']:+.5f}"]
    pieces.append(f"rd_left {report.factors['rd_left']:+.2f}")
    pieces.append(f"rd_right {report.factors['rd_right']:+.2f}")
    if "variance_ratio" in report.factors:
        pieces.append(f"vr {report.factors['variance_ratio']:.4f}")
    print(f"  M, C=1, {scale.value:>3s}: {report.value:+.6f} "
          f"(oracle {oracle:+.6f}) = {' * '.join(pieces)}")
print()
print("weakening either extension edge shrinks the bias; flipping an edge's")
print("direction flips the sign of the transmitted bias:")
flipped = StructureParams(
    kind=StructureKind.M,
    p_left=0.4,
    p_right=0.6,
    p_c_given=cpt,
    p_x_given_a=EdgeCpt(given_0=0.8, given_1=0.3),  # negative A -> X edge
    p_y_given_b=EdgeCpt(given_0=0.2, given_1=0.7),
)
print(f"  same instance with reversed left edge: "
      f"{extended_stratum_bias(flipped, 1, Scale.COV).value:+.6f}")
