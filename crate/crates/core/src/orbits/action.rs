use crate::geometry::{Point2, SE2Element};
use crate::tensor::KtParams;

pub fn apply_point(g: &SE2Element, pt: Point2) -> Point2 {
    g.apply(pt)
}

/// Pushforward of the tensor under the rigid motion `g`.
///
/// Writing `K(q) = A + B wᵀ + w Bᵀ + b6 w wᵀ` with `A = [[b1, b3], [b3, b2]]`,
/// `B = (b4, −b5)` and `w = (y, −x)`, the image is `R K(g⁻¹q) Rᵀ`. Since `w`
/// commutes with rotations, `R w(g⁻¹q) = w(q) − u` with `u = (p2, −p1)`, and
///
/// ```text
/// A' = R A Rᵀ − B' uᵀ − u B'ᵀ + b6 u uᵀ,   B' = R B,
/// B'' = B' − b6 u,                          b6'' = b6.
/// ```
pub fn act_on_kt(g: &SE2Element, params: &KtParams) -> KtParams {
    let [b1, b2, b3, b4, b5, b6] = params.to_array();
    let (s, c) = g.p3().sin_cos();
    let (u1, u2) = (g.p2(), -g.p1());

    // R A Rᵀ
    let ra11 = c * c * b1 - 2.0 * s * c * b3 + s * s * b2;
    let ra22 = s * s * b1 + 2.0 * s * c * b3 + c * c * b2;
    let ra12 = s * c * (b1 - b2) + (c * c - s * s) * b3;

    // B' = R B
    let (bb1, bb2) = (c * b4 + s * b5, s * b4 - c * b5);

    let a11 = ra11 - 2.0 * bb1 * u1 + b6 * u1 * u1;
    let a22 = ra22 - 2.0 * bb2 * u2 + b6 * u2 * u2;
    let a12 = ra12 - bb1 * u2 - bb2 * u1 + b6 * u1 * u2;

    let (n1, n2) = (bb1 - b6 * u1, bb2 - b6 * u2);
    KtParams::raw([a11, a22, a12, n1, -n2, b6])
}
