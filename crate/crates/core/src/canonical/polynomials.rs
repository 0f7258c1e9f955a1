//! Closed-form loop polynomials of the canonical graphs.

use num_complex::Complex64;

type C = Complex64;

fn one() -> C {
    C::new(1.0, 0.0)
}

/// Θ-graph: `1 + Y₁Y₂ + Y₂Y₃ + Y₃Y₁`.
pub fn p_theta(y1: C, y2: C, y3: C) -> C {
    one() + y1 * y2 + y2 * y3 + y3 * y1
}

/// Tetrahedral graph with links labelled so that `ℓ` and `ℓ + 3` are opposite
/// (`Y₁ … Y₆` in slots `0 … 5`).
pub fn p_tetrahedral(y: &[C; 6]) -> C {
    let [y1, y2, y3, y4, y5, y6] = *y;
    one() + y1 * y2 * y6
        + y1 * y5 * y3
        + y4 * y2 * y3
        + y4 * y5 * y6
        + y1 * y2 * y4 * y5
        + y2 * y3 * y5 * y6
        + y1 * y3 * y4 * y6
}

/// Pyramid graph in terms of the squared base coupling `Y²` and the summit
/// coupling `Ỹ`.
pub fn p_pyramid(y2: C, yt: C) -> C {
    let yt2 = yt * yt;
    one() + yt2 * yt2 + 4.0 * yt * y2 * (one() + yt2) + 2.0 * yt2 * y2 * (2.0 + y2)
}

/// Cube graph with homogeneous coupling: `1 + 6Y⁴ + 16Y⁶ + 9Y⁸`.
pub fn p_cube_homogeneous(y: C) -> C {
    let y2 = y * y;
    let y4 = y2 * y2;
    one() + 6.0 * y4 + 16.0 * y4 * y2 + 9.0 * y4 * y4
}

/// Double-pyramid (octahedral) graph with homogeneous coupling.
pub fn p_double_pyramid_graph(y: C) -> C {
    let y2 = y * y;
    (one() + y).powu(4)
        * (one() + y2).powu(2)
        * (one() - 4.0 * y + 8.0 * y2 - 4.0 * y2 * y + y2 * y2)
}

/// Cube graph with the five symmetry classes of the flexible double pyramid.
/// The side-edge couplings enter only through their squares.
pub fn p_cube_classes(u: C, d: C, s: C, su2: C, sd2: C) -> C {
    let s2 = s * s;
    s2 * (sd2 + su2).powu(2)
        + (one() + sd2 * su2).powu(2)
        + 2.0 * s * u * su2 * (one() + sd2).powu(2)
        + 2.0 * s * d * sd2 * (one() + su2).powu(2)
        + 4.0 * u * d * su2 * sd2
        + 4.0 * u * d * s2 * su2 * sd2
}

/// Prismatic torus, normalized so that the constant term is 1 (the raw spin
/// sum is `2^{12}` times this).
pub fn p_torus(y: C, hi: C, he: C, vi: C, ve: C) -> C {
    let q = |x: C| x * x - x + 1.0;
    let p = |x: C| x * x + x + 1.0;
    let (a, b) = (hi, he);
    let (a2, b2) = (a * a, b * b);
    let (a4, b4) = (a2 * a2, b2 * b2);
    let (a6, b6) = (a4 * a2, b4 * b2);
    let big_a = y.powu(4) - 2.0 * y.powu(3) + 5.0 * y * y - 2.0 * y + 1.0;
    let big_b = (y * y - 5.0 * y + 1.0) * q(y);
    let c = ve * (vi * (ve + vi + 2.0) + 1.0) + vi;
    let m = ve * ve * (vi * (big_a * vi - big_b) + big_a)
        + ve * (vi * (5.0 * big_a - big_b * vi) - big_b)
        + vi * (big_a * vi - big_b)
        + big_a;
    let qy = q(y);
    let t1 = b6 * a2 * q(ve) * (qy * qy * a4 * q(vi) + 6.0 * y * qy * a2 * vi + 3.0 * y * y * p(vi));
    let t2 = 3.0
        * b4
        * (2.0 * y * p(y) * a2 * c + 2.0 * y * qy * a6 * ve * q(vi) + a4 * m + y * y * p(ve) * q(vi));
    let t3 = 3.0
        * b2
        * (y * y * a6 * p(ve) * q(vi) + 2.0 * y * p(y) * a4 * c + a2 * m + 2.0 * y * qy * ve * q(vi));
    let t4 = q(ve) * (3.0 * y * y * a4 * p(vi) + 6.0 * y * qy * a2 * vi + qy * qy * q(vi));
    (y + 1.0).powu(2) * (ve + 1.0) * (vi + 1.0) * (t1 + t2 + t3 + t4)
}
