use alloc::vec::Vec;

use crate::forms::Tensor2;
use crate::math::sqrt;
use crate::space::{combine, ShapeValues};
use crate::system::Discretization;

/// `(‖u_h − u‖_{L²(Ω)}, |u_h − u|_{H¹(Ω)})` over the material region of
/// every domain. `exact(domain, x)` returns the value and gradient of `u`.
pub fn error_norms(
    disc: &Discretization,
    coeffs: &[f64],
    exact: impl Fn(usize, [f64; 2]) -> ([f64; 2], Tensor2),
) -> (f64, f64) {
    let mesh = &disc.problem().mesh;
    let basis = disc.basis();
    let mut shapes = ShapeValues::default();
    let mut dofs = Vec::new();
    let (mut l2, mut h1) = (0.0, 0.0);
    for domain in 0..disc.problem().domain_count() {
        for cr in disc.volume_rules(domain) {
            let cell = mesh.cell_box(cr.cell);
            disc.dofs().cell_dofs(domain, cr.cell, &mut dofs);
            for (&x, &w) in cr.rule.points.iter().zip(&cr.rule.weights) {
                basis.eval(&cell, x, &mut shapes);
                let uh = combine(&shapes, &dofs, coeffs);
                let (u, g) = exact(domain, x);
                for i in 0..2 {
                    l2 += w * (uh.value[i] - u[i]) * (uh.value[i] - u[i]);
                    for j in 0..2 {
                        h1 += w * (uh.gradient[i][j] - g[i][j]) * (uh.gradient[i][j] - g[i][j]);
                    }
                }
            }
        }
    }
    (sqrt(l2), sqrt(h1))
}

/// Measure of the material region of all domains.
pub fn material_area(disc: &Discretization) -> f64 {
    (0..disc.problem().domain_count())
        .flat_map(|d| disc.volume_rules(d).iter().map(|c| c.rule.measure()))
        .sum()
}
