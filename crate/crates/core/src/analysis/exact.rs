use crate::forms::{stress, traction, Material, Tensor2};
use crate::math::{cos, sin};
use crate::system::ProblemData;

/// Closed-form solution of the elastic wave equation, possibly piecewise
/// over the domains of an interface problem.
pub trait ExactSolution {
    fn material(&self, domain: usize) -> &Material;

    fn displacement(&self, domain: usize, x: [f64; 2], t: f64) -> [f64; 2];

    fn velocity(&self, domain: usize, x: [f64; 2], t: f64) -> [f64; 2];

    /// `grad[i][j] = ∂u_i/∂x_j`.
    fn gradient(&self, domain: usize, x: [f64; 2], t: f64) -> Tensor2;

    fn body_force(&self, _domain: usize, _x: [f64; 2], _t: f64) -> [f64; 2] {
        [0.0; 2]
    }

    fn has_body_force(&self) -> bool {
        false
    }

    /// `σ(u)·n`.
    fn traction(&self, domain: usize, x: [f64; 2], n: [f64; 2], t: f64) -> [f64; 2] {
        traction(&self.gradient(domain, x, t), self.material(domain), n)
    }
}

/// Uses an exact solution as boundary and body data.
#[derive(Debug, Clone, Copy)]
pub struct ExactData<'a, E: ?Sized>(pub &'a E);

impl<E: ExactSolution + ?Sized> ProblemData for ExactData<'_, E> {
    fn body_force(&self, domain: usize, x: [f64; 2], t: f64) -> [f64; 2] {
        self.0.body_force(domain, x, t)
    }

    fn has_body_force(&self) -> bool {
        self.0.has_body_force()
    }

    fn dirichlet(&self, domain: usize, x: [f64; 2], t: f64) -> [f64; 2] {
        self.0.displacement(domain, x, t)
    }

    fn traction(&self, domain: usize, x: [f64; 2], n: [f64; 2], t: f64) -> [f64; 2] {
        self.0.traction(domain, x, n, t)
    }
}

/// P-wave `u = (cos(ω(t − x/c_p)), 0)` travelling in +x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub material: Material,
    pub omega: f64,
}

impl PlaneWave {
    pub fn new(material: Material, omega: f64) -> Self {
        Self { material, omega }
    }

    fn phase(&self, x: [f64; 2], t: f64) -> f64 {
        self.omega * (t - x[0] / self.material.cp())
    }
}

impl ExactSolution for PlaneWave {
    fn material(&self, _: usize) -> &Material {
        &self.material
    }

    fn displacement(&self, _: usize, x: [f64; 2], t: f64) -> [f64; 2] {
        [cos(self.phase(x, t)), 0.0]
    }

    fn velocity(&self, _: usize, x: [f64; 2], t: f64) -> [f64; 2] {
        [-self.omega * sin(self.phase(x, t)), 0.0]
    }

    fn gradient(&self, _: usize, x: [f64; 2], t: f64) -> Tensor2 {
        [[self.omega / self.material.cp() * sin(self.phase(x, t)), 0.0], [0.0, 0.0]]
    }
}

/// Normally incident P-wave on the flat interface `x = x_I`: incident and
/// reflected waves in domain 1 (`x < x_I`), transmitted wave in domain 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmission {
    pub materials: [Material; 2],
    pub omega: f64,
    pub interface_x: f64,
    pub reflection: f64,
    pub transmission: f64,
}

impl Transmission {
    /// Coefficients from continuity of displacement and normal traction:
    /// `1 + R = T` and `Z₁(1 − R) = Z₂ T` with `Z = ρ c_p`.
    pub fn new(materials: [Material; 2], omega: f64, interface_x: f64) -> Self {
        let (z1, z2) = (materials[0].impedance(), materials[1].impedance());
        Self {
            materials,
            omega,
            interface_x,
            reflection: (z1 - z2) / (z1 + z2),
            transmission: 2.0 * z1 / (z1 + z2),
        }
    }

    /// Domain containing `x`.
    pub fn domain_at(&self, x: [f64; 2]) -> usize {
        usize::from(x[0] > self.interface_x)
    }

    /// Phases and amplitudes `(a, φ, c)` of the waves making up the field of
    /// `domain`: `u_x = Σ a cos(φ)`, `∂φ/∂x = −ω s / c` for direction `s`.
    fn waves(&self, domain: usize, x: f64, t: f64) -> [(f64, f64, f64); 2] {
        let (c1, c2) = (self.materials[0].cp(), self.materials[1].cp());
        let w = self.omega;
        let xi = self.interface_x;
        if domain == 0 {
            [(1.0, w * (t - x / c1), c1), (self.reflection, w * (t + (x - 2.0 * xi) / c1), -c1)]
        } else {
            [(self.transmission, w * (t - xi / c1 - (x - xi) / c2), c2), (0.0, 0.0, 1.0)]
        }
    }
}

impl ExactSolution for Transmission {
    fn material(&self, domain: usize) -> &Material {
        &self.materials[domain]
    }

    fn displacement(&self, domain: usize, x: [f64; 2], t: f64) -> [f64; 2] {
        [self.waves(domain, x[0], t).iter().map(|&(a, p, _)| a * cos(p)).sum(), 0.0]
    }

    fn velocity(&self, domain: usize, x: [f64; 2], t: f64) -> [f64; 2] {
        [self.waves(domain, x[0], t).iter().map(|&(a, p, _)| -a * self.omega * sin(p)).sum(), 0.0]
    }

    fn gradient(&self, domain: usize, x: [f64; 2], t: f64) -> Tensor2 {
        let d = self.waves(domain, x[0], t).iter().map(|&(a, p, c)| a * self.omega / c * sin(p)).sum();
        [[d, 0.0], [0.0, 0.0]]
    }
}

/// Static field `û = (sin x sin y, cos x cos y)` with the body force
/// `f = −∇·σ(û) = 2μ û`, which holds because `û` is divergence free with
/// vanishing shear strain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticManufactured {
    pub material: Material,
}

impl ExactSolution for StaticManufactured {
    fn material(&self, _: usize) -> &Material {
        &self.material
    }

    fn displacement(&self, _: usize, x: [f64; 2], _: f64) -> [f64; 2] {
        [sin(x[0]) * sin(x[1]), cos(x[0]) * cos(x[1])]
    }

    fn velocity(&self, _: usize, _: [f64; 2], _: f64) -> [f64; 2] {
        [0.0; 2]
    }

    fn gradient(&self, _: usize, x: [f64; 2], _: f64) -> Tensor2 {
        let (sx, cx, sy, cy) = (sin(x[0]), cos(x[0]), sin(x[1]), cos(x[1]));
        [[cx * sy, sx * cy], [-sx * cy, -cx * sy]]
    }

    fn body_force(&self, domain: usize, x: [f64; 2], t: f64) -> [f64; 2] {
        let u = self.displacement(domain, x, t);
        [2.0 * self.material.mu * u[0], 2.0 * self.material.mu * u[1]]
    }

    fn has_body_force(&self) -> bool {
        true
    }
}

/// Relative finite-difference residual of `ρ ü − ∇·σ(u) − f` at one point,
/// together with the largest mismatch between the stated gradient and
/// velocity and their difference quotients.
pub fn fd_residual<E: ExactSolution + ?Sized>(exact: &E, domain: usize, x: [f64; 2], t: f64) -> f64 {
    let m = exact.material(domain);
    let dt = 1e-4;
    let dx = 1e-4;
    let u = |y: [f64; 2], s: f64| exact.displacement(domain, y, s);
    let sig = |y: [f64; 2]| stress(&exact.gradient(domain, y, t), m);
    let u0 = u(x, t);
    let (up, um) = (u(x, t + dt), u(x, t - dt));
    let mut worst = 0.0f64;
    let f = exact.body_force(domain, x, t);
    for i in 0..2 {
        let acc = (up[i] - 2.0 * u0[i] + um[i]) / (dt * dt);
        let mut div = 0.0;
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += dx;
            xm[j] -= dx;
            div += (sig(xp)[i][j] - sig(xm)[i][j]) / (2.0 * dx);
        }
        let scale = 1.0 + (m.rho * acc).abs() + div.abs();
        worst = worst.max((m.rho * acc - div - f[i]).abs() / scale);

        let v = exact.velocity(domain, x, t)[i];
        worst = worst.max((v - (up[i] - um[i]) / (2.0 * dt)).abs() / (1.0 + v.abs()));
        let g = exact.gradient(domain, x, t);
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += dx;
            xm[j] -= dx;
            let fd = (u(xp, t)[i] - u(xm, t)[i]) / (2.0 * dx);
            worst = worst.max((g[i][j] - fd).abs() / (1.0 + g[i][j].abs()));
        }
    }
    worst
}

/// Largest [`fd_residual`] over `count` pseudo-random points of the box
/// `[lo, hi]` and times in `[0, 2]`, each point assigned to `domain_of(x)`.
pub fn fd_self_check<E: ExactSolution + ?Sized>(
    exact: &E,
    lo: [f64; 2],
    hi: [f64; 2],
    count: usize,
    domain_of: impl Fn([f64; 2]) -> usize,
) -> f64 {
    let mut rng = super::spectral::XorShift::new(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let x = [lo[0] + rng.unit() * (hi[0] - lo[0]), lo[1] + rng.unit() * (hi[1] - lo[1])];
        let t = 2.0 * rng.unit();
        worst = worst.max(fd_residual(exact, domain_of(x), x, t));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_values() {
        let w = PlaneWave::new(Material::SANDSTONE, core::f64::consts::PI);
        let x = [0.7, -2.0];
        assert!((w.displacement(0, x, x[0] / w.material.cp())[0] - 1.0).abs() < 1e-15);
        assert!(fd_self_check(&w, [-3.0, -3.0], [3.0, 3.0], 100, |_| 0) < 1e-6);
    }

    #[test]
    fn transmission_identical_materials() {
        let m = Material::SANDSTONE;
        let s = Transmission::new([m, m], 1.0, 0.3);
        assert_eq!(s.reflection, 0.0);
        assert_eq!(s.transmission, 1.0);
    }

    #[test]
    fn transmission_jumps_vanish() {
        let s = Transmission::new([Material::SANDSTONE, Material::GRANITE], core::f64::consts::PI, 0.2);
        for k in 0..50 {
            let x = [0.2, -3.0 + 0.12 * k as f64];
            let t = 0.04 * k as f64;
            let (u1, u2) = (s.displacement(0, x, t), s.displacement(1, x, t));
            let (t1, t2) = (s.traction(0, x, [1.0, 0.0], t), s.traction(1, x, [1.0, 0.0], t));
            assert!((u1[0] - u2[0]).abs() < 1e-12 && (t1[0] - t2[0]).abs() < 1e-12 && t1[1] == 0.0);
        }
        assert!(fd_self_check(&s, [-3.0, -3.0], [3.0, 3.0], 100, |x| s.domain_at(x)) < 1e-6);
    }

    #[test]
    fn static_field_satisfies_equilibrium() {
        let s = StaticManufactured { material: Material::GRANITE };
        assert!(fd_self_check(&s, [-3.0, -3.0], [3.0, 3.0], 100, |_| 0) < 1e-6);
    }
}
