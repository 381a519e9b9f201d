use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math::cos;

/// One-dimensional rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (a + t * len, w * len))
    }
}

/// Legendre polynomial `P_n(x)` and `P_{n-1}(x)`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Gauss-Legendre rule with `n` points on `[0, 1]`, exact for polynomials of
/// degree `2n - 1`.
pub fn gauss_rule_1d(n: usize) -> Result<Rule1d> {
    if !(1..=30).contains(&n) {
        return Err(Error::InvalidParameter("Gauss rule needs 1 to 30 points"));
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Chebyshev-like initial guess, descending in [-1, 1]
        let mut x = cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(n, x);
            dp = nf * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, p_prev) = legendre_pair(n, x);
        if dp != 0.0 {
            dp = nf * (x * p - p_prev) / (x * x - 1.0);
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes.push(0.5 * (1.0 - x));
        weights.push(0.5 * w);
    }
    // symmetric cleanup so mirrored nodes agree to the last bit
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let t = 0.5 * (nodes[i] + (1.0 - nodes[j]));
        nodes[i] = t;
        nodes[j] = 1.0 - t;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    Ok(Rule1d { nodes, weights })
}

/// Number of Gauss points needed to integrate degree `degree` exactly.
pub fn points_for_degree(degree: usize) -> usize {
    degree / 2 + 1
}

/// Gauss-Lobatto nodes on `[0, 1]` for polynomial order `p`: the endpoints
/// together with the roots of `P_p'`.
pub fn gauss_lobatto_nodes(p: usize) -> Result<Vec<f64>> {
    if !(1..=5).contains(&p) {
        return Err(Error::InvalidParameter("Gauss-Lobatto order must be in 1..=5"));
    }
    let pf = p as f64;
    let mut nodes = Vec::with_capacity(p + 1);
    nodes.push(0.0);
    for i in 1..p {
        let mut x = -cos(PI * i as f64 / pf);
        for _ in 0..100 {
            let (pp, pm) = legendre_pair(p, x);
            let d1 = pf * (x * pp - pm) / (x * x - 1.0);
            let d2 = (2.0 * x * d1 - pf * (pf + 1.0) * pp) / (1.0 - x * x);
            let dx = d1 / d2;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(0.5 * (x + 1.0));
    }
    nodes.push(1.0);
    for i in 0..(p + 1) / 2 {
        let j = p - i;
        let t = 0.5 * (nodes[i] + 1.0 - nodes[j]);
        nodes[i] = t;
        nodes[j] = 1.0 - t;
    }
    if p % 2 == 0 {
        nodes[p / 2] = 0.5;
    }
    Ok(nodes)
}
