//! Gauss-Legendre rules and an adaptive bisection driver.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// n-point rule on [-1, 1]; nodes by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0f64, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let (pn, pn1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
                dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }
}

/// Adaptive bisection: accept a panel when the one-panel and two-half-panel
/// estimates agree to the share of `tol` proportional to the panel width.
pub fn adaptive_complex<F: Fn(f64) -> Complex64>(
    rule: &GaussLegendre,
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> (Complex64, f64) {
    let width = b - a;
    let mut stack = vec![(a, b, rule.integrate_complex(f, a, b), 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate_complex(f, lo, mid);
        let right = rule.integrate_complex(f, mid, hi);
        let diff = (left + right - whole).norm();
        let share = tol * (hi - lo) / width;
        if diff <= share || depth >= 30 {
            total += left + right;
            err += diff;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    (total, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let rule = GaussLegendre::new(10);
        // exact for degree <= 19
        let v = rule.integrate(&|x: f64| x.powi(18) + 3.0 * x.powi(5), -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let one = GaussLegendre::new(1).integrate(&|_| 1.0, 0.0, 2.0);
        assert!((one - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_oscillatory() {
        let rule = GaussLegendre::new(16);
        let f = |x: f64| Complex64::new(0.0, 40.0 * x).exp();
        let (v, _) = adaptive_complex(&rule, &f, 0.0, 3.0, 1e-13);
        let exact = (Complex64::new(0.0, 120.0).exp() - 1.0) / Complex64::new(0.0, 40.0);
        assert!((v - exact).norm() < 1e-12);
    }
}
