//! Compensated accumulation and exactly-reduced roots of unity.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierComplex {
    re: Neumaier,
    im: Neumaier,
}

impl NeumaierComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = Neumaier::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Fixed-shape pairwise reduction: the association order depends only on the
/// slice length, so results do not depend on how the terms were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        n => {
            let mid = n / 2;
            pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
        }
    }
}

// cos/sin of 2*pi*r/d for 0 <= r/d <= 1/8.
fn base_octant(r: i128, d: i128) -> (f64, f64) {
    let angle = std::f64::consts::TAU * (r as f64 / d as f64);
    let (s, c) = angle.sin_cos();
    (c, s)
}

fn quarter(r: i128, d: i128) -> (f64, f64) {
    // 0 <= r/d <= 1/4
    if 8 * r > d {
        let (c, s) = base_octant(d - 4 * r, 4 * d);
        (s, c)
    } else {
        base_octant(r, d)
    }
}

/// e(num/den) = exp(2 pi i num/den). The fraction is reduced to the first
/// octant in integer arithmetic, so e(-x) is the exact conjugate of e(x) and
/// quarter turns are exact.
pub fn root_of_unity(num: i64, den: u64) -> Complex64 {
    assert!(den > 0);
    let d = den as i128;
    let mut r = (num as i128).rem_euclid(d);
    let conj = 2 * r > d;
    if conj {
        r = d - r;
    }
    // now 0 <= r/d <= 1/2
    let (c, s) = if 4 * r > d {
        let (c, s) = quarter(4 * r - d, 4 * d);
        (-s, c)
    } else {
        quarter(r, d)
    };
    if conj {
        Complex64::new(c, -s)
    } else {
        Complex64::new(c, s)
    }
}

/// Table of e(j/den) for j in [0, den), built from two short exact tables so
/// that every entry carries at most a couple of ulps of error.
pub fn roots_table(den: u64) -> Vec<Complex64> {
    const BLOCK: u64 = 64;
    if den <= 4 * BLOCK {
        return (0..den).map(|j| root_of_unity(j as i64, den)).collect();
    }
    let fine: Vec<Complex64> = (0..BLOCK).map(|j| root_of_unity(j as i64, den)).collect();
    let mut out = Vec::with_capacity(den as usize);
    let mut hi = 0u64;
    while hi < den {
        let coarse = root_of_unity(hi as i64, den);
        for (j, f) in fine.iter().enumerate() {
            if hi + j as u64 >= den {
                break;
            }
            out.push(coarse * f);
        }
        hi += BLOCK;
    }
    out
}
