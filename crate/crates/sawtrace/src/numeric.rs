//! Floating-point building blocks: correctly rounded summation, stable power
//! differences, log-domain helpers and adaptive Gauss–Kronrod quadrature.

use crate::error::{Error, Result};

/// Exact accumulator (Shewchuk partials). `value` is the correctly rounded
/// sum of everything added, independent of the order of the additions.
#[derive(Clone, Debug, Default)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, mut x: f64) {
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // half-way cases: make the rounding of hi + lo agree with the tail
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

/// Correctly rounded sum of a sequence.
pub fn fsum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = ExactSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// `b^e − a^e` for `0 ≤ a ≤ b`, `e > 0`, without cancellation when `a ≈ b`.
pub fn pow_diff(a: f64, b: f64, e: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    if a <= 0.0 {
        return b.powf(e);
    }
    if e == 1.0 {
        return b - a;
    }
    b.powf(e) * -(e * (-(b - a) / b).ln_1p()).exp_m1()
}

/// `ln(e^a + e^b)`.
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 + e^z)`.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `ln Σ e^{x_i}`; `-∞` for an empty input.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// `ln(e^{e·lb} − e^{e·la})` for `la ≤ lb`, `e > 0`.
pub fn ln_pow_diff(la: f64, lb: f64, e: f64) -> f64 {
    if la == f64::NEG_INFINITY {
        return e * lb;
    }
    e * lb + (-(e * (la - lb)).exp_m1()).ln()
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive G7/K15 quadrature on a finite interval.
///
/// Bisects the interval with the largest error estimate until the total
/// estimate is below `rel_tol·|integral|` (or an absolute floor of
/// `1e-300`). Fails with [`Error::QuadratureBudget`] when more than
/// `max_intervals` subintervals would be needed.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, max_intervals: usize) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: f64 = pieces.iter().map(|x| x.2).sum();
        let err: f64 = pieces.iter().map(|x| x.3).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::QuadratureBudget {
                budget: max_intervals,
                estimate: err,
            });
        }
        if err <= rel_tol * total.abs() || err <= 1e-300 {
            return Ok(total);
        }
        if pieces.len() >= max_intervals {
            return Err(Error::QuadratureBudget {
                budget: max_intervals,
                estimate: err,
            });
        }
        let (k, _) = pieces.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, x)| {
                if x.3 > best.1 {
                    (i, x.3)
                } else {
                    best
                }
            },
        );
        let (lo, hi, _, _) = pieces.swap_remove(k);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}
