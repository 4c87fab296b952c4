//! Small numerical kernels shared by the geometry modules: central
//! difference stencils, Gauss-Legendre quadrature and arclength inversion.

use std::ops::{Add, Mul, Sub};

use crate::error::{GeomError, Result};

pub type Vec2 = [f64; 2];

#[inline]
pub fn add2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn sub2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn scale2(s: f64, a: Vec2) -> Vec2 {
    [s * a[0], s * a[1]]
}

/// Fourth-order central difference of a scalar function.
pub fn diff(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central difference of a fallible vector-valued function.
pub fn diff_vec<V>(f: impl Fn(f64) -> Result<V>, t: f64, h: f64) -> Result<V>
where
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<f64, Output = V>,
{
    let m2 = f(t - 2.0 * h)?;
    let m1 = f(t - h)?;
    let p1 = f(t + h)?;
    let p2 = f(t + 2.0 * h)?;
    Ok(((m2 - p2) + (p1 - m1) * 8.0) * (1.0 / (12.0 * h)))
}

/// Fourth-order central difference of a fallible planar vector function.
pub fn diff2(f: impl Fn(f64) -> Result<Vec2>, t: f64, h: f64) -> Result<Vec2> {
    let m2 = f(t - 2.0 * h)?;
    let m1 = f(t - h)?;
    let p1 = f(t + h)?;
    let p2 = f(t + 2.0 * h)?;
    let d = 1.0 / (12.0 * h);
    Ok([
        (m2[0] - 8.0 * m1[0] + 8.0 * p1[0] - p2[0]) * d,
        (m2[1] - 8.0 * m1[1] + 8.0 * p1[1] - p2[1]) * d,
    ])
}

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Eight-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}

/// Fallible variant of [`gauss_legendre`].
pub fn try_gauss_legendre(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        acc += w * (f(mid - half * x)? + f(mid + half * x)?);
    }
    Ok(acc * half)
}

/// Composite Gauss-Legendre quadrature with `cells` equal sub-intervals.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, cells: usize) -> f64 {
    let cells = cells.max(1);
    let w = (b - a) / cells as f64;
    (0..cells)
        .map(|k| gauss_legendre(&f, a + k as f64 * w, a + (k + 1) as f64 * w))
        .sum()
}

/// Cumulative integral of a positive rate, tabulated on a uniform grid and
/// refined locally with Gauss-Legendre so that lookups are smooth to round-off.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    t0: f64,
    step: f64,
    table: Vec<f64>,
}

impl CumulativeIntegral {
    pub fn build(rate: impl Fn(f64) -> Result<f64>, t0: f64, t1: f64, cells: usize) -> Result<Self> {
        let cells = cells.max(1);
        let step = (t1 - t0) / cells as f64;
        let mut table = Vec::with_capacity(cells + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for k in 0..cells {
            let a = t0 + k as f64 * step;
            acc += try_gauss_legendre(&rate, a, a + step)?;
            table.push(acc);
        }
        Ok(Self { t0, step, table })
    }

    pub fn start(&self) -> f64 {
        self.t0
    }

    pub fn end(&self) -> f64 {
        self.t0 + self.step * (self.table.len() - 1) as f64
    }

    pub fn total(&self) -> f64 {
        *self.table.last().unwrap_or(&0.0)
    }

    fn cell_of(&self, t: f64) -> usize {
        let k = ((t - self.t0) / self.step).floor();
        (k.max(0.0) as usize).min(self.table.len() - 2)
    }

    /// Integral of `rate` from the start of the table to `t`.
    pub fn value(&self, rate: impl Fn(f64) -> Result<f64>, t: f64) -> Result<f64> {
        let k = self.cell_of(t);
        let a = self.t0 + k as f64 * self.step;
        Ok(self.table[k] + try_gauss_legendre(rate, a, t)?)
    }

    /// Parameter at which the cumulative integral reaches `target`
    /// (Newton iteration safeguarded by bisection inside the located cell).
    pub fn invert(&self, rate: impl Fn(f64) -> Result<f64>, target: f64) -> Result<f64> {
        let n = self.table.len() - 1;
        let k = match self.table.binary_search_by(|x| x.total_cmp(&target)) {
            Ok(k) => return Ok(self.t0 + k as f64 * self.step),
            Err(0) => 0,
            Err(k) if k > n => n - 1,
            Err(k) => k - 1,
        };
        let mut lo = self.t0 + k as f64 * self.step;
        let mut hi = lo + self.step;
        let base = self.table[k];
        let f = |t: f64| -> Result<f64> {
            Ok(base + try_gauss_legendre(&rate, self.t0 + k as f64 * self.step, t)? - target)
        };
        let frac = if self.table[k + 1] > base {
            ((target - base) / (self.table[k + 1] - base)).clamp(0.0, 1.0)
        } else {
            0.5
        };
        let mut t = lo + frac * self.step;
        for _ in 0..60 {
            let ft = f(t)?;
            if ft.abs() < 1e-15 * (1.0 + target.abs()) {
                break;
            }
            if ft > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let d = rate(t)?;
            let mut next = t - ft / d;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() < 1e-16 * (1.0 + t.abs()) {
                t = next;
                break;
            }
            t = next;
        }
        Ok(t)
    }
}

pub fn require_finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(GeomError::InvalidParams(format!("{what} is not finite")))
    }
}

/// Inverse of a 3x3 matrix by cofactors; `None` when singular.
pub fn inverse3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    if det.abs() < 1e-300 {
        return None;
    }
    let inv = 1.0 / det;
    Some([
        [
            c00 * inv,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv,
        ],
        [
            c01 * inv,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv,
        ],
        [
            c02 * inv,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv,
        ],
    ])
}

pub fn mat3_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Chebyshev interpolant on `[a, b]`.
#[derive(Debug, Clone)]
pub struct Chebyshev {
    a: f64,
    b: f64,
    coef: Vec<f64>,
}

impl Chebyshev {
    /// First-kind nodes mapped to `[a, b]`, in increasing order.
    pub fn nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .rev()
            .map(|k| {
                let x = (std::f64::consts::PI * (k as f64 + 0.5) / n as f64).cos();
                0.5 * (a + b) + 0.5 * (b - a) * x
            })
            .collect()
    }

    /// Interpolates `values` given at [`Chebyshev::nodes`].
    pub fn fit(a: f64, b: f64, values: &[f64]) -> Self {
        let n = values.len();
        let coef = (0..n)
            .map(|j| {
                let s: f64 = (0..n)
                    .map(|k| {
                        // node index k counts down from the largest x
                        let kk = n - 1 - k;
                        let ang = std::f64::consts::PI * (kk as f64 + 0.5) / n as f64;
                        values[k] * (j as f64 * ang).cos()
                    })
                    .sum();
                let w = if j == 0 { 1.0 } else { 2.0 };
                w * s / n as f64
            })
            .collect();
        Self { a, b, coef }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = (2.0 * t - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for c in self.coef.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coef[0]
    }

    /// Largest magnitude among the last four coefficients.
    pub fn tail(&self) -> f64 {
        self.coef.iter().rev().take(4).fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

/// Classical Runge-Kutta from `t0` to `t1` with steps no longer than `hmax`.
pub fn rk4<const N: usize>(
    f: &dyn Fn(f64, [f64; N]) -> Result<[f64; N]>,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    hmax: f64,
) -> Result<[f64; N]> {
    let steps = ((t1 - t0).abs() / hmax).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let axpy = |y: &[f64; N], k: &[f64; N], s: f64| {
        let mut o = *y;
        for i in 0..N {
            o[i] += s * k[i];
        }
        o
    };
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, y)?;
        let k2 = f(t + 0.5 * h, axpy(&y, &k1, 0.5 * h))?;
        let k3 = f(t + 0.5 * h, axpy(&y, &k2, 0.5 * h))?;
        let k4 = f(t + h, axpy(&y, &k3, h))?;
        for j in 0..N {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencil_is_fourth_order() {
        let d = diff(f64::sin, 0.3, 1e-3);
        assert!((d - 0.3f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // degree 15 is within the exactness of the 8-point rule
        let v = gauss_legendre(|x| x.powi(15) + 3.0 * x.powi(2), 0.0, 2.0);
        let exact = 2f64.powi(16) / 16.0 + 8.0;
        assert!((v - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn cumulative_inversion_round_trips() {
        let rate = |t: f64| Ok(3.0 * t * t + 1.0);
        let table = CumulativeIntegral::build(rate, 0.0, 1.0, 16).unwrap();
        assert!((table.total() - 2.0).abs() < 1e-14);
        for &s in &[0.0, 0.1, 0.77, 1.3, 2.0] {
            let t = table.invert(rate, s).unwrap();
            let back = table.value(rate, t).unwrap();
            assert!((back - s).abs() < 1e-13, "s={s} back={back}");
        }
    }

    #[test]
    fn inverse3_matches_identity() {
        let m = [[2.0, 1.0, 0.0], [1.0, -3.0, 0.5], [0.0, 0.5, 4.0]];
        let inv = inverse3(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e: f64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert!((e - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn chebyshev_reproduces_smooth_function() {
        let (a, b) = (-0.3, 1.7);
        let xs = Chebyshev::nodes(a, b, 40);
        let c = Chebyshev::fit(a, b, &xs.iter().map(|x| (2.0 * x).sin() + x * x).collect::<Vec<_>>());
        for t in [-0.3, 0.1, 0.77, 1.7] {
            assert!((c.eval(t) - ((2.0 * t).sin() + t * t)).abs() < 1e-13);
        }
        assert!(c.tail() < 1e-14);
    }

    #[test]
    fn rk4_exponential() {
        let f = |_t: f64, y: [f64; 1]| Ok([y[0]]);
        let y = rk4(&f, 0.0, [1.0], 1.0, 1e-3).unwrap();
        assert!((y[0] - 1f64.exp()).abs() < 1e-12);
        let back = rk4(&f, 0.0, [1.0], -1.0, 1e-3).unwrap();
        assert!((back[0] - (-1f64).exp()).abs() < 1e-12);
    }
}
