//! Order-2 forward-mode jets.
//!
//! A [`Jet2`] carries a value together with its gradient and Hessian with
//! respect to `m` active variables. Arithmetic propagates both exactly
//! (up to rounding), so anything built from jets has no truncation error.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    value: f64,
    first: Vec<f64>,
    /// Upper triangle of the Hessian, packed row by row.
    second: Vec<f64>,
}

#[inline]
fn tri_len(m: usize) -> usize {
    m * (m + 1) / 2
}

#[inline]
fn tri_index(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * m + j - i * (i + 1) / 2
}

impl Jet2 {
    pub fn constant(value: f64, m: usize) -> Self {
        Jet2 {
            value,
            first: vec![0.0; m],
            second: vec![0.0; tri_len(m)],
        }
    }

    /// The `i`-th of `m` coordinate functions, evaluated at `value`.
    pub fn variable(value: f64, i: usize, m: usize) -> Self {
        let mut j = Jet2::constant(value, m);
        j.first[i] = 1.0;
        j
    }

    /// Build from explicit parts; `hessian` is read as a full row-major
    /// `m x m` matrix and must be symmetric.
    pub fn from_parts(value: f64, first: Vec<f64>, hessian: &[f64]) -> Self {
        let m = first.len();
        assert_eq!(hessian.len(), m * m, "hessian must be m x m");
        let mut second = vec![0.0; tri_len(m)];
        for i in 0..m {
            for j in i..m {
                second[tri_index(m, i, j)] = hessian[i * m + j];
            }
        }
        Jet2 { value, first, second }
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn first(&self) -> &[f64] {
        &self.first
    }

    pub fn d(&self, i: usize) -> f64 {
        self.first[i]
    }

    pub fn dd(&self, i: usize, j: usize) -> f64 {
        self.second[tri_index(self.dim(), i, j)]
    }

    /// Full symmetric Hessian, row-major.
    pub fn hessian(&self) -> Vec<f64> {
        let m = self.dim();
        let mut h = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                h[i * m + j] = self.dd(i, j);
            }
        }
        h
    }

    /// True when every derivative component is exactly zero.
    pub fn is_flat(&self) -> bool {
        self.first.iter().chain(&self.second).all(|&x| x == 0.0)
    }

    /// Compose with a scalar function given `[g(v), g'(v), g''(v)]` at `v = self.value()`.
    pub fn chain(&self, g: [f64; 3]) -> Jet2 {
        let m = self.dim();
        let mut second = vec![0.0; self.second.len()];
        for i in 0..m {
            for j in i..m {
                let k = tri_index(m, i, j);
                second[k] = g[2] * self.first[i] * self.first[j] + g[1] * self.second[k];
            }
        }
        Jet2 {
            value: g[0],
            first: self.first.iter().map(|d| g[1] * d).collect(),
            second,
        }
    }

    pub fn scale(&self, s: f64) -> Jet2 {
        Jet2 {
            value: self.value * s,
            first: self.first.iter().map(|d| d * s).collect(),
            second: self.second.iter().map(|d| d * s).collect(),
        }
    }

    /// Quotient. The caller guarantees `rhs.value() != 0`.
    pub fn div(&self, rhs: &Jet2) -> Jet2 {
        let m = self.dim();
        let b = rhs.value;
        let q = self.value / b;
        // q = a / b  =>  q' = (a' - q b') / b,  q'' = (a'' - q b'' - q' b'^T - b' q'^T) / b
        let first: Vec<f64> = (0..m).map(|i| (self.first[i] - q * rhs.first[i]) / b).collect();
        let mut second = vec![0.0; self.second.len()];
        for i in 0..m {
            for j in i..m {
                let k = tri_index(m, i, j);
                second[k] =
                    (self.second[k] - q * rhs.second[k] - first[i] * rhs.first[j] - rhs.first[i] * first[j]) / b;
            }
        }
        Jet2 {
            value: q,
            first,
            second,
        }
    }

    /// Non-negative integer power by binary exponentiation (products only).
    pub fn powu(&self, mut k: u64) -> Jet2 {
        let mut result = Jet2::constant(1.0, self.dim());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value + rhs.value,
            first: self.first.iter().zip(&rhs.first).map(|(a, b)| a + b).collect(),
            second: self.second.iter().zip(&rhs.second).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value - rhs.value,
            first: self.first.iter().zip(&rhs.first).map(|(a, b)| a - b).collect(),
            second: self.second.iter().zip(&rhs.second).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        let m = self.dim();
        let (a, b) = (self.value, rhs.value);
        let mut second = vec![0.0; self.second.len()];
        for i in 0..m {
            for j in i..m {
                let k = tri_index(m, i, j);
                second[k] = a * rhs.second[k]
                    + b * self.second[k]
                    + self.first[i] * rhs.first[j]
                    + self.first[j] * rhs.first[i];
            }
        }
        Jet2 {
            value: a * b,
            first: (0..m).map(|i| a * rhs.first[i] + b * self.first[i]).collect(),
            second,
        }
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            value: -self.value,
            first: self.first.iter().map(|d| -d).collect(),
            second: self.second.iter().map(|d| -d).collect(),
        }
    }
}
