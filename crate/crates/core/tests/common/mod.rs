//! Dense complex matrices for small-system oracles. Everything here is
//! built from Kronecker products and a Taylor-series matrix exponential so
//! that it shares no code path with the crate under test.

#![allow(dead_code)]

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct Mat {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![c(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[[Complex64; 2]; 2]) -> Self {
        Self {
            dim: 2,
            data: vec![rows[0][0], rows[0][1], rows[1][0], rows[1][1]],
        }
    }

    pub fn at(&self, r: usize, col: usize) -> Complex64 {
        self.data[r * self.dim + col]
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `self ⊗ other`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut out = Mat::zeros(d);
        for i in 0..a {
            for j in 0..a {
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * d + j * b + l] = self.at(i, j) * other.at(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.data[i * d + j] * v[j]).sum())
            .collect()
    }

    fn norm1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.at(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Scaling and squaring over a truncated Taylor series.
    pub fn expm(&self) -> Mat {
        let mut squarings = 0;
        let mut norm = self.norm1();
        while norm > 0.25 {
            norm /= 2.0;
            squarings += 1;
        }
        let a = self.scale(c(1.0 / f64::powi(2.0, squarings), 0.0));
        let mut term = Mat::identity(self.dim);
        let mut sum = Mat::identity(self.dim);
        for k in 1..=24 {
            term = term.mul(&a).scale(c(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum);
        }
        sum
    }
}

pub fn pauli_x() -> Mat {
    Mat::from_rows(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn pauli_z() -> Mat {
    Mat::from_rows(&[[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
}

pub fn proj(bit: usize) -> Mat {
    let mut m = Mat::zeros(2);
    m.data[bit * 2 + bit] = c(1.0, 0.0);
    m
}

/// Tensor product placing `ops[q]` on qubit `q` (qubit 0 is the least
/// significant bit of the basis index), identity elsewhere.
pub fn embed(n: usize, ops: &[(usize, Mat)]) -> Mat {
    let mut out = Mat::identity(1);
    for q in (0..n).rev() {
        let op = ops
            .iter()
            .find(|(k, _)| *k == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| Mat::identity(2));
        out = out.kron(&op);
    }
    out
}

pub fn cx(n: usize, control: usize, target: usize) -> Mat {
    embed(n, &[(control, proj(0))]).add(&embed(n, &[(control, proj(1)), (target, pauli_x())]))
}

pub fn rz(n: usize, qubit: usize, theta: f64) -> Mat {
    let m = Mat::from_rows(&[
        [Complex64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
    ]);
    embed(n, &[(qubit, m)])
}

/// Dense Hamiltonian `Σ c_S Z_S`.
pub fn dense_hamiltonian(n: usize, terms: &[(Vec<usize>, f64)]) -> Mat {
    let mut h = Mat::zeros(1 << n);
    for (vars, coeff) in terms {
        let ops: Vec<(usize, Mat)> = vars.iter().map(|&v| (v, pauli_z())).collect();
        h = h.add(&embed(n, &ops).scale(c(*coeff, 0.0)));
    }
    h
}

pub fn mixer_hamiltonian(n: usize) -> Mat {
    let mut h = Mat::zeros(1 << n);
    for q in 0..n {
        h = h.add(&embed(n, &[(q, pauli_x())]));
    }
    h
}

pub fn max_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
