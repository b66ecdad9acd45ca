//! Characteristic vectors, the weight functions `w` and `chi`, and spin^c orbits.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::exact::IntMatrix;
use crate::graph::IntersectionForm;
use crate::snf::{column_hermite, smith, Hermite, Smith};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not characteristic at coordinate {index}: {value} and the weight {weight} differ in parity")]
    NotCharacteristic { index: usize, value: i64, weight: i64 },
    #[error("integer overflow")]
    Overflow,
}

/// A point of `L = H_2(X)` in the vertex basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn zero(n: usize) -> Self {
        LatticePoint(alloc::vec![0; n])
    }

    pub fn basis(n: usize, v: usize) -> Self {
        let mut p = Self::zero(n);
        p.0[v] = 1;
        p
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

/// Evaluation vector `k_v = <K, v>` of a characteristic class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharVector(Vec<i64>);

impl CharVector {
    pub fn new(form: &IntersectionForm, evals: Vec<i64>) -> Result<Self, LatticeError> {
        check_len(form, evals.len())?;
        for (i, &k) in evals.iter().enumerate() {
            let m = form.entry(i, i);
            if (k - m).rem_euclid(2) != 0 {
                return Err(LatticeError::NotCharacteristic { index: i, value: k, weight: m });
            }
        }
        Ok(CharVector(evals))
    }

    pub fn evals(&self) -> &[i64] {
        &self.0
    }

    /// `K + 2 PD(x)`.
    pub fn shifted(&self, form: &IntersectionForm, x: &LatticePoint) -> Result<CharVector, LatticeError> {
        let d = pd(form, x)?;
        let mut out = Vec::with_capacity(d.len());
        for (k, m) in self.0.iter().zip(&d) {
            let v = m.checked_mul(2).and_then(|t| t.checked_add(*k)).ok_or(LatticeError::Overflow)?;
            out.push(v);
        }
        Ok(CharVector(out))
    }
}

fn check_len(form: &IntersectionForm, got: usize) -> Result<(), LatticeError> {
    if got != form.rank() {
        return Err(LatticeError::DimensionMismatch { expected: form.rank(), got });
    }
    Ok(())
}

/// `K_0` with `<K_0, v> = v.v + 2`.
pub fn canonical_class(form: &IntersectionForm) -> CharVector {
    CharVector((0..form.rank()).map(|i| form.entry(i, i) + 2).collect())
}

/// Evaluation vector of `PD(x)`, i.e. `M x`.
pub fn pd(form: &IntersectionForm, x: &LatticePoint) -> Result<Vec<i64>, LatticeError> {
    check_len(form, x.len())?;
    form.matrix().mul_vec(&x.0).ok_or(LatticeError::Overflow)
}

/// `k^T M^{-1} k`.
pub fn k_squared(form: &IntersectionForm, k: &CharVector) -> BigRational {
    let adj = form.adjugate();
    let mut num = BigInt::zero();
    for (i, &ki) in k.0.iter().enumerate() {
        if ki == 0 {
            continue;
        }
        let row: BigInt = k.0.iter().zip(&adj[i]).filter(|(&kj, _)| kj != 0).map(|(&kj, a)| a * kj).sum();
        num += row * ki;
    }
    BigRational::new(num, form.det().clone())
}

/// `w(K) = -(K^2 + n) / 8`.
pub fn w(form: &IntersectionForm, k: &CharVector) -> BigRational {
    let n = BigRational::from_integer(BigInt::from(form.rank()));
    -(k_squared(form, k) + n) / BigRational::from_integer(BigInt::from(8))
}

/// `chi_K(x) = -(<K, x> + x.x) / 2`.
pub fn chi(form: &IntersectionForm, k: &CharVector, x: &LatticePoint) -> Result<i64, LatticeError> {
    check_len(form, x.len())?;
    check_len(form, k.0.len())?;
    let m = form.matrix();
    let n = x.len();
    let mut s: i128 = 0;
    for i in 0..n {
        if x.0[i] == 0 {
            continue;
        }
        let mut row: i128 = k.0[i] as i128;
        for j in 0..n {
            row += m.get(i, j) as i128 * x.0[j] as i128;
        }
        s = s.checked_add(row.checked_mul(x.0[i] as i128).ok_or(LatticeError::Overflow)?).ok_or(LatticeError::Overflow)?;
    }
    assert!(s % 2 == 0, "chi parity failure: vector is not characteristic");
    i64::try_from(-s / 2).map_err(|_| LatticeError::Overflow)
}

/// Intersection pairing `x . y`.
pub fn dot(form: &IntersectionForm, x: &LatticePoint, y: &LatticePoint) -> i64 {
    let m = form.matrix();
    let mut s: i128 = 0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += m.get(i, j) as i128 * x.0[i] as i128 * y.0[j] as i128;
        }
    }
    i64::try_from(s).expect("pairing overflow")
}

/// Decides `k1 - k2 in 2 M Z^n` through the Smith form of `2M`.
pub fn same_orbit(form: &IntersectionForm, k1: &CharVector, k2: &CharVector) -> bool {
    OrbitData::new(form).same_orbit(k1, k2)
}

/// Precomputed normal forms of the lattice `2 M Z^n`.
#[derive(Clone, Debug)]
pub struct OrbitData {
    smith: Smith,
    hermite: Hermite,
    k0: CharVector,
}

/// Spin^c orbit `[K]`: a representative and the canonical residue of `k - k_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpincOrbit {
    pub representative: CharVector,
    pub normal_form: Vec<BigInt>,
}

impl OrbitData {
    pub fn new(form: &IntersectionForm) -> Self {
        let m = form.matrix();
        let mut two_m = IntMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                two_m.set(i, j, 2 * m.get(i, j));
            }
        }
        OrbitData {
            smith: smith(&two_m),
            hermite: column_hermite(&two_m).expect("definite form is nonsingular"),
            k0: canonical_class(form),
        }
    }

    pub fn same_orbit(&self, k1: &CharVector, k2: &CharVector) -> bool {
        let d: Vec<BigInt> = k1.0.iter().zip(&k2.0).map(|(a, b)| BigInt::from(*a) - BigInt::from(*b)).collect();
        self.smith.in_column_lattice(&d)
    }

    pub fn orbit(&self, k: &CharVector) -> SpincOrbit {
        let d: Vec<BigInt> = k.0.iter().zip(&self.k0.0).map(|(a, b)| BigInt::from(*a - *b)).collect();
        SpincOrbit { representative: k.clone(), normal_form: self.hermite.reduce(&d) }
    }

    /// Index of `2 M Z^n` inside `2 Z^n`; this is the number of orbits.
    pub fn orbit_count(&self) -> BigInt {
        let n = self.k0.0.len() as u32;
        self.hermite.index() / BigInt::from(2).pow(n)
    }
}

impl SpincOrbit {
    pub fn is_canonical(&self) -> bool {
        self.normal_form.iter().all(|x| x.is_zero())
    }
}

/// Incremental evaluator for `chi_K` along lattice moves, tracking `y = M x`.
#[derive(Clone, Debug)]
pub struct ChiWalker<'a> {
    m: &'a IntMatrix,
    k: &'a [i64],
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub chi: i64,
}

impl<'a> ChiWalker<'a> {
    pub fn new(form: &'a IntersectionForm, k: &'a CharVector, start: &LatticePoint) -> Self {
        let y = pd(form, start).expect("walker start");
        let chi = chi(form, k, start).expect("walker start");
        ChiWalker { m: form.matrix(), k: &k.0, x: start.0.clone(), y, chi }
    }

    /// `chi(x + s e_v) - chi(x)` for `s = +-1`.
    #[inline]
    pub fn delta(&self, v: usize, s: i64) -> i64 {
        -(s * self.k[v] + 2 * s * self.y[v] + self.m.get(v, v)) / 2
    }

    #[inline]
    pub fn step(&mut self, v: usize, s: i64) {
        self.chi += self.delta(v, s);
        self.x[v] += s;
        for i in 0..self.y.len() {
            self.y[i] += s * self.m.get(i, v);
        }
    }
}

/// `chi(x + s e_v) - chi(x)` given `y = M x`.
#[inline]
pub fn chi_delta(m: &IntMatrix, k: &[i64], y: &[i64], v: usize, s: i64) -> i64 {
    -(s * k[v] + 2 * s * y[v] + m.get(v, v)) / 2
}
