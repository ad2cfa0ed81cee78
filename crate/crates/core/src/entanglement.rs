//! Alice–Vic state built from the squeezing parameter, and its entanglement
//! measures.
//!
//! The Minkowski vacuum seen by Vic is a two-mode squeezed state with Schmidt
//! weights `(1-|q|²)|q|^{2n}`. Tracing out region II and combining with
//! Alice's qubit gives a mixed state on `|a, n⟩`, `a ∈ {0, 1}`, which is
//! truncated at `n ≤ n_max + 1`.
//!
//! Only `|q|` enters: the phase of `q` is a local unitary on Vic's Fock
//! basis and changes neither the negativity nor the entropies, so all
//! matrices here are real symmetric.
//!
//! Every quantity has a matrix-numeric path (build the matrix, diagonalise
//! it) and a closed-form path. The numeric one is authoritative; the closed
//! forms exist for cross-checks and reports.

use serde::Serialize;

use crate::linalg::{eig2, symmetric_eigenvalues, symmetric_eigenvalues_dense, SymMatrix};
use crate::scalar::Real;
use crate::sum::compensated_sum;
use crate::{Error, Result};

pub const DEFAULT_TAIL_TOL: f64 = 1e-14;
pub const MIN_N_MAX: usize = 8;
pub const MAX_N_MAX: usize = 512;

/// Eigenvalues below this are an error in [`entropy`].
pub const NEGATIVE_FLOOR: f64 = -1e-10;

/// How to diagonalise the matrices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EigenSolver {
    /// Split into connected components first, closed form for 1×1 and 2×2.
    #[default]
    Blocked,
    /// Householder plus QL on the whole matrix.
    Dense,
}

impl EigenSolver {
    fn eigenvalues<T: Real>(self, m: &SymMatrix<T>) -> Result<Vec<T>> {
        match self {
            EigenSolver::Blocked => symmetric_eigenvalues(m),
            EigenSolver::Dense => symmetric_eigenvalues_dense(m),
        }
    }
}

/// `ρ_AV` on the basis `|a, n⟩`, `0 ≤ n ≤ n_max + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedDensityMatrix<T> {
    pub n_max: usize,
    pub q_abs: T,
    pub entries: SymMatrix<T>,
    /// Probability weight dropped by the truncation.
    pub tail_bound: T,
}

impl<T: Real> TruncatedDensityMatrix<T> {
    /// Side of the Vic factor, `n_max + 2`.
    pub fn vic_dim(&self) -> usize {
        self.n_max + 2
    }

    pub fn dim(&self) -> usize {
        2 * self.vic_dim()
    }

    #[inline]
    pub fn index(&self, a: usize, n: usize) -> usize {
        a * self.vic_dim() + n
    }

    pub fn get(&self, a: usize, n: usize, b: usize, m: usize) -> T {
        self.entries.get(self.index(a, n), self.index(b, m))
    }

    pub fn trace(&self) -> T {
        self.entries.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        let d = self.dim();
        let mut terms = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let x = self.entries.get(i, j);
                terms.push(x * x);
            }
        }
        compensated_sum(terms)
    }
}

/// Partial-transpose spectrum, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct PTSpectrum<T> {
    pub eigenvalues: Vec<T>,
    pub negative_sum: T,
}

impl<T: Real> PTSpectrum<T> {
    fn from_unsorted(mut eigenvalues: Vec<T>) -> Self {
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let negative_sum = compensated_sum(eigenvalues.iter().copied().filter(|x| *x < T::zero()));
        Self {
            eigenvalues,
            negative_sum,
        }
    }

    pub fn trace_norm(&self) -> T {
        compensated_sum(self.eigenvalues.iter().map(|x| x.abs()))
    }

    /// `log₂` of the trace norm.
    pub fn log_negativity(&self) -> T {
        self.trace_norm().log2()
    }
}

/// One row of a sweep: time, `|q|`, negativity and mutual information.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntanglementPoint {
    #[serde(rename = "T0")]
    pub t0: f64,
    pub q_abs: f64,
    #[serde(rename = "N")]
    pub negativity: f64,
    #[serde(rename = "I")]
    pub mutual_info: f64,
}

fn check_q<T: Real>(q_abs: T) -> Result<()> {
    if !(q_abs >= T::zero() && q_abs < T::one()) {
        return Err(Error::Domain(format!("|q| = {q_abs} is outside [0, 1)")));
    }
    Ok(())
}

/// Schmidt weight left beyond `n_max`: `|q|^{2(n_max+1)}`.
pub fn tail_weight<T: Real>(q_abs: T, n_max: usize) -> T {
    (q_abs * q_abs).powi(n_max as i32 + 1)
}

/// Probability missing from `ρ_AV` at cutoff `n_max`:
/// `½|q|^{2(n_max+1)}(1 + |q|² + (1-|q|²)(n_max+2))`.
///
/// Larger than [`tail_weight`] because the `|1, n+1⟩` component carries the
/// extra factor `n+1`.
pub fn rho_tail_weight<T: Real>(q_abs: T, n_max: usize) -> T {
    let q2 = q_abs * q_abs;
    let spread = T::one() + q2 + (T::one() - q2) * T::from_usize(n_max + 2).unwrap();
    tail_weight(q_abs, n_max) * spread / T::lit(2.0)
}

fn truncation_error<T: Real>(n_max: usize, tail: T, tail_tol: T) -> Error {
    Error::Truncation {
        n_max,
        tail: tail.to_f64_lossy(),
        tolerance: tail_tol.to_f64_lossy(),
    }
}

/// Smallest cutoff whose [`rho_tail_weight`] is below `tail_tol`, clamped to
/// `[MIN_N_MAX, MAX_N_MAX]`.
pub fn choose_n_max<T: Real>(q_abs: T, tail_tol: T) -> Result<usize> {
    check_q(q_abs)?;
    let mut n = 0;
    while rho_tail_weight(q_abs, n) >= tail_tol {
        if n == MAX_N_MAX {
            return Err(truncation_error(n, rho_tail_weight(q_abs, n), tail_tol));
        }
        n += 1;
    }
    Ok(n.max(MIN_N_MAX))
}

/// Schmidt weights `pₙ = (1-|q|²)|q|^{2n}` for `n = 0..=n_max`.
pub fn squeezed_vacuum_weights<T: Real>(q_abs: T, n_max: usize, tail_tol: T) -> Result<Vec<T>> {
    check_q(q_abs)?;
    let tail = tail_weight(q_abs, n_max);
    if tail > tail_tol {
        return Err(truncation_error(n_max, tail, tail_tol));
    }
    let q2 = q_abs * q_abs;
    Ok((0..=n_max)
        .map(|n| (T::one() - q2) * q2.powi(n as i32))
        .collect())
}

pub fn build_rho_av<T: Real>(
    q_abs: T,
    n_max: usize,
    tail_tol: T,
) -> Result<TruncatedDensityMatrix<T>> {
    check_q(q_abs)?;
    let tail_bound = rho_tail_weight(q_abs, n_max);
    if tail_bound > tail_tol {
        return Err(truncation_error(n_max, tail_bound, tail_tol));
    }
    let q2 = q_abs * q_abs;
    let r = T::one() - q2;
    let s = r.sqrt();
    let c = r / T::lit(2.0);
    let mut rho = TruncatedDensityMatrix {
        n_max,
        q_abs,
        entries: SymMatrix::zeros(2 * (n_max + 2)),
        tail_bound,
    };
    for n in 0..=n_max {
        let w = c * q2.powi(n as i32);
        let np1 = T::from_usize(n + 1).unwrap();
        let (i0, i1) = (rho.index(0, n), rho.index(1, n + 1));
        rho.entries.set(i0, i0, w);
        rho.entries.set(i1, i0, w * s * np1.sqrt());
        rho.entries.set(i1, i1, w * r * np1);
    }
    Ok(rho)
}

/// Transposes Alice's qubit: `|a n⟩⟨b m| → |b n⟩⟨a m|`.
pub fn partial_transpose<T: Real>(rho: &TruncatedDensityMatrix<T>) -> TruncatedDensityMatrix<T> {
    let vd = rho.vic_dim();
    let mut out = rho.clone();
    for a in 0..2 {
        for b in 0..2 {
            for n in 0..vd {
                for m in 0..vd {
                    out.entries
                        .set(rho.index(a, n), rho.index(b, m), rho.get(b, n, a, m));
                }
            }
        }
    }
    out
}

pub fn pt_spectrum_numeric<T: Real>(rho: &TruncatedDensityMatrix<T>) -> Result<PTSpectrum<T>> {
    pt_spectrum_with(rho, EigenSolver::default())
}

pub fn pt_spectrum_with<T: Real>(
    rho: &TruncatedDensityMatrix<T>,
    solver: EigenSolver,
) -> Result<PTSpectrum<T>> {
    let pt = partial_transpose(rho);
    Ok(PTSpectrum::from_unsorted(solver.eigenvalues(&pt.entries)?))
}

/// PT spectrum written down directly: 2×2 blocks on `{|1,n⟩, |0,n+1⟩}` for
/// `n = 0..=n_max` plus the two unpaired states `|0,0⟩` and `|1,n_max+1⟩`.
pub fn pt_spectrum_blocks<T: Real>(q_abs: T, n_max: usize) -> Result<PTSpectrum<T>> {
    check_q(q_abs)?;
    let q2 = q_abs * q_abs;
    let r = T::one() - q2;
    let s = r.sqrt();
    let c = r / T::lit(2.0);
    let weight = |n: usize| {
        if n <= n_max {
            c * q2.powi(n as i32)
        } else {
            T::zero()
        }
    };
    let mut ev = Vec::with_capacity(2 * (n_max + 2));
    ev.push(weight(0));
    for n in 0..=n_max {
        let nf = T::from_usize(n).unwrap();
        // ⟨1,n|ρ|1,n⟩ comes from the (n-1) term of the sum
        let a = if n == 0 {
            T::zero()
        } else {
            weight(n - 1) * r * nf
        };
        let b = weight(n + 1);
        let off = weight(n) * s * (nf + T::one()).sqrt();
        let (lo, hi) = eig2(a, b, off);
        ev.push(lo);
        ev.push(hi);
    }
    ev.push(weight(n_max) * r * T::from_usize(n_max + 1).unwrap());
    Ok(PTSpectrum::from_unsorted(ev))
}

/// `(λ₊ⁿ, λ₋ⁿ) = ¼|q|^{2n}(1-|q|²)[zₙ ± √Zₙ]` for the `(n, n+1)` block, with
/// `zₙ = n|q|²/√(1-|q|²) + |q|²` and `Zₙ = zₙ² + 4(1-|q|²)`. This closed form
/// does not match the blocks of the constructed matrix; it is kept for
/// reports only.
pub fn pt_eigenvalues_closed_form<T: Real>(q_abs: T, n: usize) -> (T, T) {
    let q2 = q_abs * q_abs;
    let r = T::one() - q2;
    let (center, root) = closed_form_z(q2, n);
    let pre = q2.powi(n as i32) * r / T::lit(4.0);
    (pre * (center + root), pre * (center - root))
}

// (n|q|²/√(1-|q|²) + |q|², √Zₙ)
fn closed_form_z<T: Real>(q2: T, n: usize) -> (T, T) {
    let r = T::one() - q2;
    let center = T::from_usize(n).unwrap() * q2 / r.sqrt() + q2;
    (center, (center * center + T::lit(4.0) * r).sqrt())
}

pub fn log_negativity<T: Real>(rho: &TruncatedDensityMatrix<T>) -> Result<T> {
    Ok(pt_spectrum_numeric(rho)?.log_negativity())
}

/// `log₂((1-|q|²)/2 + Σ ¼|q|^{2n}(1-|q|²)√Zₙ)`, summed to `n_max`. Gives 0
/// rather than 1 at `q = 0`, so it is only a cross-check.
pub fn log_negativity_closed_form<T: Real>(q_abs: T, n_max: usize) -> T {
    let q2 = q_abs * q_abs;
    let r = T::one() - q2;
    let series = compensated_sum((0..=n_max).map(|n| {
        let (_, root) = closed_form_z(q2, n);
        q2.powi(n as i32) / T::lit(4.0) * r * root
    }));
    (r / T::lit(2.0) + series).log2()
}

/// Von Neumann entropy in bits from a spectrum.
///
/// Roundoff-level negative eigenvalues contribute nothing; anything below
/// [`NEGATIVE_FLOOR`] is an error.
pub fn entropy<T: Real>(eigenvalues: &[T]) -> Result<T> {
    let floor = T::lit(NEGATIVE_FLOOR);
    let mut terms = Vec::with_capacity(eigenvalues.len());
    for &x in eigenvalues {
        if x < floor {
            return Err(Error::NegativeEigenvalue {
                value: x.to_f64_lossy(),
                floor: NEGATIVE_FLOOR,
            });
        }
        if x > T::zero() {
            terms.push(-x * x.log2());
        }
    }
    Ok(compensated_sum(terms))
}

pub fn entropy_of<T: Real>(m: &SymMatrix<T>) -> Result<T> {
    entropy(&symmetric_eigenvalues(m)?)
}

/// Alice's qubit after tracing out Vic.
pub fn reduced_alice<T: Real>(rho: &TruncatedDensityMatrix<T>) -> SymMatrix<T> {
    SymMatrix::from_lower(2, |a, b| {
        compensated_sum((0..rho.vic_dim()).map(|n| rho.get(a, n, b, n)))
    })
}

/// Vic's Fock state after tracing out Alice.
pub fn reduced_vic<T: Real>(rho: &TruncatedDensityMatrix<T>) -> SymMatrix<T> {
    SymMatrix::from_lower(rho.vic_dim(), |n, m| {
        rho.get(0, n, 0, m) + rho.get(1, n, 1, m)
    })
}

/// `S(ρ_A) + S(ρ_V) - S(ρ_AV)` with the given solver for `ρ_AV`.
pub fn mutual_information_with<T: Real>(
    rho: &TruncatedDensityMatrix<T>,
    solver: EigenSolver,
) -> Result<T> {
    let sa = entropy_of(&reduced_alice(rho))?;
    let sv = entropy_of(&reduced_vic(rho))?;
    let sav = entropy(&solver.eigenvalues(&rho.entries)?)?;
    Ok(sa + sv - sav)
}

pub fn mutual_information<T: Real>(rho: &TruncatedDensityMatrix<T>) -> Result<T> {
    mutual_information_with(rho, EigenSolver::default())
}

/// `1 - ½log₂|q|² - ½(1-|q|²) Σ |q|^{2n} Dₙ`, summed to `n_max`. Singular at
/// `q = 0`, where the limit is 2.
pub fn mutual_information_closed_form<T: Real>(q_abs: T, n_max: usize) -> Result<T> {
    check_q(q_abs)?;
    if q_abs == T::zero() {
        return Err(Error::Domain(
            "closed-form mutual information is singular at q = 0; the limit is 2".into(),
        ));
    }
    let q2 = q_abs * q_abs;
    let r = T::one() - q2;
    let xlog = |x: T| x * x.log2();
    let series = compensated_sum((0..=n_max).map(|n| {
        let nf = T::from_usize(n).unwrap();
        let d = xlog(T::one() + nf * r / q2) - xlog(T::one() + (nf + T::one()) * r);
        q2.powi(n as i32) * d
    }));
    Ok(T::one() - q2.log2() / T::lit(2.0) - r / T::lit(2.0) * series)
}

/// Entropies of the region-I and region-II halves of the two-mode squeezed
/// vacuum, each obtained by tracing the other half out of the pure state.
pub fn schmidt_entropies<T: Real>(q_abs: T, n_max: usize, tail_tol: T) -> Result<(T, T)> {
    let p = squeezed_vacuum_weights(q_abs, n_max, tail_tol)?;
    // amplitudes ψ_{nm} = √pₙ δ_{nm}
    let psi = |n: usize, m: usize| if n == m { p[n].sqrt() } else { T::zero() };
    let d = n_max + 1;
    let rho_one = SymMatrix::from_lower(d, |n, n2| {
        compensated_sum((0..d).map(|m| psi(n, m) * psi(n2, m)))
    });
    let rho_two = SymMatrix::from_lower(d, |m, m2| {
        compensated_sum((0..d).map(|n| psi(n, m) * psi(n, m2)))
    });
    Ok((entropy_of(&rho_one)?, entropy_of(&rho_two)?))
}

/// Numeric negativity and mutual information at `|q|`, with the cutoff chosen
/// from `tail_tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measures {
    pub n_max: usize,
    pub negativity: f64,
    pub mutual_info: f64,
}

pub fn measures(q_abs: f64, tail_tol: f64) -> Result<Measures> {
    let n_max = choose_n_max(q_abs, tail_tol)?;
    let rho = build_rho_av(q_abs, n_max, tail_tol)?;
    Ok(Measures {
        n_max,
        negativity: log_negativity(&rho)?,
        mutual_info: mutual_information(&rho)?,
    })
}
