//! Eigenvalues of real symmetric matrices.
//!
//! The density matrices in this crate are block-sparse, so the solver first
//! splits the matrix into its connected components (rows linked by nonzero
//! off-diagonal entries) and diagonalises each one separately. Components of
//! size one and two are handled in closed form; larger ones go through
//! Householder tridiagonalisation followed by the implicit QL iteration.

use crate::scalar::Real;
use crate::{Error, Result};

const MAX_QL_ITERATIONS: usize = 30;

/// Dense real symmetric matrix stored row-major in full.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    /// Builds the matrix from its lower triangle; `f(i, j)` is called for
    /// `j <= i` only.
    pub fn from_lower(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Groups of indices connected through nonzero off-diagonal entries,
    /// each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..n {
            for j in 0..i {
                if self.get(i, j) != T::zero() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let root = find(&mut parent, i);
            groups[root].push(i);
        }
        groups.into_iter().filter(|g| !g.is_empty()).collect()
    }

    fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_lower(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }
}

/// All eigenvalues in ascending order, splitting into components first.
pub fn symmetric_eigenvalues<T: Real>(m: &SymMatrix<T>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(m.dim());
    for comp in m.components() {
        match comp.len() {
            1 => out.push(m.get(comp[0], comp[0])),
            2 => {
                let (a, b, c) = (
                    m.get(comp[0], comp[0]),
                    m.get(comp[1], comp[1]),
                    m.get(comp[1], comp[0]),
                );
                let (lo, hi) = eig2(a, b, c);
                out.push(lo);
                out.push(hi);
            }
            _ => out.extend(dense_eigenvalues(m.submatrix(&comp))?),
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// All eigenvalues in ascending order, treating the matrix as one block.
pub fn symmetric_eigenvalues_dense<T: Real>(m: &SymMatrix<T>) -> Result<Vec<T>> {
    let mut out = dense_eigenvalues(m.clone())?;
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// Eigenvalues of `[[a, c], [c, b]]`, smaller first.
pub fn eig2<T: Real>(a: T, b: T, c: T) -> (T, T) {
    let two = T::lit(2.0);
    let mean = (a + b) / two;
    let radius = ((a - b) / two).hypot(c);
    let hi = mean + radius;
    // the smaller root from the product avoids cancellation when it is tiny
    let det = a * b - c * c;
    let lo = if hi != T::zero() && mean > T::zero() {
        det / hi
    } else {
        mean - radius
    };
    (lo, hi)
}

fn dense_eigenvalues<T: Real>(mut a: SymMatrix<T>) -> Result<Vec<T>> {
    let n = a.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut a, &mut d, &mut e);
    tql(&mut d, &mut e)?;
    Ok(d)
}

/// Householder reduction to tridiagonal form, eigenvalues only. On return
/// `d` holds the diagonal and `e[1..]` the subdiagonal.
fn tridiagonalize<T: Real>(a: &mut SymMatrix<T>, d: &mut [T], e: &mut [T]) {
    let n = a.dim();
    let zero = T::zero();
    let idx = |i: usize, j: usize| i * n + j;
    let m = &mut a.data;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = zero;
        if l > 0 {
            let scale = (0..=l).fold(zero, |s, k| s + m[idx(i, k)].abs());
            if scale == zero {
                // row already reduced
                e[i] = m[idx(i, l)];
            } else {
                for k in 0..=l {
                    m[idx(i, k)] = m[idx(i, k)] / scale;
                    h = h + m[idx(i, k)] * m[idx(i, k)];
                }
                let f = m[idx(i, l)];
                let g = if f >= zero { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h = h - f * g;
                m[idx(i, l)] = f - g;
                let mut f = zero;
                for j in 0..=l {
                    let mut g = zero;
                    for k in 0..=j {
                        g = g + m[idx(j, k)] * m[idx(i, k)];
                    }
                    for k in j + 1..=l {
                        g = g + m[idx(k, j)] * m[idx(i, k)];
                    }
                    e[j] = g / h;
                    f = f + e[j] * m[idx(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = m[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        m[idx(j, k)] = m[idx(j, k)] - (f * e[k] + g * m[idx(i, k)]);
                    }
                }
            }
        } else {
            e[i] = m[idx(i, l)];
        }
        d[i] = h;
    }
    e[0] = zero;
    for i in 0..n {
        d[i] = m[idx(i, i)];
    }
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
fn tql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;
    // absolute test against the matrix norm, as in EISPACK's tql1: strongly
    // graded blocks (entries spanning ~20 decades) never meet a purely
    // relative test. Eigenvalues are then accurate to eps·‖A‖.
    let norm = (0..n).fold(zero, |acc, i| acc.max(d[i].abs() + e[i].abs()));
    let floor = T::epsilon() * norm;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::EigenConvergence {
                    iterations: MAX_QL_ITERATIONS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(one);
            let signed = if g >= zero { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + signed);
            let (mut s, mut c, mut p) = (one, one, zero);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == zero {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = zero;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok(())
}
