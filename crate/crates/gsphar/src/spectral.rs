//! Magnetic-Laplacian spectral analysis for directed weighted graphs.
//!
//! A directed graph with non-negative adjacency `A` is turned into a complex
//! Hermitian operator in three steps:
//!
//! ```text
//! A^s = (A + Aᵀ)/2                      symmetrized adjacency
//! Θ   = 2πq (A − Aᵀ)                    phase matrix (antisymmetric)
//! H   = A^s ⊙ exp(iΘ)                   Hermitian adjacency
//! L̃   = I − (D^{-1/2} A^s D^{-1/2}) ⊙ exp(iΘ)
//! ```
//!
//! `L̃` is Hermitian positive semidefinite for every `q ≥ 0`, so its
//! eigenvalues are real and its eigenvectors form an orthonormal complex
//! basis. Projecting node signals onto that basis (`x̃ = U†x`) and back
//! (`x = Ux̃`) generalizes the graph Fourier transform to directed graphs;
//! `q = 0` recovers the classical undirected normalized Laplacian.
//!
//! Hermiticity is exact by construction here: upper-triangular entries are
//! computed once and mirrored as conjugates. Eigenvectors get a deterministic
//! phase (largest-magnitude component real and positive) so downstream model
//! parameters are reproducible across runs.

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Directed weighted graph with labelled nodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectedGraph {
    pub labels: Vec<String>,
    pub adjacency: DMatrix<f64>,
}

impl DirectedGraph {
    /// Validates finiteness, non-negativity and a zero diagonal.
    pub fn new(labels: Vec<String>, adjacency: DMatrix<f64>) -> Result<Self> {
        let n = labels.len();
        if adjacency.nrows() != n || adjacency.ncols() != n {
            return Err(Error::DimensionMismatch {
                what: "graph adjacency".into(),
                expected: n,
                actual: adjacency.nrows(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let w = adjacency[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidPanel(format!(
                        "adjacency entry ({i},{j}) = {w} is not a finite non-negative weight"
                    )));
                }
            }
            if adjacency[(i, i)] != 0.0 {
                return Err(Error::InvalidPanel(format!(
                    "adjacency diagonal entry ({i},{i}) must be zero"
                )));
            }
        }
        Ok(Self { labels, adjacency })
    }
}

/// Normalized magnetic Laplacian prior to eigendecomposition.
#[derive(Debug, Clone)]
pub struct MagneticLaplacian {
    pub q: f64,
    pub matrix: DMatrix<C64>,
}

/// Eigendecomposition of a normalized magnetic Laplacian.
///
/// Columns of `u` are orthonormal eigenvectors ordered by ascending
/// eigenvalue, phase-fixed so the largest-magnitude component of each column
/// is real and positive (ties broken by lowest row index).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "BasisRepr", into = "BasisRepr")]
pub struct MagneticBasis {
    pub q: f64,
    pub u: DMatrix<C64>,
    pub eigenvalues: DVector<f64>,
    pub laplacian: DMatrix<C64>,
}

impl MagneticBasis {
    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    /// True when the basis (hence the whole pipeline) is purely real.
    pub fn is_real(&self) -> bool {
        self.u.iter().all(|z| z.im == 0.0)
    }
}

/// Symmetrized adjacency `A^s = (A + Aᵀ)/2` and its degree diagonal.
///
/// Zero degrees are replaced by 1 so isolated nodes survive normalization;
/// the corresponding Laplacian rows become standard basis rows.
pub fn symmetrize(a: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let n = a.nrows();
    let mut sym = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            sym[(i, j)] = 0.5 * (a[(i, j)] + a[(j, i)]);
        }
    }
    let mut deg = DVector::zeros(n);
    for i in 0..n {
        let d: f64 = sym.row(i).iter().sum();
        deg[i] = if d == 0.0 { 1.0 } else { d };
    }
    (sym, deg)
}

/// Phase matrix `Θ^(q) = 2πq (A − Aᵀ)`; antisymmetric by construction.
pub fn phase_matrix(a: &DMatrix<f64>, q: f64) -> DMatrix<f64> {
    let n = a.nrows();
    let scale = 2.0 * std::f64::consts::PI * q;
    let mut theta = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = scale * (a[(i, j)] - a[(j, i)]);
            theta[(i, j)] = v;
            theta[(j, i)] = -v;
        }
    }
    theta
}

/// Hermitian adjacency `H^(q) = A^s ⊙ exp(iΘ)`.
///
/// The upper triangle is computed once and mirrored as conjugates, so
/// `H = H†` holds exactly, not merely to rounding.
pub fn hermitian_adjacency(sym: &DMatrix<f64>, theta: &DMatrix<f64>) -> DMatrix<C64> {
    let n = sym.nrows();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(sym[(i, i)], 0.0);
        for j in (i + 1)..n {
            let z = C64::from_polar(sym[(i, j)], theta[(i, j)]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Unnormalized magnetic Laplacian `L = D^s − H^(q)`.
pub fn unnormalized_magnetic_laplacian(a: &DMatrix<f64>, q: f64) -> DMatrix<C64> {
    let (sym, deg) = symmetrize(a);
    let theta = phase_matrix(a, q);
    let mut l = hermitian_adjacency(&sym, &theta).map(|z| -z);
    for i in 0..a.nrows() {
        l[(i, i)] += C64::new(deg[i], 0.0);
    }
    l
}

/// Normalized magnetic Laplacian
/// `L̃ = I − (D^{-1/2} A^s D^{-1/2}) ⊙ exp(iΘ)`, exactly Hermitian.
pub fn normalized_magnetic_laplacian(a: &DMatrix<f64>, q: f64) -> MagneticLaplacian {
    let n = a.nrows();
    let (sym, deg) = symmetrize(a);
    let theta = phase_matrix(a, q);
    let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        // Zero diagonal of A implies A^s_ii = 0, so L̃_ii = 1 − s_ii.
        l[(i, i)] = C64::new(1.0 - sym[(i, i)] * inv_sqrt[i] * inv_sqrt[i], 0.0);
        for j in (i + 1)..n {
            let s = sym[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
            let z = -C64::from_polar(s, theta[(i, j)]);
            l[(i, j)] = z;
            l[(j, i)] = z.conj();
        }
    }
    MagneticLaplacian { q, matrix: l }
}

/// Largest deviation from Hermitian symmetry, `max |M − M†|`.
pub fn hermitian_residual(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

const EIGEN_MAX_ITER: usize = 10_000;

/// Eigendecomposes a Hermitian Laplacian into a deterministic ordered basis.
///
/// Eigenvalues come out ascending; each eigenvector is rotated so its
/// largest-magnitude component is real and positive. A purely real input is
/// routed through the real symmetric solver.
pub fn eigendecompose(lap: &MagneticLaplacian) -> Result<MagneticBasis> {
    let m = &lap.matrix;
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::EigenFailure(format!(
            "laplacian must be square and non-empty, got {}x{}",
            n,
            m.ncols()
        )));
    }
    let residual = hermitian_residual(m);
    if residual > 1e-10 {
        return Err(Error::EigenFailure(format!(
            "matrix is not Hermitian: residual {residual:.3e}"
        )));
    }

    let (mut vals, mut vecs) = if m.iter().all(|z| z.im == 0.0) {
        let real = m.map(|z| z.re);
        let eig = real
            .symmetric_eigen()
            .try_sort_and_check(n)
            .ok_or_else(|| Error::EigenFailure("real symmetric solver failed".into()))?;
        (eig.0, eig.1.map(|x| C64::new(x, 0.0)))
    } else {
        let eig = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITER)
            .ok_or_else(|| Error::EigenFailure("Hermitian solver did not converge".into()))?;
        (eig.eigenvalues, eig.eigenvectors)
    };

    sort_ascending(&mut vals, &mut vecs);
    fix_phases(&mut vecs);

    Ok(MagneticBasis {
        q: lap.q,
        u: vecs,
        eigenvalues: vals,
        laplacian: m.clone(),
    })
}

/// Convenience composition: adjacency → normalized Laplacian → basis.
pub fn magnetic_basis(a: &DMatrix<f64>, q: f64) -> Result<MagneticBasis> {
    eigendecompose(&normalized_magnetic_laplacian(a, q))
}

/// Graph Fourier transform `X̃ = U† X`.
pub fn gft(basis: &MagneticBasis, x: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    check_rows(basis, x.nrows())?;
    Ok(basis.u.adjoint() * x)
}

/// GFT of a real signal matrix.
pub fn gft_real(basis: &MagneticBasis, x: &DMatrix<f64>) -> Result<DMatrix<C64>> {
    check_rows(basis, x.nrows())?;
    Ok(basis.u.adjoint() * x.map(|v| C64::new(v, 0.0)))
}

/// Inverse graph Fourier transform `X = U X̃`.
pub fn igft(basis: &MagneticBasis, x: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    check_rows(basis, x.nrows())?;
    Ok(&basis.u * x)
}

fn check_rows(basis: &MagneticBasis, rows: usize) -> Result<()> {
    if rows != basis.n() {
        return Err(Error::DimensionMismatch {
            what: "graph signal rows".into(),
            expected: basis.n(),
            actual: rows,
        });
    }
    Ok(())
}

fn sort_ascending(vals: &mut DVector<f64>, vecs: &mut DMatrix<C64>) {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).expect("finite eigenvalues"));
    let sorted_vals = DVector::from_iterator(n, order.iter().map(|&k| vals[k]));
    let mut sorted_vecs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vecs.set_column(dst, &vecs.column(src));
    }
    *vals = sorted_vals;
    *vecs = sorted_vecs;
}

/// Rotates each column so its largest-magnitude entry is real and positive.
/// Ties go to the lowest row index (strict comparison keeps the first max).
fn fix_phases(vecs: &mut DMatrix<C64>) {
    let n = vecs.nrows();
    for c in 0..n {
        let mut best = 0usize;
        let mut best_norm = vecs[(0, c)].norm();
        for r in 1..n {
            let nr = vecs[(r, c)].norm();
            if nr > best_norm {
                best = r;
                best_norm = nr;
            }
        }
        if best_norm == 0.0 {
            continue;
        }
        let factor = vecs[(best, c)].conj() / C64::new(best_norm, 0.0);
        for r in 0..n {
            vecs[(r, c)] *= factor;
        }
        // Pin the anchor exactly; its imaginary part is zero by construction.
        vecs[(best, c)] = C64::new(best_norm, 0.0);
    }
}

/// Adapter so the real path mirrors the complex one.
trait RealEigenExt {
    fn try_sort_and_check(self, n: usize) -> Option<(DVector<f64>, DMatrix<f64>)>;
}

impl RealEigenExt for nalgebra::SymmetricEigen<f64, nalgebra::Dyn> {
    fn try_sort_and_check(self, n: usize) -> Option<(DVector<f64>, DMatrix<f64>)> {
        if self.eigenvalues.len() == n {
            Some((self.eigenvalues, self.eigenvectors))
        } else {
            None
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BasisRepr {
    q: f64,
    n: usize,
    eigenvalues: Vec<f64>,
    u_re: Vec<f64>,
    u_im: Vec<f64>,
    lap_re: Vec<f64>,
    lap_im: Vec<f64>,
}

impl From<MagneticBasis> for BasisRepr {
    fn from(b: MagneticBasis) -> Self {
        let n = b.n();
        let flat = |m: &DMatrix<C64>, f: fn(&C64) -> f64| -> Vec<f64> {
            (0..n)
                .flat_map(|r| (0..n).map(move |c| (r, c)))
                .map(|(r, c)| f(&m[(r, c)]))
                .collect()
        };
        BasisRepr {
            q: b.q,
            n,
            eigenvalues: b.eigenvalues.iter().copied().collect(),
            u_re: flat(&b.u, |z| z.re),
            u_im: flat(&b.u, |z| z.im),
            lap_re: flat(&b.laplacian, |z| z.re),
            lap_im: flat(&b.laplacian, |z| z.im),
        }
    }
}

impl From<BasisRepr> for MagneticBasis {
    fn from(r: BasisRepr) -> Self {
        let n = r.n;
        let unflat = |re: &[f64], im: &[f64]| {
            DMatrix::from_fn(n, n, |i, j| C64::new(re[i * n + j], im[i * n + j]))
        };
        MagneticBasis {
            q: r.q,
            u: unflat(&r.u_re, &r.u_im),
            eigenvalues: DVector::from_vec(r.eigenvalues),
            laplacian: unflat(&r.lap_re, &r.lap_im),
        }
    }
}
