//! Dense exact matrices over a [`Field`], with the deterministic elimination
//! kernel the rest of the library is built on: rank, inverses, kernels,
//! column spaces, affine matrix equations, and the square-central/idempotent
//! normal forms with explicit change-of-basis certificates.
//!
//! Determinism contract: elimination scans columns left to right and picks
//! the first usable row as pivot; solvers set free variables to zero; kernel
//! and column-space bases come out echelonized in a fixed order. Identical
//! inputs always produce identical certificates.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Dense matrix, row-major. Algebra elements are square; rectangular shapes
/// appear internally (stacked systems, basis columns).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Scalar matrix c*I.
    pub fn scalar(field: &Field, n: usize, c: &Scalar) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let s = f(i, j);
                assert!(s.field() == field, "entry from a different field");
                entries.push(s);
            }
        }
        Matrix { field: field.clone(), rows, cols, entries }
    }

    /// Integer grid mapped into the field; the workhorse for fixtures/tests.
    pub fn from_i64(field: &Field, grid: &[&[i64]]) -> Matrix {
        let rows = grid.len();
        let cols = if rows == 0 { 0 } else { grid[0].len() };
        Matrix::from_fn(field, rows, cols, |i, j| field.from_integer(grid[i][j]))
    }

    /// Matrix unit E_rc.
    pub fn unit(field: &Field, n: usize, r: usize, c: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        m.set(r, c, field.one());
        m
    }

    /// Builds an n x k matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, n: usize, cols: &[Vec<Scalar>]) -> Matrix {
        Matrix::from_fn(field, n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix.
    pub fn side(&self) -> usize {
        assert_eq!(self.rows, self.cols, "matrix is not square");
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(v.field() == &self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major flattening; the coordinate order used by all linear systems.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| self.get(i, j).neg())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| self.get(i, j).mul(c))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        assert!(self.field == other.field);
        Matrix::from_fn(&self.field, self.rows, other.cols, |i, j| {
            let mut acc = self.field.zero();
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise order-2 field automorphism (unitary fields only).
    pub fn conj_entries(&self) -> Result<Matrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.conj()?);
        }
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(&self.field, self.rows)
    }

    /// Some(c) when the matrix equals c*I.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        if *self == Matrix::scalar(&self.field, self.rows, &c) {
            Some(c)
        } else {
            None
        }
    }

    /// Reduced row echelon form plus pivot positions (row, col).
    /// Pivoting: lowest-index usable column, first nonzero row.
    pub fn rref(&self) -> (Matrix, Vec<(usize, usize)>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = m.get(r, c).inv();
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let factor = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j).sub(&factor.mul(m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// dim_F of the right ideal xA inside A = M_n(F): n * rank(x).
    pub fn right_ideal_dim(&self) -> usize {
        self.side() * self.rank()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.side();
        let mut aug = Matrix::zero(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().any(|&(_, c)| c >= n) {
            return None;
        }
        Some(Matrix::from_fn(&self.field, n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Echelonized kernel basis, one vector per free column, ascending.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for &(pr, pc) in &pivots {
                v[pc] = r.get(pr, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Echelonized basis of the column space (column echelon form), as vectors.
    pub fn column_space_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.transpose().rref();
        pivots.iter().map(|&(row, _)| r.row(row)).collect()
    }

    /// Solves A x = b for a single vector; deterministic (free variables 0).
    pub fn solve_vec(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, b.len());
        let mut sys = LinearSystem::new(&self.field, self.cols);
        for i in 0..self.rows {
            sys.push_equation(self.row(i), b[i].clone());
        }
        sys.solve()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// An exact linear system over an arbitrary list of scalar unknowns.
pub struct LinearSystem {
    field: Field,
    unknowns: usize,
    rows: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
}

impl LinearSystem {
    pub fn new(field: &Field, unknowns: usize) -> LinearSystem {
        LinearSystem { field: field.clone(), unknowns, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn push_equation(&mut self, coeffs: Vec<Scalar>, rhs: Scalar) {
        assert_eq!(coeffs.len(), self.unknowns);
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    fn reduced(&self) -> (Matrix, Vec<(usize, usize)>) {
        let mut aug = Matrix::zero(&self.field, self.rows.len(), self.unknowns + 1);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                aug.set(i, j, v.clone());
            }
            aug.set(i, self.unknowns, self.rhs[i].clone());
        }
        aug.rref()
    }

    /// One solution if consistent; free variables are set to zero.
    pub fn solve(&self) -> Option<Vec<Scalar>> {
        self.solve_full().map(|(p, _)| p)
    }

    /// Particular solution plus an echelonized basis of the homogeneous kernel.
    pub fn solve_full(&self) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
        let (r, pivots) = self.reduced();
        if pivots.iter().any(|&(_, c)| c == self.unknowns) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut particular = vec![self.field.zero(); self.unknowns];
        for &(pr, pc) in &pivots {
            particular[pc] = r.get(pr, self.unknowns).clone();
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut kernel = Vec::new();
        for free in 0..self.unknowns {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.unknowns];
            v[free] = self.field.one();
            for &(pr, pc) in &pivots {
                v[pc] = r.get(pr, free).neg();
            }
            kernel.push(v);
        }
        Some((particular, kernel))
    }
}

/// System of affine equations in one n x n matrix unknown. Each constraint is
/// an affine map L together with a right-hand side, read as L(X) = rhs;
/// the map is expanded over the matrix units.
pub struct MatrixEquations<'a> {
    field: Field,
    n: usize,
    constraints: Vec<(Box<dyn Fn(&Matrix) -> Matrix + 'a>, Matrix)>,
}

impl<'a> MatrixEquations<'a> {
    pub fn new(field: &Field, n: usize) -> Self {
        MatrixEquations { field: field.clone(), n, constraints: Vec::new() }
    }

    pub fn constrain(&mut self, map: impl Fn(&Matrix) -> Matrix + 'a, rhs: Matrix) {
        self.constraints.push((Box::new(map), rhs));
    }

    fn system(&self) -> LinearSystem {
        let n = self.n;
        let mut sys = LinearSystem::new(&self.field, n * n);
        let zero = Matrix::zero(&self.field, n, n);
        for (map, rhs) in &self.constraints {
            let offset = map(&zero);
            // column u of the coefficient matrix = flatten(map(E_u) - offset)
            let mut cols = Vec::with_capacity(n * n);
            for r in 0..n {
                for c in 0..n {
                    let img = map(&Matrix::unit(&self.field, n, r, c)).sub(&offset);
                    cols.push(img.flatten());
                }
            }
            let target = rhs.sub(&offset).flatten();
            let out_dim = target.len();
            for eq in 0..out_dim {
                let coeffs: Vec<Scalar> = cols.iter().map(|col| col[eq].clone()).collect();
                sys.push_equation(coeffs, target[eq].clone());
            }
        }
        sys
    }

    /// Deterministic solution (free entries zero), or None if inconsistent.
    pub fn solve(&self) -> Option<Matrix> {
        let sol = self.system().solve()?;
        let n = self.n;
        Some(Matrix::from_fn(&self.field, n, n, |i, j| sol[i * n + j].clone()))
    }
}

/// Block structure of a canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockStructure {
    /// diag(lambda*I_plus, -lambda*I_minus, J_2(lambda)^jordan_pairs).
    SquareCentral { lambda: Scalar, plus: usize, minus: usize, jordan_pairs: usize },
    /// diag(I_rank, 0).
    Projection { rank: usize },
}

/// An invertible change of basis P together with the block data, satisfying
/// P * x * P^-1 = canonical matrix, verified entry-exactly at construction.
#[derive(Debug, Clone)]
pub struct NormalFormCertificate {
    pub basis_change: Matrix,
    pub basis_change_inv: Matrix,
    pub blocks: BlockStructure,
}

impl NormalFormCertificate {
    pub fn canonical_matrix(&self, field: &Field) -> Matrix {
        let n = self.basis_change.side();
        match &self.blocks {
            BlockStructure::SquareCentral { lambda, plus, minus, jordan_pairs } => {
                let mut m = Matrix::zero(field, n, n);
                for i in 0..*plus {
                    m.set(i, i, lambda.clone());
                }
                for i in *plus..plus + minus {
                    m.set(i, i, lambda.neg());
                }
                for p in 0..*jordan_pairs {
                    let base = plus + minus + 2 * p;
                    m.set(base, base, lambda.clone());
                    m.set(base, base + 1, field.one());
                    m.set(base + 1, base + 1, lambda.clone());
                }
                m
            }
            BlockStructure::Projection { rank } => {
                let mut m = Matrix::zero(field, n, n);
                for i in 0..*rank {
                    m.set(i, i, field.one());
                }
                m
            }
        }
    }

    pub fn verify(&self, x: &Matrix) -> bool {
        let conj = self.basis_change.mul(x).mul(&self.basis_change_inv);
        conj == self.canonical_matrix(x.field())
    }
}

fn certificate_from_columns(x: &Matrix, columns: Vec<Vec<Scalar>>, blocks: BlockStructure) -> Result<NormalFormCertificate> {
    let field = x.field();
    let n = x.side();
    let q = Matrix::from_columns(field, n, &columns);
    let q_inv = q
        .inverse()
        .ok_or_else(|| Error::InvariantViolated("assembled basis is singular".into()))?;
    // basis vectors are the columns of Q, so the matrix in the new basis is Q^-1 x Q
    let cert = NormalFormCertificate { basis_change: q_inv, basis_change_inv: q, blocks };
    if !cert.verify(x) {
        return Err(Error::InvariantViolated("normal form conjugation identity failed".into()));
    }
    Ok(cert)
}

/// Extends `basis` (columns, linearly independent) by those of `extra` that
/// keep the set independent, in order. Returns the appended vectors.
fn extend_basis(field: &Field, n: usize, basis: &[Vec<Scalar>], extra: &[Vec<Scalar>], target: usize) -> Vec<Vec<Scalar>> {
    let mut current: Vec<Vec<Scalar>> = basis.to_vec();
    let mut added = Vec::new();
    for v in extra {
        if current.len() == target {
            break;
        }
        let mut trial = current.clone();
        trial.push(v.clone());
        if Matrix::from_columns(field, n, &trial).rank() == trial.len() {
            current = trial;
            added.push(v.clone());
        }
    }
    added
}

/// Canonical form of u with u^2 = lambda^2 * 1: diag(lambda*I_m, -lambda*I_n,
/// J_2(lambda)^k). When char F != 2 and lambda != 0 this is the eigenspace
/// decomposition ker(u-lambda) + ker(u+lambda) and k = 0; otherwise u-lambda
/// squares to zero and the J_2 pairs come from im(u-lambda) with chosen
/// preimages, completed by a kernel complement.
pub fn square_central_normal_form(u: &Matrix, lambda: &Scalar) -> Result<NormalFormCertificate> {
    let field = u.field().clone();
    let n = u.side();
    let lam_sq = Matrix::scalar(&field, n, &lambda.square());
    if u.mul(u) != lam_sq {
        return Err(Error::NotSquareCentral);
    }
    let char2 = field.characteristic() == 2;
    if !char2 && !lambda.is_zero() {
        let shift = Matrix::scalar(&field, n, lambda);
        let plus_basis = u.sub(&shift).kernel_basis();
        let minus_basis = u.add(&shift).kernel_basis();
        let (plus, minus) = (plus_basis.len(), minus_basis.len());
        if plus + minus != n {
            return Err(Error::InvariantViolated("eigenspaces do not fill the space".into()));
        }
        let mut columns = plus_basis;
        columns.extend(minus_basis);
        return certificate_from_columns(
            u,
            columns,
            BlockStructure::SquareCentral { lambda: lambda.clone(), plus, minus, jordan_pairs: 0 },
        );
    }
    // char 2 or lambda = 0: N = u - lambda is nilpotent of index <= 2
    let nmat = u.sub(&Matrix::scalar(&field, n, lambda));
    let image = nmat.column_space_basis();
    let r = image.len();
    let mut preimages = Vec::with_capacity(r);
    for b in &image {
        let v = nmat
            .solve_vec(b)
            .ok_or_else(|| Error::InvariantViolated("image vector without preimage".into()))?;
        preimages.push(v);
    }
    // im(N) sits inside ker(N); complete it to a basis of the kernel
    let kernel = nmat.kernel_basis();
    let completion = extend_basis(&field, n, &image, &kernel, n - r);
    if image.len() + completion.len() != n - r {
        return Err(Error::InvariantViolated("kernel completion failed".into()));
    }
    let mut columns = completion;
    for i in 0..r {
        columns.push(image[i].clone());
        columns.push(preimages[i].clone());
    }
    certificate_from_columns(
        u,
        columns,
        BlockStructure::SquareCentral { lambda: lambda.clone(), plus: n - 2 * r, minus: 0, jordan_pairs: r },
    )
}

/// Canonical form of an idempotent: diag(I_m, 0) with m = rank(e); basis
/// columns come from im(e) followed by ker(e).
pub fn idempotent_normal_form(e: &Matrix) -> Result<NormalFormCertificate> {
    let n = e.side();
    if e.mul(e) != *e {
        return Err(Error::NotIdempotent);
    }
    let mut columns = e.column_space_basis();
    let rank = columns.len();
    columns.extend(e.kernel_basis());
    if columns.len() != n {
        return Err(Error::InvariantViolated("image and kernel do not fill the space".into()));
    }
    certificate_from_columns(e, columns, BlockStructure::Projection { rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rank_and_ideal_dim() {
        let f = gf(3);
        let z = Matrix::zero(&f, 4, 4);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.right_ideal_dim(), 0);
        let id = Matrix::identity(&f, 4);
        assert_eq!(id.right_ideal_dim(), 16);
    }

    #[test]
    fn inverse_round_trip() {
        let f = gf(5);
        let m = Matrix::from_i64(&f, &[&[1, 2, 0], &[0, 1, 3], &[4, 0, 2]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let singular = Matrix::from_i64(&f, &[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn kernel_and_column_space() {
        let f = gf(2);
        let m = Matrix::from_i64(&f, &[&[1, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|s| s.is_zero()));
        let cs = m.column_space_basis();
        assert_eq!(cs.len(), m.rank());
    }

    #[test]
    fn solve_all_free_gives_zero() {
        // X = X, i.e. 0 * X = 0: all entries free, determinism forces zero
        let f = gf(2);
        let mut eqs = MatrixEquations::new(&f, 2);
        eqs.constrain(|x| x.sub(x), Matrix::zero(&f, 2, 2));
        assert_eq!(eqs.solve().unwrap(), Matrix::zero(&f, 2, 2));
    }

    #[test]
    fn solve_symmetrization_gf3() {
        let f = gf(3);
        let mut eqs = MatrixEquations::new(&f, 2);
        eqs.constrain(|x| x.add(&x.transpose()), Matrix::identity(&f, 2));
        let x = eqs.solve().unwrap();
        assert!(x.add(&x.transpose()).is_identity());
        // determinism: off-diagonal entries are free, hence zero
        assert_eq!(x, Matrix::from_i64(&f, &[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn solve_symmetrization_gf2_inconsistent() {
        let f = gf(2);
        let mut eqs = MatrixEquations::new(&f, 2);
        eqs.constrain(|x| x.add(&x.transpose()), Matrix::identity(&f, 2));
        assert!(eqs.solve().is_none());
    }

    #[test]
    fn diagonal_square_central_already_canonical() {
        let f = gf(5);
        let u = Matrix::from_i64(&f, &[&[1, 0], &[0, -1]]);
        let cert = square_central_normal_form(&u, &f.one()).unwrap();
        match &cert.blocks {
            BlockStructure::SquareCentral { plus, minus, jordan_pairs, .. } => {
                assert_eq!((*plus, *minus, *jordan_pairs), (1, 1, 0));
            }
            _ => panic!("wrong block kind"),
        }
        assert!(cert.basis_change.is_identity());
        assert!(cert.verify(&u));
    }

    #[test]
    fn nilpotent_pair_blocks_already_canonical() {
        let f = gf(3);
        let u = Matrix::from_i64(
            &f,
            &[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]],
        );
        let cert = square_central_normal_form(&u, &f.zero()).unwrap();
        match &cert.blocks {
            BlockStructure::SquareCentral { plus, minus, jordan_pairs, .. } => {
                assert_eq!((*plus, *minus, *jordan_pairs), (0, 0, 2));
            }
            _ => panic!("wrong block kind"),
        }
        assert!(cert.basis_change.is_identity());
    }

    #[test]
    fn idempotent_normal_form_rank_one() {
        let f = gf(2);
        let e = Matrix::from_i64(&f, &[&[1, 0], &[1, 0]]);
        let cert = idempotent_normal_form(&e).unwrap();
        match cert.blocks {
            BlockStructure::Projection { rank } => assert_eq!(rank, 1),
            _ => panic!("wrong block kind"),
        }
        assert!(cert.verify(&e));
        assert_eq!(
            cert.basis_change.mul(&e).mul(&cert.basis_change_inv),
            Matrix::from_i64(&f, &[&[1, 0], &[0, 0]])
        );
    }

    #[test]
    fn idempotent_normal_form_identity() {
        let f = gf(3);
        let id = Matrix::identity(&f, 4);
        let cert = idempotent_normal_form(&id).unwrap();
        match cert.blocks {
            BlockStructure::Projection { rank } => assert_eq!(rank, 4),
            _ => panic!(),
        }
        assert!(cert.basis_change.is_identity());
    }

    #[test]
    fn non_idempotent_rejected() {
        let f = gf(3);
        let m = Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]);
        assert_eq!(idempotent_normal_form(&m).unwrap_err(), Error::NotIdempotent);
    }

    #[test]
    fn non_square_central_rejected() {
        let f = gf(3);
        let m = Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]);
        assert_eq!(square_central_normal_form(&m, &f.one()).unwrap_err(), Error::NotSquareCentral);
    }

    #[test]
    fn multiplicities_match_shifted_ranks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for field in [gf(2), gf(3), gf(5)] {
            let elems = field.elements().unwrap();
            for n in [2usize, 4, 6] {
                for _ in 0..40 {
                    let lambda = elems[rng.gen_range(0..elems.len())].clone();
                    let u = crate::harness::generate::random_square_central(&field, n, &lambda, &mut rng);
                    let cert = square_central_normal_form(&u, &lambda).unwrap();
                    let BlockStructure::SquareCentral { plus, minus, jordan_pairs, .. } = cert.blocks
                    else {
                        panic!("wrong block kind")
                    };
                    assert_eq!(plus + minus + 2 * jordan_pairs, n);
                    let down = u.sub(&Matrix::scalar(&field, n, &lambda)).rank();
                    let up = u.add(&Matrix::scalar(&field, n, &lambda)).rank();
                    if field.characteristic() == 2 || lambda.is_zero() {
                        // a single eigenvalue plus nilpotent pairs
                        assert_eq!(down, jordan_pairs);
                        assert_eq!(up, jordan_pairs);
                    } else {
                        assert_eq!(jordan_pairs, 0);
                        assert_eq!(down, minus);
                        assert_eq!(up, plus);
                    }
                }
            }
        }
    }

    #[test]
    fn char2_jordan_blocks() {
        let f = gf(2);
        // u^2 = 1 with u != 1: forced into J_2(1) pairs
        let u = Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]);
        let cert = square_central_normal_form(&u, &f.one()).unwrap();
        match cert.blocks {
            BlockStructure::SquareCentral { plus, minus, jordan_pairs, .. } => {
                assert_eq!((plus, minus, jordan_pairs), (0, 0, 1));
            }
            _ => panic!(),
        }
    }
}
