//! Matrix algebras with involution.
//!
//! An involution is input as a descriptor pair (kind, g): for the first kind
//! sigma(x) = g x^t g^-1 with g symmetric or antisymmetric; for unitary
//! involutions sigma(x) = g conj(x)^t g^-1 where conj is the entrywise
//! order-2 field automorphism and conj(g)^t = g. The Gram matrix of the
//! underlying (skew-)hermitian form is G = g^-1, so that sigma is the adjoint
//! involution of G.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{LinearSystem, Matrix, MatrixEquations};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvolutionKind {
    First,
    Unitary,
}

/// Kind and type of an involution. Unitary is exactly the second kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvolutionClass {
    Orthogonal,
    Symplectic,
    Unitary,
}

impl InvolutionClass {
    pub fn kind_name(&self) -> &'static str {
        match self {
            InvolutionClass::Unitary => "second",
            _ => "first",
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            InvolutionClass::Orthogonal => "orthogonal",
            InvolutionClass::Symplectic => "symplectic",
            InvolutionClass::Unitary => "unitary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceKind {
    /// Fixed elements of sigma.
    Sym,
    /// Elements x + sigma(x).
    Symd,
    /// Elements x - sigma(x).
    Alt,
}

/// Echelonized basis of Sym, Symd or Alt.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub which: SubspaceKind,
    pub basis: Vec<Matrix>,
    pub dimension: usize,
}

/// The algebra M_n(F) together with an involution descriptor.
#[derive(Clone)]
pub struct InvolutionAlgebra {
    field: Field,
    n: usize,
    kind: InvolutionKind,
    g: Matrix,
    g_inv: Matrix,
}

impl std::fmt::Debug for InvolutionAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(M_{}({}), {:?})", self.n, self.field, self.kind)
    }
}

impl InvolutionAlgebra {
    pub fn new(field: &Field, n: usize, kind: InvolutionKind, g: Matrix) -> Result<InvolutionAlgebra> {
        if g.rows() != n || g.cols() != n || g.field() != field {
            return Err(Error::SizeMismatch);
        }
        let g_inv = g.inverse().ok_or_else(|| Error::BadDescriptor("descriptor g is singular".into()))?;
        match kind {
            InvolutionKind::First => {
                let gt = g.transpose();
                if gt != g && gt != g.neg() {
                    return Err(Error::BadDescriptor(
                        "first-kind descriptor must satisfy g^t = g or g^t = -g".into(),
                    ));
                }
            }
            InvolutionKind::Unitary => {
                if !field.has_unitary() {
                    return Err(Error::NoAutomorphism);
                }
                if g.conj_entries()?.transpose() != g {
                    return Err(Error::BadDescriptor(
                        "unitary descriptor must satisfy conj(g)^t = g".into(),
                    ));
                }
            }
        }
        let alg = InvolutionAlgebra { field: field.clone(), n, kind, g, g_inv };
        // sigma must be an involution on a spanning set of matrix units
        for r in 0..n {
            for c in 0..n {
                let e = Matrix::unit(field, n, r, c);
                if alg.apply(&alg.apply(&e)) != e {
                    return Err(Error::BadDescriptor("descriptor does not square to the identity".into()));
                }
            }
        }
        Ok(alg)
    }

    /// Transpose involution on M_n(F) (g = I).
    pub fn transpose(field: &Field, n: usize) -> InvolutionAlgebra {
        InvolutionAlgebra::new(field, n, InvolutionKind::First, Matrix::identity(field, n)).unwrap()
    }

    /// Conjugate-transpose involution on M_n over a unitary field (g = I).
    pub fn conjugate_transpose(field: &Field, n: usize) -> Result<InvolutionAlgebra> {
        InvolutionAlgebra::new(field, n, InvolutionKind::Unitary, Matrix::identity(field, n))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> InvolutionKind {
        self.kind
    }

    pub fn descriptor(&self) -> &Matrix {
        &self.g
    }

    /// Gram matrix of the form the involution is adjoint to: G = g^-1.
    pub fn gram(&self) -> &Matrix {
        &self.g_inv
    }

    pub fn one(&self) -> Matrix {
        Matrix::identity(&self.field, self.n)
    }

    pub fn zero(&self) -> Matrix {
        Matrix::zero(&self.field, self.n, self.n)
    }

    pub fn char2(&self) -> bool {
        self.field.characteristic() == 2
    }

    /// sigma(x).
    pub fn apply(&self, x: &Matrix) -> Matrix {
        assert_eq!((x.rows(), x.cols()), (self.n, self.n), "size mismatch");
        let xt = match self.kind {
            InvolutionKind::First => x.transpose(),
            InvolutionKind::Unitary => x.conj_entries().expect("unitary field").transpose(),
        };
        self.g.mul(&xt).mul(&self.g_inv)
    }

    /// Value h(v, w) of the underlying form: v^t G w, conjugating v entrywise
    /// in the unitary case.
    pub fn form(&self, v: &[Scalar], w: &[Scalar]) -> Scalar {
        let gv = match self.kind {
            InvolutionKind::First => v.to_vec(),
            InvolutionKind::Unitary => v.iter().map(|s| s.conj().expect("unitary field")).collect(),
        };
        let gw = self.g_inv.mul_vec(w);
        let mut acc = self.field.zero();
        for (a, b) in gv.iter().zip(&gw) {
            acc = acc.add(&a.mul(b));
        }
        acc
    }

    /// Kind and type. In characteristic 2 the first-kind discrimination is
    /// the membership test 1 in Alt(A, sigma).
    pub fn classify(&self) -> InvolutionClass {
        match self.kind {
            InvolutionKind::Unitary => InvolutionClass::Unitary,
            InvolutionKind::First => {
                if self.char2() {
                    if self.express_in_alt(&self.one()).is_some() {
                        InvolutionClass::Symplectic
                    } else {
                        InvolutionClass::Orthogonal
                    }
                } else if self.g.transpose() == self.g {
                    InvolutionClass::Orthogonal
                } else {
                    InvolutionClass::Symplectic
                }
            }
        }
    }

    /// Spanning set of A over the field the maps x +- sigma(x) are linear
    /// over: the matrix units for the first kind, units and t-scaled units
    /// for unitary involutions (where sigma is only semilinear over F, hence
    /// linear over the prime subfield).
    fn additive_basis(&self) -> Vec<Matrix> {
        let n = self.n;
        let mut basis = Vec::new();
        let powers: Vec<Scalar> = match self.kind {
            InvolutionKind::First => vec![self.field.one()],
            InvolutionKind::Unitary => {
                let t = self.field.generator().expect("unitary field is an extension");
                let mut v = vec![self.field.one()];
                let mut acc = self.field.one();
                for _ in 1..self.field.extension_degree() {
                    acc = acc.mul(&t);
                    v.push(acc.clone());
                }
                v
            }
        };
        for r in 0..n {
            for c in 0..n {
                for p in &powers {
                    basis.push(Matrix::unit(&self.field, n, r, c).scale(p));
                }
            }
        }
        basis
    }

    /// Flattens a matrix into prime-subfield coordinates (row-major entries,
    /// each split into its components).
    fn flatten_components(&self, m: &Matrix) -> Vec<Scalar> {
        m.flatten().iter().flat_map(|s| s.components()).collect()
    }

    fn recompose(&self, comps: &[Scalar]) -> Matrix {
        let deg = match self.kind {
            InvolutionKind::First => 1,
            InvolutionKind::Unitary => self.field.extension_degree(),
        };
        let n = self.n;
        Matrix::from_fn(&self.field, n, n, |i, j| {
            let base = (i * n + j) * deg;
            if deg == 1 {
                // first kind: coordinates are field scalars already
                comps[base].clone()
            } else {
                self.field.from_components(&comps[base..base + deg])
            }
        })
    }

    /// Solves f(x) = rhs for an additive map f built from x and sigma(x).
    /// For the first kind this is an F-linear system; for unitary involutions
    /// the system is expanded over the prime subfield, since sigma is only
    /// semilinear over F. Deterministic: free coordinates are set to zero.
    pub fn solve_sigma_linear(&self, f: impl Fn(&Matrix) -> Matrix, rhs: &Matrix) -> Option<Matrix> {
        match self.kind {
            InvolutionKind::First => {
                let mut eqs = MatrixEquations::new(&self.field, self.n);
                eqs.constrain(f, rhs.clone());
                eqs.solve()
            }
            InvolutionKind::Unitary => {
                let sub = self.field.prime_subfield();
                let basis = self.additive_basis();
                let images: Vec<Vec<Scalar>> =
                    basis.iter().map(|b| self.flatten_components(&f(b))).collect();
                let target = self.flatten_components(rhs);
                let mut sys = LinearSystem::new(&sub, basis.len());
                for eq in 0..target.len() {
                    let coeffs: Vec<Scalar> = images.iter().map(|img| img[eq].clone()).collect();
                    sys.push_equation(coeffs, target[eq].clone());
                }
                let sol = sys.solve()?;
                let mut acc = self.zero();
                for (c, b) in sol.iter().zip(&basis) {
                    if !c.is_zero() {
                        let lift = self.field.from_components(std::slice::from_ref(c));
                        acc = acc.add(&b.scale(&lift));
                    }
                }
                Some(acc)
            }
        }
    }

    /// Echelonized basis of Sym, Symd or Alt. For the first kind these are
    /// F-subspaces; for unitary involutions they are only subspaces over the
    /// prime subfield and the basis/dimension are taken there.
    pub fn subspace(&self, which: SubspaceKind) -> SubspaceBasis {
        let n = self.n;
        let basis_set = self.additive_basis();
        let basis = match which {
            SubspaceKind::Symd | SubspaceKind::Alt => {
                let images: Vec<Matrix> = basis_set
                    .iter()
                    .map(|e| match which {
                        SubspaceKind::Symd => e.add(&self.apply(e)),
                        _ => e.sub(&self.apply(e)),
                    })
                    .collect();
                match self.kind {
                    InvolutionKind::First => span_basis(&self.field, n, &images),
                    InvolutionKind::Unitary => self.component_span(&images),
                }
            }
            SubspaceKind::Sym => {
                // kernel of x -> x - sigma(x) over the appropriate subfield
                let sub = match self.kind {
                    InvolutionKind::First => self.field.clone(),
                    InvolutionKind::Unitary => self.field.prime_subfield(),
                };
                let cols: Vec<Vec<Scalar>> = basis_set
                    .iter()
                    .map(|e| self.flatten_components(&e.sub(&self.apply(e))))
                    .collect();
                let rows = cols[0].len();
                let mut op = Matrix::zero(&sub, rows, cols.len());
                for (j, col) in cols.iter().enumerate() {
                    for (i, v) in col.iter().enumerate() {
                        op.set(i, j, v.clone());
                    }
                }
                op.kernel_basis()
                    .into_iter()
                    .map(|v| {
                        let mut acc = self.zero();
                        for (c, b) in v.iter().zip(&basis_set) {
                            if !c.is_zero() {
                                let lift = if self.kind == InvolutionKind::Unitary {
                                    self.field.from_components(std::slice::from_ref(c))
                                } else {
                                    c.clone()
                                };
                                acc = acc.add(&b.scale(&lift));
                            }
                        }
                        acc
                    })
                    .collect()
            }
        };
        SubspaceBasis { which, dimension: basis.len(), basis }
    }

    /// Echelonized prime-subfield span of the given matrices (unitary case).
    fn component_span(&self, mats: &[Matrix]) -> Vec<Matrix> {
        let sub = self.field.prime_subfield();
        let width = self.n * self.n * self.field.extension_degree();
        let mut stack = Matrix::zero(&sub, mats.len(), width);
        for (i, m) in mats.iter().enumerate() {
            for (j, v) in self.flatten_components(m).into_iter().enumerate() {
                stack.set(i, j, v);
            }
        }
        let (r, pivots) = stack.rref();
        pivots
            .iter()
            .map(|&(row, _)| self.recompose(&r.row(row)))
            .collect()
    }

    /// Basis of the skew elements {x : sigma(x) = -x} (first kind only;
    /// the unitary skew set is not an F-subspace).
    pub fn skew_basis(&self) -> Vec<Matrix> {
        assert_eq!(self.kind, InvolutionKind::First, "skew basis is first-kind only");
        let n = self.n;
        let mut op = Matrix::zero(&self.field, n * n, n * n);
        for r in 0..n {
            for c in 0..n {
                let e = Matrix::unit(&self.field, n, r, c);
                let img = e.add(&self.apply(&e)).flatten();
                for (row, v) in img.into_iter().enumerate() {
                    op.set(row, r * n + c, v);
                }
            }
        }
        op.kernel_basis()
            .into_iter()
            .map(|v| Matrix::from_fn(&self.field, n, n, |i, j| v[i * n + j].clone()))
            .collect()
    }

    /// An x with x + sigma(x) = 1, or None exactly when char F = 2 and sigma
    /// is orthogonal. Away from characteristic 2 this is x = 1/2.
    pub fn half_unit(&self) -> Option<Matrix> {
        if !self.char2() {
            let half = self.field.from_integer(2).inv();
            return Some(Matrix::scalar(&self.field, self.n, &half));
        }
        self.solve_sigma_linear(|x| x.add(&self.apply(x)), &self.one())
    }

    /// An x with x - sigma(x) = y, or None when y is outside Alt(A, sigma).
    pub fn express_in_alt(&self, y: &Matrix) -> Option<Matrix> {
        self.solve_sigma_linear(|x| x.sub(&self.apply(x)), y)
    }

    pub fn in_alt(&self, y: &Matrix) -> bool {
        self.express_in_alt(y).is_some()
    }

    pub fn is_skew(&self, u: &Matrix) -> bool {
        self.apply(u) == u.neg()
    }

    pub fn is_symmetric(&self, u: &Matrix) -> bool {
        self.apply(u) == *u
    }

    /// Scalars fixed by sigma restricted to the center.
    pub fn fixes_scalar(&self, lambda: &Scalar) -> bool {
        match self.kind {
            InvolutionKind::First => true,
            InvolutionKind::Unitary => lambda.conj().map(|c| c == *lambda).unwrap_or(false),
        }
    }

    /// Describes the set {alpha : u + alpha*1 lies in Alt(A, sigma)}, solving
    /// x - sigma(x) - alpha*1 = u with alpha as one extra unknown. The
    /// achievable set is empty, a single alpha, or all of F.
    pub fn alt_shifts(&self, u: &Matrix) -> AltShiftSet {
        assert_eq!(self.kind, InvolutionKind::First, "alt shifts are first-kind only");
        let n = self.n;
        let unknowns = n * n + 1;
        let mut sys = LinearSystem::new(&self.field, unknowns);
        let units: Vec<Matrix> = (0..n * n)
            .map(|k| Matrix::unit(&self.field, n, k / n, k % n))
            .collect();
        let unit_images: Vec<Vec<Scalar>> = units
            .iter()
            .map(|e| e.sub(&self.apply(e)).flatten())
            .collect();
        let target = u.flatten();
        for i in 0..n {
            for j in 0..n {
                let eq = i * n + j;
                let mut coeffs: Vec<Scalar> =
                    unit_images.iter().map(|img| img[eq].clone()).collect();
                // alpha coefficient: -delta_ij
                coeffs.push(if i == j { self.field.one().neg() } else { self.field.zero() });
                sys.push_equation(coeffs, target[eq].clone());
            }
        }
        match sys.solve_full() {
            None => AltShiftSet::Empty,
            Some((particular, kernel)) => {
                let alpha = particular[n * n].clone();
                let free = kernel.iter().any(|v| !v[n * n].is_zero());
                if free {
                    AltShiftSet::All { witness: alpha }
                } else {
                    AltShiftSet::Single(alpha)
                }
            }
        }
    }
}

/// Solutions of u + alpha in Alt(A, sigma).
#[derive(Debug, Clone)]
pub enum AltShiftSet {
    Empty,
    /// Exactly one shift works.
    Single(Scalar),
    /// Every alpha in F works (the deterministic witness is recorded).
    All { witness: Scalar },
}

/// Echelonized basis of the span of the given matrices.
pub fn span_basis(field: &Field, n: usize, mats: &[Matrix]) -> Vec<Matrix> {
    if mats.is_empty() {
        return Vec::new();
    }
    let mut stack = Matrix::zero(field, mats.len(), n * n);
    for (i, m) in mats.iter().enumerate() {
        for (j, v) in m.flatten().into_iter().enumerate() {
            stack.set(i, j, v);
        }
    }
    let (r, pivots) = stack.rref();
    pivots
        .iter()
        .map(|&(row, _)| Matrix::from_fn(field, n, n, |i, j| r.get(row, i * n + j).clone()))
        .collect()
}
