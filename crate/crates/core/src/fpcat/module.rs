//! Modules over explicit rings: finite presentations over PID-class rings and
//! action-matrix modules over finite-dimensional algebras, behind one interface.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::fdalgebra::FdAlgebra;
use super::ring::{Elem, EngineKind, ExplicitRing, PidView};
use crate::error::{Error, Result};
use crate::kernel::matrix::{permutation_matrix, qlin, Matrix, QField, Ring};
use crate::kernel::rational::Rational;
use crate::kernel::snf::{self, smith, Euclid};

/// `coker(rel: R^m -> R^gens)`; columns of `rel` are relators.
#[derive(Clone, Debug, PartialEq)]
pub struct PresentedModule {
    pub ring: ExplicitRing,
    pub gens: usize,
    pub rel: Matrix<Elem>,
}

/// A module over a finite-dimensional algebra: a Q-vector space with one
/// action matrix per algebra basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct FdModule {
    pub ring: ExplicitRing,
    pub alg: Arc<FdAlgebra>,
    pub dim: usize,
    pub action: Vec<Matrix<Rational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Module {
    Pid(PresentedModule),
    Fd(FdModule),
}

/// `f(e_j) = sum_i matrix[i][j] e'_i`. Entries are ring elements for
/// presented modules and `Elem::Q` coordinates for finite-dimensional ones.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMorphism {
    pub source: Module,
    pub target: Module,
    pub matrix: Matrix<Elem>,
}

pub(crate) fn to_q(m: &Matrix<Elem>) -> Matrix<Rational> {
    m.map(|e| e.as_q().clone())
}

pub(crate) fn to_e(m: &Matrix<Rational>) -> Matrix<Elem> {
    m.map(|c| Elem::Q(c.clone()))
}

fn fd_alg(ring: &ExplicitRing) -> Result<Arc<FdAlgebra>> {
    if let ExplicitRing::FiniteDim(a) = ring {
        return Ok(a.clone());
    }
    ring.fd_algebra()
        .map(Arc::new)
        .ok_or_else(|| Error::UnsupportedRing(format!("{} is not finite-dimensional", ring.describe())))
}

/// Q-matrix of multiplication by a ring element on the regular representation.
fn fd_left(ring: &ExplicitRing, alg: &FdAlgebra, e: &Elem) -> Matrix<Rational> {
    alg.left_mult(&ring.to_coords(e))
}

/// Q-matrix of the `A`-linear map `A^n -> A^m` given by a matrix over `A`.
fn fd_block_matrix(ring: &ExplicitRing, alg: &FdAlgebra, m: &Matrix<Elem>) -> Matrix<Rational> {
    let d = alg.dim();
    let mut out = Matrix::zeros(&QField, m.rows() * d, m.cols() * d);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let l = fd_left(ring, alg, m.get(r, c));
            for i in 0..d {
                for j in 0..d {
                    out.set(r * d + i, c * d + j, l.get(i, j).clone());
                }
            }
        }
    }
    out
}

/// Projection onto `Q^dim / im(image)` and a section of it.
fn q_quotient(dim: usize, image: &Matrix<Rational>) -> (Matrix<Rational>, Matrix<Rational>) {
    let pr = qlin::nullspace(&image.transpose()).transpose();
    let pr = if pr.rows() == 0 { Matrix::zeros(&QField, 0, dim) } else { pr };
    let sec = qlin::solve(&pr, &Matrix::identity(&QField, pr.rows())).expect("projection has full row rank");
    (pr, sec)
}

fn stack(blocks: &[Matrix<Rational>], cols: usize) -> Matrix<Rational> {
    blocks.iter().fold(Matrix::zeros(&QField, 0, cols), |acc, b| acc.vcat(b))
}

/// Rows `[a | b | c ...]` over a PID-class ring, padding is the caller's job.
fn hcat_all(blocks: &[Matrix<Elem>]) -> Matrix<Elem> {
    let mut it = blocks.iter();
    let first = it.next().expect("at least one block").clone();
    it.fold(first, |acc, b| acc.hcat(b))
}

impl FdModule {
    pub fn new(ring: ExplicitRing, dim: usize, action: Vec<Matrix<Rational>>) -> Result<Self> {
        let alg = fd_alg(&ring)?;
        let m = FdModule { ring, alg, dim, action };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let n = self.alg.dim();
        if self.action.len() != n || self.action.iter().any(|a| a.shape() != (self.dim, self.dim)) {
            return Err(Error::ShapeMismatch("one square action matrix per algebra basis element".into()));
        }
        if self.act(self.alg.unit()) != Matrix::identity(&QField, self.dim) {
            return Err(Error::NotWellDefined("unit does not act as the identity".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.action[i].mul(&QField, &self.action[j]);
                if lhs != self.act(&self.alg.mul(&self.alg.basis(i), &self.alg.basis(j))) {
                    return Err(Error::NotWellDefined(format!("action is not multiplicative on ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// Action matrix of an element given by algebra coordinates.
    pub fn act(&self, coords: &[Rational]) -> Matrix<Rational> {
        let mut m = Matrix::zeros(&QField, self.dim, self.dim);
        for (c, a) in coords.iter().zip(&self.action) {
            if !c.is_zero() {
                m = m.add(&QField, &a.scale(&QField, c));
            }
        }
        m
    }

    pub fn free(ring: &ExplicitRing, n: usize) -> Result<Self> {
        let alg = fd_alg(ring)?;
        let id = Matrix::identity(&QField, n);
        let action = (0..alg.dim()).map(|i| id.kronecker(&QField, &alg.left_mult(&alg.basis(i)))).collect();
        Ok(FdModule { ring: ring.clone(), dim: n * alg.dim(), alg, action })
    }

    fn with_actions(&self, dim: usize, action: Vec<Matrix<Rational>>) -> FdModule {
        FdModule { ring: self.ring.clone(), alg: self.alg.clone(), dim, action }
    }
}

impl PresentedModule {
    pub fn new(ring: ExplicitRing, gens: usize, rel: Matrix<Elem>) -> Result<Self> {
        if !ring.is_pid_class() {
            return Err(Error::UnsupportedRing(format!("{} is not in the PID class", ring.describe())));
        }
        if rel.rows() != gens {
            return Err(Error::ShapeMismatch(format!("relation matrix has {} rows for {gens} generators", rel.rows())));
        }
        if let Some(bad) = rel.data().iter().find(|e| !ring.contains(e)) {
            return Err(Error::InvalidInput(format!("entry {bad:?} is not in {}", ring.describe())));
        }
        Ok(PresentedModule { ring, gens, rel })
    }

    fn pv(&self) -> PidView<'_> {
        PidView { ring: &self.ring }
    }

    pub fn free(ring: &ExplicitRing, n: usize) -> Self {
        PresentedModule { ring: ring.clone(), gens: n, rel: Matrix::zeros(ring, n, 0) }
    }

    /// Smith form of the relations and the number of surviving generators.
    pub fn invariant_factors(&self) -> Vec<Elem> {
        let pv = self.pv();
        let s = smith(&pv, &self.rel);
        let rank = s.rank();
        let mut out: Vec<Elem> = s.diagonal.into_iter().filter(|d| !pv.is_unit(d)).collect();
        out.extend((rank..self.gens).map(|_| self.ring.zero()));
        out
    }
}

impl Module {
    pub fn free(ring: &ExplicitRing, n: usize) -> Result<Self> {
        Self::free_in(ring, n, ring.engine()?)
    }

    pub fn free_in(ring: &ExplicitRing, n: usize, engine: EngineKind) -> Result<Self> {
        match engine {
            EngineKind::Pid => {
                ring.pid()?;
                Ok(Module::Pid(PresentedModule::free(ring, n)))
            }
            EngineKind::FinDim => Ok(Module::Fd(FdModule::free(ring, n)?)),
        }
    }

    /// The module `coker(rel)` with `gens` generators, in the default engine.
    pub fn presented(ring: &ExplicitRing, gens: usize, rel: Matrix<Elem>) -> Result<Self> {
        Self::presented_in(ring, gens, rel, ring.engine()?)
    }

    pub fn presented_in(ring: &ExplicitRing, gens: usize, rel: Matrix<Elem>, engine: EngineKind) -> Result<Self> {
        match engine {
            EngineKind::Pid => Ok(Module::Pid(PresentedModule::new(ring.clone(), gens, rel)?)),
            EngineKind::FinDim => {
                if rel.rows() != gens {
                    return Err(Error::ShapeMismatch("relation rows must match generators".into()));
                }
                let src = Module::free_in(ring, rel.cols(), engine)?;
                let tgt = Module::free_in(ring, gens, engine)?;
                let alg = fd_alg(ring)?;
                let f = ModuleMorphism::new_unchecked(src, tgt, to_e(&fd_block_matrix(ring, &alg, &rel)));
                Ok(f.cokernel().0)
            }
        }
    }

    pub fn zero(ring: &ExplicitRing, engine: EngineKind) -> Result<Self> {
        Self::free_in(ring, 0, engine)
    }

    pub fn ring(&self) -> &ExplicitRing {
        match self {
            Module::Pid(m) => &m.ring,
            Module::Fd(m) => &m.ring,
        }
    }

    pub fn engine(&self) -> EngineKind {
        match self {
            Module::Pid(_) => EngineKind::Pid,
            Module::Fd(_) => EngineKind::FinDim,
        }
    }

    /// Length of the coefficient vectors describing elements: generators for
    /// presentations, Q-dimension for finite-dimensional modules.
    pub fn gens(&self) -> usize {
        match self {
            Module::Pid(m) => m.gens,
            Module::Fd(m) => m.dim,
        }
    }

    fn mat_ring(&self) -> MatRing<'_> {
        match self {
            Module::Pid(m) => MatRing::Pid(m.pv()),
            Module::Fd(_) => MatRing::Q,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Module::Fd(m) => m.dim == 0,
            Module::Pid(m) => m.ring.is_zero_ring() || m.invariant_factors().is_empty(),
        }
    }

    /// Dimension over Q, `None` when infinite.
    pub fn q_dimension(&self) -> Option<usize> {
        match self {
            Module::Fd(m) => Some(m.dim),
            Module::Pid(m) => {
                let mut total = 0;
                for d in m.invariant_factors() {
                    total += order_q_dimension(&m.ring, &d)?;
                }
                Some(total)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Module::Pid(m) => {
                let inv = m.invariant_factors();
                if inv.is_empty() {
                    return "0".into();
                }
                let parts: Vec<String> = inv
                    .iter()
                    .map(|d| {
                        if m.ring.is_zero(d) {
                            m.ring.describe()
                        } else {
                            format!("{}/({})", m.ring.describe(), m.ring.display(d))
                        }
                    })
                    .collect();
                parts.join(" + ")
            }
            Module::Fd(m) => format!("Q^{} over {}", m.dim, m.ring.describe()),
        }
    }

    /// Whether two coefficient vectors name the same element.
    pub fn elements_equal(&self, a: &[Elem], b: &[Elem]) -> bool {
        let r = self.mat_ring();
        let diff: Vec<Elem> = a.iter().zip(b).map(|(x, y)| r.sub(x, y)).collect();
        self.element_is_zero(&diff)
    }

    pub fn element_is_zero(&self, v: &[Elem]) -> bool {
        match self {
            Module::Fd(_) => v.iter().all(|e| e.as_q().is_zero()),
            Module::Pid(m) => {
                let pv = m.pv();
                snf::solve(&pv, &m.rel, &Matrix::column_vector(v.to_vec())).is_some()
            }
        }
    }

    pub fn add_elements(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let r = self.mat_ring();
        a.iter().zip(b).map(|(x, y)| r.add(x, y)).collect()
    }

    pub fn sub_elements(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let r = self.mat_ring();
        a.iter().zip(b).map(|(x, y)| r.sub(x, y)).collect()
    }

    /// The submodule of a finite-dimensional module spanned by the columns of
    /// `basis` (assumed stable under the action).
    pub fn fd_submodule(&self, basis: &Matrix<Rational>) -> Result<Module> {
        match self {
            Module::Fd(m) => {
                let action = m
                    .action
                    .iter()
                    .map(|x| {
                        qlin::solve(basis, &x.mul(&QField, basis))
                            .ok_or_else(|| Error::NotWellDefined("span is not a submodule".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Module::Fd(m.with_actions(basis.cols(), action)))
            }
            Module::Pid(_) => Err(Error::UnsupportedRing("submodule spans need the finite-dimensional engine".into())),
        }
    }

    pub fn zero_element(&self) -> Vec<Elem> {
        let r = self.mat_ring();
        vec![r.zero(); self.gens()]
    }

    pub fn direct_sum(&self, other: &Module) -> Result<Module> {
        same_category(self, other)?;
        Ok(match (self, other) {
            (Module::Pid(a), Module::Pid(b)) => Module::Pid(PresentedModule {
                ring: a.ring.clone(),
                gens: a.gens + b.gens,
                rel: a.rel.direct_sum(&a.pv(), &b.rel),
            }),
            (Module::Fd(a), Module::Fd(b)) => {
                let action = a.action.iter().zip(&b.action).map(|(x, y)| x.direct_sum(&QField, y)).collect();
                Module::Fd(a.with_actions(a.dim + b.dim, action))
            }
            _ => unreachable!(),
        })
    }

    /// Injections and projections of `self (+) other`.
    pub fn direct_sum_maps(&self, other: &Module) -> Result<DirectSum> {
        let sum = self.direct_sum(other)?;
        let r = self.mat_ring();
        let (n1, n2) = (self.gens(), other.gens());
        let id1 = Matrix::identity(&r, n1);
        let id2 = Matrix::identity(&r, n2);
        let z12 = Matrix::zeros(&r, n1, n2);
        let z21 = Matrix::zeros(&r, n2, n1);
        Ok(DirectSum {
            inj1: ModuleMorphism::new_unchecked(self.clone(), sum.clone(), id1.vcat(&z21)),
            inj2: ModuleMorphism::new_unchecked(other.clone(), sum.clone(), z12.vcat(&id2)),
            proj1: ModuleMorphism::new_unchecked(sum.clone(), self.clone(), id1.hcat(&z12)),
            proj2: ModuleMorphism::new_unchecked(sum.clone(), other.clone(), z21.hcat(&id2)),
            sum,
        })
    }

    /// Tensor product over the ring.
    pub fn tensor(&self, other: &Module) -> Result<Module> {
        Ok(self.tensor_data(other)?.module)
    }

    /// The tensor product and, for finite-dimensional modules, the projection
    /// from `Q^{m n}` with a section.
    pub fn tensor_with_projection(
        &self,
        other: &Module,
    ) -> Result<(Module, Option<(Matrix<Rational>, Matrix<Rational>)>)> {
        let d = self.tensor_data(other)?;
        Ok((d.module, d.proj))
    }

    fn tensor_data(&self, other: &Module) -> Result<TensorData> {
        same_category(self, other)?;
        match (self, other) {
            (Module::Pid(a), Module::Pid(b)) => {
                let pv = a.pv();
                let p = a.rel.kronecker(&pv, &Matrix::identity(&pv, b.gens));
                let q = Matrix::identity(&pv, a.gens).kronecker(&pv, &b.rel);
                Ok(TensorData {
                    module: Module::Pid(PresentedModule { ring: a.ring.clone(), gens: a.gens * b.gens, rel: p.hcat(&q) }),
                    proj: None,
                })
            }
            (Module::Fd(a), Module::Fd(b)) => {
                let n = a.dim * b.dim;
                let ia = Matrix::identity(&QField, a.dim);
                let ib = Matrix::identity(&QField, b.dim);
                let mut rel = Matrix::zeros(&QField, n, 0);
                for (x, y) in a.action.iter().zip(&b.action) {
                    rel = rel.hcat(&x.kronecker(&QField, &ib).sub(&QField, &ia.kronecker(&QField, y)));
                }
                let (pr, sec) = q_quotient(n, &rel);
                let action = a
                    .action
                    .iter()
                    .map(|x| pr.mul(&QField, &x.kronecker(&QField, &ib)).mul(&QField, &sec))
                    .collect();
                let module = Module::Fd(a.with_actions(pr.rows(), action));
                Ok(TensorData { module, proj: Some((pr, sec)) })
            }
            _ => unreachable!(),
        }
    }

    /// `m (x) n` as an element of `self (x) other`.
    pub fn tensor_element(&self, other: &Module, m: &[Elem], n: &[Elem]) -> Result<Vec<Elem>> {
        let data = self.tensor_data(other)?;
        let r = self.mat_ring();
        let mut v = Vec::with_capacity(m.len() * n.len());
        for x in m {
            for y in n {
                v.push(r.mul(x, y));
            }
        }
        Ok(match data.proj {
            None => v,
            Some((pr, _)) => to_e(&pr.mul(&QField, &to_q(&Matrix::column_vector(v)))).col(0),
        })
    }

    /// `M (x) N -> N (x) M`.
    pub fn braiding(&self, other: &Module) -> Result<ModuleMorphism> {
        let ab = self.tensor_data(other)?;
        let ba = other.tensor_data(self)?;
        let (n1, n2) = (self.gens(), other.gens());
        let perm: Vec<usize> = (0..n1 * n2).map(|k| (k % n2) * n1 + k / n2).collect();
        let r = self.mat_ring();
        let p = permutation_matrix(&r, &perm);
        let matrix = match (&ab.proj, &ba.proj) {
            (Some((_, sec)), Some((pr, _))) => to_e(&pr.mul(&QField, &to_q(&p)).mul(&QField, sec)),
            _ => p,
        };
        Ok(ModuleMorphism::new_unchecked(ab.module, ba.module, matrix))
    }

    /// The unit object: the ring as a module over itself.
    pub fn unit_object(ring: &ExplicitRing, engine: EngineKind) -> Result<Module> {
        Module::free_in(ring, 1, engine)
    }

    /// Right unitor `M (x) R -> M` and its inverse.
    pub fn unitor(&self) -> Result<(ModuleMorphism, ModuleMorphism)> {
        let unit = Module::unit_object(self.ring(), self.engine())?;
        let data = self.tensor_data(&unit)?;
        match (self, &data.proj) {
            (Module::Pid(_), _) => {
                let id = Matrix::identity(&self.mat_ring(), self.gens());
                Ok((
                    ModuleMorphism::new_unchecked(data.module.clone(), self.clone(), id.clone()),
                    ModuleMorphism::new_unchecked(self.clone(), data.module, id),
                ))
            }
            (Module::Fd(m), Some((pr, sec))) => {
                let d = m.alg.dim();
                let mut u = Matrix::zeros(&QField, m.dim, m.dim * d);
                let mut back = Matrix::zeros(&QField, m.dim * d, m.dim);
                for i in 0..m.dim {
                    for j in 0..d {
                        for k in 0..m.dim {
                            u.set(k, i * d + j, m.action[j].get(k, i).clone());
                        }
                        back.set(i * d + j, i, m.alg.unit()[j].clone());
                    }
                }
                Ok((
                    ModuleMorphism::new_unchecked(data.module.clone(), self.clone(), to_e(&u.mul(&QField, sec))),
                    ModuleMorphism::new_unchecked(self.clone(), data.module, to_e(&pr.mul(&QField, &back))),
                ))
            }
            _ => unreachable!(),
        }
    }

    /// Reduced presentation from Smith form, with mutually inverse maps
    /// `reduced -> self` and `self -> reduced`.
    pub fn simplify(&self) -> (Module, ModuleMorphism, ModuleMorphism) {
        match self {
            Module::Fd(_) => {
                let id = ModuleMorphism::identity(self);
                (self.clone(), id.clone(), id)
            }
            Module::Pid(m) => {
                let pv = m.pv();
                let s = smith(&pv, &m.rel);
                let keep: Vec<usize> = (0..m.gens).filter(|&i| i >= s.rank() || !pv.is_unit(&s.diagonal[i])).collect();
                let torsion: Vec<Elem> = keep.iter().filter(|&&i| i < s.rank()).map(|&i| s.diagonal[i].clone()).collect();
                let rel = Matrix::diagonal(&pv, keep.len(), torsion.len(), &torsion);
                let reduced = Module::Pid(PresentedModule { ring: m.ring.clone(), gens: keep.len(), rel });
                let to_self = s.left_inv.select_cols(&keep);
                let from_self = s.left.select_rows(&keep);
                (
                    reduced.clone(),
                    ModuleMorphism::new_unchecked(reduced.clone(), self.clone(), to_self),
                    ModuleMorphism::new_unchecked(self.clone(), reduced, from_self),
                )
            }
        }
    }

    pub fn hom(&self, other: &Module) -> Result<HomModule> {
        same_category(self, other)?;
        match (self, other) {
            (Module::Pid(a), Module::Pid(b)) => pid_hom(self, other, a, b),
            (Module::Fd(a), Module::Fd(b)) => {
                let mut blocks = Vec::new();
                for (x, y) in a.action.iter().zip(&b.action) {
                    let lhs = x.transpose().kronecker(&QField, &Matrix::identity(&QField, b.dim));
                    let rhs = Matrix::identity(&QField, a.dim).kronecker(&QField, y);
                    blocks.push(lhs.sub(&QField, &rhs));
                }
                let sys = stack(&blocks, a.dim * b.dim);
                let null = qlin::nullspace(&sys);
                let basis = (0..null.cols())
                    .map(|j| {
                        let m = Matrix::unvectorize(&null.col(j), b.dim, a.dim);
                        ModuleMorphism::new_unchecked(self.clone(), other.clone(), to_e(&m))
                    })
                    .collect::<Vec<_>>();
                let orders = vec![Elem::Q(Rational::zero()); basis.len()];
                Ok(HomModule { source: self.clone(), target: other.clone(), ring: ExplicitRing::Rationals, basis, orders })
            }
            _ => unreachable!(),
        }
    }
}

fn pid_hom(src: &Module, tgt: &Module, a: &PresentedModule, b: &PresentedModule) -> Result<HomModule> {
    let pv = a.pv();
    let (n, m) = (a.gens, b.gens);
    let ra = a.rel.cols();
    // F P = Q Y  <=>  (P^T (x) I_m) vec F - (I_a (x) Q) vec Y = 0
    let left = a.rel.transpose().kronecker(&pv, &Matrix::identity(&pv, m));
    let right = Matrix::identity(&pv, ra).kronecker(&pv, &b.rel).neg(&pv);
    let sys = left.hcat(&right);
    let ker = snf::kernel(&pv, &sys);
    let zf = ker.select_rows(&(0..m * n).collect::<Vec<_>>());
    // modulo the maps landing in the relations of the target
    let zero_maps = Matrix::identity(&pv, n).kronecker(&pv, &b.rel);
    let k = zf.cols();
    let rel_ker = snf::kernel(&pv, &zf.hcat(&zero_maps));
    let rel = rel_ker.select_rows(&(0..k).collect::<Vec<_>>());
    let s = smith(&pv, &rel);
    let mut basis = Vec::new();
    let mut orders = Vec::new();
    let gens = zf.mul(&pv, &s.left_inv);
    for i in 0..k {
        let order = if i < s.rank() { s.diagonal[i].clone() } else { a.ring.zero() };
        if i < s.rank() && pv.is_unit(&order) {
            continue;
        }
        let f = Matrix::unvectorize(&gens.col(i), m, n);
        basis.push(ModuleMorphism::new_unchecked(src.clone(), tgt.clone(), f));
        orders.push(order);
    }
    Ok(HomModule { source: src.clone(), target: tgt.clone(), ring: a.ring.clone(), basis, orders })
}

/// Q-dimension of `R/(d)`; `d = 0` means a free summand.
pub fn order_q_dimension(ring: &ExplicitRing, d: &Elem) -> Option<usize> {
    if ring.is_zero(d) {
        return match ring {
            ExplicitRing::Rationals => Some(1),
            ExplicitRing::Quotient { modulus, .. } => Some(modulus.deg()),
            _ => ring.q_dim(),
        };
    }
    let pv = PidView { ring };
    if pv.is_unit(d) {
        return Some(0);
    }
    Some(pv.size(d))
}

fn same_category(a: &Module, b: &Module) -> Result<()> {
    if a.ring() != b.ring() || a.engine() != b.engine() {
        return Err(Error::ShapeMismatch(format!(
            "modules over {} and {} (or different engines)",
            a.ring().describe(),
            b.ring().describe()
        )));
    }
    Ok(())
}

struct TensorData {
    module: Module,
    /// For finite-dimensional modules: projection from `Q^{m n}` and a section.
    proj: Option<(Matrix<Rational>, Matrix<Rational>)>,
}

pub struct DirectSum {
    pub sum: Module,
    pub inj1: ModuleMorphism,
    pub inj2: ModuleMorphism,
    pub proj1: ModuleMorphism,
    pub proj2: ModuleMorphism,
}

/// Ring over which morphism matrices are formed.
#[derive(Clone, Copy)]
enum MatRing<'a> {
    Pid(PidView<'a>),
    Q,
}

impl Ring for MatRing<'_> {
    type E = Elem;
    fn zero(&self) -> Elem {
        match self {
            MatRing::Pid(p) => p.zero(),
            MatRing::Q => Elem::Q(Rational::zero()),
        }
    }
    fn one(&self) -> Elem {
        match self {
            MatRing::Pid(p) => p.one(),
            MatRing::Q => Elem::Q(Rational::one()),
        }
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            MatRing::Pid(p) => p.add(a, b),
            MatRing::Q => Elem::Q(a.as_q() + b.as_q()),
        }
    }
    fn neg(&self, a: &Elem) -> Elem {
        match self {
            MatRing::Pid(p) => p.neg(a),
            MatRing::Q => Elem::Q(-a.as_q()),
        }
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            MatRing::Pid(p) => p.mul(a, b),
            MatRing::Q => Elem::Q(a.as_q() * b.as_q()),
        }
    }
    fn is_zero(&self, a: &Elem) -> bool {
        match self {
            MatRing::Pid(p) => p.is_zero(a),
            MatRing::Q => a.as_q().is_zero(),
        }
    }
    fn eq_elem(&self, a: &Elem, b: &Elem) -> bool {
        match self {
            MatRing::Pid(p) => p.eq_elem(a, b),
            MatRing::Q => a == b,
        }
    }
}

impl ModuleMorphism {
    /// Checks shapes and that relations are mapped into relations.
    pub fn new(source: Module, target: Module, matrix: Matrix<Elem>) -> Result<Self> {
        same_category(&source, &target)?;
        if matrix.shape() != (target.gens(), source.gens()) {
            return Err(Error::ShapeMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.gens(),
                source.gens()
            )));
        }
        let f = ModuleMorphism { source, target, matrix };
        if !f.is_well_defined() {
            return Err(Error::NotWellDefined("relations are not mapped to relations".into()));
        }
        Ok(f)
    }

    pub fn new_unchecked(source: Module, target: Module, matrix: Matrix<Elem>) -> Self {
        ModuleMorphism { source, target, matrix }
    }

    pub fn is_well_defined(&self) -> bool {
        match (&self.source, &self.target) {
            (Module::Pid(a), Module::Pid(b)) => {
                if self.matrix.data().iter().any(|e| !a.ring.contains(e)) {
                    return false;
                }
                let pv = a.pv();
                snf::solve(&pv, &b.rel, &self.matrix.mul(&pv, &a.rel)).is_some()
            }
            (Module::Fd(a), Module::Fd(b)) => {
                let f = to_q(&self.matrix);
                a.action.iter().zip(&b.action).all(|(x, y)| f.mul(&QField, x) == y.mul(&QField, &f))
            }
            _ => false,
        }
    }

    pub fn identity(m: &Module) -> Self {
        let id = Matrix::identity(&m.mat_ring(), m.gens());
        ModuleMorphism { source: m.clone(), target: m.clone(), matrix: id }
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        let z = Matrix::zeros(&source.mat_ring(), target.gens(), source.gens());
        ModuleMorphism { source: source.clone(), target: target.clone(), matrix: z }
    }

    /// Multiplication by a ring element (the ring is commutative).
    pub fn multiplication(m: &Module, s: &Elem) -> Self {
        let matrix = match m {
            Module::Pid(p) => Matrix::identity(&p.pv(), p.gens).scale(&p.pv(), s),
            Module::Fd(f) => to_e(&f.act(&f.ring.to_coords(s))),
        };
        ModuleMorphism { source: m.clone(), target: m.clone(), matrix }
    }

    fn mr(&self) -> MatRing<'_> {
        self.target.mat_ring()
    }

    /// `other` after `self`.
    pub fn then(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch("composing morphisms with mismatched objects".into()));
        }
        Ok(ModuleMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.mr(), &self.matrix),
        })
    }

    pub fn add(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch("adding morphisms with different objects".into()));
        }
        Ok(ModuleMorphism { matrix: self.matrix.add(&self.mr(), &other.matrix), ..self.clone() })
    }

    pub fn neg(&self) -> ModuleMorphism {
        ModuleMorphism { matrix: self.matrix.neg(&self.mr()), ..self.clone() }
    }

    /// Scalar multiple by a rational.
    pub fn scale_q(&self, c: &Rational) -> ModuleMorphism {
        let r = self.mr();
        let s = match &self.target {
            Module::Pid(p) => p.ring.from_rational(c),
            Module::Fd(_) => Elem::Q(c.clone()),
        };
        ModuleMorphism { matrix: self.matrix.scale(&r, &s), ..self.clone() }
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        self.matrix.mul(&self.mr(), &Matrix::column_vector(v.to_vec())).col(0)
    }

    /// Equality as maps (not as matrices).
    pub fn equals(&self, other: &ModuleMorphism) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let d = self.matrix.sub(&self.mr(), &other.matrix);
        match &self.target {
            Module::Fd(_) => to_q(&d).is_zero(&QField),
            Module::Pid(b) => snf::solve(&b.pv(), &b.rel, &d).is_some(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.equals(&ModuleMorphism::zero(&self.source, &self.target))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.equals(&ModuleMorphism::identity(&self.source))
    }

    /// The kernel and its inclusion.
    pub fn kernel(&self) -> (Module, ModuleMorphism) {
        match (&self.source, &self.target) {
            (Module::Pid(a), Module::Pid(b)) => {
                let pv = a.pv();
                let n = a.gens;
                let ker = snf::kernel(&pv, &self.matrix.hcat(&b.rel));
                let z = ker.select_rows(&(0..n).collect::<Vec<_>>());
                let k = z.cols();
                let rk = snf::kernel(&pv, &z.hcat(&a.rel));
                let rel = rk.select_rows(&(0..k).collect::<Vec<_>>());
                let raw = Module::Pid(PresentedModule { ring: a.ring.clone(), gens: k, rel });
                let incl = ModuleMorphism::new_unchecked(raw.clone(), self.source.clone(), z);
                let (reduced, to_raw, _) = raw.simplify();
                (reduced, to_raw.then(&incl).expect("composable"))
            }
            (Module::Fd(a), Module::Fd(_)) => {
                let z = qlin::nullspace(&to_q(&self.matrix));
                let z = if z.cols() == 0 { Matrix::zeros(&QField, a.dim, 0) } else { z };
                let action = a
                    .action
                    .iter()
                    .map(|x| qlin::solve(&z, &x.mul(&QField, &z)).expect("kernel is a submodule"))
                    .collect();
                let k = Module::Fd(a.with_actions(z.cols(), action));
                let incl = ModuleMorphism::new_unchecked(k.clone(), self.source.clone(), to_e(&z));
                (k, incl)
            }
            _ => unreachable!(),
        }
    }

    /// The cokernel and its projection.
    pub fn cokernel(&self) -> (Module, ModuleMorphism) {
        match (&self.source, &self.target) {
            (Module::Pid(_), Module::Pid(b)) => {
                let pv = b.pv();
                let raw = Module::Pid(PresentedModule {
                    ring: b.ring.clone(),
                    gens: b.gens,
                    rel: b.rel.hcat(&self.matrix),
                });
                let proj = ModuleMorphism::new_unchecked(
                    self.target.clone(),
                    raw.clone(),
                    Matrix::identity(&pv, b.gens),
                );
                let (reduced, _, from_raw) = raw.simplify();
                (reduced, proj.then(&from_raw).expect("composable"))
            }
            (Module::Fd(_), Module::Fd(b)) => {
                let (pr, sec) = q_quotient(b.dim, &to_q(&self.matrix));
                let action = b.action.iter().map(|x| pr.mul(&QField, x).mul(&QField, &sec)).collect();
                let c = Module::Fd(b.with_actions(pr.rows(), action));
                let proj = ModuleMorphism::new_unchecked(self.target.clone(), c.clone(), to_e(&pr));
                (c, proj)
            }
            _ => unreachable!(),
        }
    }

    /// `self = incl . epi` through the image.
    pub fn image(&self) -> (Module, ModuleMorphism, ModuleMorphism) {
        match (&self.source, &self.target) {
            (Module::Pid(a), Module::Pid(b)) => {
                let pv = a.pv();
                let n = a.gens;
                let ker = snf::kernel(&pv, &self.matrix.hcat(&b.rel));
                let rel = ker.select_rows(&(0..n).collect::<Vec<_>>());
                let raw = Module::Pid(PresentedModule { ring: a.ring.clone(), gens: n, rel });
                let epi = ModuleMorphism::new_unchecked(self.source.clone(), raw.clone(), Matrix::identity(&pv, n));
                let incl = ModuleMorphism::new_unchecked(raw.clone(), self.target.clone(), self.matrix.clone());
                let (reduced, to_raw, from_raw) = raw.simplify();
                (
                    reduced,
                    epi.then(&from_raw).expect("composable"),
                    to_raw.then(&incl).expect("composable"),
                )
            }
            (Module::Fd(_), Module::Fd(b)) => {
                let f = to_q(&self.matrix);
                let basis = qlin::column_basis(&f);
                let basis = if basis.cols() == 0 { Matrix::zeros(&QField, b.dim, 0) } else { basis };
                let action = b
                    .action
                    .iter()
                    .map(|x| qlin::solve(&basis, &x.mul(&QField, &basis)).expect("image is a submodule"))
                    .collect();
                let im = Module::Fd(b.with_actions(basis.cols(), action));
                let epi = qlin::solve(&basis, &f).expect("columns lie in the image");
                (
                    im.clone(),
                    ModuleMorphism::new_unchecked(self.source.clone(), im.clone(), to_e(&epi)),
                    ModuleMorphism::new_unchecked(im, self.target.clone(), to_e(&basis)),
                )
            }
            _ => unreachable!(),
        }
    }

    pub fn is_mono(&self) -> bool {
        self.kernel().0.is_zero()
    }

    pub fn is_epi(&self) -> bool {
        self.cokernel().0.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// `f (x) g`.
    pub fn tensor(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        let src = self.source.tensor_data(&other.source)?;
        let tgt = self.target.tensor_data(&other.target)?;
        let kron = self.matrix.kronecker(&self.mr(), &other.matrix);
        let matrix = match (&src.proj, &tgt.proj) {
            (Some((_, sec)), Some((pr, _))) => to_e(&pr.mul(&QField, &to_q(&kron)).mul(&QField, sec)),
            _ => kron,
        };
        Ok(ModuleMorphism::new_unchecked(src.module, tgt.module, matrix))
    }

    /// Some well-defined `x: target -> c` with `x . self = g`.
    pub fn factor_through(&self, g: &ModuleMorphism) -> Option<ModuleMorphism> {
        if g.source != self.source {
            return None;
        }
        let (b, c) = (&self.target, &g.target);
        let x = match (b, c) {
            (Module::Pid(mb), Module::Pid(mc)) => {
                let pv = mb.pv();
                let (nb, nc, na) = (mb.gens, mc.gens, self.source.gens());
                let (qb, pc) = (mb.rel.cols(), mc.rel.cols());
                let ic = Matrix::identity(&pv, nc);
                let r1 = hcat_all(&[
                    self.matrix.transpose().kronecker(&pv, &ic),
                    Matrix::identity(&pv, na).kronecker(&pv, &mc.rel).neg(&pv),
                    Matrix::zeros(&pv, nc * na, pc * qb),
                ]);
                let r2 = hcat_all(&[
                    mb.rel.transpose().kronecker(&pv, &ic),
                    Matrix::zeros(&pv, nc * qb, pc * na),
                    Matrix::identity(&pv, qb).kronecker(&pv, &mc.rel).neg(&pv),
                ]);
                let rhs: Vec<Elem> = g.matrix.vectorize().into_iter().chain((0..nc * qb).map(|_| pv.zero())).collect();
                let sol = snf::solve(&pv, &r1.vcat(&r2), &Matrix::column_vector(rhs))?;
                Matrix::unvectorize(&sol.col(0)[..nc * nb], nc, nb)
            }
            (Module::Fd(mb), Module::Fd(mc)) => {
                let ic = Matrix::identity(&QField, mc.dim);
                let mut blocks = vec![to_q(&self.matrix).transpose().kronecker(&QField, &ic)];
                for (x, y) in mb.action.iter().zip(&mc.action) {
                    let l = x.transpose().kronecker(&QField, &ic);
                    let r = Matrix::identity(&QField, mb.dim).kronecker(&QField, y);
                    blocks.push(l.sub(&QField, &r));
                }
                let sys = stack(&blocks, mc.dim * mb.dim);
                let mut rhs = to_q(&g.matrix).vectorize();
                rhs.resize(sys.rows(), Rational::zero());
                let sol = qlin::solve(&sys, &Matrix::column_vector(rhs))?;
                to_e(&Matrix::unvectorize(&sol.col(0), mc.dim, mb.dim))
            }
            _ => return None,
        };
        Some(ModuleMorphism::new_unchecked(b.clone(), c.clone(), x))
    }

    /// Some well-defined `y: f.source -> self.source` with `self . y = f`.
    pub fn lift(&self, f: &ModuleMorphism) -> Option<ModuleMorphism> {
        if f.target != self.target {
            return None;
        }
        let (m, p) = (&self.source, &f.source);
        let y = match (m, p, &self.target) {
            (Module::Pid(mm), Module::Pid(mp), Module::Pid(mn)) => {
                let pv = mm.pv();
                let (nm, np, nn) = (mm.gens, mp.gens, mn.gens);
                let (am, ap, bn) = (mm.rel.cols(), mp.rel.cols(), mn.rel.cols());
                let ip = Matrix::identity(&pv, np);
                let r1 = hcat_all(&[
                    ip.kronecker(&pv, &self.matrix),
                    ip.kronecker(&pv, &mn.rel).neg(&pv),
                    Matrix::zeros(&pv, nn * np, am * ap),
                ]);
                let r2 = hcat_all(&[
                    mp.rel.transpose().kronecker(&pv, &Matrix::identity(&pv, nm)),
                    Matrix::zeros(&pv, nm * ap, bn * np),
                    Matrix::identity(&pv, ap).kronecker(&pv, &mm.rel).neg(&pv),
                ]);
                let rhs: Vec<Elem> = f.matrix.vectorize().into_iter().chain((0..nm * ap).map(|_| pv.zero())).collect();
                let sol = snf::solve(&pv, &r1.vcat(&r2), &Matrix::column_vector(rhs))?;
                Matrix::unvectorize(&sol.col(0)[..nm * np], nm, np)
            }
            (Module::Fd(mm), Module::Fd(mp), Module::Fd(_)) => {
                let mut blocks = vec![Matrix::identity(&QField, mp.dim).kronecker(&QField, &to_q(&self.matrix))];
                for (x, y) in mp.action.iter().zip(&mm.action) {
                    let l = x.transpose().kronecker(&QField, &Matrix::identity(&QField, mm.dim));
                    let r = Matrix::identity(&QField, mp.dim).kronecker(&QField, y);
                    blocks.push(l.sub(&QField, &r));
                }
                let sys = stack(&blocks, mm.dim * mp.dim);
                let mut rhs = to_q(&f.matrix).vectorize();
                rhs.resize(sys.rows(), Rational::zero());
                let sol = qlin::solve(&sys, &Matrix::column_vector(rhs))?;
                to_e(&Matrix::unvectorize(&sol.col(0), mm.dim, mp.dim))
            }
            _ => return None,
        };
        Some(ModuleMorphism::new_unchecked(p.clone(), m.clone(), y))
    }

    /// Two-sided inverse, if this is an isomorphism.
    pub fn inverse(&self) -> Option<ModuleMorphism> {
        let x = self.factor_through(&ModuleMorphism::identity(&self.source))?;
        x.then(self).ok()?.is_identity().then_some(x)
    }
}

/// `Hom(M, N)` as generators with annihilator orders over `ring`; a zero order
/// marks a free summand. Finite-dimensional modules give a Q-basis.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub source: Module,
    pub target: Module,
    pub ring: ExplicitRing,
    pub basis: Vec<ModuleMorphism>,
    pub orders: Vec<Elem>,
}

impl HomModule {
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Number of free generators.
    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|o| self.ring.is_zero(o)).count()
    }

    pub fn q_dimension(&self) -> Option<usize> {
        self.orders.iter().map(|o| order_q_dimension(&self.ring, o)).sum()
    }

    /// Q-coordinates of a morphism in a Q-basis (finite-dimensional engine).
    pub fn coordinates(&self, f: &ModuleMorphism) -> Option<Vec<Rational>> {
        if self.ring != ExplicitRing::Rationals {
            return None;
        }
        let cols: Vec<Vec<Rational>> = self.basis.iter().map(|b| to_q(&b.matrix).vectorize()).collect();
        let n = to_q(&f.matrix).vectorize().len();
        let b = Matrix::from_cols(cols, n);
        let sol = qlin::solve(&b, &Matrix::column_vector(to_q(&f.matrix).vectorize()))?;
        Some(sol.col(0))
    }

    /// The morphism with Q-coordinates `c`.
    pub fn combination(&self, c: &[Rational]) -> ModuleMorphism {
        let mut acc = ModuleMorphism::zero(&self.source, &self.target);
        for (b, x) in self.basis.iter().zip(c) {
            if !x.is_zero() {
                acc = acc.add(&b.scale_q(x)).expect("same objects");
            }
        }
        acc
    }

    /// Composition algebra of an endomorphism Q-basis: column `i*n + j` holds
    /// the coordinates of `b_i . b_j`.
    pub fn endo_algebra(&self) -> Result<FdAlgebra> {
        if self.source != self.target || self.ring != ExplicitRing::Rationals {
            return Err(Error::UnsupportedRing("composition algebra needs a Q-basis of endomorphisms".into()));
        }
        let n = self.basis.len();
        let mut mult = Matrix::zeros(&QField, n, n * n);
        for i in 0..n {
            for j in 0..n {
                let prod = self.basis[j].then(&self.basis[i])?;
                let c = self.coordinates(&prod).ok_or_else(|| Error::NotWellDefined("composite outside Hom".into()))?;
                for (k, v) in c.into_iter().enumerate() {
                    mult.set(k, i * n + j, v);
                }
            }
        }
        let unit = self
            .coordinates(&ModuleMorphism::identity(&self.source))
            .ok_or_else(|| Error::NotWellDefined("identity outside Hom".into()))?;
        FdAlgebra::new(mult, unit)
    }
}

/// Smith normal form with a ring-class check.
pub fn smith_normal_form(ring: &ExplicitRing, m: &Matrix<Elem>) -> Result<snf::SmithDecomposition<Elem>> {
    let pv = ring.pid()?;
    Ok(smith(&pv, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::Poly;

    fn qx() -> ExplicitRing {
        ExplicitRing::poly("x")
    }

    fn px(cs: &[i64]) -> Elem {
        Elem::P(Poly::from_ints(cs))
    }

    fn cyclic(ring: &ExplicitRing, d: Elem) -> Module {
        Module::presented(ring, 1, Matrix::from_vec(1, 1, vec![d])).unwrap()
    }

    #[test]
    fn multiplication_by_x_on_polys() {
        let a = Module::free(&qx(), 1).unwrap();
        let f = ModuleMorphism::multiplication(&a, &px(&[0, 1]));
        assert!(f.is_mono());
        assert!(!f.is_epi());
        assert_eq!(f.cokernel().0.q_dimension(), Some(1));
    }

    #[test]
    fn kernel_on_nilpotent_quotient() {
        let r = ExplicitRing::quotient("x", &Poly::from_ints(&[0, 0, 1]), 12).unwrap();
        let a = Module::free(&r, 1).unwrap();
        assert_eq!(a.engine(), EngineKind::FinDim);
        let f = ModuleMorphism::multiplication(&a, &px(&[0, 1]));
        let (k, incl) = f.kernel();
        assert_eq!(k.q_dimension(), Some(1));
        assert!(incl.then(&f).unwrap().is_zero());
    }

    #[test]
    fn tensor_examples() {
        let r = qx();
        let a = cyclic(&r, px(&[0, 1]));
        let b = cyclic(&r, px(&[-1, 1]));
        assert!(a.tensor(&b).unwrap().is_zero());
        let c = cyclic(&r, px(&[0, 0, 1]));
        let d = cyclic(&r, px(&[0, 0, 0, 1]));
        assert_eq!(c.tensor(&d).unwrap().q_dimension(), Some(2));
    }

    #[test]
    fn hom_examples() {
        let r = qx();
        let a = cyclic(&r, px(&[0, 1]));
        let b = cyclic(&r, px(&[0, 0, 1]));
        let h = a.hom(&b).unwrap();
        assert_eq!(h.q_dimension(), Some(1));
        assert!(h.basis[0].is_well_defined());
        let free = Module::free(&r, 1).unwrap();
        assert!(a.hom(&free).unwrap().is_zero());
        let e = free.hom(&free).unwrap();
        assert_eq!(e.free_rank(), 1);
        assert_eq!(e.basis.len(), 1);
    }

    #[test]
    fn inverse_of_iso() {
        let r = qx();
        let m = Module::presented(&r, 2, Matrix::from_rows(vec![vec![px(&[0, 1])], vec![px(&[1])]], 1)).unwrap();
        let (red, to_m, from_m) = m.simplify();
        assert_eq!(red.gens(), 1);
        assert!(to_m.then(&from_m).unwrap().is_identity());
        assert!(from_m.then(&to_m).unwrap().is_identity());
        let inv = to_m.inverse().unwrap();
        assert!(inv.equals(&from_m));
    }

    #[test]
    fn fd_hom_and_unitor() {
        let r = ExplicitRing::quotient("x", &Poly::from_ints(&[-1, 0, 1]), 12).unwrap();
        let a = Module::free(&r, 1).unwrap();
        let h = a.hom(&a).unwrap();
        assert_eq!(h.basis.len(), 2);
        let alg = h.endo_algebra().unwrap();
        assert_eq!(alg.dim(), 2);
        let (u, back) = a.unitor().unwrap();
        assert!(u.then(&back).unwrap().is_identity());
        assert!(back.then(&u).unwrap().is_identity());
        let b = a.braiding(&a).unwrap();
        let bb = b.then(&a.braiding(&a).unwrap()).unwrap();
        assert!(bb.is_identity());
    }
}
