//! Dense solver for the small convex subproblems produced by the SCA blocks.
//!
//! Problems have the form
//!
//! ```text
//! maximize   xᵀP₀x + q₀ᵀx + r₀          (P₀ ⪯ 0)
//! subject to xᵀPᵢx + qᵢᵀx + rᵢ ≤ 0      (Pᵢ ⪰ 0)
//!            lo_j ≤ x_j ≤ hi_j          (optional)
//! ```
//!
//! over a real vector; complex blocks are lifted to interleaved `(re, im)` pairs with
//! [`ComplexLift`]. The solver is a log-barrier interior-point method with damped Newton
//! centering and a phase-I stage that either finds a strictly feasible point or certifies
//! infeasibility. It is deterministic: identical inputs give bit-identical outputs.

use nalgebra::Cholesky;

use crate::error::{DfrcError, Result};
use crate::linalg::{hermitian_defect, real_embedding, CMatrix, CVector, RMatrix, RVector, C64};

/// Eigenvalues below this (relative to the block norm) are a hard certification error.
const PSD_FLOOR: f64 = -1e-9;
/// Default bound on the reported constraint violation of an `Optimal` point.
pub const FEAS_TOL: f64 = 1e-7;

/// `xᵀ P x` where `P` only touches the coordinates in `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadForm {
    pub support: Vec<usize>,
    pub matrix: RMatrix,
}

impl QuadForm {
    pub fn new(support: Vec<usize>, matrix: RMatrix) -> Self {
        assert_eq!(support.len(), matrix.nrows());
        assert_eq!(support.len(), matrix.ncols());
        Self { support, matrix }
    }

    /// `scale · Σ_{i∈support} x_i²`
    pub fn scaled_identity(support: Vec<usize>, scale: f64) -> Self {
        let n = support.len();
        Self::new(support, RMatrix::identity(n, n) * scale)
    }

    fn gather(&self, x: &[f64]) -> RVector {
        RVector::from_iterator(self.support.len(), self.support.iter().map(|&i| x[i]))
    }

    fn value(&self, x: &[f64]) -> f64 {
        let xs = self.gather(x);
        xs.dot(&(&self.matrix * &xs))
    }

    fn add_gradient(&self, x: &[f64], grad: &mut [f64], scale: f64) {
        let px = &self.matrix * self.gather(x);
        for (a, &i) in self.support.iter().enumerate() {
            grad[i] += 2.0 * scale * px[a];
        }
    }

    fn add_hessian(&self, hess: &mut RMatrix, scale: f64) {
        for (a, &i) in self.support.iter().enumerate() {
            for (b, &j) in self.support.iter().enumerate() {
                hess[(i, j)] += 2.0 * scale * self.matrix[(a, b)];
            }
        }
    }

    /// Symmetrizes, certifies the sign and clips eigenvalue noise.
    fn certify(&mut self, sign: f64) -> Result<()> {
        let sym = (&self.matrix + self.matrix.transpose()) * 0.5;
        let scale = sym.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let eig = (sym.clone() * sign).symmetric_eigen();
        let min = eig.eigenvalues.min();
        if min < PSD_FLOOR * scale.max(1.0) {
            return Err(DfrcError::NotDefinite(if sign > 0.0 {
                "positive semidefinite"
            } else {
                "negative semidefinite"
            }));
        }
        if min < 0.0 {
            let clipped = eig.eigenvalues.map(|v| v.max(0.0));
            let v = &eig.eigenvectors;
            self.matrix = v * RMatrix::from_diagonal(&clipped) * v.transpose() * sign;
        } else {
            self.matrix = sym;
        }
        Ok(())
    }
}

/// `Σ xᵀPx + qᵀx + r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub quad: Vec<QuadForm>,
    pub linear: RVector,
    pub constant: f64,
}

impl Quadratic {
    pub fn zero(dim: usize) -> Self {
        Self {
            quad: Vec::new(),
            linear: RVector::zeros(dim),
            constant: 0.0,
        }
    }

    pub fn linear(linear: RVector, constant: f64) -> Self {
        Self {
            quad: Vec::new(),
            linear,
            constant,
        }
    }

    pub fn with_quad(mut self, q: QuadForm) -> Self {
        self.quad.push(q);
        self
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let lin: f64 = self.linear.iter().zip(x).map(|(a, b)| a * b).sum();
        self.quad.iter().map(|q| q.value(x)).sum::<f64>() + lin + self.constant
    }

    pub fn gradient(&self, x: &[f64]) -> RVector {
        let mut g = self.linear.clone();
        for q in &self.quad {
            q.add_gradient(x, g.as_mut_slice(), 1.0);
        }
        g
    }

    fn add_hessian(&self, hess: &mut RMatrix, scale: f64) {
        for q in &self.quad {
            q.add_hessian(hess, scale);
        }
    }

    /// Multiplies the whole function by a positive constant.
    pub fn scaled(mut self, s: f64) -> Self {
        for q in &mut self.quad {
            q.matrix *= s;
        }
        self.linear *= s;
        self.constant *= s;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexQCQP {
    pub dim: usize,
    pub objective: Quadratic,
    pub constraints: Vec<Quadratic>,
    pub bounds: Vec<Option<(f64, f64)>>,
}

impl ConvexQCQP {
    /// Certifies curvature signs (clipping eigenvalue noise) and checks dimensions.
    pub fn new(objective: Quadratic, constraints: Vec<Quadratic>, bounds: Option<Vec<(f64, f64)>>) -> Result<Self> {
        let dim = objective.dim();
        let mut objective = objective;
        for q in &mut objective.quad {
            q.certify(-1.0)?;
        }
        let mut constraints = constraints;
        for c in &mut constraints {
            if c.dim() != dim {
                return Err(DfrcError::Dimension(format!("constraint has dim {} vs {}", c.dim(), dim)));
            }
            for q in &mut c.quad {
                q.certify(1.0)?;
            }
        }
        let bounds = match bounds {
            Some(b) if b.len() != dim => {
                return Err(DfrcError::Dimension(format!("{} bounds for {} variables", b.len(), dim)))
            }
            Some(b) => b.into_iter().map(Some).collect(),
            None => vec![None; dim],
        };
        Ok(Self {
            dim,
            objective,
            constraints,
            bounds,
        })
    }

    /// All inequality constraints, bounds included, in `≤ 0` form.
    fn inequalities(&self) -> Vec<Quadratic> {
        let mut all = self.constraints.clone();
        for (i, b) in self.bounds.iter().enumerate() {
            if let Some((lo, hi)) = b {
                let mut up = RVector::zeros(self.dim);
                up[i] = 1.0;
                all.push(Quadratic::linear(up.clone(), -hi));
                all.push(Quadratic::linear(-up, *lo));
            }
        }
        all
    }

    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.inequalities()
            .iter()
            .map(|c| c.value(x))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    MaxIter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub max_violation: f64,
    pub newton_steps: usize,
}

const MU: f64 = 20.0;
const MAX_OUTER: usize = 60;
const MAX_NEWTON: usize = 200;

/// Barrier problem `minimize  −t·f₀(x) − Σ log(−fᵢ(x))`.
struct Barrier<'a> {
    objective: &'a Quadratic,
    ineq: &'a [Quadratic],
    /// Optional proximal term `reg·‖x − center‖²` (phase I only).
    reg: f64,
    center: Vec<f64>,
}

impl Barrier<'_> {
    fn strictly_feasible(&self, x: &[f64]) -> bool {
        self.ineq.iter().all(|c| c.value(x) < 0.0)
    }

    fn value(&self, x: &[f64], t: f64) -> f64 {
        let mut v = -t * self.objective.value(x);
        for c in self.ineq {
            let f = c.value(x);
            if f >= 0.0 {
                return f64::INFINITY;
            }
            v -= (-f).ln();
        }
        v + self.reg * sq_dist(x, &self.center)
    }

    fn derivatives(&self, x: &[f64], t: f64) -> (RVector, RMatrix) {
        let n = x.len();
        let mut grad = -self.objective.gradient(x) * t;
        let mut hess = RMatrix::zeros(n, n);
        self.objective.add_hessian(&mut hess, -t);
        for c in self.ineq {
            let f = c.value(x);
            let g = c.gradient(x);
            grad += &g / (-f);
            hess.ger(1.0 / (f * f), &g, &g, 1.0);
            c.add_hessian(&mut hess, 1.0 / (-f));
        }
        if self.reg > 0.0 {
            for i in 0..n {
                grad[i] += 2.0 * self.reg * (x[i] - self.center[i]);
                hess[(i, i)] += 2.0 * self.reg;
            }
        }
        (grad, hess)
    }

    /// Damped Newton centering. Returns the number of steps taken and whether the
    /// centering converged, or `None` on breakdown.
    fn center(&self, x: &mut Vec<f64>, t: f64, stop: &dyn Fn(&[f64]) -> bool) -> Option<(usize, bool)> {
        for step in 0..MAX_NEWTON {
            let (grad, hess) = self.derivatives(x, t);
            let dx = newton_direction(hess, &grad)?;
            let decrement = -grad.dot(&dx);
            if !decrement.is_finite() {
                return None;
            }
            let phi = self.value(x, t);
            // the decrement bounds φ − φ*; below the rounding level of φ there is nothing left
            if decrement / 2.0 <= 1e-10_f64.max(1e-13 * phi.abs()) {
                return Some((step, true));
            }
            let mut s = 1.0;
            let mut accepted = false;
            for _ in 0..80 {
                let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, d)| a + s * d).collect();
                if self.strictly_feasible(&trial) {
                    let v = self.value(&trial, t);
                    if v <= phi - 0.25 * s * decrement {
                        *x = trial;
                        accepted = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if !accepted {
                // no further progress representable in floating point
                return Some((step, true));
            }
            if stop(x) {
                return Some((step + 1, true));
            }
        }
        Some((MAX_NEWTON, false))
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn newton_direction(mut hess: RMatrix, grad: &RVector) -> Option<RVector> {
    let n = hess.nrows();
    let scale = (0..n).map(|i| hess[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    let mut jitter = 0.0;
    for _ in 0..8 {
        if let Some(ch) = Cholesky::new(hess.clone()) {
            let dx = ch.solve(&(-grad));
            if dx.iter().all(|v| v.is_finite()) {
                return Some(dx);
            }
        }
        let next = if jitter == 0.0 { 1e-14 * scale } else { jitter * 100.0 };
        for i in 0..n {
            hess[(i, i)] += next - jitter;
        }
        jitter = next;
    }
    None
}

/// Solves `p` to a relative duality gap of `tol`, optionally starting from `init`.
pub fn solve(p: &ConvexQCQP, tol: f64, init: Option<&[f64]>) -> SolveReport {
    let ineq = p.inequalities();
    let mut x: Vec<f64> = match init {
        Some(x0) if x0.len() == p.dim => x0.to_vec(),
        _ => vec![0.0; p.dim],
    };
    let mut steps = 0;

    let report = |status: SolveStatus, x: Vec<f64>, steps: usize| -> SolveReport {
        SolveReport {
            status,
            objective: p.objective.value(&x),
            max_violation: p.max_violation(&x),
            x,
            newton_steps: steps,
        }
    };

    if ineq.is_empty() {
        let barrier = Barrier {
            objective: &p.objective,
            ineq: &ineq,
            reg: 0.0,
            center: Vec::new(),
        };
        let (grad, hess) = barrier.derivatives(&x, 1.0);
        let status = match Cholesky::new(hess) {
            Some(ch) => {
                let dx = ch.solve(&(-grad));
                for (a, d) in x.iter_mut().zip(dx.iter()) {
                    *a += d;
                }
                SolveStatus::Optimal
            }
            None => SolveStatus::MaxIter,
        };
        return report(status, x, 1);
    }

    if !ineq.iter().all(|c| c.value(&x) < 0.0) {
        match phase_one(p.dim, &ineq, &x) {
            PhaseOne::Feasible(x1, n) => {
                x = x1;
                steps += n;
            }
            PhaseOne::Infeasible(n) => return report(SolveStatus::Infeasible, x, steps + n),
            PhaseOne::Failed(n) => return report(SolveStatus::MaxIter, x, steps + n),
        }
    }

    let barrier = Barrier {
        objective: &p.objective,
        ineq: &ineq,
        reg: 0.0,
        center: Vec::new(),
    };
    let m = ineq.len() as f64;
    let mut t = m / p.objective.value(&x).abs().max(1.0);
    for _ in 0..MAX_OUTER {
        let centered = match barrier.center(&mut x, t, &|_| false) {
            Some((n, ok)) => {
                steps += n;
                ok
            }
            None => return report(SolveStatus::MaxIter, x, steps),
        };
        let obj = p.objective.value(&x);
        if centered && m / t <= tol * obj.abs().max(1.0) {
            return report(SolveStatus::Optimal, x, steps);
        }
        t *= MU;
    }
    report(SolveStatus::MaxIter, x, steps)
}

enum PhaseOne {
    Feasible(Vec<f64>, usize),
    Infeasible(usize),
    Failed(usize),
}

/// `minimize s  s.t. fᵢ(x) ≤ s, s ≥ −1` until `s < 0`.
fn phase_one(dim: usize, ineq: &[Quadratic], x0: &[f64]) -> PhaseOne {
    let n = dim + 1;
    let lift = |c: &Quadratic| -> Quadratic {
        let mut lin = RVector::zeros(n);
        lin.rows_mut(0, dim).copy_from(&c.linear);
        lin[dim] = -1.0;
        Quadratic {
            quad: c.quad.clone(),
            linear: lin,
            constant: c.constant,
        }
    };
    let mut aug: Vec<Quadratic> = ineq.iter().map(lift).collect();
    let mut floor = RVector::zeros(n);
    floor[dim] = -1.0;
    aug.push(Quadratic::linear(floor, -1.0));

    let mut obj_lin = RVector::zeros(n);
    obj_lin[dim] = -1.0; // maximize −s
    let objective = Quadratic::linear(obj_lin, 0.0);

    let worst = ineq.iter().map(|c| c.value(x0)).fold(f64::NEG_INFINITY, f64::max);
    let mut z = x0.to_vec();
    z.push(worst.max(0.0) + 1.0);

    let barrier = Barrier {
        objective: &objective,
        ineq: &aug,
        reg: 1e-10,
        center: z.clone(),
    };
    let feasible = |z: &[f64]| ineq.iter().all(|c| c.value(&z[..dim]) < 0.0);
    let m = aug.len() as f64;
    let mut t = 1.0;
    let mut steps = 0;
    for _ in 0..MAX_OUTER {
        match barrier.center(&mut z, t, &|z| z[dim] < 0.0 && feasible(z)) {
            Some((k, _)) => steps += k,
            None => return PhaseOne::Failed(steps),
        }
        if z[dim] < 0.0 && feasible(&z) {
            z.pop();
            return PhaseOne::Feasible(z, steps);
        }
        if m / t < 1e-13 {
            return PhaseOne::Infeasible(steps);
        }
        // optimum of s is bounded below by s(z) − m/t
        if z[dim] - m / t > 0.0 {
            return PhaseOne::Infeasible(steps);
        }
        t *= MU;
    }
    PhaseOne::Failed(steps)
}

/// Maps `len` complex unknowns onto interleaved real pairs starting at `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexLift {
    pub offset: usize,
    pub len: usize,
}

impl ComplexLift {
    pub fn new(offset: usize, len: usize) -> Self {
        Self { offset, len }
    }

    pub fn real_len(&self) -> usize {
        2 * self.len
    }

    pub fn end(&self) -> usize {
        self.offset + 2 * self.len
    }

    pub fn support(&self) -> Vec<usize> {
        (self.offset..self.end()).collect()
    }

    pub fn write(&self, z: &CVector, x: &mut [f64]) {
        for (i, v) in z.iter().enumerate() {
            x[self.offset + 2 * i] = v.re;
            x[self.offset + 2 * i + 1] = v.im;
        }
    }

    pub fn read(&self, x: &[f64]) -> CVector {
        CVector::from_fn(self.len, |i, _| C64::new(x[self.offset + 2 * i], x[self.offset + 2 * i + 1]))
    }

    /// Quadratic form equal to `zᴴ M z` for Hermitian `M`.
    pub fn hermitian_form(&self, m: &CMatrix) -> Result<QuadForm> {
        if m.nrows() != self.len || m.ncols() != self.len {
            return Err(DfrcError::Dimension(format!(
                "{}x{} matrix for {} complex unknowns",
                m.nrows(),
                m.ncols(),
                self.len
            )));
        }
        let scale = m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if hermitian_defect(m) > 1e-9 * scale.max(1e-300) {
            return Err(DfrcError::NotDefinite("Hermitian"));
        }
        Ok(QuadForm::new(self.support(), real_embedding(m)))
    }

    /// Adds the real linear form equal to `scale · Re{aᴴ z}` to `linear`.
    pub fn add_real_inner(&self, a: &CVector, scale: f64, linear: &mut RVector) {
        for (i, v) in a.iter().enumerate() {
            linear[self.offset + 2 * i] += scale * v.re;
            linear[self.offset + 2 * i + 1] += scale * v.im;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::complex_gaussian;
    use crate::linalg::inner;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ball(dim: usize, radius2: f64) -> Quadratic {
        Quadratic::linear(RVector::zeros(dim), -radius2).with_quad(QuadForm::scaled_identity((0..dim).collect(), 1.0))
    }

    #[test]
    fn unconstrained_concave_quadratic() {
        let obj = Quadratic::zero(3).with_quad(QuadForm::scaled_identity(vec![0, 1, 2], -1.0));
        let p = ConvexQCQP::new(obj, vec![], None).unwrap();
        let r = solve(&p, 1e-9, Some(&[1.0, -2.0, 0.5]));
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!(r.x.iter().all(|v| v.abs() < 1e-12));
        assert!(r.objective.abs() < 1e-20);
    }

    #[test]
    fn linear_objective_over_ball() {
        let c = RVector::from_vec(vec![3.0, -4.0, 1.0]);
        let p = ConvexQCQP::new(Quadratic::linear(c.clone(), 0.0), vec![ball(3, 1.0)], None).unwrap();
        let r = solve(&p, 1e-10, None);
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - c.norm()).abs() < 1e-8 * c.norm());
        for i in 0..3 {
            assert!((r.x[i] - c[i] / c.norm()).abs() < 1e-6);
        }
        assert!(r.max_violation <= FEAS_TOL);
    }

    #[test]
    fn infeasible_is_reported() {
        // x ≤ −1 and x ≥ 1
        let a = Quadratic::linear(RVector::from_vec(vec![1.0]), 1.0);
        let b = Quadratic::linear(RVector::from_vec(vec![-1.0]), 1.0);
        let p = ConvexQCQP::new(Quadratic::linear(RVector::from_vec(vec![1.0]), 0.0), vec![a, b], None).unwrap();
        assert_eq!(solve(&p, 1e-9, None).status, SolveStatus::Infeasible);

        // ‖x‖² ≤ 1 and x₀ ≥ 2
        let c = Quadratic::linear(RVector::from_vec(vec![-1.0, 0.0]), 2.0);
        let p = ConvexQCQP::new(Quadratic::zero(2), vec![ball(2, 1.0), c], None).unwrap();
        assert_eq!(solve(&p, 1e-9, None).status, SolveStatus::Infeasible);
    }

    #[test]
    fn bounds_are_respected() {
        let obj = Quadratic::linear(RVector::from_vec(vec![1.0, -1.0]), 0.0)
            .with_quad(QuadForm::scaled_identity(vec![0, 1], -0.01));
        let p = ConvexQCQP::new(obj, vec![], Some(vec![(-0.5, 0.25), (-0.5, 0.25)])).unwrap();
        let r = solve(&p, 1e-10, Some(&[0.25, 0.25]));
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.x[0] - 0.25).abs() < 1e-7 && (r.x[1] + 0.5).abs() < 1e-7);
    }

    #[test]
    fn rejects_wrong_curvature() {
        let obj = Quadratic::zero(2).with_quad(QuadForm::scaled_identity(vec![0, 1], 1.0));
        assert!(ConvexQCQP::new(obj, vec![], None).is_err());
        let con = Quadratic::zero(2).with_quad(QuadForm::scaled_identity(vec![0, 1], -1.0));
        assert!(ConvexQCQP::new(Quadratic::zero(2), vec![con], None).is_err());
    }

    #[test]
    fn clips_tiny_negative_eigenvalues() {
        let mut m = RMatrix::identity(2, 2);
        m[(1, 1)] = -1e-12;
        let con = Quadratic::linear(RVector::zeros(2), -1.0).with_quad(QuadForm::new(vec![0, 1], m));
        let p = ConvexQCQP::new(Quadratic::zero(2), vec![con], None).unwrap();
        assert!(p.constraints[0].quad[0].matrix.symmetric_eigenvalues().min() >= 0.0);
    }

    #[test]
    fn deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_instance(&mut rng, 10);
        let a = solve(&p, 1e-9, None);
        let b = solve(&p, 1e-9, None);
        assert_eq!(a, b);
    }

    fn random_nsd(rng: &mut ChaCha8Rng, n: usize) -> RMatrix {
        let a = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        -(a.transpose() * a) * 0.5
    }

    fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> ConvexQCQP {
        let p0 = random_nsd(rng, n);
        let q0 = RVector::from_fn(n, |_, _| rng.gen_range(-3.0..3.0));
        let obj = Quadratic::linear(q0, 0.0).with_quad(QuadForm::new((0..n).collect(), p0));
        ConvexQCQP::new(obj, vec![ball(n, 2.0)], None).unwrap()
    }

    /// Projected gradient ascent on the ball, run to convergence.
    fn projected_gradient(p: &ConvexQCQP, radius: f64) -> f64 {
        let n = p.dim;
        let mut x = vec![0.0; n];
        let lip = p.objective.quad[0].matrix.symmetric_eigenvalues().amax() * 2.0 + 1e-12;
        for _ in 0..200_000 {
            let g = p.objective.gradient(&x);
            let mut y: Vec<f64> = x.iter().zip(g.iter()).map(|(a, b)| a + b / lip).collect();
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > radius {
                y.iter_mut().for_each(|v| *v *= radius / norm);
            }
            let moved = sq_dist(&x, &y);
            x = y;
            if moved < 1e-30 {
                break;
            }
        }
        p.objective.value(&x)
    }

    #[test]
    fn matches_projected_gradient_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let p = random_instance(&mut rng, 10);
            let r = solve(&p, 1e-10, None);
            assert_eq!(r.status, SolveStatus::Optimal);
            let oracle = projected_gradient(&p, 2f64.sqrt());
            assert!((r.objective - oracle).abs() < 1e-5, "{} vs {}", r.objective, oracle);
        }
    }

    #[test]
    fn beats_random_feasible_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let p = random_instance(&mut rng, 6);
        let r = solve(&p, 1e-10, None);
        for _ in 0..100 {
            let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-0.55..0.55)).collect();
            assert!(p.max_violation(&x) <= 0.0);
            assert!(p.objective.value(&x) <= r.objective + 1e-9);
        }
    }

    #[test]
    fn lift_identity_and_round_trip() {
        let lift = ComplexLift::new(1, 2);
        let form = lift.hermitian_form(&CMatrix::identity(2, 2)).unwrap();
        assert_eq!(form.support, vec![1, 2, 3, 4]);
        assert_eq!(form.matrix, RMatrix::identity(4, 4));

        let z = CVector::from_vec(vec![C64::new(0.1, 0.2), C64::new(-0.3, 0.4)]);
        let mut x = vec![9.0; 5];
        lift.write(&z, &mut x);
        assert_eq!(lift.read(&x), z);
        assert_eq!(x[0], 9.0);

        let bad = CMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(lift.hermitian_form(&bad).is_err());
    }

    #[test]
    fn lifted_forms_match_complex_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let lift = ComplexLift::new(0, 3);
        for _ in 0..50 {
            let a = CMatrix::from_fn(3, 3, |_, _| complex_gaussian(&mut rng, 1.0));
            let m = &a + a.adjoint();
            let z = CVector::from_fn(3, |_, _| complex_gaussian(&mut rng, 1.0));
            let b = CVector::from_fn(3, |_, _| complex_gaussian(&mut rng, 1.0));
            let mut x = vec![0.0; 6];
            lift.write(&z, &mut x);
            let zmz = inner(&z, &(&m * &z));
            assert!(zmz.im.abs() < 1e-12);
            let q = Quadratic::zero(6).with_quad(lift.hermitian_form(&m).unwrap());
            assert!((q.value(&x) - zmz.re).abs() < 1e-12);
            let mut lin = RVector::zeros(6);
            lift.add_real_inner(&b, 1.0, &mut lin);
            assert!((lin.dot(&RVector::from_vec(x.clone())) - inner(&b, &z).re).abs() < 1e-12);
        }
    }
}
