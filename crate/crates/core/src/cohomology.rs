//! Cochains on a finite group with values in the units of a commutative base, where the
//! group acts by permuting characters.
//!
//! Differentials are the inhomogeneous multiplicative ones:
//! `(d theta)(g, h) = (g . theta(h)) theta(g) / theta(gh)` and
//! `(d phi)(f, g, h) = (f . phi(g, h)) phi(f, gh) / (phi(fg, h) phi(f, g))`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::frobenius::GAction;
use crate::group::FiniteGroup;
use crate::intlin::solve_mod;
use crate::scalar::{one, root_index, root_of_unity, Real, C};

/// Dense cochain of degree `k`: `order^k` values, each an `n`-vector of nonzero complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain<T> {
    degree: usize,
    order: usize,
    n: usize,
    values: Vec<C<T>>,
}

impl<T: Real> Cochain<T> {
    /// Wraps values laid out as `((g * N + h) * N + k) * n + chi`.
    pub fn new(degree: usize, order: usize, n: usize, values: Vec<C<T>>) -> Result<Self> {
        if !(1..=4).contains(&degree) || order == 0 || n == 0 {
            return Err(Error::ShapeMismatch(format!("cochain of degree {degree}, order {order}, n {n}")));
        }
        if values.len() != order.pow(degree as u32) * n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} values, got {}",
                order.pow(degree as u32) * n,
                values.len()
            )));
        }
        let c = Self { degree, order, n, values };
        let eps = T::epsilon() * T::lit(16.0);
        for (i, v) in c.values.iter().enumerate() {
            if !(v.norm() > eps) || !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::ZeroValue { args: c.unflatten(i / n) });
            }
        }
        Ok(c)
    }

    pub fn ones(degree: usize, order: usize, n: usize) -> Self {
        Self { degree, order, n, values: vec![one(); order.pow(degree as u32) * n] }
    }

    /// Builds a cochain from `f(args, chi)`.
    pub fn from_fn(degree: usize, order: usize, n: usize, mut f: impl FnMut(&[usize], usize) -> C<T>) -> Result<Self> {
        let count = order.pow(degree as u32);
        let mut values = Vec::with_capacity(count * n);
        let mut args = vec![0; degree];
        for idx in 0..count {
            let mut r = idx;
            for slot in args.iter_mut().rev() {
                *slot = r % order;
                r /= order;
            }
            for chi in 0..n {
                values.push(f(&args, chi));
            }
        }
        Self::new(degree, order, n, values)
    }

    fn unflatten(&self, mut idx: usize) -> Vec<usize> {
        let mut args = vec![0; self.degree];
        for slot in args.iter_mut().rev() {
            *slot = idx % self.order;
            idx /= self.order;
        }
        args
    }

    fn offset(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.degree);
        args.iter().fold(0, |acc, &a| acc * self.order + a) * self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_chars(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[C<T>] {
        &self.values
    }

    /// The `n`-vector at `args`.
    pub fn at(&self, args: &[usize]) -> &[C<T>] {
        let o = self.offset(args);
        &self.values[o..o + self.n]
    }

    pub fn get(&self, args: &[usize], chi: usize) -> C<T> {
        self.values[self.offset(args) + chi]
    }

    pub fn set(&mut self, args: &[usize], chi: usize, v: C<T>) {
        let o = self.offset(args);
        self.values[o + chi] = v;
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree || self.order != other.order || self.n != other.n {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C<T>, C<T>) -> C<T>) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            ..*self
        })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Pointwise quotient.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a / b)
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect(), ..*self }
    }

    pub fn inverse(&self) -> Self {
        self.map(|v| v.inv())
    }

    /// Max-norm distance to another cochain of the same shape.
    pub fn dist(&self, other: &Self) -> Result<T> {
        self.same_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm())))
    }

    pub fn is_identity(&self, tol: T) -> bool {
        self.values.iter().all(|v| (v - one::<T>()).norm() <= tol)
    }

    /// All-ones whenever one argument is the identity.
    pub fn is_normalized(&self, tol: T) -> bool {
        (0..self.order.pow(self.degree as u32)).all(|idx| {
            let args = self.unflatten(idx);
            !args.contains(&0) || self.at(&args).iter().all(|v| (v - one::<T>()).norm() <= tol)
        })
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.values.iter().all(|v| (v.norm() - T::one()).abs() <= tol)
    }

    pub(crate) fn check_against(&self, group: &FiniteGroup, action: &GAction) -> Result<()> {
        if self.order != group.order() || self.n != action.n_chars() {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }
}

fn close<T: Real>(a: C<T>, b: C<T>, tol: T) -> bool {
    (a - b).norm() <= tol * T::one().max(a.norm()).max(b.norm())
}

/// Coboundary of a 1- or 2-cochain.
pub fn coboundary<T: Real>(group: &FiniteGroup, action: &GAction, c: &Cochain<T>) -> Result<Cochain<T>> {
    c.check_against(group, action)?;
    match c.degree {
        1 | 2 => Ok(differential(group, action, c)),
        k => Err(Error::UnsupportedDegree(k)),
    }
}

/// Differential in any stored degree, used internally for the degree-3 cocycle check.
fn differential<T: Real>(group: &FiniteGroup, action: &GAction, c: &Cochain<T>) -> Cochain<T> {
    let k = c.degree;
    let n = c.n;
    let mut out = Cochain::ones(k + 1, c.order, n);
    let mut args = vec![0; k + 1];
    for idx in 0..c.order.pow(k as u32 + 1) {
        let mut r = idx;
        for slot in args.iter_mut().rev() {
            *slot = r % c.order;
            r /= c.order;
        }
        // first term: g_0 . c(g_1, ..., g_k)
        let first = action.act_vec(args[0], c.at(&args[1..]));
        let mut val: Vec<C<T>> = first;
        for i in 1..=k {
            let mut face: Vec<usize> = args.clone();
            let merged = group.mul(face[i - 1], face[i]);
            face.splice(i - 1..=i, [merged]);
            let v = c.at(&face);
            for chi in 0..n {
                if i % 2 == 1 {
                    val[chi] /= v[chi];
                } else {
                    val[chi] *= v[chi];
                }
            }
        }
        let last = c.at(&args[..k]);
        for chi in 0..n {
            if k % 2 == 1 {
                val[chi] *= last[chi];
            } else {
                val[chi] /= last[chi];
            }
        }
        let o = out.offset(&args);
        out.values[o..o + n].copy_from_slice(&val);
    }
    out
}

/// First triple `(g, h, k)` at which the 2-cocycle identity fails, if any.
pub fn cocycle_witness<T: Real>(group: &FiniteGroup, action: &GAction, phi: &Cochain<T>, tol: T) -> Option<[usize; 3]> {
    let order = group.order();
    for g in 0..order {
        for h in 0..order {
            for k in 0..order {
                let lhs_act = action.act_vec(g, phi.at(&[h, k]));
                let a = phi.at(&[g, group.mul(h, k)]);
                let b = phi.at(&[group.mul(g, h), k]);
                let c = phi.at(&[g, h]);
                for chi in 0..phi.n {
                    if !close(lhs_act[chi] * a[chi], b[chi] * c[chi], tol) {
                        return Some([g, h, k]);
                    }
                }
            }
        }
    }
    None
}

/// `(g . phi(h,k)) phi(g,hk) = phi(gh,k) phi(g,h)` for all triples, within `tol`.
pub fn is_cocycle<T: Real>(group: &FiniteGroup, action: &GAction, phi: &Cochain<T>, tol: T) -> bool {
    phi.degree == 2
        && phi.check_against(group, action).is_ok()
        && cocycle_witness(group, action, phi, tol).is_none()
}

/// Whether a 3-cochain satisfies the 3-cocycle identity within `tol`.
pub fn is_three_cocycle<T: Real>(group: &FiniteGroup, action: &GAction, t: &Cochain<T>, tol: T) -> bool {
    t.degree == 3 && t.check_against(group, action).is_ok() && differential(group, action, t).is_identity(tol)
}

fn require_cocycle<T: Real>(group: &FiniteGroup, action: &GAction, phi: &Cochain<T>, tol: T) -> Result<()> {
    phi.check_against(group, action)?;
    if phi.degree != 2 {
        return Err(Error::ShapeMismatch(format!("expected a 2-cochain, got degree {}", phi.degree)));
    }
    match cocycle_witness(group, action, phi, tol) {
        Some(w) => Err(Error::NotACocycle(w.to_vec())),
        None => Ok(()),
    }
}

/// Splits a cocycle as `phi = d(tau) phi_u` with `tau` positive and `phi_u` unitary.
///
/// `tau(g) = (prod_k |phi(g, k)|)^(1/N)` componentwise.
pub fn unitarize<T: Real>(
    group: &FiniteGroup,
    action: &GAction,
    phi: &Cochain<T>,
    tol: T,
) -> Result<(Cochain<T>, Cochain<T>)> {
    require_cocycle(group, action, phi, tol)?;
    let order = group.order();
    let inv_n = T::one() / T::lit(order as f64);
    let tau = Cochain::from_fn(1, order, phi.n, |a, chi| {
        let s = (0..order).fold(T::zero(), |acc, k| acc + phi.get(&[a[0], k], chi).norm().ln());
        Complex::from((s * inv_n).exp())
    })?;
    let dtau = differential(group, action, &tau);
    let unit = phi.div(&dtau)?.map(|v| v / v.norm());
    Ok((unit, tau))
}

/// Finite subgroup of the unit group of the base, stable under the action.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSubgroup<T> {
    elems: Vec<Vec<C<T>>>,
}

impl<T: Real> UnitSubgroup<T> {
    pub fn new(elems: Vec<Vec<C<T>>>, action: &GAction, tol: T) -> Result<Self> {
        let n = action.n_chars();
        if elems.iter().any(|e| e.len() != n) {
            return Err(Error::BadUnitSubgroup("element of the wrong length".into()));
        }
        let s = Self { elems };
        let ones = vec![one::<T>(); n];
        if s.nearest(&ones).1 > tol {
            return Err(Error::BadUnitSubgroup("does not contain 1".into()));
        }
        for a in &s.elems {
            let inv: Vec<C<T>> = a.iter().map(|v| v.inv()).collect();
            if s.nearest(&inv).1 > tol {
                return Err(Error::BadUnitSubgroup("not closed under inverse".into()));
            }
            for b in &s.elems {
                let p: Vec<C<T>> = a.iter().zip(b).map(|(x, y)| x * y).collect();
                if s.nearest(&p).1 > tol {
                    return Err(Error::BadUnitSubgroup("not closed under product".into()));
                }
            }
            for g in 0..action.perms().len() {
                if s.nearest(&action.act_vec(g, a)).1 > tol {
                    return Err(Error::BadUnitSubgroup(format!("not stable under element {g}")));
                }
            }
        }
        Ok(s)
    }

    /// All sign vectors `{+-1}^n`.
    pub fn signs(n: usize) -> Self {
        let elems = (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { -one::<T>() } else { one() })
                    .collect()
            })
            .collect();
        Self { elems }
    }

    pub fn elements(&self) -> &[Vec<C<T>>] {
        &self.elems
    }

    /// Index and max-norm distance of the nearest member.
    pub fn nearest(&self, v: &[C<T>]) -> (usize, T) {
        self.elems
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let d = e.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()));
                (i, d)
            })
            .fold((0, T::infinity()), |best, cur| if cur.1 < best.1 { cur } else { best })
    }
}

/// The 3-cochain `T = d(phi)` snapped onto `O`.
///
/// Requires every value of `d(phi)` to lie within `tol` of a member of `O`.
pub fn obstruction_delta<T: Real>(
    group: &FiniteGroup,
    action: &GAction,
    phi: &Cochain<T>,
    o: &UnitSubgroup<T>,
    tol: T,
) -> Result<Cochain<T>> {
    phi.check_against(group, action)?;
    if phi.degree != 2 {
        return Err(Error::ShapeMismatch("obstruction needs a 2-cochain".into()));
    }
    let mut d = differential(group, action, phi);
    let count = group.order().pow(3);
    for idx in 0..count {
        let args = d.unflatten(idx);
        let (i, dist) = o.nearest(d.at(&args));
        if dist > tol {
            return Err(Error::NotOValued(args));
        }
        let off = d.offset(&args);
        d.values[off..off + d.n].copy_from_slice(&o.elems[i]);
    }
    Ok(d)
}

/// Options for [`solve_coboundary`] and [`cohomologous`].
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions<T> {
    /// Largest stabilizer order handled by exact elimination.
    pub budget: usize,
    pub tol: T,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        Self { budget: 8, tol: T::default_tol() }
    }
}

/// A 1-cochain `theta` with values in the `m`-th roots of unity and `d(theta) = psi`.
///
/// `Ok(None)` means no such cochain exists. The equations split over the orbits of the
/// action on characters; each orbit is solved exactly over `Z/m`. Orbits whose
/// stabilizer exceeds the budget fall back to a least-squares phase fit that is accepted
/// only if it verifies, and otherwise yield [`Error::SearchBudgetExceeded`].
pub fn solve_coboundary<T: Real>(
    group: &FiniteGroup,
    action: &GAction,
    psi: &Cochain<T>,
    m: u64,
    opts: SolveOptions<T>,
) -> Result<Option<Cochain<T>>> {
    psi.check_against(group, action)?;
    if psi.degree != 2 {
        return Err(Error::ShapeMismatch("coboundary solve needs a 2-cochain".into()));
    }
    let order = group.order();
    let n = psi.n;
    let m = m.max(1);
    let tol = opts.tol;

    // exponents c with psi = exp(2 pi i c / m)
    let mut c = vec![0i64; psi.values.len()];
    for (slot, &v) in c.iter_mut().zip(&psi.values) {
        match root_index(v, m, tol) {
            Some(k) => *slot = k,
            None => return Ok(None),
        }
    }

    let mut y = vec![0i64; order * n];
    for orbit in action.orbits() {
        let local: Vec<usize> = orbit.clone();
        let pos = |chi: usize| local.iter().position(|&x| x == chi).expect("same orbit");
        let w = local.len();
        // unknown y(g, chi) at column g * w + pos(chi)
        let mut rows = Vec::with_capacity(order * order * w);
        let mut rhs = Vec::with_capacity(order * order * w);
        for g in 0..order {
            let ginv = group.inv(g);
            for h in 0..order {
                let gh = group.mul(g, h);
                for &chi in &local {
                    let mut row = vec![0i64; order * w];
                    row[h * w + pos(action.image(ginv, chi))] += 1;
                    row[g * w + pos(chi)] += 1;
                    row[gh * w + pos(chi)] -= 1;
                    rows.push(row);
                    rhs.push(c[(g * order + h) * n + chi]);
                }
            }
        }
        let stab = action.stabilizer(local[0]).len();
        let sol = if stab <= opts.budget {
            match solve_mod(&rows, &rhs, m as i64) {
                Some(s) => s,
                None => return Ok(None),
            }
        } else {
            least_squares_phases(&rows, &rhs, m as i64).ok_or(Error::SearchBudgetExceeded {
                stabilizer: stab,
                budget: opts.budget,
            })?
        };
        for g in 0..order {
            for (p, &chi) in local.iter().enumerate() {
                y[g * n + chi] = sol[g * w + p];
            }
        }
    }
    let theta = Cochain::new(1, order, n, y.iter().map(|&k| root_of_unity(k, m)).collect())?;
    let check = differential(group, action, &theta).dist(psi)?;
    if check > tol * T::lit(100.0) {
        // the equations were solved exactly, so this only happens for tolerance-level inputs
        return Ok(None);
    }
    Ok(Some(theta))
}

/// Real least squares for `a y = b`, rounded to integers and verified modulo `m`.
fn least_squares_phases(a: &[Vec<i64>], b: &[i64], m: i64) -> Option<Vec<i64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mat = nalgebra::DMatrix::<f64>::from_fn(rows, cols, |i, j| a[i][j] as f64);
    let rhs = nalgebra::DVector::<f64>::from_fn(rows, |i, _| b[i] as f64);
    let sol = mat.svd(true, true).solve(&rhs, 1e-9).ok()?;
    let y: Vec<i64> = sol.iter().map(|v| (v.round() as i64).rem_euclid(m)).collect();
    let ok = a.iter().zip(b).all(|(row, &bi)| {
        let s: i64 = row.iter().zip(&y).map(|(p, q)| p * q).sum();
        (s - bi).rem_euclid(m) == 0
    });
    ok.then_some(y)
}

/// Why two cocycles are not cohomologous.
#[derive(Debug, Clone, PartialEq)]
pub enum Separation<T> {
    /// The pairing `phi(g,h)_chi / phi(h,g)_chi` on commuting `g, h` fixing `chi` differs.
    Pairing { g: usize, h: usize, chi: usize, first: C<T>, second: C<T> },
    /// Exact elimination over roots of unity found no trivializing cochain.
    NoCoboundary,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cohomologous<T> {
    /// `phi1 = phi2 * d(theta)`.
    Yes(Cochain<T>),
    No(Separation<T>),
    Unknown(String),
}

/// `phi(g,h)_chi / phi(h,g)_chi` when `g, h` commute and both fix `chi`.
pub fn pairing<T: Real>(group: &FiniteGroup, action: &GAction, phi: &Cochain<T>, g: usize, h: usize, chi: usize) -> Option<C<T>> {
    (group.mul(g, h) == group.mul(h, g) && action.fixes(g, chi) && action.fixes(h, chi))
        .then(|| phi.get(&[g, h], chi) / phi.get(&[h, g], chi))
}

/// Decides whether two 2-cocycles define the same class.
///
/// Abelian groups are decided by the pairing; otherwise by exact elimination, giving
/// `Unknown` when a stabilizer exceeds the budget.
pub fn cohomologous<T: Real>(
    group: &FiniteGroup,
    action: &GAction,
    phi1: &Cochain<T>,
    phi2: &Cochain<T>,
    opts: SolveOptions<T>,
) -> Result<Cohomologous<T>> {
    phi1.check_against(group, action)?;
    phi2.check_against(group, action)?;
    phi1.same_shape(phi2)?;
    require_cocycle(group, action, phi1, opts.tol)?;
    require_cocycle(group, action, phi2, opts.tol)?;
    let order = group.order();
    let abelian = group.is_abelian();

    if abelian {
        for g in 0..order {
            for h in 0..order {
                for chi in 0..phi1.n {
                    if let (Some(a), Some(b)) = (
                        pairing(group, action, phi1, g, h, chi),
                        pairing(group, action, phi2, g, h, chi),
                    ) {
                        if !close(a, b, opts.tol * T::lit(10.0)) {
                            return Ok(Cohomologous::No(Separation::Pairing { g, h, chi, first: a, second: b }));
                        }
                    }
                }
            }
        }
    }

    let ratio = phi1.div(phi2)?;
    let (unit, tau) = unitarize(group, action, &ratio, opts.tol)?;

    // Averaging the phases moves the unitary part into the N-th roots of unity.
    let inv_n = T::one() / T::lit(order as f64);
    let shift = Cochain::from_fn(1, order, phi1.n, |a, chi| {
        let s = (0..order).fold(T::zero(), |acc, k| acc + unit.get(&[a[0], k], chi).arg());
        Complex::from_polar(T::one(), s * inv_n)
    })?;
    let rooted = unit.div(&differential(group, action, &shift))?;

    let solve_opts = if abelian { SolveOptions { budget: usize::MAX, ..opts } } else { opts };
    let m = (order * order) as u64;
    match solve_coboundary(group, action, &rooted, m, solve_opts) {
        Ok(Some(theta)) => Ok(Cohomologous::Yes(tau.mul(&shift)?.mul(&theta)?)),
        Ok(None) if abelian => Ok(Cohomologous::Unknown("pairings agree but no coboundary was found".into())),
        Ok(None) => Ok(Cohomologous::No(Separation::NoCoboundary)),
        Err(Error::SearchBudgetExceeded { stabilizer, budget }) => Ok(Cohomologous::Unknown(format!(
            "stabilizer of order {stabilizer} exceeds budget {budget}"
        ))),
        Err(e) => Err(e),
    }
}
