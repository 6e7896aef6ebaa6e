//! The extension `A^phi` of a base by a group, with basis `E[g, chi]` for `chi` fixed by `g`.
//!
//! Structure is held as three scalar tables on the basis:
//! `E[g,chi] E[h,chi] = mult(g,h,chi) E[gh,chi]`,
//! `g(E[h,chi]) = act(g,h,chi) E[ghg^-1, g chi]` and
//! `E[g,chi]^* = theta(g,chi) E[g^-1,chi]`.
//! Algebras built by [`construct_extension`] have `mult = phi` and `act` derived from `phi`;
//! [`CrossedAlgebra::from_tables`] accepts arbitrary tables so that hand-built or rescaled
//! algebras can be verified and classified.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex;

use crate::cohomology::{cocycle_witness, solve_coboundary, unitarize, Cochain, SolveOptions};
use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusBase, GAction};
use crate::group::FiniteGroup;
use crate::scalar::{one, principal_root, zero, Real, C};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug, Clone)]
pub struct CrossedAlgebra<T> {
    id: u64,
    group: FiniteGroup,
    base: FrobeniusBase<T>,
    action: GAction,
    basis: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    mult: Vec<C<T>>,
    act: Vec<C<T>>,
    theta: Vec<C<T>>,
}

/// Element of a specific [`CrossedAlgebra`], with one coefficient per basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<T> {
    owner: u64,
    coeffs: Vec<C<T>>,
}

impl<T: Real> AlgebraElement<T> {
    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn owner(&self) -> u64 {
        self.owner
    }

    fn same_owner(&self, other: &Self) -> Result<()> {
        if self.owner == other.owner {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(Self {
            owner: self.owner,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-one::<T>()))
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { owner: self.owner, coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    /// Max-norm distance between coefficient vectors.
    pub fn dist(&self, other: &Self) -> Result<T> {
        self.same_owner(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm())))
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, a| acc.max(a.norm()))
    }
}

impl<T: Real> CrossedAlgebra<T> {
    /// Builds an algebra from explicit structure tables, each of them dense over
    /// `(g, h, chi)` (`mult`, `act`) or `(g, chi)` (`theta`) with `chi` fastest.
    ///
    /// The basis must contain every `E[1, chi]`, be closed under products of basis vectors
    /// sharing a character and under the index map `(h, chi) -> (ghg^-1, g chi)`.
    pub fn from_tables(
        group: FiniteGroup,
        base: FrobeniusBase<T>,
        action: GAction,
        basis: Vec<(usize, usize)>,
        mult: Vec<C<T>>,
        act: Vec<C<T>>,
        theta: Vec<C<T>>,
    ) -> Result<Self> {
        let order = group.order();
        let n = base.dim();
        if action.n_chars() != n || action.perms().len() != order {
            return Err(Error::BaseMismatch);
        }
        if mult.len() != order * order * n || act.len() != order * order * n || theta.len() != order * n {
            return Err(Error::ShapeMismatch("structure tables have the wrong size".into()));
        }
        let mut basis = basis;
        basis.sort_unstable();
        basis.dedup();
        let mut index = vec![None; order * n];
        for (pos, &(g, chi)) in basis.iter().enumerate() {
            if g >= order || chi >= n {
                return Err(Error::NotInBasis(g, chi));
            }
            index[g * n + chi] = Some(pos);
        }
        for chi in 0..n {
            if index[chi].is_none() {
                return Err(Error::AxiomsFail(format!("E[1,{chi}] missing from the basis")));
            }
        }
        for &(g, chi) in &basis {
            if index[group.inv(g) * n + chi].is_none() {
                return Err(Error::AxiomsFail(format!("basis has E[{g},{chi}] but not its star partner")));
            }
            for &(h, chi2) in &basis {
                if chi2 == chi && index[group.mul(g, h) * n + chi].is_none() {
                    return Err(Error::AxiomsFail(format!("product E[{g},{chi}] E[{h},{chi}] leaves the basis")));
                }
            }
            for k in 0..order {
                let c = group.conjugate(k, g);
                if index[c * n + action.image(k, chi)].is_none() {
                    return Err(Error::AxiomsFail(format!("action of {k} moves E[{g},{chi}] out of the basis")));
                }
            }
        }
        Ok(Self { id: fresh_id(), group, base, action, basis, index, mult, act, theta })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn base(&self) -> &FrobeniusBase<T> {
        &self.base
    }

    pub fn action(&self) -> &GAction {
        &self.action
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis labels `(g, chi)` in storage order.
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn position(&self, g: usize, chi: usize) -> Option<usize> {
        if g >= self.group.order() || chi >= self.base.dim() {
            return None;
        }
        self.index[g * self.base.dim() + chi]
    }

    /// Characters `chi` with `E[g, chi]` in the basis.
    pub fn sector(&self, g: usize) -> Vec<usize> {
        (0..self.base.dim()).filter(|&c| self.position(g, c).is_some()).collect()
    }

    fn t3(&self, g: usize, h: usize, chi: usize) -> usize {
        (g * self.group.order() + h) * self.base.dim() + chi
    }

    /// `mult(g, h, chi)`.
    pub fn mult_scalar(&self, g: usize, h: usize, chi: usize) -> C<T> {
        self.mult[self.t3(g, h, chi)]
    }

    /// `act(g, h, chi)`, indexed by the source character.
    pub fn act_scalar(&self, g: usize, h: usize, chi: usize) -> C<T> {
        self.act[self.t3(g, h, chi)]
    }

    pub fn theta_scalar(&self, g: usize, chi: usize) -> C<T> {
        self.theta[g * self.base.dim() + chi]
    }

    pub fn mult_table(&self) -> &[C<T>] {
        &self.mult
    }

    pub fn act_table(&self) -> &[C<T>] {
        &self.act
    }

    pub fn theta_table(&self) -> &[C<T>] {
        &self.theta
    }

    pub fn zero(&self) -> AlgebraElement<T> {
        AlgebraElement { owner: self.id, coeffs: vec![zero(); self.dim()] }
    }

    pub fn unit(&self) -> AlgebraElement<T> {
        let mut x = self.zero();
        for chi in 0..self.base.dim() {
            x.coeffs[self.index[chi].expect("checked at construction")] = one();
        }
        x
    }

    pub fn basis_element(&self, g: usize, chi: usize) -> Result<AlgebraElement<T>> {
        let pos = self.position(g, chi).ok_or(Error::NotInBasis(g, chi))?;
        let mut x = self.zero();
        x.coeffs[pos] = one();
        Ok(x)
    }

    /// Element from `(g, chi, coefficient)` triples; repeated keys add up.
    pub fn element(&self, terms: &[(usize, usize, C<T>)]) -> Result<AlgebraElement<T>> {
        let mut x = self.zero();
        for &(g, chi, c) in terms {
            let pos = self.position(g, chi).ok_or(Error::NotInBasis(g, chi))?;
            x.coeffs[pos] += c;
        }
        Ok(x)
    }

    /// Base element with the given character coordinates, as an element of `A_1`.
    pub fn from_base(&self, r: &[C<T>]) -> Result<AlgebraElement<T>> {
        if r.len() != self.base.dim() {
            return Err(Error::ShapeMismatch("base vector length".into()));
        }
        let terms: Vec<_> = r.iter().enumerate().map(|(chi, &c)| (0, chi, c)).collect();
        self.element(&terms)
    }

    pub(crate) fn check(&self, x: &AlgebraElement<T>) -> Result<()> {
        if x.owner == self.id {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    /// Product of basis vectors at positions `i, j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Option<(usize, C<T>)> {
        let (g, chi) = self.basis[i];
        let (h, chi2) = self.basis[j];
        if chi != chi2 {
            return None;
        }
        let k = self.index[self.group.mul(g, h) * self.base.dim() + chi]?;
        Some((k, self.mult_scalar(g, h, chi)))
    }

    /// `g` applied to the basis vector at position `i`.
    pub fn basis_act(&self, g: usize, i: usize) -> (usize, C<T>) {
        let (h, chi) = self.basis[i];
        let c = self.group.conjugate(g, h);
        let k = self.index[c * self.base.dim() + self.action.image(g, chi)].expect("basis closed under the action");
        (k, self.act_scalar(g, h, chi))
    }

    /// Star of the basis vector at position `i`.
    pub fn basis_star(&self, i: usize) -> (usize, C<T>) {
        let (g, chi) = self.basis[i];
        let k = self.index[self.group.inv(g) * self.base.dim() + chi].expect("basis closed under inverses");
        (k, self.theta_scalar(g, chi))
    }

    pub fn multiply(&self, x: &AlgebraElement<T>, y: &AlgebraElement<T>) -> Result<AlgebraElement<T>> {
        self.check(x)?;
        self.check(y)?;
        let mut out = self.zero();
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == zero() {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                if b == zero() {
                    continue;
                }
                if let Some((k, s)) = self.basis_product(i, j) {
                    out.coeffs[k] += a * b * s;
                }
            }
        }
        Ok(out)
    }

    /// Left-to-right product; the unit for an empty list.
    pub fn product(&self, xs: &[AlgebraElement<T>]) -> Result<AlgebraElement<T>> {
        let mut acc = self.unit();
        for x in xs {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn star(&self, x: &AlgebraElement<T>) -> Result<AlgebraElement<T>> {
        self.check(x)?;
        let mut out = self.zero();
        for (i, &a) in x.coeffs.iter().enumerate() {
            let (k, s) = self.basis_star(i);
            out.coeffs[k] += a.conj() * s;
        }
        Ok(out)
    }

    pub fn act(&self, g: usize, x: &AlgebraElement<T>) -> Result<AlgebraElement<T>> {
        self.check(x)?;
        self.group.check_element(g)?;
        let mut out = self.zero();
        for (i, &a) in x.coeffs.iter().enumerate() {
            let (k, s) = self.basis_act(g, i);
            out.coeffs[k] += a * s;
        }
        Ok(out)
    }

    /// `lambda(x) = sum_chi x_(1,chi) / codegree[chi]`.
    pub fn lambda(&self, x: &AlgebraElement<T>) -> Result<C<T>> {
        self.check(x)?;
        Ok((0..self.base.dim()).fold(zero(), |acc, chi| {
            acc + x.coeffs[self.index[chi].expect("unit sector")] / self.base.codegree(chi)
        }))
    }

    /// `<x, y> = lambda(x y^*)`.
    pub fn inner(&self, x: &AlgebraElement<T>, y: &AlgebraElement<T>) -> Result<C<T>> {
        self.lambda(&self.multiply(x, &self.star(y)?)?)
    }

    /// Whether `x` is supported in the `g`-component.
    pub fn in_component(&self, x: &AlgebraElement<T>, g: usize, tol: T) -> Result<bool> {
        self.check(x)?;
        Ok(x.coeffs.iter().zip(&self.basis).all(|(c, &(h, _))| h == g || c.norm() <= tol))
    }

    /// `<E, E>` for each basis vector.
    pub fn gram_diagonal(&self) -> Vec<C<T>> {
        (0..self.dim())
            .map(|i| {
                let (g, chi) = self.basis[i];
                let (k, s) = self.basis_star(i);
                match self.basis_product(i, k) {
                    Some((u, p)) if self.basis[u].0 == 0 => p * s / self.base.codegree(chi),
                    _ => {
                        let _ = g;
                        zero()
                    }
                }
            })
            .collect()
    }

    /// Same algebra presented in the basis `E'[g,chi] = t(g)_chi E[g,chi]`; requires `t(1) = 1`.
    pub fn rescale_basis(&self, t: &Cochain<T>) -> Result<Self> {
        let order = self.group.order();
        let n = self.base.dim();
        if t.degree() != 1 || t.order() != order || t.n_chars() != n {
            return Err(Error::BaseMismatch);
        }
        if t.at(&[0]).iter().any(|v| (v - one::<T>()).norm() > T::default_tol()) {
            return Err(Error::ShapeMismatch("rescaling must fix the unit sector".into()));
        }
        let tv = |g: usize, chi: usize| t.get(&[g], chi);
        let mut mult = self.mult.clone();
        let mut act = self.act.clone();
        let mut theta = self.theta.clone();
        for g in 0..order {
            for h in 0..order {
                for chi in 0..n {
                    let i = self.t3(g, h, chi);
                    mult[i] = mult[i] * tv(g, chi) * tv(h, chi) / tv(self.group.mul(g, h), chi);
                    let c = self.group.conjugate(g, h);
                    act[i] = act[i] * tv(h, chi) / tv(c, self.action.image(g, chi));
                }
            }
            for chi in 0..n {
                theta[g * n + chi] = theta[g * n + chi] * tv(g, chi).conj() / tv(self.group.inv(g), chi);
            }
        }
        Self::from_tables(
            self.group.clone(),
            self.base.clone(),
            self.action.clone(),
            self.basis.clone(),
            mult,
            act,
            theta,
        )
    }

    /// Same basis vector labels in the tables' cochain form.
    pub fn mult_cochain(&self) -> Result<Cochain<T>> {
        Cochain::new(2, self.group.order(), self.base.dim(), self.mult.clone())
    }
}

/// Gauges a normalized cocycle so that `phi(g, g^-1) = 1` for every `g`.
///
/// Returns the gauged cocycle and the 1-cochain `tau` with `phi = d(tau) phi'`.
pub fn align_inverse_pairs<T: Real>(group: &FiniteGroup, action: &GAction, phi: &Cochain<T>) -> Result<(Cochain<T>, Cochain<T>)> {
    let order = group.order();
    let n = phi.n_chars();
    let mut tau = Cochain::ones(1, order, n);
    for g in 1..order {
        let gi = group.inv(g);
        if gi < g {
            continue;
        }
        if gi == g {
            for chi in 0..n {
                let gchi = action.image(g, chi);
                if gchi == chi {
                    tau.set(&[g], chi, principal_root(phi.get(&[g, g], chi), 2));
                } else if chi < gchi {
                    tau.set(&[g], chi, phi.get(&[g, g], chi));
                }
            }
        } else {
            // tau(g) = 1, tau(g^-1)_xi = phi(g, g^-1)_{g xi}
            for xi in 0..n {
                tau.set(&[gi], xi, phi.get(&[g, gi], action.image(g, xi)));
            }
        }
    }
    let dtau = crate::cohomology::coboundary(group, action, &tau)?;
    Ok((phi.div(&dtau)?, tau))
}

/// Normalizes a cocycle by dividing out `d` of the constant cochain `phi(1, 1)`.
fn normalize<T: Real>(group: &FiniteGroup, action: &GAction, phi: &Cochain<T>) -> Result<Cochain<T>> {
    let v = phi.at(&[0, 0]).to_vec();
    let c = Cochain::from_fn(1, group.order(), phi.n_chars(), |_, chi| v[chi])?;
    phi.div(&crate::cohomology::coboundary(group, action, &c)?)
}

/// Action scalars derived from a cocycle:
/// `act(g,h,chi) = phi(g,h)_{g chi} / phi(ghg^-1, g)_{g chi}`.
pub fn action_scalars<T: Real>(group: &FiniteGroup, action: &GAction, phi: &Cochain<T>) -> Vec<C<T>> {
    let order = group.order();
    let n = phi.n_chars();
    let mut out = vec![one(); order * order * n];
    for g in 0..order {
        for h in 0..order {
            let c = group.conjugate(g, h);
            for chi in 0..n {
                let gchi = action.image(g, chi);
                out[(g * order + h) * n + chi] = phi.get(&[g, h], gchi) / phi.get(&[c, g], gchi);
            }
        }
    }
    out
}

/// `{(g, chi) : chi fixed by g}`.
pub fn strict_basis(group: &FiniteGroup, action: &GAction) -> Vec<(usize, usize)> {
    (0..group.order())
        .flat_map(|g| action.fixed_characters([g]).into_iter().map(move |chi| (g, chi)))
        .collect()
}

/// Builds `A^phi`. The cocycle is normalized, unitarized and gauged to `phi(g, g^-1) = 1`
/// before use, and the star cochain is solved from the star-compatibility equation.
pub fn construct_extension<T: Real>(
    group: &FiniteGroup,
    base: &FrobeniusBase<T>,
    action: &GAction,
    phi: &Cochain<T>,
    tol: T,
) -> Result<CrossedAlgebra<T>> {
    phi.check_against(group, action)?;
    if phi.degree() != 2 {
        return Err(Error::ShapeMismatch("extension needs a 2-cocycle".into()));
    }
    if let Some(w) = cocycle_witness(group, action, phi, tol) {
        return Err(Error::NotACocycle(w.to_vec()));
    }
    let phi = normalize(group, action, phi)?;
    let (unit, _) = unitarize(group, action, &phi, tol)?;
    let (phi, _) = align_inverse_pairs(group, action, &unit)?;

    let order = group.order();
    let n = base.dim();
    // psi(g,h) = conj(phi(g,h)) / phi(h^-1, g^-1) on characters fixed by g and h
    let psi = Cochain::from_fn(2, order, n, |a, chi| {
        let (g, h) = (a[0], a[1]);
        if action.fixes(g, chi) && action.fixes(h, chi) {
            phi.get(&[g, h], chi).conj() / phi.get(&[group.inv(h), group.inv(g)], chi)
        } else {
            one()
        }
    })?;
    let theta = solve_coboundary(group, action, &psi, order as u64, SolveOptions { budget: usize::MAX, tol })?
        .ok_or(Error::StarIncompatible)?;

    CrossedAlgebra::from_tables(
        group.clone(),
        base.clone(),
        action.clone(),
        strict_basis(group, action),
        phi.values().to_vec(),
        action_scalars(group, action, &phi),
        theta.values().to_vec(),
    )
}

/// One line of an axiom report.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

struct Tracker<T> {
    name: &'static str,
    tol: T,
    residual: T,
    witness: Option<String>,
}

impl<T: Real> Tracker<T> {
    fn new(name: &'static str, tol: T) -> Self {
        Self { name, tol, residual: T::zero(), witness: None }
    }

    fn record(&mut self, r: T, at: impl FnOnce() -> String) {
        let r = if r.is_nan() { T::infinity() } else { r };
        if r > self.tol && self.witness.is_none() {
            self.witness = Some(at());
        }
        self.residual = self.residual.max(r);
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck {
            name: self.name,
            passed: self.residual <= self.tol,
            residual: self.residual.as_f64(),
            witness: self.witness,
        }
    }
}

/// Distance between two single-term results.
fn term_dist<T: Real>(a: Option<(usize, C<T>)>, b: Option<(usize, C<T>)>) -> T {
    match (a, b) {
        (None, None) => T::zero(),
        (Some((_, x)), None) | (None, Some((_, x))) => x.norm(),
        (Some((i, x)), Some((j, y))) if i == j => (x - y).norm(),
        (Some((_, x)), Some((_, y))) => x.norm().max(y.norm()),
    }
}

fn mul_term<T: Real>(t: Option<(usize, C<T>)>, s: C<T>) -> Option<(usize, C<T>)> {
    t.map(|(k, c)| (k, c * s))
}

/// Checks every defining axiom of a strict crossed Frobenius star-algebra on the basis.
pub fn verify_crossed_axioms<T: Real>(a: &CrossedAlgebra<T>, tol: T) -> AxiomReport {
    let d = a.dim();
    let group = &a.group;
    let order = group.order();
    let lbl = |i: usize| format!("E[{},{}]", a.basis[i].0, a.basis[i].1);
    let prod = |i: usize, j: usize| a.basis_product(i, j);
    // product of a single term with a basis vector
    let prod_t = |t: Option<(usize, C<T>)>, j: usize| t.and_then(|(k, c)| mul_term(prod(k, j), c));
    let prod_tl = |i: usize, t: Option<(usize, C<T>)>| t.and_then(|(k, c)| mul_term(prod(i, k), c));
    let mut checks = Vec::new();

    let mut unit = Tracker::new("unit", tol);
    for i in 0..d {
        for chi in 0..a.base.dim() {
            let e = a.index[chi].expect("unit sector");
            let want = (a.basis[i].1 == chi).then_some((i, one::<T>()));
            unit.record(term_dist(prod(e, i), want), || format!("E[1,{chi}] {}", lbl(i)));
            unit.record(term_dist(prod(i, e), want), || format!("{} E[1,{chi}]", lbl(i)));
        }
    }
    checks.push(unit.finish());

    let mut grading = Tracker::new("grading", tol);
    for i in 0..d {
        for j in 0..d {
            if let Some((k, c)) = prod(i, j) {
                let gh = group.mul(a.basis[i].0, a.basis[j].0);
                let off = if a.basis[k].0 == gh { T::zero() } else { c.norm() };
                grading.record(off, || format!("{} {}", lbl(i), lbl(j)));
            }
        }
    }
    checks.push(grading.finish());

    let mut assoc = Tracker::new("associativity", tol);
    for i in 0..d {
        for j in 0..d {
            let ij = prod(i, j);
            for k in 0..d {
                let left = prod_t(ij, k);
                let right = prod_tl(i, prod(j, k));
                assoc.record(term_dist(left, right), || format!("({}, {}, {})", lbl(i), lbl(j), lbl(k)));
            }
        }
    }
    checks.push(assoc.finish());

    let mut crossed = Tracker::new("crossed_commutativity", tol);
    for i in 0..d {
        let g = a.basis[i].0;
        for j in 0..d {
            let gb = a.basis_act(g, j);
            crossed.record(term_dist(prod(i, j), prod_t(Some(gb), i)), || format!("{} {}", lbl(i), lbl(j)));
        }
    }
    checks.push(crossed.finish());

    let mut hom = Tracker::new("action_homomorphism", tol);
    let mut morph = Tracker::new("action_algebra_morphism", tol);
    let mut agrad = Tracker::new("action_grading", tol);
    let mut alam = Tracker::new("action_lambda", tol);
    let mut astar = Tracker::new("action_star", tol);
    for i in 0..d {
        let (k0, c0) = a.basis_act(0, i);
        hom.record(term_dist(Some((k0, c0)), Some((i, one()))), || format!("1 acting on {}", lbl(i)));
    }
    let lam_basis = |i: usize| -> C<T> {
        let (g, chi) = a.basis[i];
        if g == 0 {
            Complex::from(T::one() / a.base.codegree(chi))
        } else {
            zero()
        }
    };
    for g in 0..order {
        for i in 0..d {
            let (k, c) = a.basis_act(g, i);
            let want = group.conjugate(g, a.basis[i].0);
            agrad.record(if a.basis[k].0 == want { T::zero() } else { c.norm() }, || format!("{g} on {}", lbl(i)));
            alam.record((lam_basis(k) * c - lam_basis(i)).norm(), || format!("{g} on {}", lbl(i)));
            // g(b^*) vs g(b)^*
            let (si, sc) = a.basis_star(i);
            let (k1, c1) = a.basis_act(g, si);
            let lhs = (k1, c1 * sc);
            let (k2, c2) = a.basis_star(k);
            let rhs = (k2, c2 * c.conj());
            astar.record(term_dist(Some(lhs), Some(rhs)), || format!("{g} on {}", lbl(i)));
            for h in 0..order {
                let (k3, c3) = a.basis_act(h, k);
                let (k4, c4) = a.basis_act(group.mul(h, g), i);
                hom.record(term_dist(Some((k3, c3 * c)), Some((k4, c4))), || format!("({h}, {g}) on {}", lbl(i)));
            }
            for j in 0..d {
                let lhs = prod(i, j).map(|(p, s)| {
                    let (q, t) = a.basis_act(g, p);
                    (q, s * t)
                });
                let (kj, cj) = a.basis_act(g, j);
                let rhs = mul_term(prod(k, kj), c * cj);
                morph.record(term_dist(lhs, rhs), || format!("{g} on {} {}", lbl(i), lbl(j)));
            }
        }
    }
    checks.extend([hom.finish(), morph.finish(), agrad.finish(), alam.finish(), astar.finish()]);

    let mut inv = Tracker::new("star_anti_involution", tol);
    for i in 0..d {
        let (k, c) = a.basis_star(i);
        let (k2, c2) = a.basis_star(k);
        inv.record(term_dist(Some((k2, c2 * c.conj())), Some((i, one()))), || format!("star star {}", lbl(i)));
        for j in 0..d {
            // (E_i E_j)^* = E_j^* E_i^*
            let lhs = prod(i, j).map(|(p, s)| {
                let (q, t) = a.basis_star(p);
                (q, s.conj() * t)
            });
            let (kj, cj) = a.basis_star(j);
            let rhs = mul_term(prod(kj, k), cj * c);
            inv.record(term_dist(lhs, rhs), || format!("({} {})^*", lbl(i), lbl(j)));
        }
    }
    checks.push(inv.finish());

    let mut lsym = Tracker::new("lambda_symmetry", tol);
    for i in 0..d {
        let (k, c) = a.basis_star(i);
        lsym.record((lam_basis(k) * c - lam_basis(i).conj()).norm(), || lbl(i));
    }
    checks.push(lsym.finish());

    let mut ltr = Tracker::new("lambda_trace", tol);
    for i in 0..d {
        for j in 0..d {
            let l = |t: Option<(usize, C<T>)>| t.map_or(zero(), |(k, c)| lam_basis(k) * c);
            ltr.record((l(prod(i, j)) - l(prod(j, i))).norm(), || format!("{} {}", lbl(i), lbl(j)));
        }
    }
    checks.push(ltr.finish());

    let mut gram = Tracker::new("gram_positivity", tol);
    for i in 0..d {
        for j in 0..d {
            // <E_i, E_j> = lambda(E_i E_j^*)
            let (k, c) = a.basis_star(j);
            let v = prod(i, k).map_or(zero(), |(p, s)| lam_basis(p) * s * c);
            if i == j {
                let bad = if v.re > tol { v.im.abs() } else { T::one() + v.norm() };
                gram.record(bad, || format!("<{0}, {0}> = {1}", lbl(i), v));
            } else {
                gram.record(v.norm(), || format!("<{}, {}>", lbl(i), lbl(j)));
            }
        }
    }
    checks.push(gram.finish());

    let mut strict = Tracker::new("strictness", tol);
    for g in 0..order {
        let partial = a.sector(g);
        let honest = a.action.fixed_characters([g]);
        if partial != honest {
            strict.record(T::one(), || format!("sector {g}: partial {partial:?} vs fixed {honest:?}"));
        }
    }
    checks.push(strict.finish());

    AxiomReport { checks }
}

/// Cocycle and star cochain of a verified algebra.
///
/// On each orbit of characters the multiplication at a representative `chi0` defines a
/// cocycle on its stabilizer, which is induced back to the whole group. The result is
/// cohomologous to the cocycle the algebra was built from.
pub fn extract_cocycle<T: Real>(a: &CrossedAlgebra<T>, tol: T) -> Result<(Cochain<T>, Cochain<T>)> {
    let report = verify_crossed_axioms(a, tol);
    if !report.all_passed() {
        return Err(Error::AxiomsFail(report.failed().join(", ")));
    }
    let group = &a.group;
    let action = &a.action;
    let order = group.order();
    let n = a.base.dim();

    let mut rep = vec![0usize; n];
    let mut coset = vec![0usize; n];
    for orbit in action.orbits() {
        let chi0 = orbit[0];
        for &chi in &orbit {
            rep[chi] = chi0;
            coset[chi] = (0..order).find(|&g| action.image(g, chi0) == chi).expect("same orbit");
        }
    }
    // kappa(g, chi) = r_chi^-1 g r_{g^-1 chi}, in the stabilizer of the representative
    let kappa = |g: usize, chi: usize| {
        let src = action.image(group.inv(g), chi);
        group.product(&[group.inv(coset[chi]), g, coset[src]])
    };
    let phi = Cochain::from_fn(2, order, n, |x, chi| {
        let (g, h) = (x[0], x[1]);
        let k1 = kappa(g, chi);
        let k2 = kappa(h, action.image(group.inv(g), chi));
        a.mult_scalar(k1, k2, rep[chi])
    })?;
    let theta = Cochain::from_fn(1, order, n, |x, chi| {
        if a.position(x[0], chi).is_some() {
            a.theta_scalar(x[0], chi)
        } else {
            one()
        }
    })?;

    let aligned = (0..order).all(|g| {
        (0..n).all(|chi| (phi.get(&[g, group.inv(g)], chi) - one::<T>()).norm() <= tol)
    });
    if aligned {
        return Ok((phi, theta));
    }
    log::warn!("basis not aligned to phi(g, g^-1) = 1; regauging");
    let (gauged, tau) = align_inverse_pairs(group, action, &phi)?;
    // theta transforms as conj(t(g)) theta(g) / t(g^-1) for E' = t E with t = 1 / tau
    let theta = Cochain::from_fn(1, order, n, |x, chi| {
        let g = x[0];
        let t = |h: usize| tau.get(&[h], chi).inv();
        theta.get(&[g], chi) * t(g).conj() / t(group.inv(g))
    })?;
    Ok((gauged, theta))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cohomology::{cohomologous, coboundary, is_cocycle, Cohomologous, Separation};
    use crate::frobenius::{diagonalize_fusion_ring, group_ring_structure, DiagonalizeOptions};

    pub(crate) fn klein_twist() -> Cochain<f64> {
        Cochain::from_fn(2, 4, 1, |a, _| {
            if (a[0] >> 1) * (a[1] & 1) == 1 {
                -one::<f64>()
            } else {
                one()
            }
        })
        .unwrap()
    }

    pub(crate) fn klein_algebra(phi: &Cochain<f64>) -> CrossedAlgebra<f64> {
        let g = FiniteGroup::klein_four();
        let base = FrobeniusBase::trivial();
        let act = GAction::trivial(&base, &g);
        construct_extension(&g, &base, &act, phi, 1e-9).unwrap()
    }

    pub(crate) fn toric_extension() -> CrossedAlgebra<f64> {
        let (s, d) = group_ring_structure::<f64>(&FiniteGroup::klein_four());
        let base = diagonalize_fusion_ring(
            s,
            d,
            Some(vec!["1".into(), "e".into(), "m".into(), "f".into()]),
            DiagonalizeOptions::default(),
        )
        .unwrap();
        let z2 = FiniteGroup::cyclic(2);
        let swap = GAction::from_basis_permutations(&base, &z2, &[vec![0, 1, 2, 3], vec![0, 2, 1, 3]]).unwrap();
        construct_extension(&z2, &base, &swap, &Cochain::ones(2, 2, 4), 1e-9).unwrap()
    }

    #[test]
    fn trivial_group_gives_base() {
        let base = FrobeniusBase::new(vec![2.0, 3.0], None).unwrap();
        let g = FiniteGroup::trivial();
        let act = GAction::trivial(&base, &g);
        let a = construct_extension(&g, &base, &act, &Cochain::ones(2, 1, 2), 1e-9).unwrap();
        assert_eq!(a.dim(), 2);
        let x = a.from_base(&[Complex::new(1.0, 2.0), Complex::new(-1.0, 0.5)]).unwrap();
        let y = a.from_base(&[Complex::new(0.5, 0.0), Complex::new(2.0, 1.0)]).unwrap();
        let p = a.multiply(&x, &y).unwrap();
        assert!((p.coeffs()[0] - Complex::new(0.5, 1.0)).norm() < 1e-12);
        assert!((a.lambda(&x).unwrap() - base.lambda(&[Complex::new(1.0, 2.0), Complex::new(-1.0, 0.5)])).norm() < 1e-12);
        assert!(verify_crossed_axioms(&a, 1e-9).all_passed());
    }

    #[test]
    fn klein_twisted_products() {
        let a = klein_algebra(&klein_twist());
        let e = |g| a.basis_element(g, 0).unwrap();
        let ab = a.multiply(&e(1), &e(2)).unwrap();
        let ba = a.multiply(&e(2), &e(1)).unwrap();
        // gauged so that E_ab E_ab = 1, hence E_a E_b is a unit multiple of E_ab
        assert!(a.in_component(&ab, 3, 1e-12).unwrap());
        assert!((ab.max_abs() - 1.0).abs() < 1e-12);
        assert!(ba.dist(&ab.scale(-one())).unwrap() < 1e-12);
        let p = a.product(&[e(1), e(2), e(1), e(2)]).unwrap();
        assert!(p.dist(&e(0).scale(-one())).unwrap() < 1e-12);
        let acted = a.act(1, &e(2)).unwrap();
        assert!(acted.dist(&e(2).scale(-one())).unwrap() < 1e-12);
        assert!(a.act(0, &e(3)).unwrap().dist(&e(3)).unwrap() < 1e-12);
        assert!(verify_crossed_axioms(&a, 1e-9).all_passed());
    }

    #[test]
    fn idempotents_and_star() {
        let a = toric_extension();
        assert_eq!(a.dim(), 6);
        assert_eq!(a.sector(1).len(), 2);
        let chi = a.sector(1)[0];
        let e = a.basis_element(0, chi).unwrap();
        let x = a.basis_element(1, chi).unwrap();
        assert!(a.multiply(&e, &x).unwrap().dist(&x).unwrap() < 1e-12);
        let other = a.sector(1)[1];
        let y = a.basis_element(1, other).unwrap();
        assert!(a.multiply(&e, &y).unwrap().max_abs() < 1e-12);
        assert!(a.star(&e).unwrap().dist(&e).unwrap() < 1e-12);
        let ix = x.scale(Complex::new(0.0, 1.0));
        let want = a.basis_element(1, chi).unwrap().scale(Complex::new(0.0, -1.0) * a.theta_scalar(1, chi));
        assert!(a.star(&ix).unwrap().dist(&want).unwrap() < 1e-12);
        let u = a.unit();
        assert!(a.multiply(&u, &ix).unwrap().dist(&ix).unwrap() < 1e-12);
        let report = verify_crossed_axioms(&a, 1e-9);
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn perturbed_cocycle_breaks_associativity() {
        let a = klein_algebra(&klein_twist());
        let mut mult = a.mult_table().to_vec();
        mult[4 + 2] = Complex::new(2.0, 0.0);
        let phi = Cochain::new(2, 4, 1, mult.clone()).unwrap();
        assert!(!is_cocycle(a.group(), a.action(), &phi, 1e-9));
        let broken = CrossedAlgebra::from_tables(
            a.group().clone(),
            a.base().clone(),
            a.action().clone(),
            a.basis().to_vec(),
            mult,
            a.act_table().to_vec(),
            a.theta_table().to_vec(),
        )
        .unwrap();
        let report = verify_crossed_axioms(&broken, 1e-9);
        let check = report.get("associativity").unwrap();
        assert!(!check.passed);
        assert!(check.witness.is_some());
    }

    #[test]
    fn sign_flipped_star_fails_gram() {
        let a = toric_extension();
        let mut theta = a.theta_table().to_vec();
        let chi = a.sector(1)[0];
        theta[4 + chi] = -theta[4 + chi];
        let flipped = CrossedAlgebra::from_tables(
            a.group().clone(),
            a.base().clone(),
            a.action().clone(),
            a.basis().to_vec(),
            a.mult_table().to_vec(),
            a.act_table().to_vec(),
            theta,
        )
        .unwrap();
        let report = verify_crossed_axioms(&flipped, 1e-9);
        assert!(!report.get("gram_positivity").unwrap().passed);
    }

    #[test]
    fn round_trips() {
        let triv = klein_algebra(&Cochain::ones(2, 4, 1));
        let (phi, _) = extract_cocycle(&triv, 1e-9).unwrap();
        assert!(phi.is_identity(1e-12));

        let tw = klein_algebra(&klein_twist());
        let t = Cochain::from_fn(1, 4, 1, |x, _| {
            if x[0] == 0 {
                one()
            } else {
                Complex::from_polar(1.0 + x[0] as f64, 0.7 * x[0] as f64)
            }
        })
        .unwrap();
        let re = tw.rescale_basis(&t).unwrap();
        assert!(verify_crossed_axioms(&re, 1e-9).all_passed());
        let (phi, theta) = extract_cocycle(&re, 1e-9).unwrap();
        assert_eq!(theta.degree(), 1);
        let g = tw.group();
        let act = tw.action();
        match cohomologous(g, act, &phi, &klein_twist(), SolveOptions::default()).unwrap() {
            Cohomologous::Yes(th) => {
                let back = klein_twist().mul(&coboundary(g, act, &th).unwrap()).unwrap();
                assert!(back.dist(&phi).unwrap() < 1e-8);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            cohomologous(g, act, &phi, &Cochain::ones(2, 4, 1), SolveOptions::default()).unwrap(),
            Cohomologous::No(Separation::Pairing { .. })
        ));

        let toric = toric_extension();
        let (phi, _) = extract_cocycle(&toric, 1e-9).unwrap();
        assert!(matches!(
            cohomologous(toric.group(), toric.action(), &phi, &Cochain::ones(2, 2, 4), SolveOptions::default()).unwrap(),
            Cohomologous::Yes(_)
        ));
    }

    #[test]
    fn owner_mismatch() {
        let a = klein_algebra(&klein_twist());
        let b = klein_algebra(&klein_twist());
        assert!(matches!(a.multiply(&a.unit(), &b.unit()), Err(Error::OwnerMismatch)));
    }
}
