//! Twisted characters, twist scalars, the twisted Verlinde formulas and their oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::crossed::{AlgebraElement, CrossedAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{one, principal_root, root_of_unity, zero, Real, C};

/// Gauge values `mu_chi(g) = chi^g(E[g, chi])` for every basis vector.
///
/// For each inverse pair `{g, g^-1}` the member with the smaller index gets the principal
/// `o(g)`-th root of `prod_{j=1}^{o(g)-1} mult(g, g^j)`; its partner gets
/// `mu(g^-1) = mult(g, g^-1) / mu(g)`, which is what the cyclic recurrence gives.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedCharacterTable<T> {
    owner: u64,
    n: usize,
    mu: Vec<Option<C<T>>>,
}

impl<T: Real> TwistedCharacterTable<T> {
    pub fn new(a: &CrossedAlgebra<T>) -> Self {
        let group = a.group();
        let n = a.base().dim();
        let mut mu = vec![None; group.order() * n];
        for &(g, chi) in a.basis() {
            let gi = group.inv(g);
            let value = if g == 0 {
                one()
            } else if g <= gi {
                canonical_mu(a, g, chi)
            } else {
                a.mult_scalar(gi, g, chi) / canonical_mu(a, gi, chi)
            };
            mu[g * n + chi] = Some(value);
        }
        Self { owner: a.id(), n, mu }
    }

    fn check(&self, a: &CrossedAlgebra<T>) -> Result<()> {
        if a.id() == self.owner {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    /// `mu_chi(g)`; `NotFixed` when `E[g, chi]` is not a basis vector.
    pub fn mu(&self, g: usize, chi: usize) -> Result<C<T>> {
        self.mu
            .get(g * self.n + chi)
            .copied()
            .flatten()
            .ok_or(Error::NotFixed { g, chi })
    }

    /// `mu_chi(g^k)` for `k = 0..o(g)`, from `mu(g^j) mu(g^k) = mult(g^j, g^k) mu(g^{j+k})`.
    pub fn cyclic_values(&self, a: &CrossedAlgebra<T>, g: usize, chi: usize) -> Result<Vec<C<T>>> {
        self.check(a)?;
        let group = a.group();
        let m = group.element_order(g);
        let mu_g = self.mu(g, chi)?;
        let mut out = vec![one()];
        let mut acc = one::<T>();
        for k in 1..m {
            out.push(mu_g.powi(k as i32) / acc);
            acc *= a.mult_scalar(g, group.pow(g, k), chi);
        }
        Ok(out)
    }

    /// `chi^g(x)` for `x` in the `g`-component.
    pub fn eval(&self, a: &CrossedAlgebra<T>, g: usize, chi: usize, x: &AlgebraElement<T>) -> Result<C<T>> {
        self.check(a)?;
        a.check(x)?;
        let pos = a.position(g, chi).ok_or(Error::NotFixed { g, chi })?;
        Ok(x.coeffs()[pos] * self.mu(g, chi)?)
    }

    /// Multiplies `mu(g)` by `omega` and `mu(g^-1)` by `omega^-1`, keeping
    /// `mu(g) mu(g^-1) = mult(g, g^-1)`. For involutions `omega` must square to 1.
    pub fn regauge(&mut self, a: &CrossedAlgebra<T>, g: usize, chi: usize, omega: C<T>) -> Result<()> {
        self.check(a)?;
        let gi = a.group().inv(g);
        let slot = g * self.n + chi;
        let v = self.mu[slot].ok_or(Error::NotFixed { g, chi })?;
        self.mu[slot] = Some(v * omega);
        if gi != g {
            let slot = gi * self.n + chi;
            let w = self.mu[slot].ok_or(Error::NotFixed { g: gi, chi })?;
            self.mu[slot] = Some(w / omega);
        }
        Ok(())
    }

    /// Table with every inverse pair regauged by a random root of unity of order dividing
    /// `o(g)` (or `2 o(g)` when `doubled`); involutions get a random sign.
    pub fn random_regauge(&self, a: &CrossedAlgebra<T>, seed: u64, doubled: bool) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = self.clone();
        let group = a.group();
        for &(g, chi) in a.basis() {
            let gi = group.inv(g);
            if g == 0 || gi < g {
                continue;
            }
            let omega = if gi == g {
                if rng.gen_bool(0.5) {
                    -one::<T>()
                } else {
                    one()
                }
            } else {
                let m = group.element_order(g) as u64 * if doubled { 2 } else { 1 };
                root_of_unity(rng.gen_range(0..m as i64), m)
            };
            out.regauge(a, g, chi, omega)?;
        }
        Ok(out)
    }

    /// `E[g, chi] / mu_chi(g)`, whose `o(g)`-th power is `e_chi`.
    pub fn normalized_element(&self, a: &CrossedAlgebra<T>, g: usize, chi: usize) -> Result<AlgebraElement<T>> {
        let mu = self.mu(g, chi)?;
        Ok(a.basis_element(g, chi)?.scale(mu.inv()))
    }
}

fn canonical_mu<T: Real>(a: &CrossedAlgebra<T>, g: usize, chi: usize) -> C<T> {
    let group = a.group();
    let m = group.element_order(g);
    let prod = (1..m).fold(one::<T>(), |acc, j| acc * a.mult_scalar(g, group.pow(g, j), chi));
    principal_root(prod, m)
}

/// `phi_chi(g_1, ..., g_n)`: the scalar with
/// `chi^{g_1}(E_1) ... chi^{g_n}(E_n) = phi_chi(g_1, ..., g_n) chi^{g_1...g_n}(E_1 ... E_n)`
/// where `E_i = E[g_i, chi]`. The product is bracketed left to right.
pub fn twist_scalar<T: Real>(
    a: &CrossedAlgebra<T>,
    table: &TwistedCharacterTable<T>,
    chi: usize,
    gs: &[usize],
) -> Result<C<T>> {
    table.check(a)?;
    let group = a.group();
    let mut cur = 0;
    let mut acc = one::<T>();
    let mut num = one::<T>();
    for &g in gs {
        group.check_element(g)?;
        num *= table.mu(g, chi)?;
        acc *= a.mult_scalar(cur, g, chi);
        cur = group.mul(cur, g);
    }
    let den = acc * table.mu(cur, chi)?;
    if den.norm() <= T::epsilon() {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}

/// `lambda` of the left-to-right product.
pub fn brute_force_lambda<T: Real>(a: &CrossedAlgebra<T>, elems: &[AlgebraElement<T>]) -> Result<C<T>> {
    a.lambda(&a.product(elems)?)
}

fn check_components<T: Real>(a: &CrossedAlgebra<T>, elems: &[(usize, AlgebraElement<T>)], tol: T) -> Result<()> {
    for (i, (g, x)) in elems.iter().enumerate() {
        a.group().check_element(*g)?;
        if !a.in_component(x, *g, tol)? {
            return Err(Error::WrongComponent(i));
        }
    }
    Ok(())
}

/// Genus-0 twisted Verlinde formula:
/// `sum_{chi fixed by all g_i} prod_i chi^{g_i}(a_i) / (codegree[chi] phi_chi(g_1, ..., g_n))`.
pub fn verlinde_genus0<T: Real>(
    a: &CrossedAlgebra<T>,
    table: &TwistedCharacterTable<T>,
    elems: &[(usize, AlgebraElement<T>)],
) -> Result<C<T>> {
    verlinde_any_genus(a, table, &[], elems)
}

/// Handle element `Omega_{g,h} = sum_x x h(x^*)` over the normalized `E`-basis of `A_g`.
pub fn omega<T: Real>(a: &CrossedAlgebra<T>, g: usize, h: usize) -> Result<AlgebraElement<T>> {
    let basis: Vec<AlgebraElement<T>> = a
        .sector(g)
        .into_iter()
        .map(|chi| {
            let e = a.basis_element(g, chi)?;
            let norm = a.inner(&e, &e)?.re.sqrt();
            Ok(e.scale(C::from(T::one() / norm)))
        })
        .collect::<Result<_>>()?;
    omega_with_basis(a, h, &basis)
}

/// `sum_x x h(x^*)` over a caller-supplied orthonormal basis of a component.
pub fn omega_with_basis<T: Real>(a: &CrossedAlgebra<T>, h: usize, basis: &[AlgebraElement<T>]) -> Result<AlgebraElement<T>> {
    let mut out = a.zero();
    for x in basis {
        let term = a.multiply(x, &a.act(h, &a.star(x)?)?)?;
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Twisted Verlinde formula for any genus:
/// `sum_chi codegree[chi]^(r-1) prod_j chi^{m_j}(a_j) / phi_chi(g_1, h_1, g_1^-1, h_1^-1, ..., m_1, ..., m_s)`
/// over characters fixed by every argument.
pub fn verlinde_any_genus<T: Real>(
    a: &CrossedAlgebra<T>,
    table: &TwistedCharacterTable<T>,
    pairs: &[(usize, usize)],
    elems: &[(usize, AlgebraElement<T>)],
) -> Result<C<T>> {
    table.check(a)?;
    let group = a.group();
    let tol = T::default_tol();
    check_components(a, elems, tol.sqrt())?;
    let mut word = Vec::with_capacity(4 * pairs.len() + elems.len());
    for &(g, h) in pairs {
        group.check_element(g)?;
        group.check_element(h)?;
        word.extend([g, h, group.inv(g), group.inv(h)]);
    }
    word.extend(elems.iter().map(|(m, _)| *m));
    if group.product(&word) != 0 {
        return Err(Error::ProductNotIdentity);
    }
    let gens: Vec<usize> = word.clone();
    let r = pairs.len() as i32;
    let mut sum = zero::<T>();
    for chi in a.action().fixed_characters(gens) {
        let f = a.base().codegree(chi);
        let mut term = C::from(f.powi(r - 1));
        for (m, x) in elems {
            term *= table.eval(a, *m, chi, x)?;
        }
        sum += term / twist_scalar(a, table, chi, &word)?;
    }
    Ok(sum)
}

/// The oracle for [`verlinde_any_genus`]: `lambda(Omega_{g_1,h_1} ... Omega_{g_r,h_r} a_1 ... a_s)`.
pub fn any_genus_oracle<T: Real>(
    a: &CrossedAlgebra<T>,
    pairs: &[(usize, usize)],
    elems: &[(usize, AlgebraElement<T>)],
) -> Result<C<T>> {
    let mut factors = Vec::with_capacity(pairs.len() + elems.len());
    for &(g, h) in pairs {
        factors.push(omega(a, g, h)?);
    }
    factors.extend(elems.iter().map(|(_, x)| x.clone()));
    brute_force_lambda(a, &factors)
}

/// Structure constants of an orthogonal basis, with a certificate of nonnegative integrality.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionTable<T> {
    /// `n[i][j][k] = lambda(b_i b_j b_k^*) / <b_k, b_k>`.
    pub n: Vec<Vec<Vec<C<T>>>>,
    pub integral: bool,
}

/// Fusion coefficients of an orthogonal spanning family.
pub fn fusion_coefficients<T: Real>(a: &CrossedAlgebra<T>, basis: &[AlgebraElement<T>], tol: T) -> Result<FusionTable<T>> {
    let d = basis.len();
    let mut norms = Vec::with_capacity(d);
    for i in 0..d {
        for j in 0..d {
            let v = a.inner(&basis[i], &basis[j])?;
            if i == j {
                if !(v.re > tol) {
                    return Err(Error::NotSpanning(format!("element {i} has zero norm")));
                }
                norms.push(v);
            } else if v.norm() > tol {
                return Err(Error::NotOrthogonal(i, j));
            }
        }
    }
    if d != a.dim() {
        return Err(Error::NotSpanning(format!("{d} elements for an algebra of dimension {}", a.dim())));
    }
    let stars: Vec<AlgebraElement<T>> = basis.iter().map(|b| a.star(b)).collect::<Result<_>>()?;
    let mut n = vec![vec![vec![zero::<T>(); d]; d]; d];
    let mut integral = true;
    for i in 0..d {
        for j in 0..d {
            let bij = a.multiply(&basis[i], &basis[j])?;
            for k in 0..d {
                let v = a.lambda(&a.multiply(&bij, &stars[k])?)? / norms[k];
                let nearest = v.re.round();
                if nearest < -tol || (v - C::from(nearest)).norm() > tol {
                    integral = false;
                }
                n[i][j][k] = v;
            }
        }
    }
    Ok(FusionTable { n, integral })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::Cochain;
    use crate::crossed::tests::{klein_algebra, klein_twist, toric_extension};
    use num_complex::Complex;

    #[test]
    fn twisted_character_examples() {
        let a = klein_algebra(&klein_twist());
        let t = TwistedCharacterTable::new(&a);
        assert!((t.mu(0, 0).unwrap() - one()).norm() < 1e-12);
        assert!((t.mu(1, 0).unwrap() - one()).norm() < 1e-12);

        let z4 = crate::group::FiniteGroup::cyclic(4);
        let base = crate::frobenius::FrobeniusBase::trivial();
        let act = crate::frobenius::GAction::trivial(&base, &z4);
        let b = crate::crossed::construct_extension(&z4, &base, &act, &Cochain::ones(2, 4, 1), 1e-9).unwrap();
        let t = TwistedCharacterTable::new(&b);
        assert!((t.mu(1, 0).unwrap() - one()).norm() < 1e-12);
        assert!(matches!(
            TwistedCharacterTable::new(&toric_extension()).mu(1, 1),
            Err(Error::NotFixed { .. })
        ));
    }

    #[test]
    fn twist_scalar_examples() {
        let a = klein_algebra(&Cochain::ones(2, 4, 1));
        let t = TwistedCharacterTable::new(&a);
        assert!((twist_scalar(&a, &t, 0, &[1, 2]).unwrap() - one()).norm() < 1e-12);
        let a = klein_algebra(&klein_twist());
        let t = TwistedCharacterTable::new(&a);
        // the twisted product E_a E_b E_a E_b = -1 with every mu of modulus one on a, b
        let s = twist_scalar(&a, &t, 0, &[1, 2, 1, 2]).unwrap();
        let mus = t.mu(1, 0).unwrap().powi(2) * t.mu(2, 0).unwrap().powi(2);
        assert!((s + mus).norm() < 1e-12);
        assert!((s + one()).norm() < 1e-12);
        for g in 0..4 {
            let gi = a.group().inv(g);
            assert!((twist_scalar(&a, &t, 0, &[g, gi]).unwrap() - one()).norm() < 1e-12);
        }
    }

    #[test]
    fn genus0_examples() {
        let a = klein_algebra(&klein_twist());
        let t = TwistedCharacterTable::new(&a);
        let e = |g| (g, a.basis_element(g, 0).unwrap());
        let v = verlinde_genus0(&a, &t, &[e(1), e(2), e(1), e(2)]).unwrap();
        assert!((v + one()).norm() < 1e-12);
        let oracle = brute_force_lambda(&a, &[e(1).1, e(2).1, e(1).1, e(2).1]).unwrap();
        assert!((v - oracle).norm() < 1e-12);
        assert!(matches!(verlinde_genus0(&a, &t, &[e(1), e(2)]), Err(Error::ProductNotIdentity)));
        assert!(matches!(verlinde_genus0(&a, &t, &[(2, e(1).1), e(2)]), Err(Error::WrongComponent(0))));

        let toric = toric_extension();
        let t = TwistedCharacterTable::new(&toric);
        let fixed = toric.sector(1);
        let x = toric
            .element(&[(1, fixed[0], one()), (1, fixed[1], one())])
            .unwrap();
        let v = verlinde_genus0(&toric, &t, &[(1, x.clone()), (1, x.clone())]).unwrap();
        let oracle = brute_force_lambda(&toric, &[x.clone(), x]).unwrap();
        assert!((v - oracle).norm() < 1e-12);
        assert!((v - Complex::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn omega_examples() {
        let toric = toric_extension();
        let om = omega(&toric, 0, 0).unwrap();
        for chi in 0..4 {
            let want = toric.basis_element(0, chi).unwrap().scale(C::from(toric.base().codegree(chi)));
            let got = toric.multiply(&om, &toric.basis_element(0, chi).unwrap()).unwrap();
            assert!(got.dist(&want).unwrap() < 1e-12);
        }
        assert!((toric.lambda(&om).unwrap() - Complex::new(4.0, 0.0)).norm() < 1e-12);
        let t = TwistedCharacterTable::new(&toric);
        let v = verlinde_any_genus(&toric, &t, &[(0, 0)], &[]).unwrap();
        assert!((v - Complex::new(4.0, 0.0)).norm() < 1e-12);

        let a = klein_algebra(&klein_twist());
        let t = TwistedCharacterTable::new(&a);
        let v = verlinde_any_genus(&a, &t, &[(1, 2)], &[]).unwrap();
        let oracle = any_genus_oracle(&a, &[(1, 2)], &[]).unwrap();
        assert!((v - oracle).norm() < 1e-12);
        assert!((v + one()).norm() < 1e-12);

        // basis independence under a unitary change of the twisted sector basis
        let f = toric.sector(1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let n = toric.inner(&toric.basis_element(1, f[0]).unwrap(), &toric.basis_element(1, f[0]).unwrap()).unwrap().re.sqrt();
        let u = [
            toric.element(&[(1, f[0], C::from(s / n)), (1, f[1], Complex::new(0.0, s / n))]).unwrap(),
            toric.element(&[(1, f[0], C::from(s / n)), (1, f[1], Complex::new(0.0, -s / n))]).unwrap(),
        ];
        let om1 = omega(&toric, 1, 1).unwrap();
        let om2 = omega_with_basis(&toric, 1, &u).unwrap();
        assert!(om1.dist(&om2).unwrap() < 1e-12);

        // a swap of two characters fixes nothing, so the twisted component is zero
        let base = crate::frobenius::FrobeniusBase::new(vec![2.0, 2.0], None).unwrap();
        let z2 = crate::group::FiniteGroup::cyclic(2);
        let act = crate::frobenius::GAction::new(&base, &z2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let b = crate::crossed::construct_extension(&z2, &base, &act, &Cochain::ones(2, 2, 2), 1e-9).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(omega(&b, 1, 0).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn fusion_examples() {
        let toric = toric_extension();
        let basis_r: Vec<_> = (0..4)
            .map(|i| toric.from_base(&toric.base().basis_element(i).unwrap()).unwrap())
            .collect();
        let f = toric.sector(1);
        let r2 = 2f64.sqrt();
        let sp = toric.element(&[(1, f[0], C::from(r2)), (1, f[1], C::from(r2))]).unwrap();
        let sm = toric.element(&[(1, f[0], C::from(r2)), (1, f[1], C::from(-r2))]).unwrap();
        let mut basis = basis_r.clone();
        basis.extend([sp, sm]);
        let table = fusion_coefficients(&toric, &basis, 1e-9).unwrap();
        assert!(table.integral);
        // sigma+ sigma+ = 1 + f; sigma+ sigma- = e + m (or the reverse ordering of sigma labels)
        let row = |i: usize, j: usize| -> Vec<f64> { table.n[i][j].iter().map(|v| v.re.round()).collect() };
        let sq = row(4, 4);
        let mixed = row(4, 5);
        assert_eq!(sq.iter().sum::<f64>(), 2.0);
        assert_eq!(mixed.iter().sum::<f64>(), 2.0);
        assert_eq!(sq[4] + sq[5] + mixed[4] + mixed[5], 0.0);
        assert_eq!(row(1, 4)[4] + row(1, 4)[5], 1.0);

        assert!(matches!(fusion_coefficients(&toric, &basis_r, 1e-9), Err(Error::NotSpanning(_))));
    }

    #[test]
    fn gauge_redraws_do_not_change_outputs() {
        let a = klein_algebra(&klein_twist());
        let t = TwistedCharacterTable::new(&a);
        let e = |g| (g, a.basis_element(g, 0).unwrap());
        let base_val = verlinde_any_genus(&a, &t, &[(1, 2)], &[e(3), e(3)]).unwrap();
        for seed in 0..8 {
            let t2 = t.random_regauge(&a, seed, seed % 2 == 1).unwrap();
            let v = verlinde_any_genus(&a, &t2, &[(1, 2)], &[e(3), e(3)]).unwrap();
            assert!((v - base_val).norm() < 1e-12);
        }
    }
}
