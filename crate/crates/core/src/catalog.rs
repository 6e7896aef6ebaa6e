//! Named bases, actions, cocycles and instances, plus a seeded generator of random
//! equivariant extensions.

use std::collections::VecDeque;

use nalgebra::RealField;
use num_complex::Complex;
use rand::Rng;

use crate::cohomology::{coboundary, Cochain};
use crate::crossed::{AlgebraElement, CrossedAlgebra};
use crate::error::{Error, Result};
use crate::frobenius::{diagonalize_fusion_ring, group_ring_structure, DiagonalizeOptions, FrobeniusBase, GAction};
use crate::group::FiniteGroup;
use crate::modular::{SectorInput, SectorRow};
use crate::scalar::{root_of_unity, Real, C};

/// The group ring of the Klein four-group with simple objects `1, e, m, f`.
pub fn toric_base<T: Real + RealField>() -> Result<FrobeniusBase<T>> {
    let (s, d) = group_ring_structure::<T>(&FiniteGroup::klein_four());
    diagonalize_fusion_ring(s, d, Some(["1", "e", "m", "f"].map(String::from).to_vec()), DiagonalizeOptions::default())
}

/// The group ring of `Z/m`.
pub fn cyclic_ring_base<T: Real + RealField>(m: usize) -> Result<FrobeniusBase<T>> {
    let (s, d) = group_ring_structure::<T>(&FiniteGroup::cyclic(m));
    diagonalize_fusion_ring(s, d, Some((0..m).map(|i| i.to_string()).collect()), DiagonalizeOptions::default())
}

/// The Fibonacci fusion ring, `tau * tau = 1 + tau`.
pub fn fibonacci_base<T: Real + RealField>() -> Result<FrobeniusBase<T>> {
    let o = Complex::new(T::one(), T::zero());
    let z = Complex::new(T::zero(), T::zero());
    let s = vec![vec![vec![o, z], vec![z, o]], vec![vec![z, o], vec![o, o]]];
    diagonalize_fusion_ring(s, vec![0, 1], Some(vec!["1".into(), "tau".into()]), DiagonalizeOptions::default())
}

/// `c1` (one character), `toric`, `fib`, or `z<m>ring`.
pub fn base<T: Real + RealField>(name: &str) -> Result<FrobeniusBase<T>> {
    match name {
        "c1" => Ok(FrobeniusBase::trivial()),
        "toric" => toric_base(),
        "fib" => fibonacci_base(),
        _ => {
            let m = name
                .strip_prefix('z')
                .and_then(|r| r.strip_suffix("ring"))
                .and_then(|m| m.parse::<usize>().ok())
                .filter(|&m| (1..=64).contains(&m))
                .ok_or_else(|| Error::Format(format!("unknown base `{name}`")))?;
            cyclic_ring_base(m)
        }
    }
}

/// All homomorphisms `G -> Z/m`, as value tables.
pub fn homomorphisms_to_cyclic(group: &FiniteGroup, m: usize) -> Vec<Vec<usize>> {
    let n = group.order();
    let mut gens = Vec::new();
    let mut span = group.generated_subgroup(&[]);
    for g in 0..n {
        if !span.contains(&g) {
            gens.push(g);
            span = group.generated_subgroup(&gens);
        }
    }
    let mut out = Vec::new();
    let total = m.pow(gens.len() as u32);
    'assign: for code in 0..total {
        let vals: Vec<usize> = (0..gens.len()).map(|i| code / m.pow(i as u32) % m).collect();
        let mut f = vec![usize::MAX; n];
        f[group.identity()] = 0;
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (s, &v) in gens.iter().zip(&vals) {
                let y = group.mul(x, *s);
                let fy = (f[x] + v) % m;
                if f[y] == usize::MAX {
                    f[y] = fy;
                    queue.push_back(y);
                } else if f[y] != fy {
                    continue 'assign;
                }
            }
        }
        out.push(f);
    }
    out
}

/// The scalar bicharacter `b(g, h) = zeta_m^{f1(g) f2(h)}`, constant over characters.
pub fn bicharacter<T: Real>(group: &FiniteGroup, n: usize, m: usize, f1: &[usize], f2: &[usize]) -> Result<Cochain<T>> {
    Cochain::from_fn(2, group.order(), n, |a, _| root_of_unity((f1[a[0]] * f2[a[1]] % m) as i64, m as u64))
}

fn first_z2_homs(group: &FiniteGroup) -> Vec<Vec<usize>> {
    homomorphisms_to_cyclic(group, 2).into_iter().filter(|f| f.iter().any(|&x| x != 0)).collect()
}

/// `trivial`, or `swap` (the toric `e <-> m` swap pulled back along the first nontrivial
/// homomorphism `G -> Z/2`).
pub fn action<T: Real>(name: &str, group: &FiniteGroup, base: &FrobeniusBase<T>) -> Result<GAction> {
    match name {
        "trivial" => Ok(GAction::trivial(base, group)),
        "swap" => {
            if base.fusion().map(|f| f.basis.as_slice()) != Some(&["1", "e", "m", "f"].map(String::from)[..]) {
                return Err(Error::Format("`swap` needs the toric base".into()));
            }
            let hom = first_z2_homs(group)
                .into_iter()
                .next()
                .ok_or_else(|| Error::Format("`swap` needs a homomorphism onto Z/2".into()))?;
            let bp: Vec<Vec<usize>> =
                hom.iter().map(|&s| if s == 0 { vec![0, 1, 2, 3] } else { vec![0, 2, 1, 3] }).collect();
            GAction::from_basis_permutations(base, group, &bp)
        }
        _ => Err(Error::Format(format!("unknown action `{name}`"))),
    }
}

/// `trivial`, or `twist`: `(-1)^{f1(g) f2(h)}` for the first two distinct nontrivial
/// homomorphisms `f1, f2: G -> Z/2`. On the Klein four-group this is the nontrivial class.
pub fn cocycle<T: Real>(name: &str, group: &FiniteGroup, base: &FrobeniusBase<T>) -> Result<Cochain<T>> {
    let n = base.dim();
    match name {
        "trivial" => Ok(Cochain::ones(2, group.order(), n)),
        "twist" => {
            let homs = first_z2_homs(group);
            if homs.len() < 2 {
                return Err(Error::Format("`twist` needs two homomorphisms onto Z/2".into()));
            }
            bicharacter(group, n, 2, &homs[0], &homs[1])
        }
        _ => Err(Error::Format(format!("unknown cocycle `{name}`"))),
    }
}

/// Built-in instances: `abab` is `(E_a E_b E_a E_b)` on the first character, with `a = 1`, `b = 2`.
pub fn instance<T: Real>(name: &str, a: &CrossedAlgebra<T>) -> Result<(Vec<(usize, usize)>, Vec<(usize, AlgebraElement<T>)>)> {
    match name {
        "abab" => {
            if a.group().order() < 3 {
                return Err(Error::Format("`abab` needs elements 1 and 2".into()));
            }
            let chi = a
                .sector(1)
                .iter()
                .copied()
                .find(|c| a.sector(2).contains(c))
                .ok_or_else(|| Error::Format("`abab` needs a character fixed by 1 and 2".into()))?;
            let ea = a.basis_element(1, chi)?;
            let eb = a.basis_element(2, chi)?;
            Ok((vec![], vec![(1, ea.clone()), (2, eb.clone()), (1, ea), (2, eb)]))
        }
        _ => Err(Error::Format(format!("unknown instance `{name}`"))),
    }
}

/// Sector data of an extension of the toric base by `Z/2` acting through the swap: the four
/// untwisted objects, and `sigma_pm = sqrt(2) (E[s, chi_0] +- E[s, chi_1])` of dimension `sqrt(2)`
/// in the twisted sector `s = 1`.
pub fn toric_sector_inputs<T: Real>(a: &CrossedAlgebra<T>) -> Result<Vec<SectorInput<T>>> {
    let base = a.base();
    let fusion = base.fusion().ok_or_else(|| Error::Format("toric sectors need fusion data".into()))?;
    if base.dim() != 4 || a.group().order() != 2 || a.sector(1).len() != 2 {
        return Err(Error::Format("toric sectors need the Z/2 swap extension of the toric base".into()));
    }
    let tol = T::lit(1e-9);
    let unit = (0..4)
        .find(|&c| fusion.characters.iter().all(|r| (r[c] - Complex::new(T::one(), T::zero())).norm() < tol))
        .ok_or_else(|| Error::Format("no trivial character".into()))?;
    let rows0 = (0..4)
        .map(|i| {
            Ok(SectorRow {
                label: fusion.basis[i].clone(),
                element: a.from_base(&base.basis_element(i).ok_or(Error::NotInBasis(0, i))?)?,
                dim: T::one(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let f = a.sector(1);
    let r2 = T::lit(2.0).sqrt();
    let rows1 = [("sigma+", T::one()), ("sigma-", -T::one())]
        .into_iter()
        .map(|(label, sgn)| {
            Ok(SectorRow {
                label: label.into(),
                element: a.element(&[(1, f[0], C::from(r2)), (1, f[1], C::from(r2 * sgn))])?,
                dim: r2,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dims = vec![T::one(); 4];
    Ok(vec![
        SectorInput { sector: 0, rows: rows0, char_dims: dims.clone(), dim_b: None, unit_character: Some(unit) },
        SectorInput { sector: 1, rows: rows1, char_dims: dims, dim_b: Some(T::lit(4.0)), unit_character: Some(unit) },
    ])
}

/// A random equivariant extension datum.
#[derive(Debug, Clone)]
pub struct RandomInstance<T: Real> {
    pub group: FiniteGroup,
    pub base: FrobeniusBase<T>,
    pub action: GAction,
    pub phi: Cochain<T>,
}

/// Coset permutation action of `G` on `G/K`; cosets are numbered by their least element.
fn coset_action(group: &FiniteGroup, k: &[usize]) -> Vec<Vec<usize>> {
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] == usize::MAX {
            for &h in k {
                coset_of[group.mul(x, h)] = reps.len();
            }
            reps.push(x);
        }
    }
    (0..n).map(|g| reps.iter().map(|&r| coset_of[group.mul(g, r)]).collect()).collect()
}

/// Draws a group from `groups`, an action on at most `max_chars` characters made of coset
/// orbits with random positive codegrees, and a normalized cocycle
/// `bicharacter * d(theta) * d(rho)` with `theta` unitary and `rho` positive.
pub fn random_instance<T: Real, R: Rng>(rng: &mut R, groups: &[&str], max_chars: usize) -> Result<RandomInstance<T>> {
    let name = groups[rng.gen_range(0..groups.len())];
    let group = FiniteGroup::named(name).ok_or_else(|| Error::Format(format!("unknown group `{name}`")))?;
    let ord = group.order();
    let mut perms: Vec<Vec<usize>> = vec![Vec::new(); ord];
    let mut codegrees = Vec::new();
    let orbits = rng.gen_range(1..=3);
    for _ in 0..orbits {
        let room = max_chars - codegrees.len();
        if room == 0 {
            break;
        }
        let mut gens: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..ord)).collect();
        let mut k = group.generated_subgroup(&gens);
        while ord / k.len() > room {
            gens.push(rng.gen_range(0..ord));
            k = group.generated_subgroup(&gens);
        }
        let k: Vec<usize> = k.into_iter().collect();
        let offset = codegrees.len();
        let local = coset_action(&group, &k);
        let d = T::lit(rng.gen_range(1.0..5.0));
        codegrees.extend(std::iter::repeat_n(d, local[0].len()));
        for (p, l) in perms.iter_mut().zip(local) {
            p.extend(l.into_iter().map(|c| c + offset));
        }
    }
    let n = codegrees.len();
    let base = FrobeniusBase::new(codegrees, None)?;
    let action = GAction::new(&base, &group, perms)?;
    let e = (0..ord).map(|g| group.element_order(g)).fold(1, lcm);
    let homs = homomorphisms_to_cyclic(&group, e);
    let f1 = &homs[rng.gen_range(0..homs.len())];
    let f2 = &homs[rng.gen_range(0..homs.len())];
    let mut phi = bicharacter::<T>(&group, n, e, f1, f2)?;
    let id = group.identity();
    let theta = Cochain::from_fn(1, ord, n, |a, _| {
        if a[0] == id {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::from_polar(T::one(), T::lit(rng.gen_range(0.0..std::f64::consts::TAU)))
        }
    })?;
    let rho = Cochain::from_fn(1, ord, n, |a, _| {
        if a[0] == id {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::lit(rng.gen_range(0.5..2.0)), T::zero())
        }
    })?;
    phi = phi.mul(&coboundary(&group, &action, &theta)?)?;
    phi = phi.mul(&coboundary(&group, &action, &rho)?)?;
    Ok(RandomInstance { group, base, action, phi })
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Unit-modulus random complex number.
pub fn random_phase<T: Real, R: Rng>(rng: &mut R) -> C<T> {
    Complex::from_polar(T::one(), T::lit(rng.gen_range(0.0..std::f64::consts::TAU)))
}
