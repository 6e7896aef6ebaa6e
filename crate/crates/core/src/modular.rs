//! Crossed S-matrices from twisted characters, their unitarity relation, and the
//! categorical twisted Verlinde formula evaluated from S-matrix data.

use std::collections::BTreeMap;

use crate::cohomology::Cochain;
use crate::crossed::{AlgebraElement, CrossedAlgebra};
use crate::error::{Error, Result};
use crate::frobenius::GAction;
use crate::group::FiniteGroup;
use crate::scalar::{one, zero, Real, C};
use crate::verlinde::TwistedCharacterTable;

/// `S^g` for one sector: rows are simple objects of the sector, columns the characters fixed by `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedSMatrixData<T> {
    pub sector: usize,
    pub labels: Vec<String>,
    /// `dim(M)` for each row.
    pub dims: Vec<T>,
    /// Characters indexing the columns.
    pub columns: Vec<usize>,
    /// `S_{1,C} = dim(C)` for each column.
    pub column_dims: Vec<T>,
    pub matrix: Vec<Vec<C<T>>>,
    pub dim_b: T,
}

/// One simple object of a sector, given by its expansion in the `E`-basis.
#[derive(Debug, Clone)]
pub struct SectorRow<T> {
    pub label: String,
    pub element: AlgebraElement<T>,
    pub dim: T,
}

/// Input for [`crossed_s_matrix`].
#[derive(Debug, Clone)]
pub struct SectorInput<T> {
    pub sector: usize,
    pub rows: Vec<SectorRow<T>>,
    /// `dim(C)` for every character of the base.
    pub char_dims: Vec<T>,
    /// Taken as `sum_C dim(C)^2` when absent.
    pub dim_b: Option<T>,
    /// Character playing the role of the unit object, for the `S_{M,1} = dim M` check.
    pub unit_character: Option<usize>,
}

/// `S^g_{M,C} = chi_C^g([M]) dim(C)`.
pub fn crossed_s_matrix<T: Real>(
    a: &CrossedAlgebra<T>,
    table: &TwistedCharacterTable<T>,
    input: &SectorInput<T>,
    tol: T,
) -> Result<CrossedSMatrixData<T>> {
    let g = input.sector;
    a.group().check_element(g)?;
    let n = a.base().dim();
    if input.char_dims.len() != n {
        return Err(Error::DimensionMismatch(format!("{} character dims for {n} characters", input.char_dims.len())));
    }
    if input.char_dims.iter().any(|&d| !(d > T::zero())) || input.rows.iter().any(|r| !(r.dim > T::zero())) {
        return Err(Error::DimensionMismatch("dimensions must be positive".into()));
    }
    let dim_b = input
        .dim_b
        .unwrap_or_else(|| input.char_dims.iter().fold(T::zero(), |acc, &d| acc + d * d));
    for (chi, &d) in input.char_dims.iter().enumerate() {
        let lhs = a.base().codegree(chi) * d * d;
        if (lhs - dim_b).abs() > tol * dim_b.max(T::one()) {
            return Err(Error::DimensionMismatch(format!(
                "codegree * dim^2 = {lhs} for character {chi}, but dim(B) = {dim_b}"
            )));
        }
    }
    let columns = a.sector(g);
    if input.rows.len() != columns.len() {
        return Err(Error::NotSpanning(format!(
            "{} rows for a component of dimension {}",
            input.rows.len(),
            columns.len()
        )));
    }
    for (i, r) in input.rows.iter().enumerate() {
        if !a.in_component(&r.element, g, tol)? {
            return Err(Error::WrongComponent(i));
        }
    }
    let mut matrix = Vec::with_capacity(columns.len());
    for r in &input.rows {
        let row = columns
            .iter()
            .map(|&chi| Ok(table.eval(a, g, chi, &r.element)? * input.char_dims[chi]))
            .collect::<Result<Vec<_>>>()?;
        matrix.push(row);
    }
    if rank(&matrix, tol) < columns.len() {
        return Err(Error::NotSpanning("rows are linearly dependent".into()));
    }
    if let Some(u) = input.unit_character {
        let col = columns
            .iter()
            .position(|&c| c == u)
            .ok_or(Error::NotFixed { g, chi: u })?;
        for (i, r) in input.rows.iter().enumerate() {
            let v = matrix[i][col];
            if (v - C::from(r.dim)).norm() > tol * r.dim.max(T::one()) {
                return Err(Error::DimensionMismatch(format!("S[{}, unit] = {v}, dim = {}", r.label, r.dim)));
            }
        }
    }
    Ok(CrossedSMatrixData {
        sector: g,
        labels: input.rows.iter().map(|r| r.label.clone()).collect(),
        dims: input.rows.iter().map(|r| r.dim).collect(),
        column_dims: columns.iter().map(|&c| input.char_dims[c]).collect(),
        columns,
        matrix,
        dim_b,
    })
}

fn rank<T: Real>(m: &[Vec<C<T>>], tol: T) -> usize {
    let mut a: Vec<Vec<C<T>>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).max_by(|&i, &j| a[i][c].norm().partial_cmp(&a[j][c].norm()).expect("finite")) else {
            break;
        };
        if a[p][c].norm() <= tol {
            continue;
        }
        a.swap(r, p);
        for i in r + 1..rows {
            let f = a[i][c] / a[r][c];
            for k in c..cols {
                let v = a[r][k];
                a[i][k] -= f * v;
            }
        }
        r += 1;
    }
    r
}

/// Outcome of [`s_unitarity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitarityCheck {
    pub passed: bool,
    pub residual: f64,
    /// Entry of `S S^dagger` or `S^dagger S` with the largest deviation.
    pub location: Option<(usize, usize)>,
}

/// Checks `S conj(S)^T = conj(S)^T S = dim(B) I`.
pub fn s_unitarity_check<T: Real>(s: &CrossedSMatrixData<T>, tol: T) -> UnitarityCheck {
    let m = &s.matrix;
    let k = m.len();
    if m.iter().any(|r| r.len() != k) {
        return UnitarityCheck { passed: false, residual: f64::INFINITY, location: None };
    }
    let mut worst = T::zero();
    let mut at = None;
    for i in 0..k {
        for j in 0..k {
            let want = if i == j { C::from(s.dim_b) } else { zero() };
            let row = (0..k).fold(zero::<T>(), |acc, l| acc + m[i][l] * m[j][l].conj());
            let col = (0..k).fold(zero::<T>(), |acc, l| acc + m[l][i].conj() * m[l][j]);
            let d = (row - want).norm().max((col - want).norm());
            if d > worst {
                worst = d;
                at = Some((i, j));
            }
        }
    }
    UnitarityCheck { passed: worst <= tol, residual: worst.as_f64(), location: at }
}

/// Instance for [`categorical_verlinde`]: handle pairs and objects `(sector, row)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CategoricalInstance {
    pub pairs: Vec<(usize, usize)>,
    pub objects: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalVerlinde<T> {
    pub value: C<T>,
    /// Whether the value lies within tolerance of a nonnegative integer.
    pub integral: bool,
}

/// `dim(B)^(r-1) sum_D (1/S_{1,D})^(s+2r-2) S^{m_1}_{M_1,D} ... S^{m_s}_{M_s,D} / (chi_D o phi_1)(...)`
/// over characters `D` fixed by every argument.
///
/// `scalar(chi, word)` supplies `chi o phi(word)`. The optional `sign` layer (a `+-1`-valued
/// 2-cochain) multiplies it by `prod_k sign(w_1 ... w_k, w_{k+1})`. Untwisted dimensions and
/// `dim(B)` come from the data of sector 0.
pub fn categorical_verlinde<T: Real>(
    group: &FiniteGroup,
    action: &GAction,
    sectors: &BTreeMap<usize, CrossedSMatrixData<T>>,
    sign: Option<&Cochain<T>>,
    scalar: impl Fn(usize, &[usize]) -> Result<C<T>>,
    instance: &CategoricalInstance,
    tol: T,
) -> Result<CategoricalVerlinde<T>> {
    let trivial = sectors.get(&0).ok_or(Error::MissingSector(0))?;
    let mut word = Vec::new();
    for &(g, h) in &instance.pairs {
        group.check_element(g)?;
        group.check_element(h)?;
        word.extend([g, h, group.inv(g), group.inv(h)]);
    }
    for &(m, row) in &instance.objects {
        group.check_element(m)?;
        let data = sectors.get(&m).ok_or(Error::MissingSector(m))?;
        if row >= data.labels.len() {
            return Err(Error::Format(format!("sector {m} has no row {row}")));
        }
        word.push(m);
    }
    if group.product(&word) != 0 {
        return Err(Error::ProductNotIdentity);
    }
    let r = instance.pairs.len() as i32;
    let s = instance.objects.len() as i32;
    let mut sum = zero::<T>();
    for d in action.fixed_characters(word.iter().copied()) {
        let col0 = trivial.columns.iter().position(|&c| c == d).ok_or(Error::MissingSector(0))?;
        let dim_d = trivial.column_dims[col0];
        let mut term = C::from(dim_d.powi(-(s + 2 * r - 2)));
        for &(m, row) in &instance.objects {
            let data = &sectors[&m];
            let col = data.columns.iter().position(|&c| c == d).ok_or(Error::NotFixed { g: m, chi: d })?;
            term *= data.matrix[row][col];
        }
        let mut phi1 = scalar(d, &word)?;
        if let Some(sg) = sign {
            let mut cur = 0;
            for &w in &word {
                phi1 *= sg.get(&[cur, w], d);
                cur = group.mul(cur, w);
            }
        }
        sum += term / phi1;
    }
    let value = sum * C::from(trivial.dim_b.powi(r - 1));
    let nearest = value.re.round();
    let integral = nearest > -T::lit(0.5) && (value - C::from(nearest)).norm() <= tol;
    Ok(CategoricalVerlinde { value, integral })
}

/// Classical Verlinde fusion multiplicity `sum_D S_{a,D} S_{b,D} conj(S_{c,D}) / (dim(B) S_{1,D})`
/// from the untwisted S-matrix alone.
pub fn classical_verlinde<T: Real>(s: &CrossedSMatrixData<T>, a: usize, b: usize, c: usize) -> C<T> {
    let k = s.columns.len();
    (0..k).fold(zero::<T>(), |acc, d| {
        acc + s.matrix[a][d] * s.matrix[b][d] * s.matrix[c][d].conj() / s.column_dims[d]
    }) / s.dim_b
}

/// Provider of twist scalars taken from a crossed algebra.
pub fn algebra_scalars<'a, T: Real>(
    a: &'a CrossedAlgebra<T>,
    table: &'a TwistedCharacterTable<T>,
) -> impl Fn(usize, &[usize]) -> Result<C<T>> + 'a {
    move |chi, word| crate::verlinde::twist_scalar(a, table, chi, word)
}

/// Scalar provider that is identically one.
pub fn unit_scalars<T: Real>(_chi: usize, _word: &[usize]) -> Result<C<T>> {
    Ok(one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed::tests::toric_extension;
    use crate::verlinde::{brute_force_lambda, TwistedCharacterTable};
    use num_complex::Complex;

    fn toric_sectors() -> (CrossedAlgebra<f64>, TwistedCharacterTable<f64>, BTreeMap<usize, CrossedSMatrixData<f64>>) {
        let a = toric_extension();
        let t = TwistedCharacterTable::new(&a);
        let base = a.base().clone();
        let labels = ["1", "e", "m", "f"];
        let rows0: Vec<SectorRow<f64>> = (0..4)
            .map(|i| SectorRow {
                label: labels[i].into(),
                element: a.from_base(&base.basis_element(i).unwrap()).unwrap(),
                dim: 1.0,
            })
            .collect();
        let unit = (0..4).find(|&c| base.fusion().unwrap().characters.iter().all(|r| (r[c] - one()).norm() < 1e-9)).unwrap();
        let s0 = crossed_s_matrix(
            &a,
            &t,
            &SectorInput { sector: 0, rows: rows0, char_dims: vec![1.0; 4], dim_b: None, unit_character: Some(unit) },
            1e-9,
        )
        .unwrap();
        let f = a.sector(1);
        let r2 = 2f64.sqrt();
        let rows1 = vec![
            SectorRow { label: "s+".into(), element: a.element(&[(1, f[0], C::from(r2)), (1, f[1], C::from(r2))]).unwrap(), dim: r2 },
            SectorRow { label: "s-".into(), element: a.element(&[(1, f[0], C::from(r2)), (1, f[1], C::from(-r2))]).unwrap(), dim: r2 },
        ];
        let s1 = crossed_s_matrix(
            &a,
            &t,
            &SectorInput { sector: 1, rows: rows1, char_dims: vec![1.0; 4], dim_b: Some(4.0), unit_character: Some(unit) },
            1e-9,
        )
        .unwrap();
        (a, t, BTreeMap::from([(0, s0), (1, s1)]))
    }

    #[test]
    fn toric_s_matrices() {
        let (_, _, sectors) = toric_sectors();
        let s0 = &sectors[&0];
        assert_eq!(s0.matrix.len(), 4);
        assert!(s0.matrix[0].iter().all(|v| (v - one()).norm() < 1e-9));
        assert!(s_unitarity_check(s0, 1e-8).passed);
        let s1 = &sectors[&1];
        let r2 = 2f64.sqrt();
        let want = [[r2, r2], [r2, -r2]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((s1.matrix[i][j] - C::from(want[i][j])).norm() < 1e-9);
            }
        }
        let check = s_unitarity_check(s1, 1e-8);
        assert!(check.passed, "{check:?}");
        let mut broken = s1.clone();
        broken.matrix[0][1] = zero();
        let check = s_unitarity_check(&broken, 1e-8);
        assert!(!check.passed);
        assert!(check.location.is_some());
    }

    #[test]
    fn trivial_s_matrix() {
        let s = CrossedSMatrixData {
            sector: 0,
            labels: vec!["1".into()],
            dims: vec![1.0],
            columns: vec![0],
            column_dims: vec![1.0],
            matrix: vec![vec![one()]],
            dim_b: 1.0,
        };
        assert!(s_unitarity_check(&s, 1e-12).passed);
    }

    #[test]
    fn dimension_mismatch() {
        let a = toric_extension();
        let t = TwistedCharacterTable::new(&a);
        let input = SectorInput { sector: 0, rows: vec![], char_dims: vec![1.0, 1.0, 1.0, 2.0], dim_b: None, unit_character: None };
        assert!(matches!(crossed_s_matrix(&a, &t, &input, 1e-9), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn categorical_examples() {
        let (a, t, sectors) = toric_sectors();
        let scal = algebra_scalars(&a, &t);
        let run = |inst: CategoricalInstance| {
            categorical_verlinde(a.group(), a.action(), &sectors, None, &scal, &inst, 1e-8).unwrap()
        };
        // (e, e, 1)
        let v = run(CategoricalInstance { pairs: vec![], objects: vec![(0, 1), (0, 1), (0, 0)] });
        assert!(v.integral && (v.value - one()).norm() < 1e-9);
        let classical = classical_verlinde(&sectors[&0], 1, 1, 0);
        assert!((classical - v.value).norm() < 1e-9);
        for m in 0..4 {
            let v = run(CategoricalInstance { pairs: vec![], objects: vec![(0, m), (0, m)] });
            assert!(v.integral && (v.value - one()).norm() < 1e-9);
        }
        // (sigma, sigma, sigma, sigma) agrees with the E-basis oracle
        let v = run(CategoricalInstance { pairs: vec![], objects: vec![(1, 0); 4] });
        assert!(v.integral && (v.value - C::from(2.0)).norm() < 1e-9);
        let f = a.sector(1);
        let r2 = 2f64.sqrt();
        let sp = a.element(&[(1, f[0], C::from(r2)), (1, f[1], C::from(r2))]).unwrap();
        let oracle = brute_force_lambda(&a, &[sp.clone(), sp.clone(), sp.clone(), sp]).unwrap();
        assert!((oracle - v.value).norm() < 1e-9);
        // genus one with no insertions counts the simple objects of the trivial sector
        let v = run(CategoricalInstance { pairs: vec![(0, 0)], objects: vec![] });
        assert!((v.value - Complex::new(4.0, 0.0)).norm() < 1e-9);

        assert!(matches!(
            categorical_verlinde(a.group(), a.action(), &sectors, None, &scal, &CategoricalInstance { pairs: vec![], objects: vec![(1, 0)] }, 1e-8),
            Err(Error::ProductNotIdentity)
        ));
        let only0: BTreeMap<_, _> = sectors.iter().filter(|(k, _)| **k == 0).map(|(k, v)| (*k, v.clone())).collect();
        assert!(matches!(
            categorical_verlinde(a.group(), a.action(), &only0, None, &scal, &CategoricalInstance { pairs: vec![], objects: vec![(1, 0), (1, 0)] }, 1e-8),
            Err(Error::MissingSector(1))
        ));
        // a trivial sign layer changes nothing
        let sign = Cochain::ones(2, 2, 4);
        let v = categorical_verlinde(a.group(), a.action(), &sectors, Some(&sign), &scal, &CategoricalInstance { pairs: vec![], objects: vec![(1, 0); 4] }, 1e-8).unwrap();
        assert!((v.value - C::from(2.0)).norm() < 1e-9);
    }
}
