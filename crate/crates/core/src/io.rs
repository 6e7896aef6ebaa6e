//! JSON file formats. Complex numbers are `[re, im]` pairs.

use std::path::Path;

use nalgebra::RealField;
use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cohomology::Cochain;
use crate::crossed::{action_scalars, strict_basis, AlgebraElement, CrossedAlgebra};
use crate::error::{Error, Result};
use crate::frobenius::{diagonalize_fusion_ring, DiagonalizeOptions, FrobeniusBase, GAction};
use crate::group::{FiniteGroup, DEFAULT_ORDER_CAP};
use crate::modular::{CategoricalInstance, CrossedSMatrixData, SectorInput, SectorRow};
use crate::scalar::{from_f64_pair, Real, C};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionFile {
    pub basis: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<Vec<Vec<f64>>>,
    pub duality: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codegrees: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fusion: Option<FusionFile>,
}

/// Either character permutations per element (`perm`) or, for bases with a fusion
/// presentation, basis permutations per element (`basis_perm`, `g(b_i) = b_{basis_perm[g][i]}`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ActionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_perm: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CochainFile {
    pub degree: usize,
    /// Nested arrays indexed `[g][h]...[chi]` of `[re, im]`.
    pub values: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub group: GroupFile,
    pub base: BaseFile,
    pub action: ActionFile,
    pub phi: CochainFile,
    pub theta: CochainFile,
    /// Action scalars `act(g, h, chi)`; derived from `phi` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub act: Option<CochainFile>,
    /// Basis labels `[g, chi]`; the fixed-point basis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementFile {
    pub coeffs: Vec<(usize, usize, [f64; 2])>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct InstanceFile {
    #[serde(default)]
    pub pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub elems: Vec<(usize, ElementFile)>,
}

pub fn read_json<D: DeserializeOwned>(path: impl AsRef<Path>) -> Result<D> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Rounds to 12 decimals and maps `-0` to `0`, so that output files are reproducible.
pub fn round_output(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Applies [`round_output`] to every float in a JSON tree.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            serde_json::Number::from_f64(round_output(n.as_f64().unwrap_or(0.0))).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

pub fn write_json<S: Serialize>(path: impl AsRef<Path>, value: &S) -> Result<()> {
    let v = round_json(serde_json::to_value(value)?);
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn complex_pair<T: Real>(z: C<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

fn from_pair<T: Real>(p: [f64; 2]) -> C<T> {
    from_f64_pair(p[0], p[1])
}

// ---- groups --------------------------------------------------------

pub fn group_to_file(g: &FiniteGroup) -> GroupFile {
    GroupFile { order: g.order(), table: g.table().to_vec(), labels: g.labels().map(<[String]>::to_vec) }
}

pub fn group_from_file(f: &GroupFile) -> Result<FiniteGroup> {
    if f.table.len() != f.order {
        return Err(Error::Format(format!("order {} but {} table rows", f.order, f.table.len())));
    }
    let g = FiniteGroup::from_table_with_cap(f.table.clone(), DEFAULT_ORDER_CAP)?;
    match &f.labels {
        Some(l) => g.with_labels(l.clone()),
        None => Ok(g),
    }
}

// ---- bases ---------------------------------------------------------

pub fn base_to_file<T: Real>(b: &FrobeniusBase<T>) -> BaseFile {
    BaseFile {
        characters: Some(b.labels().to_vec()),
        codegrees: Some(b.codegrees().iter().map(|c| c.as_f64()).collect()),
        fusion: b.fusion().map(|f| FusionFile {
            basis: f.basis.clone(),
            n: f.structure
                .iter()
                .map(|a| a.iter().map(|b| b.iter().map(|z| z.re.as_f64()).collect()).collect())
                .collect(),
            duality: f.duality.clone(),
        }),
    }
}

/// Loads a base; with a fusion presentation the characters are recomputed by the diagonalizer
/// and any stored codegrees must agree with it.
pub fn base_from_file<T: Real + RealField>(f: &BaseFile, opts: DiagonalizeOptions<T>) -> Result<FrobeniusBase<T>> {
    match &f.fusion {
        Some(fu) => {
            let structure = fu
                .n
                .iter()
                .map(|a| a.iter().map(|b| b.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect()).collect())
                .collect();
            let base = diagonalize_fusion_ring(structure, fu.duality.clone(), Some(fu.basis.clone()), opts)?;
            if let Some(cd) = &f.codegrees {
                if cd.len() != base.dim()
                    || cd.iter().zip(base.codegrees()).any(|(&a, b)| (a - b.as_f64()).abs() > 1e-6 * a.abs().max(1.0))
                {
                    return Err(Error::Format("stored codegrees disagree with the fusion data".into()));
                }
            }
            match &f.characters {
                Some(l) if l.len() == base.dim() => {
                    let fusion = base.fusion().cloned();
                    FrobeniusBase::from_parts(l.clone(), base.codegrees().to_vec(), fusion)
                }
                Some(_) => Err(Error::ShapeMismatch("character label count".into())),
                None => Ok(base),
            }
        }
        None => {
            let cd = f.codegrees.as_ref().ok_or_else(|| Error::Format("base needs codegrees or fusion data".into()))?;
            FrobeniusBase::new(cd.iter().map(|&x| T::lit(x)).collect(), f.characters.clone())
        }
    }
}

// ---- actions -------------------------------------------------------

pub fn action_to_file(a: &GAction) -> ActionFile {
    ActionFile { perm: Some(a.perms().to_vec()), basis_perm: None }
}

pub fn action_from_file<T: Real>(f: &ActionFile, group: &FiniteGroup, base: &FrobeniusBase<T>) -> Result<GAction> {
    match (&f.perm, &f.basis_perm) {
        (Some(p), None) => GAction::new(base, group, p.clone()),
        (None, Some(bp)) => GAction::from_basis_permutations(base, group, bp),
        (None, None) => Ok(GAction::trivial(base, group)),
        (Some(_), Some(_)) => Err(Error::Format("give either perm or basis_perm, not both".into())),
    }
}

// ---- cochains ------------------------------------------------------

pub fn cochain_to_file<T: Real>(c: &Cochain<T>) -> CochainFile {
    fn nest<T: Real>(c: &Cochain<T>, prefix: &mut Vec<usize>) -> Value {
        if prefix.len() == c.degree() {
            return Value::Array(
                c.at(prefix)
                    .iter()
                    .map(|z| Value::from(vec![z.re.as_f64(), z.im.as_f64()]))
                    .collect(),
            );
        }
        Value::Array(
            (0..c.order())
                .map(|g| {
                    prefix.push(g);
                    let v = nest(c, prefix);
                    prefix.pop();
                    v
                })
                .collect(),
        )
    }
    CochainFile { degree: c.degree(), values: nest(c, &mut Vec::new()) }
}

fn parse_pair(v: &Value) -> Result<[f64; 2]> {
    match v {
        Value::Array(p) if p.len() == 2 => {
            let re = p[0].as_f64().ok_or_else(|| Error::Format("non-numeric real part".into()))?;
            let im = p[1].as_f64().ok_or_else(|| Error::Format("non-numeric imaginary part".into()))?;
            Ok([re, im])
        }
        Value::Number(n) => Ok([n.as_f64().unwrap_or(f64::NAN), 0.0]),
        _ => Err(Error::Format(format!("expected [re, im], got {v}"))),
    }
}

/// Parses a cochain file, checking it against the expected group order and character count.
pub fn cochain_from_file<T: Real>(f: &CochainFile, order: usize, n: usize) -> Result<Cochain<T>> {
    if !(1..=3).contains(&f.degree) {
        return Err(Error::Format(format!("unsupported cochain degree {}", f.degree)));
    }
    let mut values = Vec::with_capacity(order.pow(f.degree as u32) * n);
    fn walk(v: &Value, depth: usize, order: usize, n: usize, out: &mut Vec<[f64; 2]>) -> Result<()> {
        let arr = v.as_array().ok_or_else(|| Error::Format("cochain values must be nested arrays".into()))?;
        if depth == 0 {
            if arr.len() != n {
                return Err(Error::ShapeMismatch(format!("{} character values, expected {n}", arr.len())));
            }
            for p in arr {
                out.push(parse_pair(p)?);
            }
            return Ok(());
        }
        if arr.len() != order {
            return Err(Error::ShapeMismatch(format!("{} entries along a group axis, expected {order}", arr.len())));
        }
        for x in arr {
            walk(x, depth - 1, order, n, out)?;
        }
        Ok(())
    }
    let mut raw = Vec::new();
    walk(&f.values, f.degree, order, n, &mut raw)?;
    values.extend(raw.into_iter().map(from_pair::<T>));
    Cochain::new(f.degree, order, n, values)
}

// ---- algebras and elements -----------------------------------------

pub fn algebra_to_file<T: Real>(a: &CrossedAlgebra<T>) -> Result<AlgebraFile> {
    let order = a.group().order();
    let n = a.base().dim();
    let phi = Cochain::new(2, order, n, a.mult_table().to_vec())?;
    let theta = Cochain::new(1, order, n, a.theta_table().to_vec())?;
    let derived = action_scalars(a.group(), a.action(), &phi);
    let act_matches = derived
        .iter()
        .zip(a.act_table())
        .all(|(x, y)| (x - y).norm() <= T::default_tol());
    let strict = strict_basis(a.group(), a.action());
    Ok(AlgebraFile {
        group: group_to_file(a.group()),
        base: base_to_file(a.base()),
        action: action_to_file(a.action()),
        phi: cochain_to_file(&phi),
        theta: cochain_to_file(&theta),
        act: if act_matches { None } else { Some(cochain_to_file(&Cochain::new(2, order, n, a.act_table().to_vec())?)) },
        basis: if strict == a.basis() { None } else { Some(a.basis().to_vec()) },
    })
}

pub fn algebra_from_file<T: Real + RealField>(f: &AlgebraFile, opts: DiagonalizeOptions<T>) -> Result<CrossedAlgebra<T>> {
    let group = group_from_file(&f.group)?;
    let base = base_from_file(&f.base, opts)?;
    let action = action_from_file(&f.action, &group, &base)?;
    let order = group.order();
    let n = base.dim();
    let phi: Cochain<T> = cochain_from_file(&f.phi, order, n)?;
    if phi.degree() != 2 {
        return Err(Error::Format("phi must have degree 2".into()));
    }
    let theta: Cochain<T> = cochain_from_file(&f.theta, order, n)?;
    if theta.degree() != 1 {
        return Err(Error::Format("theta must have degree 1".into()));
    }
    let act = match &f.act {
        Some(af) => {
            let c: Cochain<T> = cochain_from_file(af, order, n)?;
            if c.degree() != 2 {
                return Err(Error::Format("act must have degree 2".into()));
            }
            c.values().to_vec()
        }
        None => action_scalars(&group, &action, &phi),
    };
    let basis = f.basis.clone().unwrap_or_else(|| strict_basis(&group, &action));
    CrossedAlgebra::from_tables(group, base, action, basis, phi.values().to_vec(), act, theta.values().to_vec())
}

pub fn element_to_file<T: Real>(a: &CrossedAlgebra<T>, x: &AlgebraElement<T>) -> ElementFile {
    ElementFile {
        coeffs: a
            .basis()
            .iter()
            .zip(x.coeffs())
            .filter(|(_, c)| c.norm() > T::zero())
            .map(|(&(g, chi), &c)| (g, chi, complex_pair(c)))
            .collect(),
    }
}

pub fn element_from_file<T: Real>(a: &CrossedAlgebra<T>, f: &ElementFile) -> Result<AlgebraElement<T>> {
    let terms: Vec<(usize, usize, C<T>)> = f.coeffs.iter().map(|&(g, chi, p)| (g, chi, from_pair(p))).collect();
    a.element(&terms)
}

// ---- S-matrix data -------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SMatrixFile {
    pub sector: usize,
    pub labels: Vec<String>,
    pub dims: Vec<f64>,
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "dimB")]
    pub dim_b: f64,
    /// Fixed characters indexing the columns, with their dimensions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column_dims: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorRowFile {
    pub label: String,
    pub element: ElementFile,
    pub dim: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorFile {
    pub sector: usize,
    pub rows: Vec<SectorRowFile>,
    pub char_dims: Vec<f64>,
    #[serde(default, rename = "dimB", skip_serializing_if = "Option::is_none")]
    pub dim_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct QueryFile {
    #[serde(default)]
    pub pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub objects: Vec<(usize, usize)>,
}

/// Sector bases for the S-matrix computation, categorical queries, and an optional
/// `+-1` sign layer in the cocycle format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SectorsFile {
    pub sectors: Vec<SectorFile>,
    #[serde(default)]
    pub queries: Vec<QueryFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<CochainFile>,
}

pub fn s_matrix_to_file<T: Real>(s: &CrossedSMatrixData<T>) -> SMatrixFile {
    SMatrixFile {
        sector: s.sector,
        labels: s.labels.clone(),
        dims: s.dims.iter().map(|d| d.as_f64()).collect(),
        matrix: s.matrix.iter().map(|r| r.iter().map(|&z| complex_pair(z)).collect()).collect(),
        dim_b: s.dim_b.as_f64(),
        columns: Some(s.columns.clone()),
        column_dims: Some(s.column_dims.iter().map(|d| d.as_f64()).collect()),
    }
}

/// Reads S-matrix data; without explicit columns they are taken to be `0..k` with
/// dimension `S_{1,C}` read from the unit row, when present, or 1.
pub fn s_matrix_from_file<T: Real>(f: &SMatrixFile) -> Result<CrossedSMatrixData<T>> {
    let k = f.labels.len();
    if f.dims.len() != k || f.matrix.len() != k || f.matrix.iter().any(|r| r.len() != k) {
        return Err(Error::ShapeMismatch("S-matrix must be square with one label and dim per row".into()));
    }
    let columns = f.columns.clone().unwrap_or_else(|| (0..k).collect());
    let column_dims = f.column_dims.clone().unwrap_or_else(|| vec![1.0; k]);
    if columns.len() != k || column_dims.len() != k {
        return Err(Error::ShapeMismatch("column data does not match the matrix".into()));
    }
    Ok(CrossedSMatrixData {
        sector: f.sector,
        labels: f.labels.clone(),
        dims: f.dims.iter().map(|&d| T::lit(d)).collect(),
        columns,
        column_dims: column_dims.into_iter().map(T::lit).collect(),
        matrix: f.matrix.iter().map(|r| r.iter().map(|&p| from_pair(p)).collect()).collect(),
        dim_b: T::lit(f.dim_b),
    })
}

pub fn sector_from_file<T: Real>(a: &CrossedAlgebra<T>, f: &SectorFile) -> Result<SectorInput<T>> {
    Ok(SectorInput {
        sector: f.sector,
        rows: f
            .rows
            .iter()
            .map(|r| Ok(SectorRow { label: r.label.clone(), element: element_from_file(a, &r.element)?, dim: T::lit(r.dim) }))
            .collect::<Result<_>>()?,
        char_dims: f.char_dims.iter().map(|&d| T::lit(d)).collect(),
        dim_b: f.dim_b.map(T::lit),
        unit_character: f.unit,
    })
}

pub fn sector_to_file<T: Real>(a: &CrossedAlgebra<T>, s: &SectorInput<T>) -> SectorFile {
    SectorFile {
        sector: s.sector,
        rows: s
            .rows
            .iter()
            .map(|r| SectorRowFile { label: r.label.clone(), element: element_to_file(a, &r.element), dim: r.dim.as_f64() })
            .collect(),
        char_dims: s.char_dims.iter().map(|d| d.as_f64()).collect(),
        dim_b: s.dim_b.map(|d| d.as_f64()),
        unit: s.unit_character,
    }
}

impl From<&QueryFile> for CategoricalInstance {
    fn from(q: &QueryFile) -> Self {
        CategoricalInstance { pairs: q.pairs.clone(), objects: q.objects.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed::tests::{klein_algebra, klein_twist, toric_extension};
    use crate::crossed::verify_crossed_axioms;

    #[test]
    fn algebra_round_trip() {
        for a in [klein_algebra(&klein_twist()), toric_extension()] {
            let f = algebra_to_file(&a).unwrap();
            let text = serde_json::to_string(&f).unwrap();
            let back: AlgebraFile = serde_json::from_str(&text).unwrap();
            let b: CrossedAlgebra<f64> = algebra_from_file(&back, DiagonalizeOptions::default()).unwrap();
            assert_eq!(a.basis(), b.basis());
            for (x, y) in a.mult_table().iter().zip(b.mult_table()) {
                assert!((x - y).norm() < 1e-12);
            }
            assert!(verify_crossed_axioms(&b, 1e-9).all_passed());
        }
    }

    #[test]
    fn malformed_inputs() {
        let f = CochainFile { degree: 2, values: serde_json::json!([[[[1.0, 0.0]]]]) };
        assert!(cochain_from_file::<f64>(&f, 1, 1).is_ok());
        assert!(matches!(cochain_from_file::<f64>(&f, 2, 1), Err(Error::ShapeMismatch(_))));
        let f = CochainFile { degree: 2, values: serde_json::json!([[["x"]]]) };
        assert!(cochain_from_file::<f64>(&f, 1, 1).unwrap_err().is_malformed_input());
        let g = GroupFile { order: 2, table: vec![vec![0, 1]], labels: None };
        assert!(group_from_file(&g).unwrap_err().is_malformed_input());
    }

    #[test]
    fn s_matrix_round_trip() {
        let f = SMatrixFile {
            sector: 1,
            labels: vec!["a".into(), "b".into()],
            dims: vec![1.0, 1.0],
            matrix: vec![vec![[1.0, 0.0], [1.0, 0.0]], vec![[1.0, 0.0], [-1.0, 0.0]]],
            dim_b: 2.0,
            columns: None,
            column_dims: None,
        };
        let s: CrossedSMatrixData<f64> = s_matrix_from_file(&f).unwrap();
        assert!(crate::modular::s_unitarity_check(&s, 1e-12).passed);
        let g = s_matrix_to_file(&s);
        assert_eq!(g.columns, Some(vec![0, 1]));
        assert_eq!(g.matrix, f.matrix);
    }

    #[test]
    fn rounding_is_stable() {
        assert_eq!(round_output(-1e-17), 0.0);
        assert_eq!(round_output(0.1 + 0.2), 0.3);
        assert!(round_output(-0.0).is_sign_positive());
    }
}
