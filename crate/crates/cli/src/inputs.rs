//! Resolution of `--group`, `--base`, ... values: a path when the file exists, else a built-in name.

use std::path::Path;

use gcrossed::catalog;
use gcrossed::io::{self, ActionFile, AlgebraFile, BaseFile, CochainFile, GroupFile, InstanceFile, SectorsFile};
use gcrossed::modular::{CategoricalInstance, SectorInput};
use gcrossed::{AlgebraElement64, Cochain64, CrossedAlgebra64, DiagonalizeOptions, FiniteGroup, FrobeniusBase64, GAction};

use crate::{Common, Failure};

pub type Instance = (Vec<(usize, usize)>, Vec<(usize, AlgebraElement64)>);

fn is_file(arg: &str) -> bool {
    Path::new(arg).is_file()
}

pub fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    value.as_deref().ok_or_else(|| Failure::input(format!("--{flag} is required")))
}

pub fn options(c: &Common) -> DiagonalizeOptions<f64> {
    DiagonalizeOptions { seed: c.seed, tol: c.tol }
}

pub fn group(arg: &str) -> Result<FiniteGroup, Failure> {
    if is_file(arg) {
        let f: GroupFile = io::read_json(arg)?;
        return Ok(io::group_from_file(&f)?);
    }
    FiniteGroup::named(arg).ok_or_else(|| Failure::input(format!("`{arg}` is neither a file nor a built-in group")))
}

pub fn base(arg: &str, c: &Common) -> Result<FrobeniusBase64, Failure> {
    if is_file(arg) {
        let f: BaseFile = io::read_json(arg)?;
        return Ok(io::base_from_file(&f, options(c))?);
    }
    Ok(catalog::base(arg)?)
}

pub fn action(arg: Option<&str>, g: &FiniteGroup, b: &FrobeniusBase64) -> Result<GAction, Failure> {
    match arg {
        None => Ok(GAction::trivial(b, g)),
        Some(s) if is_file(s) => {
            let f: ActionFile = io::read_json(s)?;
            Ok(io::action_from_file(&f, g, b)?)
        }
        Some(s) => Ok(catalog::action(s, g, b)?),
    }
}

pub fn cocycle(arg: &str, g: &FiniteGroup, b: &FrobeniusBase64) -> Result<Cochain64, Failure> {
    if is_file(arg) {
        let f: CochainFile = io::read_json(arg)?;
        return Ok(io::cochain_from_file(&f, g.order(), b.dim())?);
    }
    Ok(catalog::cocycle(arg, g, b)?)
}

pub fn algebra(c: &Common) -> Result<CrossedAlgebra64, Failure> {
    let path = c.algebra.as_ref().ok_or_else(|| Failure::input("--algebra is required"))?;
    let f: AlgebraFile = io::read_json(path)?;
    Ok(io::algebra_from_file(&f, options(c))?)
}

pub fn instance(arg: &str, a: &CrossedAlgebra64) -> Result<Instance, Failure> {
    if is_file(arg) {
        let f: InstanceFile = io::read_json(arg)?;
        let elems = f
            .elems
            .iter()
            .map(|(m, e)| Ok((*m, io::element_from_file(a, e)?)))
            .collect::<Result<Vec<_>, gcrossed::Error>>()?;
        return Ok((f.pairs, elems));
    }
    Ok(catalog::instance(arg, a)?)
}

pub struct Sectors {
    pub inputs: Vec<SectorInput<f64>>,
    pub queries: Vec<CategoricalInstance>,
    pub sign: Option<Cochain64>,
}

pub fn sectors(arg: &str, a: &CrossedAlgebra64) -> Result<Sectors, Failure> {
    if is_file(arg) {
        let f: SectorsFile = io::read_json(arg)?;
        let inputs = f.sectors.iter().map(|s| io::sector_from_file(a, s)).collect::<Result<_, _>>()?;
        let sign = match &f.sign {
            Some(s) => Some(io::cochain_from_file(s, a.group().order(), a.base().dim())?),
            None => None,
        };
        return Ok(Sectors { inputs, queries: f.queries.iter().map(Into::into).collect(), sign });
    }
    if arg != "toric" {
        return Err(Failure::input(format!("`{arg}` is neither a file nor a built-in sector set")));
    }
    let q = |objects: Vec<(usize, usize)>, pairs: Vec<(usize, usize)>| CategoricalInstance { pairs, objects };
    Ok(Sectors {
        inputs: catalog::toric_sector_inputs(a)?,
        queries: vec![
            q(vec![(0, 1), (0, 1), (0, 0)], vec![]),
            q(vec![(1, 0), (1, 0)], vec![]),
            q(vec![(1, 0), (1, 1), (0, 3)], vec![]),
            q(vec![(1, 0); 4], vec![]),
            q(vec![], vec![(0, 0)]),
            q(vec![], vec![(1, 1)]),
        ],
        sign: None,
    })
}
