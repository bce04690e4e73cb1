//! JSON algebra files.
//!
//! Structure constants are listed as `{i, j, k, value}` records with 1-based indices,
//! meaning `[e_i, e_j] = Σ_k value e_k`; the antisymmetric partner `(j, i, k)` is implied
//! and omitted triples are zero. Rationals are strings `"p/q"`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::quasilie::LieAlgebraSpec;
use crate::scalar::{self, Scalar};
use crate::tensoralg::{BasedSpace, StructureConstants};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

/// A matrix entry: a real number or a `[re, im]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> Complex64 {
        match self {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub version: u32,
    pub name: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub structure_constants: Vec<ConstantRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<Vec<String>>>,
    /// One square matrix per basis element, as a list of rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<Vec<Vec<Vec<Entry>>>>,
    /// Rows spanning a Lagrangian subalgebra, in the coordinates of this algebra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manin_subalgebra: Option<Vec<Vec<String>>>,
}

fn parse_matrix(rows: &[Vec<String>], cols: usize, what: &str) -> Result<RatMatrix> {
    let mut parsed = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Parse(format!("{what}: row {} has {} entries, expected {cols}", r + 1, row.len())));
        }
        parsed.push(row.iter().map(|s| scalar::parse(s)).collect::<Result<Vec<_>>>()?);
    }
    Ok(RatMatrix::from_rows(&parsed))
}

fn render_matrix(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(scalar::render).collect()).collect()
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format version {}", file.version)));
        }
        if file.dimension == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn space(&self) -> Result<BasedSpace> {
        match &self.labels {
            Some(l) if l.len() != self.dimension => {
                Err(Error::Parse(format!("{} labels for dimension {}", l.len(), self.dimension)))
            }
            Some(l) => BasedSpace::new(l.clone()),
            None => Ok(BasedSpace::numbered("e", self.dimension)),
        }
    }

    /// Dense structure constants. Fails on out-of-range indices, bad rationals,
    /// nonzero `f_ii^k`, or records contradicting each other.
    pub fn structure_constants(&self) -> Result<StructureConstants> {
        let n = self.dimension;
        let mut f = vec![Scalar::zero(); n * n * n];
        let mut seen = vec![false; n * n * n];
        for rec in &self.structure_constants {
            let (i, j, k) = (rec.i, rec.j, rec.k);
            if [i, j, k].iter().any(|&x| x == 0 || x > n) {
                return Err(Error::Parse(format!("index ({i},{j},{k}) out of range 1..={n}")));
            }
            let (i, j, k) = (i - 1, j - 1, k - 1);
            let v = scalar::parse(&rec.value)?;
            if i == j {
                if !v.is_zero() {
                    return Err(Error::Parse(format!("nonzero [e{0},e{0}] component", i + 1)));
                }
                continue;
            }
            let a = (i * n + j) * n + k;
            let b = (j * n + i) * n + k;
            if seen[a] && f[a] != v {
                return Err(Error::Parse(format!("conflicting records for ({},{},{})", i + 1, j + 1, k + 1)));
            }
            seen[a] = true;
            seen[b] = true;
            f[b] = -v.clone();
            f[a] = v;
        }
        StructureConstants::new(self.space()?, f)
    }

    pub fn form(&self) -> Result<Option<RatMatrix>> {
        self.form.as_ref().map(|rows| {
            if rows.len() != self.dimension {
                return Err(Error::Parse(format!("form has {} rows, expected {}", rows.len(), self.dimension)));
            }
            parse_matrix(rows, self.dimension, "form")
        })
        .transpose()
    }

    pub fn manin_subalgebra(&self) -> Result<Option<RatMatrix>> {
        self.manin_subalgebra
            .as_ref()
            .map(|rows| parse_matrix(rows, self.dimension, "manin_subalgebra"))
            .transpose()
    }

    pub fn representation(&self) -> Result<Option<Vec<DMatrix<Complex64>>>> {
        let Some(rep) = &self.representation else {
            return Ok(None);
        };
        if rep.len() != self.dimension {
            return Err(Error::Parse(format!("{} representation matrices for dimension {}", rep.len(), self.dimension)));
        }
        let mut out = Vec::with_capacity(rep.len());
        for (idx, m) in rep.iter().enumerate() {
            let size = m.len();
            if size == 0 || m.iter().any(|row| row.len() != size) {
                return Err(Error::Parse(format!("representation matrix {} is not square", idx + 1)));
            }
            out.push(DMatrix::from_fn(size, size, |r, c| m[r][c].value()));
        }
        Ok(Some(out))
    }

    /// Validated spec; fails on Jacobi or form problems.
    pub fn to_spec(&self) -> Result<LieAlgebraSpec> {
        LieAlgebraSpec::new(self.name.clone(), self.structure_constants()?, self.form()?)
    }

    pub fn from_spec(spec: &LieAlgebraSpec) -> Self {
        let f = spec.structure();
        let n = spec.dim();
        let mut records = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (k, c) in f.bracket_basis(i, j) {
                    records.push(ConstantRecord { i: i + 1, j: j + 1, k: k + 1, value: scalar::render(c) });
                }
            }
        }
        AlgebraFile {
            version: FORMAT_VERSION,
            name: spec.name().to_string(),
            dimension: n,
            labels: Some(spec.space().labels().to_vec()),
            structure_constants: records,
            form: spec.form().map(render_matrix),
            representation: None,
            manin_subalgebra: None,
        }
    }

    pub fn set_manin_subalgebra(&mut self, rows: &RatMatrix) {
        self.manin_subalgebra = Some(render_matrix(rows));
    }
}
