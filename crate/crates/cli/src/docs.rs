//! JSON documents read and written by the command line.
//!
//! Elements are written as text (see [`Field::format_element`]) and read
//! either as text or as a coefficient array `[c0, ..., c(N-1)]`.

use num_bigint::BigUint;
use optcode::construct::ExponentPattern;
use optcode::convcode::PolyMatrix;
use optcode::exactla::ExactMatrix;
use optcode::gf::{Field, FieldDescriptor, FieldElement};
use optcode::superreg::SupportPattern;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementDoc {
    Text(String),
    Coeffs(Vec<u64>),
}

impl ElementDoc {
    fn parse(&self, f: &Field) -> Result<FieldElement, CliError> {
        Ok(match self {
            ElementDoc::Text(t) => f.parse_element(t)?,
            ElementDoc::Coeffs(c) => f.element(c)?,
        })
    }

    fn format(f: &Field, e: &FieldElement) -> Self {
        ElementDoc::Text(f.format_element(e))
    }
}

fn parse_grid(f: &Field, grid: &[Vec<ElementDoc>]) -> Result<ExactMatrix, CliError> {
    let rows = grid
        .iter()
        .map(|r| r.iter().map(|e| e.parse(f)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() || rows[0].is_empty() {
        return Err(CliError::Usage(
            "matrix must have at least one row and column".into(),
        ));
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(CliError::Usage("matrix rows have different lengths".into()));
    }
    Ok(ExactMatrix::from_rows(f, rows)?)
}

fn format_grid(m: &ExactMatrix) -> Vec<Vec<ElementDoc>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|e| ElementDoc::format(m.field(), e))
                .collect()
        })
        .collect()
}

/// A matrix over an explicitly described field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub field: FieldDescriptor,
    pub entries: Vec<Vec<ElementDoc>>,
}

impl MatrixDocument {
    pub fn to_matrix(&self) -> Result<ExactMatrix, CliError> {
        let f = Field::from_descriptor(&self.field)?;
        parse_grid(&f, &self.entries)
    }

    pub fn from_matrix(m: &ExactMatrix) -> Self {
        MatrixDocument {
            field: m.field().descriptor(),
            entries: format_grid(m),
        }
    }
}

/// `G(z)` as its coefficient matrices `G_0, G_1, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDocument {
    pub field: FieldDescriptor,
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<Vec<Vec<ElementDoc>>>,
}

impl GeneratorDocument {
    pub fn to_generator(&self) -> Result<PolyMatrix, CliError> {
        let f = Field::from_descriptor(&self.field)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|g| parse_grid(&f, g))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(c) = coeffs
            .iter()
            .find(|c| (c.rows(), c.cols()) != (self.n, self.k))
        {
            return Err(CliError::Usage(format!(
                "coefficient is {}x{}, document declares {}x{}",
                c.rows(),
                c.cols(),
                self.n,
                self.k
            )));
        }
        Ok(PolyMatrix::new(&f, coeffs)?)
    }

    pub fn from_generator(g: &PolyMatrix) -> Self {
        GeneratorDocument {
            field: g.field().descriptor(),
            n: g.n(),
            k: g.k(),
            coeffs: g.coeffs().iter().map(format_grid).collect(),
        }
    }
}

/// A pattern row: a string of `x`/`1` (nonzero) and `.`/`0` (zero), or an
/// array of 0/1 values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RowDoc {
    Text(String),
    Cells(Vec<u8>),
}

/// An exponent: a decimal number, either as a JSON integer or a string,
/// or a string `2^e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentDoc {
    Int(u64),
    Text(String),
}

impl ExponentDoc {
    fn parse(&self) -> Result<BigUint, CliError> {
        let bad = |t: &str| CliError::Usage(format!("cannot parse exponent {t:?}"));
        match self {
            ExponentDoc::Int(v) => Ok(BigUint::from(*v)),
            ExponentDoc::Text(t) => {
                if let Some(e) = t.trim().strip_prefix("2^") {
                    let e: u32 = e.trim().parse().map_err(|_| bad(t))?;
                    Ok(BigUint::from(1u32) << e)
                } else {
                    t.trim().parse().map_err(|_| bad(t))
                }
            }
        }
    }
}

/// A zero pattern, given directly or through exponents, with an optional
/// minor address (0-based, strictly increasing).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Vec<RowDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<Vec<Option<ExponentDoc>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<Vec<usize>>,
}

impl PatternDocument {
    pub fn exponent_pattern(&self) -> Result<Option<ExponentPattern>, CliError> {
        let Some(grid) = &self.exponents else {
            return Ok(None);
        };
        let cells = grid
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| c.as_ref().map(ExponentDoc::parse).transpose())
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        ExponentPattern::from_rows(cells)
            .map(Some)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn support(&self) -> Result<SupportPattern, CliError> {
        match (&self.pattern, self.exponent_pattern()?) {
            (Some(_), Some(_)) => Err(CliError::Usage(
                "give either pattern or exponents, not both".into(),
            )),
            (None, None) => Err(CliError::Usage(
                "document needs a pattern or exponents".into(),
            )),
            (None, Some(p)) => Ok(p.support()),
            (Some(rows), None) => {
                let grid = rows
                    .iter()
                    .map(|r| match r {
                        RowDoc::Text(t) => t
                            .chars()
                            .map(|c| match c {
                                'x' | 'X' | '1' | '*' => Ok(true),
                                '.' | '0' => Ok(false),
                                _ => Err(CliError::Usage(format!("bad pattern character {c:?}"))),
                            })
                            .collect::<Result<Vec<_>, _>>(),
                        RowDoc::Cells(c) => c
                            .iter()
                            .map(|&v| match v {
                                0 => Ok(false),
                                1 => Ok(true),
                                _ => Err(CliError::Usage(format!("bad pattern cell {v}"))),
                            })
                            .collect(),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SupportPattern::from_rows(&grid).map_err(|e| CliError::Usage(e.to_string()))
            }
        }
    }
}
