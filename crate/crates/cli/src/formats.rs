//! JSON shapes of the domain types. Rationals are written as strings such as
//! `"3/2"` or `"-1"`; plain JSON integers are accepted on input.

use std::str::FromStr;

use lindeg_core::degeneration_lab::{DimEstimate, HomReport};
use lindeg_core::exact_linalg::{MatrixQ, Q};
use lindeg_core::grid_quiver::make_point;
use lindeg_core::parametrizations::{InequalityReport, Violation};
use lindeg_core::{Decomposition, DimGrid, GridShape, HeightVector, MapTuple, RankVector, SwArray, SwTable};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A type with a JSON form. `from_dto(to_dto(x)) == x`.
pub trait Format: Sized {
    type Dto: Serialize + DeserializeOwned;

    fn to_dto(&self) -> Self::Dto;
    fn from_dto(dto: Self::Dto) -> Result<Self, CliError>;
}

pub fn to_json<T: Format>(x: &T) -> String {
    serde_json::to_string_pretty(&x.to_dto()).expect("plain data serializes")
}

/// Parses `text`; `source` names the input in diagnostics.
pub fn from_json<T: Format>(text: &str, source: &str) -> Result<T, CliError> {
    let dto: T::Dto = serde_json::from_str(text).map_err(|e| CliError::Parse {
        input: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    T::from_dto(dto)
}

// serde_json appends "at line L column C"; the diagnostic prints it up front.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(cut) => message[..cut].to_string(),
        None => message.to_string(),
    }
}

fn shape(n: usize) -> Result<GridShape, CliError> {
    Ok(GridShape::new(n)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

pub fn format_rational(q: &Q) -> String {
    q.to_string()
}

pub fn parse_rational(s: &Scalar) -> Result<Q, CliError> {
    match s {
        Scalar::Int(v) => Ok(Q::from_integer((*v).into())),
        Scalar::Text(t) => {
            Q::from_str(t.trim()).map_err(|_| CliError::Invalid(format!("not a rational number: {t:?}")))
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapTupleDto {
    pub n: usize,
    pub maps: Vec<Vec<Vec<Scalar>>>,
}

impl Format for MapTuple {
    type Dto = MapTupleDto;

    fn to_dto(&self) -> MapTupleDto {
        let maps = self
            .maps()
            .iter()
            .map(|u| {
                u.matrix()
                    .to_rows()
                    .iter()
                    .map(|row| row.iter().map(|x| Scalar::Text(format_rational(x))).collect())
                    .collect()
            })
            .collect();
        MapTupleDto { n: self.shape().n(), maps }
    }

    fn from_dto(dto: MapTupleDto) -> Result<Self, CliError> {
        let s = shape(dto.n)?;
        let mats = dto
            .maps
            .iter()
            .map(|rows| {
                let rows = rows
                    .iter()
                    .map(|row| row.iter().map(parse_rational).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(MatrixQ::from_rows(rows)?)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(make_point(s, mats)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeightVectorDto {
    pub h: Vec<usize>,
}

impl Format for HeightVector {
    type Dto = HeightVectorDto;

    fn to_dto(&self) -> HeightVectorDto {
        HeightVectorDto { h: self.heights().to_vec() }
    }

    fn from_dto(dto: HeightVectorDto) -> Result<Self, CliError> {
        Ok(HeightVector::new(shape(dto.h.len())?, dto.h)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummandDto {
    pub h: Vec<usize>,
    pub mult: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionDto {
    pub summands: Vec<SummandDto>,
    /// Informational; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Format for Decomposition {
    type Dto = DecompositionDto;

    fn to_dto(&self) -> DecompositionDto {
        let summands = self.iter().map(|(h, mult)| SummandDto { h: h.heights().to_vec(), mult }).collect();
        DecompositionDto { summands, label: Some(self.label()) }
    }

    fn from_dto(dto: DecompositionDto) -> Result<Self, CliError> {
        let mut d = Decomposition::new();
        for s in dto.summands {
            let h = HeightVector::from_dto(HeightVectorDto { h: s.h })?;
            if s.mult > 0 {
                d.add(h, s.mult);
            }
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimGridDto {
    pub n: usize,
    /// `rows[i-1][j-1]`.
    pub rows: Vec<Vec<usize>>,
}

impl Format for DimGrid {
    type Dto = DimGridDto;

    fn to_dto(&self) -> DimGridDto {
        DimGridDto { n: self.shape().n(), rows: self.rows() }
    }

    fn from_dto(dto: DimGridDto) -> Result<Self, CliError> {
        Ok(DimGrid::new(shape(dto.n)?, dto.rows)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankEntryDto {
    pub i: usize,
    pub j1: usize,
    pub j2: usize,
    pub k: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankVectorDto {
    pub n: usize,
    pub dims: Vec<Vec<usize>>,
    pub entries: Vec<RankEntryDto>,
    /// Intersection entries in printing order; ignored on input.
    #[serde(default)]
    pub flat: Vec<usize>,
}

impl Format for RankVector {
    type Dto = RankVectorDto;

    fn to_dto(&self) -> RankVectorDto {
        RankVectorDto {
            n: self.shape().n(),
            dims: self.dims().rows(),
            entries: self.entries().into_iter().map(|(i, j1, j2, k, v)| RankEntryDto { i, j1, j2, k, v }).collect(),
            flat: self.flat(),
        }
    }

    fn from_dto(dto: RankVectorDto) -> Result<Self, CliError> {
        let dims = DimGrid::new(shape(dto.n)?, dto.dims)?;
        let entries: Vec<_> = dto.entries.iter().map(|e| (e.i, e.j1, e.j2, e.k, e.v)).collect();
        Ok(RankVector::from_parts(dims, &entries)?)
    }
}

/// `(a, b, c)` as printed in examples.
pub fn tuple_text(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SwWindowDto {
    pub j1: usize,
    pub j2: usize,
    /// Full rows, `null` below the diagonal.
    pub table: Vec<Vec<Option<usize>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SwArrayDto {
    pub n: usize,
    pub windows: Vec<SwWindowDto>,
}

impl Format for SwArray {
    type Dto = SwArrayDto;

    fn to_dto(&self) -> SwArrayDto {
        let windows = self
            .windows()
            .map(|((j1, j2), t)| {
                let m = t.size();
                let table = (1..=m).map(|p| (1..=m).map(|q| (p <= q).then(|| t.get(p, q))).collect()).collect();
                SwWindowDto { j1, j2, table }
            })
            .collect();
        SwArrayDto { n: self.shape().n(), windows }
    }

    fn from_dto(dto: SwArrayDto) -> Result<Self, CliError> {
        let s = shape(dto.n)?;
        let m = s.size();
        if dto.windows.len() != s.windows().len() {
            return Err(CliError::Invalid(format!(
                "expected {} windows, found {}",
                s.windows().len(),
                dto.windows.len()
            )));
        }
        let mut tables = Vec::new();
        for (w, expected) in dto.windows.iter().zip(s.windows()) {
            if (w.j1, w.j2) != expected {
                return Err(CliError::Invalid(format!(
                    "window ({},{}) out of order, expected {expected:?}",
                    w.j1, w.j2
                )));
            }
            if w.table.len() != m {
                return Err(CliError::Invalid(format!("window ({},{}) needs {m} rows", w.j1, w.j2)));
            }
            let mut upper = Vec::with_capacity(m);
            for (p, row) in w.table.iter().enumerate() {
                // Rows may be given padded or as their upper part only.
                let vals: Vec<Option<usize>> = if row.len() == m { row[p..].to_vec() } else { row.clone() };
                if row.len() == m && row[..p].iter().any(Option::is_some) {
                    return Err(CliError::Invalid(format!(
                        "window ({},{}) row {} has entries below the diagonal",
                        w.j1,
                        w.j2,
                        p + 1
                    )));
                }
                let vals = vals
                    .into_iter()
                    .map(|v| {
                        v.ok_or_else(|| {
                            CliError::Invalid(format!(
                                "window ({},{}) row {} has a null on or above the diagonal",
                                w.j1,
                                w.j2,
                                p + 1
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                upper.push(vals);
            }
            tables.push(SwTable::from_upper(m, &upper)?);
        }
        Ok(SwArray::new(s, tables)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDto {
    pub q: u64,
    pub count: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimEstimateDto {
    pub degree: Option<usize>,
    pub coefficients: Vec<i128>,
    pub validated: bool,
    pub samples: Vec<SampleDto>,
    #[serde(default)]
    pub polynomial: String,
}

/// `q^2 + 2q + 1`; `0` for the zero polynomial.
pub fn polynomial_text(coefficients: &[i128]) -> String {
    let mut terms = Vec::new();
    for (d, &c) in coefficients.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        let body = match (d, mag) {
            (0, _) => mag.to_string(),
            (1, 1) => "q".to_string(),
            (1, _) => format!("{mag}q"),
            (_, 1) => format!("q^{d}"),
            _ => format!("{mag}q^{d}"),
        };
        let sign = if c < 0 { "-" } else { "+" };
        if terms.is_empty() {
            terms.push(if c < 0 { format!("-{body}") } else { body });
        } else {
            terms.push(format!("{sign} {body}"));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" ")
    }
}

impl Format for DimEstimate {
    type Dto = DimEstimateDto;

    fn to_dto(&self) -> DimEstimateDto {
        DimEstimateDto {
            degree: self.degree,
            coefficients: self.coefficients.clone(),
            validated: self.validated,
            samples: self.samples.iter().map(|&(q, count)| SampleDto { q, count }).collect(),
            polynomial: polynomial_text(&self.coefficients),
        }
    }

    fn from_dto(dto: DimEstimateDto) -> Result<Self, CliError> {
        Ok(DimEstimate {
            degree: dto.degree,
            coefficients: dto.coefficients,
            validated: dto.validated,
            samples: dto.samples.into_iter().map(|s| (s.q, s.count)).collect(),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomReportDto {
    pub dim_g: usize,
    pub dim_gr: usize,
    pub dim_hom0: usize,
    pub dim_v: usize,
    pub dim_re: usize,
    pub codim: usize,
    pub indep_eqs: usize,
    pub lci: bool,
    pub point_ranks: Vec<usize>,
    pub equations: usize,
    pub variables: usize,
    pub gr_estimate: DimEstimateDto,
    pub re_estimate: DimEstimateDto,
}

impl Format for HomReport {
    type Dto = HomReportDto;

    fn to_dto(&self) -> HomReportDto {
        HomReportDto {
            dim_g: self.dim_g,
            dim_gr: self.dim_gr,
            dim_hom0: self.dim_hom0,
            dim_v: self.dim_v,
            dim_re: self.dim_re,
            codim: self.codim,
            indep_eqs: self.indep_eqs,
            lci: self.lci,
            point_ranks: self.point_ranks.clone(),
            equations: self.equations,
            variables: self.variables,
            gr_estimate: self.gr_estimate.to_dto(),
            re_estimate: self.re_estimate.to_dto(),
        }
    }

    fn from_dto(dto: HomReportDto) -> Result<Self, CliError> {
        Ok(HomReport {
            dim_g: dto.dim_g,
            dim_gr: dto.dim_gr,
            dim_hom0: dto.dim_hom0,
            dim_v: dto.dim_v,
            dim_re: dto.dim_re,
            codim: dto.codim,
            indep_eqs: dto.indep_eqs,
            lci: dto.lci,
            point_ranks: dto.point_ranks,
            equations: dto.equations,
            variables: dto.variables,
            gr_estimate: DimEstimate::from_dto(dto.gr_estimate)?,
            re_estimate: DimEstimate::from_dto(dto.re_estimate)?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationDto {
    SizeBound { j1: usize, j2: usize, p: usize, q: usize, value: usize },
    FactorBound { j1: usize, j2: usize, cut: usize, p: usize, q: usize, value: usize, bound: usize },
    PivotSandwich { j1: usize, j2: usize, p: usize, q: usize, value: usize, base: i64 },
}

pub fn violations(report: &InequalityReport) -> Vec<ViolationDto> {
    report
        .violations
        .iter()
        .map(|v| match *v {
            Violation::SizeBound { j1, j2, p, q, value } => ViolationDto::SizeBound { j1, j2, p, q, value },
            Violation::FactorBound { j1, j2, cut, p, q, value, bound } => {
                ViolationDto::FactorBound { j1, j2, cut, p, q, value, bound }
            }
            Violation::PivotSandwich { j1, j2, p, q, value, base } => {
                ViolationDto::PivotSandwich { j1, j2, p, q, value, base }
            }
        })
        .collect()
}
