//! Case studies with explicit flags, the flag verifier, and fixtures for
//! custom hypersurfaces.

pub mod elliptic;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::linalg::rank;
use crate::exactmath::resultant::no_common_projective_zero;
use crate::exactmath::{format_rat, int, parse_rat, HomogPoly, LocalChart, Rat, Reducer};
use crate::valuation::{ord_at_point_on_curve, restricted_final_data, Flag, FlagValuator, Section};

pub use elliptic::{lemma_sweep, single_point_member, EcPoint, EllipticCurveFp, SweepReport};

/// Names accepted by [`make_case`].
pub const CASE_NAMES: [&str; 4] = ["p2", "p3", "quadric_surface", "fermat_cubic"];

/// A flagged projective variety with the data `D = cH`, `d = H^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseStudy {
    pub name: String,
    pub var_names: Vec<String>,
    pub flag: Flag,
    pub n: usize,
    /// Index, stored as metadata only.
    pub r: u32,
    pub c: u64,
    pub d: u64,
}

impl CaseStudy {
    pub fn ambient_vars(&self) -> usize {
        self.flag.ambient_vars()
    }

    pub fn relation(&self) -> Option<&HomogPoly> {
        self.flag.relation()
    }

    pub fn with_c(mut self, c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidArgument("c must be at least 1".into()));
        }
        self.c = c;
        Ok(self)
    }

    /// Division by the relation eliminating the last variable; since the
    /// ideal is principal this works for any relation.
    pub fn reducer(&self) -> Option<Reducer> {
        self.relation().map(|f| Reducer::new(f.clone(), self.ambient_vars() - 1).expect("nonzero relation"))
    }

    /// Canonical representative of a section modulo the relation.
    pub fn reduce(&self, s: &Section) -> Section {
        match self.reducer() {
            Some(r) => r.reduce(s),
            None => s.clone(),
        }
    }

    pub fn valuator(&self) -> Result<FlagValuator> {
        FlagValuator::new(&self.flag)
    }

    pub fn names(&self) -> Vec<&str> {
        self.var_names.iter().map(String::as_str).collect()
    }

    pub fn parse_section(&self, text: &str) -> Result<Section> {
        HomogPoly::parse(text, &self.names())
    }

    pub fn display(&self, s: &Section) -> String {
        s.display_with(&self.names())
    }
}

fn coordinate_names(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("x{i}")).collect()
}

fn projective_space(n: usize, c: u64) -> Result<CaseStudy> {
    let vars = n + 1;
    let mut point = vec![int(0); vars];
    point[0] = int(1);
    let flag = Flag::new(
        vars,
        None,
        (1..n).map(|i| HomogPoly::var(vars, i)).collect(),
        HomogPoly::var(vars, n),
        point,
        LocalChart { chart: 0, parameter: n },
    )?;
    Ok(CaseStudy { name: format!("p{n}"), var_names: coordinate_names(vars), flag, n, r: n as u32 + 1, c, d: 1 })
}

const XYZW: [&str; 4] = ["x", "y", "z", "w"];

fn surface_case(name: &str, relation: &str, step: &str, final_form: &str, point: [i64; 4], r: u32, d: u64) -> Result<CaseStudy> {
    let parse = |s: &str| HomogPoly::parse(s, &XYZW);
    let flag = Flag::new(
        4,
        Some(parse(relation)?),
        vec![parse(step)?],
        parse(final_form)?,
        point.iter().map(|&v| int(v)).collect(),
        LocalChart { chart: 0, parameter: if name.starts_with("quadric") { 1 } else { 2 } },
    )?;
    Ok(CaseStudy { name: name.into(), var_names: XYZW.iter().map(|s| s.to_string()).collect(), flag, n: 2, r, c: 1, d })
}

/// Builds one of the shipped case studies.
pub fn make_case(name: &str, c: u64) -> Result<CaseStudy> {
    if c == 0 {
        return Err(Error::InvalidArgument("c must be at least 1".into()));
    }
    match name {
        "p2" => projective_space(2, c),
        "p3" => projective_space(3, c),
        // plane y = z cuts the conic xw = y^2; w = 0 is tangent to it at (1:0:0:0)
        "quadric_surface" => surface_case(name, "x*w - y*z", "y - z", "w", [1, 0, 0, 0], 2, 2)?.with_c(c),
        // w = 0 cuts a smooth plane cubic with a flex at (1:-1:0) and flex tangent x + y
        "fermat_cubic" => surface_case(name, "x^3 + y^3 + z^3 + w^3", "w", "x + y", [1, -1, 0, 0], 1, 3)?.with_c(c),
        _ => Err(Error::UnknownCase(name.into())),
    }
}

/// The quadric flag with a plane through the point that is not tangent to
/// the conic; its final order is 1 instead of 2.
pub fn negative_control() -> CaseStudy {
    surface_case("quadric_nontangent", "x*w - y*z", "y - z", "y", [1, 0, 0, 0], 2, 2).expect("valid fixture")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagReport {
    pub case: String,
    pub checks: Vec<FlagCheck>,
    /// Order of the final form at the point of the final curve, when defined.
    pub final_order: Option<u32>,
    pub expected_order: u64,
}

impl FlagReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> FlagCheck {
    FlagCheck { name: name.into(), passed, detail: detail.into() }
}

/// Checks the flag conditions exactly: independent flag forms, the point on
/// every member, proper hypersurface sections, a smooth final curve, and the
/// single-point condition `ord = d`.
pub fn verify_flag(cs: &CaseStudy) -> FlagReport {
    let flag = &cs.flag;
    let mut checks = Vec::new();
    let point = flag.point();
    let show_point = point.iter().map(format_rat).collect::<Vec<_>>().join(":");

    let forms: Vec<&HomogPoly> = flag.steps().iter().chain(std::iter::once(flag.final_form())).collect();
    let rows: Vec<Vec<Rat>> = forms
        .iter()
        .map(|h| {
            (0..flag.ambient_vars())
                .map(|i| {
                    let mut e = vec![0; flag.ambient_vars()];
                    e[i] = 1;
                    h.coeff(&e)
                })
                .collect()
        })
        .collect();
    let rk = rank(&rows).unwrap_or(0);
    checks.push(check("linear forms independent", rk == forms.len(), format!("rank {rk} of {}", forms.len())));

    let on_relation = flag.relation().is_none_or(|f| f.eval(point).is_zero());
    checks.push(check("point on variety", on_relation, format!("({show_point})")));
    let off: Vec<String> = forms
        .iter()
        .enumerate()
        .filter(|(_, h)| !h.eval(point).is_zero())
        .map(|(i, _)| format!("H{}", i + 1))
        .collect();
    checks.push(check(
        "point on flag forms",
        off.is_empty(),
        if off.is_empty() { "all vanish".to_string() } else { format!("nonzero: {}", off.join(", ")) },
    ));

    let mut final_order = None;
    match restricted_final_data(flag) {
        Err(e) => checks.push(check("proper sections", false, e.to_string())),
        Ok((curve, g, p, chart)) => {
            checks.push(check("proper sections", true, "each member is a hypersurface section of the previous"));
            let smooth = match &curve {
                None => true,
                Some(c) => no_common_projective_zero(&(0..3).map(|i| c.partial(i)).collect::<Vec<_>>()),
            };
            let what = match &curve {
                None => "final member is a line".to_string(),
                Some(c) => format!("partials of a degree {} plane curve have no common zero", c.degree()),
            };
            checks.push(check("final curve smooth", smooth, if smooth { what } else { "gradient has a common zero".into() }));
            let placed = on_relation && off.is_empty();
            let order = if placed && smooth { ord_at_point_on_curve(&g, curve.as_ref(), &p, chart) } else { Err(Error::NotOnCurve) };
            match order {
                Ok(k) => {
                    final_order = Some(k);
                    checks.push(check("single point", u64::from(k) == cs.d, format!("ord = {k}, d = {}", cs.d)));
                }
                Err(e) => checks.push(check("single point", false, format!("order undefined: {e}"))),
            }
        }
    }
    FlagReport { case: cs.name.clone(), checks, final_order, expected_order: cs.d }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RatField {
    Int(i64),
    Text(String),
}

impl RatField {
    fn value(&self) -> Result<Rat> {
        match self {
            RatField::Int(v) => Ok(int(*v)),
            RatField::Text(s) => parse_rat(s),
        }
    }
}

/// JSON description of a custom hypersurface case study.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub name: String,
    pub vars: Vec<String>,
    #[serde(default)]
    pub relation: Option<String>,
    pub steps: Vec<String>,
    pub final_form: String,
    point: Vec<RatField>,
    pub chart: String,
    pub parameter: String,
    #[serde(default)]
    pub r: u32,
    #[serde(default = "one")]
    pub c: u64,
    pub d: u64,
}

fn one() -> u64 {
    1
}

impl Fixture {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn into_case(self) -> Result<CaseStudy> {
        let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let parse = |s: &str| HomogPoly::parse(s, &names);
        let index = |v: &str| {
            names.iter().position(|n| *n == v).ok_or_else(|| Error::Parse(format!("unknown variable `{v}`")))
        };
        let relation = self.relation.as_deref().map(parse).transpose()?;
        let steps = self.steps.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
        let point = self.point.iter().map(RatField::value).collect::<Result<Vec<_>>>()?;
        let chart = LocalChart { chart: index(&self.chart)?, parameter: index(&self.parameter)? };
        let flag = Flag::new(names.len(), relation, steps, parse(&self.final_form)?, point, chart)?;
        if self.c == 0 || self.d == 0 {
            return Err(Error::InvalidArgument("c and d must be at least 1".into()));
        }
        Ok(CaseStudy { name: self.name, n: flag.dimension(), var_names: self.vars, flag, r: self.r, c: self.c, d: self.d })
    }
}

/// Reads a case study from fixture JSON text.
pub fn case_from_fixture(text: &str) -> Result<CaseStudy> {
    Fixture::parse(text)?.into_case()
}
