use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::ols_fit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldGroup {
    HigherDirect,
    HigherPotential,
    Others,
}

impl FieldGroup {
    pub fn name(self) -> &'static str {
        match self {
            FieldGroup::HigherDirect => "higher_direct",
            FieldGroup::HigherPotential => "higher_potential",
            FieldGroup::Others => "others",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Momentum {
    Upshift,
    Downshift,
    None,
}

impl Momentum {
    pub fn name(self) -> &'static str {
        match self {
            Momentum::Upshift => "upshift",
            Momentum::Downshift => "downshift",
            Momentum::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupRow {
    pub field: String,
    pub direct: f64,
    pub potential: f64,
    pub predicted: f64,
    pub residual: f64,
    pub group: FieldGroup,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldGrouping {
    pub year: i32,
    pub slope: f64,
    pub intercept: f64,
    pub rows: Vec<GroupRow>,
}

impl FieldGrouping {
    pub fn group_of(&self, field: &str) -> Option<FieldGroup> {
        self.rows.iter().find(|r| r.field == field).map(|r| r.group)
    }
}

/// Regresses direct on potential scores over the fields having both, then
/// labels the ⌊q·n⌋ largest residuals `higher_direct` and the ⌊q·n⌋ smallest
/// `higher_potential`. Residuals within 1e-9 of the score scale are treated as
/// zero so collinear inputs tie exactly; ties go by field id.
pub fn field_grouping(
    direct: &BTreeMap<String, Option<f64>>,
    potential: &BTreeMap<String, Option<f64>>,
    year: i32,
    q: f64,
) -> Result<FieldGrouping> {
    if !(0.0..=0.5).contains(&q) {
        return Err(Error::Config(format!("grouping quantile {q} outside [0, 0.5]")));
    }
    let both: Vec<(&String, f64, f64)> = direct
        .iter()
        .filter_map(|(f, d)| Some((f, (*d)?, potential.get(f).copied().flatten()?)))
        .collect();
    if both.len() < 3 {
        return Err(Error::Undefined(format!(
            "grouping in {year} needs at least 3 fields with both scores, found {}",
            both.len()
        )));
    }
    let xs: Vec<f64> = both.iter().map(|b| b.2).collect();
    let ys: Vec<f64> = both.iter().map(|b| b.1).collect();
    let fit = ols_fit(&xs, &ys).map_err(|e| Error::Undefined(format!("grouping in {year}: {e}")))?;
    let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let mut rows: Vec<GroupRow> = both
        .iter()
        .map(|(f, d, p)| {
            let predicted = fit.predict(*p);
            let mut residual = d - predicted;
            if residual.abs() <= 1e-9 * scale {
                residual = 0.0;
            }
            GroupRow {
                field: (*f).clone(),
                direct: *d,
                potential: *p,
                predicted,
                residual,
                group: FieldGroup::Others,
            }
        })
        .collect();
    let n = rows.len();
    let k = ((q * n as f64 + 1e-9).floor() as usize).min(n / 2);
    rows.sort_by(|a, b| b.residual.total_cmp(&a.residual).then_with(|| a.field.cmp(&b.field)));
    for r in rows.iter_mut().take(k) {
        r.group = FieldGroup::HigherDirect;
    }
    for r in rows.iter_mut().skip(n - k) {
        r.group = FieldGroup::HigherPotential;
    }
    rows.sort_by(|a, b| a.field.cmp(&b.field));
    Ok(FieldGrouping {
        year,
        slope: fit.slope,
        intercept: fit.intercept,
        rows,
    })
}

pub fn momentum(from: FieldGroup, to: FieldGroup) -> Momentum {
    match (from, to) {
        (FieldGroup::HigherPotential, FieldGroup::HigherDirect) => Momentum::Upshift,
        (FieldGroup::HigherDirect, FieldGroup::HigherPotential) => Momentum::Downshift,
        _ => Momentum::None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumRow {
    pub field: String,
    pub from: FieldGroup,
    pub to: FieldGroup,
    pub momentum: Momentum,
}

/// Momentum of every field grouped in both years.
pub fn momentum_between(a: &FieldGrouping, b: &FieldGrouping) -> Vec<MomentumRow> {
    a.rows
        .iter()
        .filter_map(|r| {
            let to = b.group_of(&r.field)?;
            Some(MomentumRow {
                field: r.field.clone(),
                from: r.group,
                to,
                momentum: momentum(r.group, to),
            })
        })
        .collect()
}
