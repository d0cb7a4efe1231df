//! The JSON plan container. Levels are strings: decimal labels or `inf`.

use std::collections::BTreeMap;

use potb_core::arrays::OrthArray;
use potb_core::constructions::{Params, RecipeId};
use potb_core::plan::{Factor, Level, LevelKind, Plan};
use potb_core::verify::Claim;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub version: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
    #[serde(default)]
    pub factors: Vec<FactorDocument>,
    #[serde(default)]
    pub blocks: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub claims: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub array: Option<ArrayDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub id: String,
    pub params: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDocument {
    pub name: String,
    pub levels: Vec<String>,
    pub kind: String,
}

/// An orthogonal array: runs are rows over `0..symbols`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayDocument {
    pub symbols: u32,
    pub augmented: bool,
    pub rows: Vec<Vec<u32>>,
}

impl PlanDocument {
    pub fn from_plan(plan: &Plan, construction: Option<(RecipeId, &Params)>, claims: &[Claim]) -> Self {
        let factors = plan
            .factors()
            .iter()
            .map(|f| FactorDocument {
                name: f.name.clone(),
                levels: f.levels().iter().map(ToString::to_string).collect(),
                kind: f.kind().name().to_string(),
            })
            .collect();
        let blocks = plan
            .blocks()
            .iter()
            .map(|b| b.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect())
            .collect();
        Self {
            version: VERSION.into(),
            name: plan.provenance().to_string(),
            construction: construction.map(|(id, params)| Construction {
                id: id.to_string(),
                params: params.iter().map(|(k, v)| (k.to_string(), v)).collect(),
            }),
            factors,
            blocks,
            claims: claims.iter().map(ToString::to_string).collect(),
            array: None,
        }
    }

    pub fn from_array(name: impl Into<String>, oa: &OrthArray) -> Self {
        Self {
            version: VERSION.into(),
            name: name.into(),
            construction: None,
            factors: Vec::new(),
            blocks: Vec::new(),
            claims: Vec::new(),
            array: Some(ArrayDocument { symbols: oa.symbols(), augmented: oa.is_augmented(), rows: oa.rows().to_vec() }),
        }
    }

    fn check_version(&self) -> Result<(), CliError> {
        if self.version != VERSION {
            return Err(CliError::parse(format!("unsupported document version {:?}", self.version)));
        }
        Ok(())
    }

    pub fn to_plan(&self) -> Result<Plan, CliError> {
        self.check_version()?;
        let factors = self.factors.iter().map(parse_factor).collect::<Result<Vec<_>, _>>()?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|r| r.iter().map(|x| Level::parse(x)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::parse)?;
        let plan = Plan::new(factors, blocks).map_err(CliError::parse)?;
        Ok(plan.with_provenance(self.name.clone()))
    }

    pub fn parsed_claims(&self) -> Result<Vec<Claim>, CliError> {
        self.claims.iter().map(|c| c.parse::<Claim>().map_err(CliError::parse)).collect()
    }

    pub fn to_array(&self) -> Result<OrthArray, CliError> {
        self.check_version()?;
        let a = self.array.as_ref().ok_or_else(|| CliError::parse("document has no array"))?;
        OrthArray::new(a.rows.clone(), a.symbols, a.augmented).map_err(CliError::parse)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plan documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("invalid plan document: {e}")))
    }
}

fn parse_factor(f: &FactorDocument) -> Result<Factor, CliError> {
    let levels = f.levels.iter().map(|x| Level::parse(x)).collect::<Result<Vec<_>, _>>().map_err(CliError::parse)?;
    let finite = levels.iter().filter(|l| l.finite().is_some()).count() as u32;
    let kind = match f.kind.as_str() {
        "cyclic" => LevelKind::Cyclic(finite),
        "field" => LevelKind::Field(finite),
        "labels" => LevelKind::Labels,
        other => return Err(CliError::parse(format!("factor {}: unknown kind {other:?}", f.name))),
    };
    Factor::with_kind(f.name.clone(), kind, levels).map_err(CliError::parse)
}
