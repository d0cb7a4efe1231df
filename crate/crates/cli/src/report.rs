//! The JSON verification report. Every count is an integer and field
//! order is fixed by the struct declarations.

use potb_core::golden::ErrataReport;
use potb_core::plan::Plan;
use potb_core::verify::{BlockDesignClass, VerificationReport};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub plan: String,
    pub blocks: usize,
    pub block_size: usize,
    pub runs: usize,
    pub factor_names: Vec<String>,
    pub otb: OtbSummary,
    pub classes: Vec<Vec<usize>>,
    pub factors: Vec<FactorEntry>,
    pub connectivity: ConnectivityEntry,
    pub saturation: SaturationEntry,
    pub pergola: Vec<PergolaItem>,
    pub claims: Vec<ClaimEntry>,
    pub all_claims_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errata: Option<ErrataEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OtbSummary {
    pub potb: bool,
    /// Row `i`, character `j`: `1` when pair `(i, j)` is OTB. The diagonal is `1`.
    pub matrix: Vec<String>,
    pub failing_pairs: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorEntry {
    pub name: String,
    pub declared_levels: usize,
    pub present_levels: usize,
    pub design: DesignEntry,
    pub incidence_rank: usize,
    pub confounded_with_blocks: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DesignEntry {
    Bibd { v: usize, b: usize, r: i64, k: i64, lambda: i64 },
    /// Groups list level labels.
    Gdd { groups: Vec<Vec<String>>, r: i64, k: i64, lambda1: i64, lambda2: i64 },
    Equireplicate { r: i64 },
    Other,
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectivityEntry {
    pub connected: bool,
    pub ranks: Vec<usize>,
    pub required: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaturationEntry {
    pub saturated: bool,
    pub within_block_df: usize,
    pub treatment_df: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PergolaItem {
    pub i: usize,
    pub j: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimEntry {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

/// Whether the document's recorded construction rebuilds the same plan up
/// to block and run order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionCheck {
    pub id: String,
    pub reproduces: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrataEntry {
    pub clean: bool,
    pub canonical_match: bool,
    pub shape: Vec<String>,
    pub cells: Vec<CellEntry>,
    pub layout: Vec<String>,
}

/// 1-based positions in the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellEntry {
    pub block: usize,
    pub run: usize,
    pub factor: String,
    pub table: String,
    pub generated: String,
}

impl From<&ErrataReport> for ErrataEntry {
    fn from(e: &ErrataReport) -> Self {
        Self {
            clean: e.is_clean(),
            canonical_match: e.canonical_match,
            shape: e.shape.clone(),
            cells: e
                .cells
                .iter()
                .map(|c| CellEntry {
                    block: c.block + 1,
                    run: c.run + 1,
                    factor: c.factor.clone(),
                    table: c.table.to_string(),
                    generated: c.generated.to_string(),
                })
                .collect(),
            layout: e.layout.iter().map(ToString::to_string).collect(),
        }
    }
}

impl ReportDocument {
    pub fn new(plan: &Plan, r: &VerificationReport) -> Self {
        let m = plan.num_factors();
        let mut matrix = vec![vec![true; m]; m];
        for s in &r.otb {
            matrix[s.i][s.j] = s.holds;
            matrix[s.j][s.i] = s.holds;
        }
        let factors = r
            .factors
            .iter()
            .zip(plan.factors())
            .map(|(f, decl)| FactorEntry {
                name: f.name.clone(),
                declared_levels: f.declared_levels,
                present_levels: f.present_levels,
                design: match &f.design {
                    Ok(BlockDesignClass::Bibd { v, b, r, k, lambda }) => {
                        DesignEntry::Bibd { v: *v, b: *b, r: *r, k: *k, lambda: *lambda }
                    }
                    Ok(BlockDesignClass::Gdd { groups, r, k, lambda1, lambda2 }) => DesignEntry::Gdd {
                        groups: groups
                            .iter()
                            .map(|g| g.iter().map(|&x| decl.levels()[x].to_string()).collect())
                            .collect(),
                        r: *r,
                        k: *k,
                        lambda1: *lambda1,
                        lambda2: *lambda2,
                    },
                    Ok(BlockDesignClass::EquireplicateOther { r }) => DesignEntry::Equireplicate { r: *r },
                    Ok(BlockDesignClass::Other) => DesignEntry::Other,
                    Err(e) => DesignEntry::Error { message: e.to_string() },
                },
                incidence_rank: f.incidence_rank,
                confounded_with_blocks: f.confounded_with_blocks,
            })
            .collect();
        let connectivity = match &r.connectivity {
            Ok(c) => ConnectivityEntry { connected: c.connected, ranks: c.ranks.clone(), required: c.required.clone(), error: None },
            Err(e) => ConnectivityEntry { connected: false, ranks: Vec::new(), required: Vec::new(), error: Some(e.to_string()) },
        };
        Self {
            plan: plan.provenance().to_string(),
            blocks: r.blocks,
            block_size: r.block_size,
            runs: r.runs,
            factor_names: plan.factors().iter().map(|f| f.name.clone()).collect(),
            otb: OtbSummary {
                potb: r.is_potb(),
                matrix: matrix.iter().map(|row| row.iter().map(|&x| if x { '1' } else { '0' }).collect()).collect(),
                failing_pairs: r.failing_pairs().into_iter().map(|(i, j)| [i, j]).collect(),
            },
            classes: r.classes.clone(),
            factors,
            connectivity,
            saturation: SaturationEntry {
                saturated: r.saturation.saturated,
                within_block_df: r.saturation.within_block_df,
                treatment_df: r.saturation.treatment_df,
            },
            pergola: r
                .pergola
                .iter()
                .map(|p| PergolaItem { i: p.i, j: p.j, holds: p.fg.is_some(), f: p.fg.map(|x| x.0), g: p.fg.map(|x| x.1) })
                .collect(),
            claims: r
                .claims
                .iter()
                .map(|c| ClaimEntry { claim: c.claim.to_string(), passed: c.passed, detail: c.detail.clone() })
                .collect(),
            all_claims_pass: r.all_claims_pass(),
            construction: None,
            errata: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
