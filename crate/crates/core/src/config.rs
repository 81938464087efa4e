//! Run configuration documents (JSON) and the generators they name.

use serde::{Deserialize, Serialize};

use crate::champernowne::{classical_champernowne, mult_champernowne, net_normal, DoublingScheme};
use crate::error::{Error, Result};
use crate::folner::{DirectionSchedule, FolnerSpec, NiceSource};
use crate::liouville::{additive_liouville_normal, interval_folner_refine, mult_liouville_normal};
use crate::sampler::{bernoulli_seq, DEFAULT_SEED};
use crate::seq::BitSeq;
use crate::structure::{Pattern, SearchBounds};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub generator: Option<GeneratorConfig>,
    #[serde(default)]
    pub folner: Option<FolnerSpec>,
    #[serde(default)]
    pub analysis: Option<AnalysisConfig>,
    #[serde(default)]
    pub search: Option<SearchConfig>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("config: {e}")))?;
        // serde lets extra keys through on unit variants of tagged enums
        if let Some(f) = value.get("folner").and_then(|f| f.as_object()) {
            if f.get("kind").and_then(|k| k.as_str()) == Some("classical") && f.len() > 1 {
                return Err(Error::Format("config: the classical recipe takes no parameters".into()));
            }
        }
        serde_json::from_value(value).map_err(|e| Error::Format(format!("config: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    ClassicalChampernowne,
    MultChampernowne,
    NetNormal,
    Bernoulli,
    AdditiveLiouville,
    MultLiouville,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub kind: GeneratorKind,
    pub bits: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub directions: Option<DirectionSchedule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Indices n of F_n to report.
    pub ns: Vec<u64>,
    /// Shift sets K; every block over each K is reported.
    pub shifts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetSource {
    /// {1, ..., N}.
    All,
    /// The support of the input sequence.
    Support,
    /// The thick set avoiding the linear pattern's equation.
    ThickCounterexample,
    /// The box set without ab = c^3, built on the default leading list.
    Ex9,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub pattern: Pattern,
    pub set: SetSource,
    /// Horizon N of the searched set.
    pub horizon: u64,
    #[serde(default)]
    pub bounds: SearchBounds,
}

/// Index horizon used to refine the classical sequence for the additive
/// Liouville construction.
pub const REFINE_HORIZON: u64 = 1 << 20;

/// Leading parameters 2, 4, 12, 36, 108, 324, then 324·5^j for j ≤ 16: a
/// nice recipe whose zone schedule is known through four zones.
pub fn default_zone_spec() -> FolnerSpec {
    let mut l = vec![2u64, 4, 12, 36, 108, 324];
    for _ in 0..16 {
        l.push(l.last().unwrap() * 5);
    }
    FolnerSpec::NiceBoxes { source: NiceSource::Leading(l) }
}

/// L_1 = 6, L_2 = 6^5·5.
pub const EX9_LEADING: [u64; 2] = [6, 7776 * 5];

fn scheme(d: &Option<DirectionSchedule>) -> Result<DoublingScheme> {
    DoublingScheme::new(d.clone().unwrap_or(DirectionSchedule::Staircase))
}

/// Produces the sequence a generator section describes. `zone_spec`
/// overrides the nice recipe for the multiplicative Liouville generator.
pub fn generate(g: &GeneratorConfig, zone_spec: Option<&FolnerSpec>) -> Result<BitSeq> {
    let seed = g.seed.unwrap_or(DEFAULT_SEED);
    let x = match g.kind {
        GeneratorKind::ClassicalChampernowne => classical_champernowne(g.bits)?,
        GeneratorKind::MultChampernowne => mult_champernowne(&scheme(&g.directions)?, g.bits)?,
        GeneratorKind::NetNormal => net_normal(&scheme(&g.directions)?, g.bits)?,
        GeneratorKind::Bernoulli => bernoulli_seq(seed, g.bits)?,
        GeneratorKind::AdditiveLiouville => {
            let refined = interval_folner_refine(&FolnerSpec::Classical, REFINE_HORIZON)?;
            let source = classical_champernowne(256)?;
            additive_liouville_normal(&refined.spec, REFINE_HORIZON, &source, g.bits)?.x
        }
        GeneratorKind::MultLiouville => {
            let spec = zone_spec.cloned().unwrap_or_else(default_zone_spec);
            let base = bernoulli_seq(seed, g.bits)?;
            mult_liouville_normal(&spec, &base, g.bits)?.x
        }
    };
    Ok(x)
}
