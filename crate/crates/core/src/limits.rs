//! Size thresholds for the exponential and table-backed computations.
//!
//! Every limit has a default and can be overridden through an environment
//! variable holding a non-negative integer. Values are read once per process.

use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    /// Largest carrier stored as an explicit n³ median table.
    TableMax,
    /// Largest carrier of any algebra, table or rule.
    CarrierMax,
    /// Largest carrier for an exhaustive (n⁵) distributivity scan.
    AxiomExhaustiveMax,
    /// Largest carrier for brute-force halfspace enumeration.
    BruteHalfspaceMax,
    /// Largest cube dimension tried by the embedding search.
    EmbedMaxK,
    /// Largest carrier for the embedding search.
    EmbedMaxN,
    /// Largest subfamily tested for set independence.
    SetIndependenceMaxK,
    /// Largest subfamily tested for function independence.
    FunctionIndependenceMaxK,
    /// Largest ground set for exhaustive VC-dimension.
    VcGroundMax,
    /// Largest carrier for exhaustive subalgebra enumeration.
    SubalgebraEnumMax,
    /// Largest halfspace family for exhaustive chain search.
    ChainFamilyMax,
    /// Largest carrier for automorphism search without generator hints.
    AutomorphismMax,
    /// Largest group stored as an explicit element list.
    GroupListMax,
}

impl Limit {
    pub const ALL: [Limit; 13] = [
        Limit::TableMax,
        Limit::CarrierMax,
        Limit::AxiomExhaustiveMax,
        Limit::BruteHalfspaceMax,
        Limit::EmbedMaxK,
        Limit::EmbedMaxN,
        Limit::SetIndependenceMaxK,
        Limit::FunctionIndependenceMaxK,
        Limit::VcGroundMax,
        Limit::SubalgebraEnumMax,
        Limit::ChainFamilyMax,
        Limit::AutomorphismMax,
        Limit::GroupListMax,
    ];

    pub fn default_value(self) -> usize {
        match self {
            Limit::TableMax => 64,
            Limit::CarrierMax => 4096,
            Limit::AxiomExhaustiveMax => 40,
            Limit::BruteHalfspaceMax => 20,
            Limit::EmbedMaxK => 5,
            Limit::EmbedMaxN => 64,
            Limit::SetIndependenceMaxK => 24,
            Limit::FunctionIndependenceMaxK => 20,
            Limit::VcGroundMax => 24,
            Limit::SubalgebraEnumMax => 16,
            Limit::ChainFamilyMax => 64,
            Limit::AutomorphismMax => 12,
            Limit::GroupListMax => 10_000,
        }
    }

    pub fn env_var(self) -> &'static str {
        match self {
            Limit::TableMax => "MEDALG_TABLE_MAX",
            Limit::CarrierMax => "MEDALG_CARRIER_MAX",
            Limit::AxiomExhaustiveMax => "MEDALG_AXIOM_EXHAUSTIVE_MAX",
            Limit::BruteHalfspaceMax => "MEDALG_BRUTE_HALFSPACE_MAX",
            Limit::EmbedMaxK => "MEDALG_EMBED_MAX_K",
            Limit::EmbedMaxN => "MEDALG_EMBED_MAX_N",
            Limit::SetIndependenceMaxK => "MEDALG_SET_IND_MAX_K",
            Limit::FunctionIndependenceMaxK => "MEDALG_FUNC_IND_MAX_K",
            Limit::VcGroundMax => "MEDALG_VC_GROUND_MAX",
            Limit::SubalgebraEnumMax => "MEDALG_SUBALGEBRA_ENUM_MAX",
            Limit::ChainFamilyMax => "MEDALG_CHAIN_FAMILY_MAX",
            Limit::AutomorphismMax => "MEDALG_AUT_MAX",
            Limit::GroupListMax => "MEDALG_GROUP_LIST_MAX",
        }
    }

    pub fn what(self) -> &'static str {
        match self {
            Limit::TableMax => "median table carrier size",
            Limit::CarrierMax => "carrier size",
            Limit::AxiomExhaustiveMax => "exhaustive axiom scan carrier size",
            Limit::BruteHalfspaceMax => "brute-force halfspace carrier size",
            Limit::EmbedMaxK => "embedding cube dimension",
            Limit::EmbedMaxN => "embedding search carrier size",
            Limit::SetIndependenceMaxK => "set subfamily size",
            Limit::FunctionIndependenceMaxK => "function subfamily size",
            Limit::VcGroundMax => "VC ground set size",
            Limit::SubalgebraEnumMax => "subalgebra enumeration carrier size",
            Limit::ChainFamilyMax => "halfspace family size",
            Limit::AutomorphismMax => "automorphism search carrier size",
            Limit::GroupListMax => "group order",
        }
    }

    /// Current value: the environment override if set and parseable, else the default.
    pub fn value(self) -> usize {
        static VALUES: OnceLock<Vec<usize>> = OnceLock::new();
        let values = VALUES.get_or_init(|| {
            Limit::ALL
                .iter()
                .map(|l| {
                    std::env::var(l.env_var())
                        .ok()
                        .and_then(|v| v.trim().parse().ok())
                        .unwrap_or_else(|| l.default_value())
                })
                .collect()
        });
        values[self as usize]
    }

    /// `Ok` if `actual` is within the limit, a refusal otherwise.
    pub fn check(self, actual: usize) -> Result<()> {
        let limit = self.value();
        if actual > limit {
            Err(Error::Refused {
                what: self.what(),
                actual,
                limit,
                env: self.env_var(),
            })
        } else {
            Ok(())
        }
    }
}
