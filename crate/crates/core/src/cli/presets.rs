//! Sweep presets. Each preset is a grid description; the sweep driver
//! expands it into experiment specs without any preset-specific logic.

use crate::harness::{Algorithm, BudgetPreset, InitKind};
use crate::problems::Shape;

/// How trap parameters are chosen for a grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TrapFamily {
    Standard,
    /// Generalized trap with `a = 1`, `b = k`.
    UnitLocalOptimum,
    Fixed {
        shape: Shape,
        a: f64,
        b: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZRule {
    /// Ignored by the standard family.
    None,
    Fixed(&'static [usize]),
    /// Every `z` in `1..k`.
    AllBelowK,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BudgetRule {
    Preset(BudgetPreset),
    /// Multiple of the bound attached to the grid point's summary.
    BoundMultiple(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub families: &'static [TrapFamily],
    pub algorithms: &'static [Algorithm],
    pub ks: &'static [usize],
    pub ms: &'static [usize],
    pub zs: ZRule,
    pub cs: &'static [f64],
    /// Initialization for population algorithms; the EA always starts uniform.
    pub init: InitKind,
    pub budget: BudgetRule,
    pub replications: usize,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig3",
        description: "worst-case GOMEA hitting time vs the c m^3 2^k bound, k = 4..7",
        families: &[TrapFamily::Standard],
        algorithms: &[Algorithm::Gomea, Algorithm::GomeaMut],
        ks: &[4, 5, 6, 7],
        ms: &[2, 4, 6, 8, 10, 12, 14, 16],
        zs: ZRule::None,
        cs: &[1.0],
        init: InitKind::WorstStandard,
        budget: BudgetRule::BoundMultiple(10.0),
        replications: 100,
    },
    Preset {
        name: "fig3e",
        description: "(1+1) EA vs worst-case GOMEA at k = 4",
        families: &[TrapFamily::Standard],
        algorithms: &[Algorithm::Ea, Algorithm::Gomea],
        ks: &[4],
        ms: &[2, 3, 4, 5],
        zs: ZRule::None,
        cs: &[1.0],
        init: InitKind::WorstStandard,
        budget: BudgetRule::BoundMultiple(10.0),
        replications: 100,
    },
    Preset {
        name: "fig4",
        description: "success rate vs c at k = 4, m = 6 for GOMEA, GOMEA with local mutation and the crowding GA",
        families: &[TrapFamily::Standard],
        algorithms: &[Algorithm::Gomea, Algorithm::GomeaMut, Algorithm::Ga],
        ks: &[4],
        ms: &[6],
        zs: ZRule::None,
        cs: &[0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0],
        init: InitKind::Uniform,
        budget: BudgetRule::Preset(BudgetPreset::S42),
        replications: 1000,
    },
    Preset {
        name: "fig6",
        description: "worst-case GOMEA with local mutation on generalized traps (a = 1, b = k) vs full and dominant level-climbing bounds",
        families: &[TrapFamily::UnitLocalOptimum],
        algorithms: &[Algorithm::GomeaMut],
        ks: &[4, 5, 6, 7],
        ms: &[4, 8, 12, 16],
        zs: ZRule::AllBelowK,
        cs: &[1.0],
        init: InitKind::WorstGeneralized,
        budget: BudgetRule::BoundMultiple(10.0),
        replications: 100,
    },
    Preset {
        name: "fig7",
        description: "generalized (a = 1) vs tailed (a = 5) trap at m = 8, k = 6, z = 4: success rate vs c",
        families: &[
            TrapFamily::Fixed {
                shape: Shape::Generalized,
                a: 1.0,
                b: 6.0,
            },
            TrapFamily::Fixed {
                shape: Shape::Tailed,
                a: 5.0,
                b: 6.0,
            },
        ],
        algorithms: &[Algorithm::GomeaMut, Algorithm::Ga],
        ks: &[6],
        ms: &[8],
        zs: ZRule::Fixed(&[4]),
        cs: &[0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
        init: InitKind::Uniform,
        budget: BudgetRule::Preset(BudgetPreset::S632),
        replications: 1000,
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
