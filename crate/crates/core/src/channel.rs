//! Finite-temperature amplitude damping on a V-configuration qutrit.
//!
//! Levels: ground `|0>`, excited `|1>` and `|2>`. With weight `r` the qutrit
//! loses its excitation (`|1>, |2> -> |0>` with probabilities `p1`, `p2`);
//! with weight `1 - r` it absorbs one (`|0> -> |1>, |2>`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix, DensityMatrix, C64, QUTRIT};

/// Slack allowed on `p1 + p2 <= 1` for the as-written operators, so that
/// `p = 1 - exp(-2t)` evaluated at exactly `t = ln 2 / 2` is still accepted.
pub const AS_WRITTEN_SLACK: f64 = 1e-12;

/// Which form of the six Kraus operators to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelVariant {
    /// Operators exactly as published. The absorption branch keeps
    /// `sqrt(1 - p1 - p2)` on `|0><0|`, so the map is CPTP only while
    /// `p1 + p2 <= 1`.
    AsWritten,
    /// Absorption branch rewritten as sequential excitation:
    /// `E4[0,0] = sqrt((1-p1)(1-p2))` and `E6[2,0] = sqrt(p2 (1-p1))`.
    /// Complete for all `p1, p2` in `[0, 1]`.
    Factorized,
}

impl ChannelVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelVariant::AsWritten => "as-written",
            ChannelVariant::Factorized => "factorized",
        }
    }
}

impl fmt::Display for ChannelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-written" => Ok(ChannelVariant::AsWritten),
            "factorized" => Ok(ChannelVariant::Factorized),
            other => Err(Error::Config(format!(
                "unknown channel variant {other:?} (expected as-written or factorized)"
            ))),
        }
    }
}

/// Parameters of one single-qutrit channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    r: f64,
    p1: f64,
    p2: f64,
    variant: ChannelVariant,
}

fn probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Parameter {
            name,
            value,
            allowed: "[0, 1]",
        })
    }
}

impl ChannelParams {
    pub fn new(r: f64, p1: f64, p2: f64, variant: ChannelVariant) -> Result<Self> {
        let r = probability("r", r)?;
        let p1 = probability("p1", p1)?;
        let p2 = probability("p2", p2)?;
        if variant == ChannelVariant::AsWritten && p1 + p2 > 1.0 + AS_WRITTEN_SLACK {
            return Err(Error::ChannelDomain { p1, p2 });
        }
        Ok(Self { r, p1, p2, variant })
    }

    /// Both excited levels decay with the same probability `p`.
    pub fn symmetric(r: f64, p: f64, variant: ChannelVariant) -> Result<Self> {
        Self::new(r, p, p, variant)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn variant(&self) -> ChannelVariant {
        self.variant
    }
}

/// Kraus operators `E1..E6` of one qutrit channel.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
}

fn single_entry(row: usize, col: usize, value: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(QUTRIT, QUTRIT);
    m[(row, col)] = C64::new(value, 0.0);
    m
}

fn real_diagonal(d: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::diagonal(&d.map(|x| C64::new(x, 0.0)))
}

/// Builds the six operators for `params`.
pub fn kraus_set(params: &ChannelParams) -> KrausSet {
    let ChannelParams { r, p1, p2, variant } = *params;
    let loss = r.sqrt();
    let gain = (1.0 - r).sqrt();

    let (ground_stay, second_absorb) = match variant {
        // clamp: p1 + p2 may exceed 1 by AS_WRITTEN_SLACK
        ChannelVariant::AsWritten => ((1.0 - p1 - p2).max(0.0).sqrt(), p2.sqrt()),
        ChannelVariant::Factorized => (((1.0 - p1) * (1.0 - p2)).sqrt(), (p2 * (1.0 - p1)).sqrt()),
    };

    let operators = vec![
        real_diagonal([loss, loss * (1.0 - p1).sqrt(), loss * (1.0 - p2).sqrt()]),
        single_entry(0, 1, loss * p1.sqrt()),
        single_entry(0, 2, loss * p2.sqrt()),
        real_diagonal([gain * ground_stay, gain, gain]),
        single_entry(1, 0, gain * p1.sqrt()),
        single_entry(2, 0, gain * second_absorb),
    ];
    KrausSet { operators }
}

impl KrausSet {
    /// Wraps arbitrary operators without checking completeness.
    pub fn from_operators(operators: Vec<ComplexMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::Config("a Kraus set needs at least one operator".into()));
        }
        if let Some(bad) = operators.iter().find(|m| m.rows() != QUTRIT || m.cols() != QUTRIT) {
            return Err(Error::Shape {
                expected: "3x3 Kraus operator",
                rows: bad.rows(),
                cols: bad.cols(),
            });
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `sum_i E_i^dagger E_i`.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(QUTRIT, QUTRIT), |acc, e| &acc + &(&e.adjoint() * e))
    }

    /// Largest entrywise deviation of `sum_i E_i^dagger E_i` from the identity.
    pub fn completeness_deviation(&self) -> f64 {
        self.completeness_sum().max_abs_diff(&ComplexMatrix::identity(QUTRIT))
    }

    /// Applies the channel to a single-qutrit state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != QUTRIT {
            return Err(Error::Shape {
                expected: "single-qutrit 3x3 density matrix",
                rows: rho.dim(),
                cols: rho.dim(),
            });
        }
        let out = self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(QUTRIT, QUTRIT), |acc, e| {
                &acc + &e.sandwich(rho.matrix())
            });
        DensityMatrix::qutrit(out)
    }

    fn nonzero(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.operators
            .iter()
            .filter(|m| m.as_slice().iter().any(|z| z.norm_sqr() > 0.0))
    }
}

/// `sum_{i,j} (E_i ⊗ F_j) rho (E_i ⊗ F_j)^dagger` for raw 9x9 operators,
/// without validating the result.
pub fn apply_kraus_pair(rho: &ComplexMatrix, on_a: &KrausSet, on_b: &KrausSet) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for e in on_a.nonzero() {
        for f in on_b.nonzero() {
            out = &out + &tensor(e, f).sandwich(rho);
        }
    }
    out
}

/// Local channels on both qutrits: `params_a` acts on A, `params_b` on B.
pub fn apply_two_sided(
    rho0: &DensityMatrix,
    params_a: &ChannelParams,
    params_b: &ChannelParams,
) -> Result<DensityMatrix> {
    if !rho0.is_bipartite() {
        return Err(Error::Shape {
            expected: "two-qutrit 9x9 density matrix",
            rows: rho0.dim(),
            cols: rho0.dim(),
        });
    }
    let out = apply_kraus_pair(rho0.matrix(), &kraus_set(params_a), &kraus_set(params_b));
    DensityMatrix::bipartite(out)
}
