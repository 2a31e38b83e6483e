//! The one-parameter Horodecki family
//! `rho_alpha = 2/7 |psi+><psi+| + alpha/7 sigma+ + (5 - alpha)/7 sigma-`
//! with `|psi+> = (|01> + |10> + |22>) / sqrt(3)`,
//! `sigma+ = (|00><00| + |12><12| + |21><21|) / 3` and
//! `sigma- = (|11><11| + |20><20| + |02><02|) / 3`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64, QUTRIT, TWO_QUTRIT};

pub const ALPHA_MIN: f64 = 2.0;
pub const ALPHA_MAX: f64 = 5.0;

/// Basis kets `|a b>` making up `|psi+>`, `sigma+` and `sigma-`.
const PSI_PLUS: [(usize, usize); 3] = [(0, 1), (1, 0), (2, 2)];
const SIGMA_PLUS: [(usize, usize); 3] = [(0, 0), (1, 2), (2, 1)];
const SIGMA_MINUS: [(usize, usize); 3] = [(1, 1), (2, 0), (0, 2)];

fn index((a, b): (usize, usize)) -> usize {
    QUTRIT * a + b
}

/// Mixing parameter `alpha` in `[2, 5]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HorodeckiParam(f64);

impl HorodeckiParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if (ALPHA_MIN..=ALPHA_MAX).contains(&alpha) {
            Ok(Self(alpha))
        } else {
            Err(Error::Parameter {
                name: "alpha",
                value: alpha,
                allowed: "[2, 5]",
            })
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for HorodeckiParam {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<HorodeckiParam> for f64 {
    fn from(p: HorodeckiParam) -> f64 {
        p.0
    }
}

/// Entanglement class of the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialClass {
    Separable,
    BoundEntangled,
    FreeEntangled,
}

impl fmt::Display for InitialClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialClass::Separable => "separable",
            InitialClass::BoundEntangled => "bound entangled",
            InitialClass::FreeEntangled => "free entangled",
        })
    }
}

/// The unnormalized ket `|01> + |10> + |22>`.
pub fn psi_plus_ket() -> Vec<C64> {
    let mut ket = vec![C64::new(0.0, 0.0); TWO_QUTRIT];
    for k in PSI_PLUS {
        ket[index(k)] = C64::new(1.0, 0.0);
    }
    ket
}

/// `|psi+><psi+|`.
pub fn psi_plus() -> DensityMatrix {
    DensityMatrix::pure(&psi_plus_ket(), QUTRIT, QUTRIT).expect("psi+ is a valid pure state")
}

pub fn horodecki_state(param: HorodeckiParam) -> DensityMatrix {
    let alpha = param.alpha();
    let mut m = ComplexMatrix::zeros(TWO_QUTRIT, TWO_QUTRIT);
    // 2/7 * (1/3) on every psi+ coherence
    let coherence = C64::new(2.0 / 21.0, 0.0);
    for &row in &PSI_PLUS {
        for &col in &PSI_PLUS {
            m[(index(row), index(col))] = coherence;
        }
    }
    for k in SIGMA_PLUS {
        m[(index(k), index(k))] = C64::new(alpha / 21.0, 0.0);
    }
    for k in SIGMA_MINUS {
        m[(index(k), index(k))] = C64::new((5.0 - alpha) / 21.0, 0.0);
    }
    DensityMatrix::bipartite(m).expect("Horodecki family is a convex mixture of states")
}

/// Class of `rho_alpha(0)`: separable up to 3, bound entangled up to 4,
/// free entangled above.
pub fn classify_initial(param: HorodeckiParam) -> InitialClass {
    let alpha = param.alpha();
    if alpha <= 3.0 {
        InitialClass::Separable
    } else if alpha <= 4.0 {
        InitialClass::BoundEntangled
    } else {
        InitialClass::FreeEntangled
    }
}
