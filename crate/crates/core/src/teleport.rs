//! Bennett teleportation of a single-qubit mixed state through a two-qubit
//! mixed channel.
//!
//! Qubit 1 is the input, qubit 2 Alice's half of the channel, qubit 3 Bob's.
//! The composite `rho_1 (x) rho_23` is laid out as `q1 (x) q2 (x) q3`. Alice's
//! Bell measurement is the projector `P_outcome (x) I_2`; Bob's conditional
//! state is the partial trace over qubits 1-2, normalized by its trace.

use std::fmt;

use serde::Serialize;

use crate::channels::{build, Channel, ChannelSpec};
use crate::density::{partial_trace_matrix, DensityMatrix, QubitState, Subsystem};
use crate::error::{Error, Result};
use crate::linalg::{c, r, ComplexMatrix};
use crate::metrics::hs_distance_sq;

/// Outcomes with probability below this have no conditional state.
pub const DEGENERATE_PROBABILITY: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    /// Amplitudes in the computational basis `|00>, |01>, |10>, |11>`.
    pub fn amplitudes(self) -> [f64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            BellOutcome::PhiPlus => [h, 0.0, 0.0, h],
            BellOutcome::PhiMinus => [h, 0.0, 0.0, -h],
            BellOutcome::PsiPlus => [0.0, h, h, 0.0],
            BellOutcome::PsiMinus => [0.0, h, -h, 0.0],
        }
    }

    pub fn projector(self) -> ComplexMatrix {
        let v = self.amplitudes();
        ComplexMatrix::from_fn(4, |i, j| r(v[i] * v[j]))
    }

    pub fn is_phi(self) -> bool {
        matches!(self, BellOutcome::PhiPlus | BellOutcome::PhiMinus)
    }

    pub fn label(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Projectors onto `|Phi+>, |Phi->, |Psi+>, |Psi->`, in that order.
pub fn bell_projectors() -> [ComplexMatrix; 4] {
    BellOutcome::ALL.map(BellOutcome::projector)
}

/// Bob's fixed Pauli correction: `Phi+ -> sigma_z`, `Phi- -> I`,
/// `Psi+ -> sigma_y`, `Psi- -> sigma_x`.
pub fn correction(outcome: BellOutcome) -> ComplexMatrix {
    let z = r(0.0);
    let entries = match outcome {
        BellOutcome::PhiPlus => [r(1.0), z, z, r(-1.0)],
        BellOutcome::PhiMinus => [r(1.0), z, z, r(1.0)],
        BellOutcome::PsiPlus => [z, c(0.0, -1.0), c(0.0, 1.0), z],
        BellOutcome::PsiMinus => [z, r(1.0), r(1.0), z],
    };
    ComplexMatrix::from_row_major(2, entries.to_vec()).expect("finite Pauli entries")
}

/// Unnormalized Bob block `Tr_12[(P (x) I) (rho_1 (x) rho_23) (P (x) I)]`.
fn projected_bob_block(
    rho1: &ComplexMatrix,
    rho23: &ComplexMatrix,
    outcome: BellOutcome,
) -> Result<ComplexMatrix> {
    let composite = rho1.tensor(rho23);
    let lift = outcome.projector().tensor(&ComplexMatrix::identity(2));
    let projected = lift.matmul(&composite)?.matmul(&lift)?;
    partial_trace_matrix(&projected, (4, 2), Subsystem::B)
}

/// Outcome probability and Bob's normalized conditional state.
pub fn measure(
    rho1: &DensityMatrix,
    rho23: &DensityMatrix,
    outcome: BellOutcome,
) -> Result<(f64, DensityMatrix)> {
    if rho1.dim() != 2 {
        return Err(Error::WrongShape(format!(
            "input must be a single qubit, got dimension {}",
            rho1.dim()
        )));
    }
    if rho23.dims() != (2, 2) {
        return Err(Error::WrongShape(format!(
            "channel must be two qubits, got dims {:?}",
            rho23.dims()
        )));
    }
    let block = projected_bob_block(rho1.matrix(), rho23.matrix(), outcome)?;
    let probability = block.trace().re;
    if probability < DEGENERATE_PROBABILITY {
        return Err(Error::DegenerateOutcome { probability });
    }
    let bob = DensityMatrix::with_validation(
        block.scale(r(1.0 / probability)),
        (2, 1),
        rho23.validation(),
    )?;
    Ok((probability, bob))
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportOutcome {
    pub outcome: BellOutcome,
    pub probability: f64,
    /// `None` when the outcome is degenerate (probability ~ 0).
    pub bob_raw: Option<DensityMatrix>,
    pub bob_corrected: Option<DensityMatrix>,
}

impl TeleportOutcome {
    pub fn is_degenerate(&self) -> bool {
        self.bob_raw.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportRun {
    pub input: QubitState,
    pub channel: ChannelSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_warning: Option<String>,
    pub outcomes: [TeleportOutcome; 4],
}

impl TeleportRun {
    pub fn outcome(&self, which: BellOutcome) -> &TeleportOutcome {
        &self.outcomes[BellOutcome::ALL
            .iter()
            .position(|&o| o == which)
            .expect("all outcomes present")]
    }

    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// `Tr((rho_in - rho_corrected)^2)` per outcome, `None` for degenerate ones.
    pub fn distortions(&self) -> [Option<f64>; 4] {
        let input = self.input.density();
        self.outcomes.clone().map(|o| {
            o.bob_corrected
                .map(|b| hs_distance_sq(&input, &b).expect("both 2x2"))
        })
    }
}

/// Runs all four branches for a catalog channel spec.
pub fn run(input: &QubitState, channel: &ChannelSpec) -> Result<TeleportRun> {
    run_channel(input, &build(channel)?)
}

/// Runs all four branches on an already built channel.
pub fn run_channel(input: &QubitState, channel: &Channel) -> Result<TeleportRun> {
    let rho1 = input.density();
    let outcomes = BellOutcome::ALL.map(|outcome| -> Result<TeleportOutcome> {
        match measure(&rho1, &channel.state, outcome) {
            Ok((probability, bob_raw)) => {
                let corrected = bob_raw.matrix().conjugate_by(&correction(outcome))?;
                let bob_corrected =
                    DensityMatrix::with_validation(corrected, (2, 1), bob_raw.validation())?;
                Ok(TeleportOutcome {
                    outcome,
                    probability,
                    bob_raw: Some(bob_raw),
                    bob_corrected: Some(bob_corrected),
                })
            }
            Err(Error::DegenerateOutcome { probability }) => Ok(TeleportOutcome {
                outcome,
                probability: probability.max(0.0),
                bob_raw: None,
                bob_corrected: None,
            }),
            Err(e) => Err(e),
        }
    });
    let [a, b, c, d] = outcomes;
    Ok(TeleportRun {
        input: *input,
        channel: channel.spec,
        channel_warning: channel.warning.clone(),
        outcomes: [a?, b?, c?, d?],
    })
}
