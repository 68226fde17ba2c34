//! Parameterized circuits: the five QAOA variants (mixer and initial state
//! combinations) and hardware-efficient RY/RZ + CNOT circuits, with binding
//! and depth accounting.
//!
//! Parameter order: QAOA takes `(beta_1..beta_p, gamma_1..gamma_p)`. HEA
//! takes blocks of `2n` angles, `theta[2q]` for `RY` and `theta[2q + 1]`
//! for `RZ` on qubit `q`, block after block.

mod depth;
mod exact;
mod hea;
mod qaoa;

use std::fmt;
use std::str::FromStr;

pub use depth::{basis_decomposition, depth, gate_census, DepthReport};
pub use exact::{simulate_exact_mixer, SectorMixer};
pub use hea::build_hea;
pub use qaoa::{build_qaoa, build_qaoa_with_cost, mixer_pairs};

use crate::simulator::{Angle, Circuit, InitSpec, Op};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnsatzError {
    #[error("unknown or invalid variant `{0}`")]
    BadVariant(String),
    #[error("invalid layer count {0}")]
    BadLayers(usize),
    #[error("expected {expected} parameters, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mixer {
    X,
    XyFullyConnected,
    XyRing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitKind {
    Uniform,
    Basis,
    Dicke,
}

/// A valid mixer / initial-state pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QaoaVariant {
    mixer: Mixer,
    init: InitKind,
}

impl QaoaVariant {
    pub const X_UI: QaoaVariant = QaoaVariant { mixer: Mixer::X, init: InitKind::Uniform };
    pub const XYFC_BI: QaoaVariant = QaoaVariant { mixer: Mixer::XyFullyConnected, init: InitKind::Basis };
    pub const XYFC_DI: QaoaVariant = QaoaVariant { mixer: Mixer::XyFullyConnected, init: InitKind::Dicke };
    pub const XYRING_BI: QaoaVariant = QaoaVariant { mixer: Mixer::XyRing, init: InitKind::Basis };
    pub const XYRING_DI: QaoaVariant = QaoaVariant { mixer: Mixer::XyRing, init: InitKind::Dicke };

    /// The five variants in table order I to V.
    pub const ALL: [QaoaVariant; 5] = [Self::X_UI, Self::XYFC_BI, Self::XYFC_DI, Self::XYRING_BI, Self::XYRING_DI];

    pub fn new(mixer: Mixer, init: InitKind) -> Result<QaoaVariant, AnsatzError> {
        let v = QaoaVariant { mixer, init };
        if QaoaVariant::ALL.contains(&v) {
            Ok(v)
        } else {
            Err(AnsatzError::BadVariant(format!("{mixer:?} mixer with {init:?} initial state")))
        }
    }

    pub fn mixer(&self) -> Mixer {
        self.mixer
    }

    pub fn init(&self) -> InitKind {
        self.init
    }

    pub fn conserves_weight(&self) -> bool {
        self.mixer != Mixer::X
    }

    pub fn init_spec(&self, n_h: usize) -> InitSpec {
        match self.init {
            InitKind::Uniform => InitSpec::Uniform,
            InitKind::Basis => InitSpec::Basis(n_h),
            InitKind::Dicke => InitSpec::Dicke(n_h),
        }
    }

    pub fn id(&self) -> &'static str {
        match (self.mixer, self.init) {
            (Mixer::X, _) => "qaoa-x-ui",
            (Mixer::XyFullyConnected, InitKind::Basis) => "qaoa-xyfc-bi",
            (Mixer::XyFullyConnected, _) => "qaoa-xyfc-di",
            (Mixer::XyRing, InitKind::Basis) => "qaoa-xyring-bi",
            (Mixer::XyRing, _) => "qaoa-xyring-di",
        }
    }
}

/// Command-line level ansatz identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Qaoa(QaoaVariant),
    Hea(usize),
}

impl Variant {
    pub fn id(&self) -> &'static str {
        match self {
            Variant::Qaoa(v) => v.id(),
            Variant::Hea(1) => "hea-1",
            Variant::Hea(_) => "hea-2",
        }
    }

    pub fn is_qaoa(&self) -> bool {
        matches!(self, Variant::Qaoa(_))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Variant {
    type Err = AnsatzError;

    fn from_str(s: &str) -> Result<Variant, AnsatzError> {
        if let Some(v) = QaoaVariant::ALL.iter().find(|v| v.id() == s) {
            return Ok(Variant::Qaoa(*v));
        }
        match s {
            "hea-1" => Ok(Variant::Hea(1)),
            "hea-2" => Ok(Variant::Hea(2)),
            _ => Err(AnsatzError::BadVariant(s.to_string())),
        }
    }
}

/// A circuit template whose angles refer to a parameter vector.
///
/// The first `prep_len` operations prepare the initial state and carry no
/// parameters, so simulators may run them once and cache the result.
#[derive(Clone, Debug)]
pub struct ParameterizedCircuit {
    pub n: usize,
    pub ops: Vec<Op<Angle>>,
    pub num_params: usize,
    pub variant: Variant,
    /// QAOA depth `p` or HEA layer count.
    pub layers: usize,
    pub init: InitSpec,
    pub prep_len: usize,
}

impl ParameterizedCircuit {
    fn check_arity(&self, params: &[f64]) -> Result<(), AnsatzError> {
        if params.len() != self.num_params {
            return Err(AnsatzError::ArityMismatch { expected: self.num_params, got: params.len() });
        }
        Ok(())
    }

    /// The parameter-free state-preparation prefix.
    pub fn prep_circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.n);
        for op in &self.ops[..self.prep_len] {
            c.push(op.map_angle(|a| a.bind(&[])));
        }
        c
    }

    /// Everything after the preparation prefix, bound to `params`.
    pub fn bind_body(&self, params: &[f64]) -> Result<Circuit, AnsatzError> {
        self.check_arity(params)?;
        let mut c = Circuit::new(self.n);
        for op in &self.ops[self.prep_len..] {
            c.push(op.map_angle(|a| a.bind(params)));
        }
        Ok(c)
    }
}

/// Binds `params` positionally into a concrete circuit.
pub fn bind(pc: &ParameterizedCircuit, params: &[f64]) -> Result<Circuit, AnsatzError> {
    pc.check_arity(params)?;
    let mut c = pc.prep_circuit();
    c.extend(&pc.bind_body(params)?);
    Ok(c)
}

#[cfg(test)]
mod tests;
