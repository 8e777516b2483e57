//! JSON instance files.
//!
//! Schema (strict: unknown fields are errors, so `p`/`q` typos surface):
//!
//! ```json
//! {
//!   "x": [0.0, 1.0],
//!   "p": [0.2, 0.8],
//!   "q": [0.5, 0.5],
//!   "f": {"kind": "square"},
//!   "phi": {"kind": "power", "coefficient": 1.0, "exponent": 2.0},
//!   "interval": [0.0, 1.0]
//! }
//! ```
//!
//! `q` defaults to uniform weights; `phi` is optional; `f.exponent` is
//! required for the `power` and `abspower` kinds.

use jengap::{FunctionKind, FunctionSpec64, Instance64, Interval64, ModulusSpec64, WeightVector64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    #[serde(default)]
    pub q: Option<Vec<f64>>,
    pub f: FunctionDesc,
    #[serde(default)]
    pub phi: Option<ModulusDesc>,
    pub interval: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDesc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusDesc {
    pub kind: String,
    pub coefficient: f64,
    pub exponent: f64,
}

impl FunctionDesc {
    pub fn to_spec(&self) -> Result<FunctionSpec64, String> {
        let spec = match self.kind.as_str() {
            "square" => {
                reject_exponent(self, "square")?;
                FunctionSpec64::square()
            }
            "exp" => {
                reject_exponent(self, "exp")?;
                FunctionSpec64::exp()
            }
            "xlogx" => {
                reject_exponent(self, "xlogx")?;
                FunctionSpec64::xlogx()
            }
            "power" => FunctionSpec64::power(require_exponent(self)?)
                .map_err(|e| format!("field 'f.exponent': {e}"))?,
            "abspower" => FunctionSpec64::abs_power(require_exponent(self)?)
                .map_err(|e| format!("field 'f.exponent': {e}"))?,
            other => {
                return Err(format!(
                    "field 'f.kind': unknown function kind {other:?} \
                     (expected square, power, exp, xlogx or abspower)"
                ))
            }
        };
        Ok(spec)
    }

    pub fn from_spec(spec: &FunctionSpec64) -> Self {
        let (kind, exponent) = match spec.kind() {
            FunctionKind::Square => ("square", None),
            FunctionKind::Power { exponent } => ("power", Some(exponent)),
            FunctionKind::Exp => ("exp", None),
            FunctionKind::XLogX => ("xlogx", None),
            FunctionKind::AbsPower { exponent } => ("abspower", Some(exponent)),
        };
        Self {
            kind: kind.to_string(),
            exponent,
        }
    }
}

fn require_exponent(desc: &FunctionDesc) -> Result<f64, String> {
    desc.exponent.ok_or_else(|| {
        format!(
            "field 'f.exponent': required for kind {:?}",
            desc.kind
        )
    })
}

fn reject_exponent(desc: &FunctionDesc, kind: &str) -> Result<(), String> {
    if desc.exponent.is_some() {
        return Err(format!(
            "field 'f.exponent': not accepted for kind {kind:?}"
        ));
    }
    Ok(())
}

impl ModulusDesc {
    pub fn to_spec(&self) -> Result<ModulusSpec64, String> {
        if self.kind != "power" {
            return Err(format!(
                "field 'phi.kind': unknown modulus kind {:?} (expected \"power\")",
                self.kind
            ));
        }
        ModulusSpec64::new(self.coefficient, self.exponent).map_err(|e| format!("field 'phi': {e}"))
    }

    pub fn from_spec(spec: &ModulusSpec64) -> Self {
        Self {
            kind: "power".to_string(),
            coefficient: spec.coefficient(),
            exponent: spec.exponent(),
        }
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("instance file: {e}"))
    }

    pub fn to_instance(&self) -> Result<Instance64, String> {
        let f = self.f.to_spec()?;
        let phi = self.phi.as_ref().map(|m| m.to_spec()).transpose()?;
        let interval = Interval64::new(self.interval[0], self.interval[1])
            .map_err(|e| format!("field 'interval': {e}"))?;
        let p = WeightVector64::new(self.p.clone()).map_err(|e| format!("field 'p': {e}"))?;
        let q = match &self.q {
            Some(q) => WeightVector64::new(q.clone()).map_err(|e| format!("field 'q': {e}"))?,
            None => WeightVector64::uniform(self.x.len())
                .map_err(|e| format!("field 'q' (defaulted uniform): {e}"))?,
        };
        Instance64::new(self.x.clone(), p, q, f, phi, interval).map_err(|e| e.to_string())
    }
}
