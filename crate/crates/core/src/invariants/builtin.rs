//! Built-in three-party invariants, evaluated in index-free form from partial
//! traces, and the three-qubit residual tangle.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::tensor::{embed_with_identity, DensityOp, StateTensor};

use super::eval::{eval_contraction, IMAG_TOL};
use super::expr::{ContractionExpr, Factor, FactorKind};
use super::parser::parse_contraction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BuiltinName {
    I2,
    I4_1,
    I4_2,
    I4_3,
    I4_4,
    I6,
}

impl BuiltinName {
    pub const ALL: [BuiltinName; 6] = [
        BuiltinName::I2,
        BuiltinName::I4_1,
        BuiltinName::I4_2,
        BuiltinName::I4_3,
        BuiltinName::I4_4,
        BuiltinName::I6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BuiltinName::I2 => "I2",
            BuiltinName::I4_1 => "I4_1",
            BuiltinName::I4_2 => "I4_2",
            BuiltinName::I4_3 => "I4_3",
            BuiltinName::I4_4 => "I4_4",
            BuiltinName::I6 => "I6",
        }
    }

    /// Index pattern of the invariant as a contraction expression.
    pub fn pattern(self) -> &'static str {
        match self {
            BuiltinName::I2 => "psi[i,j,k] * psi*[i,j,k]",
            BuiltinName::I4_1 => "psi[i,j,k] * psi*[i,m,n] * psi[p,m,n] * psi*[p,j,k]",
            BuiltinName::I4_2 => "psi[j,i,k] * psi*[m,i,n] * psi[m,p,n] * psi*[j,p,k]",
            BuiltinName::I4_3 => "psi[j,k,i] * psi*[m,n,i] * psi[m,n,p] * psi*[j,k,p]",
            BuiltinName::I4_4 => "psi[i,j,k] * psi*[i,j,k] * psi[m,n,p] * psi*[m,n,p]",
            BuiltinName::I6 => {
                "psi[i,j,k] * psi*[i,m,n] * psi[p,q,n] * psi*[p,j,s] * psi[r,m,s] * psi*[r,q,k]"
            }
        }
    }

    pub fn expr(self) -> ContractionExpr {
        parse_contraction(self.pattern()).expect("built-in patterns are valid")
    }
}

impl fmt::Display for BuiltinName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BuiltinName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinName::ALL
            .into_iter()
            .find(|b| b.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown built-in invariant `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuiltinInvariants {
    pub i2: f64,
    pub i4_1: f64,
    pub i4_2: f64,
    pub i4_3: f64,
    pub i4_4: f64,
    pub i6: f64,
    /// Some value had `|Im| > 1e-9` before being reported as real.
    pub imag_warning: bool,
}

impl BuiltinInvariants {
    pub fn get(&self, name: BuiltinName) -> f64 {
        match name {
            BuiltinName::I2 => self.i2,
            BuiltinName::I4_1 => self.i4_1,
            BuiltinName::I4_2 => self.i4_2,
            BuiltinName::I4_3 => self.i4_3,
            BuiltinName::I4_4 => self.i4_4,
            BuiltinName::I6 => self.i6,
        }
    }

    pub fn entries(&self) -> Vec<(BuiltinName, f64)> {
        BuiltinName::ALL.iter().map(|&b| (b, self.get(b))).collect()
    }
}

fn require_three_parties(n: usize) -> Result<()> {
    if n != 3 {
        return Err(Error::PartyCountUnsupported(format!(
            "built-in invariants are defined for 3 parties, got {n}"
        )));
    }
    Ok(())
}

fn trace_square(m: &CMatrix) -> Complex64 {
    (m * m).trace()
}

/// Built-ins of a three-party density operator (any local dims).
pub fn builtin_invariants(rho: &DensityOp) -> Result<BuiltinInvariants> {
    require_three_parties(rho.n_parties())?;
    let dims = rho.dims();
    let tr = rho.matrix().trace();
    // ρ with party p traced out, acting on the other two
    let without = |p: usize| rho.partial_trace(&[p]).map(|r| r.matrix().clone());
    let (r_bc, r_ac, r_ab) = (without(0)?, without(1)?, without(2)?);

    let i6 = {
        let a = embed_with_identity(&r_bc, dims, &[1, 2])?;
        let b = embed_with_identity(&r_ac, dims, &[0, 2])?;
        let c = embed_with_identity(&r_ab, dims, &[0, 1])?;
        (a * b * c).trace()
    };
    let raw = [
        tr,
        trace_square(&r_bc),
        trace_square(&r_ac),
        trace_square(&r_ab),
        tr * tr,
        i6,
    ];
    Ok(BuiltinInvariants {
        i2: raw[0].re,
        i4_1: raw[1].re,
        i4_2: raw[2].re,
        i4_3: raw[3].re,
        i4_4: raw[4].re,
        i6: raw[5].re,
        imag_warning: raw.iter().any(|z| z.im.abs() > IMAG_TOL),
    })
}

/// Built-ins of a pure three-party state.
pub fn builtin_invariants_of_state(state: &StateTensor) -> Result<BuiltinInvariants> {
    require_three_parties(state.n_parties())?;
    builtin_invariants(&DensityOp::from_state(state))
}

/// Inner ε-contracted sum of the residual tangle, as a contraction pattern.
pub const TANGLE_PATTERN: &str = "psi[i,j,k] * psi[i1,j1,m] * psi[n,p,k1] * psi[n1,p1,m1] * \
     eps[i,i1] * eps[j,j1] * eps[k,k1] * eps[m,m1] * eps[n,n1] * eps[p,p1]";

fn require_three_qubits(state: &StateTensor) -> Result<()> {
    if state.dims() != [2, 2, 2] {
        return Err(Error::PartyCountUnsupported(format!(
            "the tangle is defined for three qubits, got dims {:?}",
            state.dims()
        )));
    }
    Ok(())
}

/// Residual tangle `T = 2 |Σ ψψψψ εεεεεε|` of a three-qubit state.
pub fn tangle(state: &StateTensor) -> Result<f64> {
    require_three_qubits(state)?;
    let expr = parse_contraction(TANGLE_PATTERN).expect("tangle pattern is valid");
    Ok(2.0 * eval_contraction(&expr, state)?.value.norm())
}

/// Index slots of the four `ψ` factors in the tangle's inner sum, and the
/// six ε-paired index names.
const TANGLE_PSI: [[&str; 3]; 4] = [["i", "j", "k"], ["i1", "j1", "m"], ["n", "p", "k1"], ["n1", "p1", "m1"]];
const TANGLE_PAIRS: [(&str, &str); 6] = [
    ("i", "i1"),
    ("j", "j1"),
    ("k", "k1"),
    ("m", "m1"),
    ("n", "n1"),
    ("p", "p1"),
];

/// The 64 signed `δ`-only terms of `T²/4`: every `ε ε*` pair is replaced by
/// `δδ − δδ`, and the `δ`s are absorbed by naming the conjugate copy's
/// indices. Bit `b` of the term number picks the crossed pairing for
/// pair `b`. Factors are ordered `ψ1, ψ*1, ψ2, ψ*2, ..`.
pub fn tangle_squared_terms() -> Vec<(f64, ContractionExpr)> {
    (0u32..64)
        .map(|mask| {
            let rename = |name: &str| -> String {
                for (b, (x, x1)) in TANGLE_PAIRS.iter().enumerate() {
                    let crossed = mask >> b & 1 == 1;
                    if name == *x {
                        return if crossed { x1.to_string() } else { x.to_string() };
                    }
                    if name == *x1 {
                        return if crossed { x.to_string() } else { x1.to_string() };
                    }
                }
                unreachable!("every tangle index is paired")
            };
            let mut factors = Vec::with_capacity(8);
            for slots in TANGLE_PSI {
                factors.push(Factor::new(FactorKind::Psi, &slots));
                let conj: Vec<String> = slots.iter().map(|s| rename(s)).collect();
                let conj: Vec<&str> = conj.iter().map(String::as_str).collect();
                factors.push(Factor::new(FactorKind::PsiConj, &conj));
            }
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            (sign, ContractionExpr::new(factors).expect("expansion terms are valid"))
        })
        .collect()
}

/// `T²` evaluated through the `δ` expansion instead of the modulus.
pub fn tangle_squared_expanded(state: &StateTensor) -> Result<f64> {
    require_three_qubits(state)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (sign, term) in tangle_squared_terms() {
        sum += eval_contraction(&term, state)?.value * sign;
    }
    Ok(4.0 * sum.re)
}
