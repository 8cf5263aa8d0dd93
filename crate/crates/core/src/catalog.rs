//! Named example states.
//!
//! | name        | state                                                     |
//! |-------------|-----------------------------------------------------------|
//! | `ghz`       | `(|000⟩ + |111⟩)/√2`                                       |
//! | `w`         | `(|001⟩ + |010⟩ + |100⟩)/√3`                               |
//! | `bell-prod` | singlet on parties 1, 2 tensored with `|0⟩` on party 3    |
//! | `kempe1`    | `(2√3 |000⟩ − 5 |111⟩)/√37`                                |
//! | `kempe2`    | `(4√2 |000⟩ − 5 |+++⟩)/√37`                                |
//! | `haar:D:S`  | Haar-random state with comma-separated dims `D`, seed `S` |

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{haar_random_state, StateTensor};

pub const NAMES: &[&str] = &["ghz", "w", "bell-prod", "kempe1", "kempe2", "haar:D:S"];

pub fn ghz() -> StateTensor {
    let h = 0.5f64.sqrt();
    StateTensor::from_real(vec![2, 2, 2], &[h, 0., 0., 0., 0., 0., 0., h])
        .unwrap()
        .with_label("ghz")
}

pub fn w() -> StateTensor {
    let t = (1.0f64 / 3.0).sqrt();
    StateTensor::from_real(vec![2, 2, 2], &[0., t, t, 0., t, 0., 0., 0.])
        .unwrap()
        .with_label("w")
}

pub fn bell_prod() -> StateTensor {
    let h = 0.5f64.sqrt();
    // (|01⟩ - |10⟩)/√2 ⊗ |0⟩
    StateTensor::from_real(vec![2, 2, 2], &[0., 0., h, 0., -h, 0., 0., 0.])
        .unwrap()
        .with_label("bell-prod")
}

pub fn kempe1() -> StateTensor {
    let n = 37f64.sqrt();
    let mut amps = [0.0; 8];
    amps[0] = 2.0 * 3f64.sqrt() / n;
    amps[7] = -5.0 / n;
    StateTensor::from_real(vec![2, 2, 2], &amps)
        .unwrap()
        .with_label("kempe1")
}

pub fn kempe2() -> StateTensor {
    let n = 37f64.sqrt();
    let plus = 0.5f64.sqrt();
    let plus3 = plus * plus * plus;
    let mut amps = [-5.0 * plus3 / n; 8];
    amps[0] += 4.0 * 2f64.sqrt() / n;
    StateTensor::from_real(vec![2, 2, 2], &amps)
        .unwrap()
        .with_label("kempe2")
}

pub fn haar(dims: &[usize], seed: u64) -> Result<StateTensor> {
    let dims_text: Vec<String> = dims.iter().map(usize::to_string).collect();
    Ok(haar_random_state(dims, seed)?.with_label(format!("haar:{}:{seed}", dims_text.join(","))))
}

/// Looks a state up by catalog name.
pub fn by_name(name: &str) -> Result<StateTensor> {
    match name {
        "ghz" => Ok(ghz()),
        "w" => Ok(w()),
        "bell-prod" => Ok(bell_prod()),
        "kempe1" => Ok(kempe1()),
        "kempe2" => Ok(kempe2()),
        _ => {
            let rest = name
                .strip_prefix("haar:")
                .ok_or_else(|| Error::UnknownState(name.to_string()))?;
            let (dims, seed) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::UnknownState(name.to_string()))?;
            let dims = dims
                .split(',')
                .map(|d| d.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::UnknownState(name.to_string()))?;
            let seed = seed
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::UnknownState(name.to_string()))?;
            haar(&dims, seed)
        }
    }
}

/// Catalog name, or else a path to a JSON state file.
pub fn resolve(spec: &str) -> Result<StateTensor> {
    match by_name(spec) {
        Err(Error::UnknownState(_)) if Path::new(spec).exists() => {
            let state = StateTensor::read_json(spec)?;
            Ok(match state.label() {
                Some(_) => state,
                None => state.with_label(spec),
            })
        }
        other => other,
    }
}

/// `|+⟩ = (|0⟩ + |1⟩)/√2`.
pub fn plus() -> Vec<Complex64> {
    let h = Complex64::new(0.5f64.sqrt(), 0.0);
    vec![h, h]
}
