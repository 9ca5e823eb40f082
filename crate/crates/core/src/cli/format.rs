//! File formats read and written by the command line.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Reals are written in shortest round-trip form in JSON and with 17
//! significant digits in CSV.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::numkit::{ComplexMatrix, DensityOperator, PureState, Tolerances, C64};
use crate::spectral::{snap_hermitian, IntDist, PeriodicHamiltonian};

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

/// Default snapping tolerance for `hermitian` Hamiltonian files.
pub const DEFAULT_TOL_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateFile {
    /// Normalized on read.
    Pure { amplitudes: Vec<Complex> },
    Density { matrix: Matrix },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianFile {
    IntegerLevels {
        tau: f64,
        levels: Vec<i64>,
        #[serde(default)]
        offset: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<Matrix>,
    },
    Hermitian {
        matrix: Matrix,
        tau: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol_snap: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistFile {
    pub min: i64,
    pub weights: Vec<f64>,
}

/// A parsed state: pure inputs keep their amplitudes.
#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl State {
    pub fn density(&self) -> DensityOperator {
        match self {
            State::Pure(p) => p.density(),
            State::Mixed(r) => r.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            State::Pure(p) => Some(p),
            State::Mixed(_) => None,
        }
    }
}

pub fn complex(z: C64) -> Complex {
    [z.re, z.im]
}

pub fn vector_to_json(v: &[C64]) -> Vec<Complex> {
    v.iter().map(|&z| complex(z)).collect()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Matrix {
    (0..m.rows()).map(|i| vector_to_json(m.row(i))).collect()
}

pub fn matrix_from_json(rows: &Matrix, field: &str) -> Result<ComplexMatrix, CliError> {
    let n = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Invalid(format!("field `{field}`: matrix rows must be non-empty and of equal length")));
    }
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|z| C64::new(z[0], z[1])).collect()).collect();
    Ok(ComplexMatrix::from_rows(&rows))
}

impl StateFile {
    pub fn from_pure(psi: &PureState) -> Self {
        StateFile::Pure {
            amplitudes: vector_to_json(psi.amplitudes()),
        }
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        StateFile::Density {
            matrix: matrix_to_json(rho.matrix()),
        }
    }

    pub fn into_state(self, tol: &Tolerances) -> Result<State, CliError> {
        match self {
            StateFile::Pure { amplitudes } => {
                let a = amplitudes.iter().map(|z| C64::new(z[0], z[1])).collect();
                Ok(State::Pure(PureState::normalized(a)?))
            }
            StateFile::Density { matrix } => {
                let m = matrix_from_json(&matrix, "matrix")?;
                Ok(State::Mixed(DensityOperator::with_tol(m, tol)?))
            }
        }
    }
}

impl HamiltonianFile {
    pub fn from_hamiltonian(h: &PeriodicHamiltonian) -> Self {
        HamiltonianFile::IntegerLevels {
            tau: h.tau(),
            levels: h.levels().to_vec(),
            offset: h.offset(),
            basis: h.basis().map(matrix_to_json),
        }
    }

    pub fn into_hamiltonian(self) -> Result<PeriodicHamiltonian, CliError> {
        match self {
            HamiltonianFile::IntegerLevels { tau, levels, offset, basis } => {
                let basis = basis.map(|b| matrix_from_json(&b, "basis")).transpose()?;
                Ok(PeriodicHamiltonian::new(tau, levels, offset, basis)?)
            }
            HamiltonianFile::Hermitian { matrix, tau, tol_snap } => {
                let m = matrix_from_json(&matrix, "matrix")?;
                Ok(snap_hermitian(&m, tau, tol_snap.unwrap_or(DEFAULT_TOL_SNAP))?)
            }
        }
    }
}

impl DistFile {
    pub fn from_dist(p: &IntDist) -> Self {
        DistFile {
            min: p.min_support(),
            weights: p.weights().to_vec(),
        }
    }

    pub fn into_dist(self) -> Result<IntDist, CliError> {
        Ok(IntDist::new(self.min, self.weights)?)
    }
}

/// Reads and deserializes a JSON file, keeping line and column in errors.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn read_state(path: &Path, tol: &Tolerances) -> Result<State, CliError> {
    read_json::<StateFile>(path)?.into_state(tol)
}

pub fn read_hamiltonian(path: &Path) -> Result<PeriodicHamiltonian, CliError> {
    read_json::<HamiltonianFile>(path)?.into_hamiltonian()
}

pub fn read_dist(path: &Path) -> Result<IntDist, CliError> {
    read_json::<DistFile>(path)?.into_dist()
}

/// JSON report wrapper carrying the library version and the run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub library: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub result: serde_json::Value,
}

impl Envelope {
    pub fn new(command: &str, config: serde_json::Value, result: serde_json::Value) -> Self {
        Self {
            library: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("values are finite or null");
        s.push('\n');
        s
    }
}

/// CSV table with `#` comment lines for the version and configuration.
pub fn csv_document(config: &serde_json::Value, header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = format!(
        "# {} {}\n# config: {}\n{header}\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        serde_json::to_string(config).expect("config serializes")
    );
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

/// Parses a CSV document written by [`csv_document`] into header and numeric rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| CliError::Invalid("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| c.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Invalid(format!("CSV row {}: {e}", i + 1)))?;
        if row.len() != header.len() {
            return Err(CliError::Invalid(format!("CSV row {} has {} cells, expected {}", i + 1, row.len(), header.len())));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{random_density, random_pure, random_unitary};
    use proptest::prelude::*;

    #[test]
    fn state_files_parse() {
        let s: StateFile = serde_json::from_str(r#"{"kind":"pure","amplitudes":[[1,0],[1,0]]}"#).unwrap();
        let psi = s.into_state(&Tolerances::default()).unwrap();
        assert!((psi.as_pure().unwrap().amplitudes()[0].re - 0.5f64.sqrt()).abs() < 1e-15);
        let s: StateFile = serde_json::from_str(r#"{"kind":"density","matrix":[[[0.5,0],[0.4,0]],[[0.4,0],[0.5,0]]]}"#).unwrap();
        assert_eq!(s.into_state(&Tolerances::default()).unwrap().density().dim(), 2);
    }

    #[test]
    fn density_validation_uses_profile() {
        let s = StateFile::Density {
            matrix: vec![vec![[0.5 + 1e-8, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [0.5, 0.0]]],
        };
        assert!(s.clone().into_state(&Tolerances::default()).is_err());
        assert!(s.into_state(&Tolerances::profile("loose").unwrap()).is_ok());
    }

    #[test]
    fn ragged_matrix_rejected() {
        let s = StateFile::Density {
            matrix: vec![vec![[1.0, 0.0]], vec![[0.0, 0.0], [0.0, 0.0]]],
        };
        assert!(matches!(s.into_state(&Tolerances::default()), Err(CliError::Invalid(_))));
    }

    #[test]
    fn unknown_kind_and_field_rejected() {
        assert!(serde_json::from_str::<StateFile>(r#"{"kind":"mixed","matrix":[]}"#).is_err());
        assert!(serde_json::from_str::<DistFile>(r#"{"min":0,"weights":[1],"extra":1}"#).is_err());
    }

    #[test]
    fn hamiltonian_files() {
        let h: HamiltonianFile = serde_json::from_str(r#"{"kind":"integer_levels","tau":6.283185307179586,"levels":[0,2,5]}"#).unwrap();
        let h = h.into_hamiltonian().unwrap();
        assert_eq!(h.levels(), &[0, 2, 5]);
        let back = HamiltonianFile::from_hamiltonian(&h).into_hamiltonian().unwrap();
        assert_eq!(back.levels(), h.levels());
        assert_eq!(back.offset(), h.offset());

        let m = HamiltonianFile::Hermitian {
            matrix: vec![vec![[0.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [2.0, 0.0]]],
            tau: std::f64::consts::PI,
            tol_snap: None,
        };
        assert_eq!(m.into_hamiltonian().unwrap().levels(), &[0, 1]);
    }

    #[test]
    fn csv_round_trip() {
        let cfg = serde_json::json!({"seed": 1});
        let doc = csv_document(&cfg, "a,b", ["1,2.5000000000000000e-1".to_string()]);
        assert!(doc.starts_with("# ti-coherence"));
        let (h, rows) = parse_csv(&doc).unwrap();
        assert_eq!(h, ["a", "b"]);
        assert_eq!(rows, vec![vec![1.0, 0.25]]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn json_round_trip_is_bit_exact(seed in 0u64..10_000, dim in 1usize..5) {
            let rho = random_density(dim, dim, seed).unwrap();
            let f = StateFile::from_density(&rho);
            let back: StateFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
            prop_assert_eq!(&back, &f);
            let psi = random_pure(dim, seed);
            let f = StateFile::from_pure(&psi);
            let back: StateFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
            prop_assert_eq!(back, f);
            let h = PeriodicHamiltonian::new(1.7, (0..dim as i64).collect(), 0.3, Some(random_unitary(dim, seed))).unwrap();
            let f = HamiltonianFile::from_hamiltonian(&h);
            let back: HamiltonianFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn csv_cells_round_trip(x in proptest::num::f64::NORMAL) {
            let cell = format!("{x:.16e}");
            prop_assert_eq!(cell.parse::<f64>().unwrap(), x);
        }
    }
}
