//! Command dispatch for the `bwsynth` binary.
//!
//! Every run prints one JSON envelope. Exit codes: 0 affirmative, 1 clean
//! negative, 2 malformed input or exceeded resource cap.

use std::path::PathBuf;

use bwsynth::barneswall::{brute_force_short_vectors, enumerate_minimal_vectors, BwLattice, DEFAULT_ENUM_QUBITS};
use bwsynth::beyond::{self, builtin, membership_state, membership_unitary, orbit_z_lattice, DEFAULT_ORBIT_CAP};
use bwsynth::io::MatrixFile;
use bwsynth::linalg::{FieldMatrix, FieldVector};
use bwsynth::stab::{brute_force_stabilizers, stabilizer_group, DEFAULT_BFS_CAP};
use bwsynth::synth::{check_theorem1, choi_state, qubit_counts, recognize, recognize_state, to_dyadic};
use bwsynth::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "bwsynth", version, about = "Exact stabilizer-operator recognition and Barnes-Wall lattice tools")]
pub struct Cli {
    /// Output format; only JSON is produced.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Checks the trace and integrality conditions for a stabilizer operator.
    CheckUnitary {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Recognizes a stabilizer state and returns a preparing circuit.
    CheckState {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Decomposes a stabilizer operator into `(k, j, L, R)`.
    Synthesize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        m: Option<u32>,
        /// Cross-check the stabilizer group of the Choi state by brute force.
        #[arg(long)]
        oracle: bool,
    },
    /// Prints the Choi state of an operator.
    Choi {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Enumerates the minimal vectors of a Barnes-Wall lattice.
    Minvec {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        /// Cross-check against exhaustive search.
        #[arg(long)]
        oracle: bool,
        /// Limit on qubits for enumeration, or on boxes for the oracle.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Tests membership of a vector in a Barnes-Wall lattice and its dual.
    LatticeMember {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Order of a Clifford-type group modulo its center.
    GroupOrder {
        /// clifford, real-clifford, rational, qutrit or qupant.
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Certifies a unitary or a state against a tabulated basis change.
    BeyondMember {
        /// Builtin name such as `real-clifford-1` or `qutrit-2`.
        #[arg(long)]
        group: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Flattened orbit lattice of a seed vector (default `|0…0⟩`).
    OrbitLattice {
        #[arg(long)]
        group: String,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Serialize, Debug)]
pub struct ResultEnvelope {
    pub command: Vec<String>,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_reason: Option<String>,
}

enum Outcome {
    Yes(Value),
    No(String),
}

fn read_matrix(path: &PathBuf) -> Result<FieldMatrix, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    MatrixFile::parse(&text)?.to_matrix()
}

fn read_vector(path: &PathBuf) -> Result<FieldVector, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    MatrixFile::parse(&text)?.to_vector()
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("plain data serializes")
}

fn vector_json(v: &FieldVector) -> Value {
    to_value(&v.entries().iter().map(|c| c.to_strings()).collect::<Vec<_>>())
}

fn qubits_of(len: usize) -> Result<usize, Error> {
    if len.is_power_of_two() {
        Ok(len.trailing_zeros() as usize)
    } else {
        Err(Error::ShapeMismatch(format!("length {len} is not a power of two")))
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::CheckUnitary { input, m } => {
            let a = read_matrix(input)?;
            let (n_in, n_out) = qubit_counts(&a)?;
            let v = match check_theorem1(&a, n_in, n_out, *m) {
                Err(Error::NotDyadic) => return Ok(Outcome::No("not in a dyadic cyclotomic field".into())),
                r => r?,
            };
            match v.failure_reason {
                None => Ok(Outcome::Yes(to_value(&v))),
                Some(r) => Ok(Outcome::No(r)),
            }
        }
        Command::CheckState { input, m } => {
            let psi = read_vector(input)?;
            let col = FieldMatrix::from_columns(std::slice::from_ref(&psi))?;
            let (m, col) = match to_dyadic(&col, *m) {
                Err(Error::NotDyadic) => return Ok(Outcome::No("not in a dyadic cyclotomic field".into())),
                r => r?,
            };
            match recognize_state(&col.column(0), m)? {
                Some((c, j)) => Ok(Outcome::Yes(json!({ "m": m, "j": j, "circuit": c }))),
                None => Ok(Outcome::No("not a stabilizer state".into())),
            }
        }
        Command::Synthesize { input, m, oracle } => {
            let a = read_matrix(input)?;
            let (n_in, n_out) = qubit_counts(&a)?;
            let form = match recognize(&a, n_in, n_out, *m) {
                Ok(f) => f,
                Err(Error::NotStabilizerOperator(r)) => return Ok(Outcome::No(r)),
                Err(Error::NotDyadic) => return Ok(Outcome::No("not in a dyadic cyclotomic field".into())),
                Err(e) => return Err(e),
            };
            let mut payload = to_value(&form);
            if *oracle {
                let choi = choi_state(&a, n_in, n_out)?;
                let fast = stabilizer_group(&choi.vector)?;
                let slow = brute_force_stabilizers(&choi.vector)?;
                let agree = slow.len() == 1 << fast.rank() && fast.generators.iter().all(|g| slow.contains(g));
                if !agree {
                    return Err(Error::Internal("stabilizer group disagrees with brute force".into()));
                }
                payload["oracle"] = json!({ "stabilizers": slow.len(), "agree": true });
            }
            Ok(Outcome::Yes(payload))
        }
        Command::Choi { input } => {
            let a = read_matrix(input)?;
            let (n_in, n_out) = qubit_counts(&a)?;
            let c = choi_state(&a, n_in, n_out)?;
            Ok(Outcome::Yes(json!({
                "n_in": n_in,
                "n_out": n_out,
                "state": MatrixFile::from_vector(&c.vector),
            })))
        }
        Command::Minvec { n, m, oracle, cap } => {
            let lat = BwLattice::new(*n, *m)?;
            let max_qubits = cap.map_or(DEFAULT_ENUM_QUBITS, |c| c as usize);
            let set = enumerate_minimal_vectors(&lat, max_qubits)?;
            let mut payload = json!({
                "n": n,
                "m": m,
                "conductor": lat.conductor(),
                "minimum": lat.minimum().to_string(),
                "count": set.len(),
                "vectors": set.values().map(vector_json).collect::<Vec<_>>(),
            });
            if *oracle {
                let brute = brute_force_short_vectors(&lat, &lat.minimum(), cap.unwrap_or(50_000_000))?;
                let agree = brute.keys().eq(set.keys());
                if !agree {
                    return Err(Error::Internal("enumeration disagrees with exhaustive search".into()));
                }
                payload["oracle"] = json!({ "count": brute.len(), "agree": true });
            }
            Ok(Outcome::Yes(payload))
        }
        Command::LatticeMember { input, m } => {
            let v = read_vector(input)?;
            let n = qubits_of(v.len())?;
            let col = FieldMatrix::from_columns(std::slice::from_ref(&v))?;
            let (m, col) = match to_dyadic(&col, *m) {
                Err(Error::NotDyadic) => return Ok(Outcome::No("not in a dyadic cyclotomic field".into())),
                r => r?,
            };
            let v = col.column(0);
            let lat = BwLattice::new(n, m)?;
            let in_lattice = lat.in_lattice(&v)?;
            let in_dual = lat.in_dual(&v)?;
            if in_lattice {
                Ok(Outcome::Yes(json!({
                    "n": n,
                    "m": m,
                    "in_lattice": true,
                    "in_dual": in_dual,
                    "norm": v.trace_norm().to_string(),
                    "coordinates": vector_json(&lat.to_bw_coords(&v)?),
                })))
            } else {
                Ok(Outcome::No(if in_dual { "in the dual lattice only" } else { "not in the lattice" }.into()))
            }
        }
        Command::GroupOrder { group, n, cap } => {
            let b = builtin(&format!("{group}-{n}"))?;
            let o = beyond::group_order(&b.group, cap.unwrap_or(DEFAULT_BFS_CAP))?;
            Ok(Outcome::Yes(json!({
                "group": b.group.name,
                "order": o.mod_center,
                "center_order": o.center_order,
                "full_order": o.full,
            })))
        }
        Command::BeyondMember { group, input } => {
            let b = builtin(group)?;
            let a = read_matrix(input)?;
            let verdict = if a.cols() == 1 && a.rows() > 1 {
                membership_state(&a.column(0), &b.basis)
            } else {
                membership_unitary(&a, &b.basis)
            };
            match verdict.reason {
                None => Ok(Outcome::Yes(json!({ "group": group, "member": true }))),
                Some(r) => Ok(Outcome::No(r)),
            }
        }
        Command::OrbitLattice { group, input, cap } => {
            let b = builtin(group)?;
            let seed = match input {
                Some(p) => read_vector(p)?,
                None => FieldVector::basis(1, b.group.dim, 0),
            };
            let l = orbit_z_lattice(&b.group, &seed, cap.unwrap_or(DEFAULT_ORBIT_CAP))?;
            let tab = b.basis.z_lattice()?;
            Ok(Outcome::Yes(json!({
                "group": group,
                "lattice": l.summary(),
                "equals_basis_change": l == tab,
            })))
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotStabilizerOperator(_) | Error::NotDyadic => 1,
        _ => 2,
    }
}

/// Runs the CLI on `argv` (program name first), returning the exit code and the printed text.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv.iter().skip(1).cloned().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            return (0, e.to_string());
        }
        Err(e) => {
            let env = ResultEnvelope {
                command: echo,
                verdict: "error",
                payload: None,
                failure_reason: Some(e.kind().to_string() + ": " + e.to_string().lines().next().unwrap_or("")),
            };
            return (2, render(&env));
        }
    };
    let (code, env) = match dispatch(&cli.command) {
        Ok(Outcome::Yes(p)) => (
            0,
            ResultEnvelope {
                command: echo,
                verdict: "affirmative",
                payload: Some(p),
                failure_reason: None,
            },
        ),
        Ok(Outcome::No(r)) => (
            1,
            ResultEnvelope {
                command: echo,
                verdict: "negative",
                payload: None,
                failure_reason: Some(r),
            },
        ),
        Err(e) => {
            let code = exit_code(&e);
            (
                code,
                ResultEnvelope {
                    command: echo,
                    verdict: if code == 1 { "negative" } else { "error" },
                    payload: None,
                    failure_reason: Some(e.to_string()),
                },
            )
        }
    };
    (code, render(&env))
}

fn render(env: &ResultEnvelope) -> String {
    serde_json::to_string_pretty(env).expect("envelope serializes")
}
