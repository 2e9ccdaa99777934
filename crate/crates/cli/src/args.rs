use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "avtk",
    version,
    about = "Polarised complex tori with exact period lattices"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Report format; `--report json` is the same as `--json`.
    #[arg(long, global = true, value_enum)]
    pub report: Option<ReportFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

impl Cli {
    pub fn wants_json(&self) -> bool {
        self.json || self.report == Some(ReportFormat::Json)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polarisation type of a torus.
    Type { torus: PathBuf },
    /// Kernel of the polarising isogeny.
    Kernel { torus: PathBuf },
    /// Quotient by the subgroup generated by one or more torsion points.
    Quotient {
        torus: PathBuf,
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symplectic complement of a subgroup inside the polarising kernel.
    Complement { torus: PathBuf, points: PathBuf },
    /// Dual torus of a torus (converted to a standard frame first if needed).
    Dual {
        torus: PathBuf,
        /// Keep the coordinates in the input order instead of sorting divisors.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restricted polarisation on a sublattice.
    Sub { torus: PathBuf, sublattice: PathBuf },
    /// Symmetric idempotent, norm endomorphism and complementary subvariety.
    Idempotent { torus: PathBuf, sublattice: PathBuf },
    /// Basis of Hom(X, Y).
    Hom { x: PathBuf, y: PathBuf },
    /// Bounded search for an isomorphism X -> Y.
    IsomSearch {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value_t = avtk::homs::DEFAULT_BOUND)]
        bound: u32,
        /// Also require the gram matrices to match.
        #[arg(long)]
        polarised: bool,
    },
    /// Bounded search for a principal polarisation H with H Λ_A = Λ_Â.
    PpSearch {
        a: PathBuf,
        a_hat: PathBuf,
        #[arg(long, default_value_t = avtk::gallery::PP_BOUND)]
        bound: u32,
    },
    /// Reduce an imaginary quadratic period and compare E with E/<τ/n>.
    Elliptic(EllipticArgs),
    /// Degree of the isogeny with the given rational representation.
    Degree { matrix: PathBuf },
    /// Replay a worked example; `demo list` names them.
    Demo(DemoArgs),
}

#[derive(Args, Debug)]
pub struct EllipticArgs {
    /// Period such as "(1+sqrt(-3))/2", "sqrt(-2)" or "i".
    #[arg(allow_hyphen_values = true, required_unless_present = "formal")]
    pub tau: Option<String>,
    #[arg(long)]
    pub n: Option<u64>,
    /// Treat the period as the named free generator instead.
    #[arg(long, conflicts_with = "tau")]
    pub formal: Option<String>,
}

#[derive(Args, Debug)]
pub struct DemoArgs {
    /// Demo name, or `list`.
    pub name: String,
    /// Dimension; picks the type (1, .., 1, 3).
    #[arg(long)]
    pub n: Option<usize>,
    /// Polarisation type, e.g. "1,3".
    #[arg(long = "type", value_delimiter = ',')]
    pub ty: Option<Vec<i64>>,
    /// Coefficient bound for the searches.
    #[arg(long)]
    pub bound: Option<u32>,
    /// Largest d in the obstruction table.
    #[arg(long)]
    pub max_d: Option<u64>,
    /// Directory for the documents of the constructed tori.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
