//! Command-line surface.

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "k3stab",
    version,
    about = "Exact computations in the half-plane model of a degree-2d rank-1 K3 lattice",
    max_term_width = 100
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Degree parameter d (L^2 = 2d)
    #[arg(long, global = true, default_value_t = 1)]
    pub d: i64,

    /// Rank bound for enumerations
    #[arg(long, global = true, default_value_t = 10)]
    pub rmax: i64,

    /// Output format
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv", "svg"])]
    pub format: String,

    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    pub out: Option<String>,

    /// Relative tolerance for the floating distance checks
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tolerance: f64,

    /// Seed for randomized check populations
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,

    /// Use the printed region diameter 1/d + r/d instead of 1/r + r/d
    #[arg(long = "paper-printed-B", alias = "paper-printed-b", global = true)]
    pub paper_printed_b: bool,

    /// Use the printed disk height 1/r instead of the exact 1/r^2
    #[arg(long = "paper-printed-disk", global = true)]
    pub paper_printed_disk: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spherical class enumeration
    #[command(subcommand)]
    Spherical(SphericalCmd),

    /// Induced half-plane maps
    #[command(subcommand)]
    Map(MapCmd),

    /// Wall geodesics
    #[command(subcommand)]
    Walls(WallsCmd),

    /// Bounded region of a primitive isotropic class, with optional
    /// containment sweep
    Region(RegionArgs),

    /// Large-volume ray with exact disjointness certificate
    Path(PathArgs),

    /// Twist-image disk of a spherical class, with optional spherical scan
    Disk(DiskArgs),

    /// Word calculus in the loop group
    #[command(subcommand)]
    Deck(DeckCmd),

    /// Run the whole verification battery
    Verify(VerifyArgs),

    /// Emit a deterministic SVG figure with a CSV twin
    Plot(PlotArgs),
}

#[derive(Debug, Subcommand)]
pub enum SphericalCmd {
    /// Enumerate spherical classes in a slope window
    Enum(SphericalEnumArgs),
}

#[derive(Debug, Args)]
pub struct SphericalEnumArgs {
    /// Lower slope bound, as p/q
    #[arg(long, default_value = "-2", allow_hyphen_values = true)]
    pub xmin: String,
    /// Upper slope bound, as p/q
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    pub xmax: String,
}

#[derive(Debug, Subcommand)]
pub enum MapCmd {
    /// The map induced by the twist in a spherical class
    Twist(MapTwistArgs),
}

#[derive(Debug, Args)]
pub struct MapTwistArgs {
    /// Spherical class r,n,s
    #[arg(long, allow_hyphen_values = true)]
    pub delta: String,
    /// Apply the map to the point (X, T)
    #[arg(long, num_args = 2, value_names = ["X", "T"], allow_hyphen_values = true)]
    pub apply: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum WallsCmd {
    /// One wall with its four marked points
    Show(WallsShowArgs),
    /// All walls against one isotropic class, over enumerated spherical
    /// classes
    Scan(WallsScanArgs),
}

#[derive(Debug, Args)]
pub struct WallsShowArgs {
    /// Spherical class r,n,s
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: String,
    /// Primitive isotropic class r,n,s with positive rank
    #[arg(long = "E", allow_hyphen_values = true)]
    pub e: String,
}

#[derive(Debug, Args)]
pub struct WallsScanArgs {
    /// Primitive isotropic class r,n,s with positive rank
    #[arg(long = "E", allow_hyphen_values = true)]
    pub e: String,
    /// Also write an SVG figure (CSV twin lands next to it)
    #[arg(long)]
    pub svg: Option<String>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Primitive isotropic class r,n,s with positive rank
    #[arg(long, allow_hyphen_values = true)]
    pub v0: String,
    /// Sweep every enumerated wall segment and verify containment
    #[arg(long)]
    pub check: bool,
    /// Exact samples per segment during the sweep
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    /// Primitive isotropic class r,n,s with positive rank
    #[arg(long, allow_hyphen_values = true)]
    pub v0: String,
}

#[derive(Debug, Args)]
pub struct DiskArgs {
    /// Spherical class r,n,s
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: String,
    /// Scan spherical points up to this rank against the disk
    #[arg(long = "scan-spherical")]
    pub scan_spherical: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum DeckCmd {
    /// Reduce a word to normal form and push it through the monodromy
    Reduce(DeckReduceArgs),
}

#[derive(Debug, Args)]
pub struct DeckReduceArgs {
    /// Word as whitespace-separated label:exp tokens; `g` is central
    #[arg(long)]
    pub word: String,
    /// JSON file mapping labels to [d, r, n, s]
    #[arg(long)]
    pub alphabet: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Override the containment targets with one crafted class r,n,s
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<String>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Figure kind
    #[arg(long, value_parser = ["spherical", "boundary", "walls", "region", "disk"])]
    pub what: String,
    /// Spherical class r,n,s (disk plots)
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Isotropic class r,n,s (walls plots)
    #[arg(long = "E", allow_hyphen_values = true)]
    pub e: Option<String>,
    /// Isotropic class r,n,s (region plots)
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<String>,
    /// Lower x bound, as p/q
    #[arg(long, default_value = "-2", allow_hyphen_values = true)]
    pub xmin: String,
    /// Upper x bound, as p/q
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    pub xmax: String,
}
