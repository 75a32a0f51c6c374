//! CLI layer over `k3stab-core`: argument parsing, the verification battery,
//! deterministic figure emission and JSON/CSV wire formats.

pub mod cli;
pub mod commands;
pub mod parse;
pub mod plot;
pub mod verify;

use clap::Parser;

/// Parses arguments and dispatches; returns the process exit code.
pub fn run() -> anyhow::Result<i32> {
    let args = cli::Cli::parse();
    dispatch(&args)
}

pub fn dispatch(args: &cli::Cli) -> anyhow::Result<i32> {
    use cli::*;
    let g = &args.global;
    match &args.command {
        Command::Spherical(SphericalCmd::Enum(a)) => commands::spherical_enum(g, a),
        Command::Map(MapCmd::Twist(a)) => commands::map_twist(g, a),
        Command::Walls(WallsCmd::Show(a)) => commands::walls_show(g, a),
        Command::Walls(WallsCmd::Scan(a)) => commands::walls_scan(g, a),
        Command::Region(a) => commands::region(g, a),
        Command::Path(a) => commands::path(g, a),
        Command::Disk(a) => commands::disk(g, a),
        Command::Deck(DeckCmd::Reduce(a)) => commands::deck_reduce(g, a),
        Command::Verify(a) => commands::verify(g, a),
        Command::Plot(a) => commands::plot(g, a),
    }
}
