use clap::Parser;

fn main() {
    let cli = frechet_voronoi::cli::Cli::parse();
    std::process::exit(frechet_voronoi::cli::run(cli));
}
