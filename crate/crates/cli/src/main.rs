mod commands;
mod error;
mod options;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "chaos-aes",
    version,
    about = "Chaos-enhanced AES-128 image encryption and QR key distribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt a grayscale image into a cipher container
    Encrypt(commands::EncryptArgs),
    /// Decrypt a cipher container back to an image
    Decrypt(commands::DecryptArgs),
    /// Generate an ElGamal key pair or a random AES key
    Keygen(commands::KeygenArgs),
    /// Build a stego QR carrying a static and a wrapped dynamic key
    Package(commands::PackageArgs),
    /// Recover the dynamic key from a stego QR
    Recover(commands::RecoverArgs),
    /// Compute security metrics
    Analyze(commands::AnalyzeArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encrypt(a) => commands::encrypt(a),
        Command::Decrypt(a) => commands::decrypt(a),
        Command::Keygen(a) => commands::keygen(a),
        Command::Package(a) => commands::package(a),
        Command::Recover(a) => commands::recover(a),
        Command::Analyze(a) => commands::analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chaos-aes: {e}");
            e.exit()
        }
    }
}
