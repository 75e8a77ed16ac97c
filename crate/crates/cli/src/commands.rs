use std::path::{Path, PathBuf};

use chaos_aes::analysis::{ssim, MetricReport};
use chaos_aes::corpus;
use chaos_aes::keydist::{
    elgamal_keygen, receiver_recover, sender_package, DefaultQrCodec, EcLevel, ElGamalParams,
    PackageOptions, PrivateKey, PublicKey, StegoQr,
};
use chaos_aes::pipeline::{decrypt_image, encrypt_image, read_container, write_container};
use chaos_aes::{ChaoticParams, CipherKey, Flags, GrayImage};
use clap::{Args, ValueEnum};
use rand::Rng;
use serde_json::{Map, Value};

use crate::error::{io, CliError, Result};
use crate::options::{
    metric_fields, parse_key_hex, parse_metrics, parse_seeds, read_key_file, reference_key, rng,
    IvMode, KeyArgs, MetricList,
};

/// Decrypted images below this SSIM against the reference draw a warning.
const VERIFY_WARN_SSIM: f64 = 0.9;

#[derive(Args)]
pub struct EncryptArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    key: KeyArgs,
    /// random, paper, or 32 hex characters
    #[arg(long, default_value = "random", value_name = "MODE")]
    iv: IvMode,
    /// Same as --iv paper
    #[arg(long, conflicts_with = "iv")]
    fixed_iv: bool,
    /// Chaotic seed overrides, e.g. mask=0.3,perm=0.6
    #[arg(long, value_parser = parse_seeds, value_name = "LIST")]
    seeds: Option<ChaoticParams>,
    #[arg(long)]
    post_shuffle: bool,
    /// RNG seed for the IV and metric sampling
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Print these metrics for the encryption (comma list or "all")
    #[arg(long, value_parser = parse_metrics, value_name = "LIST")]
    metrics: Option<MetricList>,
}

#[derive(Args)]
pub struct DecryptArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    key: KeyArgs,
    #[arg(long, value_parser = parse_seeds, value_name = "LIST")]
    seeds: Option<ChaoticParams>,
    /// Compare the result with this image and report SSIM
    #[arg(long, value_name = "IMAGE")]
    verify_against: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Modp2048,
    Test64,
}

#[derive(Args)]
pub struct KeygenArgs {
    /// Print a random AES-128 key instead of an ElGamal pair
    #[arg(long, conflicts_with_all = ["group", "private", "public"])]
    aes: bool,
    /// Write the raw AES key here as well
    #[arg(long, requires = "aes", value_name = "PATH")]
    key_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "modp2048")]
    group: Group,
    #[arg(long, value_name = "PATH", required_unless_present = "aes")]
    private: Option<PathBuf>,
    #[arg(long, value_name = "PATH", required_unless_present = "aes")]
    public: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

#[derive(Args)]
pub struct PackageArgs {
    /// Static key, 32 hex characters or a 16-byte file
    #[arg(long, value_name = "KEY")]
    static_key: String,
    /// Dynamic key, 32 hex characters or a 16-byte file; random if omitted
    #[arg(long, value_name = "KEY")]
    dynamic_key: Option<String>,
    /// Recipient's ElGamal public key (JSON)
    #[arg(long, value_name = "PATH")]
    public: PathBuf,
    /// Stego QR image to write
    #[arg(short, long)]
    output: PathBuf,
    /// Also write the QR without the hidden hint
    #[arg(long, value_name = "PATH")]
    clean_output: Option<PathBuf>,
    #[arg(long)]
    meta: Option<String>,
    #[arg(long, default_value = "H", value_name = "L|M|Q|H")]
    ec: EcLevel,
    #[arg(long, default_value_t = 8, value_name = "PX")]
    module_size: usize,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

#[derive(Args)]
pub struct RecoverArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Recipient's ElGamal private key (JSON)
    #[arg(long, value_name = "PATH")]
    private: PathBuf,
    /// Also print the static key and hint on stderr
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Plain images to analyze
    inputs: Vec<PathBuf>,
    /// Run the reference configuration over the generated corpus
    #[arg(long, conflicts_with_all = ["inputs", "key", "key_file", "iv", "seeds", "post_shuffle"])]
    reproduce_paper: bool,
    #[command(flatten)]
    key: KeyArgs,
    #[arg(long, default_value = "paper", value_name = "MODE")]
    iv: IvMode,
    #[arg(long, value_parser = parse_seeds, value_name = "LIST")]
    seeds: Option<ChaoticParams>,
    #[arg(long)]
    post_shuffle: bool,
    #[arg(long, value_parser = parse_metrics, value_name = "LIST")]
    metrics: Option<MetricList>,
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "N", default_value_t = 2024)]
    seed: u64,
}

fn load_image(path: &Path) -> Result<GrayImage> {
    GrayImage::load(path).map_err(|e| match e {
        chaos_aes::ImageError::Io(e) => io(path, e),
        other => CliError::Format(format!("{}: {other}", path.display())),
    })
}

fn save_image(img: &GrayImage, path: &Path) -> Result<()> {
    img.save(path).map_err(|e| match e {
        chaos_aes::ImageError::Io(e) => io(path, e),
        other => CliError::Format(format!("{}: {other}", path.display())),
    })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| io(path, e))
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| io(path, e))
}

/// Hex first, then a 16-byte file.
fn key_or_file(s: &str) -> Result<CipherKey> {
    if s.len() == 32 && s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return parse_key_hex(s);
    }
    let path = Path::new(s);
    if path.exists() {
        return read_key_file(path);
    }
    Err(CliError::Usage(format!(
        "{s:?} is neither 32 hex characters nor a key file"
    )))
}

fn select(report: &MetricReport, metrics: &[String]) -> Map<String, Value> {
    let full = serde_json::to_value(report).expect("report serializes");
    let mut out = Map::new();
    for m in metrics {
        for &field in metric_fields(m) {
            out.insert(field.to_string(), full[field].clone());
        }
    }
    out
}

fn print_selection(sel: &Map<String, Value>) {
    for (k, v) in sel {
        println!("{k:<18} {v}");
    }
}

pub fn encrypt(a: EncryptArgs) -> Result<()> {
    let key = a.key.resolve(None)?;
    let params = a.seeds.unwrap_or_default();
    let flags = Flags {
        post_shuffle: a.post_shuffle,
    };
    let mut rng = rng(a.seed);
    let iv = if a.fixed_iv { IvMode::Paper } else { a.iv }.resolve(&mut rng);

    let img = load_image(&a.input)?;
    let c = encrypt_image(&img, &key, iv, &params, flags)?;
    write_file(&a.output, write_container(&c))?;
    eprintln!(
        "encrypted {}x{} with IV {}",
        img.width(),
        img.height(),
        hex::encode(iv)
    );

    if let Some(metrics) = a.metrics {
        let report = MetricReport::compute(&img, &key, iv, &params, flags, &mut rng)?;
        print_selection(&select(&report, &metrics.0));
    }
    Ok(())
}

pub fn decrypt(a: DecryptArgs) -> Result<()> {
    let key = a.key.resolve(None)?;
    let params = a.seeds.unwrap_or_default();
    let bytes = std::fs::read(&a.input).map_err(|e| io(&a.input, e))?;
    let c = read_container(&bytes)?;
    let img = decrypt_image(&c, &key, &params)?;
    save_image(&img, &a.output)?;

    if let Some(reference) = a.verify_against {
        let want = load_image(&reference)?;
        let s = ssim(&want, &img)?;
        println!("ssim {s:.6}");
        if s < VERIFY_WARN_SSIM {
            eprintln!(
                "warning: SSIM {s:.4} against {} is low; the key or seeds are probably wrong",
                reference.display()
            );
        }
    }
    Ok(())
}

pub fn keygen(a: KeygenArgs) -> Result<()> {
    let mut rng = rng(a.seed);
    if a.aes {
        let key = CipherKey(rng.gen());
        if let Some(path) = &a.key_out {
            write_file(path, key.0)?;
        }
        println!("{}", key.to_hex());
        return Ok(());
    }
    let params = match a.group {
        Group::Modp2048 => ElGamalParams::modp_2048(),
        Group::Test64 => ElGamalParams::test_64(),
    };
    let kp = elgamal_keygen(&params, &mut rng);
    let (private, public) = (
        a.private.expect("required by clap"),
        a.public.expect("required by clap"),
    );
    write_file(&private, kp.private.to_json())?;
    write_file(&public, kp.public.to_json())?;
    eprintln!("wrote {} and {}", private.display(), public.display());
    Ok(())
}

pub fn package(a: PackageArgs) -> Result<()> {
    let mut rng = rng(a.seed);
    let static_key = key_or_file(&a.static_key)?;
    let dynamic_key = match &a.dynamic_key {
        Some(s) => key_or_file(s)?,
        None => CipherKey(rng.gen()),
    };
    let public = PublicKey::from_json(&read_text(&a.public)?)?;
    let options = PackageOptions {
        ec_level: a.ec,
        module_pixel_size: a.module_size,
        ..PackageOptions::default()
    };
    let pkg = sender_package(
        &static_key,
        &dynamic_key,
        &public,
        &DefaultQrCodec,
        &options,
        a.meta,
        &mut rng,
    )?;
    save_image(&pkg.stego.0, &a.output)?;
    if let Some(path) = &a.clean_output {
        save_image(&pkg.clean_qr, path)?;
    }
    println!("{}", dynamic_key.to_hex());
    Ok(())
}

pub fn recover(a: RecoverArgs) -> Result<()> {
    let qr = StegoQr(load_image(&a.input)?);
    let private = PrivateKey::from_json(&read_text(&a.private)?)?;
    let r = receiver_recover(&qr, &private, &DefaultQrCodec)?;
    if a.verbose {
        eprintln!("static key {}", r.static_key.to_hex());
        eprintln!("hint {:?} -> bit {}", r.hint.as_str(), r.hint.position());
    }
    println!("{}", r.dynamic_key.to_hex());
    Ok(())
}

/// Published values for the Lena row, used as the reference column.
const PAPER_REFERENCE: [(&str, f64); 6] = [
    ("entropy", 7.9976),
    ("npcr", 99.62),
    ("uaci", 49.91),
    ("mse", 0.0),
    ("homogeneity", 0.3901),
    ("energy", 0.0039),
];

pub fn analyze(a: AnalyzeArgs) -> Result<()> {
    let metrics = match &a.metrics {
        Some(list) => list.0.clone(),
        None => crate::options::METRICS
            .iter()
            .map(|m| m.to_string())
            .collect(),
    };
    let mut rng = rng(Some(a.seed));

    let (images, key, iv, params, flags): (Vec<(String, GrayImage)>, _, _, _, _) =
        if a.reproduce_paper {
            let images = corpus::standard()
                .into_iter()
                .map(|(kind, img)| (kind.to_string(), img))
                .collect();
            (
                images,
                reference_key(),
                IvMode::Paper.resolve(&mut rng),
                ChaoticParams::default(),
                Flags::default(),
            )
        } else {
            if a.inputs.is_empty() {
                return Err(CliError::Usage(
                    "give image paths or --reproduce-paper".into(),
                ));
            }
            let images = a
                .inputs
                .iter()
                .map(|p| Ok((p.display().to_string(), load_image(p)?)))
                .collect::<Result<Vec<_>>>()?;
            let key = a.key.resolve(Some(reference_key()))?;
            let iv = a.iv.resolve(&mut rng);
            (
                images,
                key,
                iv,
                a.seeds.unwrap_or_default(),
                Flags {
                    post_shuffle: a.post_shuffle,
                },
            )
        };

    let mut rows = Vec::new();
    for (name, img) in &images {
        let report = MetricReport::compute(img, &key, iv, &params, flags, &mut rng)?;
        rows.push((name.clone(), select(&report, &metrics)));
    }

    if a.json {
        let mut out = Map::new();
        for (name, sel) in &rows {
            out.insert(name.clone(), Value::Object(sel.clone()));
        }
        if a.reproduce_paper {
            let reference: Map<String, Value> = PAPER_REFERENCE
                .iter()
                .map(|(k, v)| (k.to_string(), Value::from(*v)))
                .collect();
            out.insert("reference".into(), Value::Object(reference));
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&Value::Object(out)).expect("json")
        );
        return Ok(());
    }

    for (name, sel) in &rows {
        println!("== {name}");
        print_selection(sel);
    }
    if a.reproduce_paper {
        println!("== reference (published, Lena)");
        for (k, v) in PAPER_REFERENCE {
            if metrics.iter().any(|m| m == k) {
                println!("{k:<18} {v}");
            }
        }
        println!("{:<18} inf", "psnr");
    }
    Ok(())
}
