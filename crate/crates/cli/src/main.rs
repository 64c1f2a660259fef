//! `arb`: describe, index, match, deform and benchmark binary silhouettes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use arb_core::arb::{ArbConfig, OrientationMode, WeightMode};
use arb_core::baselines::DEFAULT_RETAINED;
use arb_core::bench::{
    projection_rows, run_accuracy, run_timing, write_accuracy_csv, write_projection_csv, write_timing_csv,
};
use arb_core::deform::{apply, DeformKind, DeformationSpec, Variant};
use arb_core::imgio::{
    generate_synthetic_dataset, load_dataset, load_image, resize_to, write_pgm, DEFAULT_SIZE, DEFAULT_THRESHOLD,
};
use arb_core::matching::DescriptorIndex;
use arb_core::method::Method;
use arb_core::serial::write_descriptor;
use arb_core::{BinaryImage, Dataset};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "arb", version, about = "Angular radial bins shape matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the descriptor of one image.
    Describe {
        image: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Descriptor file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe every image of a dataset directory and store the index.
    Index {
        dataset: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank the entries of an index by distance to a query image.
    Match {
        query: PathBuf,
        #[arg(long)]
        index: PathBuf,
        #[arg(short, long, default_value_t = 5)]
        k: usize,
        /// Method flags, if given, must agree with the index.
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Apply one deformation to an image and write it as PGM.
    Deform {
        image: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: DeformKind,
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// up/down/left/right/single; defaults to the first variant of the kind.
        #[arg(long, value_parser = parse_variant)]
        variant: Option<Variant>,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic gesture-like dataset as PGM files.
    GenDataset {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SIZE)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the deformation-accuracy and/or timing protocols.
    Bench(BenchArgs),
}

#[derive(Args, Clone, Default)]
struct MethodArgs {
    /// arb-simple, arb-overlap, arb-accum, fd-cc, fd-cd or hausdorff.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(Method::TAGS))]
    method: Option<String>,
    #[arg(long)]
    rings: Option<usize>,
    #[arg(long)]
    width_deg: Option<u32>,
    #[arg(long, value_parser = parse_weight)]
    weight: Option<WeightMode>,
    #[arg(long)]
    delta_deg: Option<f64>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long, value_parser = parse_orient)]
    orient: Option<OrientationMode>,
    /// Fourier coefficients kept by fd-cc / fd-cd.
    #[arg(long)]
    fd_k: Option<usize>,
}

#[derive(Args, Clone, Copy)]
struct InputArgs {
    /// Gray levels above this value are foreground.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: u8,
    /// Images are resized to size x size.
    #[arg(long, default_value_t = DEFAULT_SIZE)]
    size: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset directory of images.
    #[arg(long, conflicts_with = "synthetic")]
    dataset: Option<PathBuf>,
    /// Generate this many synthetic shapes instead of reading a dataset.
    #[arg(long)]
    synthetic: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repeatable; defaults to arb-simple, arb-accum, arb-overlap, fd-cc, fd-cd.
    #[arg(long = "method", value_parser = clap::builder::PossibleValuesParser::new(Method::TAGS))]
    methods: Vec<String>,
    #[command(flatten)]
    config: ConfigArgs,
    /// Comma-separated deformation kinds; all six by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    kinds: Vec<DeformKind>,
    #[arg(long, default_value_t = 3)]
    levels: u32,
    /// Run the timing protocol (accuracy is then skipped unless --kinds is given).
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = 100)]
    train_iters: u64,
    #[arg(long, default_value_t = 10000)]
    match_iters: u64,
    /// Dataset sizes for the retrieval-time projection.
    #[arg(long, value_delimiter = ',', default_values_t = [2000u64, 50000])]
    sizes: Vec<u64>,
    #[command(flatten)]
    input: InputArgs,
    /// Output directory for the CSV reports.
    #[arg(long)]
    out: PathBuf,
}

/// The method flags minus `--method`, shared by every benchmarked method.
#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    rings: Option<usize>,
    #[arg(long)]
    width_deg: Option<u32>,
    #[arg(long, value_parser = parse_weight)]
    weight: Option<WeightMode>,
    #[arg(long)]
    delta_deg: Option<f64>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long, value_parser = parse_orient)]
    orient: Option<OrientationMode>,
    #[arg(long)]
    fd_k: Option<usize>,
}

fn parse_weight(s: &str) -> Result<WeightMode, String> {
    s.parse().map_err(|e: arb_core::Error| e.to_string())
}

fn parse_orient(s: &str) -> Result<OrientationMode, String> {
    s.parse().map_err(|e: arb_core::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<DeformKind, String> {
    s.parse().map_err(|e: arb_core::Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: arb_core::Error| e.to_string())
}

impl MethodArgs {
    fn is_empty(&self) -> bool {
        self.method.is_none()
            && self.rings.is_none()
            && self.width_deg.is_none()
            && self.weight.is_none()
            && self.delta_deg.is_none()
            && self.instances.is_none()
            && self.orient.is_none()
            && self.fd_k.is_none()
    }

    fn config(&self) -> ArbConfig {
        let d = ArbConfig::default();
        ArbConfig {
            rings: self.rings.unwrap_or(d.rings),
            angular_width_deg: self.width_deg.unwrap_or(d.angular_width_deg),
            weight_mode: self.weight.unwrap_or(d.weight_mode),
            tilt_delta_deg: self.delta_deg.unwrap_or(d.tilt_delta_deg),
            instances: self.instances.unwrap_or(d.instances),
            orientation_mode: self.orient.unwrap_or(d.orientation_mode),
        }
    }

    fn resolve(&self) -> Result<Method> {
        let tag = self.method.as_deref().unwrap_or("arb-accum");
        Ok(Method::from_tag(tag, self.config(), self.fd_k.unwrap_or(DEFAULT_RETAINED))?)
    }
}

impl ConfigArgs {
    fn with_tag(&self, tag: &str) -> MethodArgs {
        MethodArgs {
            method: Some(tag.to_string()),
            rings: self.rings,
            width_deg: self.width_deg,
            weight: self.weight,
            delta_deg: self.delta_deg,
            instances: self.instances,
            orient: self.orient,
            fd_k: self.fd_k,
        }
    }
}

fn read_image(path: &Path, input: InputArgs) -> Result<BinaryImage> {
    let img = load_image(path, input.threshold).with_context(|| format!("reading {}", path.display()))?;
    if img.width() == input.size && img.height() == input.size {
        return Ok(img);
    }
    Ok(resize_to(&img, input.size, input.size)?)
}

fn read_dataset(dir: &Path, input: InputArgs) -> Result<Dataset> {
    load_dataset(dir, input.threshold, input.size, input.size)
        .with_context(|| format!("reading dataset {}", dir.display()))
}

fn describe(image: &Path, method: &Method, input: InputArgs) -> Result<Vec<f64>> {
    let img = read_image(image, input)?;
    method
        .describe(&img)
        .with_context(|| format!("describing {}", image.display()))
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let dataset = match (&args.dataset, args.synthetic) {
        (Some(dir), None) => read_dataset(dir, args.input)?,
        (None, Some(n)) => generate_synthetic_dataset(n, args.input.size, args.input.size, args.seed)?,
        _ => bail!("bench needs exactly one of --dataset or --synthetic"),
    };
    let tags: Vec<String> = if args.methods.is_empty() {
        ["arb-simple", "arb-accum", "arb-overlap", "fd-cc", "fd-cd"].map(String::from).to_vec()
    } else {
        args.methods.clone()
    };
    let methods = tags
        .iter()
        .map(|t| args.config.with_tag(t).resolve())
        .collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;

    let run_accuracy_suite = !args.timing || !args.kinds.is_empty();
    if run_accuracy_suite {
        let kinds = if args.kinds.is_empty() { DeformKind::ALL.to_vec() } else { args.kinds.clone() };
        let mut reports = Vec::new();
        for m in &methods {
            let r = run_accuracy(&dataset, m, &kinds, args.levels)?;
            println!("{m}");
            for k in &kinds {
                let levels: Vec<String> = r
                    .rows
                    .iter()
                    .filter(|row| row.kind == k.token())
                    .map(|row| row.error_percent.map_or("-".into(), |e| format!("{e:.2}")))
                    .collect();
                println!("  {:<12} {}", k.token(), levels.join(" "));
            }
            reports.push(r);
        }
        let path = args.out.join("accuracy.csv");
        write_accuracy_csv(&path, &reports)?;
        println!("wrote {}", path.display());
    }

    if args.timing {
        let mut reports = Vec::new();
        for m in &methods {
            let r = run_timing(&dataset, m, args.train_iters, args.match_iters)?;
            println!(
                "{m}: train {:.3} ms/image, match {:.4} us/pair",
                r.train_mean_s * 1e3,
                r.match_mean_s * 1e6
            );
            reports.push(r);
        }
        let timing = args.out.join("timing.csv");
        write_timing_csv(&timing, &reports)?;
        let projection = args.out.join("projection.csv");
        write_projection_csv(&projection, &projection_rows(&reports, &args.sizes))?;
        println!("wrote {} and {}", timing.display(), projection.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Describe { image, method, input, out } => {
            let method = method.resolve()?;
            let values = describe(&image, &method, input)?;
            let text = write_descriptor(&method, &values)?;
            match out {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => std::io::stdout().write_all(text.as_bytes())?,
            }
        }
        Command::Index { dataset, method, input, out } => {
            let method = method.resolve()?;
            let ds = read_dataset(&dataset, input)?;
            let index = DescriptorIndex::build(&ds, &method)?;
            index.save(&out)?;
            println!("indexed {} images with {method} into {}", index.len(), out.display());
        }
        Command::Match { query, index, k, method, input } => {
            let index = DescriptorIndex::load(&index).with_context(|| format!("loading index {}", index.display()))?;
            let indexed = *index.method();
            if !method.is_empty() {
                let requested = method.resolve()?;
                ensure!(
                    requested == indexed,
                    "query method `{requested}` does not match index method `{indexed}`"
                );
            }
            let values = describe(&query, &indexed, input)?;
            for (rank, (id, d)) in index.nearest(&values, k)?.into_iter().enumerate() {
                println!("{},{id},{d}", rank + 1);
            }
        }
        Command::Deform { image, kind, level, variant, input, out } => {
            let variant = variant.unwrap_or(kind.variants()[0]);
            let spec = DeformationSpec::new(kind, level, variant)?;
            let img = read_image(&image, input)?;
            let deformed = apply(&img, &spec).with_context(|| format!("deforming {} by {spec}", image.display()))?;
            write_pgm(&deformed, &out)?;
        }
        Command::GenDataset { n, seed, size, out } => {
            let ds = generate_synthetic_dataset(n, size, size, seed)?;
            ds.write_dir(&out)?;
            println!("wrote {} images to {}", ds.len(), out.display());
        }
        Command::Bench(args) => cmd_bench(args)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
