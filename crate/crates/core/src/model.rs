//! Domain types and the random generator for symmetric latent space model
//! instances.
//!
//! An instance has n nodes with hidden balanced ±1 labels y*, latent vectors
//! x_i ~ N_d(y*_i mu, sigma^2 I) with mu = mu_norm * e_1, and an undirected
//! graph where each pair {i,j} links independently with probability
//! f(x_i, x_j).

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, tag};

/// Edge-probability kernel. Only the squared-exponential kernel has
/// closed-form moments; everything else goes through the Monte-Carlo
/// estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Kernel {
    /// f(x, x') = exp(-||x - x'||^2)
    SquaredExponential,
    /// f(x, x') = scale * exp(-||x - x'||^2). A scale above 1 leaves the
    /// [0, 1] range near x = x' and is rejected when sampling edges.
    ScaledSquaredExponential { scale: f64 },
}

impl Kernel {
    pub fn eval(&self, x: &[f64], xp: &[f64]) -> f64 {
        let d2: f64 = x.iter().zip(xp).map(|(a, b)| (a - b) * (a - b)).sum();
        match self {
            Kernel::SquaredExponential => (-d2).exp(),
            Kernel::ScaledSquaredExponential { scale } => scale * (-d2).exp(),
        }
    }

    pub fn has_closed_form_moments(&self) -> bool {
        matches!(self, Kernel::SquaredExponential)
    }

    /// Sample a handful of latent pairs and verify symmetry and range,
    /// including the zero-distance pair where scaled kernels peak.
    pub fn spot_check(&self, d: usize) -> Result<()> {
        let mut rng = rng::stream(0, &[tag::KERNEL_CHECK]);
        let pair = |x: &[f64], y: &[f64]| -> Result<()> {
            let fxy = self.eval(x, y);
            let fyx = self.eval(y, x);
            if !(0.0..=1.0).contains(&fxy) || !fxy.is_finite() {
                return Err(Error::KernelRange {
                    kernel: self.to_string(),
                    value: fxy,
                });
            }
            if (fxy - fyx).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "kernel {self} is not symmetric: f(x,y)={fxy}, f(y,x)={fyx}"
                )));
            }
            Ok(())
        };
        let zero = vec![0.0; d];
        pair(&zero, &zero)?;
        for _ in 0..32 {
            let x: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let y: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            pair(&x, &y)?;
        }
        Ok(())
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::SquaredExponential => write!(f, "squared-exponential"),
            Kernel::ScaledSquaredExponential { scale } => {
                write!(f, "scaled-squared-exponential(scale={scale})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub d: usize,
    pub mu_norm: f64,
    pub sigma: f64,
    #[serde(default = "default_kernel")]
    pub kernel: Kernel,
}

fn default_kernel() -> Kernel {
    Kernel::SquaredExponential
}

impl ModelParams {
    pub fn new(n: usize, d: usize, mu_norm: f64, sigma: f64) -> Result<Self> {
        Self::with_kernel(n, d, mu_norm, sigma, Kernel::SquaredExponential)
    }

    pub fn with_kernel(
        n: usize,
        d: usize,
        mu_norm: f64,
        sigma: f64,
        kernel: Kernel,
    ) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "n must be even and at least 4, got {n}"
            )));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        if !(mu_norm >= 0.0) || !mu_norm.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mu_norm must be nonnegative and finite, got {mu_norm}"
            )));
        }
        if let Kernel::ScaledSquaredExponential { scale } = kernel {
            if !(scale > 0.0) || !scale.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "kernel scale must be positive and finite, got {scale}"
                )));
            }
        }
        kernel.spot_check(d)?;
        Ok(Self {
            n,
            d,
            mu_norm,
            sigma,
            kernel,
        })
    }

    /// The mean vector mu = mu_norm * e_1 (any fixed direction is equivalent
    /// by isotropy; the first axis is pinned for reproducibility).
    pub fn mu(&self) -> Array1<f64> {
        let mut mu = Array1::zeros(self.d);
        mu[0] = self.mu_norm;
        mu
    }
}

/// A vector of ±1 labels. Model ground truth is balanced (entries sum to
/// zero); candidates produced by rounding or enumeration need not be, so the
/// two constructors enforce different invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct LabelVector(Vec<i8>);

impl LabelVector {
    /// Any ±1 vector.
    pub fn signs(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty label vector".into()));
        }
        if let Some(bad) = entries.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidInput(format!(
                "labels must be +1 or -1, got {bad}"
            )));
        }
        Ok(Self(entries))
    }

    /// A ±1 vector with equally many entries of each sign.
    pub fn balanced(entries: Vec<i8>) -> Result<Self> {
        let v = Self::signs(entries)?;
        if !v.is_balanced() {
            return Err(Error::InvalidInput(format!(
                "labels must be balanced, entries sum to {}",
                v.0.iter().map(|&x| i64::from(x)).sum::<i64>()
            )));
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_balanced(&self) -> bool {
        self.0.iter().map(|&x| i64::from(x)).sum::<i64>() == 0
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, i8> {
        self.0.iter()
    }

    pub fn to_f64(&self) -> Array1<f64> {
        self.0.iter().map(|&x| f64::from(x)).collect()
    }

    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|&x| -x).collect())
    }

    /// Global sign normalized so entry 0 is +1.
    pub fn normalized(&self) -> Self {
        if self.0[0] == 1 {
            self.clone()
        } else {
            self.flipped()
        }
    }

    /// Number of positions where the two vectors agree.
    pub fn agreement(&self, other: &LabelVector) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "label vectors of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self.iter().zip(other.iter()).filter(|(a, b)| a == b).count())
    }

    /// Match fraction maximized over the global sign flip; always in [0.5, 1].
    pub fn accuracy_vs(&self, truth: &LabelVector) -> Result<f64> {
        let agree = self.agreement(truth)?;
        let n = self.len();
        Ok(agree.max(n - agree) as f64 / n as f64)
    }
}

impl std::ops::Index<usize> for LabelVector {
    type Output = i8;
    fn index(&self, i: usize) -> &i8 {
        &self.0[i]
    }
}

impl TryFrom<Vec<i8>> for LabelVector {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        LabelVector::signs(v)
    }
}

impl From<LabelVector> for Vec<i8> {
    fn from(v: LabelVector) -> Vec<i8> {
        v.0
    }
}

/// One sampled instance together with everything that generated it.
#[derive(Clone, Debug)]
pub struct LsmInstance {
    pub params: ModelParams,
    pub seed: u64,
    pub labels: LabelVector,
    pub latents: Array2<f64>,
    pub adjacency: Array2<u8>,
}

impl LsmInstance {
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|&x| usize::from(x)).sum::<usize>() / 2
    }
}

/// Uniform draw from the balanced label vectors.
///
/// The model proper requires n >= 4, but the sampler accepts any positive
/// even n (n = 2 has exactly two outcomes and is exercised in tests).
pub fn sample_labels<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<LabelVector> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "label count must be positive and even, got {n}"
        )));
    }
    let mut v: Vec<i8> = vec![1; n / 2];
    v.extend(std::iter::repeat(-1).take(n / 2));
    v.shuffle(rng);
    LabelVector::balanced(v)
}

/// Latent matrix with row i ~ N_d(y_i mu, sigma^2 I). Rows are filled in
/// order, coordinates within a row in order, one normal draw each.
pub fn sample_latents<R: Rng + ?Sized>(
    labels: &LabelVector,
    params: &ModelParams,
    rng: &mut R,
) -> Result<Array2<f64>> {
    if labels.len() != params.n {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for n = {}",
            labels.len(),
            params.n
        )));
    }
    let mut x = Array2::zeros((params.n, params.d));
    for i in 0..params.n {
        let yi = f64::from(labels[i]);
        for k in 0..params.d {
            let mean = if k == 0 { yi * params.mu_norm } else { 0.0 };
            let z: f64 = rng.sample(StandardNormal);
            x[[i, k]] = mean + params.sigma * z;
        }
    }
    Ok(x)
}

/// Bernoulli edges: one uniform draw per unordered pair, row-major over the
/// upper triangle, so the stream consumption is independent of the kernel
/// values. Every kernel evaluation is range-checked.
pub fn sample_adjacency<R: Rng + ?Sized>(
    latents: &Array2<f64>,
    kernel: &Kernel,
    rng: &mut R,
) -> Result<Array2<u8>> {
    let n = latents.nrows();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 nodes, got {n}"
        )));
    }
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        let xi = latents.row(i);
        for j in (i + 1)..n {
            let f = kernel.eval(
                xi.as_slice().expect("row of a standard-layout matrix"),
                latents.row(j).as_slice().expect("row"),
            );
            if !(0.0..=1.0).contains(&f) || !f.is_finite() {
                return Err(Error::KernelRange {
                    kernel: kernel.to_string(),
                    value: f,
                });
            }
            let u: f64 = rng.random();
            if u < f {
                a[[i, j]] = 1;
                a[[j, i]] = 1;
            }
        }
    }
    Ok(a)
}

/// Sample a full instance. The master seed splits into independent label /
/// latent / edge streams, so e.g. regenerating with a different kernel keeps
/// the same labels and latents.
pub fn generate(params: &ModelParams, seed: u64) -> Result<LsmInstance> {
    let labels = sample_labels(params.n, &mut rng::stream(seed, &[tag::LABELS]))?;
    let latents = sample_latents(&labels, params, &mut rng::stream(seed, &[tag::LATENTS]))?;
    let adjacency = sample_adjacency(
        &latents,
        &params.kernel,
        &mut rng::stream(seed, &[tag::EDGES]),
    )?;
    Ok(LsmInstance {
        params: params.clone(),
        seed,
        labels,
        latents,
        adjacency,
    })
}

/// Reject anything that is not a symmetric 0/1 matrix with zero diagonal.
pub fn validate_adjacency(a: &Array2<u8>) -> Result<()> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::InvalidInput(format!(
            "adjacency must be square, got {rows}x{cols}"
        )));
    }
    for i in 0..rows {
        if a[[i, i]] != 0 {
            return Err(Error::InvalidInput(format!(
                "adjacency diagonal must be zero, entry ({i},{i}) = {}",
                a[[i, i]]
            )));
        }
        for j in (i + 1)..rows {
            let (x, y) = (a[[i, j]], a[[j, i]]);
            if x > 1 || y > 1 {
                return Err(Error::InvalidInput(format!(
                    "adjacency entries must be 0 or 1, entry ({i},{j}) = {}",
                    x.max(y)
                )));
            }
            if x != y {
                return Err(Error::InvalidInput(format!(
                    "adjacency must be symmetric, ({i},{j}) = {x} but ({j},{i}) = {y}"
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Serialization: edge list + labels + latents CSV + JSON header.

const INSTANCE_FORMAT: &str = "lsmcd-instance";
const INSTANCE_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct InstanceFiles {
    pub header: PathBuf,
    pub edges: PathBuf,
    pub labels: PathBuf,
    pub latents: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct InstanceHeader {
    format: String,
    version: u32,
    params: ModelParams,
    seed: u64,
    edges_file: String,
    labels_file: String,
    latents_file: String,
}

/// Write `<prefix>.json`, `<prefix>.edges`, `<prefix>.labels`, and
/// `<prefix>.latents.csv`. The header stores sibling file names relative to
/// its own directory.
pub fn write_instance(inst: &LsmInstance, prefix: &Path) -> Result<InstanceFiles> {
    let stem = prefix
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("bad output prefix {prefix:?}")))?
        .to_string_lossy()
        .into_owned();
    let files = InstanceFiles {
        header: prefix.with_extension("json"),
        edges: prefix.with_extension("edges"),
        labels: prefix.with_extension("labels"),
        latents: prefix.with_extension("latents.csv"),
    };

    let mut w = BufWriter::new(File::create(&files.edges)?);
    write_edge_list(&inst.adjacency, &mut w)?;
    w.flush()?;

    let mut w = BufWriter::new(File::create(&files.labels)?);
    write_labels(&inst.labels, &mut w)?;
    w.flush()?;

    let mut w = BufWriter::new(File::create(&files.latents)?);
    write_latents(&inst.latents, &mut w)?;
    w.flush()?;

    let header = InstanceHeader {
        format: INSTANCE_FORMAT.into(),
        version: INSTANCE_VERSION,
        params: inst.params.clone(),
        seed: inst.seed,
        edges_file: format!("{stem}.edges"),
        labels_file: format!("{stem}.labels"),
        latents_file: format!("{stem}.latents.csv"),
    };
    let mut w = BufWriter::new(File::create(&files.header)?);
    serde_json::to_writer_pretty(&mut w, &header)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(files)
}

/// Read an instance back from its JSON header.
pub fn read_instance(header_path: &Path) -> Result<LsmInstance> {
    let header: InstanceHeader = serde_json::from_reader(BufReader::new(File::open(header_path)?))?;
    if header.format != INSTANCE_FORMAT {
        return Err(Error::InvalidInput(format!(
            "not an instance header: format = {:?}",
            header.format
        )));
    }
    if header.version != INSTANCE_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported instance version {}",
            header.version
        )));
    }
    let dir = header_path.parent().unwrap_or_else(|| Path::new("."));
    let n = header.params.n;
    let adjacency = read_edge_list(&dir.join(&header.edges_file), Some(n))?;
    let labels_raw = read_labels(&dir.join(&header.labels_file))?;
    let labels = LabelVector::balanced(Vec::from(labels_raw))?;
    if labels.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for n = {n}",
            labels.len()
        )));
    }
    let latents = read_latents(&dir.join(&header.latents_file))?;
    if latents.nrows() != n || latents.ncols() != header.params.d {
        return Err(Error::DimensionMismatch(format!(
            "latents are {}x{}, expected {}x{}",
            latents.nrows(),
            latents.ncols(),
            n,
            header.params.d
        )));
    }
    Ok(LsmInstance {
        params: header.params,
        seed: header.seed,
        labels,
        latents,
        adjacency,
    })
}

/// One "i j" pair per line, 0-indexed, i < j.
pub fn write_edge_list<W: Write>(a: &Array2<u8>, w: &mut W) -> Result<()> {
    validate_adjacency(a)?;
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if a[[i, j]] == 1 {
                writeln!(w, "{i} {j}")?;
            }
        }
    }
    Ok(())
}

/// Strict reader for instance edge files: '#' comments and blank lines are
/// skipped, indices must be in range, self-loops are rejected. When `n` is
/// None the node count is inferred as max index + 1.
pub fn read_edge_list(path: &Path, n: Option<usize>) -> Result<Array2<u8>> {
    let parse = || -> Result<Vec<(usize, usize)>> {
        let mut pairs = Vec::new();
        for (idx, line) in BufReader::new(File::open(path)?).lines().enumerate() {
            let line = line?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut it = body.split_whitespace();
            let err = |msg: String| Error::Parse {
                path: path.display().to_string(),
                line: idx + 1,
                msg,
            };
            let i: usize = it
                .next()
                .ok_or_else(|| err("missing node index".into()))?
                .parse()
                .map_err(|e| err(format!("bad node index: {e}")))?;
            let j: usize = it
                .next()
                .ok_or_else(|| err("missing second node index".into()))?
                .parse()
                .map_err(|e| err(format!("bad node index: {e}")))?;
            if it.next().is_some() {
                return Err(err("expected exactly two indices per line".into()));
            }
            if i == j {
                return Err(err(format!("self-loop at node {i}")));
            }
            pairs.push((i, j));
        }
        Ok(pairs)
    };
    let pairs = parse()?;
    let max_idx = pairs.iter().map(|&(i, j)| i.max(j)).max();
    let n = match n {
        Some(n) => {
            if let Some(m) = max_idx {
                if m >= n {
                    return Err(Error::InvalidInput(format!(
                        "edge list references node {m} but n = {n}"
                    )));
                }
            }
            n
        }
        None => max_idx
            .map(|m| m + 1)
            .ok_or_else(|| Error::InvalidInput("empty edge list and no n given".into()))?,
    };
    let mut a = Array2::zeros((n, n));
    for (i, j) in pairs {
        a[[i, j]] = 1;
        a[[j, i]] = 1;
    }
    Ok(a)
}

/// One label per line, "1" or "-1".
pub fn write_labels<W: Write>(labels: &LabelVector, w: &mut W) -> Result<()> {
    for &v in labels.iter() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

/// Accepts "1", "+1", "-1"; '#' comments and blank lines are skipped.
pub fn read_labels(path: &Path) -> Result<LabelVector> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v = match body {
            "1" | "+1" => 1i8,
            "-1" => -1i8,
            other => {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    msg: format!("expected +1 or -1, got {other:?}"),
                })
            }
        };
        out.push(v);
    }
    LabelVector::signs(out)
}

/// CSV with one row per node, d columns, full round-trip precision.
pub fn write_latents<W: Write>(latents: &Array2<f64>, w: &mut W) -> Result<()> {
    for row in latents.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_latents(path: &Path) -> Result<Array2<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|t| t.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            msg: format!("bad float: {e}"),
        })?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    msg: format!("row has {} columns, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::InvalidInput("empty latents file".into()));
    }
    let d = rows[0].len();
    let n = rows.len();
    Ok(Array2::from_shape_vec((n, d), rows.concat()).expect("ragged rows rejected above"))
}
