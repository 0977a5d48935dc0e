use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matcore::{c64, CMatrix};

/// Random matrix family.
#[derive(Clone, Debug, PartialEq)]
pub enum EnsembleKind {
    /// Independent standard complex Gaussian entries.
    Ginibre,
    Hermitian,
    /// `U diag(λ) U*` with Haar `U` and Gaussian `λ`.
    Normal,
    /// Haar distributed.
    Unitary,
    /// Trial 0 is the unweighted shift `e_i ↦ e_{i-1}`; later trials carry
    /// Gaussian weights on the superdiagonal.
    NilpotentShift,
    /// Product of Gaussian `n × k` and `k × n` factors; `None` means `⌊n/2⌋`.
    RankDeficient(Option<usize>),
    Diagonal,
    Scaled(Box<EnsembleKind>, Complex64),
}

impl EnsembleKind {
    fn rank(&self, n: usize) -> Option<usize> {
        match self {
            EnsembleKind::RankDeficient(k) => Some(k.unwrap_or(n / 2)),
            _ => None,
        }
    }

    /// Base kind and scalar for `scaled`, or `(self, 1)`.
    pub fn unscaled(&self) -> (&EnsembleKind, Complex64) {
        match self {
            EnsembleKind::Scaled(base, c) => {
                let (inner, c0) = base.unscaled();
                (inner, c * c0)
            }
            other => (other, c64(1.0, 0.0)),
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleKind::Ginibre => f.write_str("ginibre"),
            EnsembleKind::Hermitian => f.write_str("hermitian"),
            EnsembleKind::Normal => f.write_str("normal"),
            EnsembleKind::Unitary => f.write_str("unitary"),
            EnsembleKind::NilpotentShift => f.write_str("nilpotent_shift"),
            EnsembleKind::RankDeficient(None) => f.write_str("rank_deficient"),
            EnsembleKind::RankDeficient(Some(k)) => write!(f, "rank_deficient({k})"),
            EnsembleKind::Diagonal => f.write_str("diagonal"),
            EnsembleKind::Scaled(base, c) => write!(f, "scaled({base},{},{})", c.re, c.im),
        }
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("unknown ensemble kind `{s}`"));
        let s = s.trim();
        Ok(match s {
            "ginibre" => EnsembleKind::Ginibre,
            "hermitian" => EnsembleKind::Hermitian,
            "normal" => EnsembleKind::Normal,
            "unitary" => EnsembleKind::Unitary,
            "nilpotent_shift" => EnsembleKind::NilpotentShift,
            "rank_deficient" => EnsembleKind::RankDeficient(None),
            "diagonal" => EnsembleKind::Diagonal,
            _ => {
                let (head, rest) = s.split_once('(').ok_or_else(bad)?;
                let args = rest.strip_suffix(')').ok_or_else(bad)?;
                match head {
                    "rank_deficient" => EnsembleKind::RankDeficient(Some(args.trim().parse().map_err(|_| bad())?)),
                    "scaled" => {
                        // scaled(base, re[, im]); the base may itself contain commas
                        let parts: Vec<&str> = args.rsplitn(3, ',').collect();
                        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
                        let (base, c) = match parts.as_slice() {
                            [im, re, base] if num(im).is_ok() && num(re).is_ok() => (*base, c64(num(re)?, num(im)?)),
                            _ => {
                                let (base, re) = args.rsplit_once(',').ok_or_else(bad)?;
                                (base, c64(num(re)?, 0.0))
                            }
                        };
                        EnsembleKind::Scaled(Box::new(base.parse()?), c)
                    }
                    _ => return Err(bad()),
                }
            }
        })
    }
}

impl Serialize for EnsembleKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EnsembleKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub seed: u64,
    pub trials: usize,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, seed: u64, trials: usize) -> Self {
        Self { kind, dim, seed, trials }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dim must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidSpec("trials must be at least 1".into()));
        }
        let (base, c) = self.kind.unscaled();
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::InvalidSpec("scale factor must be finite".into()));
        }
        if let Some(k) = base.rank(self.dim) {
            if k > self.dim {
                return Err(Error::InvalidSpec(format!("rank {k} exceeds dim {}", self.dim)));
            }
        }
        Ok(())
    }

    /// `kind/n=dim`, used to label records.
    pub fn label(&self) -> String {
        format!("{}/n={}", self.kind, self.dim)
    }

    /// Random stream of one trial; independent of every other trial.
    pub(crate) fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let qr = gaussian_matrix(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn draw(kind: &EnsembleKind, n: usize, trial: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let zero = c64(0.0, 0.0);
    match kind {
        EnsembleKind::Ginibre => CMatrix::from_dmatrix_unchecked(gaussian_matrix(rng, n, n)),
        EnsembleKind::Hermitian => {
            let g = gaussian_matrix(rng, n, n);
            CMatrix::from_fn(n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Less => g[(i, j)],
                std::cmp::Ordering::Equal => c64(g[(i, i)].re * std::f64::consts::SQRT_2, 0.0),
                std::cmp::Ordering::Greater => g[(j, i)].conj(),
            })
        }
        EnsembleKind::Normal => {
            let u = haar_unitary(rng, n);
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| gaussian(rng)));
            CMatrix::from_dmatrix_unchecked(&u * d * u.adjoint())
        }
        EnsembleKind::Unitary => CMatrix::from_dmatrix_unchecked(haar_unitary(rng, n)),
        EnsembleKind::NilpotentShift => {
            let weights: Vec<Complex64> =
                (0..n).map(|_| if trial == 0 { c64(1.0, 0.0) } else { gaussian(rng) }).collect();
            CMatrix::from_fn(n, |i, j| if j == i + 1 { weights[i] } else { zero })
        }
        EnsembleKind::RankDeficient(_) => {
            let k = kind.rank(n).unwrap_or(0);
            let a = gaussian_matrix(rng, n, k);
            let b = gaussian_matrix(rng, k, n);
            CMatrix::from_dmatrix_unchecked(a * b)
        }
        EnsembleKind::Diagonal => {
            let d: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
            CMatrix::diag(&d)
        }
        EnsembleKind::Scaled(base, c) => draw(base, n, trial, rng).scale(*c),
    }
}

/// Everything one trial needs, drawn from the trial's own stream.
#[derive(Clone, Debug)]
pub struct TrialInputs {
    /// `T`; also `B` and `X` in two-operator properties.
    pub t: CMatrix,
    /// Second operator: `C` and `Y`. Same kind, independent draw.
    pub c: CMatrix,
    /// Parameter in `[0, 1]`.
    pub param_t: f64,
    /// Parameter in `[1, 2]`.
    pub param_r: f64,
    /// Complex scalar for homogeneity checks.
    pub scalar: Complex64,
    /// Unit vectors and exponent for the vector inequalities.
    pub x: nalgebra::DVector<Complex64>,
    pub y: nalgebra::DVector<Complex64>,
    pub alpha: f64,
}

pub(crate) fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> nalgebra::DVector<Complex64> {
    let v = nalgebra::DVector::from_fn(n, |_, _| gaussian(rng));
    let norm = v.norm();
    v / c64(norm, 0.0)
}

/// Inputs of trial `index`.
pub fn trial_inputs(spec: &EnsembleSpec, index: usize) -> Result<TrialInputs> {
    spec.validate()?;
    let mut rng = spec.trial_rng(index);
    let n = spec.dim;
    let t = draw(&spec.kind, n, index, &mut rng);
    let c = draw(&spec.kind, n, index, &mut rng);
    Ok(TrialInputs {
        t,
        c,
        param_t: rng.random::<f64>(),
        param_r: 1.0 + rng.random::<f64>(),
        scalar: gaussian(&mut rng) * 3.0,
        x: unit_vector(&mut rng, n),
        y: unit_vector(&mut rng, n),
        alpha: rng.random::<f64>(),
    })
}

/// The `T` of every trial, in order. Deterministic for a fixed spec.
pub fn generate(spec: &EnsembleSpec) -> Result<impl Iterator<Item = CMatrix> + '_> {
    spec.validate()?;
    Ok((0..spec.trials).map(move |i| trial_inputs(spec, i).expect("spec validated").t))
}

/// The `(T, C)` pair of every trial.
pub fn generate_pairs(spec: &EnsembleSpec) -> Result<impl Iterator<Item = (CMatrix, CMatrix)> + '_> {
    spec.validate()?;
    Ok((0..spec.trials).map(move |i| {
        let inputs = trial_inputs(spec, i).expect("spec validated");
        (inputs.t, inputs.c)
    }))
}

/// Five kinds × dims {2, 3, 5} × 200 trials.
pub fn default_campaign(seed: u64) -> Vec<EnsembleSpec> {
    default_campaign_sized(seed, 200)
}

pub fn default_campaign_sized(seed: u64, trials: usize) -> Vec<EnsembleSpec> {
    let kinds = [
        EnsembleKind::Ginibre,
        EnsembleKind::Normal,
        EnsembleKind::NilpotentShift,
        EnsembleKind::RankDeficient(None),
        EnsembleKind::Unitary,
    ];
    let mut specs = Vec::new();
    for (k, kind) in kinds.iter().enumerate() {
        for (d, dim) in [2usize, 3, 5].into_iter().enumerate() {
            let spec_seed = seed.wrapping_add(((k * 3 + d) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            specs.push(EnsembleSpec::new(kind.clone(), dim, spec_seed, trials));
        }
    }
    specs
}
