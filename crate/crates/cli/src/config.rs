//! Parsed run configuration shared by the subcommands.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use spectral_leverage::{Convention, GeneratorKind, KernelSpec};

use crate::error::{CliError, CliResult};

/// Parses a real number, also accepting fractions such as `1/3` or `-2/3`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
            a / b
        }
        None => s.parse().map_err(|_| format!("not a number: {s:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

/// `c * n^(-e)`, written `c,e` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    pub c: f64,
    pub e: f64,
}

impl Schedule {
    pub fn new(c: f64, e: f64) -> Self {
        Self { c, e }
    }

    pub fn at(&self, n: usize) -> f64 {
        self.c * (n as f64).powf(-self.e)
    }
}

impl FromStr for Schedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (c, e) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `c,e`, got {s:?}"))?;
        let c = parse_real(c)?;
        if c <= 0.0 {
            return Err(format!("schedule constant must be positive, got {c}"));
        }
        Ok(Self { c, e: parse_real(e)? })
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*n^(-{})", self.c, self.e)
    }
}

/// A positive value that is either fixed or follows a schedule in `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scalar {
    Fixed(f64),
    Schedule(Schedule),
}

impl Scalar {
    pub fn at(&self, n: usize) -> f64 {
        match self {
            Self::Fixed(v) => *v,
            Self::Schedule(s) => s.at(n),
        }
    }

    /// Combines a `--x` / `--x-schedule` flag pair; exactly one may be set.
    pub fn from_pair(name: &str, fixed: Option<f64>, schedule: Option<Schedule>) -> CliResult<Option<Self>> {
        match (fixed, schedule) {
            (Some(_), Some(_)) => Err(CliError::Config(format!(
                "give either --{name} or --{name}-schedule, not both"
            ))),
            (Some(v), None) if !(v > 0.0 && v.is_finite()) => Err(CliError::Config(format!(
                "--{name} must be positive, got {v}"
            ))),
            (Some(v), None) => Ok(Some(Self::Fixed(v))),
            (None, Some(s)) => Ok(Some(Self::Schedule(s))),
            (None, None) => Ok(None),
        }
    }
}

/// Landmark count, fixed or `ceil(c * n^e)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LandmarkCount {
    Fixed(usize),
    /// `ceil(c * n^e)`; note the positive exponent.
    Growth { c: f64, e: f64 },
}

impl LandmarkCount {
    pub fn at(&self, n: usize) -> usize {
        match *self {
            Self::Fixed(k) => k,
            Self::Growth { c, e } => (c * (n as f64).powf(e)).ceil().max(1.0) as usize,
        }
    }
}

impl Default for LandmarkCount {
    fn default() -> Self {
        Self::Growth { c: 5.0, e: 1.0 / 3.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FamilyArg {
    Matern,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ConventionArg {
    #[default]
    Simplified,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelConfig {
    pub family: FamilyArg,
    pub nu: f64,
    pub sigma: Option<f64>,
    pub convention: ConventionArg,
}

impl KernelConfig {
    pub fn matern(nu: f64) -> Self {
        Self { family: FamilyArg::Matern, nu, sigma: None, convention: ConventionArg::Simplified }
    }

    pub fn spec(&self, dim: usize) -> CliResult<KernelSpec> {
        let spec = match self.family {
            FamilyArg::Matern => KernelSpec::matern(self.nu, dim)?,
            FamilyArg::Gaussian => {
                let sigma = self
                    .sigma
                    .ok_or_else(|| CliError::Config("the gaussian kernel needs --sigma".into()))?;
                KernelSpec::gaussian(sigma, dim)?
            }
        };
        Ok(spec.with_convention(match self.convention {
            ConventionArg::Simplified => Convention::Simplified,
            ConventionArg::Full => Convention::FullConstants,
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DensitySource {
    #[default]
    Kde,
    /// The `density` column of the dataset (or the generator's closed form).
    True,
}

/// Low-density floor applied before the leverage formula.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FloorSetting {
    None,
    /// The effective bandwidth of the kernel at the current `lambda`.
    #[default]
    Auto,
    Fixed(f64),
    Schedule(Schedule),
}

impl FloorSetting {
    pub fn threshold(&self, spec: &KernelSpec, lambda: f64, n: usize) -> f64 {
        match self {
            Self::None => 0.0,
            Self::Auto => spec.effective_bandwidth(lambda),
            Self::Fixed(h) => *h,
            Self::Schedule(s) => s.at(n),
        }
    }
}

impl FromStr for FloorSetting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "none" | "off" => Ok(Self::None),
            "auto" => Ok(Self::Auto),
            t if t.contains(',') => Ok(Self::Schedule(t.parse()?)),
            t => {
                let h = parse_real(t)?;
                if h < 0.0 {
                    return Err(format!("floor must be nonnegative, got {h}"));
                }
                Ok(if h == 0.0 { Self::None } else { Self::Fixed(h) })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityConfig {
    pub source: DensitySource,
    /// `None` picks a default from the generator or the dimension.
    pub bandwidth: Option<Scalar>,
    pub subsample: Option<usize>,
    pub floor: FloorSetting,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self { source: DensitySource::Kde, bandwidth: None, subsample: None, floor: FloorSetting::Auto }
    }
}

/// Bandwidth used when none is configured: the experiment settings for the
/// built-in generators, otherwise `n^(-1/(d+4))`.
pub fn default_bandwidth(generator: Option<GeneratorKind>, dim: usize) -> Scalar {
    let s = match generator {
        Some(GeneratorKind::Uniform { dim: 1 }) => Schedule::new(1.0, 0.2),
        Some(GeneratorKind::Beta15_2) | Some(GeneratorKind::Bimodal1d) => Schedule::new(0.3, 1.0 / 3.0),
        Some(GeneratorKind::Bimodal3d) => Schedule::new(0.15, 1.0 / 7.0),
        _ => Schedule::new(1.0, 1.0 / (dim as f64 + 4.0)),
    };
    Scalar::Schedule(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    #[default]
    Sa,
    Exact,
    Uniform,
}

impl MethodArg {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sa => "sa",
            Self::Exact => "exact",
            Self::Uniform => "uniform",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PathArg {
    #[default]
    Closed,
    Quad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorArg {
    Uniform,
    Beta,
    Bimodal1d,
    Bimodal3d,
}

impl GeneratorArg {
    pub fn kind(self, dim: usize) -> GeneratorKind {
        match self {
            Self::Uniform => GeneratorKind::Uniform { dim },
            Self::Beta => GeneratorKind::Beta15_2,
            Self::Bimodal1d => GeneratorKind::Bimodal1d,
            Self::Bimodal3d => GeneratorKind::Bimodal3d,
        }
    }

    /// Mixing exponent of the experiment settings.
    pub fn default_gamma(self) -> f64 {
        match self {
            Self::Bimodal3d => 0.4,
            _ => 0.6,
        }
    }
}

/// Everything the leverage pipeline needs besides the data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub kernel: KernelConfig,
    pub lambda: Scalar,
    pub density: DensityConfig,
    pub path: PathArg,
    pub proportional_only: bool,
    pub method: MethodArg,
    pub d_sub: LandmarkCount,
    pub seed: u64,
    /// Dense-oracle size limit.
    pub max_n: usize,
}

impl RunConfig {
    pub fn new(kernel: KernelConfig, lambda: Scalar) -> Self {
        Self {
            kernel,
            lambda,
            density: DensityConfig::default(),
            path: PathArg::Closed,
            proportional_only: false,
            method: MethodArg::Sa,
            d_sub: LandmarkCount::default(),
            seed: 0,
            max_n: spectral_leverage::DenseLimits::default().max_n,
        }
    }

    pub fn lambda_at(&self, n: usize) -> CliResult<f64> {
        let lambda = self.lambda.at(n);
        if lambda > 0.0 && lambda.is_finite() {
            Ok(lambda)
        } else {
            Err(CliError::Config(format!("lambda evaluates to {lambda} at n = {n}")))
        }
    }
}

/// Independent seed for a named sub-stream (noise, landmarks, KDE subsample).
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    seed.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_schedules_and_fractions() {
        let s: Schedule = "0.075,2/3".parse().unwrap();
        assert_eq!(s.c, 0.075);
        assert!((s.e - 2.0 / 3.0).abs() < 1e-16);
        assert!((s.at(1000) - 0.075 * 0.01).abs() < 1e-15);
        assert!("0,1".parse::<Schedule>().is_err());
        assert!("1".parse::<Schedule>().is_err());
        assert!("1,x".parse::<Schedule>().is_err());
    }

    #[test]
    fn floor_settings() {
        assert_eq!("none".parse::<FloorSetting>().unwrap(), FloorSetting::None);
        assert_eq!("auto".parse::<FloorSetting>().unwrap(), FloorSetting::Auto);
        assert_eq!("0".parse::<FloorSetting>().unwrap(), FloorSetting::None);
        assert_eq!("0.2".parse::<FloorSetting>().unwrap(), FloorSetting::Fixed(0.2));
        assert!(matches!("0.3,0.8".parse::<FloorSetting>().unwrap(), FloorSetting::Schedule(_)));
        assert!("-1".parse::<FloorSetting>().is_err());
        let spec = KernelSpec::matern(1.5, 1).unwrap();
        assert!((FloorSetting::Auto.threshold(&spec, 1e-4, 10) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn pair_validation() {
        assert!(Scalar::from_pair("lambda", Some(1.0), Some(Schedule::new(1.0, 1.0))).is_err());
        assert!(Scalar::from_pair("lambda", Some(-1.0), None).is_err());
        assert_eq!(Scalar::from_pair("lambda", None, None).unwrap(), None);
    }

    #[test]
    fn landmark_growth() {
        assert_eq!(LandmarkCount::default().at(2000), 63);
        assert_eq!(LandmarkCount::Fixed(7).at(2000), 7);
    }

    #[test]
    fn streams_differ() {
        assert_ne!(stream_seed(1, 1), stream_seed(1, 2));
        assert_eq!(stream_seed(5, 0), 5);
    }
}
