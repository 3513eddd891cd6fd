//! Run configuration: read from TOML or JSON, overridden field by field by
//! command-line flags, and validated before any simulation starts.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cohsim_core::counting::{default_ancillas, CountingMode, CountingPlan, Layout};
use cohsim_core::states::{
    dephase_sz, prepare_coherent, prepare_noisy, project_sz, project_sz_zero, NoisyMode,
};
use cohsim_core::{PhaseProfile, StateEnsemble};
use serde::{Deserialize, Deserializer, Serialize};

use crate::angle::{format_angle, parse_angle, parse_angle_list};
use crate::format::EnsembleDto;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    Coherent,
    Dephased,
    Projected,
    Noisy,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::Coherent => "coherent",
            StateKind::Dephased => "dephased",
            StateKind::Projected => "projected",
            StateKind::Noisy => "noisy",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutArg {
    Chain,
    AllToAll,
}

impl From<LayoutArg> for Layout {
    fn from(l: LayoutArg) -> Layout {
        match l {
            LayoutArg::Chain => Layout::LinearChain,
            LayoutArg::AllToAll => Layout::AllToAll,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Postselect,
    KeepAll,
}

impl From<ModeArg> for CountingMode {
    fn from(m: ModeArg) -> CountingMode {
        match m {
            ModeArg::Postselect => CountingMode::PostselectAllZero,
            ModeArg::KeepAll => CountingMode::KeepAll,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FormatArg {
    Json,
    Csv,
    Quil,
}

impl FormatArg {
    pub fn name(self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
            FormatArg::Quil => "quil",
        }
    }
}

/// Preparation profile for compiled programs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileArg {
    /// Phases chosen so the preparation needs no system `RZ`.
    Bare,
    /// Phases from `thetas` (zeros when absent).
    Thetas,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleInput {
    Number(f64),
    Text(String),
    List(Vec<AngleInput>),
}

impl AngleInput {
    fn flatten(self, out: &mut Vec<f64>) -> Result<()> {
        match self {
            AngleInput::Number(x) => out.push(x),
            AngleInput::Text(t) => out.extend(parse_angle_list(&t)?),
            AngleInput::List(items) => {
                for i in items {
                    i.flatten(out)?;
                }
            }
        }
        Ok(())
    }
}

fn angles<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<f64>>, D::Error> {
    let Some(input) = Option::<AngleInput>::deserialize(d)? else {
        return Ok(None);
    };
    let mut out = Vec::new();
    input.flatten(&mut out).map_err(serde::de::Error::custom)?;
    Ok(Some(out))
}

fn angle<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    match angles(d)? {
        None => Ok(None),
        Some(v) if v.len() == 1 => Ok(Some(v[0])),
        Some(v) => Err(serde::de::Error::custom(format!("expected one angle, found {}", v.len()))),
    }
}

/// Every setting a command may read. Unset fields fall back to per-command
/// defaults, which are echoed in the output metadata.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub state: Option<StateKind>,
    pub n: Option<usize>,
    #[serde(default, deserialize_with = "angles")]
    pub thetas: Option<Vec<f64>>,
    /// Target `S_z` for the projected state (zero when absent).
    pub sz: Option<f64>,
    /// State or histogram file read instead of preparing a state.
    pub input: Option<PathBuf>,
    pub na: Option<usize>,
    #[serde(default, deserialize_with = "angles")]
    pub phis: Option<Vec<f64>>,
    pub layout: Option<LayoutArg>,
    pub mode: Option<ModeArg>,
    /// Number of coupled system qubits (all when absent).
    pub coupled: Option<usize>,
    pub profile: Option<ProfileArg>,
    /// Probe angle of the `S_θ` readout.
    #[serde(default, deserialize_with = "angle")]
    pub theta: Option<f64>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub exact: Option<bool>,
    pub noise: Option<PathBuf>,
    pub mitigate: Option<bool>,
    /// Slots left out of mitigation.
    pub skip_slots: Option<Vec<usize>>,
    pub points: Option<usize>,
    pub sigma: Option<f64>,
    pub step: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<FormatArg>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),* $(,)?) => {
        RunConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("config: cannot read {}", path.display()))?;
        let parsed = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text).map_err(anyhow::Error::from),
            _ => toml::from_str(&text).map_err(anyhow::Error::from),
        };
        parsed.with_context(|| format!("config: {}", path.display()))
    }

    /// Fields set in `top` win over those in `self`.
    pub fn overridden_by(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(base, top; state, n, thetas, sz, input, na, phis, layout, mode, coupled, profile,
            theta, shots, seed, exact, noise, mitigate, skip_slots, points, sigma, step, out, format)
    }

    pub fn n(&self) -> Result<usize> {
        match self.n {
            None => bail!("n: required"),
            Some(0) => bail!("n: must be at least 1"),
            Some(n) if n > cohsim_core::state::MAX_QUBITS => {
                bail!("n: {n} exceeds the simulator limit of {}", cohsim_core::state::MAX_QUBITS)
            }
            Some(n) => Ok(n),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Per-qubit phases; a single value is broadcast to every qubit.
    pub fn profile(&self, n: usize) -> Result<PhaseProfile> {
        let thetas = match &self.thetas {
            None => vec![0.0; n],
            Some(t) if t.len() == 1 => vec![t[0]; n],
            Some(t) if t.len() == n => t.clone(),
            Some(t) => bail!("thetas: {} values for n = {n}", t.len()),
        };
        PhaseProfile::new(thetas).context("thetas")
    }

    pub fn layout(&self, default: Layout) -> Layout {
        self.layout.map(Layout::from).unwrap_or(default)
    }

    pub fn mode(&self) -> CountingMode {
        self.mode.map(CountingMode::from).unwrap_or(CountingMode::PostselectAllZero)
    }

    pub fn plan(&self, default_layout: Layout) -> Result<CountingPlan> {
        let n = self.n()?;
        let layout = self.layout(default_layout);
        let plan = match (&self.phis, self.na) {
            (Some(phis), na) => {
                if let Some(na) = na {
                    if na != phis.len() {
                        bail!("na: {na} ancillas but {} phis", phis.len());
                    }
                }
                CountingPlan::with_phis(n, phis.clone(), layout).context("phis")?
            }
            (None, Some(na)) => CountingPlan::with_ancillas(n, na, layout).context("na")?,
            (None, None) => {
                if default_ancillas(n) == 0 {
                    bail!("na: n = {n} needs an explicit ancilla count");
                }
                CountingPlan::new(n, layout).context("n")?
            }
        };
        Ok(plan)
    }

    pub fn coupled(&self, n: usize) -> Result<usize> {
        match self.coupled {
            Some(k) if k > n => bail!("coupled: {k} exceeds n = {n}"),
            Some(k) => Ok(k),
            None => Ok(n),
        }
    }

    /// `Some(shots)` for shot mode, `None` for exact mode.
    pub fn shots(&self, default: Option<u64>) -> Result<Option<u64>> {
        match (self.exact, self.shots) {
            (Some(true), Some(_)) => bail!("shots: conflicts with exact mode"),
            (Some(true), None) => Ok(None),
            (_, Some(0)) => bail!("shots: must be positive"),
            (_, Some(s)) => Ok(Some(s)),
            (_, None) => Ok(default),
        }
    }

    pub fn sigma(&self) -> Result<f64> {
        match self.sigma {
            Some(s) if !(s > 0.0 && s.is_finite()) => bail!("sigma: must be positive"),
            Some(s) => Ok(s),
            None => Ok(cohsim_core::observables::DEFAULT_SIGMA),
        }
    }

    pub fn step(&self) -> Result<f64> {
        match self.step {
            Some(s) if !(s > 0.0 && s.is_finite()) => bail!("step: must be positive"),
            Some(s) => Ok(s),
            None => Ok(cohsim_core::observables::DEFAULT_STEP),
        }
    }

    pub fn points(&self) -> Result<usize> {
        match self.points {
            Some(0) => bail!("points: must be positive"),
            Some(p) => Ok(p),
            None => Ok(cohsim_core::observables::DEFAULT_THETA_POINTS),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta.unwrap_or(0.0)
    }

    /// The ensemble named by `input` or by `state`, `n` and `thetas`.
    pub fn ensemble(&self) -> Result<(StateEnsemble, String)> {
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path).with_context(|| format!("input: cannot read {}", path.display()))?;
            let dto: EnsembleDto = serde_json::from_str(&text).with_context(|| format!("input: {}", path.display()))?;
            let e = dto.to_ensemble().with_context(|| format!("input: {}", path.display()))?;
            return Ok((e, path.display().to_string()));
        }
        let kind = self.state.unwrap_or(StateKind::Coherent);
        let n = self.n()?;
        let profile = self.profile(n)?;
        let e = match kind {
            StateKind::Coherent => prepare_coherent(n, &profile)?.into(),
            StateKind::Dephased => dephase_sz(&prepare_coherent(n, &profile)?),
            StateKind::Projected => {
                let c = prepare_coherent(n, &profile)?;
                match self.sz {
                    Some(sz) => project_sz(&c, sz).context("sz")?.1.into(),
                    None if n % 2 == 1 => bail!("sz: n = {n} is odd, give the target sector explicitly"),
                    None => project_sz_zero(&c)?.1.into(),
                }
            }
            StateKind::Noisy => prepare_noisy(n, NoisyMode::default_for(n, self.seed()))?,
        };
        Ok((e, kind.name().to_string()))
    }
}

/// Angle list rendering for metadata.
pub fn angle_list(values: &[f64]) -> String {
    values.iter().map(|&a| format_angle(a)).collect::<Vec<_>>().join(",")
}

/// Single angle flag parser for clap.
pub fn angle_arg(text: &str) -> std::result::Result<f64, String> {
    parse_angle(text).map_err(|e| e.to_string())
}

/// Angle list flag parser for clap.
pub fn angle_list_arg(text: &str) -> std::result::Result<Vec<f64>, String> {
    parse_angle_list(text).map_err(|e| e.to_string())
}

/// Probe angle of the `S_y` readout.
pub const SY_PROBE: f64 = FRAC_PI_2;
