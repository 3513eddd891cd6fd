//! One function per subcommand. Each validates its configuration, runs the
//! simulation and returns a summary line plus the rendered data file.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use cohsim_core::counting::{
    estimate_from_readouts, measured_counting_circuit, shot_sweep_point, staged_sweep_point, CountingMode,
    CountingPlan, Layout, SweepPoint,
};
use cohsim_core::mitigation::{
    apply_readout_noise, calibrate, mitigate, sample_readout_noise, ConfusionModel, SimulatedDevice,
};
use cohsim_core::native::{bare_prep_profile, compile_counting_staged, gate_budget};
use cohsim_core::observables::{
    c2_from_fcs, default_theta_grid, default_wigner_axis, fcs_column, fcs_shots, selection_rule_report,
    spin_observables, wigner as wigner_grid, FcsDistribution,
};
use cohsim_core::rng::derive_seed;
use cohsim_core::sampling::{exact_distribution, sample_shots};
use cohsim_core::{OutcomeHistogram, PhaseProfile, StateEnsemble};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{angle_list, FormatArg, ProfileArg, RunConfig, SY_PROBE};
use crate::format::{CircuitDto, ConfusionDto, EnsembleDto, HistogramDto};
use crate::output::{csv_text, json_text, plain_json, resolve_format, short, Artifact, Meta};
use crate::quil::{symbolic_counting_listing, to_quil};

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub summary: String,
    pub artifact: Option<Artifact>,
}

fn format_for(cfg: &RunConfig, default: FormatArg, allowed: &[FormatArg]) -> Result<FormatArg> {
    let f = resolve_format(cfg.format, cfg.out.as_deref(), default);
    if !allowed.contains(&f) {
        bail!(
            "format: {} is not available here (use {})",
            f.name(),
            allowed.iter().map(|a| a.name()).collect::<Vec<_>>().join(" or ")
        );
    }
    Ok(f)
}

fn wants_data(cfg: &RunConfig) -> bool {
    cfg.out.is_some() || cfg.format.is_some()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, field: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("{field}: cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{field}: {}", path.display()))
}

fn noise_model(cfg: &RunConfig, slots: usize) -> Result<Option<ConfusionModel>> {
    let Some(path) = &cfg.noise else {
        return Ok(None);
    };
    let model = read_json::<ConfusionDto>(path, "noise")?
        .to_model()
        .with_context(|| format!("noise: {}", path.display()))?;
    if model.n_qubits() != slots {
        bail!("noise: model covers {} slots, the program has {slots}", model.n_qubits());
    }
    Ok(Some(model))
}

fn state_meta(meta: &mut Meta, cfg: &RunConfig, source: &str, e: &StateEnsemble) {
    meta.push("state", source);
    meta.push("n", e.n_qubits());
    if cfg.input.is_none() {
        let thetas = cfg.thetas.clone().unwrap_or_else(|| vec![0.0]);
        meta.push("thetas", angle_list(&thetas));
        if let Some(sz) = cfg.sz {
            meta.push("sz", sz);
        }
        if source == "noisy" {
            meta.push("seed", cfg.seed());
        }
    }
}

fn plan_meta(meta: &mut Meta, plan: &CountingPlan, profile: &PhaseProfile) {
    meta.push("n", plan.n_system());
    meta.push("na", plan.n_ancillas());
    meta.push("phis", angle_list(plan.phis()));
    meta.push("layout", plan.layout().name());
    meta.push("thetas", angle_list(profile.thetas()));
}

pub fn prepare(cfg: &RunConfig) -> Result<Report> {
    format_for(cfg, FormatArg::Json, &[FormatArg::Json])?;
    let (e, source) = cfg.ensemble()?;
    let summary = format!(
        "prepared {source} state on {} qubits ({} member{})",
        e.n_qubits(),
        e.len(),
        if e.len() == 1 { "" } else { "s" }
    );
    Ok(Report {
        summary,
        artifact: Some(plain_json(&EnsembleDto::from(&e))?),
    })
}

#[derive(Serialize)]
struct ObservablesOut {
    n: usize,
    c2: f64,
    sx_mean: f64,
    sy_mean: f64,
    sz_mean: f64,
    sx2: f64,
    sy2: f64,
    sz2: f64,
}

pub fn observe(cfg: &RunConfig) -> Result<Report> {
    let format = format_for(cfg, FormatArg::Json, &[FormatArg::Json, FormatArg::Csv])?;
    let (e, source) = cfg.ensemble()?;
    let o = spin_observables(&e);
    let mut meta = Meta::new("observe");
    state_meta(&mut meta, cfg, &source, &e);
    let summary = format!(
        "c2 = {}  <Sx> = {}  <Sy> = {}  <Sz^2> = {}",
        short(o.c2),
        short(o.sx_mean),
        short(o.sy_mean),
        short(o.sz2)
    );
    let body = ObservablesOut {
        n: o.n_qubits,
        c2: o.c2,
        sx_mean: o.sx_mean,
        sy_mean: o.sy_mean,
        sz_mean: o.sz_mean,
        sx2: o.sx2,
        sy2: o.sy2,
        sz2: o.sz2,
    };
    let artifact = match format {
        FormatArg::Csv => {
            let header = ["n", "c2", "sx_mean", "sy_mean", "sz_mean", "sx2", "sy2", "sz2"];
            let row = [o.n_qubits as f64, o.c2, o.sx_mean, o.sy_mean, o.sz_mean, o.sx2, o.sy2, o.sz2];
            let mut cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            cells[0] = o.n_qubits.to_string();
            csv_text(&meta, &header, &[cells])?
        }
        _ => json_text(&meta, &body)?,
    };
    Ok(Report {
        summary,
        artifact: wants_data(cfg).then_some(artifact),
    })
}

#[derive(Serialize)]
struct PolarOut<'a> {
    n: usize,
    thetas: &'a [f64],
    values: Vec<f64>,
    /// `probs[j][m]`: probability of `values[m]` at `thetas[j]`.
    probs: &'a [Vec<f64>],
    c2: f64,
    even_mass: Option<Vec<f64>>,
}

fn exact_fcs(e: &StateEnsemble, thetas: &[f64]) -> Result<FcsDistribution> {
    let columns = thetas
        .par_iter()
        .map(|&t| fcs_column(e, t))
        .collect::<cohsim_core::Result<Vec<_>>>()?;
    Ok(FcsDistribution::new(e.n_qubits(), thetas.to_vec(), columns)?)
}

pub fn fcs(cfg: &RunConfig) -> Result<Report> {
    let format = format_for(cfg, FormatArg::Csv, &[FormatArg::Json, FormatArg::Csv])?;
    let (e, source) = cfg.ensemble()?;
    let points = cfg.points()?;
    let shots = cfg.shots(None)?;
    let thetas = default_theta_grid(points);
    let dist = match shots {
        None => exact_fcs(&e, &thetas)?,
        Some(s) => fcs_shots(&e, &thetas, s, cfg.seed())?,
    };
    let c2 = c2_from_fcs(&dist)?;
    let parity = (e.n_qubits() % 2 == 0).then(|| selection_rule_report(&dist)).transpose()?;

    let mut meta = Meta::new("fcs");
    state_meta(&mut meta, cfg, &source, &e);
    meta.push("points", points);
    match shots {
        None => meta.push("mode", "exact"),
        Some(s) => meta.push("mode", "shots").push("shots", s),
    };
    let mut summary = format!("c2 from FCS = {}", short(c2));
    if let Some(p) = &parity {
        summary.push_str(&format!("  even-outcome mass = {}", short(p.even_total)));
    }
    summary.push_str(&format!("  max column deviation = {:.2e}", dist.max_column_deviation()));

    let artifact = match format {
        FormatArg::Json => json_text(
            &meta,
            &PolarOut {
                n: dist.n_qubits(),
                thetas: dist.thetas(),
                values: dist.values(),
                probs: dist.columns(),
                c2,
                even_mass: parity.map(|p| p.even),
            },
        )?,
        _ => {
            let values = dist.values();
            let mut rows = Vec::new();
            for (j, t) in dist.thetas().iter().enumerate() {
                for (v, p) in values.iter().zip(dist.column(j)) {
                    rows.push(vec![t.to_string(), v.to_string(), p.to_string()]);
                }
            }
            csv_text(&meta, &["theta", "value", "prob"], &rows)?
        }
    };
    Ok(Report {
        summary,
        artifact: wants_data(cfg).then_some(artifact),
    })
}

#[derive(Serialize)]
struct WignerOut<'a> {
    sigma: f64,
    sx: &'a [f64],
    sy: &'a [f64],
    /// `values[i][j]` at `(sx[i], sy[j])`.
    values: &'a [Vec<f64>],
}

pub fn wigner(cfg: &RunConfig) -> Result<Report> {
    let format = format_for(cfg, FormatArg::Csv, &[FormatArg::Json, FormatArg::Csv])?;
    let (e, source) = cfg.ensemble()?;
    let sigma = cfg.sigma()?;
    let step = cfg.step()?;
    let axis = default_wigner_axis(e.n_qubits(), step);
    let w = wigner_grid(&e, sigma, &axis, &axis)?;
    let (x, y, v) = w.argmax();

    let mut meta = Meta::new("wigner");
    state_meta(&mut meta, cfg, &source, &e);
    meta.push("sigma", sigma).push("step", step);
    let summary = format!("max W = {} at (sx, sy) = ({}, {})", short(v), short(x), short(y));
    let artifact = match format {
        FormatArg::Json => json_text(
            &meta,
            &WignerOut {
                sigma,
                sx: &w.sx_grid,
                sy: &w.sy_grid,
                values: &w.values,
            },
        )?,
        _ => {
            let mut header = vec!["sx\\sy".to_string()];
            header.extend(w.sy_grid.iter().map(|y| y.to_string()));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = w
                .sx_grid
                .iter()
                .zip(&w.values)
                .map(|(x, row)| std::iter::once(x.to_string()).chain(row.iter().map(|v| v.to_string())).collect())
                .collect();
            csv_text(&meta, &header, &rows)?
        }
    };
    Ok(Report {
        summary,
        artifact: wants_data(cfg).then_some(artifact),
    })
}

/// Exact or sampled readout histograms at the `S_x` and `S_y` probes, with
/// optional readout noise and mitigation.
struct ReadoutPipeline<'a> {
    shots: Option<u64>,
    seed: u64,
    noise: Option<&'a ConfusionModel>,
    mitigation: Option<ConfusionModel>,
}

impl ReadoutPipeline<'_> {
    fn histogram(&self, plan: &CountingPlan, profile: &PhaseProfile, k: usize, axis: u64) -> Result<OutcomeHistogram> {
        let theta = if axis == 0 { 0.0 } else { SY_PROBE };
        let circuit = measured_counting_circuit(plan, profile, k, theta)?;
        let seed = derive_seed(self.seed, 1000 + k as u64);
        let clean = match self.shots {
            None => exact_distribution(&circuit)?,
            Some(s) => sample_shots(&circuit, s, derive_seed(seed, axis))?,
        };
        let noisy = match (self.noise, self.shots) {
            (None, _) => clean,
            (Some(m), None) => apply_readout_noise(&clean, m)?,
            (Some(m), Some(_)) => sample_readout_noise(&clean, m, derive_seed(seed, 10 + axis))?,
        };
        Ok(match &self.mitigation {
            Some(m) => mitigate(&noisy, m)?,
            None => noisy,
        })
    }

    fn point(&self, plan: &CountingPlan, profile: &PhaseProfile, mode: CountingMode, k: usize) -> Result<SweepPoint> {
        let hx = self.histogram(plan, profile, k, 0)?;
        let hy = self.histogram(plan, profile, k, 1)?;
        let est = estimate_from_readouts(plan, mode, &hx, &hy)?;
        Ok(SweepPoint {
            k,
            c2: est.c2,
            sx: est.sx,
            success_probability: est.accepted,
            mode,
            observables: None,
            c2_std_error: None,
        })
    }
}

#[derive(Serialize)]
struct SweepRow {
    k: usize,
    c2: f64,
    sx: f64,
    success_probability: f64,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    c2_std_error: Option<f64>,
}

#[derive(Serialize)]
struct SweepOut {
    points: Vec<SweepRow>,
}

pub fn sweep(cfg: &RunConfig) -> Result<Report> {
    let format = format_for(cfg, FormatArg::Csv, &[FormatArg::Json, FormatArg::Csv])?;
    let plan = cfg.plan(Layout::LinearChain)?;
    let n = plan.n_system();
    let profile = cfg.profile(n)?;
    let mode = cfg.mode();
    let shots = cfg.shots(None)?;
    let noise = noise_model(cfg, plan.total_qubits())?;
    let mitigating = cfg.mitigate.unwrap_or(false);
    if mitigating && noise.is_none() {
        bail!("mitigate: needs a noise model");
    }
    let skip = cfg.skip_slots.clone().unwrap_or_default();
    let pipeline = ReadoutPipeline {
        shots,
        seed: cfg.seed(),
        noise: noise.as_ref(),
        mitigation: if mitigating {
            noise.as_ref().map(|m| m.with_identity_on(&skip))
        } else {
            None
        },
    };

    let points = (0..=n)
        .into_par_iter()
        .map(|k| match (&pipeline.noise, shots) {
            (None, None) => Ok(staged_sweep_point(&plan, &profile, mode, k)?),
            (None, Some(s)) => Ok(shot_sweep_point(
                &plan,
                &profile,
                mode,
                k,
                s,
                derive_seed(cfg.seed(), 1000 + k as u64),
            )?),
            (Some(_), _) => pipeline.point(&plan, &profile, mode, k),
        })
        .collect::<Result<Vec<_>>>()?;

    let mut meta = Meta::new("sweep");
    plan_meta(&mut meta, &plan, &profile);
    meta.push("mode", mode.name());
    match shots {
        None => meta.push("readout", "exact"),
        Some(s) => meta.push("readout", "shots").push("shots", s).push("seed", cfg.seed()),
    };
    if let Some(path) = &cfg.noise {
        meta.push("noise", path.display());
        meta.push("mitigate", mitigating);
        if mitigating && !skip.is_empty() {
            meta.push("skip-slots", skip.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
        }
    }

    let summary = format!(
        "C2 = [{}]  final <Sx> = {}",
        points.iter().map(|p| short(p.c2)).collect::<Vec<_>>().join(", "),
        short(points[n].sx)
    );
    let rows: Vec<SweepRow> = points
        .iter()
        .map(|p| SweepRow {
            k: p.k,
            c2: p.c2,
            sx: p.sx,
            success_probability: p.success_probability,
            mode: p.mode.name(),
            c2_std_error: p.c2_std_error,
        })
        .collect();
    let artifact = match format {
        FormatArg::Json => json_text(&meta, &SweepOut { points: rows })?,
        _ => {
            let with_se = shots.is_some() && noise.is_none();
            let mut header = vec!["k", "C2", "Sx", "success_probability", "mode"];
            if with_se {
                header.push("C2_std_error");
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut cells = vec![
                        r.k.to_string(),
                        r.c2.to_string(),
                        r.sx.to_string(),
                        r.success_probability.to_string(),
                        r.mode.to_string(),
                    ];
                    if with_se {
                        cells.push(r.c2_std_error.map(|s| s.to_string()).unwrap_or_default());
                    }
                    cells
                })
                .collect();
            csv_text(&meta, &header, &body)?
        }
    };
    Ok(Report {
        summary,
        artifact: wants_data(cfg).then_some(artifact),
    })
}

pub fn compile(cfg: &RunConfig) -> Result<Report> {
    let format = format_for(cfg, FormatArg::Quil, &[FormatArg::Quil, FormatArg::Json])?;
    let plan = cfg.plan(Layout::LinearChain)?;
    if plan.layout() != Layout::LinearChain {
        bail!("layout: native compilation targets the chain layout");
    }
    let n = plan.n_system();
    let k = cfg.coupled(n)?;
    let profile_kind = cfg
        .profile
        .unwrap_or(if cfg.thetas.is_some() { ProfileArg::Thetas } else { ProfileArg::Bare });
    let profile = match profile_kind {
        ProfileArg::Bare => {
            if cfg.thetas.is_some() {
                bail!("thetas: the bare profile fixes the phases itself");
            }
            bare_prep_profile(&plan, k)?
        }
        ProfileArg::Thetas => cfg.profile(n)?,
    };
    let nc = compile_counting_staged(&plan, &profile, k)?;
    let found = nc.two_qubit_count();
    let budget = gate_budget(k, plan.n_ancillas());
    let summary = format!(
        "{found} two-qubit gates (budget {budget}) on {} qubits; system ends on {:?}, ancillas on {:?}",
        plan.total_qubits(),
        nc.system,
        nc.ancillas
    );
    let text = match (format, cfg.theta) {
        (FormatArg::Json, theta) => {
            let mut meta = Meta::new("compile");
            plan_meta(&mut meta, &plan, &profile);
            meta.push("coupled", k).push("theta", crate::angle::format_angle(theta.unwrap_or(0.0)));
            json_text(&meta, &CircuitDto::from(&nc.measured_circuit(theta.unwrap_or(0.0))?))?
        }
        (_, Some(theta)) => Artifact {
            format: FormatArg::Quil,
            text: to_quil(&nc.measured_circuit(theta)?),
        },
        (_, None) => Artifact {
            format: FormatArg::Quil,
            text: symbolic_counting_listing(&nc)?,
        },
    };
    Ok(Report {
        summary,
        artifact: Some(text),
    })
}

pub fn sample(cfg: &RunConfig) -> Result<Report> {
    format_for(cfg, FormatArg::Json, &[FormatArg::Json])?;
    let plan = cfg.plan(Layout::LinearChain)?;
    let n = plan.n_system();
    let profile = cfg.profile(n)?;
    let k = cfg.coupled(n)?;
    let theta = cfg.theta();
    let shots = cfg.shots(Some(1000))?.ok_or_else(|| anyhow!("exact: sample needs shots"))?;
    let circuit = measured_counting_circuit(&plan, &profile, k, theta)?;
    let clean = sample_shots(&circuit, shots, cfg.seed())?;
    let hist = match noise_model(cfg, plan.total_qubits())? {
        Some(m) => sample_readout_noise(&clean, &m, derive_seed(cfg.seed(), 10))?,
        None => clean,
    };
    let condition: Vec<(usize, u8)> = (0..plan.n_ancillas()).map(|a| (n + a, 0)).collect();
    let accepted = hist.postselect(&condition).map(|(p, _)| p).unwrap_or(0.0);
    let summary = format!(
        "{shots} shots at theta = {}; all-zero ancilla fraction = {}",
        crate::angle::format_angle(theta),
        short(accepted)
    );
    Ok(Report {
        summary,
        artifact: Some(plain_json(&HistogramDto::from(&hist))?),
    })
}

pub fn calibrate_cmd(cfg: &RunConfig) -> Result<Report> {
    format_for(cfg, FormatArg::Json, &[FormatArg::Json])?;
    let path = cfg.noise.as_ref().ok_or_else(|| anyhow!("noise: calibrate needs the device model"))?;
    let truth = read_json::<ConfusionDto>(path, "noise")?.to_model()?;
    let shots = cfg.shots(Some(100_000))?.ok_or_else(|| anyhow!("exact: calibrate needs shots"))?;
    let fitted = calibrate(&SimulatedDevice { model: truth.clone() }, shots, cfg.seed())?;
    let worst = fitted
        .qubits()
        .iter()
        .zip(truth.qubits())
        .map(|(a, b)| (a.p00 - b.p00).abs().max((a.p11 - b.p11).abs()))
        .fold(0.0, f64::max);
    let summary = format!(
        "calibrated {} slots from {shots} shots per state; max deviation from the device model = {}",
        fitted.n_qubits(),
        short(worst)
    );
    Ok(Report {
        summary,
        artifact: Some(plain_json(&ConfusionDto::from(&fitted))?),
    })
}

pub fn mitigate_cmd(cfg: &RunConfig) -> Result<Report> {
    format_for(cfg, FormatArg::Json, &[FormatArg::Json])?;
    let input = cfg.input.as_ref().ok_or_else(|| anyhow!("input: mitigate needs a histogram file"))?;
    let hist = read_json::<HistogramDto>(input, "input")?.to_histogram()?;
    let model = noise_model(cfg, hist.n_bits())?.ok_or_else(|| anyhow!("noise: mitigate needs a confusion model"))?;
    let model = model.with_identity_on(cfg.skip_slots.as_deref().unwrap_or(&[]));
    let fixed = mitigate(&hist, &model)?;
    let summary = format!(
        "mitigated {} outcomes; negative quasi-probability mass = {}",
        fixed.entries().len(),
        short(fixed.negative_mass() / fixed.total())
    );
    Ok(Report {
        summary,
        artifact: Some(plain_json(&HistogramDto::from(&fixed))?),
    })
}
