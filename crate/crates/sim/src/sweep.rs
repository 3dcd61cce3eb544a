//! Boost-speed sweeps over one or more packet widths.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use helicity_core::entanglement::{reduced_single_with, reduced_two_with, wootters_concurrence, NodeOperators};
use helicity_core::linalg::c64;
use helicity_core::quadrature::MomentumGrid;
use helicity_core::states::{
    correlated_state, product_state, LowRankState, SchmidtTerm, SingleParticleAmplitude, TwoParticleState, WavePacket,
};
use rayon::prelude::*;

use crate::config::{mode_name, state_name, PacketSpec, ScenarioConfig, StateKind};
use crate::error::{SimError, SimResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One output line of a sweep.
pub trait CsvRow: Send {
    const HEADER: &'static str;
    fn v(&self) -> f64;
    /// Values in header order.
    fn fields(&self) -> Vec<f64>;
}

/// Two-particle sweep row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairRow {
    pub v: f64,
    pub eta: f64,
    pub concurrence: f64,
    pub purity: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
    /// Largest change of the four measures when `(N_r, N_θ)` is refined.
    pub plateau_delta: f64,
}

impl CsvRow for PairRow {
    const HEADER: &'static str = "v,eta,concurrence,purity,entropy_a,entropy_b,plateau_delta";

    fn v(&self) -> f64 {
        self.v
    }

    fn fields(&self) -> Vec<f64> {
        vec![self.v, self.eta, self.concurrence, self.purity, self.entropy_a, self.entropy_b, self.plateau_delta]
    }
}

/// Single-particle sweep row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleRow {
    pub v: f64,
    pub eta: f64,
    pub entropy: f64,
    pub purity: f64,
    pub plateau_delta: f64,
}

impl CsvRow for SingleRow {
    const HEADER: &'static str = "v,eta,entropy,purity,plateau_delta";

    fn v(&self) -> f64 {
        self.v
    }

    fn fields(&self) -> Vec<f64> {
        vec![self.v, self.eta, self.entropy, self.purity, self.plateau_delta]
    }
}

/// Rows for one packet width, ascending in `v`.
#[derive(Clone, Debug)]
pub struct Curve<R> {
    pub width: f64,
    pub rows: Vec<R>,
}

#[derive(Clone, Debug)]
pub struct SweepResult<R> {
    pub config: ScenarioConfig,
    pub curves: Vec<Curve<R>>,
    pub wall_time: Duration,
    pub version: &'static str,
}

/// `η = −artanh v`, so `η ≤ 0` and `v = −tanh η`.
pub fn eta_for_speed(v: f64) -> f64 {
    // adding 0.0 turns the -0.0 at v = 0 into +0.0
    -v.atanh() + 0.0
}

/// Two-particle sweep: for each width and speed, the reduced matrix of the
/// boosted state and its concurrence, purity and marginal entropies.
pub fn run_sweep(config: &ScenarioConfig) -> SimResult<SweepResult<PairRow>> {
    if config.state == StateKind::Single {
        return Err(SimError::Config("state = single describes one particle; use the `single` command".into()));
    }
    run(config, |cfg, grid, width| {
        let state = Arc::new(two_particle_state(cfg, grid, width)?);
        Ok(move |ops: &NodeOperators| pair_measures(&state, ops))
    })
    .map(|(curves, wall_time)| {
        let curves = curves
            .into_iter()
            .map(|(width, points)| Curve {
                width,
                rows: points
                    .into_iter()
                    .map(|(v, eta, m, delta)| PairRow {
                        v,
                        eta,
                        concurrence: m[0],
                        purity: m[1],
                        entropy_a: m[2],
                        entropy_b: m[3],
                        plateau_delta: delta,
                    })
                    .collect(),
            })
            .collect();
        SweepResult { config: config.clone(), curves, wall_time, version: VERSION }
    })
}

/// Single-particle sweep: entropy and purity of the reduced 2×2 matrix.
pub fn run_single(config: &ScenarioConfig) -> SimResult<SweepResult<SingleRow>> {
    if config.state != StateKind::Single {
        return Err(SimError::Config(format!(
            "the `single` command needs state = single, got state = {}",
            state_name(config.state)
        )));
    }
    run(config, |cfg, grid, width| {
        let amp = Arc::new(amplitude(cfg.packet_a, cfg.helicity_a, width, grid)?);
        Ok(move |ops: &NodeOperators| {
            let rho = reduced_single_with(&amp, ops)?;
            Ok(vec![rho.von_neumann_entropy()?, rho.purity()])
        })
    })
    .map(|(curves, wall_time)| {
        let curves = curves
            .into_iter()
            .map(|(width, points)| Curve {
                width,
                rows: points
                    .into_iter()
                    .map(|(v, eta, m, delta)| SingleRow { v, eta, entropy: m[0], purity: m[1], plateau_delta: delta })
                    .collect(),
            })
            .collect();
        SweepResult { config: config.clone(), curves, wall_time, version: VERSION }
    })
}

type Point = (f64, f64, Vec<f64>, f64);
type WidthPoints = Vec<(f64, Vec<Point>)>;

/// Shared driver. `prepare` builds, per width and grid, a closure that turns
/// the node operators of one speed into the reported measures.
fn run<P, M>(config: &ScenarioConfig, prepare: P) -> SimResult<(WidthPoints, Duration)>
where
    P: Fn(&ScenarioConfig, Arc<MomentumGrid>, f64) -> SimResult<M>,
    M: Fn(&NodeOperators) -> helicity_core::Result<Vec<f64>> + Send + Sync,
{
    config.validate()?;
    let start = Instant::now();
    let mut setups = Vec::with_capacity(config.widths.len());
    for &width in &config.widths {
        let ctx = |e| SimError::core(format!("building the grid for width {width}"), e);
        let grid = Arc::new(
            MomentumGrid::new(config.n_radial, config.n_polar, config.n_azimuthal, config.cutoff * width)
                .map_err(ctx)?,
        );
        let fine = Arc::new(grid.refined(config.refine).map_err(ctx)?);
        let coarse_eval = prepare(config, grid.clone(), width)?;
        let fine_eval = prepare(config, fine.clone(), width)?;
        setups.push((width, grid, coarse_eval, fine, fine_eval));
    }

    let tasks: Vec<(usize, f64)> = (0..setups.len()).flat_map(|w| config.speeds.iter().map(move |&v| (w, v))).collect();
    let mut points: Vec<(usize, Point)> = tasks
        .par_iter()
        .map(|&(w, v)| {
            let (width, grid, coarse_eval, fine, fine_eval) = &setups[w];
            let eta = eta_for_speed(v);
            let ctx = |e| SimError::core(format!("width {width}, v = {v}"), e);
            let coarse = coarse_eval(&NodeOperators::new(grid, eta, config.mode).map_err(ctx)?).map_err(ctx)?;
            let refined = fine_eval(&NodeOperators::new(fine, eta, config.mode).map_err(ctx)?).map_err(ctx)?;
            let delta = coarse.iter().zip(&refined).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Ok((w, (v, eta, coarse, delta)))
        })
        .collect::<SimResult<_>>()?;
    points.sort_by(|a, b| a.0.cmp(&b.0).then(a.1 .0.total_cmp(&b.1 .0)));

    let mut curves: Vec<(f64, Vec<Point>)> = setups.iter().map(|s| (s.0, Vec::new())).collect();
    for (w, p) in points {
        curves[w].1.push(p);
    }
    Ok((curves, start.elapsed()))
}

fn pair_measures(state: &TwoParticleState, ops: &NodeOperators) -> helicity_core::Result<Vec<f64>> {
    let rho = reduced_two_with(state, ops)?;
    Ok(vec![
        wootters_concurrence(&rho)?,
        rho.purity(),
        rho.partial_trace_b().von_neumann_entropy()?,
        rho.partial_trace_a().von_neumann_entropy()?,
    ])
}

fn packet(spec: PacketSpec, width: f64) -> SimResult<WavePacket> {
    WavePacket::new(spec.scale * width, spec.shape).map_err(|e| SimError::core("building a wavepacket", e))
}

fn amplitude(
    spec: PacketSpec,
    helicity: helicity_core::states::Helicity,
    width: f64,
    grid: Arc<MomentumGrid>,
) -> SimResult<SingleParticleAmplitude> {
    SingleParticleAmplitude::from_packet(&packet(spec, width)?, helicity, grid)
        .normalized()
        .map_err(|e| SimError::core("normalising a wavepacket on the grid", e))
}

/// The configured two-particle state on `grid`, normalised on that grid.
pub fn two_particle_state(cfg: &ScenarioConfig, grid: Arc<MomentumGrid>, width: f64) -> SimResult<TwoParticleState> {
    let ctx = |e| SimError::core(format!("building the {} state", state_name(cfg.state)), e);
    let state = match cfg.state {
        StateKind::Product => product_state(
            &packet(cfg.packet_a, width)?,
            &packet(cfg.packet_b, width)?,
            cfg.helicity_a,
            cfg.helicity_b,
            grid,
        )
        .map_err(ctx)?,
        StateKind::Correlated => {
            correlated_state(&packet(cfg.packet_a, width)?, &packet(cfg.packet_b, width)?, grid).map_err(ctx)?
        }
        StateKind::Custom => {
            let mut terms = Vec::with_capacity(cfg.terms.len());
            for t in &cfg.terms {
                terms.push(SchmidtTerm {
                    coefficient: c64(t.coefficient.0, t.coefficient.1),
                    a: amplitude(t.a, t.helicity_a, width, grid.clone())?,
                    b: amplitude(t.b, t.helicity_b, width, grid.clone())?,
                });
            }
            TwoParticleState::LowRank(LowRankState::new(terms).and_then(|s| s.normalized()).map_err(ctx)?)
        }
        StateKind::Single => return Err(SimError::Config("state = single has no second particle".into())),
    };
    match cfg.symmetrize {
        Some(exchange) => state.symmetrized(exchange).map_err(ctx),
        None => Ok(state),
    }
}

/// CSV text: fixed header, `{:.16e}` fields (17 significant digits), `\n` endings.
pub fn to_csv<R: CsvRow>(rows: &[R]) -> String {
    let mut out = String::with_capacity(rows.len() * 24 * 7 + 64);
    out.push_str(R::HEADER);
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.fields().iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Where each curve goes: `path` itself for a single width, otherwise
/// `<stem>_eps<width>.<ext>` next to it.
pub fn output_paths(path: &Path, widths: &[f64]) -> Vec<PathBuf> {
    if widths.len() == 1 {
        return vec![path.to_owned()];
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sweep".into());
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    widths.iter().map(|w| path.with_file_name(format!("{stem}_eps{w}{ext}"))).collect()
}

/// Writes one CSV per curve and returns the paths written.
pub fn write_csv<R: CsvRow>(result: &SweepResult<R>, path: &Path) -> SimResult<Vec<PathBuf>> {
    let widths: Vec<f64> = result.curves.iter().map(|c| c.width).collect();
    let paths = output_paths(path, &widths);
    for (curve, p) in result.curves.iter().zip(&paths) {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| SimError::Io { path: dir.to_owned(), source })?;
        }
        std::fs::write(p, to_csv(&curve.rows)).map_err(|source| SimError::Io { path: p.clone(), source })?;
    }
    Ok(paths)
}

/// Human-readable run report: version, config echo, timing, per-curve
/// summary and any caveats about the scenario.
pub fn report<R: CsvRow>(command: &str, result: &SweepResult<R>, written: &[PathBuf]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "helicity-sim {} ({command})", result.version);
    let _ = writeln!(out, "config:");
    for line in result.config.to_text().lines() {
        let _ = writeln!(out, "  {line}");
    }
    let _ = writeln!(out, "wall time: {:.3} s", result.wall_time.as_secs_f64());
    for (i, curve) in result.curves.iter().enumerate() {
        let worst = curve.rows.iter().map(|r| *r.fields().last().unwrap_or(&0.0)).fold(0.0, f64::max);
        let _ = write!(out, "width {}: {} rows, max plateau delta {worst:.3e}", curve.width, curve.rows.len());
        if R::HEADER.contains("concurrence") {
            let c: Vec<f64> = curve.rows.iter().map(|r| r.fields()[2]).collect();
            let (lo, hi) = c.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
            let _ = write!(out, ", concurrence in [{lo:.6e}, {hi:.6e}]");
        }
        if let Some(p) = written.get(i) {
            let _ = write!(out, " -> {}", p.display());
        }
        out.push('\n');
    }
    let _ = writeln!(out, "mode: {}", mode_name(result.config.mode));
    if result.config.state == StateKind::Product && result.config.symmetrize.is_none() {
        out.push_str(PRODUCT_STATE_NOTE);
    }
    out
}

/// Caveat printed with every product-state sweep.
pub const PRODUCT_STATE_NOTE: &str = "\
note: product initial state. A boost acts on each particle separately, so the
  reduced two-particle matrix stays the tensor product of the two boosted
  single-particle matrices and its concurrence is zero up to round-off at every
  speed (separability). Positive concurrence curves for the Gaussian product
  state are therefore NOT reproduced by this computation.
";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_sign_convention() {
        assert_eq!(eta_for_speed(0.0).to_bits(), 0.0f64.to_bits());
        for v in [0.1, 0.5, 0.99] {
            let eta = eta_for_speed(v);
            assert!(eta < 0.0 && (-eta.tanh() - v).abs() < 1e-15);
        }
    }

    #[test]
    fn csv_format_is_fixed() {
        let row = PairRow {
            v: 0.5,
            eta: -0.25,
            concurrence: 1.0,
            purity: 1.0,
            entropy_a: 0.0,
            entropy_b: 0.0,
            plateau_delta: 0.125,
        };
        let csv = to_csv(&[row]);
        assert_eq!(
            csv,
            "v,eta,concurrence,purity,entropy_a,entropy_b,plateau_delta\n\
             5.0000000000000000e-1,-2.5000000000000000e-1,1.0000000000000000e0,1.0000000000000000e0,\
             0.0000000000000000e0,0.0000000000000000e0,1.2500000000000000e-1\n"
        );
    }

    #[test]
    fn output_paths_per_width() {
        let p = Path::new("out/run.csv");
        assert_eq!(output_paths(p, &[1.0]), vec![PathBuf::from("out/run.csv")]);
        assert_eq!(
            output_paths(p, &[0.01, 10.0]),
            vec![PathBuf::from("out/run_eps0.01.csv"), PathBuf::from("out/run_eps10.csv")]
        );
    }

    #[test]
    fn single_particle_at_rest_is_pure() {
        let cfg = ScenarioConfig::parse(
            "state = single\nwidths = 1\nspeeds = 0, 0.9\nn_radial = 8\nn_polar = 8\nn_azimuthal = 4",
            "t",
        )
        .unwrap();
        let res = run_single(&cfg).unwrap();
        let rows = &res.curves[0].rows;
        assert!(rows[0].entropy.abs() < 1e-12 && (rows[0].purity - 1.0).abs() < 1e-12);
        assert!(rows[1].entropy > 1e-3);
    }

    #[test]
    fn commands_check_the_state_kind() {
        let single = ScenarioConfig::parse("state = single", "t").unwrap();
        assert_eq!(run_sweep(&single).unwrap_err().exit_code(), 2);
        let pair = ScenarioConfig::parse("state = product", "t").unwrap();
        assert_eq!(run_single(&pair).unwrap_err().exit_code(), 2);
    }
}
