//! Scenario files: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! state     = correlated      # product | correlated | custom | single
//! mode      = helicity        # helicity | spin
//! widths    = 0.01, 1, 10     # packet widths ε/m, one sweep each
//! v_max     = 0.98
//! v_count   = 50
//! n_radial  = 32
//! n_polar   = 32
//! n_azimuthal = 8
//! refine    = 2
//! output    = sweep.csv
//! ```
//!
//! Custom states list their product terms explicitly. Each `term` line holds
//! `re, im, shape_a, scale_a, helicity_a, shape_b, scale_b, helicity_b`, where
//! `scale` multiplies the sweep width:
//!
//! ```text
//! state = custom
//! term  = 1, 0, gaussian, 1, +, gaussian, 1, +
//! term  = 1, 0, dipole_z, 1, -, gaussian, 1, -
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use helicity_core::entanglement::Mode;
use helicity_core::states::{Exchange, Helicity, PacketShape};

use crate::error::{SimError, SimResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Product,
    Correlated,
    Custom,
    Single,
}

/// Packet of one factor; the absolute width is `scale · ε` for the sweep's `ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketSpec {
    pub shape: PacketShape,
    pub scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TermSpec {
    pub coefficient: (f64, f64),
    pub a: PacketSpec,
    pub helicity_a: Helicity,
    pub b: PacketSpec,
    pub helicity_b: Helicity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub state: StateKind,
    pub mode: Mode,
    /// Packet widths `ε/m`; the sweep runs once per entry.
    pub widths: Vec<f64>,
    pub packet_a: PacketSpec,
    pub packet_b: PacketSpec,
    pub helicity_a: Helicity,
    pub helicity_b: Helicity,
    pub terms: Vec<TermSpec>,
    pub symmetrize: Option<Exchange>,
    /// Boost speeds in `[0, 1)`, sorted ascending.
    pub speeds: Vec<f64>,
    pub n_radial: usize,
    pub n_polar: usize,
    pub n_azimuthal: usize,
    /// Radial cutoff in units of `ε`; the grid ends at `cutoff · ε`.
    pub cutoff: f64,
    pub refine: usize,
    pub output: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let gaussian = PacketSpec { shape: PacketShape::Gaussian, scale: 1.0 };
        Self {
            state: StateKind::Product,
            mode: Mode::Helicity,
            widths: vec![0.01, 1.0, 10.0],
            packet_a: gaussian,
            packet_b: gaussian,
            helicity_a: Helicity::Plus,
            helicity_b: Helicity::Plus,
            terms: Vec::new(),
            symmetrize: None,
            speeds: linspace(0.98, 50),
            n_radial: 32,
            n_polar: 32,
            n_azimuthal: 8,
            cutoff: 8.0,
            refine: 2,
            output: None,
        }
    }
}

/// `count` evenly spaced speeds from 0 to `v_max` inclusive.
pub fn linspace(v_max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.0];
    }
    (0..count).map(|k| v_max * k as f64 / (count - 1) as f64).collect()
}

impl ScenarioConfig {
    pub fn from_file(path: &Path) -> SimResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| SimError::Io { path: path.to_owned(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses scenario text; `origin` only labels error messages.
    pub fn parse(text: &str, origin: &str) -> SimResult<Self> {
        let syntax = |line: usize, message: String| SimError::ConfigSyntax { path: origin.to_owned(), line, message };
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut cfg = Self::default();
        let (mut v_max, mut v_count, mut speeds) = (None, None, None);

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| syntax(line_no, format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key != "term" {
                if let Some(first) = seen.insert(key.to_owned(), line_no) {
                    return Err(syntax(line_no, format!("`{key}` already set on line {first}")));
                }
            }
            let at = |e: String| syntax(line_no, e);
            match key {
                "state" => cfg.state = parse_state(value).map_err(at)?,
                "mode" => cfg.mode = parse_mode(value).map_err(at)?,
                "widths" => cfg.widths = parse_list(value).map_err(at)?,
                "packet_a" => cfg.packet_a.shape = parse_shape(value).map_err(at)?,
                "packet_b" => cfg.packet_b.shape = parse_shape(value).map_err(at)?,
                "width_scale_b" => cfg.packet_b.scale = parse_num(value).map_err(at)?,
                "helicity_a" => cfg.helicity_a = parse_helicity(value).map_err(at)?,
                "helicity_b" => cfg.helicity_b = parse_helicity(value).map_err(at)?,
                "term" => cfg.terms.push(parse_term(value).map_err(at)?),
                "symmetrize" => cfg.symmetrize = parse_exchange(value).map_err(at)?,
                "speeds" => speeds = Some(parse_list(value).map_err(at)?),
                "v_max" => v_max = Some(parse_num(value).map_err(at)?),
                "v_count" => v_count = Some(parse_count(value).map_err(at)?),
                "n_radial" => cfg.n_radial = parse_count(value).map_err(at)?,
                "n_polar" => cfg.n_polar = parse_count(value).map_err(at)?,
                "n_azimuthal" => cfg.n_azimuthal = parse_count(value).map_err(at)?,
                "cutoff" => cfg.cutoff = parse_num(value).map_err(at)?,
                "refine" => cfg.refine = parse_count(value).map_err(at)?,
                "output" => cfg.output = Some(PathBuf::from(value)),
                _ => return Err(syntax(line_no, format!("unknown key `{key}`"))),
            }
        }

        match (speeds, v_max, v_count) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(SimError::Config("give either `speeds` or `v_max`/`v_count`, not both".into()))
            }
            (Some(list), None, None) => cfg.speeds = list,
            (None, max, count) => cfg.speeds = linspace(max.unwrap_or(0.98), count.unwrap_or(50)),
        }
        cfg.speeds.sort_by(f64::total_cmp);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the invariants every run relies on.
    pub fn validate(&self) -> SimResult<()> {
        let bad = |m: String| Err(SimError::Config(m));
        if self.widths.is_empty() || self.widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return bad(format!("widths must be positive, got {:?}", self.widths));
        }
        if self.speeds.is_empty() || self.speeds.iter().any(|v| !(0.0..1.0).contains(v)) {
            return bad(format!("speeds must lie in [0, 1), got {:?}", self.speeds));
        }
        if self.n_radial < 2 || self.n_polar < 2 || self.n_azimuthal < 2 {
            return bad("grid resolutions must be at least 2".into());
        }
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return bad(format!("cutoff must be positive, got {}", self.cutoff));
        }
        if self.refine < 2 {
            return bad(format!("refine must be at least 2, got {}", self.refine));
        }
        for p in [self.packet_a, self.packet_b].iter().chain(self.terms.iter().flat_map(|t| [&t.a, &t.b])) {
            if !(p.scale.is_finite() && p.scale > 0.0) {
                return bad(format!("width scales must be positive, got {}", p.scale));
            }
        }
        match self.state {
            StateKind::Custom if self.terms.is_empty() => bad("state = custom needs at least one `term` line".into()),
            StateKind::Custom => Ok(()),
            _ if !self.terms.is_empty() => bad("`term` lines are only allowed with state = custom".into()),
            StateKind::Single if self.symmetrize.is_some() => {
                bad("a single-particle state cannot be symmetrised".into())
            }
            _ => Ok(()),
        }
    }

    /// The config file that parses back to this config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        put("state", state_name(self.state).into());
        put("mode", mode_name(self.mode).into());
        put("widths", join(&self.widths));
        if self.state == StateKind::Custom {
            for t in &self.terms {
                put("term", t.to_string());
            }
        } else {
            put("packet_a", shape_name(self.packet_a.shape).into());
            put("helicity_a", helicity_name(self.helicity_a).into());
            if self.state != StateKind::Single {
                put("packet_b", shape_name(self.packet_b.shape).into());
                put("width_scale_b", self.packet_b.scale.to_string());
                put("helicity_b", helicity_name(self.helicity_b).into());
            }
        }
        if self.state != StateKind::Single {
            put("symmetrize", exchange_name(self.symmetrize).into());
        }
        put("speeds", join(&self.speeds));
        put("n_radial", self.n_radial.to_string());
        put("n_polar", self.n_polar.to_string());
        put("n_azimuthal", self.n_azimuthal.to_string());
        put("cutoff", self.cutoff.to_string());
        put("refine", self.refine.to_string());
        if let Some(p) = &self.output {
            put("output", p.display().to_string());
        }
        out
    }
}

impl fmt::Display for TermSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, {}, {}, {}, {}, {}, {}, {}",
            self.coefficient.0,
            self.coefficient.1,
            shape_name(self.a.shape),
            self.a.scale,
            helicity_name(self.helicity_a),
            shape_name(self.b.shape),
            self.b.scale,
            helicity_name(self.helicity_b)
        )
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

pub fn state_name(s: StateKind) -> &'static str {
    match s {
        StateKind::Product => "product",
        StateKind::Correlated => "correlated",
        StateKind::Custom => "custom",
        StateKind::Single => "single",
    }
}

pub fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Helicity => "helicity",
        Mode::Spin => "spin",
    }
}

fn shape_name(s: PacketShape) -> &'static str {
    match s {
        PacketShape::Gaussian => "gaussian",
        PacketShape::DipoleZ => "dipole_z",
    }
}

fn helicity_name(h: Helicity) -> &'static str {
    match h {
        Helicity::Plus => "+",
        Helicity::Minus => "-",
    }
}

fn exchange_name(e: Option<Exchange>) -> &'static str {
    match e {
        None => "none",
        Some(Exchange::Symmetric) => "symmetric",
        Some(Exchange::Antisymmetric) => "antisymmetric",
    }
}

fn parse_state(v: &str) -> Result<StateKind, String> {
    match v {
        "product" => Ok(StateKind::Product),
        "correlated" => Ok(StateKind::Correlated),
        "custom" => Ok(StateKind::Custom),
        "single" => Ok(StateKind::Single),
        _ => Err(format!("state must be product, correlated, custom or single, got `{v}`")),
    }
}

pub fn parse_mode(v: &str) -> Result<Mode, String> {
    match v {
        "helicity" => Ok(Mode::Helicity),
        "spin" => Ok(Mode::Spin),
        _ => Err(format!("mode must be helicity or spin, got `{v}`")),
    }
}

fn parse_shape(v: &str) -> Result<PacketShape, String> {
    match v {
        "gaussian" => Ok(PacketShape::Gaussian),
        "dipole_z" => Ok(PacketShape::DipoleZ),
        _ => Err(format!("packet must be gaussian or dipole_z, got `{v}`")),
    }
}

fn parse_helicity(v: &str) -> Result<Helicity, String> {
    match v {
        "+" | "+1/2" | "plus" => Ok(Helicity::Plus),
        "-" | "-1/2" | "minus" => Ok(Helicity::Minus),
        _ => Err(format!("helicity must be + or -, got `{v}`")),
    }
}

fn parse_exchange(v: &str) -> Result<Option<Exchange>, String> {
    match v {
        "none" => Ok(None),
        "symmetric" => Ok(Some(Exchange::Symmetric)),
        "antisymmetric" => Ok(Some(Exchange::Antisymmetric)),
        _ => Err(format!("symmetrize must be none, symmetric or antisymmetric, got `{v}`")),
    }
}

fn parse_num(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("expected a number, got `{v}`"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, got `{v}`"))
    }
}

fn parse_count(v: &str) -> Result<usize, String> {
    v.parse().map_err(|_| format!("expected a non-negative integer, got `{v}`"))
}

fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    v.split(',').map(|x| parse_num(x.trim())).collect()
}

fn parse_term(v: &str) -> Result<TermSpec, String> {
    let f: Vec<&str> = v.split(',').map(str::trim).collect();
    if f.len() != 8 {
        return Err(format!("term needs 8 comma-separated fields, got {}", f.len()));
    }
    Ok(TermSpec {
        coefficient: (parse_num(f[0])?, parse_num(f[1])?),
        a: PacketSpec { shape: parse_shape(f[2])?, scale: parse_num(f[3])? },
        helicity_a: parse_helicity(f[4])?,
        b: PacketSpec { shape: parse_shape(f[5])?, scale: parse_num(f[6])? },
        helicity_b: parse_helicity(f[7])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_documented_sweep() {
        let cfg = ScenarioConfig::parse("", "empty").unwrap();
        assert_eq!(cfg.widths, vec![0.01, 1.0, 10.0]);
        assert_eq!(cfg.speeds.len(), 50);
        assert_eq!(cfg.speeds[0], 0.0);
        assert!((cfg.speeds[49] - 0.98).abs() < 1e-15);
        assert!((cfg.speeds[1] - 0.02).abs() < 1e-15);
        assert_eq!((cfg.n_radial, cfg.n_polar, cfg.n_azimuthal, cfg.refine), (32, 32, 8, 2));
    }

    #[test]
    fn parses_every_key() {
        let text = "
            # comment line
            state = correlated   # trailing comment
            mode = spin
            widths = 0.5
            packet_a = dipole_z
            packet_b = gaussian
            width_scale_b = 1.5
            helicity_a = -
            helicity_b = +
            symmetrize = symmetric
            speeds = 0.9, 0, 0.5
            n_radial = 8
            n_polar = 6
            n_azimuthal = 4
            cutoff = 6
            refine = 3
            output = out/run.csv
        ";
        let cfg = ScenarioConfig::parse(text, "t").unwrap();
        assert_eq!(cfg.state, StateKind::Correlated);
        assert_eq!(cfg.mode, Mode::Spin);
        assert_eq!(cfg.packet_a.shape, PacketShape::DipoleZ);
        assert_eq!(cfg.packet_b.scale, 1.5);
        assert_eq!(cfg.helicity_a, Helicity::Minus);
        assert_eq!(cfg.symmetrize, Some(Exchange::Symmetric));
        assert_eq!(cfg.speeds, vec![0.0, 0.5, 0.9]);
        assert_eq!((cfg.n_radial, cfg.n_polar, cfg.n_azimuthal, cfg.refine), (8, 6, 4, 3));
        assert_eq!(cfg.output, Some(PathBuf::from("out/run.csv")));
        let again = ScenarioConfig::parse(&cfg.to_text(), "echo").unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn custom_terms_round_trip() {
        let text = "state = custom\nterm = 1, 0, gaussian, 1, +, dipole_z, 2, -\nterm = 0, -0.5, gaussian, 1, -, gaussian, 1, +\n";
        let cfg = ScenarioConfig::parse(text, "t").unwrap();
        assert_eq!(cfg.terms.len(), 2);
        assert_eq!(cfg.terms[1].coefficient, (0.0, -0.5));
        assert_eq!(ScenarioConfig::parse(&cfg.to_text(), "echo").unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "speeds = 1.0",
            "speeds = -0.1",
            "widths = 0",
            "n_radial = 1",
            "refine = 1",
            "mode = sideways",
            "colour = blue",
            "mode = spin\nmode = helicity",
            "just words",
            "state = custom",
            "term = 1, 0, gaussian, 1, +, gaussian, 1, +",
            "speeds = 0.1\nv_max = 0.5",
            "cutoff = nan",
        ] {
            assert!(ScenarioConfig::parse(text, "t").is_err(), "accepted `{text}`");
        }
        let err = ScenarioConfig::parse("a = 1\nmode = x", "f.cfg").unwrap_err();
        assert!(err.to_string().starts_with("f.cfg:1:"));
        assert_eq!(err.exit_code(), 2);
    }
}
