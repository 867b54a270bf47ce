//! Deterministic report emission: CSV tables stamped with tool version,
//! seed and config hash, plus key-value text summaries of the headline
//! reports. Identical inputs render byte-identical output.

use sha2::{Digest, Sha256};

use crate::certify::{CertificationReport, SamplingRatioReport, SincLatticeReport};
use crate::error::{Error, Result};
use crate::surface::FloorStatus;

/// Version stamped into every CSV comment row.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// First twelve hex digits of the SHA-256 of the raw config bytes.
pub fn config_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

/// Shortest-roundtrip decimal rendering; small magnitudes switch to
/// scientific notation to keep columns readable.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// A CSV table: one header row, one provenance comment row, then data.
#[derive(Debug, Clone)]
pub struct Csv {
    columns: Vec<String>,
    provenance: String,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(columns: &[&str], seed: u64, config_hash: &str) -> Self {
        Csv {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            provenance: format!(
                "# tool=mobile-sampling version={TOOL_VERSION} seed={seed} config={config_hash}"
            ),
            rows: Vec::new(),
        }
    }

    /// Appends a row of already-rendered cells.
    pub fn push(&mut self, cells: Vec<String>) {
        assert_eq!(
            cells.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(cells);
    }

    /// Appends a row of floats rendered canonically.
    pub fn push_floats(&mut self, values: &[f64]) {
        self.push(values.iter().map(|v| format_float(*v)).collect());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        out.push_str(&self.provenance);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.render())
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
    }
}

/// Renders a key-value block; values are expected pre-formatted.
pub fn key_value_block(pairs: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(v);
        out.push('\n');
    }
    out
}

fn floor_label(status: FloorStatus) -> &'static str {
    match status {
        FloorStatus::Pass => "pass",
        FloorStatus::Fail => "fail",
        FloorStatus::Skipped => "skipped",
    }
}

pub fn format_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format_float(p)
    }
}

/// Key-value rendering of a certification verdict, notes last.
pub fn certification_text(r: &CertificationReport) -> String {
    let mut pairs: Vec<(&str, String)> = vec![
        ("verdict", r.verdict.to_string()),
        ("surface", r.surface_id.clone()),
        ("spectrum", r.spectrum_id.clone()),
        ("dimension", r.dim.to_string()),
        ("density", format_float(r.density)),
        ("density_uncertainty", format_float(r.density_uncertainty)),
        ("density_budget", r.density_budget.to_string()),
        ("phi0", format_float(r.phi0)),
        ("phi0_raw", format_float(r.phi0_raw)),
        ("phi0_floor", floor_label(r.floor_status).to_string()),
        ("mean_width", format_float(r.mean_width)),
        ("mean_width_uncertainty", format_float(r.mean_width_uncertainty)),
        ("dimensional_constant", format_float(r.dimensional_constant)),
        ("threshold", format_float(r.threshold)),
        ("margin", format_float(r.margin)),
        ("uncertainty", format_float(r.uncertainty)),
    ];
    for note in &r.notes {
        pairs.push(("note", note.clone()));
    }
    key_value_block(&pairs)
}

pub fn ratio_text(r: &SamplingRatioReport) -> String {
    key_value_block(&[
        ("p", format_p(r.p)),
        ("corpus", r.corpus.to_string()),
        ("min_ratio", format_float(r.min)),
        ("lower_quartile", format_float(r.lower_quartile)),
        ("median", format_float(r.median)),
        ("upper_quartile", format_float(r.upper_quartile)),
        ("note", r.note.clone()),
    ])
}

pub fn sinc_lattice_text(r: &SincLatticeReport) -> String {
    let mut pairs: Vec<(&str, String)> = vec![
        ("dimension", r.dim.to_string()),
        ("density", format_float(r.density)),
        ("density_uncertainty", format_float(r.density_uncertainty)),
        ("candidate_single_family", format_float(r.candidate_single)),
        ("candidate_member_sum", format_float(r.candidate_sum)),
        ("mean_width", format_float(r.mean_width)),
        ("mean_width_closed_form", format_float(r.mean_width_closed_form)),
        ("mean_width_pass", r.mean_width_pass.to_string()),
        ("product", format_float(r.product)),
        ("product_pass", r.product_pass.to_string()),
        ("nodal_max", format_float(r.nodal_max)),
        ("nodal_pass", r.nodal_pass.to_string()),
    ];
    for note in &r.notes {
        pairs.push(("note", note.clone()));
    }
    key_value_block(&pairs)
}
