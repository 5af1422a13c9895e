//! Text output. All numbers use the shortest representation that round-trips
//! (never more than 17 significant digits), `.` as decimal separator and `\n`
//! line endings, so identical runs give byte-identical files.

use std::fmt::Write;

use crate::config::{Command, RunConfig};

/// Shortest round-trip decimal; scientific notation outside `[1e-5, 1e16)`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(",")
}

/// Accumulates one output document; written out in a single piece.
#[derive(Debug, Default)]
pub struct Document {
    text: String,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    /// `#`-prefixed lines echoing the resolved configuration.
    pub fn config_header(&mut self, command: Command, cfg: &RunConfig) {
        self.comment(&format!("command = {}", command.name()));
        let fields: [(&str, String); 12] = [
            ("theta", fmt_f64(cfg.theta)),
            ("r_values", fmt_list(&cfg.r_values)),
            ("tau_start", fmt_f64(cfg.tau_start)),
            ("tau_end", fmt_f64(cfg.tau_end)),
            ("n_tau", cfg.n_tau.to_string()),
            ("engine", cfg.engine.to_string()),
            ("tol", fmt_f64(cfg.tol)),
            ("output_path", cfg.output_path.clone()),
            ("seed", cfg.seed.to_string()),
            ("samples", cfg.samples.to_string()),
            ("fiber_length", fmt_f64(cfg.fiber_length)),
            ("nu_bar", fmt_f64(cfg.nu_bar)),
        ];
        for (k, v) in fields {
            self.comment(&format!("{k} = {v}"));
        }
    }

    pub fn comment(&mut self, line: &str) {
        self.text.push_str("# ");
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn line(&mut self, line: &str) {
        self.text.push_str(line);
        self.text.push('\n');
    }

    /// A CSV row of numbers.
    pub fn row(&mut self, values: &[f64]) {
        for (i, &v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            let _ = write!(self.text, "{}", fmt_f64(v));
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
