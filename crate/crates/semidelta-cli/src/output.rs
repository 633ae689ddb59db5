//! CSV tables and the gnuplot script.

use crate::suites::{Row, Summary};
use std::fs::File;
use std::path::Path;

pub const ERRORS_FILE: &str = "errors.csv";
pub const SUMMARY_FILE: &str = "sweep_summary.csv";
pub const PLOT_FILE: &str = "plots.gp";

/// Every right-hand-side term any suite can report, in column order.
pub const TERM_COLUMNS: [&str; 12] = [
    "power",
    "stretched",
    "momentum_power",
    "momentum_stretched",
    "position",
    "binding",
    "collision",
    "momentum",
    "position_wave",
    "wall_scale",
    "bound",
    "tolerance",
];

const LEAD_COLUMNS: [&str; 10] = ["suite", "case", "hbar", "m", "alpha", "sigma0", "q", "p", "t", "lhs"];
const SUMMARY_COLUMNS: [&str; 9] = ["suite", "case", "t", "points", "slope", "r2", "C", "status", "note"];

/// 17 significant digits.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

/// Open writers for both tables; rows are flushed per suite.
pub struct Sink {
    errors: csv::Writer<File>,
    summary: csv::Writer<File>,
}

impl Sink {
    pub fn create(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let mut errors = csv::Writer::from_path(dir.join(ERRORS_FILE))?;
        let header: Vec<&str> = LEAD_COLUMNS
            .iter()
            .chain(&TERM_COLUMNS)
            .chain(&["fitted_C", "fitted_C_flag"])
            .copied()
            .collect();
        errors.write_record(&header)?;
        let mut summary = csv::Writer::from_path(dir.join(SUMMARY_FILE))?;
        summary.write_record(SUMMARY_COLUMNS)?;
        errors.flush()?;
        summary.flush()?;
        std::fs::write(dir.join(PLOT_FILE), PLOT_SCRIPT)?;
        Ok(Self { errors, summary })
    }

    pub fn write(&mut self, rows: &[Row], summaries: &[Summary]) -> std::io::Result<()> {
        for r in rows {
            self.errors.write_record(error_record(r))?;
        }
        for s in summaries {
            self.summary.write_record(summary_record(s))?;
        }
        self.errors.flush()?;
        self.summary.flush()
    }
}

fn error_record(r: &Row) -> Vec<String> {
    let s = &r.scenario;
    let mut rec = vec![
        r.suite.to_string(),
        r.case.clone(),
        float(s.hbar),
        float(s.mass),
        float(s.alpha),
        float(s.sigma0),
        float(s.q),
        float(s.p),
        opt(r.t),
        float(r.lhs),
    ];
    for name in TERM_COLUMNS {
        rec.push(opt(r.terms.iter().find(|t| t.name == name).map(|t| t.value)));
    }
    rec.push(opt(r.fitted_c));
    rec.push(if r.in_fit { "fit" } else { "excluded" }.to_string());
    rec
}

fn summary_record(s: &Summary) -> Vec<String> {
    vec![
        s.suite.to_string(),
        s.case.clone(),
        opt(s.t),
        s.points.to_string(),
        opt(s.slope),
        opt(s.r2),
        opt(s.c),
        s.status.to_string(),
        s.note.clone(),
    ]
}

const PLOT_SCRIPT: &str = r#"# gnuplot script; run from the output directory: gnuplot plots.gp
set datafile separator ","
set terminal pngcairo size 900,600
set logscale xy
set key left top
set xlabel "hbar"
set ylabel "L2 error"

# columns: 1 suite, 3 hbar, 10 lhs, 11 power, 20 wall_scale
set output "theorem1.png"
set title "time-dependent error against hbar"
plot "errors.csv" using ($1 eq "theorem1" ? $3 : 1/0):10 with linespoints title "measured", \
     "" using ($1 eq "theorem1" ? $3 : 1/0):11 with lines dashtype 2 title "power term"

set output "dirichlet.png"
set title "wall approximant gap against hbar"
plot "errors.csv" using ($1 eq "dirichlet" ? $3 : 1/0):10 with linespoints title "wall gap", \
     "" using ($1 eq "dirichlet" ? $3 : 1/0):20 with lines dashtype 2 title "hbar |p| / (m |alpha|)", \
     "" using ($1 eq "theorem1" ? $3 : 1/0):10 with linespoints title "quasiclassical error"

set output "theorem2.png"
set title "wave and scattering operator errors"
plot "errors.csv" using ($1 eq "theorem2" && strstrt(strcol(2), "wave_plus") ? $3 : 1/0):10 with linespoints title "wave +", \
     "" using ($1 eq "theorem2" && strstrt(strcol(2), "wave_minus") ? $3 : 1/0):10 with linespoints title "wave -", \
     "" using ($1 eq "theorem2" && strstrt(strcol(2), "scattering") ? $3 : 1/0):10 with linespoints title "scattering"

unset logscale x
set output "lemmas.png"
set title "lemma norms over their bounds"
set xlabel "row"
set ylabel "lhs / bound"
plot "errors.csv" using ($1 eq "lemmas" ? $0 : 1/0):($10/$21) with points title "ratio"
"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(float(0.1), "1.0000000000000001e-1");
        assert_eq!(float(0.1).parse::<f64>().unwrap(), 0.1);
        let x = 1.0 / 3.0;
        assert_eq!(float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn plot_columns_match_header() {
        let pos = |name: &str| TERM_COLUMNS.iter().position(|c| *c == name).unwrap() + LEAD_COLUMNS.len() + 1;
        assert_eq!(pos("power"), 11);
        assert_eq!(pos("wall_scale"), 20);
        assert_eq!(pos("bound"), 21);
        assert_eq!(LEAD_COLUMNS.iter().position(|c| *c == "lhs"), Some(9));
    }
}
