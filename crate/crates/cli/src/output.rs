//! CSV rows and number formatting.

use std::io::Write;

use anyhow::Result;

pub const CSV_HEADER: [&str; 9] = ["n", "strategy", "success_rate", "stderr", "lb", "ub", "mi_nats", "gap", "accuracy"];

/// One grid point for one strategy. Missing quantities are written as
/// empty cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepRow {
    pub n: Option<usize>,
    pub strategy: String,
    pub success_rate: Option<f64>,
    pub stderr: Option<f64>,
    pub lb: Option<f64>,
    pub ub: Option<f64>,
    pub mi_nats: Option<f64>,
    pub gap: Option<f64>,
    pub accuracy: Option<f64>,
}

/// Formats with 9 significant digits, like C's `%.9g`.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(format_sig9).unwrap_or_default()
}

pub fn write_rows<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            r.strategy.clone(),
            cell(r.success_rate),
            cell(r.stderr),
            cell(r.lb),
            cell(r.ub),
            cell(r.mi_nats),
            cell(r.gap),
            cell(r.accuracy),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(0.5), "0.5");
        assert_eq!(format_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(format_sig9(2.0 / 3.0 * 1e-7), "6.66666667e-08");
        assert_eq!(format_sig9(123456789012.0), "1.23456789e+11");
        assert_eq!(format_sig9(9.9999999999), "10");
        assert_eq!(format_sig9(-0.000123456789123), "-0.000123456789");
        assert_eq!(format_sig9(10000.0), "10000");
        assert_eq!(format_sig9(0.0), "0");
    }

    #[test]
    fn writes_header_and_blank_cells() {
        let mut buf = Vec::new();
        let row = SweepRow {
            n: Some(50),
            strategy: "bayes".into(),
            success_rate: Some(0.625),
            ..Default::default()
        };
        write_rows(&mut buf, &[row]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,strategy,success_rate,stderr,lb,ub,mi_nats,gap,accuracy\n50,bayes,0.625,,,,,,\n"
        );
    }
}
