//! Result table serialization.

use std::fmt::Write;

use super::ReportRow;

pub const CSV_HEADER: &str = "automaton,n,size_mode,size_param,length_mode,word_mode,property,property_param,trials,successes,frequency,ci_low,ci_high,master_seed,wall_ms";

/// `%.9g`: 9 significant digits, trailing zeros removed, exponent form
/// outside `[1e-4, 1e9)`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (8 - exp).max(0) as usize;
    strip_zeros(&format!("{x:.decimals$}")).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_row(out: &mut String, r: &ReportRow) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        field(&r.automaton),
        r.n,
        r.size_mode,
        format_float(r.size_param),
        r.length_mode,
        r.word_mode,
        r.property,
        field(&r.property_param),
        r.trials,
        r.successes,
        format_float(r.frequency),
        format_float(r.ci_low),
        format_float(r.ci_high),
        r.master_seed,
        r.wall_ms,
    );
}
