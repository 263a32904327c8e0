//! File formats: signal descriptors (JSON), crossing files and sample CSVs.
//!
//! Every real is written with 17 significant digits so the files round-trip
//! `f64` values exactly.

use crate::crossings::CrossingSequence;
use crate::error::{Error, Result};
use crate::siggen::{BandlimitedSignal, BpskParams, SignalKind, SincSeriesParams};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// `printf("%.17g")`.
pub fn fmt_sig17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Real serialized as a 17-significant-digit JSON number.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Sig17(f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom(format!("non-finite value {}", self.0)));
        }
        let raw = RawValue::from_string(fmt_sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sig17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(Sig17)
    }
}

fn sig_vec(v: &[f64]) -> Vec<Sig17> {
    v.iter().copied().map(Sig17).collect()
}

fn unsig(v: Vec<Sig17>) -> Vec<f64> {
    v.into_iter().map(|x| x.0).collect()
}

#[derive(Deserialize)]
struct Descriptor {
    kind: String,
    #[serde(rename = "B")]
    bandwidth: Sig17,
    #[serde(rename = "A_s")]
    sup_bound: Sig17,
    params: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct BpskDoc {
    symbols: Vec<Sig17>,
    rolloff: Sig17,
    symbol_period: Sig17,
    seed: Option<u64>,
    scale: Sig17,
    start: Sig17,
    truncation: Option<Sig17>,
}

#[derive(Serialize, Deserialize)]
struct SincDoc {
    coefficients: Vec<Sig17>,
    rate: Sig17,
    origin_index: i64,
}

#[derive(Deserialize)]
struct SumDoc {
    parts: Vec<serde_json::Value>,
}

// RawValue does not survive a round trip through `Value`, so nested
// documents are assembled as text.
fn descriptor_text(s: &BandlimitedSignal<f64>) -> Result<String> {
    let (kind, params) = match s.kind() {
        SignalKind::Bpsk => {
            let p = s.bpsk_params().unwrap();
            let doc = BpskDoc {
                symbols: sig_vec(&p.symbols),
                rolloff: Sig17(p.rolloff),
                symbol_period: Sig17(p.symbol_period),
                seed: p.seed,
                scale: Sig17(p.scale),
                start: Sig17(p.start),
                truncation: p.truncation.map(Sig17),
            };
            ("bpsk", serde_json::to_string(&doc)?)
        }
        SignalKind::SincSeries => {
            let p = s.sinc_series_params().unwrap();
            let doc = SincDoc {
                coefficients: sig_vec(&p.coefficients),
                rate: Sig17(p.rate),
                origin_index: p.origin_index,
            };
            ("sinc_series", serde_json::to_string(&doc)?)
        }
        SignalKind::Sum => {
            let parts = s
                .parts()
                .unwrap()
                .iter()
                .map(descriptor_text)
                .collect::<Result<Vec<_>>>()?;
            ("sum", format!("{{\"parts\":[{}]}}", parts.join(",")))
        }
    };
    Ok(format!(
        "{{\"kind\":\"{kind}\",\"B\":{},\"A_s\":{},\"params\":{params}}}",
        json_real(s.bandwidth())?,
        json_real(s.sup_bound())?
    ))
}

fn json_real(x: f64) -> Result<String> {
    Ok(serde_json::to_string(&Sig17(x))?)
}

/// JSON descriptor `{kind, B, A_s, params}`.
pub fn signal_to_json(s: &BandlimitedSignal<f64>) -> Result<String> {
    descriptor_text(s)
}

pub fn signal_from_json(text: &str) -> Result<BandlimitedSignal<f64>> {
    let doc: Descriptor = serde_json::from_str(text)?;
    signal_from_descriptor(doc)
}

fn signal_from_descriptor(doc: Descriptor) -> Result<BandlimitedSignal<f64>> {
    let sup = doc.sup_bound.0;
    let signal = match doc.kind.as_str() {
        "bpsk" => {
            let p: BpskDoc = serde_json::from_value(doc.params)?;
            let params = BpskParams {
                symbols: unsig(p.symbols),
                rolloff: p.rolloff.0,
                symbol_period: p.symbol_period.0,
                seed: p.seed,
                scale: p.scale.0,
                start: p.start.0,
                truncation: p.truncation.map(|x| x.0),
            };
            BandlimitedSignal::bpsk_raw(params, sup)?
        }
        "sinc_series" => {
            let p: SincDoc = serde_json::from_value(doc.params)?;
            let params = SincSeriesParams {
                coefficients: unsig(p.coefficients),
                rate: p.rate.0,
                origin_index: p.origin_index,
            };
            BandlimitedSignal::sinc_series(params, sup)?
        }
        "sum" => {
            let p: SumDoc = serde_json::from_value(doc.params)?;
            let parts = p
                .parts
                .into_iter()
                .map(|v| signal_from_descriptor(serde_json::from_value(v)?))
                .collect::<Result<Vec<_>>>()?;
            BandlimitedSignal::sum_with_bound(parts, sup)?
        }
        other => return Err(Error::Parse(format!("unknown signal kind '{other}'"))),
    };
    let b = doc.bandwidth.0;
    if (signal.bandwidth() - b).abs() > 1e-12 * b.abs() {
        return Err(Error::Parse(format!(
            "declared B = {b} disagrees with parameters (B = {})",
            signal.bandwidth()
        )));
    }
    Ok(signal)
}

pub fn write_signal(path: &Path, s: &BandlimitedSignal<f64>) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "{}", signal_to_json(s)?)?;
    f.flush()?;
    Ok(())
}

pub fn read_signal(path: &Path) -> Result<BandlimitedSignal<f64>> {
    signal_from_json(&std::fs::read_to_string(path)?)
}

/// Crossing file: `# T=.. A=.. n_first=..`, then `n,delta_n` rows.
pub fn write_crossings<W: Write>(mut w: W, c: &CrossingSequence<f64>) -> Result<()> {
    writeln!(
        w,
        "# T={} A={} n_first={}",
        fmt_sig17(c.semi_period()),
        fmt_sig17(c.amplitude()),
        c.n_first()
    )?;
    for (n, d) in c.iter() {
        writeln!(w, "{n},{}", fmt_sig17(d))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_crossings<B: BufRead>(r: B) -> Result<CrossingSequence<f64>> {
    let mut lines = r.lines();
    let header = loop {
        match lines.next() {
            Some(line) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(Error::Parse("empty crossing file".into())),
        }
    };
    let body = header
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse(format!("expected '# T=.. A=.. n_first=..', got '{header}'")))?;
    let (mut t, mut a, mut n_first) = (None, None, None);
    for field in body.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("malformed header field '{field}'")))?;
        match key {
            "T" => t = Some(parse_f64(value)?),
            "A" => a = Some(parse_f64(value)?),
            "n_first" => n_first = Some(parse_i64(value)?),
            _ => {}
        }
    }
    let missing = |k: &str| Error::Parse(format!("crossing header lacks {k}"));
    let t = t.ok_or_else(|| missing("T"))?;
    let a = a.ok_or_else(|| missing("A"))?;
    let n_first = n_first.ok_or_else(|| missing("n_first"))?;
    let mut deltas = Vec::new();
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (n, d) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected 'n,delta', got '{line}'")))?;
        let n = parse_i64(n.trim())?;
        let expect = n_first + deltas.len() as i64;
        if n != expect {
            return Err(Error::Parse(format!(
                "crossing indices not contiguous: expected {expect}, got {n}"
            )));
        }
        deltas.push(parse_f64(d.trim())?);
    }
    CrossingSequence::new(t, a, n_first, deltas)
}

pub fn save_crossings(path: &Path, c: &CrossingSequence<f64>) -> Result<()> {
    write_crossings(BufWriter::new(File::create(path)?), c)
}

pub fn load_crossings(path: &Path) -> Result<CrossingSequence<f64>> {
    read_crossings(BufReader::new(File::open(path)?))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Parse(format!("not a number: '{s}'")))
}

fn parse_i64(s: &str) -> Result<i64> {
    s.parse().map_err(|_| Error::Parse(format!("not an integer: '{s}'")))
}

/// Sample values from a CSV: comment and header lines are skipped and the
/// last column of every other row is taken.
pub fn read_samples<B: BufRead>(r: B) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let last = line.rsplit(',').next().unwrap().trim();
        match last.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if out.is_empty() => continue,
            Err(_) => {
                return Err(Error::Parse(format!(
                    "line {}: not a number: '{last}'",
                    i + 1
                )))
            }
        }
    }
    Ok(out)
}

pub fn load_samples(path: &Path) -> Result<Vec<f64>> {
    read_samples(BufReader::new(File::open(path)?))
}

/// CSV writer with `#` comment lines and 17-digit reals.
pub struct CsvWriter<W: Write> {
    inner: W,
}

impl CsvWriter<BufWriter<File>> {
    pub fn create(path: &Path) -> Result<Self> {
        Ok(CsvWriter::new(BufWriter::new(File::create(path)?)))
    }
}

impl<W: Write> CsvWriter<W> {
    pub fn new(inner: W) -> Self {
        CsvWriter { inner }
    }

    /// One `# ` line per line of `text`.
    pub fn comment(&mut self, text: &str) -> Result<()> {
        for line in text.lines() {
            writeln!(self.inner, "# {line}")?;
        }
        Ok(())
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<()> {
        writeln!(self.inner, "{}", columns.join(","))?;
        Ok(())
    }

    pub fn row(&mut self, values: &[f64]) -> Result<()> {
        let cells: Vec<String> = values.iter().map(|&v| fmt_sig17(v)).collect();
        writeln!(self.inner, "{}", cells.join(","))?;
        Ok(())
    }

    /// Row of preformatted cells.
    pub fn raw_row(&mut self, cells: &[String]) -> Result<()> {
        writeln!(self.inner, "{}", cells.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush()?;
        Ok(self.inner)
    }
}
