//! Tabular output shared by every command, rendered as CSV or JSON.

use rug::{Float, Integer, Rational};
use serde_json::{json, Map, Value};

/// Rationals longer than this are printed as decimals.
const MAX_RATIONAL_CHARS: usize = 40;
const DECIMAL_DIGITS: u32 = 30;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Uint(u64),
    /// Exact value kept as text: big integers, rationals, decimals.
    Exact(String),
    Text(String),
    Real(f64),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Uint(v) => v.to_string(),
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Real(x) => format_real(*x),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Uint(v) => json!(v),
            Cell::Exact(s) | Cell::Text(s) => json!(s),
            Cell::Real(x) => {
                let rounded: f64 = format_real(*x).parse().unwrap_or(*x);
                serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
            }
            Cell::Empty => json!(""),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Vec<(&'static str, Value)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, header: Vec<&'static str>) -> Self {
        Report { command, params: Vec::new(), header, rows: Vec::new() }
    }

    pub fn param(mut self, key: &'static str, value: Value) -> Self {
        self.params.push((key, value));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(1));
        obj.insert("command".into(), json!(self.command));
        for (k, v) in &self.params {
            obj.insert((*k).into(), v.clone());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (h, c) in self.header.iter().zip(row) {
                    m.insert((*h).into(), c.json());
                }
                Value::Object(m)
            })
            .collect();
        obj.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// `%.15g`-style rendering: 15 significant digits, trailing zeros trimmed,
/// scientific notation only for very large or small magnitudes.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `p/q` when short, otherwise a rounded fixed-point decimal with 30
/// significant digits.
pub fn format_rational(r: &Rational) -> String {
    let text = r.to_string();
    if text.len() <= MAX_RATIONAL_CHARS {
        text
    } else {
        format_decimal(r, DECIMAL_DIGITS)
    }
}

/// Exact value of a float, rendered like [`format_rational`]'s decimal branch.
pub fn format_float_decimal(f: &Float) -> String {
    match f.to_rational() {
        Some(r) => format_decimal(&r, DECIMAL_DIGITS),
        None => f.to_string(),
    }
}

fn format_decimal(r: &Rational, digits: u32) -> String {
    if *r == 0 {
        return "0".into();
    }
    let negative = *r < 0;
    let abs = Rational::from(r.abs_ref());
    // number of integer digits, possibly ≤ 0
    let int_part = Integer::from(abs.numer() / abs.denom());
    let int_digits = if int_part == 0 {
        let mut d = 0i64;
        let mut probe = abs.clone();
        while probe < 1 {
            probe *= 10u32;
            d -= 1;
        }
        d + 1
    } else {
        int_part.to_string().len() as i64
    };
    let scale = i64::from(digits) - int_digits;
    let scaled = if scale >= 0 {
        abs * Integer::from(Integer::u_pow_u(10, scale as u32))
    } else {
        abs / Integer::from(Integer::u_pow_u(10, (-scale) as u32))
    };
    let rounded = Integer::from((scaled + Rational::from((1, 2))).floor_ref());
    let mut s = rounded.to_string();
    if scale > 0 {
        let scale = scale as usize;
        if s.len() <= scale {
            s = format!("{}{}", "0".repeat(scale + 1 - s.len()), s);
        }
        s.insert(s.len() - scale, '.');
        s = trim_zeros(&s);
    } else {
        s.push_str(&"0".repeat((-scale) as usize));
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

/// Relative error cell, empty when the reference is zero.
pub fn relative_error(abs_err: f64, exact: f64) -> Cell {
    if exact == 0.0 {
        Cell::Empty
    } else {
        Cell::Real(abs_err / exact.abs())
    }
}
