//! Report rendering. Floats are written with 17 significant digits so that
//! every value round-trips exactly.

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

/// Rows for the csv and markdown renderings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub struct Report {
    pub command: &'static str,
    pub json: Value,
    pub table: Table,
}

/// `%.17g`, keeping a decimal point on integral values.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').to_string()
        } else {
            s
        };
        if s.ends_with('.') {
            format!("{s}0")
        } else if s.contains('.') {
            s
        } else {
            format!("{s}.0")
        }
    } else {
        let mant = mant.trim_end_matches('0');
        let mant = if mant.ends_with('.') { format!("{mant}0") } else { mant.to_string() };
        format!("{mant}e{exp}")
    }
}

fn cell_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => number(n),
        Value::String(s) => s.clone(),
        other => compact(other),
    }
}

fn number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        fmt_float(n.as_f64().expect("f64"))
    } else {
        n.to_string()
    }
}

fn compact(v: &Value) -> String {
    let mut s = String::new();
    write_json(v, None, 0, &mut s);
    s
}

pub fn cell(v: &Value) -> String {
    cell_value(v)
}

fn write_json(v: &Value, indent: Option<usize>, depth: usize, out: &mut String) {
    let nl = |out: &mut String, d: usize| {
        if let Some(w) = indent {
            out.push('\n');
            out.push_str(&" ".repeat(w * d));
        }
    };
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&number(n)),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            // short arrays of scalars stay on one line
            let flat = a.iter().all(|x| !x.is_array() && !x.is_object()) && a.len() <= 9;
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                    if flat && indent.is_some() {
                        out.push(' ');
                    }
                }
                if !flat {
                    nl(out, depth + 1);
                }
                write_json(x, indent, depth + 1, out);
            }
            if !flat {
                nl(out, depth);
            }
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                nl(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push(':');
                if indent.is_some() {
                    out.push(' ');
                }
                write_json(x, indent, depth + 1, out);
            }
            nl(out, depth);
            out.push('}');
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn md_field(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = String::new();
            write_json(&report.json, Some(2), 0, &mut s);
            s.push('\n');
            s
        }
        Format::Csv => {
            let t = &report.table;
            let mut s = t.headers.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",");
            s.push('\n');
            for row in &t.rows {
                s.push_str(&row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
                s.push('\n');
            }
            s
        }
        Format::Markdown => {
            let t = &report.table;
            let mut s = format!("# ktinv {}\n\n", report.command);
            if let Some(cfg) = report.json.get("config") {
                s.push_str(&format!("config: `{}`\n\n", compact(cfg)));
            }
            s.push_str(&format!("| {} |\n", t.headers.iter().map(|h| md_field(h)).collect::<Vec<_>>().join(" | ")));
            s.push_str(&format!("|{}\n", "---|".repeat(t.headers.len())));
            for row in &t.rows {
                s.push_str(&format!("| {} |\n", row.iter().map(|c| md_field(c)).collect::<Vec<_>>().join(" | ")));
            }
            s
        }
    }
}

/// Two-column table of the leaves of a JSON object, keyed by dotted path.
pub fn flatten(v: &Value) -> Table {
    fn walk(prefix: &str, v: &Value, t: &mut Table) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, t);
                }
            }
            Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, t);
                }
            }
            other => t.push(vec![prefix.to_string(), cell_value(other)]),
        }
    }
    let mut t = Table::new(&["key", "value"]);
    walk("", v, &mut t);
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_float(1.0), "1.0");
        assert_eq!(fmt_float(0.1), "0.10000000000000001");
        assert_eq!(fmt_float(-2.5), "-2.5");
        assert_eq!(fmt_float(1e-9), "1.0000000000000001e-9");
        assert_eq!(fmt_float(123456.0), "123456.0");
        assert_eq!(fmt_float(2f64.sqrt()), "1.4142135623730951");
        assert_eq!(fmt_float(1e20), "1.0e20");
        for x in [0.1, 1.0 / 3.0, -7.25e-12, 6.02e23, std::f64::consts::PI] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_is_parseable() {
        let v = serde_json::json!({"a": [1.5, 2, null], "b": {"c": "x,y", "d": []}, "e": 0.1});
        let mut s = String::new();
        write_json(&v, Some(2), 0, &mut s);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
