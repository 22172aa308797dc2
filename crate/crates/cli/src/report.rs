use std::fmt::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Tsv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Human => "human",
            Format::Tsv => "tsv",
            Format::Json => "json",
        }
    }
}

/// Ordered key/value sections; every value is already rendered text.
#[derive(Debug, Default)]
pub struct Report {
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl Report {
    pub fn section(&mut self, name: &str) -> &mut Self {
        self.sections.push((name.to_string(), Vec::new()));
        self
    }

    pub fn put(&mut self, key: &str, value: impl ToString) -> &mut Self {
        if self.sections.is_empty() {
            self.section("results");
        }
        let last = self.sections.last_mut().expect("a section exists");
        last.1.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human(),
            Format::Tsv => self.tsv(),
            Format::Json => self.json(),
        }
    }

    fn human(&self) -> String {
        let width = self
            .sections
            .iter()
            .flat_map(|(_, e)| e.iter().map(|(k, _)| k.len()))
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for (i, (name, entries)) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            writeln!(out, "[{name}]").unwrap();
            for (k, v) in entries {
                writeln!(out, "{k:<width$}  {v}").unwrap();
            }
        }
        out
    }

    fn tsv(&self) -> String {
        let mut out = String::from("section\tkey\tvalue\n");
        for (name, entries) in &self.sections {
            for (k, v) in entries {
                writeln!(out, "{name}\t{k}\t{v}").unwrap();
            }
        }
        out
    }

    fn json(&self) -> String {
        let mut root = Map::new();
        for (name, entries) in &self.sections {
            let obj: Map<String, Value> = entries
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect();
            root.insert(name.clone(), Value::Object(obj));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("strings serialize");
        s.push('\n');
        s
    }
}

/// Reals with seven fixed decimals.
pub fn real(x: f64) -> String {
    format!("{x:.7}")
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::default();
        r.section("config").put("tol", "1e-8");
        r.section("results")
            .put("alpha", 2)
            .put("theta", real(5f64.sqrt()));
        r
    }

    #[test]
    fn formats() {
        let r = sample();
        assert_eq!(
            r.render(Format::Human),
            "[config]\ntol    1e-8\n\n[results]\nalpha  2\ntheta  2.2360680\n"
        );
        assert_eq!(
            r.render(Format::Tsv),
            "section\tkey\tvalue\nconfig\ttol\t1e-8\nresults\talpha\t2\nresults\ttheta\t2.2360680\n"
        );
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["results"]["theta"], "2.2360680");
        assert_eq!(v["config"]["tol"], "1e-8");
    }
}
