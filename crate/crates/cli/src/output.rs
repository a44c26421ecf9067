//! Output rendering. JSON is the canonical machine format; the table and
//! CSV renderers are derived from the same document.

use serde::Deserialize;
use serde_json::{json, Value};

use isoprime_core::bounds::BoundRow;
use isoprime_core::signatures::{GaloisModel, SignatureClass};
use isoprime_core::type2::{ScanCheckpoint, Type2Audit};
use isoprime_core::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

pub struct OutputDoc {
    kind: Kind,
    value: Value,
}

enum Kind {
    Bounds,
    Type2,
    Scan,
    Orbits,
}

fn model_name(m: GaloisModel) -> &'static str {
    match m {
        GaloisModel::Cyclic => "cyclic",
        GaloisModel::Symmetric => "symmetric",
    }
}

impl OutputDoc {
    pub fn bounds(degree: u32, q_max: u64, model: GaloisModel, rows: &[BoundRow]) -> Self {
        OutputDoc {
            kind: Kind::Bounds,
            value: json!({
                "command": "bounds",
                "version": env!("CARGO_PKG_VERSION"),
                "degree": degree,
                "q_max": q_max,
                "model": model_name(model),
                "rows": rows,
            }),
        }
    }

    pub fn type2(audit: &Type2Audit) -> Self {
        OutputDoc {
            kind: Kind::Type2,
            value: json!({
                "command": "type2",
                "version": env!("CARGO_PKG_VERSION"),
                "audit": audit,
            }),
        }
    }

    pub fn scan(state: &ScanCheckpoint) -> Self {
        OutputDoc {
            kind: Kind::Scan,
            value: json!({
                "command": "scan",
                "version": env!("CARGO_PKG_VERSION"),
                "checkpoint": state,
                "survivor_count": state.survivors.len(),
                "largest_survivor": state.survivors.last(),
            }),
        }
    }

    pub fn orbits(degree: u32, model: GaloisModel, classes: &[SignatureClass]) -> Self {
        OutputDoc {
            kind: Kind::Orbits,
            value: json!({
                "command": "orbits",
                "version": env!("CARGO_PKG_VERSION"),
                "degree": degree,
                "model": model_name(model),
                "count": classes.len(),
                "classes": classes.iter().map(|c| json!({
                    "representative": c.representative.to_string(),
                    "trace": c.representative.trace(),
                    "orbit_size": c.orbit_size,
                })).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn emit(&self, format: Format) -> Result<()> {
        match format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&self.value).unwrap()),
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
        }
        Ok(())
    }

    fn render_table(&self) {
        match self.kind {
            Kind::Bounds => {
                let rows = self.value["rows"].as_array().unwrap();
                println!(
                    "degree {} bounds (q <= {}, {} model)",
                    self.value["degree"], self.value["q_max"], self.value["model"]
                );
                println!("{:<14} {:>5}  {:<14} primes >= 13 / bound", "class", "trace", "status");
                for r in rows {
                    let status = r["status"].as_str().unwrap_or("?");
                    let detail = match status {
                        "additive_grh" => format!(
                            "primes <= 10^{:.2} (GRH)",
                            r["additive_log10"].as_f64().unwrap_or(f64::NAN)
                        ),
                        "unresolved" => "?".to_string(),
                        _ => {
                            let ps: Vec<String> = r["primes_ge_13"]
                                .as_array()
                                .unwrap()
                                .iter()
                                .map(|p| p.as_str().unwrap().to_string())
                                .collect();
                            if ps.is_empty() {
                                "(none)".into()
                            } else {
                                ps.join(", ")
                            }
                        }
                    };
                    println!(
                        "{:<14} {:>5}  {:<14} {}",
                        r["class"].as_str().unwrap(),
                        r["trace"],
                        status,
                        detail
                    );
                }
            }
            Kind::Type2 => {
                let a = &self.value["audit"];
                println!("type-2 bound, degree {}", a["degree"]);
                println!("  pipeline        {}", a["pipeline"].as_str().unwrap_or("?"));
                println!("  S_d             {:e}", a["s_d"].as_f64().unwrap_or(f64::NAN));
                println!("  threshold       {:e}", a["threshold"].as_f64().unwrap_or(f64::NAN));
                println!("  q_bound (V_d)   {}", a["q_bound"]);
                println!("  |T_d|           {}", a["t_size"]);
                println!(
                    "  P (max CC pass) {}",
                    a["p_max"].as_str().unwrap_or("(none)")
                );
                println!(
                    "  C_d             10^{:.4} (pre-scan)",
                    a["c_d_log10"].as_f64().unwrap_or(f64::NAN)
                );
                if let Some(caveats) = a["caveats"].as_array() {
                    for c in caveats {
                        println!("  caveat: {}", c.as_str().unwrap_or("?"));
                    }
                }
            }
            Kind::Scan => {
                let cp = &self.value["checkpoint"];
                println!(
                    "scan d={} range [{}, {}] frontier {}",
                    cp["d"], cp["lo"], cp["hi"], cp["frontier"]
                );
                println!("  survivors: {}", self.value["survivor_count"]);
                if let Some(p) = self.value["largest_survivor"].as_u64() {
                    println!("  largest:   {p}");
                }
                let survivors = cp["survivors"].as_array().unwrap();
                if survivors.len() <= 40 {
                    let list: Vec<String> = survivors.iter().map(|v| v.to_string()).collect();
                    println!("  list: {}", list.join(", "));
                }
            }
            Kind::Orbits => {
                println!(
                    "degree {} signature classes ({} model): {}",
                    self.value["degree"], self.value["model"], self.value["count"]
                );
                for c in self.value["classes"].as_array().unwrap() {
                    println!(
                        "  {:<16} trace {:>3}  orbit size {}",
                        c["representative"].as_str().unwrap(),
                        c["trace"],
                        c["orbit_size"]
                    );
                }
            }
        }
    }

    fn render_csv(&self) {
        match self.kind {
            Kind::Bounds => {
                println!("degree,class,trace,status,primes_ge_13,zero_seen,additive_log10,q_used");
                for r in self.value["rows"].as_array().unwrap() {
                    let ps: Vec<String> = r["primes_ge_13"]
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(|p| p.as_str().unwrap().to_string())
                        .collect();
                    let qs: Vec<String> = r["q_used"]
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(|q| q.to_string())
                        .collect();
                    println!(
                        "{},\"{}\",{},{},\"{}\",{},{},\"{}\"",
                        self.value["degree"],
                        r["class"].as_str().unwrap(),
                        r["trace"],
                        r["status"].as_str().unwrap_or("?"),
                        ps.join(";"),
                        r["zero_seen"],
                        r["additive_log10"],
                        qs.join(";")
                    );
                }
            }
            Kind::Type2 => {
                let a = &self.value["audit"];
                println!("degree,pipeline,s_d,threshold,q_bound,t_size,p_max,c_d_log10");
                println!(
                    "{},{},{:e},{:e},{},{},{},{}",
                    a["degree"],
                    a["pipeline"].as_str().unwrap_or("?"),
                    a["s_d"].as_f64().unwrap_or(f64::NAN),
                    a["threshold"].as_f64().unwrap_or(f64::NAN),
                    a["q_bound"],
                    a["t_size"],
                    a["p_max"].as_str().unwrap_or(""),
                    a["c_d_log10"]
                );
            }
            Kind::Scan => {
                println!("p");
                for s in self.value["checkpoint"]["survivors"].as_array().unwrap() {
                    println!("{s}");
                }
            }
            Kind::Orbits => {
                println!("representative,trace,orbit_size");
                for c in self.value["classes"].as_array().unwrap() {
                    println!(
                        "\"{}\",{},{}",
                        c["representative"].as_str().unwrap(),
                        c["trace"],
                        c["orbit_size"]
                    );
                }
            }
        }
    }
}
