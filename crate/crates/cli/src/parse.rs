//! Command-line value parsers: angles, lists and graph specs.

use std::f64::consts::PI;
use std::path::Path;

use qaoa_lab::graph::{
    complete, complete_bipartite, cycle, generate_random, generate_regular, generate_tree_subgraph, hypercube, path,
    read_instance, single_edge, RandomModel, WeightScheme,
};
use qaoa_lab::{IsingInstance, ParameterSet};

/// Radians, or a multiple of pi: `0.177pi`, `-pi`, `pi/8`, `3pi/4`.
pub fn angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (t, None),
    };
    let value = if let Some(coef) = num.strip_suffix("pi") {
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| format!("bad angle {s:?}"))?,
        };
        c * PI
    } else {
        num.parse::<f64>().map_err(|_| format!("bad angle {s:?}"))?
    };
    let value = match den {
        Some(d) => value / d.parse::<f64>().map_err(|_| format!("bad angle {s:?}"))?,
        None => value,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("bad angle {s:?}"))
    }
}

/// Comma-separated list parsed element-wise.
pub fn list<T>(s: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| item(x.trim())).collect()
}

pub fn number<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("bad number {s:?}"))
}

/// Per-layer angle list `g1,b1,g2,b2,...`.
pub fn params(s: &str) -> Result<ParameterSet, String> {
    let values = list(s, angle)?;
    ParameterSet::from_interleaved(&values).map_err(|e| e.to_string())
}

pub fn weights(s: &str) -> Result<WeightScheme, String> {
    match s.to_ascii_lowercase().as_str() {
        "unit" => Ok(WeightScheme::Unit),
        "pm1" | "pm_one" | "pmone" => Ok(WeightScheme::PmOne),
        other => Ok(WeightScheme::Custom(list(other, number::<f64>)?)),
    }
}

/// A graph spec that could not be built: either malformed or infeasible.
pub enum GraphError {
    Usage(String),
    Library(qaoa_lab::Error),
}

impl From<qaoa_lab::Error> for GraphError {
    fn from(e: qaoa_lab::Error) -> Self {
        GraphError::Library(e)
    }
}

fn field<T: std::str::FromStr>(parts: &[&str], i: usize, spec: &str) -> Result<T, GraphError> {
    parts
        .get(i)
        .ok_or_else(|| GraphError::Usage(format!("graph spec {spec:?} is missing a field")))?
        .parse()
        .map_err(|_| GraphError::Usage(format!("graph spec {spec:?} has a malformed field")))
}

fn seed(parts: &[&str], i: usize, spec: &str) -> Result<u64, GraphError> {
    if parts.len() > i {
        field(parts, i, spec)
    } else {
        Ok(0)
    }
}

/// Named graphs (`K5`, `K3,3`, `C6`, `P4`, `Q3`, `edge`), generators
/// (`tree:d:p`, `reg:n:d[:seed[:weights]]`, `er:n:q[:seed]`, `ba:n:m[:seed]`,
/// `ws:n:k:rewire[:seed]`) or a path to an instance file.
pub fn graph(spec: &str) -> Result<IsingInstance, GraphError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let label = |g: IsingInstance| g.with_label(spec);
    match parts[0].to_ascii_lowercase().as_str() {
        "tree" => return Ok(generate_tree_subgraph(field(&parts, 1, spec)?, field(&parts, 2, spec)?)?),
        "reg" => {
            let w = match parts.get(4) {
                Some(w) => weights(w).map_err(GraphError::Usage)?,
                None => WeightScheme::Unit,
            };
            let g = generate_regular(field(&parts, 1, spec)?, field(&parts, 2, spec)?, &w, seed(&parts, 3, spec)?)?;
            return Ok(label(g));
        }
        "er" => {
            let q = field(&parts, 2, spec)?;
            return Ok(generate_random(RandomModel::ErdosRenyi { q }, field(&parts, 1, spec)?, seed(&parts, 3, spec)?)?);
        }
        "ba" => {
            let m = field(&parts, 2, spec)?;
            return Ok(generate_random(RandomModel::BarabasiAlbert { m }, field(&parts, 1, spec)?, seed(&parts, 3, spec)?)?);
        }
        "ws" => {
            let model = RandomModel::WattsStrogatz {
                k: field(&parts, 2, spec)?,
                rewire: field(&parts, 3, spec)?,
            };
            return Ok(generate_random(model, field(&parts, 1, spec)?, seed(&parts, 4, spec)?)?);
        }
        "edge" => return Ok(single_edge()),
        _ => {}
    }
    if let Some(named) = named_graph(spec) {
        return Ok(label(named));
    }
    if Path::new(spec).is_file() {
        return Ok(read_instance(spec)?);
    }
    Err(GraphError::Usage(format!("unknown graph {spec:?} (not a known name and not a file)")))
}

fn named_graph(spec: &str) -> Option<IsingInstance> {
    let mut chars = spec.chars();
    let kind = chars.next()?.to_ascii_uppercase();
    let rest = chars.as_str();
    if kind == 'K' {
        if let Some((a, b)) = rest.split_once(',') {
            return Some(complete_bipartite(a.parse().ok()?, b.parse().ok()?));
        }
    }
    let n: usize = rest.parse().ok()?;
    match kind {
        'K' if n >= 1 => Some(complete(n)),
        'C' if n >= 3 => Some(cycle(n)),
        'P' if n >= 1 => Some(path(n)),
        'Q' if (1..=20).contains(&n) => Some(hypercube(n as u32)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_accept_pi_forms() {
        assert_eq!(angle("0.5").unwrap(), 0.5);
        assert!((angle("0.177pi").unwrap() - 0.177 * PI).abs() < 1e-15);
        assert_eq!(angle("-pi").unwrap(), -PI);
        assert_eq!(angle("pi/8").unwrap(), PI / 8.0);
        assert_eq!(angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert!(angle("pie").is_err());
        assert!(angle("1/0").is_err());
    }

    #[test]
    fn params_are_interleaved() {
        let x = params("0.1,0.2,0.3,0.4").unwrap();
        assert_eq!(x.gammas(), &[0.1, 0.3]);
        assert_eq!(x.betas(), &[0.2, 0.4]);
        assert!(params("0.1,0.2,0.3").is_err());
    }

    #[test]
    fn named_graphs() {
        let ok = |s: &str| graph(s).ok().unwrap();
        assert_eq!(ok("K5").num_edges(), 10);
        assert_eq!(ok("K3,3").num_edges(), 9);
        assert_eq!(ok("C6").n(), 6);
        assert_eq!(ok("Q3").num_edges(), 12);
        assert_eq!(ok("tree:3:2").n(), 14);
        assert_eq!(ok("reg:8:3:1").num_edges(), 12);
        assert_eq!(ok("ws:10:4:0.2:3").n(), 10);
        assert!(matches!(graph("nope"), Err(GraphError::Usage(_))));
        assert!(matches!(graph("reg:5:3"), Err(GraphError::Library(_))));
    }
}
