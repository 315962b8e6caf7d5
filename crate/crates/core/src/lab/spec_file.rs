//! INI-style metric spec files.
//!
//! ```text
//! [metric]
//! kind = walker            ; walker | conformal_walker | general
//! a = u^2
//! b = v^2
//! c = u
//!
//! [lambda]
//! t0 = 0
//! t1 = 1
//!
//! [domain]
//! box = 0.5 1.5            ; lo hi, or eight numbers u_lo u_hi ... y_lo y_hi
//! exclude = v=0
//! ```

use std::path::Path;

use ini::Ini;

use crate::error::{Error, Result};
use crate::exprkit::{parse_expr, Expr, Var};
use crate::families::Exclusion;
use crate::frames::ProjParam;
use crate::tensor::{MetricKind, MetricSpec};

/// Parsed contents of a spec file. Anything left out falls back to the analysis config.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub spec: MetricSpec,
    pub t_field: Option<ProjParam>,
    pub domain: Option<([f64; 4], [f64; 4])>,
    pub exclude: Vec<Exclusion>,
    pub points: Option<usize>,
    pub seed: Option<u64>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn expr(section: &str, key: &str, text: &str) -> Result<Expr> {
    parse_expr(text).map_err(|e| bad(format!("[{section}] {key} = {text}: {e}")))
}

fn number<T: std::str::FromStr>(section: &str, key: &str, text: &str) -> Result<T> {
    text.trim().parse().map_err(|_| bad(format!("[{section}] {key}: cannot read `{text}` as a number")))
}

fn general_key(key: &str) -> Option<(usize, usize)> {
    let rest = key.strip_prefix("g_")?;
    let mut chars = rest.chars();
    let (i, j) = (chars.next()?, chars.next()?);
    if chars.next().is_some() {
        return None;
    }
    let vi = Var::from_name(&i.to_string())?;
    let vj = Var::from_name(&j.to_string())?;
    Some((vi.index(), vj.index()))
}

/// Parse `box` values: two numbers for every coordinate or eight in `u v x y` order.
pub fn parse_box(text: &str) -> Result<([f64; 4], [f64; 4])> {
    let nums: Vec<f64> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| bad(format!("box: cannot read `{s}` as a number"))))
        .collect::<Result<_>>()?;
    let (lo, hi) = match nums.as_slice() {
        [l, h] => ([*l; 4], [*h; 4]),
        n if n.len() == 8 => (std::array::from_fn(|i| n[2 * i]), std::array::from_fn(|i| n[2 * i + 1])),
        _ => return Err(bad(format!("box needs 2 or 8 numbers, got {}", nums.len()))),
    };
    for i in 0..4 {
        if !(lo[i].is_finite() && hi[i].is_finite() && lo[i] < hi[i]) {
            return Err(bad(format!("box: empty range for {}", Var::from_index(i))));
        }
    }
    Ok((lo, hi))
}

/// Parse `exclude` entries such as `v=0, u=1.5`.
pub fn parse_exclude(text: &str) -> Result<Vec<Exclusion>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (lhs, rhs) = item.split_once('=').ok_or_else(|| bad(format!("exclude: expected `var=value`, got `{item}`")))?;
        let var = Var::from_name(lhs.trim()).ok_or_else(|| bad(format!("exclude: unknown coordinate `{}`", lhs.trim())))?;
        out.push(Exclusion::new(var, number("domain", "exclude", rhs)?));
    }
    Ok(out)
}

/// Parse a spec file from text.
pub fn parse_spec_file(text: &str) -> Result<SpecFile> {
    let ini = Ini::load_from_str_noescape(text).map_err(|e| bad(format!("line {}, column {}: {}", e.line, e.col, e.msg)))?;
    let mut metric: Vec<(String, String)> = Vec::new();
    let mut out = SpecFile {
        spec: MetricSpec::walker(Expr::zero(), Expr::zero(), Expr::zero()),
        t_field: None,
        domain: None,
        exclude: Vec::new(),
        points: None,
        seed: None,
    };
    let mut saw_metric = false;
    let (mut t0, mut t1) = (None, None);
    for (section, props) in ini.iter() {
        let Some(section) = section else {
            if let Some((k, _)) = props.iter().next() {
                return Err(bad(format!("key `{k}` appears before any section")));
            }
            continue;
        };
        match section {
            "metric" => {
                saw_metric = true;
                metric.extend(props.iter().map(|(k, v)| (k.to_string(), v.to_string())));
            }
            "lambda" => {
                for (k, v) in props.iter() {
                    match k {
                        "t0" => t0 = Some(expr(section, k, v)?),
                        "t1" => t1 = Some(expr(section, k, v)?),
                        _ => return Err(bad(format!("[lambda] unknown key `{k}` (expected t0, t1)"))),
                    }
                }
            }
            "domain" => {
                for (k, v) in props.iter() {
                    match k {
                        "box" => out.domain = Some(parse_box(v)?),
                        "exclude" => out.exclude.extend(parse_exclude(v)?),
                        "points" => out.points = Some(number(section, k, v)?),
                        "seed" => out.seed = Some(number(section, k, v)?),
                        _ => return Err(bad(format!("[domain] unknown key `{k}`"))),
                    }
                }
            }
            other => return Err(bad(format!("unknown section [{other}]"))),
        }
    }
    if !saw_metric {
        return Err(bad("missing [metric] section"));
    }
    out.spec = build_metric(&metric)?;
    out.t_field = match (t0, t1) {
        (Some(a), Some(b)) => Some(ProjParam::new(a, b)),
        (None, None) => None,
        _ => return Err(bad("[lambda] needs both t0 and t1")),
    };
    Ok(out)
}

fn build_metric(props: &[(String, String)]) -> Result<MetricSpec> {
    let kind = match props.iter().find(|(k, _)| k == "kind").map(|(_, v)| v.trim()) {
        None | Some("walker") => MetricKind::Walker,
        Some("conformal_walker") => MetricKind::ConformalWalker,
        Some("general") => MetricKind::General,
        Some(other) => return Err(bad(format!("[metric] unknown kind `{other}`"))),
    };
    let get = |key: &str| -> Result<Expr> {
        match props.iter().find(|(k, _)| k == key) {
            Some((_, v)) => expr("metric", key, v),
            None => Ok(Expr::zero()),
        }
    };
    let allowed: &[&str] = match kind {
        MetricKind::Walker => &["kind", "a", "b", "c"],
        MetricKind::ConformalWalker => &["kind", "a", "b", "c", "chi"],
        MetricKind::General => &["kind"],
    };
    for (k, _) in props {
        let ok = allowed.contains(&k.as_str()) || (kind == MetricKind::General && general_key(k).is_some());
        if !ok {
            return Err(bad(format!("[metric] key `{k}` is not valid for kind {}", kind.name())));
        }
    }
    Ok(match kind {
        MetricKind::Walker => MetricSpec::walker(get("a")?, get("b")?, get("c")?),
        MetricKind::ConformalWalker => {
            if !props.iter().any(|(k, _)| k == "chi") {
                return Err(bad("[metric] conformal_walker needs chi"));
            }
            MetricSpec::conformal_walker(get("chi")?, get("a")?, get("b")?, get("c")?)
        }
        MetricKind::General => {
            let mut g: [[Expr; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| Expr::zero()));
            let mut seen = [[false; 4]; 4];
            for (k, v) in props {
                if let Some((i, j)) = general_key(k) {
                    if seen[i][j] || seen[j][i] {
                        return Err(bad(format!("[metric] component g_{}{} given twice", Var::from_index(i), Var::from_index(j))));
                    }
                    seen[i][j] = true;
                    let e = expr("metric", k, v)?;
                    g[i][j] = e.clone();
                    g[j][i] = e;
                }
            }
            MetricSpec::general(g)
        }
    })
}

/// Read and parse a spec file from disk.
pub fn load_spec_file(path: &Path) -> Result<SpecFile> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    parse_spec_file(&text).map_err(|e| match e {
        Error::Config(m) => bad(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Render a metric as spec-file text.
pub fn to_spec_text(spec: &MetricSpec, t: Option<&ProjParam>, exclude: &[Exclusion]) -> String {
    let mut s = String::from("[metric]\n");
    s += &format!("kind = {}\n", spec.kind().name());
    match spec {
        MetricSpec::Walker { a, b, c } => s += &format!("a = {a}\nb = {b}\nc = {c}\n"),
        MetricSpec::ConformalWalker { chi, a, b, c } => s += &format!("chi = {chi}\na = {a}\nb = {b}\nc = {c}\n"),
        MetricSpec::General { g } => {
            for i in 0..4 {
                for j in i..4 {
                    if !g[i][j].is_const(0.0) {
                        s += &format!("g_{}{} = {}\n", Var::from_index(i), Var::from_index(j), g[i][j]);
                    }
                }
            }
        }
    }
    if let Some(t) = t {
        s += &format!("\n[lambda]\nt0 = {}\nt1 = {}\n", t.t0, t.t1);
    }
    if !exclude.is_empty() {
        let items: Vec<String> = exclude.iter().map(|e| format!("{}={}", e.var, e.value)).collect();
        s += &format!("\n[domain]\nexclude = {}\n", items.join(", "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walker_file() {
        let f = parse_spec_file("[metric]\nkind = walker\na = u^2\nb = v^2\nc = u\n\n[lambda]\nt0 = u\nt1 = v\n\n[domain]\nbox = 0.5 1.5\nexclude = v=0\n").unwrap();
        assert_eq!(f.spec, MetricSpec::parse_walker("u^2", "v^2", "u").unwrap());
        assert_eq!(f.t_field, Some(ProjParam::parse("u", "v").unwrap()));
        assert_eq!(f.domain, Some(([0.5; 4], [1.5; 4])));
        assert_eq!(f.exclude, vec![Exclusion { var: 'v', value: 0.0 }]);
    }

    #[test]
    fn general_file_symmetrizes() {
        let f = parse_spec_file("[metric]\nkind = general\ng_ux = 1\ng_vy = 1\ng_xx = u^2\n").unwrap();
        let g = f.spec.components();
        assert_eq!(g[2][0], Expr::one());
        assert_eq!(g[2][2].to_string(), "u^2");
    }

    #[test]
    fn diagnostics() {
        for (text, needle) in [
            ("a = u\n", "before any section"),
            ("[metric]\na = u +\n", "[metric] a"),
            ("[metric]\nchi = v\n", "not valid for kind walker"),
            ("[metric]\nkind = conformal_walker\na = u\n", "needs chi"),
            ("[metric]\n[lambda]\nt0 = 1\n", "both t0 and t1"),
            ("[metric]\n[domain]\nbox = 1 0\n", "empty range"),
            ("[metric]\n[domain]\nexclude = w=0\n", "unknown coordinate"),
            ("[lambda]\nt0 = 0\nt1 = 1\n", "missing [metric]"),
            ("[metric]\n[extra]\n", "unknown section"),
        ] {
            match parse_spec_file(text) {
                Err(Error::Config(m)) => assert!(m.contains(needle), "{text:?}: {m}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let spec = MetricSpec::parse_walker("exp(4*x*y)*u^4/(3*v^2)", "v^2", "u*x").unwrap();
        let t = ProjParam::parse("u", "v").unwrap();
        let ex = vec![Exclusion { var: 'v', value: 0.0 }];
        let f = parse_spec_file(&to_spec_text(&spec, Some(&t), &ex)).unwrap();
        assert_eq!((f.spec, f.t_field, f.exclude), (spec, Some(t), ex));
    }
}
