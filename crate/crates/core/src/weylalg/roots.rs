use nalgebra::DMatrix;

use super::quartic::QuarticForm;

/// A root of a binary quartic in the affine parameter `τ = t1/t0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Root {
    Real { value: f64 },
    /// Stands for the conjugate pair `re ± i·im`, `im > 0`.
    ComplexPair { re: f64, im: f64 },
    /// The direction `(0:1)`.
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RootEntry {
    pub root: Root,
    pub multiplicity: usize,
}

/// Distinct roots with multiplicities, or the zero-form marker.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RootList {
    pub zero_form: bool,
    pub roots: Vec<RootEntry>,
}

impl RootList {
    fn zero() -> RootList {
        RootList { zero_form: true, roots: Vec::new() }
    }

    /// Multiplicities summed over all roots, counting each member of a complex pair.
    pub fn total(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity * if matches!(r.root, Root::ComplexPair { .. }) { 2 } else { 1 }).sum()
    }

    /// Multiplicities in descending order, each member of a complex pair listed separately.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut ms = Vec::new();
        for r in &self.roots {
            ms.push(r.multiplicity);
            if matches!(r.root, Root::ComplexPair { .. }) {
                ms.push(r.multiplicity);
            }
        }
        ms.sort_unstable_by(|a, b| b.cmp(a));
        ms
    }

    pub fn complex_pairs(&self) -> usize {
        self.roots.iter().filter(|r| matches!(r.root, Root::ComplexPair { .. })).count()
    }

    /// `"O"` for the zero form, otherwise `{4}`, `{31}`, `{22}`, `{211}` or `{1111}`.
    pub fn type_string(&self) -> String {
        if self.zero_form {
            return "O".into();
        }
        let digits: String = self.multiplicities().iter().map(|m| m.to_string()).collect();
        format!("{{{digits}}}")
    }

    /// Type string with a complex-pair annotation such as `{1111}+2c`.
    pub fn annotated(&self) -> String {
        match self.complex_pairs() {
            0 => self.type_string(),
            n => format!("{}+{}c", self.type_string(), n),
        }
    }

    pub fn max_multiplicity(&self) -> usize {
        if self.zero_form {
            4
        } else {
            self.roots.iter().map(|r| r.multiplicity).max().unwrap_or(0)
        }
    }

    /// Multiplicity of the real root closest to `tau` (chordal distance ≤ `tol`), `None` meaning ∞.
    pub fn multiplicity_near(&self, tau: Option<f64>, tol: f64) -> usize {
        if self.zero_form {
            return 4;
        }
        self.roots
            .iter()
            .filter(|r| match (r.root, tau) {
                (Root::Infinity, None) => true,
                (Root::Infinity, Some(t)) => 1.0 / (1.0 + t * t).sqrt() <= tol,
                (Root::Real { value }, None) => 1.0 / (1.0 + value * value).sqrt() <= tol,
                (Root::Real { value }, Some(t)) => chordal(value, t) <= tol,
                (Root::ComplexPair { .. }, _) => false,
            })
            .map(|r| r.multiplicity)
            .max()
            .unwrap_or(0)
    }
}

fn chordal(a: f64, b: f64) -> f64 {
    (a - b).abs() / ((1.0 + a * a) * (1.0 + b * b)).sqrt()
}

#[derive(Debug, Clone, Copy)]
struct Cluster {
    re: f64,
    im: f64,
    mult: usize,
}

fn radius(tol: f64, mult: usize, re: f64, im: f64) -> f64 {
    tol.powf(1.0 / mult as f64) * (re * re + im * im).sqrt().max(1.0)
}

/// Classify the roots of a quartic.
///
/// Leading coefficients below `tol·scale` become roots at ∞, trailing ones roots at 0.
/// The rest come from companion-matrix eigenvalues. Groups of total multiplicity `m` are merged
/// when every member lies within `tol^(1/m)·max(1, |centroid|)` of the group centroid, trying the
/// largest `m` first, since an `m`-fold root splits by roughly the `m`-th root of the coefficient error.
pub fn root_structure(q: &QuarticForm, tol: f64) -> RootList {
    let scale = q.scale();
    if scale == 0.0 || q.is_zero(tol) {
        return RootList::zero();
    }
    let c = q.coeffs;
    let small = |x: f64| x.abs() < tol * scale;
    let mut hi = 4;
    while small(c[hi]) {
        hi -= 1;
    }
    let at_infinity = 4 - hi;
    let mut lo = 0;
    while lo < hi && small(c[lo]) {
        lo += 1;
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    if lo > 0 {
        clusters.push(Cluster { re: 0.0, im: 0.0, mult: lo });
    }
    let deg = hi - lo;
    if deg > 0 {
        // monic polynomial c[lo..=hi] / c[hi]
        let comp = DMatrix::from_fn(deg, deg, |i, j| {
            if i == 0 {
                -c[hi - 1 - j] / c[hi]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        for z in comp.complex_eigenvalues().iter() {
            clusters.push(Cluster { re: z.re, im: z.im, mult: 1 });
        }
    }
    let clusters = group(clusters, tol);
    let mut roots = Vec::new();
    let mut used = vec![false; clusters.len()];
    for i in 0..clusters.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let cl = clusters[i];
        if cl.im.abs() <= radius(tol, cl.mult, cl.re, 0.0) {
            roots.push(RootEntry { root: Root::Real { value: cl.re }, multiplicity: cl.mult });
            continue;
        }
        // find the conjugate partner
        let partner = (0..clusters.len()).filter(|&j| !used[j] && clusters[j].mult == cl.mult).min_by(|&x, &y| {
            let dx = (clusters[x].re - cl.re).abs() + (clusters[x].im + cl.im).abs();
            let dy = (clusters[y].re - cl.re).abs() + (clusters[y].im + cl.im).abs();
            dx.total_cmp(&dy)
        });
        if let Some(j) = partner {
            used[j] = true;
        }
        roots.push(RootEntry {
            root: Root::ComplexPair { re: cl.re, im: cl.im.abs() },
            multiplicity: cl.mult,
        });
    }
    if at_infinity > 0 {
        roots.push(RootEntry { root: Root::Infinity, multiplicity: at_infinity });
    }
    roots.sort_by(|a, b| b.multiplicity.cmp(&a.multiplicity).then(order_key(&a.root).total_cmp(&order_key(&b.root))));
    RootList { zero_form: false, roots }
}

fn centroid(items: &[Cluster]) -> Cluster {
    let m: usize = items.iter().map(|c| c.mult).sum();
    let w = |f: fn(&Cluster) -> f64| items.iter().map(|c| f(c) * c.mult as f64).sum::<f64>() / m as f64;
    Cluster { re: w(|c| c.re), im: w(|c| c.im), mult: m }
}

fn group(mut items: Vec<Cluster>, tol: f64) -> Vec<Cluster> {
    let mut out = Vec::new();
    'outer: while !items.is_empty() {
        let n = items.len();
        let total: usize = items.iter().map(|c| c.mult).sum();
        for m in (2..=total).rev() {
            let mut best: Option<(u32, f64)> = None;
            for mask in 1u32..(1 << n) {
                let chosen: Vec<Cluster> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| items[i]).collect();
                if chosen.len() < 2 || chosen.iter().map(|c| c.mult).sum::<usize>() != m {
                    continue;
                }
                let cen = centroid(&chosen);
                let spread = chosen.iter().map(|c| (c.re - cen.re).hypot(c.im - cen.im)).fold(0.0, f64::max);
                if spread <= radius(tol, m, cen.re, cen.im) && best.is_none_or(|(_, s)| spread < s) {
                    best = Some((mask, spread));
                }
            }
            if let Some((mask, _)) = best {
                let chosen: Vec<Cluster> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| items[i]).collect();
                out.push(centroid(&chosen));
                items = (0..n).filter(|i| mask & (1 << i) == 0).map(|i| items[i]).collect();
                continue 'outer;
            }
        }
        out.append(&mut items);
    }
    out
}

fn order_key(r: &Root) -> f64 {
    match r {
        Root::Real { value } => *value,
        Root::ComplexPair { re, .. } => *re,
        Root::Infinity => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylalg::Side;

    fn q(c: [f64; 5]) -> QuarticForm {
        QuarticForm::new(Side::ASD, c)
    }

    #[test]
    fn constructed_double_root() {
        // (t−1)²(t−2)(t+3)
        let r = root_structure(&q([-6.0, 13.0, -7.0, -1.0, 1.0]), 1e-8);
        assert_eq!(r.type_string(), "{211}");
        assert_eq!(r.multiplicity_near(Some(1.0), 1e-6), 2);
        assert_eq!(r.multiplicity_near(Some(2.0), 1e-6), 1);
        assert_eq!(r.multiplicity_near(Some(-3.0), 1e-6), 1);
    }

    #[test]
    fn triple_zero_and_infinity() {
        let r = root_structure(&q([0.0, 0.0, 0.0, 1.0, 0.0]), 1e-8);
        assert_eq!(r.type_string(), "{31}");
        assert_eq!(r.multiplicity_near(Some(0.0), 1e-9), 3);
        assert_eq!(r.multiplicity_near(None, 1e-9), 1);
    }

    #[test]
    fn complex_pairs_are_annotated() {
        // (t²+1)(t−1)(t−2) = t⁴ − 3t³ + 3t² − 3t + 2
        let r = root_structure(&q([2.0, -3.0, 3.0, -3.0, 1.0]), 1e-8);
        assert_eq!(r.type_string(), "{1111}");
        assert_eq!(r.annotated(), "{1111}+1c");
        // (t²+1)²
        let r = root_structure(&q([1.0, 0.0, 2.0, 0.0, 1.0]), 1e-8);
        assert_eq!(r.annotated(), "{22}+1c");
    }

    #[test]
    fn zero_form() {
        assert_eq!(root_structure(&q([0.0; 5]), 1e-8).type_string(), "O");
    }
}
