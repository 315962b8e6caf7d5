use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::builders::{mk_cp_example, mk_left_flat, mk_ricci_null, mk_sd2015, mk_sd_two_sided, mk_two_sided, mk_walker};
use super::instance::FamilyInstance;
use crate::error::{Error, Result};
use crate::exprkit::{Expr, Var};

/// Families addressable by name from [`random_instance`].
pub const FAMILY_NAMES: [&str; 10] = [
    "walker",
    "sesqui",
    "two_sided",
    "conformal_sesqui",
    "sd2015",
    "sd_two_sided",
    "ricci_null",
    "ricci_null_wps",
    "left_flat",
    "cp",
];

const XY: [Var; 2] = [Var::X, Var::Y];
const UXY: [Var; 3] = [Var::U, Var::X, Var::Y];
const ALL: [Var; 4] = Var::ALL;

fn monomials(vars: &[Var], degree: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; vars.len()]];
    let mut frontier = out.clone();
    for _ in 0..degree {
        let mut next = Vec::new();
        for m in &frontier {
            // only raise the last nonzero exponent or later ones, so each monomial appears once
            let start = m.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in start..vars.len() {
                let mut n = m.clone();
                n[i] += 1;
                next.push(n);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn poly(rng: &mut ChaCha8Rng, vars: &[Var], degree: usize) -> Expr {
    let mut e = Expr::zero();
    for m in monomials(vars, degree) {
        let c = (rng.random_range(-1.0..=1.0f64) * 100.0).round() / 100.0;
        if c == 0.0 {
            continue;
        }
        // negative constants are stored as Neg so printing and parsing round-trip exactly
        let coef = if c < 0.0 { Expr::Neg(Box::new(Expr::Const(-c))) } else { Expr::Const(c) };
        let mono = vars
            .iter()
            .zip(&m)
            .fold(coef, |acc, (v, &k)| Expr::mul(acc, Expr::pow(Expr::var(*v), k as i32)));
        e = Expr::add(e, mono);
    }
    e
}

fn polys(rng: &mut ChaCha8Rng, vars: &[Var], degree: usize, count: usize) -> Vec<Expr> {
    (0..count).map(|_| poly(rng, vars, degree)).collect()
}

/// `count` dense random polynomials in `vars` of total degree `degree`, with two-decimal
/// coefficients in `[−1, 1]`. Deterministic in `seed`.
///
/// # Panics
/// If `degree > 4`.
pub fn random_polys(seed: u64, degree: usize, vars: &[Var], count: usize) -> Vec<Expr> {
    assert!(degree <= 4, "random_polys supports degree up to 4");
    polys(&mut ChaCha8Rng::seed_from_u64(seed), vars, degree, count)
}

fn arr<const N: usize>(v: Vec<Expr>) -> [Expr; N] {
    v.try_into().expect("length fixed by caller")
}

/// A seeded random member of a named family.
pub fn random_instance(name: &str, seed: u64, degree: usize) -> Result<FamilyInstance> {
    if degree > 4 {
        return Err(Error::Config(format!("degree {degree} exceeds 4")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = &mut rng;
    let inst = match name {
        "walker" => {
            let [a, b, c] = arr(polys(r, &ALL, degree, 3));
            mk_walker(a, b, c)
        }
        "sesqui" => {
            let a = poly(r, &UXY, degree);
            let [b, c] = arr(polys(r, &ALL, degree, 2));
            let mut inst = mk_walker(a, b, c);
            inst.provenance.family = "sesqui".into();
            inst
        }
        "two_sided" => {
            let [a, c] = arr(polys(r, &UXY, degree, 2));
            mk_two_sided(a, poly(r, &ALL, degree), c)?
        }
        "conformal_sesqui" => {
            // c = c1(u,x,y) + v φ(x,y): conformally two-sided
            let a = poly(r, &UXY, degree);
            let b = poly(r, &ALL, degree);
            let c1 = poly(r, &UXY, degree);
            let phi = poly(r, &XY, degree.saturating_sub(1));
            let mut inst = mk_walker(a, b, Expr::add(c1, Expr::mul(Expr::var(Var::V), phi)));
            inst.provenance.family = "conformal_sesqui".into();
            inst
        }
        "sd2015" => mk_sd2015(arr(polys(r, &XY, degree, 15)))?,
        "sd_two_sided" => mk_sd_two_sided(arr(polys(r, &XY, degree, 9)))?,
        "ricci_null" | "ricci_null_wps" => {
            let theta = if name == "ricci_null" {
                poly(r, &ALL, (degree + 2).min(4))
            } else {
                // at most quadratic in v, so ϑ_vvv ≡ 0
                let [r0, r1, r2] = arr(polys(r, &UXY, degree, 3));
                let v = Expr::var(Var::V);
                Expr::add(r0, Expr::add(Expr::mul(v.clone(), r1), Expr::mul(Expr::pow(v, 2), r2)))
            };
            let [h, p1, p0, q1, q0] = arr(polys(r, &XY, degree, 5));
            let quad = |var: Var, lin: Expr, cst: Expr| {
                let x = Expr::var(var);
                Expr::add(
                    Expr::mul(Expr::scale(0.5, h.clone()), Expr::pow(x.clone(), 2)),
                    Expr::add(Expr::mul(lin, x), cst),
                )
            };
            let mut inst = mk_ricci_null(theta, quad(Var::U, p1, p0), quad(Var::V, q1, q0))?;
            inst.provenance.family = name.to_string();
            inst
        }
        "left_flat" => {
            let [x, y, k5, k6, k7] = arr(polys(r, &XY, degree, 5));
            mk_left_flat(x, y, k5, k6, k7)?
        }
        "cp" => mk_cp_example(poly(r, &XY, degree))?.0,
        other => {
            return Err(Error::Config(format!("unknown family `{other}`; known: {}", FAMILY_NAMES.join(", "))))
        }
    };
    Ok(inst.with_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprkit::parse_expr;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(&XY, 2).len(), 6);
        assert_eq!(monomials(&ALL, 3).len(), 35);
    }

    #[test]
    fn deterministic_and_parseable() {
        let a = random_polys(7, 2, &XY, 13);
        assert_eq!(a, random_polys(7, 2, &XY, 13));
        for e in &a {
            assert_eq!(&parse_expr(&e.to_string()).unwrap(), e);
        }
        assert!(random_polys(1, 0, &XY, 4).iter().all(|e| Var::ALL.iter().all(|v| !e.mentions(*v))));
    }

    #[test]
    fn every_family_builds() {
        for name in FAMILY_NAMES {
            let inst = random_instance(name, 3, 2).unwrap();
            assert_eq!(inst.provenance.seed, Some(3));
        }
        assert!(random_instance("nope", 1, 2).is_err());
    }
}
