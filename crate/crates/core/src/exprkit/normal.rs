//! Expanded sum-of-monomials normal form.
//!
//! Atoms are coordinates, function calls on a normalized argument, and
//! reciprocals of non-monomial polynomials. Products of `exp` atoms are merged
//! into a single `exp` of the summed argument, so `exp(f)*exp(-f)` reduces to 1.
//! Cancellations hidden inside reciprocals (`p/p` for a non-monomial `p`) are not
//! detected; checks built on this module err towards "nonzero".

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::ast::{Expr, Func, Var};
use crate::error::{Error, Result};

const DROP: f64 = 1e-13;

#[derive(Debug, Clone)]
enum AtomKind {
    Var(Var),
    Call(Func, Poly),
    Recip(Poly),
}

#[derive(Debug, Clone)]
struct Atom {
    key: String,
    kind: AtomKind,
}

impl Atom {
    fn new(kind: AtomKind) -> Atom {
        let key = match &kind {
            AtomKind::Var(v) => v.to_string(),
            AtomKind::Call(f, p) => format!("{}({p})", f.name()),
            AtomKind::Recip(p) => format!("1/({p})"),
        };
        Atom { key, kind }
    }

    fn depends_on(&self, var: Var) -> bool {
        match &self.kind {
            AtomKind::Var(v) => *v == var,
            AtomKind::Call(_, p) | AtomKind::Recip(p) => p.depends_on(var),
        }
    }

    fn to_expr(&self) -> Expr {
        match &self.kind {
            AtomKind::Var(v) => Expr::Var(*v),
            AtomKind::Call(f, p) => Expr::call(*f, p.to_expr()),
            AtomKind::Recip(p) => Expr::pow(p.to_expr(), -1),
        }
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for Atom {}
impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

/// Product of atoms with nonzero integer exponents, sorted by atom key.
type Monomial = Vec<(Atom, i32)>;

/// A polynomial over atoms with `f64` coefficients.
#[derive(Debug, Clone, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, f64>,
}

impl Poly {
    fn constant(c: f64) -> Poly {
        let mut p = Poly::default();
        if c != 0.0 {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    fn atom(a: Atom) -> Poly {
        let mut p = Poly::default();
        p.terms.insert(vec![(a, 1)], 1.0);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self.terms.len() {
            0 => Some(0.0),
            1 => self.terms.get(&Vec::new()).copied(),
            _ => None,
        }
    }

    pub fn depends_on(&self, var: Var) -> bool {
        self.terms.keys().any(|m| m.iter().any(|(a, _)| a.depends_on(var)))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, mono: Monomial, c: f64) {
        let old = self.terms.get(&mono).copied().unwrap_or(0.0);
        let sum = old + c;
        if sum.abs() < DROP * old.abs().max(c.abs()).max(1.0) {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, sum);
        }
    }

    fn add(&self, other: &Poly, sign: f64) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), sign * c);
        }
        out
    }

    fn scale(&self, k: f64) -> Poly {
        let mut out = Poly::default();
        if k != 0.0 {
            for (m, c) in &self.terms {
                out.terms.insert(m.clone(), c * k);
            }
        }
        out
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (mono, factor) = mono_mul(ma, mb);
                out.insert(mono, ca * cb * factor);
            }
        }
        out
    }

    fn powi(&self, n: u32) -> Poly {
        let mut out = Poly::constant(1.0);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `Some((c, monomial))` when the polynomial has exactly one term.
    fn single_term(&self) -> Option<(&Monomial, f64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (m, *c))
        } else {
            None
        }
    }

    pub fn to_expr(&self) -> Expr {
        let mut out: Option<Expr> = None;
        for (mono, c) in &self.terms {
            let mut factor: Option<Expr> = None;
            for (atom, k) in mono {
                let f = Expr::pow(atom.to_expr(), *k);
                factor = Some(match factor {
                    None => f,
                    Some(acc) => Expr::mul(acc, f),
                });
            }
            let term = match factor {
                None => Expr::Const(c.abs()),
                Some(f) => Expr::mul(Expr::Const(c.abs()), f),
            };
            out = Some(match (out, *c < 0.0) {
                (None, false) => term,
                (None, true) => Expr::neg(term),
                (Some(acc), false) => Expr::add(acc, term),
                (Some(acc), true) => Expr::sub(acc, term),
            });
        }
        out.unwrap_or_else(Expr::zero)
    }
}

/// Multiply two monomials. Merging `exp` atoms may collapse to `exp(const)`,
/// which comes back as the scalar factor.
fn mono_mul(a: &Monomial, b: &Monomial) -> (Monomial, f64) {
    let mut exps: BTreeMap<Atom, i32> = BTreeMap::new();
    let mut exp_arg = Poly::default();
    let mut has_exp = false;
    for (atom, k) in a.iter().chain(b.iter()) {
        if let AtomKind::Call(Func::Exp, arg) = &atom.kind {
            exp_arg = exp_arg.add(&arg.scale(*k as f64), 1.0);
            has_exp = true;
            continue;
        }
        *exps.entry(atom.clone()).or_insert(0) += k;
    }
    let mut factor = 1.0;
    if has_exp && !exp_arg.is_zero() {
        if let Some(c) = exp_arg.as_constant() {
            factor = c.exp();
        } else {
            exps.insert(Atom::new(AtomKind::Call(Func::Exp, exp_arg)), 1);
        }
    }
    let mono = exps.into_iter().filter(|(_, k)| *k != 0).collect();
    (mono, factor)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:e}")?;
            for (atom, k) in mono {
                write!(f, "*{}^{k}", atom.key)?;
            }
        }
        Ok(())
    }
}

/// Expand `e` into normal form.
pub fn normalize(e: &Expr) -> Poly {
    match e {
        Expr::Const(c) => Poly::constant(*c),
        Expr::Var(v) => Poly::atom(Atom::new(AtomKind::Var(*v))),
        Expr::Neg(a) => normalize(a).scale(-1.0),
        Expr::Add(a, b) => normalize(a).add(&normalize(b), 1.0),
        Expr::Sub(a, b) => normalize(a).add(&normalize(b), -1.0),
        Expr::Mul(a, b) => normalize(a).mul(&normalize(b)),
        Expr::Div(a, b) => normalize(a).mul(&reciprocal(&normalize(b), 1)),
        Expr::Pow(a, n) => {
            let base = normalize(a);
            if *n >= 0 {
                base.powi(*n as u32)
            } else {
                reciprocal(&base, n.unsigned_abs())
            }
        }
        Expr::Call(f, a) => {
            let arg = normalize(a);
            if let Some(c) = arg.as_constant() {
                return Poly::constant(f.apply(c));
            }
            let p = Poly::atom(Atom::new(AtomKind::Call(*f, arg)));
            // route through mul so a lone exp atom is stored in canonical form
            p.mul(&Poly::constant(1.0))
        }
    }
}

/// `p^(-n)`. Monomials invert exactly, anything else becomes a reciprocal atom.
fn reciprocal(p: &Poly, n: u32) -> Poly {
    if let Some((mono, c)) = p.single_term() {
        let inv: Monomial = mono.iter().map(|(a, k)| (a.clone(), -k)).collect();
        let mut base = Poly::default();
        base.terms.insert(inv, 1.0 / c);
        return base.mul(&Poly::constant(1.0)).powi(n);
    }
    if p.is_zero() {
        // not reachable for parsed input; keep the atom so evaluation reports it
        return Poly::atom(Atom::new(AtomKind::Recip(Poly::default()))).powi(n);
    }
    Poly::atom(Atom::new(AtomKind::Recip(p.clone()))).powi(n)
}

/// Structural zero test after expansion.
pub fn is_zero(e: &Expr) -> bool {
    normalize(e).is_zero()
}

/// Whether the expanded form involves `var`.
pub fn depends_on(e: &Expr, var: Var) -> bool {
    normalize(e).depends_on(var)
}

/// Expand and rebuild as an expression.
pub fn simplify(e: &Expr) -> Expr {
    normalize(e).to_expr()
}

/// Antiderivative in `var` of an expression polynomial in `var`, with zero constant of integration.
pub fn antideriv_poly(e: &Expr, var: Var) -> Result<Expr> {
    let p = normalize(e);
    let mut out = Poly::default();
    for (mono, c) in &p.terms {
        let mut k = 0;
        let mut rest = Vec::new();
        for (atom, e) in mono {
            match atom.kind {
                AtomKind::Var(v) if v == var => k = *e,
                _ if atom.depends_on(var) => {
                    return Err(Error::NotPolynomial {
                        var: var.name(),
                        detail: format!("factor `{}` involves {var}", atom.to_expr()),
                    })
                }
                _ => rest.push((atom.clone(), *e)),
            }
        }
        if k < 0 {
            return Err(Error::NotPolynomial { var: var.name(), detail: format!("negative power {var}^{k}") });
        }
        rest.push((Atom::new(AtomKind::Var(var)), k + 1));
        rest.sort_by(|a, b| a.0.cmp(&b.0));
        out.insert(rest, c / (k + 1) as f64);
    }
    Ok(out.to_expr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprkit::{diff_expr, parse_expr};

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn zero_detection() {
        assert!(is_zero(&p("(u+v)^2 - u^2 - 2*u*v - v^2")));
        assert!(is_zero(&p("exp(x)*exp(-x) - 1")));
        assert!(is_zero(&p("u/v^2 - u*v^-2")));
        assert!(is_zero(&diff_expr(&p("u^2*x + exp(y)"), Var::V)));
        assert!(!is_zero(&p("u - v")));
    }

    #[test]
    fn dependence() {
        assert!(!depends_on(&p("v - v + x"), Var::V));
        assert!(depends_on(&p("exp(v*x)"), Var::V));
    }

    #[test]
    fn antiderivatives() {
        let a = antideriv_poly(&p("x"), Var::X).unwrap();
        assert!(is_zero(&Expr::sub(a, p("x^2/2"))));
        let b = antideriv_poly(&p("3*x^2 + y"), Var::X).unwrap();
        assert!(is_zero(&Expr::sub(b, p("x^3 + x*y"))));
        assert!(is_zero(&antideriv_poly(&p("0"), Var::X).unwrap()));
        assert!(matches!(antideriv_poly(&p("exp(x)"), Var::X), Err(Error::NotPolynomial { .. })));
        assert!(matches!(antideriv_poly(&p("1/x"), Var::X), Err(Error::NotPolynomial { .. })));
    }
}
