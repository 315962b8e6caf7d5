//! Truncated multivariate Taylor jets over the four coordinates.
//!
//! Coefficients are stored as raw partial derivatives, so `jet.partial([0, 1, 0, 0])`
//! is literally `∂f/∂v` at the expansion point.

use std::sync::OnceLock;

use super::ast::Var;

/// Highest jet order with a precomputed layout.
pub const MAX_ORDER: usize = 6;

/// A derivative multi-index over `(u, v, x, y)`.
pub type MultiIndex = [u8; 4];

pub(crate) struct Layout {
    pub order: usize,
    pub indices: Vec<MultiIndex>,
    lookup: Vec<u16>,
    /// For each target index: `(lhs, rhs, binomial weight)` triples of the Leibniz rule.
    products: Vec<Vec<(u16, u16, f64)>>,
}

impl Layout {
    fn build(order: usize) -> Layout {
        let mut indices = Vec::new();
        for total in 0..=order {
            for a in (0..=total).rev() {
                for b in (0..=total - a).rev() {
                    for c in (0..=total - a - b).rev() {
                        let d = total - a - b - c;
                        indices.push([a as u8, b as u8, c as u8, d as u8]);
                    }
                }
            }
        }
        let side = order + 1;
        let mut lookup = vec![u16::MAX; side.pow(4)];
        for (i, mi) in indices.iter().enumerate() {
            lookup[key(mi, side)] = i as u16;
        }
        let binom = |n: u8, k: u8| -> f64 {
            let mut r = 1.0;
            for j in 0..k {
                r = r * (n - j) as f64 / (j + 1) as f64;
            }
            r
        };
        let mut products = Vec::with_capacity(indices.len());
        for target in &indices {
            let mut terms = Vec::new();
            for (i, lhs) in indices.iter().enumerate() {
                if (0..4).all(|k| lhs[k] <= target[k]) {
                    let rhs = [target[0] - lhs[0], target[1] - lhs[1], target[2] - lhs[2], target[3] - lhs[3]];
                    let j = lookup[key(&rhs, side)];
                    let w: f64 = (0..4).map(|k| binom(target[k], lhs[k])).product();
                    terms.push((i as u16, j, w));
                }
            }
            products.push(terms);
        }
        Layout { order, indices, lookup, products }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn index_of(&self, mi: &MultiIndex) -> Option<usize> {
        let total: usize = mi.iter().map(|&k| k as usize).sum();
        if total > self.order {
            return None;
        }
        let i = self.lookup[key(mi, self.order + 1)];
        (i != u16::MAX).then_some(i as usize)
    }
}

fn key(mi: &MultiIndex, side: usize) -> usize {
    ((mi[0] as usize * side + mi[1] as usize) * side + mi[2] as usize) * side + mi[3] as usize
}

pub(crate) fn layout(order: usize) -> &'static Layout {
    static LAYOUTS: OnceLock<Vec<Layout>> = OnceLock::new();
    assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
    &LAYOUTS.get_or_init(|| (0..=MAX_ORDER).map(Layout::build).collect())[order]
}

/// Truncated Taylor expansion of a scalar at a point, to a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    order: usize,
    partials: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Jet {
        let mut partials = vec![0.0; layout(order).len()];
        partials[0] = value;
        Jet { order, partials }
    }

    pub fn zero(order: usize) -> Jet {
        Jet::constant(0.0, order)
    }

    /// The coordinate function `var` expanded at `value`.
    pub fn variable(var: Var, value: f64, order: usize) -> Jet {
        let mut j = Jet::constant(value, order);
        if order >= 1 {
            let mut mi = [0u8; 4];
            mi[var.index()] = 1;
            let i = layout(order).index_of(&mi).expect("first order index");
            j.partials[i] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.partials[0]
    }

    /// Raw partial derivative for `mi`; zero beyond the truncation order.
    pub fn partial(&self, mi: MultiIndex) -> f64 {
        layout(self.order).index_of(&mi).map_or(0.0, |i| self.partials[i])
    }

    /// First partial along `var`.
    pub fn d(&self, var: Var) -> f64 {
        let mut mi = [0u8; 4];
        mi[var.index()] = 1;
        self.partial(mi)
    }

    /// Iterate `(multi_index, partial)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        layout(self.order).indices.iter().copied().zip(self.partials.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.partials.iter().fold(0.0, |m, p| m.max(p.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.partials.iter().all(|p| p.is_finite())
    }

    /// Partial derivative as a jet of one lower order.
    pub fn derivative(&self, var: Var) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let lower = layout(self.order - 1);
        let upper = layout(self.order);
        let mut partials = vec![0.0; lower.len()];
        for (i, mi) in lower.indices.iter().enumerate() {
            let mut up = *mi;
            up[var.index()] += 1;
            partials[i] = self.partials[upper.index_of(&up).expect("in range")];
        }
        Jet { order: self.order - 1, partials }
    }

    /// Drop to a lower order.
    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order);
        let n = layout(order).len();
        Jet { order, partials: self.partials[..n].to_vec() }
    }

    fn check_same(&self, other: &Jet) {
        assert_eq!(self.order, other.order, "jet order mismatch");
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.check_same(other);
        Jet { order: self.order, partials: self.partials.iter().zip(&other.partials).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.check_same(other);
        Jet { order: self.order, partials: self.partials.iter().zip(&other.partials).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Jet {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet { order: self.order, partials: self.partials.iter().map(|a| a * c).collect() }
    }

    pub fn add_const(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.partials[0] += c;
        out
    }

    pub fn add_assign_scaled(&mut self, other: &Jet, c: f64) {
        self.check_same(other);
        for (a, b) in self.partials.iter_mut().zip(&other.partials) {
            *a += c * b;
        }
    }

    /// Product by the multivariate Leibniz rule.
    pub fn mul(&self, other: &Jet) -> Jet {
        self.check_same(other);
        let lay = layout(self.order);
        let partials = lay
            .products
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|&(i, j, w)| w * self.partials[i as usize] * other.partials[j as usize])
                    .sum()
            })
            .collect();
        Jet { order: self.order, partials }
    }

    /// Compose with a univariate function given its derivatives `f^(k)(value)`, `k = 0..=order`.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        assert!(derivs.len() > self.order);
        let mut h = self.clone();
        h.partials[0] = 0.0;
        let mut out = Jet::constant(derivs[0], self.order);
        let mut power = Jet::constant(1.0, self.order);
        let mut factorial = 1.0;
        for (k, dk) in derivs.iter().enumerate().take(self.order + 1).skip(1) {
            power = power.mul(&h);
            factorial *= k as f64;
            out.add_assign_scaled(&power, dk / factorial);
        }
        out
    }

    /// `1/self`; the caller guarantees a nonzero value part.
    pub fn recip(&self) -> Jet {
        let g0 = self.value();
        let mut derivs = Vec::with_capacity(self.order + 1);
        let mut fact = 1.0;
        for k in 0..=self.order {
            if k > 0 {
                fact *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            derivs.push(sign * fact / g0.powi(k as i32 + 1));
        }
        self.compose(&derivs)
    }

    pub fn div(&self, other: &Jet) -> Jet {
        self.mul(&other.recip())
    }

    pub fn powi(&self, n: i32) -> Jet {
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut result = Jet::constant(1.0, self.order);
        let mut base = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_sizes() {
        assert_eq!(layout(0).len(), 1);
        assert_eq!(layout(2).len(), 15);
        assert_eq!(layout(3).len(), 35);
        assert_eq!(layout(4).len(), 70);
    }

    #[test]
    fn product_of_coordinates() {
        // u*v at (2,3): value 6, d_u = 3, d_v = 2, d_uv = 1, d_uu = 0
        let u = Jet::variable(Var::U, 2.0, 2);
        let v = Jet::variable(Var::V, 3.0, 2);
        let uv = u.mul(&v);
        assert_eq!(uv.value(), 6.0);
        assert_eq!(uv.partial([1, 0, 0, 0]), 3.0);
        assert_eq!(uv.partial([0, 1, 0, 0]), 2.0);
        assert_eq!(uv.partial([1, 1, 0, 0]), 1.0);
        assert_eq!(uv.partial([2, 0, 0, 0]), 0.0);
    }

    #[test]
    fn reciprocal_partials() {
        // 1/v at v = 1: d_v = -1, d_vv = 2, d_vvv = -6
        let v = Jet::variable(Var::V, 1.0, 3);
        let r = v.recip();
        assert_eq!(r.value(), 1.0);
        assert_eq!(r.partial([0, 1, 0, 0]), -1.0);
        assert_eq!(r.partial([0, 2, 0, 0]), 2.0);
        assert_eq!(r.partial([0, 3, 0, 0]), -6.0);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let u = Jet::variable(Var::U, 1.5, 3).add(&Jet::variable(Var::Y, 0.5, 3));
        let p = u.powi(3);
        let q = u.mul(&u).mul(&u);
        for (a, b) in p.partials.iter().zip(&q.partials) {
            assert!((a - b).abs() < 1e-12);
        }
        let inv = u.powi(-2).mul(&u.powi(2));
        assert!((inv.value() - 1.0).abs() < 1e-14);
        assert!(inv.partials[1..].iter().all(|c| c.abs() < 1e-12));
    }
}
