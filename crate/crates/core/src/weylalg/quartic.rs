use nalgebra::Matrix4;

use crate::error::Result;
use crate::exprkit::{Jet, Point};
use crate::frames::{Tetrad, TetradPoint};
use crate::tensor::{wedge, CurvaturePack, Tensor4};

/// Which Hodge eigenpart a quartic belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    /// Self-dual: the α-plane family `P(s) = ℓ∧m̃ + s(ℓ∧n + m∧m̃) + s²(m∧n)`.
    #[serde(rename = "SD")]
    SD,
    /// Anti-self-dual: the β-plane family `P(t) = ℓ∧m + t(ℓ∧n − m∧m̃) + t²(m̃∧n)`.
    #[serde(rename = "ASD")]
    ASD,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::SD => "SD",
            Side::ASD => "ASD",
        }
    }
}

/// Real binary quartic `Σ c_k t0^(4−k) t1^k`.
///
/// `magnitude` is the size of the curvature seen in the tetrad frame (both quartics and the
/// frame Ricci components). `noise` is the sum of absolute values of all terms entering the
/// contraction, a bound on the cancellation the coordinate computation went through.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuarticForm {
    pub side: Side,
    pub coeffs: [f64; 5],
    pub magnitude: f64,
    pub noise: f64,
}

/// Roundoff floor for zero tests, as a fraction of `noise`, divided by the default zero tolerance.
const NOISE_FLOOR: f64 = 1e-5;

pub(crate) const BINOM4: [f64; 5] = [1.0, 4.0, 6.0, 4.0, 1.0];

impl QuarticForm {
    /// A bare quartic whose own coefficients set the magnitude.
    pub fn new(side: Side, coeffs: [f64; 5]) -> QuarticForm {
        let magnitude = coeffs.iter().fold(0.0, |m: f64, c| m.max(c.abs()));
        QuarticForm { side, coeffs, magnitude, noise: 0.0 }
    }

    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Reference for relative zero tests: the frame magnitude, floored by the roundoff level.
    pub fn reference(&self) -> f64 {
        self.magnitude.max(NOISE_FLOOR * self.noise).max(self.scale()).max(1e-300)
    }

    /// `|c_k|` relative to [`QuarticForm::reference`].
    pub fn rel(&self, k: usize) -> f64 {
        self.coeffs[k].abs() / self.reference()
    }

    /// Value at the affine parameter `tau = t1/t0`.
    pub fn value(&self, tau: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * tau + c)
    }

    pub fn value_homogeneous(&self, t0: f64, t1: f64) -> f64 {
        (0..5).map(|k| self.coeffs[k] * t0.powi(4 - k as i32) * t1.powi(k as i32)).sum()
    }

    /// Coefficients in the variables `(s0, s1)` after `t0 = p0 s0 + l0 s1`, `t1 = p1 s0 + l1 s1`
    /// with `p = (l1, −l0)/|l|²`. The direction `l` moves to `(0:1)`, so a root of multiplicity
    /// `m` at `l` shows up as vanishing `c_4, …, c_(5−m)`.
    pub fn adapted(&self, l0: f64, l1: f64) -> QuarticForm {
        let n2 = l0 * l0 + l1 * l1;
        let (p0, p1) = (l1 / n2, -l0 / n2);
        // expand (p0 s0 + l0 s1)^(4-k) (p1 s0 + l1 s1)^k into powers of s1
        let mut out = [0.0; 5];
        for (k, ck) in self.coeffs.iter().enumerate() {
            let a = binomial_poly(p0, l0, 4 - k);
            let b = binomial_poly(p1, l1, k);
            for (i, ai) in a.iter().enumerate() {
                for (j, bj) in b.iter().enumerate() {
                    out[i + j] += ck * ai * bj;
                }
            }
        }
        let factor = (1.0 / n2.sqrt()).max(n2.sqrt()).powi(4);
        QuarticForm { side: self.side, coeffs: out, magnitude: self.magnitude * factor, noise: self.noise * factor }
    }

    /// Number of leading coefficients that vanish after moving `(l0 : l1)` to `(0:1)`;
    /// that is, the multiplicity of `(l0 : l1)` as a root (4 for the zero form).
    pub fn root_order_at(&self, l0: f64, l1: f64, tol: f64) -> usize {
        let q = self.adapted(l0, l1);
        (0..5).rev().take_while(|&k| q.rel(k) <= tol).count().min(4)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.scale() <= tol * self.reference() || self.scale() == 0.0
    }
}

/// Coefficients of `(p s0 + l s1)^n` in powers of `s1`.
fn binomial_poly(p: f64, l: f64, n: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i] += ci * p;
            next[i + 1] += ci * l;
        }
        c = next;
    }
    c
}

/// The three bivectors of a plane family, indexed by the power of the parameter.
pub fn family_bivectors(tet: &TetradPoint, side: Side) -> [Matrix4<f64>; 3] {
    let TetradPoint { l, n, m, mt } = *tet;
    match side {
        Side::SD => [wedge(&l, &mt), wedge(&l, &n) + wedge(&m, &mt), wedge(&m, &n)],
        Side::ASD => [wedge(&l, &m), wedge(&l, &n) - wedge(&m, &mt), wedge(&mt, &n)],
    }
}

fn raw_quartic(c: &Tensor4, tet: &TetradPoint, side: Side) -> ([f64; 5], f64) {
    let p = family_bivectors(tet, side);
    let mut coeffs = [0.0; 5];
    let mut noise = [0.0f64; 5];
    for i in 0..3 {
        for j in 0..3 {
            coeffs[i + j] += c.pair(&p[i], &p[j]);
            noise[i + j] += c.pair_abs(&p[i], &p[j]);
        }
    }
    (coeffs, noise.iter().fold(0.0, |m, x| m.max(*x)))
}

fn amax(c: &[f64]) -> f64 {
    c.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Quartic from any Weyl-like tensor; `C(P(τ), P(τ))` expanded in `τ`.
/// The magnitude is taken from the quartics of both sides.
pub fn quartic_from_tensor(c: &Tensor4, tet: &TetradPoint, side: Side) -> QuarticForm {
    let (sd, n_sd) = raw_quartic(c, tet, Side::SD);
    let (asd, n_asd) = raw_quartic(c, tet, Side::ASD);
    let coeffs = if side == Side::SD { sd } else { asd };
    QuarticForm { side, coeffs, magnitude: amax(&sd).max(amax(&asd)), noise: n_sd.max(n_asd) }
}

/// Both Weyl quartics at the curvature pack's point, `(SD, ASD)`. Their magnitude also
/// covers the Ricci tensor in the tetrad frame.
pub fn weyl_quartics(curv: &CurvaturePack, tet: &TetradPoint) -> (QuarticForm, QuarticForm) {
    let c = curv.weyl();
    let (sd, n_sd) = raw_quartic(&c, tet, Side::SD);
    let (asd, n_asd) = raw_quartic(&c, tet, Side::ASD);
    let ric = curv.ricci();
    let frame = [tet.l, tet.n, tet.m, tet.mt];
    let mut ricci_frame = 0.0f64;
    for x in &frame {
        for y in &frame {
            ricci_frame = ricci_frame.max(x.dot(&(ric * y)).abs());
        }
    }
    let magnitude = amax(&sd).max(amax(&asd)).max(ricci_frame);
    let noise = n_sd.max(n_asd);
    (
        QuarticForm { side: Side::SD, coeffs: sd, magnitude, noise },
        QuarticForm { side: Side::ASD, coeffs: asd, magnitude, noise },
    )
}

/// The Weyl quartic of one side at the curvature pack's point.
pub fn weyl_quartic(curv: &CurvaturePack, tet: &TetradPoint, side: Side) -> QuarticForm {
    let (sd, asd) = weyl_quartics(curv, tet);
    if side == Side::SD {
        sd
    } else {
        asd
    }
}

fn wedge_jets(x: &[Jet; 4], y: &[Jet; 4]) -> Vec<Jet> {
    let mut out = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            out.push(x[a].mul(&y[b]).sub(&x[b].mul(&y[a])));
        }
    }
    out
}

fn add_jets(x: &[Jet], y: &[Jet], sign: f64) -> Vec<Jet> {
    x.iter().zip(y).map(|(a, b)| a.add(&b.scale(sign))).collect()
}

/// Quartic coefficients as jets (order of the curvature pack), for derivatives along the manifold.
pub fn weyl_quartic_jets(curv: &CurvaturePack, tet: &Tetrad, side: Side, p: &Point) -> Result<[Jet; 5]> {
    let k = curv.order();
    let l = tet.l.jets(p, k)?;
    let n = tet.n.jets(p, k)?;
    let m = tet.m.jets(p, k)?;
    let mt = tet.mt.jets(p, k)?;
    let bivs: [Vec<Jet>; 3] = match side {
        Side::SD => [wedge_jets(&l, &mt), add_jets(&wedge_jets(&l, &n), &wedge_jets(&m, &mt), 1.0), wedge_jets(&m, &n)],
        Side::ASD => [wedge_jets(&l, &m), add_jets(&wedge_jets(&l, &n), &wedge_jets(&m, &mt), -1.0), wedge_jets(&mt, &n)],
    };
    let mut out: [Jet; 5] = std::array::from_fn(|_| Jet::zero(k));
    for i in 0..3 {
        for j in i..3 {
            // 4 Σ_{a<b, c<d} C_abcd P^ab Q^cd
            let mut acc = Jet::zero(k);
            for a in 0..4 {
                for b in a + 1..4 {
                    let pab = &bivs[i][a * 4 + b];
                    for c in 0..4 {
                        for d in c + 1..4 {
                            let term = curv.weyl_jet(a, b, c, d).mul(pab).mul(&bivs[j][c * 4 + d]);
                            acc = acc.add(&term);
                        }
                    }
                }
            }
            let weight = if i == j { 4.0 } else { 8.0 };
            out[i + j] = out[i + j].add(&acc.scale(weight));
        }
    }
    Ok(out)
}

/// Normalized components `Ψ_k = c_k / (binom(4,k) κ)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct WeylComponents {
    pub side: Side,
    pub psi: [f64; 5],
    pub kappa: f64,
}

impl WeylComponents {
    pub fn from_quartic(q: &QuarticForm, kappa: f64) -> WeylComponents {
        WeylComponents { side: q.side, psi: std::array::from_fn(|k| q.coeffs[k] / (BINOM4[k] * kappa)), kappa }
    }

    /// Rebuild the quartic coefficients.
    pub fn coefficients(&self) -> [f64; 5] {
        std::array::from_fn(|k| self.psi[k] * BINOM4[k] * self.kappa)
    }
}

/// Tetrad vectors paired into the bivectors `ℓ∧m̃` and friends; exposed for tests of the star.
pub fn sd_basis(tet: &TetradPoint) -> [Matrix4<f64>; 3] {
    family_bivectors(tet, Side::SD)
}

pub fn asd_basis(tet: &TetradPoint) -> [Matrix4<f64>; 3] {
    family_bivectors(tet, Side::ASD)
}
