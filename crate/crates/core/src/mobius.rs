//! Projective action of `PU(2,1)` on `H ∪ {∞}` through the boundary lift
//! `(z, u) ↦ [1 : z : w]`, `w = -4u + i|z|^2`.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{ExtendedPoint, HPoint};

type Mat3 = [[Complex64; 3]; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

const FORM_TOL: f64 = 1e-10;
const INFINITY_TOL: f64 = 1e-13;
const BOUNDARY_TOL: f64 = 1e-8;

/// The Hermitian form whose null cone projects onto `H ∪ {∞}`.
pub fn form_matrix() -> Mat3 {
    [
        [ZERO, ZERO, Complex64::new(0.0, -0.5)],
        [ZERO, ONE, ZERO],
        [Complex64::new(0.0, 0.5), ZERO, ZERO],
    ]
}

/// Homogeneous coordinates of a point.
pub fn lift_point(p: ExtendedPoint) -> [Complex64; 3] {
    match p {
        ExtendedPoint::Infinity => [ZERO, ZERO, ONE],
        ExtendedPoint::Finite(q) => {
            let z = q.z();
            [ONE, z, Complex64::new(-4.0 * q.u, z.norm_sqr())]
        }
    }
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn normalise(mut m: Mat3) -> Mat3 {
    let big = m.iter().flatten().map(|e| e.norm()).fold(0.0, f64::max);
    if big > 0.0 {
        for e in m.iter_mut().flatten() {
            *e /= big;
        }
    }
    m
}

/// Residual `‖N/c - I_D‖_F` of `N = M^T I_D conj(M)`, where `c` is the
/// projection of `N` onto `I_D`. Returns `(c, residual)`.
pub fn form_residual(m: &Mat3) -> (f64, f64) {
    let id = form_matrix();
    let mut mt = [[ZERO; 3]; 3];
    let mut mc = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            mt[i][j] = m[j][i];
            mc[i][j] = m[i][j].conj();
        }
    }
    let n = mat_mul(&mat_mul(&mt, &id), &mc);
    let mut dot = ZERO;
    let mut nn = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            dot += n[i][j] * id[i][j].conj();
            nn += id[i][j].norm_sqr();
        }
    }
    let c = dot / nn;
    if c.re <= 0.0 || c.im.abs() > FORM_TOL * c.re.max(f64::MIN_POSITIVE) {
        return (c.re, f64::INFINITY);
    }
    let mut res = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            res += (n[i][j] / c.re - id[i][j]).norm_sqr();
        }
    }
    (c.re, res.sqrt())
}

/// One of the four generator families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Generator {
    Translation(HPoint),
    Dilation(f64),
    Rotation(f64),
    Inversion,
}

impl Generator {
    pub fn matrix(&self) -> Result<MobiusMatrix> {
        match *self {
            Generator::Translation(p) => Ok(MobiusMatrix::translation(p)),
            Generator::Dilation(l) => MobiusMatrix::dilation(l),
            Generator::Rotation(t) => Ok(MobiusMatrix::rotation(t)),
            Generator::Inversion => Ok(MobiusMatrix::inversion()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Translation(p) => write!(f, "T({:.6},{:.6},{:.6})", p.x, p.y, p.u),
            Generator::Dilation(l) => write!(f, "D({l:.6})"),
            Generator::Rotation(t) => write!(f, "R({t:.6})"),
            Generator::Inversion => write!(f, "I"),
        }
    }
}

/// Ranges for the parameters of randomly drawn generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordBounds {
    /// Translation coordinates are uniform in `[-translation, translation]`.
    pub translation: f64,
    /// Dilation factors are log-uniform in `[1/dilation, dilation]`.
    pub dilation: f64,
}

impl Default for WordBounds {
    fn default() -> Self {
        WordBounds { translation: 1.0, dilation: 2.0 }
    }
}

/// A word in the generators, applied right to left.
#[derive(Debug, Clone, PartialEq)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn random(seed: u64, length: usize, bounds: WordBounds) -> Result<Word> {
        if length == 0 {
            return Err(Error::InvalidArgument("word length must be at least 1".into()));
        }
        if !(bounds.translation >= 0.0) || !(bounds.dilation >= 1.0) {
            return Err(Error::InvalidArgument("invalid word bounds".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = bounds.translation;
        let ld = bounds.dilation.ln();
        let word = (0..length)
            .map(|_| match rng.random_range(0..4u8) {
                0 => Generator::Translation(HPoint::new(
                    rng.random_range(-t..=t),
                    rng.random_range(-t..=t),
                    rng.random_range(-t..=t),
                )),
                1 => Generator::Dilation(rng.random_range(-ld..=ld).exp()),
                2 => Generator::Rotation(rng.random_range(0.0..std::f64::consts::TAU)),
                _ => Generator::Inversion,
            })
            .collect();
        Ok(Word(word))
    }

    pub fn matrix(&self) -> Result<MobiusMatrix> {
        let mut m = MobiusMatrix::identity();
        for g in &self.0 {
            m = m.compose(&g.matrix()?)?;
        }
        Ok(m)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A `3×3` complex matrix preserving the boundary form up to a positive scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMatrix {
    m: Mat3,
}

impl MobiusMatrix {
    pub fn from_entries(m: Mat3) -> Result<Self> {
        if m.iter().flatten().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        let m = normalise(m);
        let (_, residual) = form_residual(&m);
        if !(residual < FORM_TOL) {
            return Err(Error::FormViolation { residual });
        }
        Ok(MobiusMatrix { m })
    }

    pub fn entries(&self) -> &Mat3 {
        &self.m
    }

    pub fn identity() -> Self {
        MobiusMatrix { m: [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]] }
    }

    /// Left multiplication by `p0`.
    pub fn translation(p0: HPoint) -> Self {
        let z0 = p0.z();
        let w0 = Complex64::new(-4.0 * p0.u, z0.norm_sqr());
        MobiusMatrix { m: normalise([[ONE, ZERO, ZERO], [z0, ONE, ZERO], [w0, 2.0 * I * z0.conj(), ONE]]) }
    }

    pub fn dilation(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        let l = Complex64::new(lambda, 0.0);
        Ok(MobiusMatrix { m: normalise([[ONE, ZERO, ZERO], [ZERO, l, ZERO], [ZERO, ZERO, l * l]]) })
    }

    pub fn rotation(theta: f64) -> Self {
        MobiusMatrix {
            m: [[ONE, ZERO, ZERO], [ZERO, Complex64::from_polar(1.0, theta), ZERO], [ZERO, ZERO, ONE]],
        }
    }

    /// Koranyi inversion, `[1 : z : w] ↦ [w : iz : -1]`.
    pub fn inversion() -> Self {
        MobiusMatrix { m: [[ZERO, ZERO, ONE], [ZERO, I, ZERO], [-ONE, ZERO, ZERO]] }
    }

    pub fn form_residual(&self) -> f64 {
        form_residual(&self.m).1
    }

    /// Matrix product; the action is `self` after `other`.
    pub fn compose(&self, other: &MobiusMatrix) -> Result<MobiusMatrix> {
        for a in [self, other] {
            let r = a.form_residual();
            if !(r < FORM_TOL) {
                return Err(Error::FormViolation { residual: r });
            }
        }
        Ok(MobiusMatrix { m: normalise(mat_mul(&self.m, &other.m)) })
    }

    pub fn inverse(&self) -> MobiusMatrix {
        let m = &self.m;
        let cof = |i: usize, j: usize| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        let mut adj = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                adj[j][i] = cof(i, j);
            }
        }
        MobiusMatrix { m: normalise(adj) }
    }

    pub fn apply_homogeneous(&self, v: [Complex64; 3]) -> [Complex64; 3] {
        let m = &self.m;
        [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
    }

    pub fn apply_point(&self, p: ExtendedPoint) -> Result<ExtendedPoint> {
        let r = self.apply_homogeneous(lift_point(p));
        let big = r.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if r[0].norm() < INFINITY_TOL * big {
            return Ok(ExtendedPoint::Infinity);
        }
        let z = r[1] / r[0];
        let w = r[2] / r[0];
        let scale = w.norm() + z.norm_sqr();
        let residual = (w.im - z.norm_sqr()).abs();
        if residual > BOUNDARY_TOL * scale + 1e-300 {
            return Err(Error::BoundaryViolation { residual: residual / scale });
        }
        Ok(ExtendedPoint::Finite(HPoint::from_z(z, -w.re / 4.0)))
    }

    /// Applies the map to a finite point and requires a finite image.
    pub fn apply_finite(&self, p: HPoint) -> Result<HPoint> {
        match self.apply_point(p.into())? {
            ExtendedPoint::Finite(q) => Ok(q),
            ExtendedPoint::Infinity => Err(Error::ImageUnbounded),
        }
    }

    /// Preimage of `∞`, if it is a finite point.
    pub fn pole(&self) -> Option<HPoint> {
        match self.inverse().apply_point(ExtendedPoint::Infinity) {
            Ok(ExtendedPoint::Finite(p)) => Some(p),
            _ => None,
        }
    }
}

pub fn mat_translation(p0: HPoint) -> MobiusMatrix {
    MobiusMatrix::translation(p0)
}

pub fn mat_dilation(lambda: f64) -> Result<MobiusMatrix> {
    MobiusMatrix::dilation(lambda)
}

pub fn mat_rotation(theta: f64) -> MobiusMatrix {
    MobiusMatrix::rotation(theta)
}

pub fn mat_inversion() -> MobiusMatrix {
    MobiusMatrix::inversion()
}

pub fn compose(m1: &MobiusMatrix, m2: &MobiusMatrix) -> Result<MobiusMatrix> {
    m1.compose(m2)
}

pub fn apply_point(m: &MobiusMatrix, p: ExtendedPoint) -> Result<ExtendedPoint> {
    m.apply_point(p)
}

/// Deterministic pseudo-random product of `word_length` generators.
pub fn random_mobius(seed: u64, word_length: usize, bounds: WordBounds) -> Result<MobiusMatrix> {
    Word::random(seed, word_length, bounds)?.matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{dilate, h_mul, invert, koranyi_norm, rotate};
    use proptest::prelude::*;

    fn close(p: HPoint, q: HPoint, tol: f64) -> bool {
        let s = 1.0 + koranyi_norm(p).max(koranyi_norm(q));
        (p.x - q.x).abs() < tol * s && (p.y - q.y).abs() < tol * s && (p.u - q.u).abs() < tol * s * s
    }

    fn pt() -> impl Strategy<Value = HPoint> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y, u)| HPoint::new(x, y, u))
    }

    fn fin(m: &MobiusMatrix, p: HPoint) -> HPoint {
        m.apply_point(p.into()).unwrap().finite().unwrap()
    }

    #[test]
    fn generator_examples() {
        let p = HPoint::new(0.4, -1.3, 0.25);
        assert!(close(fin(&MobiusMatrix::translation(HPoint::ORIGIN), p), p, 1e-15));
        assert!(close(fin(&MobiusMatrix::dilation(2.0).unwrap(), HPoint::new(1.0, 1.0, 1.0)), HPoint::new(2.0, 2.0, 4.0), 1e-15));
        assert!(MobiusMatrix::dilation(0.0).is_err());
        assert!(close(fin(&MobiusMatrix::dilation(1.0).unwrap(), p), p, 1e-15));
        assert!(close(fin(&MobiusMatrix::rotation(std::f64::consts::PI), HPoint::new(1.0, 0.0, 0.0)), HPoint::new(-1.0, 0.0, 0.0), 1e-15));
        let inv = MobiusMatrix::inversion();
        assert!(close(fin(&inv, HPoint::new(1.0, 0.0, 0.0)), HPoint::new(1.0, 0.0, 0.0), 1e-15));
        assert!(close(fin(&inv, HPoint::new(0.0, 0.0, 1.0)), HPoint::new(0.0, 0.0, -1.0 / 16.0), 1e-15));
        assert_eq!(inv.apply_point(HPoint::ORIGIN.into()).unwrap(), ExtendedPoint::Infinity);
        assert_eq!(inv.apply_point(ExtendedPoint::Infinity).unwrap(), ExtendedPoint::Finite(HPoint::ORIGIN));
        for g in [MobiusMatrix::identity(), MobiusMatrix::rotation(0.7), MobiusMatrix::dilation(3.0).unwrap(), inv] {
            assert!(g.form_residual() < 1e-14);
            assert_eq!(g.apply_point(ExtendedPoint::Infinity).unwrap().is_infinity(), g != inv);
        }
    }

    #[test]
    fn rejects_non_form_matrix() {
        let mut m = *MobiusMatrix::identity().entries();
        m[0][1] = Complex64::new(0.5, 0.0);
        assert!(matches!(MobiusMatrix::from_entries(m), Err(Error::FormViolation { .. })));
        assert!(MobiusMatrix::from_entries(*MobiusMatrix::inversion().entries()).is_ok());
    }

    #[test]
    fn random_words_are_reproducible() {
        let b = WordBounds::default();
        let a = random_mobius(7, 5, b).unwrap();
        assert_eq!(a, random_mobius(7, 5, b).unwrap());
        assert_ne!(a, random_mobius(8, 5, b).unwrap());
        assert!(random_mobius(1, 0, b).is_err());
        for seed in 0..200 {
            let w = Word::random(seed, 1, b).unwrap();
            if let Generator::Translation(p0) = w.0[0] {
                let q = HPoint::new(0.3, 0.1, -0.5);
                assert!(close(fin(&w.matrix().unwrap(), q), h_mul(p0, q), 1e-12));
            }
            assert!(random_mobius(seed, 6, b).unwrap().form_residual() < 1e-8);
        }
    }

    fn sequential(w: &Word, p: HPoint) -> ExtendedPoint {
        let mut q = ExtendedPoint::Finite(p);
        for g in w.0.iter().rev() {
            q = match (g, q) {
                (_, ExtendedPoint::Infinity) if *g != Generator::Inversion => q,
                (Generator::Translation(p0), ExtendedPoint::Finite(r)) => h_mul(*p0, r).into(),
                (Generator::Dilation(l), ExtendedPoint::Finite(r)) => dilate(*l, r).unwrap().into(),
                (Generator::Rotation(t), ExtendedPoint::Finite(r)) => rotate(*t, r).into(),
                (Generator::Inversion, q) => invert(q),
                _ => unreachable!(),
            };
        }
        q
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn translation_matches_product(p0 in pt(), q in pt()) {
            let m = MobiusMatrix::translation(p0);
            prop_assert!(m.form_residual() < 1e-12);
            prop_assert!(close(fin(&m, q), h_mul(p0, q), 1e-10));
        }

        #[test]
        fn generators_match_closed_forms(q in pt(), l in 0.1..10.0f64, t in -7.0..7.0f64) {
            prop_assert!(close(fin(&MobiusMatrix::dilation(l).unwrap(), q), dilate(l, q).unwrap(), 1e-10));
            prop_assert!(close(fin(&MobiusMatrix::rotation(t), q), rotate(t, q), 1e-10));
            prop_assume!(koranyi_norm(q) > 1e-2);
            let inv = MobiusMatrix::inversion();
            prop_assert!(close(fin(&inv, q), invert(q.into()).finite().unwrap(), 1e-10));
            let twice = inv.compose(&inv).unwrap();
            prop_assert!(close(fin(&twice, q), q, 1e-10));
        }

        #[test]
        fn translations_compose(p0 in pt(), q0 in pt(), r in pt()) {
            let a = MobiusMatrix::translation(p0).compose(&MobiusMatrix::translation(q0)).unwrap();
            let b = MobiusMatrix::translation(h_mul(p0, q0));
            prop_assert!(close(fin(&a, r), fin(&b, r), 1e-10));
        }

        #[test]
        fn words_match_sequential_application(seed in 0u64..10_000, len in 1usize..6, p in pt()) {
            let w = Word::random(seed, len, WordBounds::default()).unwrap();
            let m = w.matrix().unwrap();
            prop_assert!(m.form_residual() < 1e-10);
            let expect = sequential(&w, p);
            match (m.apply_point(p.into()), expect) {
                (Ok(ExtendedPoint::Finite(a)), ExtendedPoint::Finite(b)) => {
                    let s = koranyi_norm(b).max(1.0);
                    prop_assume!(s < 1e3);
                    prop_assert!(close(a, b, 1e-8 * s));
                }
                (Ok(a), b) => prop_assert!(a.is_infinity() == b.is_infinity() || koranyi_norm(p) < 1e-3),
                (Err(_), _) => prop_assert!(false, "boundary violation"),
            }
            let inv = m.inverse();
            if let Ok(ExtendedPoint::Finite(a)) = m.apply_point(p.into()) {
                prop_assume!(koranyi_norm(a) < 1e3);
                if let Ok(ExtendedPoint::Finite(back)) = inv.apply_point(a.into()) {
                    prop_assert!(close(back, p, 1e-7));
                }
            }
        }

        #[test]
        fn compose_is_associative(s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000, p in pt()) {
            let b = WordBounds::default();
            let (a, bm, c) = (random_mobius(s1, 2, b).unwrap(), random_mobius(s2, 2, b).unwrap(), random_mobius(s3, 2, b).unwrap());
            let l = a.compose(&bm).unwrap().compose(&c).unwrap();
            let r = a.compose(&bm.compose(&c).unwrap()).unwrap();
            if let (Ok(ExtendedPoint::Finite(x)), Ok(ExtendedPoint::Finite(y))) = (l.apply_point(p.into()), r.apply_point(p.into())) {
                let s = koranyi_norm(x).max(1.0);
                prop_assume!(s < 1e3);
                prop_assert!(close(x, y, 1e-10 * s));
            }
        }
    }
}
