//! Invariant integrals on q-grid function algebras.
//!
//! An element is a finite sum of terms (phase monomial) * (grid function).
//! The monomial key lists integer exponents of the distinguished unitary
//! generators, and the function is finitely supported on the orbit lattice
//! {atom * q^(step*k)} of a finite atomic measure.  One commutation shift
//! per family determines products and the involution; the matching
//! enveloping algebra acts from the right by level-shift difference
//! operators.  A functional integrates the zero-key part against grid
//! weights arranged so that h(x <| Z) = eps(Z) h(x) holds exactly for
//! compactly supported elements.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::catalog::catalog;
use crate::ncalg::{NCPoly, Presentation};
use crate::scalars::{lambda_num, ScalarError};

#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error("grid window exhausted; enlarge k-range")]
    WindowExhausted,
    #[error("deformation parameter q={0} must lie strictly between 0 and 1")]
    BadQ(f64),
    #[error("measure needs at least one atom")]
    NoAtoms,
    #[error("empty k-range: {0} > {1}")]
    EmptyRange(i64, i64),
    #[error("atom weight {0} is not positive")]
    BadWeight(f64),
    #[error("atom point {value} outside the fundamental domain {domain}")]
    AtomOutOfDomain { value: f64, domain: &'static str },
    #[error("atom points must be nonzero and share one sign")]
    MixedSigns,
    #[error("key length {got} does not match family arity {want}")]
    KeyArity { got: usize, want: usize },
    #[error("operands live in different families")]
    FamilyMismatch,
    #[error("`{0}` does not act here; expected E, F, K or K^-1")]
    UnknownGenerator(String),
    #[error("measure file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// The five function-algebra families.  Keys index phase monomials, the
/// attached function always sits to the right of the monomial except for
/// negative `Disc` keys, where it sits left of the z* power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    /// u^j v^k f(r): two phases over a radial q-grid; passing the function
    /// left through v scales its argument by q.
    Eq2,
    /// w^k f(r): one phase over a radial q-grid, same shift sense as `Eq2`.
    Cq,
    /// u^n v^k f(r): two phases over a radial q-grid, shift sense opposite
    /// to `Eq2`.
    Su11,
    /// Key n >= 0 holds z^n f(y), key n < 0 holds f(y) z*^|n|, on a
    /// q^2-grid; z z* and z* z differ from 1 by multiples of y.
    Disc,
    /// u^n f(y): one phase over a q^2-grid.
    DiscPlus,
}

impl Family {
    /// Number of integer exponents in a monomial key.
    pub fn key_arity(self) -> usize {
        match self {
            Family::Eq2 | Family::Su11 => 2,
            Family::Cq | Family::Disc | Family::DiscPlus => 1,
        }
    }

    /// Grid points scale by q^step per level: 1 on radial grids, 2 on
    /// the quadratic grids of the disc families.
    pub fn level_step(self) -> i64 {
        match self {
            Family::Eq2 | Family::Cq | Family::Su11 => 1,
            Family::Disc | Family::DiscPlus => 2,
        }
    }

    /// Which enveloping algebra acts on this family.
    pub fn acting_presentation(self) -> &'static Presentation {
        match self {
            Family::Eq2 | Family::Cq => &catalog().uq_e2.pres,
            Family::Su11 | Family::Disc | Family::DiscPlus => &catalog().uq_sl2.pres,
        }
    }

    fn fundamental_domain(self) -> &'static str {
        match self {
            Family::Eq2 | Family::Cq | Family::Su11 => "(q, 1]",
            Family::Disc => "[-1, -q^2)",
            Family::DiscPlus => "(q^2, 1]",
        }
    }

    fn domain_contains(self, q: f64, p: f64) -> bool {
        match self {
            Family::Eq2 | Family::Cq | Family::Su11 => p > q && p <= 1.0,
            Family::Disc => p >= -1.0 && p < -q * q,
            Family::DiscPlus => p > q * q && p <= 1.0,
        }
    }
}

/// Generators of the acting enveloping algebra, by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UGen {
    E,
    F,
    K,
    KInv,
}

impl UGen {
    pub const ALL: [UGen; 4] = [UGen::E, UGen::F, UGen::K, UGen::KInv];

    pub fn name(self) -> &'static str {
        match self {
            UGen::E => "E",
            UGen::F => "F",
            UGen::K => "K",
            UGen::KInv => "K^-1",
        }
    }

    pub fn from_name(name: &str) -> Option<UGen> {
        match name {
            "E" => Some(UGen::E),
            "F" => Some(UGen::F),
            "K" => Some(UGen::K),
            "K^-1" => Some(UGen::KInv),
            _ => None,
        }
    }
}

impl std::fmt::Display for UGen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

// ---------------------------------------------------------------------------
// Grids and grid functions
// ---------------------------------------------------------------------------

/// A finite atomic measure spread over its q-grid orbit.  Atom i at level
/// k sits at atoms[i].0 * q^(step*k); the base weight atoms[i].1 belongs
/// to level 0 and scales by q^(step*k) along the orbit.  Elements may only
/// occupy levels k_min..=k_max.
#[derive(Debug, Clone)]
pub struct QGridMeasure {
    pub family: Family,
    pub q: f64,
    pub atoms: Vec<(f64, f64)>,
    pub k_min: i64,
    pub k_max: i64,
}

impl QGridMeasure {
    pub fn new(
        family: Family,
        q: f64,
        atoms: Vec<(f64, f64)>,
        k_min: i64,
        k_max: i64,
    ) -> Result<QGridMeasure, FunctionalError> {
        if !(q > 0.0 && q < 1.0) {
            return Err(FunctionalError::BadQ(q));
        }
        if atoms.is_empty() {
            return Err(FunctionalError::NoAtoms);
        }
        if k_min > k_max {
            return Err(FunctionalError::EmptyRange(k_min, k_max));
        }
        let sign = atoms[0].0.signum();
        for &(p, w) in &atoms {
            if w <= 0.0 || w.is_nan() {
                return Err(FunctionalError::BadWeight(w));
            }
            if p == 0.0 || p.signum() != sign {
                return Err(FunctionalError::MixedSigns);
            }
        }
        Ok(QGridMeasure {
            family,
            q,
            atoms,
            k_min,
            k_max,
        })
    }

    /// Coordinate of atom i at level k.
    pub fn point(&self, k: i64, atom: usize) -> f64 {
        self.atoms[atom].0 * self.q.powi((self.family.level_step() * k) as i32)
    }

    pub fn in_range(&self, k: i64) -> bool {
        (self.k_min..=self.k_max).contains(&k)
    }
}

/// Finitely supported function on a q-grid, indexed by (level, atom).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridFunction {
    pub values: BTreeMap<(i64, usize), Complex64>,
}

impl GridFunction {
    pub fn zero() -> GridFunction {
        GridFunction::default()
    }

    pub fn indicator(k: i64, atom: usize) -> GridFunction {
        let mut f = GridFunction::zero();
        f.add_at(k, atom, Complex64::new(1.0, 0.0));
        f
    }

    /// Constant 1 on the given level span, every atom.
    pub fn constant_on(m: &QGridMeasure, k_lo: i64, k_hi: i64) -> GridFunction {
        let mut f = GridFunction::zero();
        for k in k_lo..=k_hi {
            for i in 0..m.atoms.len() {
                f.add_at(k, i, Complex64::new(1.0, 0.0));
            }
        }
        f
    }

    pub fn add_at(&mut self, k: i64, atom: usize, v: Complex64) {
        let slot = self.values.entry((k, atom)).or_insert(Complex64::ZERO);
        *slot += v;
        if slot.norm() == 0.0 {
            self.values.remove(&(k, atom));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Argument scaling (S_j f)(x) = f(q^(step*j) x): the value at level k
    /// is read from level k + j.
    pub fn arg_scaled(&self, j: i64) -> GridFunction {
        let mut out = GridFunction::zero();
        for (&(k, i), &v) in &self.values {
            out.values.insert((k - j, i), v);
        }
        out
    }

    pub fn conj(&self) -> GridFunction {
        GridFunction {
            values: self.values.iter().map(|(&k, &v)| (k, v.conj())).collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> GridFunction {
        if c.norm() == 0.0 {
            return GridFunction::zero();
        }
        GridFunction {
            values: self.values.iter().map(|(&k, &v)| (k, c * v)).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> GridFunction {
        let mut out = self.clone();
        for (&(k, i), &v) in &other.values {
            out.add_at(k, i, v);
        }
        out
    }

    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Pointwise product; support is the intersection.
    pub fn pointwise(&self, other: &GridFunction) -> GridFunction {
        let mut out = GridFunction::zero();
        for (&key, &v) in &self.values {
            if let Some(&w) = other.values.get(&key) {
                out.add_at(key.0, key.1, v * w);
            }
        }
        out
    }

    /// Multiply by a real function of the grid coordinate.
    pub fn map_points(&self, m: &QGridMeasure, f: impl Fn(f64) -> f64) -> GridFunction {
        let mut out = GridFunction::zero();
        for (&(k, i), &v) in &self.values {
            out.add_at(k, i, v * f(m.point(k, i)));
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.values().fold(0.0, |a, v| a.max(v.norm()))
    }
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// Finite sum of monomial * grid-function terms in canonical order.
#[derive(Debug, Clone)]
pub struct FAElement {
    pub family: Family,
    pub terms: BTreeMap<Vec<i64>, GridFunction>,
}

impl FAElement {
    pub fn zero(family: Family) -> FAElement {
        FAElement {
            family,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(
        family: Family,
        key: &[i64],
        f: GridFunction,
    ) -> Result<FAElement, FunctionalError> {
        let mut el = FAElement::zero(family);
        el.add_term(key, f)?;
        Ok(el)
    }

    pub fn add_term(&mut self, key: &[i64], f: GridFunction) -> Result<(), FunctionalError> {
        let want = self.family.key_arity();
        if key.len() != want {
            return Err(FunctionalError::KeyArity {
                got: key.len(),
                want,
            });
        }
        if f.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(key.to_vec()).or_default();
        *slot = slot.add(&f);
        if slot.is_zero() {
            self.terms.remove(key);
        }
        Ok(())
    }

    pub fn scaled(&self, c: Complex64) -> FAElement {
        if c.norm() == 0.0 {
            return FAElement::zero(self.family);
        }
        FAElement {
            family: self.family,
            terms: self
                .terms
                .iter()
                .map(|(k, f)| (k.clone(), f.scaled(c)))
                .collect(),
        }
    }

    pub fn add(&self, other: &FAElement) -> Result<FAElement, FunctionalError> {
        if self.family != other.family {
            return Err(FunctionalError::FamilyMismatch);
        }
        let mut out = self.clone();
        for (k, f) in &other.terms {
            out.add_term(k, f.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FAElement) -> Result<FAElement, FunctionalError> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |a, f| a.max(f.max_abs()))
    }

    /// Largest pointwise difference across all keys.
    pub fn distance(&self, other: &FAElement) -> f64 {
        match self.sub(other) {
            Ok(d) => d.max_abs(),
            Err(_) => f64::INFINITY,
        }
    }
}

// ---------------------------------------------------------------------------
// Functionals
// ---------------------------------------------------------------------------

/// Weight of a grid point when integrating the zero-key part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// weight * point * q^(2k): radial measure integrated with density r.
    RadialMass,
    /// weight / point^2 * q^(-2k): quadratic grid with density y^(-2).
    InverseSquare,
    /// q^(-2k) on levels k >= 1 of the plain q^2-grid through 1.
    TailSum,
}

/// A family, a grid measure, and the weight rule: everything needed to
/// multiply, star, act on, and integrate elements.
#[derive(Debug, Clone)]
pub struct FunctionalSpec {
    pub grid: QGridMeasure,
    pub weighting: Weighting,
}

impl FunctionalSpec {
    /// Invariant integral built from a finite atomic measure on the
    /// family's fundamental domain.
    pub fn atomic(
        family: Family,
        q: f64,
        atoms: &[(f64, f64)],
        k_min: i64,
        k_max: i64,
    ) -> Result<FunctionalSpec, FunctionalError> {
        for &(p, _) in atoms {
            if !family.domain_contains(q, p) {
                return Err(FunctionalError::AtomOutOfDomain {
                    value: p,
                    domain: family.fundamental_domain(),
                });
            }
        }
        let grid = QGridMeasure::new(family, q, atoms.to_vec(), k_min, k_max)?;
        let weighting = match family {
            Family::Eq2 | Family::Cq | Family::Su11 => Weighting::RadialMass,
            Family::Disc | Family::DiscPlus => Weighting::InverseSquare,
        };
        Ok(FunctionalSpec { grid, weighting })
    }

    /// Parameter-free tail functional on the positive q^2-grid of the disc
    /// family: sum of f(q^(2k)) q^(-2k) over k >= 1.
    pub fn tail(q: f64, k_min: i64, k_max: i64) -> Result<FunctionalSpec, FunctionalError> {
        let grid = QGridMeasure::new(Family::Disc, q, vec![(1.0, 1.0)], k_min, k_max)?;
        Ok(FunctionalSpec {
            grid,
            weighting: Weighting::TailSum,
        })
    }

    /// Two-atom benchmark measure {(0.6, 1.0), (0.9, 0.5)} mapped into the
    /// family's fundamental domain (negated for the disc family).
    pub fn standard(
        family: Family,
        q: f64,
        k_min: i64,
        k_max: i64,
    ) -> Result<FunctionalSpec, FunctionalError> {
        let sign = if family == Family::Disc { -1.0 } else { 1.0 };
        let atoms = [(sign * 0.6, 1.0), (sign * 0.9, 0.5)];
        FunctionalSpec::atomic(family, q, &atoms, k_min, k_max)
    }

    pub fn family(&self) -> Family {
        self.grid.family
    }

    fn check_support(&self, x: &FAElement) -> Result<(), FunctionalError> {
        for f in x.terms.values() {
            for &(k, _) in f.values.keys() {
                if !self.grid.in_range(k) {
                    return Err(FunctionalError::WindowExhausted);
                }
            }
        }
        Ok(())
    }

    // -- product ------------------------------------------------------------

    pub fn multiply(
        &self,
        x: &FAElement,
        y: &FAElement,
    ) -> Result<FAElement, FunctionalError> {
        if x.family != y.family || x.family != self.family() {
            return Err(FunctionalError::FamilyMismatch);
        }
        let mut out = FAElement::zero(x.family);
        for (kx, f) in &x.terms {
            for (ky, g) in &y.terms {
                let key: Vec<i64> = kx.iter().zip(ky).map(|(a, b)| a + b).collect();
                let h = match x.family {
                    // Passing f right through the second monomial scales the
                    // argument by q^(last exponent), with the opposite sense
                    // for `Su11`.
                    Family::Eq2 | Family::Cq | Family::DiscPlus => {
                        f.arg_scaled(*ky.last().unwrap()).pointwise(g)
                    }
                    Family::Su11 => f.arg_scaled(-*ky.last().unwrap()).pointwise(g),
                    Family::Disc => self.disc_product(kx[0], f, ky[0], g),
                };
                out.add_term(&key, h)?;
            }
        }
        self.check_support(&out)?;
        Ok(out)
    }

    /// The four canonical-form cases of the disc product.  For t >= 0 the
    /// reorderings z^t z*^t and z*^t z^t insert the grid polynomials
    /// prod_{l=1..t} (1 - q^(-2l) y) and prod_{l=0..t-1} (1 - q^(2l) y).
    fn disc_product(&self, n: i64, f: &GridFunction, m: i64, g: &GridFunction) -> GridFunction {
        let q = self.grid.q;
        let p_poly = |t: i64| move |y: f64| (1..=t).map(|l| 1.0 - q.powi(-2 * l as i32) * y).product::<f64>();
        let q_poly = |t: i64| move |y: f64| (0..t).map(|l| 1.0 - q.powi(2 * l as i32) * y).product::<f64>();
        if n >= 0 && m >= 0 {
            // (z^n f)(z^m g) = z^(n+m) S_m(f) g
            f.arg_scaled(m).pointwise(g)
        } else if n < 0 && m < 0 {
            // (f z*^a)(g z*^b) = f S_a(g) z*^(a+b)
            f.pointwise(&g.arg_scaled(-n))
        } else if n >= 0 {
            // (z^n f)(g z*^b): contract t = min(n, b) mixed pairs.
            let b = -m;
            let t = n.min(b);
            f.pointwise(g)
                .arg_scaled(-t)
                .map_points(&self.grid, p_poly(t))
        } else {
            // (f z*^a)(z^m g)
            let a = -n;
            if m >= a {
                f.map_points(&self.grid, q_poly(a))
                    .arg_scaled(m - a)
                    .pointwise(g)
            } else {
                f.pointwise(
                    &g.map_points(&self.grid, q_poly(m))
                        .arg_scaled(a - m),
                )
            }
        }
    }

    // -- involution -----------------------------------------------------------

    pub fn star(&self, x: &FAElement) -> Result<FAElement, FunctionalError> {
        if x.family != self.family() {
            return Err(FunctionalError::FamilyMismatch);
        }
        let mut out = FAElement::zero(x.family);
        for (key, f) in &x.terms {
            let neg: Vec<i64> = key.iter().map(|k| -k).collect();
            let g = match x.family {
                Family::Eq2 | Family::Cq => f.conj().arg_scaled(-*key.last().unwrap()),
                Family::Su11 => f.conj().arg_scaled(*key.last().unwrap()),
                Family::DiscPlus => f.conj().arg_scaled(-key[0]),
                // Keys swap between the z^n and z*^n shapes; the function
                // moves across unchanged.
                Family::Disc => f.conj(),
            };
            out.add_term(&neg, g)?;
        }
        self.check_support(&out)?;
        Ok(out)
    }

    // -- right action ---------------------------------------------------------

    /// Right action of one enveloping-algebra generator.
    pub fn act(&self, x: &FAElement, z: UGen) -> Result<FAElement, FunctionalError> {
        if x.family != self.family() {
            return Err(FunctionalError::FamilyMismatch);
        }
        let q = self.grid.q;
        let li = 1.0 / lambda_num(q);
        let mut out = FAElement::zero(x.family);
        for (key, f) in &x.terms {
            let (new_key, g) = match x.family {
                Family::Eq2 => self.act_eq2(key, f, z, q, li),
                Family::Cq => self.act_cq(key, f, z, q, li),
                Family::Su11 => self.act_su11(key, f, z, q, li),
                Family::Disc => self.act_disc(key, f, z, q, li),
                Family::DiscPlus => self.act_disc_plus(key, f, z, q, li),
            };
            out.add_term(&new_key, g)?;
        }
        self.check_support(&out)?;
        Ok(out)
    }

    fn act_eq2(
        &self,
        key: &[i64],
        f: &GridFunction,
        z: UGen,
        q: f64,
        li: f64,
    ) -> (Vec<i64>, GridFunction) {
        let (j, k) = (key[0], key[1]);
        match z {
            UGen::E => {
                let pref = q.powf((j - k - 3) as f64 / 2.0) * li;
                let g = f
                    .sub(&f.arg_scaled(1).scaled(q.powi(-j as i32).into()))
                    .map_points(&self.grid, |r| 1.0 / r)
                    .scaled(pref.into());
                (vec![j + 1, k + 1], g)
            }
            UGen::F => {
                let pref = q.powf((-j - k + 1) as f64 / 2.0) * li;
                let g = f
                    .scaled(q.powi(j as i32).into())
                    .sub(&f.arg_scaled(-1))
                    .map_points(&self.grid, |r| 1.0 / r)
                    .scaled(pref.into());
                (vec![j - 1, k - 1], g)
            }
            UGen::K => (key.to_vec(), f.scaled(q.powf((j + k) as f64 / 2.0).into())),
            UGen::KInv => (key.to_vec(), f.scaled(q.powf(-(j + k) as f64 / 2.0).into())),
        }
    }

    fn act_cq(
        &self,
        key: &[i64],
        f: &GridFunction,
        z: UGen,
        q: f64,
        li: f64,
    ) -> (Vec<i64>, GridFunction) {
        let k = key[0];
        match z {
            UGen::E => {
                let g = f
                    .sub(&f.arg_scaled(1).scaled(q.powi(-k as i32).into()))
                    .map_points(&self.grid, |r| 1.0 / r)
                    .scaled((q.powf(-1.5) * li).into());
                (vec![k + 1], g)
            }
            UGen::F => {
                let g = f
                    .sub(&f.arg_scaled(-1).scaled(q.powi(-k as i32).into()))
                    .map_points(&self.grid, |r| 1.0 / r)
                    .scaled((q.sqrt() * li).into());
                (vec![k - 1], g)
            }
            UGen::K => (key.to_vec(), f.scaled(q.powi(k as i32).into())),
            UGen::KInv => (key.to_vec(), f.scaled(q.powi(-k as i32).into())),
        }
    }

    fn act_su11(
        &self,
        key: &[i64],
        f: &GridFunction,
        z: UGen,
        q: f64,
        li: f64,
    ) -> (Vec<i64>, GridFunction) {
        let (n, k) = (key[0], key[1]);
        match z {
            UGen::E => {
                let pref = q.powf((n + k + 1) as f64 / 2.0) * li;
                let t1 = f.map_points(&self.grid, |r| (1.0 + q.powi(-2 * k as i32) * r * r).sqrt());
                let t2 = f
                    .arg_scaled(-1)
                    .map_points(&self.grid, |r| (1.0 + r * r).sqrt())
                    .scaled(q.powi(-n as i32).into());
                let g = t1
                    .sub(&t2)
                    .map_points(&self.grid, |r| 1.0 / r)
                    .scaled(pref.into());
                (vec![n - 1, k + 1], g)
            }
            UGen::F => {
                let pref = q.powf((k - n - 3) as f64 / 2.0) * li;
                let t1 = f
                    .arg_scaled(1)
                    .map_points(&self.grid, |r| (1.0 + q * q * r * r).sqrt());
                let t2 = f
                    .map_points(&self.grid, |r| {
                        (1.0 + q.powi(2 * (1 - k) as i32) * r * r).sqrt()
                    })
                    .scaled(q.powi(n as i32).into());
                let g = t1
                    .sub(&t2)
                    .map_points(&self.grid, |r| 1.0 / r)
                    .scaled(pref.into());
                (vec![n + 1, k - 1], g)
            }
            UGen::K => (key.to_vec(), f.scaled(q.powf((n - k) as f64 / 2.0).into())),
            UGen::KInv => (key.to_vec(), f.scaled(q.powf((k - n) as f64 / 2.0).into())),
        }
    }

    fn act_disc(
        &self,
        key: &[i64],
        f: &GridFunction,
        z: UGen,
        q: f64,
        li: f64,
    ) -> (Vec<i64>, GridFunction) {
        let n = key[0];
        // Canonical form of z h(y) z*^k for k >= 1: level-shift h down once
        // and multiply by (1 - q^(-2) y).
        let wrap = |h: &GridFunction| {
            h.arg_scaled(-1)
                .sub(h)
                .map_points(&self.grid, |y| 1.0 - y / (q * q))
        };
        match z {
            UGen::E => {
                let g = if n >= 0 {
                    f.scaled(q.powi(-n as i32).into())
                        .sub(&f.arg_scaled(1).scaled(q.powi(n as i32).into()))
                } else {
                    let k = -n;
                    wrap(f)
                        .scaled(q.powi(k as i32).into())
                        .add(&f.scaled((q.powi(k as i32) - q.powi(-k as i32)).into()))
                };
                (vec![n + 1], g.scaled((q.sqrt() * li).into()))
            }
            UGen::F => {
                let g = if n > 0 {
                    wrap(f)
                        .scaled(q.powi(n as i32).into())
                        .add(&f.scaled((q.powi(n as i32) - q.powi(-n as i32)).into()))
                } else {
                    f.scaled(q.powi(n as i32).into())
                        .sub(&f.arg_scaled(1).scaled(q.powi(-n as i32).into()))
                };
                (vec![n - 1], g.scaled((1.0 / q.sqrt() * li).into()))
            }
            UGen::K => (key.to_vec(), f.scaled(q.powi(-n as i32).into())),
            UGen::KInv => (key.to_vec(), f.scaled(q.powi(n as i32).into())),
        }
    }

    fn act_disc_plus(
        &self,
        key: &[i64],
        f: &GridFunction,
        z: UGen,
        q: f64,
        li: f64,
    ) -> (Vec<i64>, GridFunction) {
        let n = key[0];
        match z {
            UGen::E => {
                let t1 = f
                    .map_points(&self.grid, |y| (1.0 + q.powi(2 * n as i32) * y).sqrt())
                    .scaled(q.powi(-n as i32).into());
                let t2 = f
                    .arg_scaled(1)
                    .map_points(&self.grid, |y| (1.0 + y).sqrt())
                    .scaled(q.powi(n as i32).into());
                (vec![n + 1], t1.sub(&t2).scaled((q.sqrt() * li).into()))
            }
            UGen::F => {
                let t1 = f
                    .arg_scaled(-1)
                    .map_points(&self.grid, |y| (1.0 + y / (q * q)).sqrt())
                    .scaled(q.powi(n as i32).into());
                let t2 = f
                    .map_points(&self.grid, |y| {
                        (1.0 + q.powi(2 * (n - 1) as i32) * y).sqrt()
                    })
                    .scaled(q.powi(-n as i32).into());
                (vec![n - 1], t1.sub(&t2).scaled((1.0 / q.sqrt() * li).into()))
            }
            UGen::K => (key.to_vec(), f.scaled(q.powi(-n as i32).into())),
            UGen::KInv => (key.to_vec(), f.scaled(q.powi(n as i32).into())),
        }
    }

    /// x <| (g_1 g_2 ... g_n), applied letter by letter.
    pub fn act_word(&self, x: &FAElement, word: &[UGen]) -> Result<FAElement, FunctionalError> {
        let mut y = x.clone();
        for &z in word {
            y = self.act(&y, z)?;
        }
        Ok(y)
    }

    /// Right action of a polynomial in the acting algebra; coefficients are
    /// evaluated at the grid's q.
    pub fn act_poly(
        &self,
        x: &FAElement,
        p: &NCPoly,
        pres: &Presentation,
    ) -> Result<FAElement, FunctionalError> {
        let mut out = FAElement::zero(x.family);
        for (word, coeff) in &p.terms {
            let c = coeff.evaluate(self.grid.q)?;
            let mut y = x.clone();
            for &g in &word.0 {
                let name = pres.gen_name(g);
                let z = UGen::from_name(name)
                    .ok_or_else(|| FunctionalError::UnknownGenerator(name.to_string()))?;
                y = self.act(&y, z)?;
            }
            out = out.add(&y.scaled(c.into()))?;
        }
        Ok(out)
    }

    // -- integration ----------------------------------------------------------

    fn weight(&self, k: i64, atom: usize) -> f64 {
        let (a, w) = self.grid.atoms[atom];
        let q = self.grid.q;
        match self.weighting {
            Weighting::RadialMass => a * w * q.powi(2 * k as i32),
            Weighting::InverseSquare => w / (a * a) * q.powi(-2 * k as i32),
            Weighting::TailSum => {
                if k >= 1 {
                    q.powi(-2 * k as i32)
                } else {
                    0.0
                }
            }
        }
    }

    /// The functional: phase monomials integrate to zero, so only the
    /// zero-key term contributes a weighted grid sum.
    pub fn evaluate(&self, x: &FAElement) -> Complex64 {
        let zero_key = vec![0i64; x.family.key_arity()];
        let Some(f) = x.terms.get(&zero_key) else {
            return Complex64::ZERO;
        };
        f.values
            .iter()
            .map(|(&(k, i), &v)| v * self.weight(k, i))
            .sum()
    }

    /// Counit of an acting generator, read off the Hopf tables.
    pub fn counit(&self, z: UGen) -> Result<f64, FunctionalError> {
        let entry = match self.family() {
            Family::Eq2 | Family::Cq => &catalog().uq_e2,
            Family::Su11 | Family::Disc | Family::DiscPlus => &catalog().uq_sl2,
        };
        let hopf = entry.hopf.as_ref().expect("acting algebras carry Hopf data");
        let g = entry.pres.gen_id(z.name());
        Ok(hopf.counit(&NCPoly::from_gen(g)).evaluate(self.grid.q)?)
    }

    /// |h(x <| Z) - eps(Z) h(x)|.
    pub fn invariance_residual(
        &self,
        x: &FAElement,
        z: UGen,
    ) -> Result<f64, FunctionalError> {
        let acted = self.act(x, z)?;
        let eps = self.counit(z)?;
        Ok((self.evaluate(&acted) - self.evaluate(x) * eps).norm())
    }

    /// Gram matrix G[(i, j)] = h(xs[j]* xs[i]).
    pub fn positivity_gram(
        &self,
        xs: &[FAElement],
    ) -> Result<DMatrix<Complex64>, FunctionalError> {
        let n = xs.len();
        let mut gram = DMatrix::zeros(n, n);
        for j in 0..n {
            let sj = self.star(&xs[j])?;
            for i in 0..n {
                gram[(i, j)] = self.evaluate(&self.multiply(&sj, &xs[i])?);
            }
        }
        Ok(gram)
    }
}

/// Smallest eigenvalue of a Hermitian Gram matrix (0 for an empty one).
pub fn min_gram_eigenvalue(gram: &DMatrix<Complex64>) -> f64 {
    if gram.nrows() == 0 {
        return 0.0;
    }
    let eig = gram.clone().symmetric_eigen();
    eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

/// Largest deviation from Hermitian symmetry.
pub fn hermitian_defect(gram: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            worst = worst.max((gram[(i, j)] - gram[(j, i)].conj()).norm());
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// Random elements and measure files
// ---------------------------------------------------------------------------

/// Seeded compactly supported element: up to three monomial keys within
/// the key bound, each with up to four samples on levels
/// level_lo..=level_hi.
pub fn random_element<R: Rng + ?Sized>(
    rng: &mut R,
    grid: &QGridMeasure,
    key_bound: i64,
    level_lo: i64,
    level_hi: i64,
) -> FAElement {
    let family = grid.family;
    let arity = family.key_arity();
    let mut el = FAElement::zero(family);
    for _ in 0..rng.gen_range(1..=3) {
        let key: Vec<i64> = (0..arity)
            .map(|_| rng.gen_range(-key_bound..=key_bound))
            .collect();
        let mut f = GridFunction::zero();
        for _ in 0..rng.gen_range(1..=4) {
            let k = rng.gen_range(level_lo..=level_hi);
            let i = rng.gen_range(0..grid.atoms.len());
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.add_at(k, i, v);
        }
        el.add_term(&key, f).expect("arity fixed by construction");
    }
    el
}

/// Parsed measure file: atom lines `point weight`, one line
/// `krange min max`, `#` comments.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureFile {
    pub atoms: Vec<(f64, f64)>,
    pub k_min: i64,
    pub k_max: i64,
}

pub fn parse_measure_file(text: &str) -> Result<MeasureFile, FunctionalError> {
    let mut atoms = Vec::new();
    let mut krange = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields[0] == "krange" {
            if fields.len() != 3 {
                return Err(FunctionalError::Parse {
                    line,
                    message: "expected `krange min max`".into(),
                });
            }
            let lo: i64 = fields[1].parse().map_err(|e| FunctionalError::Parse {
                line,
                message: format!("bad k-range bound: {e}"),
            })?;
            let hi: i64 = fields[2].parse().map_err(|e| FunctionalError::Parse {
                line,
                message: format!("bad k-range bound: {e}"),
            })?;
            if krange.replace((lo, hi)).is_some() {
                return Err(FunctionalError::Parse {
                    line,
                    message: "duplicate krange line".into(),
                });
            }
        } else {
            if fields.len() != 2 {
                return Err(FunctionalError::Parse {
                    line,
                    message: "expected `point weight`".into(),
                });
            }
            let p: f64 = fields[0].parse().map_err(|e| FunctionalError::Parse {
                line,
                message: format!("bad atom point: {e}"),
            })?;
            let w: f64 = fields[1].parse().map_err(|e| FunctionalError::Parse {
                line,
                message: format!("bad atom weight: {e}"),
            })?;
            atoms.push((p, w));
        }
    }
    let (k_min, k_max) = krange.ok_or(FunctionalError::Parse {
        line: 0,
        message: "missing krange line".into(),
    })?;
    Ok(MeasureFile {
        atoms,
        k_min,
        k_max,
    })
}

/// The six benchmark functionals at a given q, in a fixed order.
pub fn standard_suite(
    q: f64,
    k_min: i64,
    k_max: i64,
) -> Result<Vec<(&'static str, FunctionalSpec)>, FunctionalError> {
    Ok(vec![
        ("eq2-mu0", FunctionalSpec::standard(Family::Eq2, q, k_min, k_max)?),
        ("cq-mu0", FunctionalSpec::standard(Family::Cq, q, k_min, k_max)?),
        ("su-mu0", FunctionalSpec::standard(Family::Su11, q, k_min, k_max)?),
        ("disc-mu0", FunctionalSpec::standard(Family::Disc, q, k_min, k_max)?),
        ("disc-tail", FunctionalSpec::tail(q, k_min, k_max)?),
        (
            "discplus-mu0",
            FunctionalSpec::standard(Family::DiscPlus, q, k_min, k_max)?,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: f64 = 0.5;

    fn spec(family: Family) -> FunctionalSpec {
        FunctionalSpec::standard(family, Q, -10, 10).unwrap()
    }

    fn all_specs() -> Vec<FunctionalSpec> {
        let mut v: Vec<FunctionalSpec> = [
            Family::Eq2,
            Family::Cq,
            Family::Su11,
            Family::Disc,
            Family::DiscPlus,
        ]
        .into_iter()
        .map(spec)
        .collect();
        v.push(FunctionalSpec::tail(Q, -10, 10).unwrap());
        v
    }

    fn sample(rng: &mut ChaCha8Rng, s: &FunctionalSpec) -> FAElement {
        random_element(rng, &s.grid, 2, -3, 3)
    }

    #[test]
    fn product_shifts_the_left_function() {
        let s = spec(Family::Eq2);
        let mut f = GridFunction::zero();
        f.add_at(0, 0, Complex64::new(2.0, 1.0));
        f.add_at(1, 0, Complex64::new(-1.0, 0.0));
        let mut g = GridFunction::zero();
        g.add_at(0, 0, Complex64::new(3.0, 0.0));
        let x = FAElement::monomial(Family::Eq2, &[1, 0], f).unwrap();
        let y = FAElement::monomial(Family::Eq2, &[0, 1], g).unwrap();
        let xy = s.multiply(&x, &y).unwrap();
        assert_eq!(xy.terms.len(), 1);
        let h = &xy.terms[&vec![1, 1]];
        // S_1(f) reads one level deeper: value f(1,0) lands at level 0.
        assert_eq!(h.values.len(), 1);
        assert!((h.values[&(0, 0)] - Complex64::new(-3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn disc_z_zstar_products_match_the_defining_relations() {
        let s = spec(Family::Disc);
        let g = &s.grid;
        let one_lo = GridFunction::constant_on(g, -9, 9);
        let z = FAElement::monomial(Family::Disc, &[1], one_lo.clone()).unwrap();
        let zs = FAElement::monomial(Family::Disc, &[-1], one_lo).unwrap();
        let zzs = s.multiply(&z, &zs).unwrap();
        let zsz = s.multiply(&zs, &z).unwrap();
        for (&(k, i), &v) in &zzs.terms[&vec![0]].values {
            let y = g.point(k, i);
            assert!((v.re - (1.0 - y / (Q * Q))).abs() < 1e-13, "z z* at y={y}");
            assert!(v.im == 0.0);
        }
        for (&(k, i), &v) in &zsz.terms[&vec![0]].values {
            let y = g.point(k, i);
            assert!((v.re - (1.0 - y)).abs() < 1e-13, "z* z at y={y}");
        }
    }

    #[test]
    fn star_is_involutive_and_antimultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for s in all_specs() {
            for _ in 0..10 {
                let x = sample(&mut rng, &s);
                let y = sample(&mut rng, &s);
                let back = s.star(&s.star(&x).unwrap()).unwrap();
                assert!(back.distance(&x) < 1e-13, "star^2 in {:?}", s.family());
                let lhs = s.star(&s.multiply(&x, &y).unwrap()).unwrap();
                let rhs = s
                    .multiply(&s.star(&y).unwrap(), &s.star(&x).unwrap())
                    .unwrap();
                assert!(
                    lhs.distance(&rhs) < 1e-12,
                    "antimultiplicativity in {:?}",
                    s.family()
                );
            }
        }
    }

    #[test]
    fn multiplication_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for s in all_specs() {
            for _ in 0..10 {
                let x = sample(&mut rng, &s);
                let y = sample(&mut rng, &s);
                let z = sample(&mut rng, &s);
                let a = s.multiply(&s.multiply(&x, &y).unwrap(), &z).unwrap();
                let b = s.multiply(&x, &s.multiply(&y, &z).unwrap()).unwrap();
                let scale = 1.0 + a.max_abs();
                assert!(
                    a.distance(&b) / scale < 1e-12,
                    "associativity in {:?}",
                    s.family()
                );
            }
        }
    }

    #[test]
    fn one_phase_action_matches_the_difference_formula() {
        // w^0 f <| F = q^(1/2) li w^-1 (f(r) - f(r/q)) / r on the plane grid.
        let s = spec(Family::Cq);
        let li = 1.0 / lambda_num(Q);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut f = GridFunction::zero();
        for _ in 0..5 {
            f.add_at(
                rng.gen_range(-3..=3),
                rng.gen_range(0..2),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        let x = FAElement::monomial(Family::Cq, &[0], f.clone()).unwrap();
        let acted = s.act(&x, UGen::F).unwrap();
        assert_eq!(acted.terms.len(), 1);
        let g = &acted.terms[&vec![-1]];
        for k in -5..=5 {
            for i in 0..2 {
                let r = s.grid.point(k, i);
                let zero = Complex64::ZERO;
                let want = (f.values.get(&(k, i)).unwrap_or(&zero)
                    - f.values.get(&(k - 1, i)).unwrap_or(&zero))
                    * (Q.sqrt() * li / r);
                let got = g.values.get(&(k, i)).unwrap_or(&zero);
                assert!((got - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn disc_zstar_action_agrees_with_its_product_form() {
        // f z* <| E = q^(1/2) li [ z q (f - f(q^2 y)) z* + (q - 1/q) f ],
        // recomputed through the product routine.
        let s = spec(Family::Disc);
        let li = 1.0 / lambda_num(Q);
        let mut f = GridFunction::zero();
        f.add_at(0, 0, Complex64::new(1.0, -2.0));
        f.add_at(1, 1, Complex64::new(0.5, 0.25));
        f.add_at(-2, 0, Complex64::new(-1.5, 0.0));
        let x = FAElement::monomial(Family::Disc, &[-1], f.clone()).unwrap();
        let acted = s.act(&x, UGen::E).unwrap();

        let z = FAElement::monomial(
            Family::Disc,
            &[1],
            GridFunction::constant_on(&s.grid, -9, 9),
        )
        .unwrap();
        let mid = FAElement::monomial(
            Family::Disc,
            &[-1],
            f.sub(&f.arg_scaled(1)).scaled(Q.into()),
        )
        .unwrap();
        let tail = FAElement::monomial(Family::Disc, &[0], f.scaled((Q - 1.0 / Q).into())).unwrap();
        let via_product = s
            .multiply(&z, &mid)
            .unwrap()
            .add(&tail)
            .unwrap()
            .scaled((Q.sqrt() * li).into());
        assert!(acted.distance(&via_product) < 1e-13);
    }

    #[test]
    fn phase_monomials_integrate_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for s in all_specs() {
            let x = sample(&mut rng, &s);
            for (key, f) in &x.terms {
                if key.iter().any(|&e| e != 0) {
                    let alone = FAElement::monomial(s.family(), key, f.clone()).unwrap();
                    assert_eq!(s.evaluate(&alone), Complex64::ZERO);
                }
            }
        }
    }

    #[test]
    fn unit_mass_values() {
        // Unit mass at r = 1: the indicator of that point integrates to 1.
        let s = FunctionalSpec::atomic(Family::Cq, Q, &[(1.0, 1.0)], -5, 5).unwrap();
        let x = FAElement::monomial(Family::Cq, &[0], GridFunction::indicator(0, 0)).unwrap();
        assert!((s.evaluate(&x) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        // Tail functional: the indicator of q^2 integrates to q^-2 = 4.
        let t = FunctionalSpec::tail(Q, -5, 5).unwrap();
        let y = FAElement::monomial(Family::Disc, &[0], GridFunction::indicator(1, 0)).unwrap();
        assert!((t.evaluate(&y) - Complex64::new(4.0, 0.0)).norm() < 1e-15);
        // Levels k <= 0 sit outside the tail sum.
        let y0 = FAElement::monomial(Family::Disc, &[0], GridFunction::indicator(0, 0)).unwrap();
        assert_eq!(t.evaluate(&y0), Complex64::ZERO);
    }

    #[test]
    fn balance_identity_holds_on_both_disc_functionals() {
        // h(f(y/q^2)(1 - y/q^2)) = q^-2 h(f(y)(1 - y)); on the tail grid the
        // level-zero term dies against (1 - y).
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for s in [
            FunctionalSpec::tail(Q, -10, 10).unwrap(),
            spec(Family::Disc),
        ] {
            for _ in 0..20 {
                let mut f = GridFunction::zero();
                for _ in 0..4 {
                    f.add_at(
                        rng.gen_range(0..=4),
                        rng.gen_range(0..s.grid.atoms.len()),
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    );
                }
                let lhs_f = f
                    .arg_scaled(-1)
                    .map_points(&s.grid, |y| 1.0 - y / (Q * Q));
                let rhs_f = f.map_points(&s.grid, |y| 1.0 - y);
                let lhs = s.evaluate(
                    &FAElement::monomial(Family::Disc, &[0], lhs_f).unwrap(),
                );
                let rhs = s.evaluate(
                    &FAElement::monomial(Family::Disc, &[0], rhs_f).unwrap(),
                );
                assert!((lhs - rhs / (Q * Q)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn functionals_are_invariant_for_the_right_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for s in all_specs() {
            for _ in 0..25 {
                let x = sample(&mut rng, &s);
                for z in UGen::ALL {
                    let res = s.invariance_residual(&x, z).unwrap();
                    assert!(
                        res <= 1e-12,
                        "invariance under {z} in {:?}: {res:.3e}",
                        s.family()
                    );
                }
            }
        }
    }

    #[test]
    fn action_satisfies_the_defining_relations() {
        // (x <| g1) <| g2 equals x <| (rewrite of g1 g2), for every rewrite
        // rule of the acting algebra.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for s in all_specs() {
            let pres = s.family().acting_presentation();
            for _ in 0..6 {
                let x = sample(&mut rng, &s);
                for ((g1, g2), rhs) in pres.rules() {
                    let n1 = UGen::from_name(pres.gen_name(g1)).unwrap();
                    let n2 = UGen::from_name(pres.gen_name(g2)).unwrap();
                    let lhs = s.act_word(&x, &[n1, n2]).unwrap();
                    let via_rhs = s.act_poly(&x, rhs, pres).unwrap();
                    let scale = 1.0 + lhs.max_abs();
                    assert!(
                        lhs.distance(&via_rhs) / scale < 1e-11,
                        "module law for {}{} in {:?}",
                        pres.gen_name(g1),
                        pres.gen_name(g2),
                        s.family()
                    );
                }
            }
        }
    }

    #[test]
    fn tail_gram_of_monomials_matches_direct_sums() {
        // h((z^n f)* (z^n f)) is the tail sum of |f|^2 times the z*^n z^n
        // reordering polynomial, and the z*-side picks up q^-2k.
        let s = FunctionalSpec::tail(Q, -10, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let mut f = GridFunction::zero();
        for _ in 0..5 {
            f.add_at(
                rng.gen_range(0..=4),
                0,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        let q_poly = |t: i64, y: f64| -> f64 {
            (0..t).map(|l| 1.0 - Q.powi(2 * l as i32) * y).product()
        };
        for n in 1..=2i64 {
            let zn = FAElement::monomial(Family::Disc, &[n], f.clone()).unwrap();
            let got = s
                .evaluate(&s.multiply(&s.star(&zn).unwrap(), &zn).unwrap())
                .re;
            let want: f64 = f
                .values
                .iter()
                .filter(|(&(k, _), _)| k >= 1)
                .map(|(&(k, _), v)| {
                    v.norm_sqr() * Q.powi(-2 * k as i32) * q_poly(n, Q.powi(2 * k as i32))
                })
                .sum();
            assert!((got - want).abs() < 1e-12, "z^{n} column");

            let zsn = FAElement::monomial(Family::Disc, &[-n], f.clone()).unwrap();
            let got = s
                .evaluate(&s.multiply(&s.star(&zsn).unwrap(), &zsn).unwrap())
                .re;
            let want: f64 = f
                .values
                .iter()
                .filter(|(&(k, _), _)| k >= 1)
                .map(|(&(k, _), v)| {
                    v.norm_sqr()
                        * Q.powi(-2 * (k + n) as i32)
                        * q_poly(n, Q.powi(2 * k as i32))
                })
                .sum();
            assert!((got - want).abs() < 1e-12, "z*^{n} column");
        }
    }

    #[test]
    fn gram_across_distinct_keys_is_diagonal() {
        let s = spec(Family::Eq2);
        let keys = [[0i64, 0], [1, 0], [0, 1], [-1, 2]];
        let xs: Vec<FAElement> = keys
            .iter()
            .map(|k| {
                FAElement::monomial(Family::Eq2, k, GridFunction::indicator(0, 0)).unwrap()
            })
            .collect();
        let gram = s.positivity_gram(&xs).unwrap();
        for i in 0..xs.len() {
            for j in 0..xs.len() {
                if i != j {
                    assert_eq!(gram[(i, j)], Complex64::ZERO);
                } else {
                    assert!(gram[(i, i)].re > 0.0 && gram[(i, i)].im == 0.0);
                }
            }
        }
    }

    #[test]
    fn gram_matrices_are_hermitian_and_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for s in all_specs() {
            let xs: Vec<FAElement> = (0..8).map(|_| sample(&mut rng, &s)).collect();
            let gram = s.positivity_gram(&xs).unwrap();
            assert!(hermitian_defect(&gram) < 1e-13, "{:?}", s.family());
            let min = min_gram_eigenvalue(&gram);
            assert!(min >= -1e-10, "min eigenvalue {min:.3e} in {:?}", s.family());
        }
    }

    #[test]
    fn rescaling_atoms_one_level_leaves_the_integral_alone() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        // Radial grid: (a, w) -> (qa, qw) with support raised one level.
        let s1 = FunctionalSpec {
            grid: QGridMeasure::new(Family::Cq, Q, vec![(0.8, 1.0)], -8, 8).unwrap(),
            weighting: Weighting::RadialMass,
        };
        let s2 = FunctionalSpec {
            grid: QGridMeasure::new(Family::Cq, Q, vec![(0.8 * Q, Q)], -8, 8).unwrap(),
            weighting: Weighting::RadialMass,
        };
        // Quadratic grid: (a, w) -> (q^2 a, q^2 w).
        let d1 = FunctionalSpec {
            grid: QGridMeasure::new(Family::Disc, Q, vec![(-0.8, 1.0)], -8, 8).unwrap(),
            weighting: Weighting::InverseSquare,
        };
        let d2 = FunctionalSpec {
            grid: QGridMeasure::new(Family::Disc, Q, vec![(-0.8 * Q * Q, Q * Q)], -8, 8).unwrap(),
            weighting: Weighting::InverseSquare,
        };
        for (a, b) in [(s1, s2), (d1, d2)] {
            for _ in 0..10 {
                let mut f = GridFunction::zero();
                for _ in 0..4 {
                    f.add_at(
                        rng.gen_range(-3..=3),
                        0,
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    );
                }
                let key = vec![0i64];
                let x1 = FAElement::monomial(a.family(), &key, f.clone()).unwrap();
                // The same physical samples, addressed through the scaled atom.
                let x2 = FAElement::monomial(b.family(), &key, f.arg_scaled(1)).unwrap();
                let h1 = a.evaluate(&x1);
                let h2 = b.evaluate(&x2);
                assert!((h1 - h2).norm() < 1e-12 * (1.0 + h1.norm()));
            }
        }
    }

    #[test]
    fn escaping_the_window_is_an_error() {
        let narrow = FunctionalSpec {
            grid: QGridMeasure::new(Family::Eq2, Q, vec![(0.6, 1.0)], -2, 2).unwrap(),
            weighting: Weighting::RadialMass,
        };
        let x = FAElement::monomial(Family::Eq2, &[0, 2], GridFunction::indicator(1, 0)).unwrap();
        let err = narrow.star(&x).unwrap_err();
        assert_eq!(err.to_string(), "grid window exhausted; enlarge k-range");
    }

    #[test]
    fn atoms_must_sit_in_the_fundamental_domain() {
        assert!(matches!(
            FunctionalSpec::atomic(Family::Eq2, Q, &[(0.4, 1.0)], -5, 5),
            Err(FunctionalError::AtomOutOfDomain { .. })
        ));
        assert!(matches!(
            FunctionalSpec::atomic(Family::Disc, Q, &[(0.6, 1.0)], -5, 5),
            Err(FunctionalError::AtomOutOfDomain { .. })
        ));
        assert!(matches!(
            FunctionalSpec::atomic(Family::DiscPlus, Q, &[(0.2, 1.0)], -5, 5),
            Err(FunctionalError::AtomOutOfDomain { .. })
        ));
        assert!(FunctionalSpec::atomic(Family::Disc, Q, &[(-0.6, 1.0)], -5, 5).is_ok());
    }

    #[test]
    fn measure_files_round_trip() {
        let text = "# two atoms\n0.6 1.0\n0.9 0.5   # light atom\nkrange -10 10\n";
        let parsed = parse_measure_file(text).unwrap();
        assert_eq!(
            parsed,
            MeasureFile {
                atoms: vec![(0.6, 1.0), (0.9, 0.5)],
                k_min: -10,
                k_max: 10,
            }
        );
        assert!(matches!(
            parse_measure_file("0.6 1.0\n"),
            Err(FunctionalError::Parse { .. })
        ));
        assert!(matches!(
            parse_measure_file("0.6\nkrange -1 1\n"),
            Err(FunctionalError::Parse { line: 1, .. })
        ));
    }
}
