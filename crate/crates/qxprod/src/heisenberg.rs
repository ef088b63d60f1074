//! GNS spaces of the invariant integrals and their series identification.
//!
//! An invariant integral h on a coordinate function algebra induces the
//! inner product <x, y> = h(y* x).  The cross product acts on the
//! resulting Hilbert space: coordinate generators by left multiplication
//! through their polar embeddings, symmetry generators Z by the twisted
//! right action x -> x <| S^(-1)(Z).  This module enumerates a finite
//! window of that representation, pushes its orthonormal basis through an
//! explicit index bijection onto a series window from [`crate::represent`],
//! and reports the largest matrix-element discrepancy.
//!
//! The expected identifications, with Q the atom positions of the measure:
//!
//! * plane integral  -> `e2eq2-II` with A = Q, B the canonical window
//!   value of -lambda^(-1) q^(-beta-1), H = I, eps = 1;
//! * radial cylinder integral -> `e2cq-II` with the same A, B and
//!   H = q^(-beta-1) I (the identity at q = 1/2 where beta = -1);
//! * hyperbolic integral -> `su-I2` with A = Q, B = q Q^(-1), H = I;
//! * disc tail integral -> `disc-I1` with H1 = I, and an orthonormal GNS
//!   basis whose Gram matrix is exactly the identity;
//! * disc atomic integral (negative atoms) and its positive-spectrum
//!   mirror -> `disc-II2` with A1 = A2 = sqrt|Q|, H1 = I.
//!
//! The tail and atomic summands live on disjoint grids and no operator
//! mixes them, so the integral that carries both decomposes as the exact
//! orthogonal direct sum of the two identifications above.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::catalog::{catalog, CrossAlg};
use crate::functionals::{FAElement, Family, FunctionalError, FunctionalSpec, GridFunction, UGen};
use crate::ncalg::{GenId, NCPoly, Presentation};
use crate::represent::{build_series, window_exponent, ParamSet, RepError, SeriesRep};

#[derive(Debug, Error)]
pub enum HeisenbergError {
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("GNS vector has negative squared norm {0}")]
    NegativeNorm(f64),
    #[error("operator image leaves the enumerated GNS window at key {key:?}, level {level}")]
    BoxEscape { key: Vec<i64>, level: i64 },
    #[error("mapped point {0:?} misses the series window; enlarge the series radius")]
    SeriesEscape(Vec<i64>),
    #[error("no interior column was checked; enlarge the windows")]
    NothingChecked,
    #[error("no embedding is defined for generator {0}")]
    UnknownGenerator(String),
}

// ---------------------------------------------------------------------------
// Targets
// ---------------------------------------------------------------------------

/// An invariant integral together with the series member its GNS
/// representation realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnsTarget {
    /// Atomic integral over the plane function algebra.
    Eq2,
    /// Atomic integral over the radial cylinder function algebra.
    Cq,
    /// Atomic integral over the hyperbolic function algebra.
    Su11,
    /// Tail integral over the positive q^2-grid of the disc.
    DiscTail,
    /// Atomic integral over the disc, atoms in [-1, -q^2).
    DiscAtomic,
    /// Atomic integral over the positive-spectrum mirror of the disc.
    DiscPlusAtomic,
}

impl GnsTarget {
    pub const ALL: [GnsTarget; 6] = [
        GnsTarget::Eq2,
        GnsTarget::Cq,
        GnsTarget::Su11,
        GnsTarget::DiscTail,
        GnsTarget::DiscAtomic,
        GnsTarget::DiscPlusAtomic,
    ];

    pub fn family(self) -> Family {
        match self {
            GnsTarget::Eq2 => Family::Eq2,
            GnsTarget::Cq => Family::Cq,
            GnsTarget::Su11 => Family::Su11,
            GnsTarget::DiscTail | GnsTarget::DiscAtomic => Family::Disc,
            GnsTarget::DiscPlusAtomic => Family::DiscPlus,
        }
    }

    pub fn series_label(self) -> &'static str {
        match self {
            GnsTarget::Eq2 => "e2eq2-II",
            GnsTarget::Cq => "e2cq-II",
            GnsTarget::Su11 => "su-I2",
            GnsTarget::DiscTail => "disc-I1",
            GnsTarget::DiscAtomic | GnsTarget::DiscPlusAtomic => "disc-II2",
        }
    }

    fn cross(self) -> &'static CrossAlg {
        let cat = catalog();
        match self {
            GnsTarget::Eq2 => &cat.e2_eq2_r,
            GnsTarget::Cq => &cat.e2_cq_r,
            GnsTarget::Su11 => &cat.su_slloc_r,
            _ => &cat.su_uq_r,
        }
    }

    /// The integral the GNS space is built from.  `atoms` is ignored by
    /// the parameter-free tail target.
    pub fn functional(
        self,
        q: f64,
        atoms: &[(f64, f64)],
        k_min: i64,
        k_max: i64,
    ) -> Result<FunctionalSpec, HeisenbergError> {
        match self {
            GnsTarget::DiscTail => Ok(FunctionalSpec::tail(q, k_min, k_max)?),
            _ => Ok(FunctionalSpec::atomic(self.family(), q, atoms, k_min, k_max)?),
        }
    }

    /// Series parameters forced by the GNS construction over the given
    /// atoms, one slot per atom.
    pub fn series_params(
        self,
        q: f64,
        atoms: &[(f64, f64)],
    ) -> Result<ParamSet, HeisenbergError> {
        let mut ps = ParamSet::baseline(q);
        let n = atoms.len().max(1);
        let pos: Vec<f64> = atoms.iter().map(|&(a, _)| a).collect();
        match self {
            GnsTarget::Eq2 => {
                let (_, b) = window_exponent(q)?;
                ps.a = pos;
                ps.b = vec![b; n];
                ps.h = vec![1.0; n];
                ps.eps = 1.0;
            }
            GnsTarget::Cq => {
                let (_, b) = window_exponent(q)?;
                ps.a = pos;
                ps.b = vec![b; n];
                // b = -lambda^(-1) q^(-beta-1), so q^(-beta-1) = b (q^(-1) - q).
                ps.h = vec![b * (1.0 / q - q); n];
            }
            GnsTarget::Su11 => {
                ps.b = pos.iter().map(|&a| q / a).collect();
                ps.a = pos;
                ps.h = vec![1.0; n];
                ps.eps = 1.0;
            }
            GnsTarget::DiscTail => {
                ps.h1 = vec![1.0];
            }
            GnsTarget::DiscAtomic | GnsTarget::DiscPlusAtomic => {
                let root: Vec<f64> = pos.iter().map(|&a| a.abs().sqrt()).collect();
                ps.a1 = root.clone();
                ps.a2 = root;
                ps.h1 = vec![1.0; n];
            }
        }
        Ok(ps)
    }

    /// Enumerated index window: key bound and level span.  Every operator
    /// moves each index by at most one, so shrinking the window by one
    /// gives the columns whose images stay enumerable.
    fn window(self) -> (i64, i64, i64) {
        match self {
            GnsTarget::Eq2 | GnsTarget::Su11 => (2, -2, 2),
            GnsTarget::Cq => (3, -3, 3),
            GnsTarget::DiscTail => (4, 0, 6),
            GnsTarget::DiscAtomic | GnsTarget::DiscPlusAtomic => (3, -3, 3),
        }
    }

    /// Series lattice point and sign of a basis vector.  The bijections
    /// are unimodular on the index lattice; the signs make every matched
    /// coefficient pair agree exactly, not only up to sign.
    pub fn series_point(self, beta: i64, key: &[i64], level: i64) -> (Vec<i64>, f64) {
        let m = level;
        let sgn = |t: i64| if t.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        match self {
            GnsTarget::Eq2 => {
                let (j, k) = (key[0], key[1]);
                (
                    vec![-m - k, j - k - m - beta - 1, -j + k + 2 * beta + 2],
                    sgn(m),
                )
            }
            GnsTarget::Cq => {
                let k = key[0];
                (vec![-m - k, -m - beta - 1], sgn(m))
            }
            GnsTarget::Su11 => {
                let (n, k) = (key[0], key[1]);
                (vec![m - k, -m - 2, -n - m - 4], sgn(m))
            }
            GnsTarget::DiscTail | GnsTarget::DiscAtomic => {
                let n = key[0];
                let u = m + n.max(0);
                (vec![u - 1, u - n - 1], sgn(u - n - 1))
            }
            GnsTarget::DiscPlusAtomic => {
                let n = key[0];
                let u = m + n;
                (vec![u - 1, u - n - 1], sgn(u - n - 1))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Embeddings and operators
// ---------------------------------------------------------------------------

/// Constant-one function on a span that stays clear of the grid window
/// edge, so shifted products remain representable.
fn wide_span(spec: &FunctionalSpec) -> GridFunction {
    let g = &spec.grid;
    GridFunction::constant_on(g, g.k_min + 8, g.k_max - 8)
}

/// Polar embedding of a coordinate generator as a concrete element of the
/// function algebra.
fn embedded(spec: &FunctionalSpec, name: &str) -> Result<FAElement, HeisenbergError> {
    let fam = spec.family();
    let g = &spec.grid;
    let q = g.q;
    let span = wide_span(spec);
    let el = |key: &[i64], f: GridFunction| Ok(FAElement::monomial(fam, key, f)?);
    match (fam, name) {
        (Family::Eq2, "v") => el(&[0, 1], span),
        (Family::Eq2, "v*") => el(&[0, -1], span),
        (Family::Eq2, "n") => el(&[1, 0], span.map_points(g, |r| r)),
        (Family::Eq2, "n*") => el(&[-1, 0], span.map_points(g, |r| r)),
        (Family::Cq, "z") => el(&[1], span.map_points(g, |r| r)),
        (Family::Cq, "z*") => el(&[-1], span.map_points(g, |r| r / q)),
        (Family::Su11, "a") => el(&[0, 1], span.map_points(g, |r| (1.0 + r * r).sqrt())),
        (Family::Su11, "d") => el(&[0, -1], span.map_points(g, |r| (1.0 + q * q * r * r).sqrt())),
        (Family::Su11, "c") => el(&[1, 0], span.map_points(g, |r| r)),
        (Family::Su11, "c^-1") => el(&[-1, 0], span.map_points(g, |r| 1.0 / r)),
        (Family::Su11, "b") => el(&[-1, 0], span.map_points(g, |r| q * r)),
        (Family::Su11, "b^-1") => el(&[1, 0], span.map_points(g, |r| 1.0 / (q * r))),
        (Family::Disc, "z") => el(&[1], span),
        (Family::Disc, "z*") => el(&[-1], span),
        (Family::DiscPlus, "z") => el(&[1], span.map_points(g, |y| (1.0 + y).sqrt())),
        (Family::DiscPlus, "z*") => el(&[-1], span.map_points(g, |y| (1.0 + y / (q * q)).sqrt())),
        _ => Err(HeisenbergError::UnknownGenerator(name.to_string())),
    }
}

/// One cross-product generator as an operator on GNS elements.
enum GnsOperator {
    /// Left multiplication by an embedded coordinate generator.
    Left(FAElement),
    /// Right action by the inverse antipode of a symmetry generator.
    Acting(NCPoly, &'static Presentation),
}

fn operators(
    spec: &FunctionalSpec,
    cross: &'static CrossAlg,
) -> Result<Vec<(String, GnsOperator)>, HeisenbergError> {
    let acting = match spec.family() {
        Family::Eq2 | Family::Cq => &catalog().uq_e2,
        _ => &catalog().uq_sl2,
    };
    let hopf = acting
        .hopf
        .as_ref()
        .expect("acting algebras carry Hopf data");
    let pres = &cross.cross.pres;
    let mut out = Vec::new();
    for gi in 0..pres.gen_count() {
        let name = pres.gen_name(GenId(gi as u16));
        let op = match UGen::from_name(name) {
            Some(_) => {
                let gen = NCPoly::from_gen(acting.pres.gen_id(name));
                GnsOperator::Acting(hopf.antipode_inv(&acting.pres, &gen), &acting.pres)
            }
            None => GnsOperator::Left(embedded(spec, name)?),
        };
        out.push((name.to_string(), op));
    }
    Ok(out)
}

fn apply(
    spec: &FunctionalSpec,
    op: &GnsOperator,
    x: &FAElement,
) -> Result<FAElement, HeisenbergError> {
    match op {
        GnsOperator::Left(g) => Ok(spec.multiply(g, x)?),
        GnsOperator::Acting(p, pres) => Ok(spec.act_poly(x, p, pres)?),
    }
}

// ---------------------------------------------------------------------------
// GNS windows
// ---------------------------------------------------------------------------

/// One basis label: monomial key, grid level, atom slot, positive norm.
#[derive(Debug, Clone)]
pub struct GnsItem {
    pub key: Vec<i64>,
    pub level: i64,
    pub slot: usize,
    pub norm: f64,
}

/// A finite window of a GNS space: the non-null basis labels with their
/// norms, plus the lookup needed to expand operator images.  Labels whose
/// vector has norm zero are remembered as null and dropped from images.
pub struct GnsSpace {
    pub spec: FunctionalSpec,
    pub items: Vec<GnsItem>,
    lookup: BTreeMap<(Vec<i64>, i64, usize), Option<usize>>,
    key_bound: i64,
    level_lo: i64,
    level_hi: i64,
}

impl GnsSpace {
    pub fn new(
        spec: FunctionalSpec,
        key_bound: i64,
        level_lo: i64,
        level_hi: i64,
    ) -> Result<GnsSpace, HeisenbergError> {
        let arity = spec.family().key_arity();
        let slots = spec.grid.atoms.len();
        let mut keys: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..arity {
            keys = keys
                .into_iter()
                .flat_map(|k| {
                    (-key_bound..=key_bound).map(move |c| {
                        let mut k2 = k.clone();
                        k2.push(c);
                        k2
                    })
                })
                .collect();
        }
        let mut items = Vec::new();
        let mut lookup = BTreeMap::new();
        for key in keys {
            for level in level_lo..=level_hi {
                for slot in 0..slots {
                    let b = FAElement::monomial(
                        spec.family(),
                        &key,
                        GridFunction::indicator(level, slot),
                    )?;
                    let n2 = spec.evaluate(&spec.multiply(&spec.star(&b)?, &b)?).re;
                    let entry = if n2 > 0.0 {
                        items.push(GnsItem {
                            key: key.clone(),
                            level,
                            slot,
                            norm: n2.sqrt(),
                        });
                        Some(items.len() - 1)
                    } else if n2 == 0.0 {
                        None
                    } else {
                        return Err(HeisenbergError::NegativeNorm(n2));
                    };
                    lookup.insert((key.clone(), level, slot), entry);
                }
            }
        }
        Ok(GnsSpace {
            spec,
            items,
            lookup,
            key_bound,
            level_lo,
            level_hi,
        })
    }

    /// The unnormalized basis element of a label.
    pub fn element(&self, item: &GnsItem) -> FAElement {
        FAElement::monomial(
            self.spec.family(),
            &item.key,
            GridFunction::indicator(item.level, item.slot),
        )
        .expect("key arity is fixed by the family")
    }

    /// Labels one step away from every window edge; operator images of
    /// these stay inside the enumeration.
    fn is_inner(&self, item: &GnsItem) -> bool {
        item.key.iter().all(|&k| k.abs() < self.key_bound)
            && item.level > self.level_lo
            && item.level < self.level_hi
    }
}

/// Normalized Gram matrix of the window.  Diagonal entries divide a value
/// by itself, so an orthogonal family shows up as the exact identity.
#[allow(clippy::eq_op)]
pub fn normalized_gram(gns: &GnsSpace) -> Result<DMatrix<Complex64>, HeisenbergError> {
    let n = gns.items.len();
    let mut gram = DMatrix::zeros(n, n);
    for j in 0..n {
        let sj = gns.spec.star(&gns.element(&gns.items[j]))?;
        for i in 0..n {
            let raw = gns
                .spec
                .evaluate(&gns.spec.multiply(&sj, &gns.element(&gns.items[i]))?);
            gram[(i, j)] = if i == j {
                raw / raw
            } else {
                raw / (gns.items[i].norm * gns.items[j].norm)
            };
        }
    }
    Ok(gram)
}

/// Entrywise equality with the identity, no tolerance.
pub fn gram_is_exact_identity(gram: &DMatrix<Complex64>) -> bool {
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let want = if i == j { 1.0 } else { 0.0 };
            if gram[(i, j)] != Complex64::new(want, 0.0) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Closed-form displays
// ---------------------------------------------------------------------------

/// Expected normalized matrix elements of one generator on the basis
/// vector labeled (key, level), per the closed-form action displays.
/// Entries are (target key, target level, real coefficient); a zero
/// coefficient marks a component that must vanish (null target).
///
/// Labels: for the plane, key = (phase power j, unitary power k); for the
/// cylinder, key = (z power); for the hyperbolic family, key = (u power
/// n, v power k); for the disc families, key = (z power m).  The level
/// indexes the grid point of the atom indicator.  The disc forms are
/// uniform in u = level + max(0, m) (level + m on the polar mirror),
/// with lam(j) the square root of 1 - q^(2j), 1 + |y|q^(2j), or
/// 1 + y q^(2j) for the tail, atomic, and mirror integrals respectively.
fn closed_components(
    target: GnsTarget,
    q: f64,
    atom: f64,
    name: &str,
    key: &[i64],
    level: i64,
) -> Option<Vec<(Vec<i64>, i64, f64)>> {
    let li = 1.0 / (q - 1.0 / q);
    let qp = |e: i64| q.powi(e as i32);
    let qh = |e: i64| q.powf(e as f64 / 2.0);
    let m = level;
    let a = atom;
    match target {
        GnsTarget::Eq2 => {
            let (j, k) = (key[0], key[1]);
            Some(match name {
                "v" => vec![(vec![j, k + 1], m, 1.0)],
                "v*" => vec![(vec![j, k - 1], m, 1.0)],
                "n" => vec![(vec![j + 1, k], m, a * qp(m + k))],
                "n*" => vec![(vec![j - 1, k], m, a * qp(m + k))],
                "K" => vec![(vec![j, k], m, qh(-(j + k)))],
                "K^-1" => vec![(vec![j, k], m, qh(j + k))],
                "E" => vec![
                    (vec![j + 1, k + 1], m, -li / a * qh(j - k - 1) * qp(-m)),
                    (vec![j + 1, k + 1], m - 1, li / a * qh(-(j + k + 1)) * qp(-m)),
                ],
                "F" => vec![
                    (vec![j - 1, k - 1], m, -li / a * qh(j - k - 1) * qp(-m)),
                    (vec![j - 1, k - 1], m + 1, li / a * qh(-(j + k + 1)) * qp(-m)),
                ],
                _ => return None,
            })
        }
        GnsTarget::Cq => {
            let k = key[0];
            Some(match name {
                "z" => vec![(vec![k + 1], m, a * qp(m + k))],
                "z*" => vec![(vec![k - 1], m, a * qp(m + k - 1))],
                "K" => vec![(vec![k], m, qp(-k))],
                "K^-1" => vec![(vec![k], m, qp(k))],
                "E" => vec![
                    (vec![k + 1], m, -li / a * qh(-1) * qp(-m)),
                    (vec![k + 1], m - 1, li / a * qh(-1) * qp(-k - m)),
                ],
                "F" => vec![
                    (vec![k - 1], m, -li / a * qh(-1) * qp(-m)),
                    (vec![k - 1], m + 1, li / a * qh(-1) * qp(-k - m)),
                ],
                _ => return None,
            })
        }
        GnsTarget::Su11 => {
            let (n, k) = (key[0], key[1]);
            let al = |j: i64| (1.0 + a * a * qp(2 * j)).sqrt();
            Some(match name {
                "a" => vec![(vec![n, k + 1], m, al(m - k))],
                "d" => vec![(vec![n, k - 1], m, al(m - k + 1))],
                "c" => vec![(vec![n + 1, k], m, a * qp(m - k))],
                "c^-1" => vec![(vec![n - 1, k], m, qp(k - m) / a)],
                "b" => vec![(vec![n - 1, k], m, a * qp(m - k + 1))],
                "b^-1" => vec![(vec![n + 1, k], m, qp(k - m - 1) / a)],
                "K" => vec![(vec![n, k], m, qh(k - n))],
                "K^-1" => vec![(vec![n, k], m, qh(n - k))],
                "E" => vec![
                    (vec![n - 1, k + 1], m, -li / a * qh(n + k - 1) * qp(-m) * al(m - k)),
                    (vec![n - 1, k + 1], m + 1, li / a * qh(n + k - 1) * qp(-m - n) * al(m + 1)),
                ],
                "F" => vec![
                    (vec![n + 1, k - 1], m - 1, -li / a * qh(k - n - 1) * qp(-m) * al(m)),
                    (vec![n + 1, k - 1], m, li / a * qh(k - n - 1) * qp(-m + n) * al(m - k + 1)),
                ],
                _ => return None,
            })
        }
        GnsTarget::DiscTail | GnsTarget::DiscAtomic | GnsTarget::DiscPlusAtomic => {
            let lam = |j: i64| -> f64 {
                match target {
                    GnsTarget::DiscTail => (1.0 - qp(2 * j)).sqrt(),
                    GnsTarget::DiscAtomic => (1.0 + a.abs() * qp(2 * j)).sqrt(),
                    _ => (1.0 + a * qp(2 * j)).sqrt(),
                }
            };
            let lvl = |mm: i64, uu: i64| -> i64 {
                if target == GnsTarget::DiscPlusAtomic {
                    uu - mm
                } else {
                    uu - mm.max(0)
                }
            };
            let k0 = key[0];
            let u = m
                + if target == GnsTarget::DiscPlusAtomic {
                    k0
                } else {
                    k0.max(0)
                };
            Some(match name {
                "z" => vec![(vec![k0 + 1], lvl(k0 + 1, u + 1), lam(u))],
                "z*" => vec![(vec![k0 - 1], lvl(k0 - 1, u - 1), lam(u - 1))],
                "K" => vec![(vec![k0], m, qp(k0))],
                "K^-1" => vec![(vec![k0], m, qp(-k0))],
                "E" => vec![
                    (vec![k0 + 1], lvl(k0 + 1, u), li * qh(2 * k0 + 1) * lam(u - k0 - 1)),
                    (vec![k0 + 1], lvl(k0 + 1, u + 1), -li * qh(-2 * k0 - 1) * lam(u)),
                ],
                "F" => vec![
                    (vec![k0 - 1], lvl(k0 - 1, u), -li * qh(2 * k0 - 1) * lam(u - k0)),
                    (vec![k0 - 1], lvl(k0 - 1, u - 1), li * qh(-2 * k0 + 1) * lam(u - 1)),
                ],
                _ => return None,
            })
        }
    }
}

/// Applies every generator to every interior basis vector and compares
/// the normalized matrix elements with the closed-form displays.
pub fn closed_form_residual(
    target: GnsTarget,
    q: f64,
    atoms: &[(f64, f64)],
) -> Result<f64, HeisenbergError> {
    let spec = target.functional(q, atoms, -24, 24)?;
    let (kb, llo, lhi) = target.window();
    let gns = GnsSpace::new(spec, kb, llo, lhi)?;
    let ops = operators(&gns.spec, target.cross())?;
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for item in gns.items.iter().filter(|it| gns.is_inner(it)) {
        let a = gns.spec.grid.atoms[item.slot].0;
        let b = gns.element(item);
        for (name, op) in &ops {
            let Some(comps) = closed_components(target, q, a, name, &item.key, item.level)
            else {
                continue;
            };
            checked += 1;
            let image = apply(&gns.spec, op, &b)?;
            let mut actual: BTreeMap<(Vec<i64>, i64), Complex64> = BTreeMap::new();
            for (key, f) in &image.terms {
                for (&(lvl, at), &val) in &f.values {
                    let ri = match gns.lookup.get(&(key.clone(), lvl, at)) {
                        Some(&Some(ri)) => ri,
                        Some(&None) => continue,
                        None => {
                            return Err(HeisenbergError::BoxEscape {
                                key: key.clone(),
                                level: lvl,
                            })
                        }
                    };
                    let scale = gns.items[ri].norm / item.norm;
                    *actual
                        .entry((key.clone(), lvl))
                        .or_insert(Complex64::ZERO) += val * scale;
                }
            }
            for (tkey, tlvl, c) in comps {
                let got = actual.remove(&(tkey, tlvl)).unwrap_or(Complex64::ZERO);
                worst = worst.max((got - Complex64::from(c)).norm());
            }
            for (_, stray) in actual {
                worst = worst.max(stray.norm());
            }
        }
    }
    if checked == 0 {
        return Err(HeisenbergError::NothingChecked);
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

/// Outcome of matching one GNS window against one series window.
#[derive(Debug, Clone)]
pub struct MatchReport {
    pub series: String,
    pub q: f64,
    pub atoms: Vec<(f64, f64)>,
    /// Interior columns compared, summed over generators they were
    /// compared for.
    pub columns: usize,
    pub per_generator: Vec<(String, f64)>,
    pub residual: f64,
}

/// Builds the GNS window and the expected series member, then compares
/// every generator of the cross product column by column on the interior.
pub fn gns_series_match(
    target: GnsTarget,
    q: f64,
    atoms: &[(f64, f64)],
    series_radius: i64,
) -> Result<MatchReport, HeisenbergError> {
    let spec = target.functional(q, atoms, -24, 24)?;
    let (kb, llo, lhi) = target.window();
    let gns = GnsSpace::new(spec, kb, llo, lhi)?;
    let ps = target.series_params(q, atoms)?;
    let rep = build_series(target.series_label(), &ps, series_radius)?;
    check_intertwiner(target, &gns, &rep)
}

/// Compares the GNS operators with the series matrices through the
/// target's index bijection.  Null components are dropped; a non-null
/// component outside the enumerated window is an error.
pub fn check_intertwiner(
    target: GnsTarget,
    gns: &GnsSpace,
    rep: &SeriesRep,
) -> Result<MatchReport, HeisenbergError> {
    let beta = window_exponent(gns.spec.grid.q)?.0;
    let ops = operators(&gns.spec, target.cross())?;
    let mut per_gen: Vec<(String, f64)> = ops.iter().map(|(n, _)| (n.clone(), 0.0)).collect();
    let mut columns = 0usize;

    // Row index and sign of every mapped basis vector, computed once.
    let rows: Vec<(Option<usize>, f64)> = gns
        .items
        .iter()
        .map(|item| {
            let (p, sign) = target.series_point(beta, &item.key, item.level);
            (rep.col_of(&p, item.slot), sign)
        })
        .collect();

    for (ci, item) in gns.items.iter().enumerate() {
        let (Some(col), sign_c) = rows[ci] else {
            continue;
        };
        if !rep.interior[col] || !gns.is_inner(item) {
            continue;
        }
        columns += 1;
        let b = gns.element(item);
        for ((name, op), acc) in ops.iter().zip(per_gen.iter_mut()) {
            let image = apply(&gns.spec, op, &b)?;
            let mut expected: BTreeMap<usize, Complex64> = BTreeMap::new();
            for (key, f) in &image.terms {
                for (&(lvl, at), &val) in &f.values {
                    let ri = match gns.lookup.get(&(key.clone(), lvl, at)) {
                        Some(&Some(ri)) => ri,
                        Some(&None) => continue,
                        None => {
                            return Err(HeisenbergError::BoxEscape {
                                key: key.clone(),
                                level: lvl,
                            })
                        }
                    };
                    let (row, sign_r) = &rows[ri];
                    let row = row.ok_or_else(|| {
                        let (p, _) = target.series_point(
                            beta,
                            &gns.items[ri].key,
                            gns.items[ri].level,
                        );
                        HeisenbergError::SeriesEscape(p)
                    })?;
                    let scale = gns.items[ri].norm / item.norm * sign_r * sign_c;
                    *expected.entry(row).or_insert(Complex64::ZERO) += val * scale;
                }
            }
            let actual = rep.mat(name).column(col);
            let mut worst = 0.0f64;
            for &(row, v) in actual {
                let e = expected.remove(&row).unwrap_or(Complex64::ZERO);
                worst = worst.max((e - v).norm());
            }
            for (_, e) in expected {
                worst = worst.max(e.norm());
            }
            acc.1 = acc.1.max(worst);
        }
    }

    if columns == 0 {
        return Err(HeisenbergError::NothingChecked);
    }
    let residual = per_gen.iter().fold(0.0f64, |a, (_, r)| a.max(*r));
    Ok(MatchReport {
        series: rep.label.clone(),
        q: gns.spec.grid.q,
        atoms: gns.spec.grid.atoms.clone(),
        columns,
        per_generator: per_gen,
        residual,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: f64 = 0.5;
    const ONE_ATOM: [(f64, f64); 1] = [(0.6, 1.0)];
    const TWO_ATOMS: [(f64, f64); 2] = [(0.6, 1.0), (0.9, 0.5)];

    fn negated(atoms: &[(f64, f64)]) -> Vec<(f64, f64)> {
        atoms.iter().map(|&(a, w)| (-a, w)).collect()
    }

    fn assert_match(target: GnsTarget, atoms: &[(f64, f64)], radius: i64) {
        let report = gns_series_match(target, Q, atoms, radius).expect("match should build");
        assert!(report.columns > 0);
        for (gen, res) in &report.per_generator {
            assert!(
                *res <= 1e-9,
                "{target:?} -> {}: generator {gen} residual {res:.3e}",
                report.series
            );
        }
    }

    #[test]
    fn eq2_gns_lands_on_e2eq2_ii() {
        assert_match(GnsTarget::Eq2, &ONE_ATOM, 10);
    }

    #[test]
    fn eq2_gns_handles_two_atoms() {
        assert_match(GnsTarget::Eq2, &TWO_ATOMS, 10);
    }

    #[test]
    fn cq_gns_lands_on_e2cq_ii() {
        assert_match(GnsTarget::Cq, &TWO_ATOMS, 10);
    }

    #[test]
    fn su_gns_lands_on_su_i2() {
        assert_match(GnsTarget::Su11, &ONE_ATOM, 10);
    }

    #[test]
    fn tail_gns_lands_on_disc_i1() {
        assert_match(GnsTarget::DiscTail, &[], 12);
    }

    #[test]
    fn atomic_disc_gns_lands_on_disc_ii2() {
        assert_match(GnsTarget::DiscAtomic, &negated(&TWO_ATOMS), 10);
    }

    #[test]
    fn mirrored_disc_gns_lands_on_the_same_series_member() {
        // Positive-spectrum mirror: same series label, same parameters.
        assert_match(GnsTarget::DiscPlusAtomic, &TWO_ATOMS, 10);
        let a = GnsTarget::DiscAtomic
            .series_params(Q, &negated(&TWO_ATOMS))
            .unwrap();
        let b = GnsTarget::DiscPlusAtomic.series_params(Q, &TWO_ATOMS).unwrap();
        assert_eq!(a.a1, b.a1);
        assert_eq!(a.a2, b.a2);
        assert_eq!(a.h1, b.h1);
    }

    #[test]
    fn tail_gram_is_exactly_the_identity() {
        let spec = GnsTarget::DiscTail.functional(Q, &[], -24, 24).unwrap();
        let gns = GnsSpace::new(spec, 3, 0, 5).unwrap();
        assert!(gns.items.len() > 20);
        let gram = normalized_gram(&gns).unwrap();
        assert!(gram_is_exact_identity(&gram));
    }

    #[test]
    fn mirrored_disc_integrals_agree_on_functions() {
        // The mirror swaps the sign of the grid coordinate; weights and
        // one-step norms coincide.
        let seed = 0x6d69_7272u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plus = FunctionalSpec::atomic(Family::DiscPlus, Q, &TWO_ATOMS, -24, 24).unwrap();
        let minus =
            FunctionalSpec::atomic(Family::Disc, Q, &negated(&TWO_ATOMS), -24, 24).unwrap();
        for round in 0..50 {
            let mut f = GridFunction::zero();
            for _ in 0..4 {
                let k = rng.gen_range(-5..=5);
                let i = rng.gen_range(0..2);
                f.add_at(
                    k,
                    i,
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
            let xp = FAElement::monomial(Family::DiscPlus, &[0], f.clone()).unwrap();
            let xm = FAElement::monomial(Family::Disc, &[0], f).unwrap();
            let d = (plus.evaluate(&xp) - minus.evaluate(&xm)).norm();
            assert!(d <= 1e-12, "seed {seed} round {round}: drift {d:.3e}");

            // One-generator words: |z f|^2 agrees across the mirror.
            let zp = embedded(&plus, "z").unwrap();
            let zm = embedded(&minus, "z").unwrap();
            let yp = plus.multiply(&zp, &xp).unwrap();
            let ym = minus.multiply(&zm, &xm).unwrap();
            let np = plus
                .evaluate(&plus.multiply(&plus.star(&yp).unwrap(), &yp).unwrap())
                .re;
            let nm = minus
                .evaluate(&minus.multiply(&minus.star(&ym).unwrap(), &ym).unwrap())
                .re;
            assert!(
                (np - nm).abs() <= 1e-12 * (1.0 + np.abs()),
                "seed {seed} round {round}: norms {np} vs {nm}"
            );
        }
    }

    #[test]
    fn embeddings_satisfy_the_coordinate_relations() {
        type Case<'a> = (GnsTarget, &'a Presentation, &'a [(f64, f64)]);
        let cat = catalog();
        let cases: [Case; 5] = [
            (GnsTarget::Eq2, &cat.o_eq2.pres, &ONE_ATOM),
            (GnsTarget::Cq, &cat.o_cq.pres, &ONE_ATOM),
            (GnsTarget::Su11, &cat.o_slq2_loc.pres, &ONE_ATOM),
            (GnsTarget::DiscAtomic, &cat.o_uq.pres, &[(-0.6, 1.0)]),
            (GnsTarget::DiscPlusAtomic, &cat.o_uq.pres, &ONE_ATOM),
        ];
        for (target, pres, atoms) in cases {
            let spec = target.functional(Q, atoms, -24, 24).unwrap();
            let embed_poly = |p: &NCPoly| -> FAElement {
                let mut out = FAElement::zero(spec.family());
                for (word, coeff) in &p.terms {
                    let mut acc = FAElement::monomial(
                        spec.family(),
                        &vec![0; spec.family().key_arity()],
                        wide_span(&spec),
                    )
                    .unwrap();
                    for &g in &word.0 {
                        let e = embedded(&spec, pres.gen_name(g)).unwrap();
                        acc = spec.multiply(&acc, &e).unwrap();
                    }
                    let c = coeff.evaluate(Q).unwrap();
                    out = out.add(&acc.scaled(c.into())).unwrap();
                }
                out
            };
            for ((g1, g2), rhs) in pres.rules() {
                let lhs = spec
                    .multiply(
                        &embedded(&spec, pres.gen_name(g1)).unwrap(),
                        &embedded(&spec, pres.gen_name(g2)).unwrap(),
                    )
                    .unwrap();
                let diff = lhs.sub(&embed_poly(rhs)).unwrap();
                // Compare away from the span edges, where one side may
                // simply run out of support, and relative to the local
                // magnitude, which grows like the grid coordinate.
                let mut worst = 0.0f64;
                for (key, f) in &diff.terms {
                    for (&(k, i), v) in &f.values {
                        if !(-8..=8).contains(&k) {
                            continue;
                        }
                        let scale = 1.0
                            + lhs
                                .terms
                                .get(key)
                                .and_then(|g| g.values.get(&(k, i)))
                                .map_or(0.0, |c| c.norm());
                        worst = worst.max(v.norm() / scale);
                    }
                }
                assert!(
                    worst <= 1e-12,
                    "{target:?}: rule {} {} deviates by {worst:.3e}",
                    pres.gen_name(g1),
                    pres.gen_name(g2)
                );
            }
        }
    }

    #[test]
    fn closed_form_displays_match_the_machinery() {
        let cases: [(GnsTarget, &[(f64, f64)]); 5] = [
            (GnsTarget::Eq2, &ONE_ATOM),
            (GnsTarget::Cq, &ONE_ATOM),
            (GnsTarget::Su11, &ONE_ATOM),
            (GnsTarget::DiscTail, &[]),
            (GnsTarget::DiscPlusAtomic, &ONE_ATOM),
        ];
        for (target, atoms) in cases {
            let res = closed_form_residual(target, Q, atoms).unwrap();
            assert!(res <= 1e-12, "{target:?}: closed-form residual {res:.3e}");
        }
    }

    #[test]
    fn atomic_disc_closed_forms_hold_on_both_mirrors() {
        let res = closed_form_residual(GnsTarget::DiscAtomic, Q, &[(-0.6, 1.0)]).unwrap();
        assert!(res <= 1e-12, "atomic disc closed-form residual {res:.3e}");
    }

    #[test]
    fn index_maps_are_injective_isometries() {
        // Orthonormal labels map to distinct lattice points, so the
        // relabeling preserves all inner products exactly.
        let beta = window_exponent(Q).unwrap().0;
        for target in GnsTarget::ALL {
            let atoms: &[(f64, f64)] = match target {
                GnsTarget::DiscTail => &[],
                GnsTarget::DiscAtomic => &[(-0.6, 1.0), (-0.9, 0.5)],
                _ => &TWO_ATOMS,
            };
            let spec = target.functional(Q, atoms, -24, 24).unwrap();
            let (kb, llo, lhi) = target.window();
            let gns = GnsSpace::new(spec, kb, llo, lhi).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for item in &gns.items {
                let (p, _) = target.series_point(beta, &item.key, item.level);
                assert!(
                    seen.insert((p.clone(), item.slot)),
                    "{target:?}: point {p:?} hit twice"
                );
            }
        }
    }

    #[test]
    fn plane_gns_window_has_no_null_vectors() {
        let spec = GnsTarget::Eq2.functional(Q, &TWO_ATOMS, -24, 24).unwrap();
        let gns = GnsSpace::new(spec, 2, -2, 2).unwrap();
        assert_eq!(gns.items.len(), 25 * 5 * 2);
    }

    #[test]
    fn series_parameters_pin_the_window_anchors() {
        let (beta, b) = window_exponent(Q).unwrap();
        assert_eq!(beta, -1);
        assert!((b - 2.0 / 3.0).abs() < 1e-12);
        let cq = GnsTarget::Cq.series_params(Q, &ONE_ATOM).unwrap();
        assert!((cq.h[0] - 1.0).abs() < 1e-12);
        let su = GnsTarget::Su11.series_params(Q, &TWO_ATOMS).unwrap();
        assert!((su.b[0] - Q / 0.6).abs() < 1e-12);
        assert!((su.b[1] - Q / 0.9).abs() < 1e-12);
    }
}
