//! Finite-window matrix models of the representation series.
//!
//! Each series acts on a sequence space indexed by a lattice (axes are
//! either all of Z or the half line N) tensored with a multiplicity space
//! on which the diagonal parameters live.  Truncating to a finite window
//! keeps every defining relation exact on interior columns: the window
//! margin is twice the largest index shift of any generator, so a
//! relation word of length two never reaches a truncated row when applied
//! to an interior basis vector.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::catalog::catalog;
use crate::ncalg::{GenId, NCPoly, Presentation, RewriteRule, ScalarConj, StarStructure, Word};
use crate::scalars::{alpha_k, beta_k, gamma_num, lambda_n, lambda_num, ScalarError};

#[derive(Debug, Error)]
pub enum RepError {
    #[error("unknown series label `{0}`")]
    UnknownSeries(String),
    #[error("deformation parameter q={0} must lie strictly between 0 and 1")]
    BadQ(f64),
    #[error("parameter {param} entry {value} lies outside {window}")]
    ParamOutOfRange {
        param: &'static str,
        value: f64,
        window: &'static str,
    },
    #[error("parameter {param} entry with modulus {modulus} is not unitary")]
    NotUnitModulus { param: &'static str, modulus: f64 },
    #[error("epsilon must be +1 or -1, got {0}")]
    BadEpsilon(f64),
    #[error("parameters must share one slot count; {param} has {got}, expected {expected}")]
    SlotMismatch {
        param: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("window radius {radius} below the interior margin {margin}")]
    WindowTooSmall { radius: i64, margin: i64 },
    #[error("no window exponent for q={0}")]
    BetaNotFound(f64),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

// ---------------------------------------------------------------------------
// Windows over index lattices
// ---------------------------------------------------------------------------

/// One lattice direction: the full integers or the half line 0, 1, 2, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Z,
    N,
}

/// A finite box in the index lattice together with per-axis interior
/// margins.  The lower end of an N axis is a genuine boundary of the
/// model, not a truncation artifact, so it never costs margin.
#[derive(Debug, Clone)]
pub struct Window {
    pub axes: Vec<Axis>,
    pub radius: i64,
    pub margins: Vec<i64>,
}

impl Window {
    pub fn new(axes: Vec<Axis>, radius: i64) -> Window {
        let margins = vec![0; axes.len()];
        Window {
            axes,
            radius,
            margins,
        }
    }

    fn lo(&self, i: usize) -> i64 {
        match self.axes[i] {
            Axis::Z => -self.radius,
            Axis::N => 0,
        }
    }

    fn hi(&self) -> i64 {
        self.radius
    }

    fn axis_len(&self, i: usize) -> usize {
        (self.hi() - self.lo(i) + 1) as usize
    }

    pub fn len(&self) -> usize {
        (0..self.axes.len()).map(|i| self.axis_len(i)).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lattice point of a flat index; the last axis varies fastest.
    pub fn point(&self, mut idx: usize) -> Vec<i64> {
        let d = self.axes.len();
        let mut p = vec![0i64; d];
        for i in (0..d).rev() {
            let len = self.axis_len(i);
            p[i] = self.lo(i) + (idx % len) as i64;
            idx /= len;
        }
        p
    }

    pub fn flatten(&self, p: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for (i, &pi) in p.iter().enumerate().take(self.axes.len()) {
            if pi < self.lo(i) || pi > self.hi() {
                return None;
            }
            idx = idx * self.axis_len(i) + (pi - self.lo(i)) as usize;
        }
        Some(idx)
    }

    pub fn is_interior(&self, p: &[i64]) -> bool {
        for (i, &pi) in p.iter().enumerate().take(self.axes.len()) {
            if pi > self.hi() - self.margins[i] {
                return false;
            }
            if self.axes[i] == Axis::Z && pi < self.lo(i) + self.margins[i] {
                return false;
            }
        }
        true
    }

    fn ensure_interior(&self) -> Result<(), RepError> {
        let worst = self.margins.iter().copied().max().unwrap_or(0);
        if self.radius < worst {
            return Err(RepError::WindowTooSmall {
                radius: self.radius,
                margin: worst,
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Sparse matrices
// ---------------------------------------------------------------------------

/// Column-major sparse complex matrix; columns hold (row, value) pairs
/// sorted by row.
#[derive(Debug, Clone)]
pub struct SpMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Vec<(usize, Complex64)>>,
}

impl SpMat {
    pub fn zeros(rows: usize, cols: usize) -> SpMat {
        SpMat {
            rows,
            cols,
            data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> SpMat {
        let mut m = SpMat::zeros(n, n);
        for j in 0..n {
            m.data[j].push((j, Complex64::new(1.0, 0.0)));
        }
        m
    }

    pub fn insert_add(&mut self, row: usize, col: usize, value: Complex64) {
        debug_assert!(row < self.rows && col < self.cols);
        let column = &mut self.data[col];
        match column.binary_search_by_key(&row, |e| e.0) {
            Ok(i) => column[i].1 += value,
            Err(i) => column.insert(i, (row, value)),
        }
    }

    pub fn column(&self, j: usize) -> &[(usize, Complex64)] {
        &self.data[j]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    /// self * rhs in the usual operator order.
    pub fn matmul(&self, rhs: &SpMat) -> SpMat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = SpMat::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let mut acc: BTreeMap<usize, Complex64> = BTreeMap::new();
            for &(k, v) in &rhs.data[j] {
                for &(r, w) in &self.data[k] {
                    *acc.entry(r).or_insert_with(|| Complex64::new(0.0, 0.0)) += w * v;
                }
            }
            out.data[j] = acc.into_iter().collect();
        }
        out
    }

    pub fn add_scaled(&self, other: &SpMat, s: Complex64) -> SpMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = SpMat::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            let mut acc: BTreeMap<usize, Complex64> = BTreeMap::new();
            for &(r, v) in &self.data[j] {
                *acc.entry(r).or_insert_with(|| Complex64::new(0.0, 0.0)) += v;
            }
            for &(r, v) in &other.data[j] {
                *acc.entry(r).or_insert_with(|| Complex64::new(0.0, 0.0)) += v * s;
            }
            out.data[j] = acc.into_iter().collect();
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> SpMat {
        let mut out = self.clone();
        for col in &mut out.data {
            for e in col {
                e.1 *= s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> SpMat {
        let mut out = SpMat::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for &(r, v) in &self.data[j] {
                out.data[r].push((j, v.conj()));
            }
        }
        for col in &mut out.data {
            col.sort_by_key(|e| e.0);
        }
        out
    }

    pub fn col_norm(&self, j: usize) -> f64 {
        self.data[j]
            .iter()
            .map(|(_, v)| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_col_norm(&self, keep: impl Fn(usize) -> bool) -> f64 {
        (0..self.cols)
            .filter(|j| keep(*j))
            .map(|j| self.col_norm(j))
            .fold(0.0, f64::max)
    }

    /// Largest column norm of `self - other`, each column measured
    /// against the larger of the two columns' norms (floored at one).
    /// Columns of unbounded operators grow like q^(-radius), so a raw
    /// difference norm would reflect truncation scale, not defects.
    pub fn max_relative_col_defect(&self, other: &SpMat, keep: impl Fn(usize) -> bool) -> f64 {
        (0..self.cols)
            .filter(|j| keep(*j))
            .map(|j| {
                let mut col: BTreeMap<usize, Complex64> =
                    self.data[j].iter().copied().collect();
                for &(r, v) in other.column(j) {
                    *col.entry(r).or_insert_with(|| re(0.0)) -= v;
                }
                let diff = col.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                diff / (1.0 + self.col_norm(j).max(other.col_norm(j)))
            })
            .fold(0.0, f64::max)
    }

    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(r, v)| (r, j, v)))
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let mut m = nalgebra::DMatrix::from_element(self.rows, self.cols, Complex64::new(0.0, 0.0));
        for (r, c, v) in self.triples() {
            m[(r, c)] += v;
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Diagonal parameters of a series.  All diagonals used by one series must
/// share the slot count; the representation space is window x slots.
#[derive(Debug, Clone)]
pub struct ParamSet {
    pub q: f64,
    pub eps: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub h: Vec<f64>,
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub v: Vec<Complex64>,
    pub w: Vec<Complex64>,
}

impl ParamSet {
    pub fn baseline(q: f64) -> ParamSet {
        ParamSet {
            q,
            eps: 1.0,
            a: vec![0.7],
            b: vec![0.6],
            h: vec![0.8],
            a1: vec![0.7],
            a2: vec![0.7],
            h1: vec![1.0],
            h2: vec![0.8],
            v: vec![Complex64::new(1.0, 0.0)],
            w: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn with_eps(mut self, eps: f64) -> ParamSet {
        self.eps = eps;
        self
    }
}

struct RangeSpec {
    desc: &'static str,
    ok: fn(f64, f64) -> bool,
}

const OPEN_Q1: RangeSpec = RangeSpec {
    desc: "(q, 1]",
    ok: |q, x| x > q && x <= 1.0,
};
const CLOSED_Q1: RangeSpec = RangeSpec {
    desc: "[q, 1]",
    ok: |q, x| x >= q && x <= 1.0,
};
const HALF_Q1: RangeSpec = RangeSpec {
    desc: "[q, 1)",
    ok: |q, x| x >= q && x < 1.0,
};
const OPEN_Q2: RangeSpec = RangeSpec {
    desc: "(q^2, 1]",
    ok: |q, x| x > q * q && x <= 1.0,
};
const OPEN_SQRT: RangeSpec = RangeSpec {
    desc: "(q^(1/2), 1]",
    ok: |q, x| x > q.sqrt() && x <= 1.0,
};
const POSITIVE: RangeSpec = RangeSpec {
    desc: "(0, inf)",
    ok: |_, x| x > 0.0,
};

fn check_diag(
    q: f64,
    param: &'static str,
    vals: &[f64],
    spec: &RangeSpec,
    slots: &mut Option<usize>,
) -> Result<(), RepError> {
    match slots {
        Some(n) if *n != vals.len() => {
            return Err(RepError::SlotMismatch {
                param,
                got: vals.len(),
                expected: *n,
            })
        }
        None => *slots = Some(vals.len()),
        _ => {}
    }
    for &x in vals {
        if !(spec.ok)(q, x) {
            return Err(RepError::ParamOutOfRange {
                param,
                value: x,
                window: spec.desc,
            });
        }
    }
    Ok(())
}

fn check_unitary(
    param: &'static str,
    vals: &[Complex64],
    slots: &mut Option<usize>,
) -> Result<(), RepError> {
    match slots {
        Some(n) if *n != vals.len() => {
            return Err(RepError::SlotMismatch {
                param,
                got: vals.len(),
                expected: *n,
            })
        }
        None => *slots = Some(vals.len()),
        _ => {}
    }
    for x in vals {
        if (x.norm() - 1.0).abs() > 1e-12 {
            return Err(RepError::NotUnitModulus {
                param,
                modulus: x.norm(),
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Series specification
// ---------------------------------------------------------------------------

type Coeff = Box<dyn Fn(&[i64], usize) -> Complex64>;

/// One shift term of a generator: g eta_p = sum of coeff(p, slot) eta_{p+delta}.
struct Term {
    delta: Vec<i64>,
    coeff: Coeff,
}

fn term(delta: Vec<i64>, coeff: impl Fn(&[i64], usize) -> Complex64 + 'static) -> Term {
    Term {
        delta,
        coeff: Box::new(coeff),
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

type Spec = BTreeMap<&'static str, Vec<Term>>;

/// A realized series: matrices for every generator of its algebra.
pub struct SeriesRep {
    pub label: String,
    pub q: f64,
    pub algebra: &'static Presentation,
    pub star: StarStructure,
    pub window: Window,
    pub slots: usize,
    pub dim: usize,
    pub mats: Vec<SpMat>,
    pub interior: Vec<bool>,
}

impl SeriesRep {
    pub fn mat(&self, name: &str) -> &SpMat {
        &self.mats[self.algebra.gen_id(name).0 as usize]
    }

    /// Flat column index of a lattice point and slot.
    pub fn col_of(&self, p: &[i64], slot: usize) -> Option<usize> {
        self.window.flatten(p).map(|i| i * self.slots + slot)
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    label: &str,
    pres: &'static Presentation,
    star: StarStructure,
    q: f64,
    axes: Vec<Axis>,
    radius: i64,
    slots: usize,
    spec: Spec,
) -> Result<SeriesRep, RepError> {
    let mut window = Window::new(axes, radius);
    for terms in spec.values() {
        for t in terms {
            for (i, d) in t.delta.iter().enumerate() {
                window.margins[i] = window.margins[i].max(2 * d.abs());
            }
        }
    }
    window.ensure_interior()?;
    let points = window.len();
    let dim = points * slots;

    let mut mats = Vec::with_capacity(pres.gen_count());
    for gi in 0..pres.gen_count() {
        let name = pres.gen_name(GenId(gi as u16));
        let terms = spec
            .get(name)
            .unwrap_or_else(|| panic!("series {label} lacks a formula for generator {name}"));
        let mut m = SpMat::zeros(dim, dim);
        for idx in 0..points {
            let p = window.point(idx);
            for t in terms {
                let target: Vec<i64> = p.iter().zip(&t.delta).map(|(x, d)| x + d).collect();
                let row_base = window.flatten(&target);
                for s in 0..slots {
                    let c = (t.coeff)(&p, s);
                    if c.norm_sqr() == 0.0 {
                        continue;
                    }
                    match row_base {
                        Some(r) => m.insert_add(r * slots + s, idx * slots + s, c),
                        None => {
                            // A drop below the genuine lower boundary of an
                            // N axis would mean the formulas are wrong.
                            debug_assert!(
                                target
                                    .iter()
                                    .enumerate()
                                    .all(|(i, &x)| window.axes[i] == Axis::Z || x >= 0),
                                "nonzero coefficient past a genuine boundary"
                            );
                        }
                    }
                }
            }
        }
        mats.push(m);
    }

    let mut interior = Vec::with_capacity(dim);
    for idx in 0..points {
        let inside = window.is_interior(&window.point(idx));
        for _ in 0..slots {
            interior.push(inside);
        }
    }

    Ok(SeriesRep {
        label: label.to_string(),
        q,
        algebra: pres,
        star,
        window,
        slots,
        dim,
        mats,
        interior,
    })
}

// ---------------------------------------------------------------------------
// The series catalogue
// ---------------------------------------------------------------------------

pub const SERIES_LABELS: [&str; 23] = [
    "plane-I",
    "plane-II",
    "e2cq-I",
    "e2cq-II",
    "e2eq2-I",
    "e2eq2-II",
    "su-I1",
    "su-I2",
    "su-I3",
    "disc-I1",
    "disc-I2",
    "disc-I3",
    "disc-II1",
    "disc-II2",
    "disc-II3",
    "disc-III1",
    "disc-III2",
    "disc-III3",
    "sl-base",
    "uq-I",
    "uq-II",
    "uq-III",
    "uq-IV",
];

/// The z z* pair with the opposite inhomogeneous sign; realized only by
/// the lowering kind of one-algebra representation.
fn minus_disc() -> &'static (Presentation, StarStructure) {
    static CELL: OnceLock<(Presentation, StarStructure)> = OnceLock::new();
    CELL.get_or_init(|| {
        let (z, zs) = (GenId(0), GenId(1));
        let coeff = crate::scalars::QScalar::q_pow(2);
        let unit = crate::scalars::QScalar::one() - coeff.clone();
        let rules = vec![RewriteRule {
            lhs: (zs, z),
            rhs: NCPoly::monomial(Word(vec![z, zs]), coeff) - NCPoly::scalar(unit),
        }];
        let pres = Presentation::new(
            "O(U_q) sign-flipped",
            vec!["z".to_string(), "z*".to_string()],
            rules,
        );
        let star = StarStructure {
            conj: ScalarConj::Identity,
            images: vec![NCPoly::from_gen(zs), NCPoly::from_gen(z)],
        };
        (pres, star)
    })
}

fn eps_checked(ps: &ParamSet) -> Result<f64, RepError> {
    if ps.eps == 1.0 || ps.eps == -1.0 {
        Ok(ps.eps)
    } else {
        Err(RepError::BadEpsilon(ps.eps))
    }
}

/// Builds the series with the given label over a window of the given
/// radius, after validating every parameter it uses.
pub fn build_series(label: &str, ps: &ParamSet, radius: i64) -> Result<SeriesRep, RepError> {
    let q = ps.q;
    if !(q > 0.0 && q < 1.0) {
        return Err(RepError::BadQ(q));
    }
    let cat = catalog();
    let gam = gamma_num(q);
    let li = 1.0 / lambda_num(q);
    let mut slots_probe: Option<usize> = None;
    let sp = &mut slots_probe;

    // Shorthands used inside the coefficient closures.
    macro_rules! qe {
        ($e:expr) => {
            q.powf($e as f64)
        };
    }

    let rep = match label {
        "plane-I" | "plane-II" => {
            check_diag(q, "A", &ps.a, &OPEN_Q1, sp)?;
            let two = label == "plane-II";
            if two {
                check_diag(q, "B", &ps.b, &OPEN_Q1, sp)?;
            }
            let slots = slots_probe.unwrap();
            let (a, b) = (ps.a.clone(), ps.b.clone());
            let mut spec: Spec = BTreeMap::new();
            let d = if two { 2 } else { 1 };
            let sh = |i: usize, v: i64| {
                let mut dvec = vec![0i64; d];
                dvec[i] = v;
                dvec
            };
            let (ac, a2c, a3c, a4c) = (a.clone(), a.clone(), a.clone(), a.clone());
            spec.insert(
                "z",
                vec![term(sh(0, -1), move |p, s| re(qe!(-p[0]) * ac[s]))],
            );
            spec.insert(
                "z*",
                vec![term(sh(0, 1), move |p, s| re(qe!(-(p[0] + 1)) * a2c[s]))],
            );
            let mut x_terms = vec![term(sh(0, 1), move |p, s| {
                re(gam * qe!(p[0] + 1) / a3c[s])
            })];
            let mut xs_terms = vec![term(sh(0, -1), move |p, s| re(gam * qe!(p[0]) / a4c[s]))];
            if two {
                let (a5, b5) = (a.clone(), b.clone());
                let (a6, b6) = (a, b);
                x_terms.push(term(sh(1, -1), move |p, s| {
                    re(qe!(2 * p[0] - p[1]) * b5[s] / a5[s])
                }));
                xs_terms.push(term(sh(1, 1), move |p, s| {
                    re(qe!(2 * p[0] - p[1] - 1) * b6[s] / a6[s])
                }));
            }
            spec.insert("X", x_terms);
            spec.insert("X*", xs_terms);
            assemble(
                label,
                &cat.u0_cq.pres,
                cat.u0_cq.stars["u0"].clone(),
                q,
                vec![Axis::Z; d],
                radius,
                slots,
                spec,
            )?
        }

        "e2cq-I" | "e2cq-II" => {
            check_diag(q, "A", &ps.a, &OPEN_Q1, sp)?;
            check_diag(q, "H", &ps.h, &POSITIVE, sp)?;
            let two = label == "e2cq-II";
            if two {
                check_diag(q, "B", &ps.b, &OPEN_Q1, sp)?;
            }
            let slots = slots_probe.unwrap();
            let (a, b, h) = (ps.a.clone(), ps.b.clone(), ps.h.clone());
            let d = if two { 2 } else { 1 };
            let sh = |i: usize, v: i64| {
                let mut dvec = vec![0i64; d];
                dvec[i] = v;
                dvec
            };
            let mut spec: Spec = BTreeMap::new();
            let (a1c, a2c) = (a.clone(), a.clone());
            spec.insert(
                "z",
                vec![term(sh(0, -1), move |p, s| re(qe!(-p[0]) * a1c[s]))],
            );
            spec.insert(
                "z*",
                vec![term(sh(0, 1), move |p, s| re(qe!(-(p[0] + 1)) * a2c[s]))],
            );
            let kex = move |p: &[i64]| if two { p[0] - p[1] } else { p[0] };
            let (hk, hki) = (h.clone(), h.clone());
            spec.insert(
                "K",
                vec![term(vec![0; d], move |p, s| re(qe!(kex(p)) * hk[s]))],
            );
            spec.insert(
                "K^-1",
                vec![term(vec![0; d], move |p, s| re(qe!(-kex(p)) / hki[s]))],
            );
            let (mut f_terms, mut e_terms) = (Vec::new(), Vec::new());
            if two {
                let (af, bf, hf) = (a.clone(), b.clone(), h.clone());
                let (ae, be, he) = (a.clone(), b.clone(), h.clone());
                f_terms.push(term(sh(1, -1), move |p, s| {
                    re(qe!(p[0] as f64 - 0.5) * bf[s] / (af[s] * hf[s]))
                }));
                e_terms.push(term(sh(1, 1), move |p, s| {
                    re(qe!(p[0] as f64 - 0.5) * be[s] / (ae[s] * he[s]))
                }));
                let (af2, hf2) = (a.clone(), h.clone());
                let (ae2, he2) = (a.clone(), h.clone());
                f_terms.push(term(sh(0, 1), move |p, s| {
                    re(qe!(p[1] as f64 + 0.5) * gam / (af2[s] * hf2[s]))
                }));
                e_terms.push(term(sh(0, -1), move |p, s| {
                    re(qe!(p[1] as f64 + 0.5) * gam / (ae2[s] * he2[s]))
                }));
            } else {
                let (af, hf) = (a.clone(), h.clone());
                let (ae, he) = (a.clone(), h.clone());
                f_terms.push(term(sh(0, 1), move |_, s| {
                    re(qe!(0.5) * gam / (af[s] * hf[s]))
                }));
                e_terms.push(term(sh(0, -1), move |_, s| {
                    re(qe!(0.5) * gam / (ae[s] * he[s]))
                }));
            }
            spec.insert("F", f_terms);
            spec.insert("E", e_terms);
            assemble(
                label,
                &cat.e2_cq_r.cross.pres,
                cat.cross_star(&cat.e2_cq_r, "e2"),
                q,
                vec![Axis::Z; d],
                radius,
                slots,
                spec,
            )?
        }

        "e2eq2-I" | "e2eq2-II" => {
            check_diag(q, "A", &ps.a, &OPEN_Q1, sp)?;
            check_diag(q, "H", &ps.h, &OPEN_SQRT, sp)?;
            let eps = eps_checked(ps)?;
            let two = label == "e2eq2-II";
            if two {
                check_diag(q, "B", &ps.b, &OPEN_Q1, sp)?;
            }
            let slots = slots_probe.unwrap();
            let (a, b, h) = (ps.a.clone(), ps.b.clone(), ps.h.clone());
            let d = if two { 3 } else { 2 };
            let mut spec: Spec = BTreeMap::new();
            // Index order: (m, k) for the first kind, (m, k, l) for the second.
            let (v_d, vs_d, n_d, ns_d): (Vec<i64>, Vec<i64>, Vec<i64>, Vec<i64>) = if two {
                (
                    vec![-1, -1, 1],
                    vec![1, 1, -1],
                    vec![0, 1, -1],
                    vec![0, -1, 1],
                )
            } else {
                (vec![-1, -1], vec![1, 1], vec![0, 1], vec![0, -1])
            };
            spec.insert("v", vec![term(v_d, |_, _| re(1.0))]);
            spec.insert("v*", vec![term(vs_d, |_, _| re(1.0))]);
            let (an, ans) = (a.clone(), a.clone());
            spec.insert(
                "n",
                vec![term(n_d, move |p, s| re(qe!(-p[0]) * an[s]))],
            );
            spec.insert(
                "n*",
                vec![term(ns_d, move |p, s| re(qe!(-p[0]) * ans[s]))],
            );
            let kex = move |p: &[i64]| {
                if two {
                    p[0] as f64 - p[1] as f64 - p[2] as f64 / 2.0
                } else {
                    p[0] as f64 - p[1] as f64 / 2.0
                }
            };
            let (hk, hki) = (h.clone(), h.clone());
            spec.insert(
                "K",
                vec![term(vec![0; d], move |p, s| re(qe!(kex(p)) * eps * hk[s]))],
            );
            spec.insert(
                "K^-1",
                vec![term(vec![0; d], move |p, s| re(qe!(-kex(p)) * eps / hki[s]))],
            );
            let (mut f_terms, mut e_terms) = (Vec::new(), Vec::new());
            if two {
                let (af, bf, hf) = (a.clone(), b.clone(), h.clone());
                let (ae, be, he) = (a.clone(), b.clone(), h.clone());
                f_terms.push(term(vec![0, -1, 0], move |p, s| {
                    re(qe!(p[0] as f64 + (p[2] as f64 - 1.0) / 2.0) * eps * bf[s] / (af[s] * hf[s]))
                }));
                e_terms.push(term(vec![0, 1, 0], move |p, s| {
                    re(qe!(p[0] as f64 + (p[2] as f64 - 1.0) / 2.0) * eps * be[s] / (ae[s] * he[s]))
                }));
                let (af2, hf2) = (a.clone(), h.clone());
                let (ae2, he2) = (a.clone(), h.clone());
                f_terms.push(term(vec![1, 0, 0], move |p, s| {
                    re(gam * qe!(p[1] as f64 + (p[2] as f64 + 1.0) / 2.0) * eps / (af2[s] * hf2[s]))
                }));
                e_terms.push(term(vec![-1, 0, 0], move |p, s| {
                    re(gam * qe!(p[1] as f64 + (p[2] as f64 + 1.0) / 2.0) * eps / (ae2[s] * he2[s]))
                }));
            } else {
                let (af, hf) = (a.clone(), h.clone());
                let (ae, he) = (a.clone(), h.clone());
                f_terms.push(term(vec![1, 0], move |p, s| {
                    re(gam * qe!((p[1] as f64 + 1.0) / 2.0) * eps / (af[s] * hf[s]))
                }));
                e_terms.push(term(vec![-1, 0], move |p, s| {
                    re(gam * qe!((p[1] as f64 + 1.0) / 2.0) * eps / (ae[s] * he[s]))
                }));
            }
            spec.insert("F", f_terms);
            spec.insert("E", e_terms);
            assemble(
                label,
                &cat.e2_eq2_r.cross.pres,
                cat.cross_star(&cat.e2_eq2_r, "e2"),
                q,
                vec![Axis::Z; d],
                radius,
                slots,
                spec,
            )?
        }

        "su-I1" | "su-I2" | "su-I3" => {
            check_diag(q, "A", &ps.a, &OPEN_Q1, sp)?;
            check_diag(q, "H", &ps.h, &OPEN_SQRT, sp)?;
            let eps = eps_checked(ps)?;
            let kind2 = label == "su-I2";
            let kind3 = label == "su-I3";
            if kind2 {
                check_diag(q, "B", &ps.b, &HALF_Q1, sp)?;
            }
            if kind3 {
                check_unitary("v", &ps.v, sp)?;
            }
            let slots = slots_probe.unwrap();
            let (a, b, h, v) = (ps.a.clone(), ps.b.clone(), ps.h.clone(), ps.v.clone());
            let mut spec: Spec = BTreeMap::new();
            if kind3 {
                // Index order (n, k) on Z^2.
                let (a1c, a2c, a3c, a4c, a5c, a6c) =
                    (a.clone(), a.clone(), a.clone(), a.clone(), a.clone(), a.clone());
                spec.insert(
                    "a",
                    vec![term(vec![-1, 0], move |p, s| re(alpha_k(q, p[0], a1c[s])))],
                );
                spec.insert(
                    "d",
                    vec![term(vec![1, 0], move |p, s| re(alpha_k(q, p[0] + 1, a2c[s])))],
                );
                spec.insert(
                    "b",
                    vec![term(vec![0, 1], move |p, s| re(qe!(p[0] + 1) * a3c[s]))],
                );
                spec.insert(
                    "b^-1",
                    vec![term(vec![0, -1], move |p, s| re(qe!(-(p[0] + 1)) / a4c[s]))],
                );
                spec.insert(
                    "c",
                    vec![term(vec![0, -1], move |p, s| re(qe!(p[0]) * a5c[s]))],
                );
                spec.insert(
                    "c^-1",
                    vec![term(vec![0, 1], move |p, s| re(qe!(-p[0]) / a6c[s]))],
                );
                let (hf, vf) = (h.clone(), v.clone());
                let (af2, hf2) = (a.clone(), h.clone());
                spec.insert(
                    "F",
                    vec![
                        term(vec![0, -2], move |p, s| {
                            vf[s] * re(li * qe!((-p[0] + p[1]) as f64 / 2.0 - 0.5) * eps * hf[s])
                        }),
                        term(vec![1, -1], move |p, s| {
                            re(li * qe!((p[0] - p[1]) as f64 / 2.0 + 0.5)
                                * eps
                                * beta_k(q, p[0] + 1, af2[s])
                                / hf2[s])
                        }),
                    ],
                );
                let (he, ve) = (h.clone(), v.clone());
                let (ae2, he2) = (a.clone(), h.clone());
                spec.insert(
                    "E",
                    vec![
                        term(vec![0, 2], move |p, s| {
                            ve[s].conj()
                                * re(-li * qe!((-p[0] + p[1]) as f64 / 2.0 + 0.5) * eps * he[s])
                        }),
                        term(vec![-1, 1], move |p, s| {
                            re(-li
                                * qe!((p[0] - p[1]) as f64 / 2.0 - 0.5)
                                * eps
                                * beta_k(q, p[0], ae2[s])
                                / he2[s])
                        }),
                    ],
                );
                let (hk, hki) = (h.clone(), h.clone());
                spec.insert(
                    "K",
                    vec![term(vec![0, 0], move |p, s| {
                        re(qe!((-p[0] + p[1]) as f64 / 2.0) * eps * hk[s])
                    })],
                );
                spec.insert(
                    "K^-1",
                    vec![term(vec![0, 0], move |p, s| {
                        re(qe!((p[0] - p[1]) as f64 / 2.0) * eps / hki[s])
                    })],
                );
                assemble(
                    label,
                    &cat.su_slloc_r.cross.pres,
                    cat.cross_star(&cat.su_slloc_r, "su11"),
                    q,
                    vec![Axis::Z, Axis::Z],
                    radius,
                    slots,
                    spec,
                )?
            } else {
                // Index order (n, k, l); k runs over N for the first kind.
                let (a1c, a2c, a3c, a4c, a5c, a6c) =
                    (a.clone(), a.clone(), a.clone(), a.clone(), a.clone(), a.clone());
                spec.insert(
                    "a",
                    vec![term(vec![-1, 0, 0], move |p, s| re(alpha_k(q, p[0], a1c[s])))],
                );
                spec.insert(
                    "d",
                    vec![term(vec![1, 0, 0], move |p, s| {
                        re(alpha_k(q, p[0] + 1, a2c[s]))
                    })],
                );
                spec.insert(
                    "b",
                    vec![term(vec![0, 0, 1], move |p, s| re(qe!(p[0] + 1) * a3c[s]))],
                );
                spec.insert(
                    "b^-1",
                    vec![term(vec![0, 0, -1], move |p, s| re(qe!(-(p[0] + 1)) / a4c[s]))],
                );
                spec.insert(
                    "c",
                    vec![term(vec![0, 0, -1], move |p, s| re(qe!(p[0]) * a5c[s]))],
                );
                spec.insert(
                    "c^-1",
                    vec![term(vec![0, 0, 1], move |p, s| re(qe!(-p[0]) / a6c[s]))],
                );
                let half = move |p: &[i64]| (-p[0] - 2 * p[1] + p[2]) as f64 / 2.0;
                let (hf, bf) = (h.clone(), b.clone());
                let kf = move |k: i64, s: usize| {
                    if kind2 {
                        alpha_k(q, k, bf[s])
                    } else {
                        lambda_n(q, k)
                    }
                };
                let kf2 = kf.clone();
                let (af2, hf2) = (a.clone(), h.clone());
                spec.insert(
                    "F",
                    vec![
                        term(vec![0, 1, 0], move |p, s| {
                            re(li * qe!(half(p) - 0.5) * kf(p[1] + 1, s) * eps * hf[s])
                        }),
                        term(vec![1, 0, -1], move |p, s| {
                            re(li
                                * qe!(-half(p) + 0.5)
                                * eps
                                * beta_k(q, p[0] + 1, af2[s])
                                / hf2[s])
                        }),
                    ],
                );
                let he = h.clone();
                let (ae2, he2) = (a.clone(), h.clone());
                spec.insert(
                    "E",
                    vec![
                        term(vec![0, -1, 0], move |p, s| {
                            re(-li * qe!(half(p) + 0.5) * kf2(p[1], s) * eps * he[s])
                        }),
                        term(vec![-1, 0, 1], move |p, s| {
                            re(-li * qe!(-half(p) - 0.5) * eps * beta_k(q, p[0], ae2[s]) / he2[s])
                        }),
                    ],
                );
                let (hk, hki) = (h.clone(), h.clone());
                spec.insert(
                    "K",
                    vec![term(vec![0, 0, 0], move |p, s| {
                        re(qe!(half(p)) * eps * hk[s])
                    })],
                );
                spec.insert(
                    "K^-1",
                    vec![term(vec![0, 0, 0], move |p, s| {
                        re(qe!(-half(p)) * eps / hki[s])
                    })],
                );
                let k_axis = if kind2 { Axis::Z } else { Axis::N };
                assemble(
                    label,
                    &cat.su_slloc_r.cross.pres,
                    cat.cross_star(&cat.su_slloc_r, "su11"),
                    q,
                    vec![Axis::Z, k_axis, Axis::Z],
                    radius,
                    slots,
                    spec,
                )?
            }
        }

        _ if label.starts_with("disc-") => {
            let (fam, kind) = match label {
                "disc-I1" => (1, 1),
                "disc-I2" => (1, 2),
                "disc-I3" => (1, 3),
                "disc-II1" => (2, 1),
                "disc-II2" => (2, 2),
                "disc-II3" => (2, 3),
                "disc-III1" => (3, 1),
                "disc-III2" => (3, 2),
                "disc-III3" => (3, 3),
                other => return Err(RepError::UnknownSeries(other.to_string())),
            };
            // The non-epsilon labels carry H1; kind 3 and the whole third
            // family carry epsilon H2.
            let with_eps = kind == 3 || fam == 3;
            if fam == 2 {
                check_diag(q, "A1", &ps.a1, &OPEN_Q2, sp)?;
            }
            if kind == 2 {
                check_diag(q, "A2", &ps.a2, &OPEN_Q2, sp)?;
            }
            if with_eps {
                check_diag(q, "H2", &ps.h2, &OPEN_Q1, sp)?;
            } else {
                check_diag(q, "H1", &ps.h1, &POSITIVE, sp)?;
            }
            if fam == 3 && kind == 3 {
                check_unitary("v", &ps.v, sp)?;
            }
            let eps = if with_eps { eps_checked(ps)? } else { 1.0 };
            let slots = slots_probe.unwrap_or(1);
            let g: Vec<f64> = if with_eps {
                ps.h2.clone()
            } else {
                ps.h1.clone()
            };
            let (a1v, a2v, vv) = (ps.a1.clone(), ps.a2.clone(), ps.v.clone());
            let single = fam == 3 && kind == 3;
            let sh = |dn: i64, dk: i64| {
                if single {
                    vec![dn]
                } else {
                    vec![dn, dk]
                }
            };
            let mut spec: Spec = BTreeMap::new();
            let zc = {
                let a1 = a1v.clone();
                move |n: i64, s: usize| match fam {
                    1 => lambda_n(q, n),
                    2 => alpha_k(q, n, a1[s]),
                    _ => 1.0,
                }
            };
            let zc2 = zc.clone();
            spec.insert(
                "z",
                vec![term(sh(1, 0), move |p, s| re(zc(p[0] + 1, s)))],
            );
            spec.insert(
                "z*",
                vec![term(sh(-1, 0), move |p, s| re(zc2(p[0], s)))],
            );
            let kex = move |p: &[i64]| if fam == 3 { p[0] } else { p[0] - p[1] };
            let (gk, gki) = (g.clone(), g.clone());
            spec.insert(
                "K",
                vec![term(sh(0, 0), move |p, s| re(qe!(kex(p)) * eps * gk[s]))],
            );
            spec.insert(
                "K^-1",
                vec![term(sh(0, 0), move |p, s| re(qe!(-kex(p)) * eps / gki[s]))],
            );
            // k-side coefficient of the raising/lowering terms.
            let kap = {
                let a2 = a2v.clone();
                move |k: i64, s: usize| match kind {
                    1 => lambda_n(q, k),
                    2 => alpha_k(q, k, a2[s]),
                    _ => 1.0,
                }
            };
            let kap2 = kap.clone();
            // n-side coefficient of the H^-1 terms (families one and two).
            let nu = {
                let a1 = a1v.clone();
                move |n: i64, s: usize| match fam {
                    1 => lambda_n(q, n),
                    2 => alpha_k(q, n, a1[s]),
                    _ => 1.0,
                }
            };
            let nu2 = nu.clone();
            let (mut f_terms, mut e_terms) = (Vec::new(), Vec::new());
            if fam < 3 {
                let gf = g.clone();
                f_terms.push(term(sh(0, 1), move |p, s| {
                    re(li * qe!(kex(p) as f64 - 0.5) * kap(p[1] + 1, s) * eps * gf[s])
                }));
                let gf2 = g.clone();
                f_terms.push(term(sh(-1, 0), move |p, s| {
                    re(li * qe!(-kex(p) as f64 + 0.5) * nu(p[0], s) * eps / gf2[s])
                }));
                let ge = g.clone();
                e_terms.push(term(sh(0, -1), move |p, s| {
                    re(-li * qe!(kex(p) as f64 + 0.5) * kap2(p[1], s) * eps * ge[s])
                }));
                let ge2 = g.clone();
                e_terms.push(term(sh(1, 0), move |p, s| {
                    re(-li * qe!(-kex(p) as f64 - 0.5) * nu2(p[0] + 1, s) * eps / ge2[s])
                }));
            } else {
                let (gf, vf) = (g.clone(), vv.clone());
                f_terms.push(term(sh(-1, 1), move |p, s| {
                    let u = if single { vf[s] } else { re(kap(p[1] + 1, s)) };
                    u * re(li * qe!(p[0] as f64 - 0.5) * eps * gf[s])
                }));
                let gf2 = g.clone();
                f_terms.push(term(sh(-1, 0), move |p, s| {
                    re(li * qe!(-p[0] as f64 + 0.5) * eps / gf2[s])
                }));
                let (ge, ve) = (g.clone(), vv.clone());
                e_terms.push(term(sh(1, -1), move |p, s| {
                    let u = if single {
                        ve[s].conj()
                    } else {
                        re(kap2(p[1], s))
                    };
                    u * re(-li * qe!(p[0] as f64 + 0.5) * eps * ge[s])
                }));
                let ge2 = g.clone();
                e_terms.push(term(sh(1, 0), move |p, s| {
                    re(-li * qe!(-p[0] as f64 - 0.5) * eps / ge2[s])
                }));
            }
            spec.insert("F", f_terms);
            spec.insert("E", e_terms);
            let n_axis = if fam == 1 { Axis::N } else { Axis::Z };
            let axes = if single {
                vec![n_axis]
            } else {
                let k_axis = if kind == 1 { Axis::N } else { Axis::Z };
                vec![n_axis, k_axis]
            };
            assemble(
                label,
                &cat.su_uq_r.cross.pres,
                cat.cross_star(&cat.su_uq_r, "su11"),
                q,
                axes,
                radius,
                slots,
                spec,
            )?
        }

        "sl-base" => {
            check_diag(q, "A", &ps.a, &OPEN_Q1, sp)?;
            check_unitary("w", &ps.w, sp)?;
            let slots = slots_probe.unwrap();
            let (a, w) = (ps.a.clone(), ps.w.clone());
            let mut spec: Spec = BTreeMap::new();
            let (a1c, a2c, a3c, a4c) = (a.clone(), a.clone(), a.clone(), a.clone());
            let (w1, w2) = (w.clone(), w);
            spec.insert(
                "a",
                vec![term(vec![-1], move |p, s| re(alpha_k(q, p[0], a1c[s])))],
            );
            spec.insert(
                "d",
                vec![term(vec![1], move |p, s| re(alpha_k(q, p[0] + 1, a2c[s])))],
            );
            spec.insert(
                "b",
                vec![term(vec![0], move |p, s| w1[s].conj() * re(qe!(p[0] + 1) * a3c[s]))],
            );
            spec.insert(
                "c",
                vec![term(vec![0], move |p, s| w2[s] * re(qe!(p[0]) * a4c[s]))],
            );
            assemble(
                label,
                &cat.o_slq2.pres,
                cat.o_slq2.stars["su11"].clone(),
                q,
                vec![Axis::Z],
                radius,
                slots,
                spec,
            )?
        }

        "uq-I" => {
            let mut spec: Spec = BTreeMap::new();
            spec.insert(
                "z",
                vec![term(vec![1], move |p, _| re(lambda_n(q, p[0] + 1)))],
            );
            spec.insert("z*", vec![term(vec![-1], move |p, _| re(lambda_n(q, p[0])))]);
            assemble(
                label,
                &cat.o_uq.pres,
                cat.o_uq.stars["su11"].clone(),
                q,
                vec![Axis::N],
                radius,
                1,
                spec,
            )?
        }

        "uq-II" => {
            check_diag(q, "A", &ps.a, &CLOSED_Q1, sp)?;
            let slots = slots_probe.unwrap();
            let (a1c, a2c) = (ps.a.clone(), ps.a.clone());
            let mut spec: Spec = BTreeMap::new();
            spec.insert(
                "z",
                vec![term(vec![1], move |p, s| re(alpha_k(q, p[0] + 1, a1c[s])))],
            );
            spec.insert(
                "z*",
                vec![term(vec![-1], move |p, s| re(alpha_k(q, p[0], a2c[s])))],
            );
            assemble(
                label,
                &cat.o_uq.pres,
                cat.o_uq.stars["su11"].clone(),
                q,
                vec![Axis::Z],
                radius,
                slots,
                spec,
            )?
        }

        "uq-III" => {
            check_unitary("w", &ps.w, sp)?;
            let slots = slots_probe.unwrap();
            let (w1, w2) = (ps.w.clone(), ps.w.clone());
            let mut spec: Spec = BTreeMap::new();
            spec.insert("z", vec![term(vec![], move |_, s| w1[s])]);
            spec.insert("z*", vec![term(vec![], move |_, s| w2[s].conj())]);
            assemble(
                label,
                &cat.o_uq.pres,
                cat.o_uq.stars["su11"].clone(),
                q,
                vec![],
                radius,
                slots,
                spec,
            )?
        }

        "uq-IV" => {
            let (pres, star) = minus_disc();
            let mut spec: Spec = BTreeMap::new();
            let drop = move |n: i64| (qe!(-2 * n) - 1.0).max(0.0).sqrt();
            spec.insert("z", vec![term(vec![-1], move |p, _| re(drop(p[0])))]);
            spec.insert("z*", vec![term(vec![1], move |p, _| re(drop(p[0] + 1)))]);
            assemble(label, pres, star.clone(), q, vec![Axis::N], radius, 1, spec)?
        }

        other => return Err(RepError::UnknownSeries(other.to_string())),
    };
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub name: String,
    pub residual: f64,
}

/// The matrix of a polynomial under the series, by evaluating every
/// coefficient at the series' q.
pub fn poly_matrix(rep: &SeriesRep, x: &NCPoly) -> Result<SpMat, RepError> {
    let mut acc = SpMat::zeros(rep.dim, rep.dim);
    for (w, c) in &x.terms {
        let cv = c.evaluate(rep.q)?;
        let mut m = SpMat::identity(rep.dim);
        for g in &w.0 {
            m = m.matmul(&rep.mats[g.0 as usize]);
        }
        acc = acc.add_scaled(&m, re(cv));
    }
    Ok(acc)
}

/// Residual matrix of one rewrite rule: lhs product minus rhs polynomial.
pub fn rule_residual_matrix(rep: &SeriesRep, g1: GenId, g2: GenId) -> Result<SpMat, RepError> {
    let rhs = rep
        .algebra
        .rules()
        .find(|((a, b), _)| (*a, *b) == (g1, g2))
        .map(|(_, rhs)| rhs.clone())
        .expect("rule exists");
    let lhs = rep.mats[g1.0 as usize].matmul(&rep.mats[g2.0 as usize]);
    let rhs_m = poly_matrix(rep, &rhs)?;
    Ok(lhs.add_scaled(&rhs_m, re(-1.0)))
}

/// Largest scale-normalized interior column defect of every defining
/// relation: the two sides are compared column by column on interior
/// basis vectors, relative to the size of their images.
pub fn relation_residuals(rep: &SeriesRep) -> Result<Vec<ResidualReport>, RepError> {
    let mut out = Vec::new();
    let rules: Vec<((GenId, GenId), NCPoly)> = rep
        .algebra
        .rules()
        .map(|(lhs, rhs)| (lhs, rhs.clone()))
        .collect();
    for ((g1, g2), rhs_poly) in rules {
        let lhs = rep.mats[g1.0 as usize].matmul(&rep.mats[g2.0 as usize]);
        let rhs = poly_matrix(rep, &rhs_poly)?;
        let r = lhs.max_relative_col_defect(&rhs, |j| rep.interior[j]);
        out.push(ResidualReport {
            name: format!(
                "{} {}",
                rep.algebra.gen_name(g1),
                rep.algebra.gen_name(g2)
            ),
            residual: r,
        });
    }
    Ok(out)
}

/// How far each generator matrix is from realizing the star structure:
/// the matrix of the star image compared against the adjoint, with the
/// same per-column scale normalization as the relation residuals.
pub fn adjoint_residuals(rep: &SeriesRep) -> Result<Vec<ResidualReport>, RepError> {
    let mut out = Vec::new();
    for gi in 0..rep.algebra.gen_count() {
        let image = poly_matrix(rep, &rep.star.images[gi])?;
        let adjoint = rep.mats[gi].adjoint();
        out.push(ResidualReport {
            name: format!("{}*", rep.algebra.gen_name(GenId(gi as u16))),
            residual: image.max_relative_col_defect(&adjoint, |_| true),
        });
    }
    Ok(out)
}

/// Worst residual across relations and adjoints.
pub fn max_residual(rep: &SeriesRep) -> Result<f64, RepError> {
    let mut worst: f64 = 0.0;
    for r in relation_residuals(rep)? {
        worst = worst.max(r.residual);
    }
    for r in adjoint_residuals(rep)? {
        worst = worst.max(r.residual);
    }
    Ok(worst)
}

fn column_by_point(
    rep: &SeriesRep,
    m: &SpMat,
    col: usize,
) -> BTreeMap<(Vec<i64>, usize), Complex64> {
    let mut out = BTreeMap::new();
    for &(r, v) in m.column(col) {
        let point = rep.window.point(r / rep.slots);
        out.insert((point, r % rep.slots), v);
    }
    out
}

/// Largest change of any interior residual column when the window grows:
/// zero up to rounding, because truncation only affects the boundary.
pub fn truncation_drift(
    label: &str,
    ps: &ParamSet,
    r_small: i64,
    r_large: i64,
) -> Result<f64, RepError> {
    assert!(r_small < r_large);
    let small = build_series(label, ps, r_small)?;
    let large = build_series(label, ps, r_large)?;
    let mut drift: f64 = 0.0;
    let rules: Vec<(GenId, GenId)> = small.algebra.rules().map(|(lhs, _)| lhs).collect();
    for (g1, g2) in rules {
        let ms = rule_residual_matrix(&small, g1, g2)?;
        let ml = rule_residual_matrix(&large, g1, g2)?;
        for j in 0..small.dim {
            if !small.interior[j] {
                continue;
            }
            let p = small.window.point(j / small.slots);
            let slot = j % small.slots;
            let jl = large.col_of(&p, slot).expect("point inside larger window");
            let cs = column_by_point(&small, &ms, j);
            let cl = column_by_point(&large, &ml, jl);
            let keys: std::collections::BTreeSet<_> =
                cs.keys().chain(cl.keys()).cloned().collect();
            for k in keys {
                let a = cs.get(&k).copied().unwrap_or_else(|| re(0.0));
                let b = cl.get(&k).copied().unwrap_or_else(|| re(0.0));
                drift = drift.max((a - b).norm());
            }
        }
    }
    Ok(drift)
}

/// The unique integer exponent placing -q^(-beta-1) lambda^-1 inside the
/// window (q, 1], together with that value.
pub fn window_exponent(q: f64) -> Result<(i64, f64), RepError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(RepError::BadQ(q));
    }
    let base = -1.0 / lambda_num(q);
    for beta in -4000..=4000i64 {
        let t = q.powi((-beta - 1) as i32) * base;
        if t > q && t <= 1.0 {
            return Ok((beta, t));
        }
    }
    Err(RepError::BetaNotFound(q))
}
