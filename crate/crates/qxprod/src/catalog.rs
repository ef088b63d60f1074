//! The concrete algebras: presentations, Hopf structures, star structures,
//! dual pairings, module actions, cross products, distinguished elements and
//! the exact identity suites built from them.
//!
//! Everything lives behind [`catalog`], which builds the whole family once.
//! Scalars are exact, so every check here is an equality of normal forms,
//! not a numerical comparison.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::actions::{
    build_cross_product, right_from_left, verify_module_algebra, verify_twist_map, ActionTable,
    CoidealMap, CrossProduct, ModuleAction, Side,
};
use crate::hopf::{HopfPair, HopfStructure, PairingTable};
use crate::ncalg::{GenId, NCPoly, Presentation, RewriteRule, ScalarConj, StarStructure, Word};
use crate::scalars::QScalar;

fn q(k: i64) -> QScalar {
    QScalar::q_pow(k)
}

fn qh(k: i64) -> QScalar {
    QScalar::q_half_pow(k)
}

fn lam_inv() -> QScalar {
    QScalar::lambda().inv()
}

fn mono(c: QScalar, w: &[GenId]) -> NCPoly {
    NCPoly::monomial(Word(w.to_vec()), c)
}

fn rr(a: GenId, b: GenId, rhs: NCPoly) -> RewriteRule {
    RewriteRule { lhs: (a, b), rhs }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// A base algebra: presentation, optional Hopf structure, and its star
/// structures keyed by real form.
pub struct AlgebraEntry {
    pub pres: Presentation,
    pub hopf: Option<HopfStructure>,
    pub stars: BTreeMap<&'static str, StarStructure>,
}

/// Which Hopf algebra a cross product is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UKey {
    E2,
    Sl2,
}

/// Which coordinate algebra a cross product is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XKey {
    OEq2,
    OCq,
    OSl,
    OSlLoc,
    OUq,
}

/// A cross product together with its action table and the keys of its parts.
pub struct CrossAlg {
    pub cross: CrossProduct,
    pub table: ActionTable,
    pub u_key: UKey,
    pub x_key: XKey,
}

/// Outcome of one exact identity check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

pub struct Catalog {
    pub uq_e2: AlgebraEntry,
    pub uq_sl2: AlgebraEntry,
    pub o_eq2: AlgebraEntry,
    pub o_cq: AlgebraEntry,
    pub o_slq2: AlgebraEntry,
    pub o_slq2_loc: AlgebraEntry,
    pub o_uq: AlgebraEntry,
    pub u0_cq: AlgebraEntry,
    pub pairing_e2: PairingTable,
    pub pairing_sl2: PairingTable,
    /// Twist on U_q(sl_2) exchanging the left and right module structures of
    /// the disc algebra: E -> qF, F -> q^-1 E, K -> K.
    pub phi_disc: Vec<NCPoly>,
    pub e2_eq2_r: CrossAlg,
    pub eq2_e2_l: CrossAlg,
    pub e2_cq_r: CrossAlg,
    pub cq_e2_l: CrossAlg,
    pub su_sl_r: CrossAlg,
    pub su_slloc_r: CrossAlg,
    pub slloc_su_l: CrossAlg,
    pub su_uq_r: CrossAlg,
    pub uq_su_l: CrossAlg,
}

/// The shared instance; built once, on first use.
pub fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(Catalog::build)
}

// ---------------------------------------------------------------------------
// Base algebras
// ---------------------------------------------------------------------------

fn build_uq_e2() -> AlgebraEntry {
    let (e, f, k, ki) = (GenId(0), GenId(1), GenId(2), GenId(3));
    let rules = vec![
        rr(f, e, mono(q(0), &[e, f])),
        rr(k, e, mono(q(-1), &[e, k])),
        rr(ki, e, mono(q(1), &[e, ki])),
        rr(k, f, mono(q(1), &[f, k])),
        rr(ki, f, mono(q(-1), &[f, ki])),
        rr(k, ki, NCPoly::one()),
        rr(ki, k, NCPoly::one()),
    ];
    let pres = Presentation::new("U_q(e_2)", names(&["E", "F", "K", "K^-1"]), rules);
    let g = NCPoly::from_gen;
    let hopf = HopfStructure::new(
        &pres,
        vec![
            vec![(g(e), g(k)), (g(ki), g(e))],
            vec![(g(f), g(k)), (g(ki), g(f))],
            vec![(g(k), g(k))],
            vec![(g(ki), g(ki))],
        ],
        vec![QScalar::zero(), QScalar::zero(), QScalar::one(), QScalar::one()],
        vec![g(e).scale(&-q(-1)), g(f).scale(&-q(1)), g(ki), g(k)],
        vec![g(e).scale(&-q(1)), g(f).scale(&-q(-1)), g(ki), g(k)],
    );
    let mut stars = BTreeMap::new();
    stars.insert(
        "e2",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![g(f), g(e), g(k), g(ki)],
        },
    );
    AlgebraEntry {
        pres,
        hopf: Some(hopf),
        stars,
    }
}

fn build_uq_sl2() -> AlgebraEntry {
    let (e, f, k, ki) = (GenId(0), GenId(1), GenId(2), GenId(3));
    let li = lam_inv();
    let rules = vec![
        rr(
            f,
            e,
            mono(q(0), &[e, f]) + mono(-li.clone(), &[k, k]) + mono(li, &[ki, ki]),
        ),
        rr(k, e, mono(q(1), &[e, k])),
        rr(ki, e, mono(q(-1), &[e, ki])),
        rr(k, f, mono(q(-1), &[f, k])),
        rr(ki, f, mono(q(1), &[f, ki])),
        rr(k, ki, NCPoly::one()),
        rr(ki, k, NCPoly::one()),
    ];
    let pres = Presentation::new("U_q(sl_2)", names(&["E", "F", "K", "K^-1"]), rules);
    let g = NCPoly::from_gen;
    let hopf = HopfStructure::new(
        &pres,
        vec![
            vec![(g(e), g(k)), (g(ki), g(e))],
            vec![(g(f), g(k)), (g(ki), g(f))],
            vec![(g(k), g(k))],
            vec![(g(ki), g(ki))],
        ],
        vec![QScalar::zero(), QScalar::zero(), QScalar::one(), QScalar::one()],
        vec![g(e).scale(&-q(1)), g(f).scale(&-q(-1)), g(ki), g(k)],
        vec![g(e).scale(&-q(-1)), g(f).scale(&-q(1)), g(ki), g(k)],
    );
    let mut stars = BTreeMap::new();
    stars.insert(
        "su11",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![-g(f), -g(e), g(k), g(ki)],
        },
    );
    stars.insert(
        "su2",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![g(f), g(e), g(k), g(ki)],
        },
    );
    stars.insert(
        "sl2R",
        StarStructure {
            conj: ScalarConj::InvertS,
            images: vec![g(e).scale(&-q(1)), g(f).scale(&-q(-1)), g(k), g(ki)],
        },
    );
    AlgebraEntry {
        pres,
        hopf: Some(hopf),
        stars,
    }
}

fn build_o_eq2() -> AlgebraEntry {
    let (v, vs, n, ns) = (GenId(0), GenId(1), GenId(2), GenId(3));
    let rules = vec![
        rr(v, vs, NCPoly::one()),
        rr(vs, v, NCPoly::one()),
        rr(n, v, mono(q(1), &[v, n])),
        rr(ns, v, mono(q(1), &[v, ns])),
        rr(n, vs, mono(q(-1), &[vs, n])),
        rr(ns, vs, mono(q(-1), &[vs, ns])),
        rr(ns, n, mono(q(0), &[n, ns])),
    ];
    let pres = Presentation::new("O(E_q(2))", names(&["v", "v*", "n", "n*"]), rules);
    let g = NCPoly::from_gen;
    let hopf = HopfStructure::new(
        &pres,
        vec![
            vec![(g(v), g(v))],
            vec![(g(vs), g(vs))],
            vec![(g(v), g(n)), (g(n), g(vs))],
            vec![(g(vs), g(ns)), (g(ns), g(v))],
        ],
        vec![QScalar::one(), QScalar::one(), QScalar::zero(), QScalar::zero()],
        vec![g(vs), g(v), g(n).scale(&-q(1)), g(ns).scale(&-q(-1))],
        vec![g(vs), g(v), g(n).scale(&-q(-1)), g(ns).scale(&-q(1))],
    );
    let mut stars = BTreeMap::new();
    stars.insert(
        "e2",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![g(vs), g(v), g(ns), g(n)],
        },
    );
    AlgebraEntry {
        pres,
        hopf: Some(hopf),
        stars,
    }
}

fn build_o_cq() -> AlgebraEntry {
    let (z, zs) = (GenId(0), GenId(1));
    let rules = vec![rr(zs, z, mono(q(2), &[z, zs]))];
    let pres = Presentation::new("O(C_q)", names(&["z", "z*"]), rules);
    let g = NCPoly::from_gen;
    let mut stars = BTreeMap::new();
    stars.insert(
        "e2",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![g(zs), g(z)],
        },
    );
    AlgebraEntry {
        pres,
        hopf: None,
        stars,
    }
}

fn build_o_uq() -> AlgebraEntry {
    let (z, zs) = (GenId(0), GenId(1));
    let c = QScalar::one() - q(2);
    let rules = vec![rr(zs, z, mono(q(2), &[z, zs]) + NCPoly::scalar(c))];
    let pres = Presentation::new("O(U_q)", names(&["z", "z*"]), rules);
    let g = NCPoly::from_gen;
    let mut stars = BTreeMap::new();
    stars.insert(
        "su11",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![g(zs), g(z)],
        },
    );
    AlgebraEntry {
        pres,
        hopf: None,
        stars,
    }
}

fn build_o_slq2() -> AlgebraEntry {
    let (a, d, b, c) = (GenId(0), GenId(1), GenId(2), GenId(3));
    let rules = vec![
        rr(b, a, mono(q(-1), &[a, b])),
        rr(c, a, mono(q(-1), &[a, c])),
        rr(b, d, mono(q(1), &[d, b])),
        rr(c, d, mono(q(1), &[d, c])),
        rr(c, b, mono(q(0), &[b, c])),
        rr(a, d, NCPoly::one() + mono(q(1), &[b, c])),
        rr(d, a, NCPoly::one() + mono(q(-1), &[b, c])),
    ];
    let pres = Presentation::new("O(SL_q(2))", names(&["a", "d", "b", "c"]), rules);
    let g = NCPoly::from_gen;
    let hopf = HopfStructure::new(
        &pres,
        vec![
            vec![(g(a), g(a)), (g(b), g(c))],
            vec![(g(c), g(b)), (g(d), g(d))],
            vec![(g(a), g(b)), (g(b), g(d))],
            vec![(g(c), g(a)), (g(d), g(c))],
        ],
        vec![QScalar::one(), QScalar::one(), QScalar::zero(), QScalar::zero()],
        vec![g(d), g(a), g(b).scale(&-q(-1)), g(c).scale(&-q(1))],
        vec![g(d), g(a), g(b).scale(&-q(1)), g(c).scale(&-q(-1))],
    );
    let mut stars = BTreeMap::new();
    stars.insert(
        "su11",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![g(d), g(a), g(c).scale(&q(1)), g(b).scale(&q(-1))],
        },
    );
    stars.insert(
        "su2",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![g(d), g(a), g(c).scale(&-q(1)), g(b).scale(&-q(-1))],
        },
    );
    stars.insert(
        "sl2R",
        StarStructure {
            conj: ScalarConj::InvertS,
            images: vec![g(a), g(d), g(b), g(c)],
        },
    );
    AlgebraEntry {
        pres,
        hopf: Some(hopf),
        stars,
    }
}

fn build_o_slq2_loc() -> AlgebraEntry {
    let (a, d, b, bi, c, ci) = (
        GenId(0),
        GenId(1),
        GenId(2),
        GenId(3),
        GenId(4),
        GenId(5),
    );
    let rules = vec![
        rr(b, a, mono(q(-1), &[a, b])),
        rr(c, a, mono(q(-1), &[a, c])),
        rr(b, d, mono(q(1), &[d, b])),
        rr(c, d, mono(q(1), &[d, c])),
        rr(c, b, mono(q(0), &[b, c])),
        rr(a, d, NCPoly::one() + mono(q(1), &[b, c])),
        rr(d, a, NCPoly::one() + mono(q(-1), &[b, c])),
        rr(b, bi, NCPoly::one()),
        rr(bi, b, NCPoly::one()),
        rr(c, ci, NCPoly::one()),
        rr(ci, c, NCPoly::one()),
        rr(bi, a, mono(q(1), &[a, bi])),
        rr(bi, d, mono(q(-1), &[d, bi])),
        rr(c, bi, mono(q(0), &[bi, c])),
        rr(ci, a, mono(q(1), &[a, ci])),
        rr(ci, d, mono(q(-1), &[d, ci])),
        rr(ci, b, mono(q(0), &[b, ci])),
        rr(ci, bi, mono(q(0), &[bi, ci])),
    ];
    let pres = Presentation::new(
        "O_loc(SL_q(2))",
        names(&["a", "d", "b", "b^-1", "c", "c^-1"]),
        rules,
    );
    let g = NCPoly::from_gen;
    let mut stars = BTreeMap::new();
    stars.insert(
        "su11",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![
                g(d),
                g(a),
                g(c).scale(&q(1)),
                g(ci).scale(&q(-1)),
                g(b).scale(&q(-1)),
                g(bi).scale(&q(1)),
            ],
        },
    );
    stars.insert(
        "su2",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![
                g(d),
                g(a),
                g(c).scale(&-q(1)),
                g(ci).scale(&-q(-1)),
                g(b).scale(&-q(-1)),
                g(bi).scale(&-q(1)),
            ],
        },
    );
    stars.insert(
        "sl2R",
        StarStructure {
            conj: ScalarConj::InvertS,
            images: vec![g(a), g(d), g(b), g(bi), g(c), g(ci)],
        },
    );
    AlgebraEntry {
        pres,
        hopf: None,
        stars,
    }
}

/// The coordinate-and-shift pair: z X = q^2 X z + 1 and its star images.
fn build_u0_cq() -> AlgebraEntry {
    let (x, xs, z, zs) = (GenId(0), GenId(1), GenId(2), GenId(3));
    let rules = vec![
        rr(xs, x, mono(q(2), &[x, xs])),
        rr(z, x, mono(q(2), &[x, z]) + NCPoly::one()),
        rr(z, xs, mono(q(2), &[xs, z])),
        rr(zs, x, mono(q(-2), &[x, zs])),
        rr(zs, xs, mono(q(-2), &[xs, zs]) - NCPoly::scalar(q(-2))),
        rr(zs, z, mono(q(2), &[z, zs])),
    ];
    let pres = Presentation::new("q-Weyl pair", names(&["X", "X*", "z", "z*"]), rules);
    let g = NCPoly::from_gen;
    let mut stars = BTreeMap::new();
    stars.insert(
        "u0",
        StarStructure {
            conj: ScalarConj::Identity,
            images: vec![g(xs), g(x), g(zs), g(z)],
        },
    );
    AlgebraEntry {
        pres,
        hopf: None,
        stars,
    }
}

// ---------------------------------------------------------------------------
// Pairings and action tables
// ---------------------------------------------------------------------------

fn pairing_e2(u: &Presentation, x: &Presentation) -> PairingTable {
    let mut t = PairingTable::default();
    t.insert(u.gen_id("E"), x.gen_id("n*"), -q(-1));
    t.insert(u.gen_id("F"), x.gen_id("n"), QScalar::one());
    t.insert(u.gen_id("K"), x.gen_id("v"), qh(1));
    t.insert(u.gen_id("K"), x.gen_id("v*"), qh(-1));
    t.insert(u.gen_id("K^-1"), x.gen_id("v"), qh(-1));
    t.insert(u.gen_id("K^-1"), x.gen_id("v*"), qh(1));
    t
}

fn pairing_sl2(u: &Presentation, x: &Presentation) -> PairingTable {
    let mut t = PairingTable::default();
    t.insert(u.gen_id("K"), x.gen_id("a"), qh(-1));
    t.insert(u.gen_id("K"), x.gen_id("d"), qh(1));
    t.insert(u.gen_id("K^-1"), x.gen_id("a"), qh(1));
    t.insert(u.gen_id("K^-1"), x.gen_id("d"), qh(-1));
    t.insert(u.gen_id("E"), x.gen_id("c"), QScalar::one());
    t.insert(u.gen_id("F"), x.gen_id("b"), QScalar::one());
    t
}

/// Rewrites a polynomial from one presentation into another with the same
/// generator names.
fn rename(from: &Presentation, to: &Presentation, x: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in &x.terms {
        let word = Word(
            w.0.iter()
                .map(|g| to.gen_id(from.gen_name(*g)))
                .collect(),
        );
        out.add_assign_term(word, c.clone());
    }
    to.normal_form(&out)
}

/// Carries an action table for the plain coordinate algebra over to the
/// localized one, matching generators by name.
fn relocate_table(from_x: &Presentation, to_x: &Presentation, t: &ActionTable) -> ActionTable {
    let mut out = ActionTable::new(t.side);
    for ((f, x), val) in &t.entries {
        out.insert(
            *f,
            to_x.gen_id(from_x.gen_name(*x)),
            rename(from_x, to_x, val),
        );
    }
    out
}

/// Action of U_q(e_2) on the plane coordinates z, z*.
fn table_e2_on_cq(u: &Presentation, x: &Presentation, side: Side) -> ActionTable {
    let (e, f, k, ki) = (
        u.gen_id("E"),
        u.gen_id("F"),
        u.gen_id("K"),
        u.gen_id("K^-1"),
    );
    let (z, zs) = (x.gen_id("z"), x.gen_id("z*"));
    let gz = NCPoly::from_gen(z);
    let gzs = NCPoly::from_gen(zs);
    let mut t = ActionTable::new(side);
    match side {
        Side::Right => {
            t.insert(e, z, NCPoly::zero());
            t.insert(e, zs, NCPoly::scalar(-qh(-3)));
            t.insert(f, z, NCPoly::scalar(qh(-1)));
            t.insert(f, zs, NCPoly::zero());
        }
        Side::Left => {
            t.insert(e, z, NCPoly::scalar(-qh(-3)));
            t.insert(e, zs, NCPoly::zero());
            t.insert(f, z, NCPoly::zero());
            t.insert(f, zs, NCPoly::scalar(qh(-1)));
        }
    }
    t.insert(k, z, gz.scale(&q(1)));
    t.insert(k, zs, gzs.scale(&q(-1)));
    t.insert(ki, z, gz.scale(&q(-1)));
    t.insert(ki, zs, gzs.scale(&q(1)));
    t
}

/// Left action of U_q(sl_2) on the disc coordinates z, z*.
fn table_sl2_on_uq_left(u: &Presentation, x: &Presentation) -> ActionTable {
    let (e, f, k, ki) = (
        u.gen_id("E"),
        u.gen_id("F"),
        u.gen_id("K"),
        u.gen_id("K^-1"),
    );
    let (z, zs) = (x.gen_id("z"), x.gen_id("z*"));
    let mut t = ActionTable::new(Side::Left);
    t.insert(e, z, NCPoly::scalar(qh(1)));
    t.insert(e, zs, mono(-qh(1), &[zs, zs]));
    t.insert(f, z, mono(-qh(-1), &[z, z]));
    t.insert(f, zs, NCPoly::scalar(qh(-1)));
    t.insert(k, z, NCPoly::from_gen(z).scale(&q(-1)));
    t.insert(k, zs, NCPoly::from_gen(zs).scale(&q(1)));
    t.insert(ki, z, NCPoly::from_gen(z).scale(&q(1)));
    t.insert(ki, zs, NCPoly::from_gen(zs).scale(&q(-1)));
    t
}

/// Inverse-generator entries of the localized coordinate algebra; the
/// entries for a, d, b, c come from the pairing.
fn add_loc_inverse_entries(t: &mut ActionTable, u: &Presentation, x: &Presentation) {
    let (e, f, k, ki) = (
        u.gen_id("E"),
        u.gen_id("F"),
        u.gen_id("K"),
        u.gen_id("K^-1"),
    );
    let (a, d, bi, ci) = (
        x.gen_id("a"),
        x.gen_id("d"),
        x.gen_id("b^-1"),
        x.gen_id("c^-1"),
    );
    let gbi = NCPoly::from_gen(bi);
    let gci = NCPoly::from_gen(ci);
    match t.side {
        Side::Right => {
            t.insert(e, bi, NCPoly::zero());
            t.insert(f, bi, mono(-q(-1), &[d, bi, bi]));
            t.insert(k, bi, gbi.scale(&qh(1)));
            t.insert(ki, bi, gbi.scale(&qh(-1)));
            t.insert(e, ci, mono(-q(1), &[a, ci, ci]));
            t.insert(f, ci, NCPoly::zero());
            t.insert(k, ci, gci.scale(&qh(-1)));
            t.insert(ki, ci, gci.scale(&qh(1)));
        }
        Side::Left => {
            t.insert(e, bi, NCPoly::zero());
            t.insert(f, bi, mono(-q(1), &[a, bi, bi]));
            t.insert(k, bi, gbi.scale(&qh(-1)));
            t.insert(ki, bi, gbi.scale(&qh(1)));
            t.insert(e, ci, mono(-q(-1), &[d, ci, ci]));
            t.insert(f, ci, NCPoly::zero());
            t.insert(k, ci, gci.scale(&qh(1)));
            t.insert(ki, ci, gci.scale(&qh(-1)));
        }
    }
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

impl Catalog {
    fn build() -> Catalog {
        let uq_e2 = build_uq_e2();
        let uq_sl2 = build_uq_sl2();
        let o_eq2 = build_o_eq2();
        let o_cq = build_o_cq();
        let o_slq2 = build_o_slq2();
        let o_slq2_loc = build_o_slq2_loc();
        let o_uq = build_o_uq();
        let u0_cq = build_u0_cq();

        let pairing_e2 = pairing_e2(&uq_e2.pres, &o_eq2.pres);
        let pairing_sl2 = pairing_sl2(&uq_sl2.pres, &o_slq2.pres);

        let hopf_e2 = uq_e2.hopf.as_ref().unwrap();
        let hopf_sl2 = uq_sl2.hopf.as_ref().unwrap();
        let pair_e2 = HopfPair {
            u: &uq_e2.pres,
            hu: hopf_e2,
            x: &o_eq2.pres,
            hx: o_eq2.hopf.as_ref().unwrap(),
            table: &pairing_e2,
        };
        let pair_sl2 = HopfPair {
            u: &uq_sl2.pres,
            hu: hopf_sl2,
            x: &o_slq2.pres,
            hx: o_slq2.hopf.as_ref().unwrap(),
            table: &pairing_sl2,
        };

        let t_eq2_r = ActionTable::from_pairing(Side::Right, &pair_e2);
        let t_eq2_l = ActionTable::from_pairing(Side::Left, &pair_e2);
        let t_cq_r = table_e2_on_cq(&uq_e2.pres, &o_cq.pres, Side::Right);
        let t_cq_l = table_e2_on_cq(&uq_e2.pres, &o_cq.pres, Side::Left);
        let t_sl_r = ActionTable::from_pairing(Side::Right, &pair_sl2);
        let t_sl_l = ActionTable::from_pairing(Side::Left, &pair_sl2);
        let mut t_slloc_r = relocate_table(&o_slq2.pres, &o_slq2_loc.pres, &t_sl_r);
        add_loc_inverse_entries(&mut t_slloc_r, &uq_sl2.pres, &o_slq2_loc.pres);
        let mut t_slloc_l = relocate_table(&o_slq2.pres, &o_slq2_loc.pres, &t_sl_l);
        add_loc_inverse_entries(&mut t_slloc_l, &uq_sl2.pres, &o_slq2_loc.pres);
        let t_uq_l = table_sl2_on_uq_left(&uq_sl2.pres, &o_uq.pres);

        let guq = |n: &str| NCPoly::from_gen(uq_sl2.pres.gen_id(n));
        let phi_disc = vec![
            guq("F").scale(&q(1)),
            guq("E").scale(&q(-1)),
            guq("K"),
            guq("K^-1"),
        ];
        let t_uq_r = {
            let left = ModuleAction {
                u: &uq_sl2.pres,
                hu: hopf_sl2,
                x: &o_uq.pres,
                table: &t_uq_l,
            };
            right_from_left(&left, &phi_disc)
        };

        let make = |name: &str,
                    u: &AlgebraEntry,
                    x: &AlgebraEntry,
                    table: ActionTable,
                    u_key: UKey,
                    x_key: XKey| {
            let ma = ModuleAction {
                u: &u.pres,
                hu: u.hopf.as_ref().unwrap(),
                x: &x.pres,
                table: &table,
            };
            let cross = build_cross_product(name, &ma);
            CrossAlg {
                cross,
                table,
                u_key,
                x_key,
            }
        };

        let e2_eq2_r = make(
            "U_q(e_2) ltimes O(E_q(2))",
            &uq_e2,
            &o_eq2,
            t_eq2_r,
            UKey::E2,
            XKey::OEq2,
        );
        let eq2_e2_l = make(
            "O(E_q(2)) rtimes U_q(e_2)",
            &uq_e2,
            &o_eq2,
            t_eq2_l,
            UKey::E2,
            XKey::OEq2,
        );
        let e2_cq_r = make(
            "U_q(e_2) ltimes O(C_q)",
            &uq_e2,
            &o_cq,
            t_cq_r,
            UKey::E2,
            XKey::OCq,
        );
        let cq_e2_l = make(
            "O(C_q) rtimes U_q(e_2)",
            &uq_e2,
            &o_cq,
            t_cq_l,
            UKey::E2,
            XKey::OCq,
        );
        let su_sl_r = make(
            "U_q(sl_2) ltimes O(SL_q(2))",
            &uq_sl2,
            &o_slq2,
            t_sl_r,
            UKey::Sl2,
            XKey::OSl,
        );
        let su_slloc_r = make(
            "U_q(sl_2) ltimes O_loc(SL_q(2))",
            &uq_sl2,
            &o_slq2_loc,
            t_slloc_r,
            UKey::Sl2,
            XKey::OSlLoc,
        );
        let slloc_su_l = make(
            "O_loc(SL_q(2)) rtimes U_q(sl_2)",
            &uq_sl2,
            &o_slq2_loc,
            t_slloc_l,
            UKey::Sl2,
            XKey::OSlLoc,
        );
        let su_uq_r = make(
            "U_q(sl_2) ltimes O(U_q)",
            &uq_sl2,
            &o_uq,
            t_uq_r,
            UKey::Sl2,
            XKey::OUq,
        );
        let uq_su_l = make(
            "O(U_q) rtimes U_q(sl_2)",
            &uq_sl2,
            &o_uq,
            t_uq_l,
            UKey::Sl2,
            XKey::OUq,
        );

        Catalog {
            uq_e2,
            uq_sl2,
            o_eq2,
            o_cq,
            o_slq2,
            o_slq2_loc,
            o_uq,
            u0_cq,
            pairing_e2,
            pairing_sl2,
            phi_disc,
            e2_eq2_r,
            eq2_e2_l,
            e2_cq_r,
            cq_e2_l,
            su_sl_r,
            su_slloc_r,
            slloc_su_l,
            su_uq_r,
            uq_su_l,
        }
    }

    pub fn u_entry(&self, k: UKey) -> &AlgebraEntry {
        match k {
            UKey::E2 => &self.uq_e2,
            UKey::Sl2 => &self.uq_sl2,
        }
    }

    pub fn x_entry(&self, k: XKey) -> &AlgebraEntry {
        match k {
            XKey::OEq2 => &self.o_eq2,
            XKey::OCq => &self.o_cq,
            XKey::OSl => &self.o_slq2,
            XKey::OSlLoc => &self.o_slq2_loc,
            XKey::OUq => &self.o_uq,
        }
    }

    /// The module action a cross algebra was built from.
    pub fn action<'a>(&'a self, c: &'a CrossAlg) -> ModuleAction<'a> {
        let u = self.u_entry(c.u_key);
        let x = self.x_entry(c.x_key);
        ModuleAction {
            u: &u.pres,
            hu: u.hopf.as_ref().expect("Hopf part"),
            x: &x.pres,
            table: &c.table,
        }
    }

    /// The star structure of a cross algebra for the given real form.
    pub fn cross_star(&self, c: &CrossAlg, form: &str) -> StarStructure {
        let su = &self.u_entry(c.u_key).stars[form];
        let sx = &self.x_entry(c.x_key).stars[form];
        c.cross.combine_stars(su, sx)
    }

    pub fn crosses(&self) -> Vec<&CrossAlg> {
        vec![
            &self.e2_eq2_r,
            &self.eq2_e2_l,
            &self.e2_cq_r,
            &self.cq_e2_l,
            &self.su_sl_r,
            &self.su_slloc_r,
            &self.slloc_su_l,
            &self.su_uq_r,
            &self.uq_su_l,
        ]
    }

    pub fn all_presentations(&self) -> Vec<&Presentation> {
        let mut out = vec![
            &self.uq_e2.pres,
            &self.uq_sl2.pres,
            &self.o_eq2.pres,
            &self.o_cq.pres,
            &self.o_slq2.pres,
            &self.o_slq2_loc.pres,
            &self.o_uq.pres,
            &self.u0_cq.pres,
        ];
        out.extend(self.crosses().into_iter().map(|c| &c.cross.pres));
        out
    }

    // -- distinguished elements ---------------------------------------------

    /// X = q^(1/2) F K and X* = q^(1/2) K E inside the plane cross product.
    pub fn shift_pair(&self) -> (NCPoly, NCPoly) {
        let p = &self.e2_cq_r.cross.pres;
        let x = p.multiply(&p.gen("F"), &p.gen("K")).scale(&qh(1));
        let xs = p.multiply(&p.gen("K"), &p.gen("E")).scale(&qh(1));
        (x, xs)
    }

    /// Y = -q^(3/2) E K inside the plane cross product.
    pub fn y_element(&self) -> NCPoly {
        let p = &self.e2_cq_r.cross.pres;
        p.multiply(&p.gen("E"), &p.gen("K")).scale(&-qh(3))
    }

    /// N = z X - gamma, the normal element of the plane cross product.
    pub fn normal_element(&self) -> NCPoly {
        let p = &self.e2_cq_r.cross.pres;
        let (x, _) = self.shift_pair();
        p.multiply(&p.gen("z"), &x) - NCPoly::scalar(QScalar::gamma())
    }

    /// Q = -q^(1/2) lambda K^-1 E - K^-2 c^-1 a in the localized cross.
    pub fn q_element(&self) -> NCPoly {
        let p = &self.su_slloc_r.cross.pres;
        let t1 = p
            .multiply(&p.gen("K^-1"), &p.gen("E"))
            .scale(&(-qh(1) * QScalar::lambda()));
        let t2 = p.product(&[&p.gen("K^-1"), &p.gen("K^-1"), &p.gen("c^-1"), &p.gen("a")]);
        t1 - t2
    }

    /// R = q^(1/2) lambda F K^-1 - q d b^-1 K^-2 in the localized cross.
    pub fn r_element(&self) -> NCPoly {
        let p = &self.su_slloc_r.cross.pres;
        let t1 = p
            .multiply(&p.gen("F"), &p.gen("K^-1"))
            .scale(&(qh(1) * QScalar::lambda()));
        let t2 = p
            .product(&[&p.gen("d"), &p.gen("b^-1"), &p.gen("K^-1"), &p.gen("K^-1")])
            .scale(&q(1));
        t1 - t2
    }

    /// S = q^(1/2) lambda F K^-1 - q z* K^-2 in the disc cross product.
    pub fn s_element(&self) -> NCPoly {
        let p = &self.su_uq_r.cross.pres;
        let t1 = p
            .multiply(&p.gen("F"), &p.gen("K^-1"))
            .scale(&(qh(1) * QScalar::lambda()));
        let t2 = p
            .product(&[&p.gen("z*"), &p.gen("K^-1"), &p.gen("K^-1")])
            .scale(&q(1));
        t1 - t2
    }

    /// S* = -q^(1/2) lambda K^-1 E - q K^-2 z in the disc cross product.
    pub fn s_star_element(&self) -> NCPoly {
        let p = &self.su_uq_r.cross.pres;
        let t1 = p
            .multiply(&p.gen("K^-1"), &p.gen("E"))
            .scale(&(-qh(1) * QScalar::lambda()));
        let t2 = p
            .product(&[&p.gen("K^-1"), &p.gen("K^-1"), &p.gen("z")])
            .scale(&q(1));
        t1 - t2
    }

    /// T = K^-2 (1 - z* z) in the disc cross product.
    pub fn t_element(&self) -> NCPoly {
        let p = &self.su_uq_r.cross.pres;
        let one_minus = NCPoly::one() - p.multiply(&p.gen("z*"), &p.gen("z"));
        p.product(&[&p.gen("K^-1"), &p.gen("K^-1"), &one_minus])
    }
}

// ---------------------------------------------------------------------------
// Identity suites
// ---------------------------------------------------------------------------

fn rec(suite: &'static str, name: impl Into<String>, p: &Presentation, lhs: &NCPoly, rhs: &NCPoly) -> CheckRecord {
    let res = p.identity_residual(lhs, rhs);
    let passed = res.is_zero();
    CheckRecord {
        suite,
        name: name.into(),
        passed,
        detail: if passed {
            String::new()
        } else {
            format!("residual {}", p.format(&res))
        },
    }
}

fn rec_fails(suite: &'static str, name: impl Into<String>, fails: Vec<String>) -> CheckRecord {
    CheckRecord {
        suite,
        name: name.into(),
        passed: fails.is_empty(),
        detail: fails.join("; "),
    }
}

impl Catalog {
    /// Hopf axioms on all four Hopf entries, over words up to the given
    /// length.
    pub fn hopf_axiom_checks(&self, max_len: usize) -> Vec<CheckRecord> {
        let entries = [&self.uq_e2, &self.uq_sl2, &self.o_eq2, &self.o_slq2];
        entries
            .iter()
            .map(|a| {
                let fails = a.hopf.as_ref().unwrap().verify_axioms(&a.pres, max_len);
                rec_fails(
                    "hopf",
                    format!("axioms of {} up to length {}", a.pres.name(), max_len),
                    fails,
                )
            })
            .collect()
    }

    /// Star structures are involutive and respect all relations, on the base
    /// algebras and on the cross products.
    pub fn star_checks(&self) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        let bases = [
            &self.uq_e2,
            &self.uq_sl2,
            &self.o_eq2,
            &self.o_cq,
            &self.o_slq2,
            &self.o_slq2_loc,
            &self.o_uq,
            &self.u0_cq,
        ];
        for a in bases {
            for (form, st) in &a.stars {
                out.push(rec_fails(
                    "star",
                    format!("star ({form}) on {}", a.pres.name()),
                    a.pres.verify_star(st),
                ));
            }
        }
        let crosses: Vec<(&CrossAlg, Vec<&'static str>)> = vec![
            (&self.e2_eq2_r, vec!["e2"]),
            (&self.eq2_e2_l, vec!["e2"]),
            (&self.e2_cq_r, vec!["e2"]),
            (&self.cq_e2_l, vec!["e2"]),
            (&self.su_sl_r, vec!["su11", "su2", "sl2R"]),
            (&self.su_slloc_r, vec!["su11", "su2", "sl2R"]),
            (&self.slloc_su_l, vec!["su11"]),
            (&self.su_uq_r, vec!["su11"]),
            (&self.uq_su_l, vec!["su11"]),
        ];
        for (c, forms) in crosses {
            for form in forms {
                let st = self.cross_star(c, form);
                out.push(rec_fails(
                    "star",
                    format!("star ({form}) on {}", c.cross.pres.name()),
                    c.cross.pres.verify_star(&st),
                ));
            }
        }
        out
    }

    /// Module-algebra laws for every action table, plus the disc twist map.
    pub fn module_algebra_checks(&self) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        for c in self.crosses() {
            let ma = self.action(c);
            out.push(rec_fails(
                "module",
                format!("module algebra for {}", c.cross.pres.name()),
                verify_module_algebra(&ma),
            ));
        }
        let fails = verify_twist_map(
            &self.uq_sl2.pres,
            self.uq_sl2.hopf.as_ref().unwrap(),
            &self.phi_disc,
            Some(&self.uq_sl2.stars["su11"]),
        );
        out.push(rec_fails("module", "disc twist map", fails));
        out
    }

    /// Commutation displays of the cross products, rebuilt by hand and
    /// compared against the generated presentations.
    pub fn cross_display_checks(&self) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        let mut push = |c: &CrossAlg, name: &str, lhs: NCPoly, rhs: NCPoly| {
            out.push(rec("cross", format!("{name} in {}", c.cross.pres.name()), &c.cross.pres, &lhs, &rhs));
        };
        {
            let c = &self.e2_eq2_r;
            let p = &c.cross.pres;
            let m2 = |x: &str, y: &str| p.multiply(&p.gen(x), &p.gen(y));
            push(c, "n F = q^(1/2) F n + K^-1 v*", m2("n", "F"), m2("F", "n").scale(&qh(1)) + m2("K^-1", "v*"));
            push(c, "n* E = q^(-1/2) E n* - q^-1 K^-1 v", m2("n*", "E"), m2("E", "n*").scale(&qh(-1)) - m2("K^-1", "v").scale(&q(-1)));
            push(c, "n E = q^(1/2) E n", m2("n", "E"), m2("E", "n").scale(&qh(1)));
            push(c, "v K = q^(1/2) K v", m2("v", "K"), m2("K", "v").scale(&qh(1)));
        }
        {
            let c = &self.eq2_e2_l;
            let p = &c.cross.pres;
            let m2 = |x: &str, y: &str| p.multiply(&p.gen(x), &p.gen(y));
            push(c, "F n = q^(1/2) n F + v K", m2("F", "n"), m2("n", "F").scale(&qh(1)) + m2("v", "K"));
            push(c, "E n* = q^(-1/2) n* E - q^-1 v* K", m2("E", "n*"), m2("n*", "E").scale(&qh(-1)) - m2("v*", "K").scale(&q(-1)));
            push(c, "K v = q^(1/2) v K", m2("K", "v"), m2("v", "K").scale(&qh(1)));
        }
        {
            let c = &self.e2_cq_r;
            let p = &c.cross.pres;
            let m2 = |x: &str, y: &str| p.multiply(&p.gen(x), &p.gen(y));
            push(c, "z F = q F z + q^(-1/2) K^-1", m2("z", "F"), m2("F", "z").scale(&q(1)) + p.gen("K^-1").scale(&qh(-1)));
            push(c, "z* E = q^-1 E z* - q^(-3/2) K^-1", m2("z*", "E"), m2("E", "z*").scale(&q(-1)) - p.gen("K^-1").scale(&qh(-3)));
            push(c, "z E = q E z", m2("z", "E"), m2("E", "z").scale(&q(1)));
            push(c, "z K = q K z", m2("z", "K"), m2("K", "z").scale(&q(1)));
        }
        {
            let c = &self.cq_e2_l;
            let p = &c.cross.pres;
            let m2 = |x: &str, y: &str| p.multiply(&p.gen(x), &p.gen(y));
            push(c, "E z = q^-1 z E - q^(-3/2) K", m2("E", "z"), m2("z", "E").scale(&q(-1)) - p.gen("K").scale(&qh(-3)));
            push(c, "F z* = q z* F + q^(-1/2) K", m2("F", "z*"), m2("z*", "F").scale(&q(1)) + p.gen("K").scale(&qh(-1)));
        }
        for c in [&self.su_sl_r, &self.su_slloc_r] {
            let p = &c.cross.pres;
            let m2 = |x: &str, y: &str| p.multiply(&p.gen(x), &p.gen(y));
            push(c, "a F = q^(-1/2) F a + K^-1 c", m2("a", "F"), m2("F", "a").scale(&qh(-1)) + m2("K^-1", "c"));
            push(c, "c E = q^(1/2) E c + K^-1 a", m2("c", "E"), m2("E", "c").scale(&qh(1)) + m2("K^-1", "a"));
            push(c, "d E = q^(1/2) E d + K^-1 b", m2("d", "E"), m2("E", "d").scale(&qh(1)) + m2("K^-1", "b"));
            push(c, "b F = q^(-1/2) F b + K^-1 d", m2("b", "F"), m2("F", "b").scale(&qh(-1)) + m2("K^-1", "d"));
        }
        {
            let c = &self.slloc_su_l;
            let p = &c.cross.pres;
            let m2 = |x: &str, y: &str| p.multiply(&p.gen(x), &p.gen(y));
            push(c, "F b = q^(-1/2) b F + a K", m2("F", "b"), m2("b", "F").scale(&qh(-1)) + m2("a", "K"));
            push(c, "E c = q^(1/2) c E + d K", m2("E", "c"), m2("c", "E").scale(&qh(1)) + m2("d", "K"));
            push(c, "E a = q^(1/2) a E + b K", m2("E", "a"), m2("a", "E").scale(&qh(1)) + m2("b", "K"));
            push(c, "F d = q^(-1/2) d F + c K", m2("F", "d"), m2("d", "F").scale(&qh(-1)) + m2("c", "K"));
        }
        {
            let c = &self.su_uq_r;
            let p = &c.cross.pres;
            let m2 = |x: &str, y: &str| p.multiply(&p.gen(x), &p.gen(y));
            let m3 = |x: &str, y: &str, w: &str| p.product(&[&p.gen(x), &p.gen(y), &p.gen(w)]);
            push(c, "z E = q^-1 E z - q^(1/2) K^-1 z^2", m2("z", "E"), m2("E", "z").scale(&q(-1)) - m3("K^-1", "z", "z").scale(&qh(1)));
            push(c, "z F = q^-1 F z + q^(-1/2) K^-1", m2("z", "F"), m2("F", "z").scale(&q(-1)) + p.gen("K^-1").scale(&qh(-1)));
            push(c, "z* E = q E z* + q^(1/2) K^-1", m2("z*", "E"), m2("E", "z*").scale(&q(1)) + p.gen("K^-1").scale(&qh(1)));
            push(c, "z* F = q F z* - q^(-1/2) K^-1 z*^2", m2("z*", "F"), m2("F", "z*").scale(&q(1)) - m3("K^-1", "z*", "z*").scale(&qh(-1)));
        }
        {
            let c = &self.uq_su_l;
            let p = &c.cross.pres;
            let m2 = |x: &str, y: &str| p.multiply(&p.gen(x), &p.gen(y));
            let m3 = |x: &str, y: &str, w: &str| p.product(&[&p.gen(x), &p.gen(y), &p.gen(w)]);
            push(c, "E z = q z E + q^(1/2) K", m2("E", "z"), m2("z", "E").scale(&q(1)) + p.gen("K").scale(&qh(1)));
            push(c, "F z = q z F - q^(-1/2) z^2 K", m2("F", "z"), m2("z", "F").scale(&q(1)) - m3("z", "z", "K").scale(&qh(-1)));
            push(c, "E z* = q^-1 z* E - q^(1/2) z*^2 K", m2("E", "z*"), m2("z*", "E").scale(&q(-1)) - m3("z*", "z*", "K").scale(&qh(1)));
            push(c, "F z* = q^-1 z* F + q^(-1/2) K", m2("F", "z*"), m2("z*", "F").scale(&q(-1)) + p.gen("K").scale(&qh(-1)));
        }
        out
    }

    /// The identities of the distinguished elements, suite by suite.
    pub fn derived_identity_checks(&self) -> Vec<CheckRecord> {
        let mut out = Vec::new();

        // relnz: the normal element of the plane cross product.
        {
            let p = &self.e2_cq_r.cross.pres;
            let n = self.normal_element();
            let st = self.cross_star(&self.e2_cq_r, "e2");
            let ns = p.star(&st, &n);
            let z = p.gen("z");
            let zs = p.gen("z*");
            out.push(rec("relnz", "z N = q^2 N z", p, &p.multiply(&z, &n), &p.multiply(&n, &z).scale(&q(2))));
            out.push(rec("relnz", "z* N = N z*", p, &p.multiply(&zs, &n), &p.multiply(&n, &zs)));
            out.push(rec("relnz", "N* N = N N*", p, &p.multiply(&ns, &n), &p.multiply(&n, &ns)));
            let zsz = p.multiply(&zs, &z);
            let nsn = p.multiply(&ns, &n);
            out.push(rec("relnz", "z* z N* N = N* N z* z", p, &p.multiply(&zsz, &nsn), &p.multiply(&nsn, &zsz)));
        }

        // qp: the shift pair inside the plane cross product.
        {
            let p = &self.e2_cq_r.cross.pres;
            let (x, xs) = self.shift_pair();
            let z = p.gen("z");
            let zs = p.gen("z*");
            out.push(rec("qp", "z* z = q^2 z z*", p, &p.multiply(&zs, &z), &p.multiply(&z, &zs).scale(&q(2))));
            out.push(rec("qp", "X* X = q^2 X X*", p, &p.multiply(&xs, &x), &p.multiply(&x, &xs).scale(&q(2))));
            out.push(rec("qp", "z X = q^2 X z + 1", p, &p.multiply(&z, &x), &(p.multiply(&x, &z).scale(&q(2)) + NCPoly::one())));
            out.push(rec("qp", "z X* = q^2 X* z", p, &p.multiply(&z, &xs), &p.multiply(&xs, &z).scale(&q(2))));
            out.push(rec("qp", "z* X = q^-2 X z*", p, &p.multiply(&zs, &x), &p.multiply(&x, &zs).scale(&q(-2))));
            out.push(rec(
                "qp",
                "z* X* = q^-2 X* z* - q^-2",
                p,
                &p.multiply(&zs, &xs),
                &(p.multiply(&xs, &zs).scale(&q(-2)) - NCPoly::scalar(q(-2))),
            ));
            out.push(rec("qp", "X* = -q^-2 Y", p, &xs, &self.y_element().scale(&-q(-2))));
        }

        // qrrel: Q and R commute with every localized coordinate generator.
        {
            let p = &self.su_slloc_r.cross.pres;
            let qe = self.q_element();
            let re = self.r_element();
            for gname in ["a", "d", "b", "b^-1", "c", "c^-1"] {
                let g = p.gen(gname);
                out.push(rec("qrrel", format!("[Q, {gname}] = 0"), p, &p.commutator(&qe, &g), &NCPoly::zero()));
                out.push(rec("qrrel", format!("[R, {gname}] = 0"), p, &p.commutator(&re, &g), &NCPoly::zero()));
            }
        }

        // krel: coordinates against K in the localized cross product.
        {
            let p = &self.su_slloc_r.cross.pres;
            let m2 = |x: &str, y: &str| p.multiply(&p.gen(x), &p.gen(y));
            out.push(rec("krel", "a K = q^(-1/2) K a", p, &m2("a", "K"), &m2("K", "a").scale(&qh(-1))));
            out.push(rec("krel", "b K = q^(-1/2) K b", p, &m2("b", "K"), &m2("K", "b").scale(&qh(-1))));
            out.push(rec("krel", "c K = q^(1/2) K c", p, &m2("c", "K"), &m2("K", "c").scale(&qh(1))));
            out.push(rec("krel", "d K = q^(1/2) K d", p, &m2("d", "K"), &m2("K", "d").scale(&qh(1))));
        }

        // qrzrel: the Weyl-type relations of Q and R.
        {
            let p = &self.su_slloc_r.cross.pres;
            let qe = self.q_element();
            let re = self.r_element();
            let k = p.gen("K");
            out.push(rec("qrzrel", "K Q = q Q K", p, &p.multiply(&k, &qe), &p.multiply(&qe, &k).scale(&q(1))));
            out.push(rec("qrzrel", "K R = q^-1 R K", p, &p.multiply(&k, &re), &p.multiply(&re, &k).scale(&q(-1))));
            out.push(rec(
                "qrzrel",
                "Q R - q^2 R Q = 1 - q^2",
                p,
                &(p.multiply(&qe, &re) - p.multiply(&re, &qe).scale(&q(2))),
                &NCPoly::scalar(QScalar::one() - q(2)),
            ));
        }

        // efdef: E and F recovered from Q and R.
        {
            let p = &self.su_slloc_r.cross.pres;
            let qe = self.q_element();
            let re = self.r_element();
            let k = p.gen("K");
            let ki = p.gen("K^-1");
            let cia = p.multiply(&p.gen("c^-1"), &p.gen("a"));
            let dbi = p.multiply(&p.gen("d"), &p.gen("b^-1"));
            let e_rhs = (p.multiply(&k, &qe) + p.multiply(&ki, &cia)).scale(&(-qh(-1) * lam_inv()));
            out.push(rec("efdef", "E = -q^(-1/2) lam^-1 (K Q + K^-1 c^-1 a)", p, &p.gen("E"), &e_rhs));
            let f_rhs = (p.multiply(&re, &k) + p.multiply(&dbi, &ki).scale(&q(1))).scale(&(qh(-1) * lam_inv()));
            out.push(rec("efdef", "F = q^(-1/2) lam^-1 (R K + q d b^-1 K^-1)", p, &p.gen("F"), &f_rhs));
        }

        // center: powers of b^-1 c are central in the localized coordinates.
        {
            let p = &self.o_slq2_loc.pres;
            let e1 = p.multiply(&p.gen("b^-1"), &p.gen("c"));
            for pow in 1..=2u32 {
                let e = p.power(&e1, pow);
                for gname in ["a", "d", "b", "b^-1", "c", "c^-1"] {
                    out.push(rec(
                        "center",
                        format!("[b^-{pow} c^{pow}, {gname}] = 0"),
                        p,
                        &p.commutator(&e, &p.gen(gname)),
                        &NCPoly::zero(),
                    ));
                }
            }
        }

        // zstrel: S, S*, T commute with the disc coordinates.
        {
            let p = &self.su_uq_r.cross.pres;
            let elems = [
                ("S", self.s_element()),
                ("S*", self.s_star_element()),
                ("T", self.t_element()),
            ];
            for (en, e) in &elems {
                for gname in ["z", "z*"] {
                    out.push(rec(
                        "zstrel",
                        format!("[{en}, {gname}] = 0"),
                        p,
                        &p.commutator(e, &p.gen(gname)),
                        &NCPoly::zero(),
                    ));
                }
            }
        }

        // strel: the Weyl-type relations of S and T.
        {
            let p = &self.su_uq_r.cross.pres;
            let s = self.s_element();
            let ss = self.s_star_element();
            let t = self.t_element();
            out.push(rec("strel", "S T = q^-2 T S", p, &p.multiply(&s, &t), &p.multiply(&t, &s).scale(&q(-2))));
            out.push(rec("strel", "S* T = q^2 T S*", p, &p.multiply(&ss, &t), &p.multiply(&t, &ss).scale(&q(2))));
            out.push(rec(
                "strel",
                "S* S - q^2 S S* = 1 - q^2",
                p,
                &(p.multiply(&ss, &s) - p.multiply(&s, &ss).scale(&q(2))),
                &NCPoly::scalar(QScalar::one() - q(2)),
            ));
        }

        out
    }

    /// Behaviour of the distinguished elements under the real-form stars.
    pub fn star_form_checks(&self) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        {
            let p = &self.su_slloc_r.cross.pres;
            let qe = self.q_element();
            let re = self.r_element();
            let su11 = self.cross_star(&self.su_slloc_r, "su11");
            let su2 = self.cross_star(&self.su_slloc_r, "su2");
            let sl2r = self.cross_star(&self.su_slloc_r, "sl2R");
            out.push(rec("starform", "Q* = R (su11)", p, &p.star(&su11, &qe), &re));
            out.push(rec("starform", "Q* = -R (su2)", p, &p.star(&su2, &qe), &-re.clone()));
            let qq = qe.scale(&qh(1));
            let rr = re.scale(&qh(-1));
            out.push(rec("starform", "(q^(1/2) Q)* = q^(1/2) Q (sl2R)", p, &p.star(&sl2r, &qq), &qq));
            out.push(rec("starform", "(q^(-1/2) R)* = q^(-1/2) R (sl2R)", p, &p.star(&sl2r, &rr), &rr));
        }
        {
            let p = &self.su_uq_r.cross.pres;
            let st = self.cross_star(&self.su_uq_r, "su11");
            out.push(rec("starform", "star of S is S* (su11)", p, &p.star(&st, &self.s_element()), &self.s_star_element()));
            out.push(rec("starform", "T* = T (su11)", p, &p.star(&st, &self.t_element()), &self.t_element()));
        }
        out
    }

    /// The coideal maps behind Q, R, S, S*, T: each intertwines the right
    /// action and reproduces its element.
    pub fn coideal_checks(&self) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        let li = lam_inv();
        let usl = &self.uq_sl2.pres;
        let (e, f, k) = (usl.gen_id("E"), usl.gen_id("F"), usl.gen_id("K"));
        let instances: Vec<(&'static str, &CrossAlg, Word, NCPoly, bool, NCPoly, QScalar)> = {
            let loc = &self.o_slq2_loc.pres;
            let uq = &self.o_uq.pres;
            vec![
                (
                    "xi(E K) = q^(1/2) lam^-1 Q",
                    &self.su_slloc_r,
                    Word(vec![e, k]),
                    loc.multiply(&loc.gen("c^-1"), &loc.gen("a"))
                        .scale(&(-qh(-3) * li.clone())),
                    true,
                    self.q_element(),
                    qh(1) * li.clone(),
                ),
                (
                    "xi(F K) = -q^(-1/2) lam^-1 R",
                    &self.su_slloc_r,
                    Word(vec![f, k]),
                    loc.multiply(&loc.gen("d"), &loc.gen("b^-1"))
                        .scale(&(qh(1) * li.clone())),
                    true,
                    self.r_element(),
                    -qh(-1) * li.clone(),
                ),
                (
                    "xi(F K) = -q^(-1/2) lam^-1 S",
                    &self.su_uq_r,
                    Word(vec![f, k]),
                    uq.gen("z*").scale(&(qh(1) * li.clone())),
                    true,
                    self.s_element(),
                    -qh(-1) * li.clone(),
                ),
                (
                    "xi(E K) = q^(1/2) lam^-1 S*",
                    &self.su_uq_r,
                    Word(vec![e, k]),
                    uq.gen("z").scale(&(-qh(-1) * li.clone())),
                    true,
                    self.s_star_element(),
                    qh(1) * li,
                ),
                (
                    "xi(K^2) = T",
                    &self.su_uq_r,
                    Word(vec![k, k]),
                    NCPoly::one() - uq.multiply(&uq.gen("z*"), &uq.gen("z")),
                    false,
                    self.t_element(),
                    QScalar::one(),
                ),
            ]
        };
        for (name, cross, word, rho_val, with_unit, target, scale) in instances {
            let mut map = CoidealMap::default();
            map.rho.insert(word.clone(), rho_val);
            if with_unit {
                map.rho.insert(Word::empty(), NCPoly::one());
            }
            let ma = self.action(cross);
            out.push(rec_fails(
                "coideal",
                format!("intertwining for {name}"),
                map.verify_intertwines(&ma),
            ));
            let xi = map.xi(&cross.cross, usl, self.uq_sl2.hopf.as_ref().unwrap(), &NCPoly::from_word(word));
            out.push(rec("coideal", name, &cross.cross.pres, &xi, &target.scale(&scale)));
        }
        out
    }

    /// The flip maps between each right cross product and its left variant:
    /// relation-preserving both ways, and self-inverse.
    pub fn isomorphism_checks(&self) -> Vec<CheckRecord> {
        type Recipe = Vec<(&'static str, &'static str, QScalar)>;
        let one = QScalar::one();
        let maps: Vec<(&'static str, &CrossAlg, &CrossAlg, Recipe)> = vec![
            (
                "theta (cylinder)",
                &self.e2_eq2_r,
                &self.eq2_e2_l,
                vec![
                    ("E", "F", one.clone()),
                    ("F", "E", one.clone()),
                    ("K", "K^-1", one.clone()),
                    ("K^-1", "K", one.clone()),
                    ("v", "v", one.clone()),
                    ("v*", "v*", one.clone()),
                    ("n", "n*", one.clone()),
                    ("n*", "n", one.clone()),
                ],
            ),
            (
                "psi (plane)",
                &self.e2_cq_r,
                &self.cq_e2_l,
                vec![
                    ("E", "F", one.clone()),
                    ("F", "E", one.clone()),
                    ("K", "K^-1", one.clone()),
                    ("K^-1", "K", one.clone()),
                    ("z", "z", one.clone()),
                    ("z*", "z*", one.clone()),
                ],
            ),
            (
                "theta (localized)",
                &self.su_slloc_r,
                &self.slloc_su_l,
                vec![
                    ("E", "F", one.clone()),
                    ("F", "E", one.clone()),
                    ("K", "K^-1", one.clone()),
                    ("K^-1", "K", one.clone()),
                    ("a", "a", one.clone()),
                    ("d", "d", one.clone()),
                    ("b", "c", -q(1)),
                    ("c", "b", -q(-1)),
                    ("b^-1", "c^-1", -q(-1)),
                    ("c^-1", "b^-1", -q(1)),
                ],
            ),
            (
                "psi (disc)",
                &self.su_uq_r,
                &self.uq_su_l,
                vec![
                    ("E", "F", -one.clone()),
                    ("F", "E", -one.clone()),
                    ("K", "K^-1", one.clone()),
                    ("K^-1", "K", one.clone()),
                    ("z", "z", one.clone()),
                    ("z*", "z*", one),
                ],
            ),
        ];
        let mut out = Vec::new();
        for (name, src, dst, recipe) in maps {
            let sp = &src.cross.pres;
            let dp = &dst.cross.pres;
            let fwd = recipe_images(sp, dp, &recipe);
            let bwd = recipe_images(dp, sp, &recipe);
            out.push(rec_fails(
                "iso",
                format!("{name}: relations preserved forward"),
                verify_hom(sp, dp, &fwd),
            ));
            out.push(rec_fails(
                "iso",
                format!("{name}: relations preserved backward"),
                verify_hom(dp, sp, &bwd),
            ));
            let mut fails = Vec::new();
            for (gi, image) in fwd.iter().enumerate().take(sp.gen_count()) {
                let g = GenId(gi as u16);
                let round = apply_hom(sp, &bwd, image);
                if !sp.identity_residual(&round, &NCPoly::from_gen(g)).is_zero() {
                    fails.push(format!("round trip moves {}", sp.gen_name(g)));
                }
            }
            out.push(rec_fails("iso", format!("{name}: self-inverse"), fails));
        }
        out
    }

    /// The abstract q-Weyl pair relations hold for the concrete shift pair.
    pub fn u0_checks(&self) -> Vec<CheckRecord> {
        let u0 = &self.u0_cq.pres;
        let p = &self.e2_cq_r.cross.pres;
        let (x, xs) = self.shift_pair();
        let images: Vec<NCPoly> = (0..u0.gen_count())
            .map(|i| match u0.gen_name(GenId(i as u16)) {
                "X" => x.clone(),
                "X*" => xs.clone(),
                "z" => p.gen("z"),
                "z*" => p.gen("z*"),
                other => panic!("unexpected generator {other}"),
            })
            .collect();
        vec![rec_fails(
            "u0",
            "q-Weyl pair relations hold for the shift pair",
            verify_hom(u0, p, &images),
        )]
    }

    /// Everything exact in one list.
    pub fn all_symbolic_checks(&self) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        out.extend(self.hopf_axiom_checks(3));
        out.extend(self.star_checks());
        out.extend(self.module_algebra_checks());
        out.extend(self.cross_display_checks());
        out.extend(self.derived_identity_checks());
        out.extend(self.star_form_checks());
        out.extend(self.coideal_checks());
        out.extend(self.isomorphism_checks());
        out.extend(self.u0_checks());
        out
    }

    /// Confluence smoke test over every presentation in the family.
    pub fn confluence_checks(&self, max_len: usize, seed: u64, tries: usize) -> Vec<CheckRecord> {
        self.all_presentations()
            .into_iter()
            .map(|p| {
                let bad = p.confluence_smoke(max_len, seed, tries);
                let fails: Vec<String> = bad.iter().map(|w| p.format_word(w)).collect();
                rec_fails(
                    "confluence",
                    format!("{} up to length {}", p.name(), max_len),
                    fails,
                )
            })
            .collect()
    }
}

fn recipe_images(
    src: &Presentation,
    dst: &Presentation,
    recipe: &[(&str, &str, QScalar)],
) -> Vec<NCPoly> {
    (0..src.gen_count())
        .map(|i| {
            let nm = src.gen_name(GenId(i as u16));
            let (_, target, c) = recipe
                .iter()
                .find(|(n, _, _)| *n == nm)
                .unwrap_or_else(|| panic!("no image for generator {nm}"));
            dst.gen(target).scale(c)
        })
        .collect()
}

fn apply_hom(dst: &Presentation, images: &[NCPoly], x: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in &x.terms {
        let mut t = NCPoly::scalar(c.clone());
        for g in &w.0 {
            t = dst.multiply(&t, &images[g.0 as usize]);
        }
        out = out + t;
    }
    out
}

fn verify_hom(src: &Presentation, dst: &Presentation, images: &[NCPoly]) -> Vec<String> {
    let mut fails = Vec::new();
    for ((g1, g2), rhs) in src.rules() {
        let lhs_img = dst.multiply(&images[g1.0 as usize], &images[g2.0 as usize]);
        let rhs_img = apply_hom(dst, images, rhs);
        if !dst.identity_residual(&lhs_img, &rhs_img).is_zero() {
            fails.push(format!(
                "relation {} {} not preserved",
                src.gen_name(g1),
                src.gen_name(g2)
            ));
        }
    }
    fails
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failures(records: &[CheckRecord]) -> Vec<String> {
        records
            .iter()
            .filter(|r| !r.passed)
            .map(|r| format!("{}: {} ({})", r.suite, r.name, r.detail))
            .collect()
    }

    #[test]
    fn pairing_reproduces_known_values() {
        let cat = catalog();
        let pair = HopfPair {
            u: &cat.uq_e2.pres,
            hu: cat.uq_e2.hopf.as_ref().unwrap(),
            x: &cat.o_eq2.pres,
            hx: cat.o_eq2.hopf.as_ref().unwrap(),
            table: &cat.pairing_e2,
        };
        let x = &cat.o_eq2.pres;
        let nv = x.multiply(&x.gen("n"), &x.gen("v"));
        assert_eq!(pair.pair(&cat.uq_e2.pres.gen("F"), &nv), qh(1));
        let u = &cat.uq_e2.pres;
        let fk = u.multiply(&u.gen("F"), &u.gen("K"));
        assert_eq!(pair.pair(&fk, &nv), qh(1));
        assert_eq!(pair.pair(&u.gen("E"), &nv), QScalar::zero());
    }

    #[test]
    fn cylinder_action_oracle() {
        // (n n) <| F = (q^(1/2) + q^(-3/2)) v* n, worked out by the
        // coproduct legs F x K and K^-1 x F.
        let cat = catalog();
        let ma = cat.action(&cat.e2_eq2_r);
        let x = &cat.o_eq2.pres;
        let nn = x.multiply(&x.gen("n"), &x.gen("n"));
        let acted = ma.act(&cat.uq_e2.pres.gen("F"), &nn);
        let expected = x
            .multiply(&x.gen("v*"), &x.gen("n"))
            .scale(&(qh(1) + qh(-3)));
        assert!(x.identity_residual(&acted, &expected).is_zero());
    }

    #[test]
    fn disc_right_action_comes_from_the_twist() {
        let cat = catalog();
        let p = &cat.o_uq.pres;
        let z = p.gen_id("z");
        let e = cat.uq_sl2.pres.gen_id("E");
        let expected = NCPoly::monomial(Word(vec![z, z]), -qh(1));
        let got = &cat.su_uq_r.table.entries[&(e, z)];
        assert!(p.identity_residual(got, &expected).is_zero());
    }

    #[test]
    fn antipode_squares_to_conjugation_on_the_cylinder() {
        let cat = catalog();
        let p = &cat.o_eq2.pres;
        let h = cat.o_eq2.hopf.as_ref().unwrap();
        let n = p.gen("n");
        let s2 = h.antipode(p, &h.antipode(p, &n));
        assert!(p.identity_residual(&s2, &n.scale(&q(2))).is_zero());
    }

    #[test]
    fn hopf_axioms_hold() {
        let recs = catalog().hopf_axiom_checks(3);
        assert_eq!(failures(&recs), Vec::<String>::new());
    }

    #[test]
    fn stars_are_consistent() {
        let recs = catalog().star_checks();
        assert_eq!(failures(&recs), Vec::<String>::new());
    }

    #[test]
    fn module_algebra_laws_hold() {
        let recs = catalog().module_algebra_checks();
        assert_eq!(failures(&recs), Vec::<String>::new());
    }

    #[test]
    fn cross_displays_match() {
        let recs = catalog().cross_display_checks();
        assert_eq!(failures(&recs), Vec::<String>::new());
    }

    #[test]
    fn derived_identities_hold() {
        let recs = catalog().derived_identity_checks();
        assert_eq!(failures(&recs), Vec::<String>::new());
    }

    #[test]
    fn star_forms_match() {
        let recs = catalog().star_form_checks();
        assert_eq!(failures(&recs), Vec::<String>::new());
    }

    #[test]
    fn coideal_maps_reproduce_the_elements() {
        let recs = catalog().coideal_checks();
        assert_eq!(failures(&recs), Vec::<String>::new());
    }

    #[test]
    fn flip_isomorphisms_hold() {
        let recs = catalog().isomorphism_checks();
        assert_eq!(failures(&recs), Vec::<String>::new());
    }

    #[test]
    fn shift_pair_satisfies_the_weyl_relations() {
        let recs = catalog().u0_checks();
        assert_eq!(failures(&recs), Vec::<String>::new());
    }

    #[test]
    fn presentations_pass_a_short_confluence_smoke() {
        let recs = catalog().confluence_checks(3, 17, 2);
        assert_eq!(failures(&recs), Vec::<String>::new());
    }
}
