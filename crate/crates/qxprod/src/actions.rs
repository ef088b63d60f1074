//! Module algebra actions of a Hopf algebra on a coordinate algebra, cross
//! product algebras built from them, and linear maps on coideals that
//! produce elements commuting with the coordinate part.
//!
//! Actions are stored on generator pairs and extended by the comodule
//! recursion: acting on a product splits the acting element through its
//! coproduct.  A left action composes `(fg) acts = f after g`; a right
//! action composes in the opposite order.

use std::collections::{BTreeMap, HashMap};

use crate::hopf::{split_tensor_word, HopfPair, HopfStructure};
use crate::ncalg::{GenId, NCPoly, Presentation, RewriteRule, Word};

/// Which side the Hopf algebra acts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Generator-level action values: `entries[(f, x)]` is the result of the
/// generator `f` acting on the generator `x`, as a polynomial in the
/// coordinate algebra.
#[derive(Debug)]
pub struct ActionTable {
    pub side: Side,
    pub entries: HashMap<(GenId, GenId), NCPoly>,
}

impl ActionTable {
    pub fn new(side: Side) -> ActionTable {
        ActionTable {
            side,
            entries: HashMap::new(),
        }
    }

    pub fn insert(&mut self, f: GenId, x: GenId, value: NCPoly) {
        self.entries.insert((f, x), value);
    }

    /// Derives the full generator table from a dual pairing:
    /// right action `x <| f = <f, x(1)> x(2)`, left action
    /// `f |> x = x(1) <f, x(2)>`.
    pub fn from_pairing(side: Side, pairing: &HopfPair) -> ActionTable {
        let mut table = ActionTable::new(side);
        for f in 0..pairing.u.gen_count() as u16 {
            for x in 0..pairing.x.gen_count() as u16 {
                let xp = NCPoly::from_gen(GenId(x));
                let dx = pairing.hx.coproduct(pairing.x, &xp);
                let mut value = NCPoly::zero();
                for (w, c) in &dx.terms {
                    let parts = split_tensor_word(w, pairing.x.gen_count(), 2);
                    let (l, r) = (
                        NCPoly::from_word(parts[0].clone()),
                        NCPoly::from_word(parts[1].clone()),
                    );
                    let fp = NCPoly::from_gen(GenId(f));
                    let term = match side {
                        Side::Right => r.scale(&(c * pairing.pair(&fp, &l))),
                        Side::Left => l.scale(&(c * pairing.pair(&fp, &r))),
                    };
                    value = value + term;
                }
                table.insert(GenId(f), GenId(x), value);
            }
        }
        table
    }
}

/// A Hopf algebra acting on a coordinate algebra through a generator table.
pub struct ModuleAction<'a> {
    pub u: &'a Presentation,
    pub hu: &'a HopfStructure,
    pub x: &'a Presentation,
    pub table: &'a ActionTable,
}

impl ModuleAction<'_> {
    pub fn side(&self) -> Side {
        self.table.side
    }

    /// Acts by an arbitrary element on an arbitrary element.  The acting
    /// polynomial may contain non-normal words; the action factors through
    /// the algebra, which [`verify_module_algebra`] checks.
    pub fn act(&self, f: &NCPoly, x: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (fw, fc) in &f.terms {
            let mut acc = x.clone();
            match self.table.side {
                Side::Right => {
                    for &g in fw.0.iter() {
                        acc = self.act_letter(g, &acc);
                    }
                }
                Side::Left => {
                    for &g in fw.0.iter().rev() {
                        acc = self.act_letter(g, &acc);
                    }
                }
            }
            out = out + acc.scale(fc);
        }
        out
    }

    fn act_letter(&self, f: GenId, x: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (xw, xc) in &x.terms {
            out = out + self.act_letter_word(f, xw).scale(xc);
        }
        out
    }

    fn act_letter_word(&self, f: GenId, xw: &Word) -> NCPoly {
        if xw.is_empty() {
            return NCPoly::scalar(self.hu.counit(&NCPoly::from_gen(f)));
        }
        if xw.len() == 1 {
            return self
                .table
                .entries
                .get(&(f, xw.0[0]))
                .unwrap_or_else(|| {
                    panic!(
                        "no action entry for {} on {}",
                        self.u.gen_name(f),
                        self.x.gen_name(xw.0[0])
                    )
                })
                .clone();
        }
        let head = NCPoly::from_word(Word(vec![xw.0[0]]));
        let rest = NCPoly::from_word(Word(xw.0[1..].to_vec()));
        let mut out = NCPoly::zero();
        for (l, r) in self.hu.coproduct_legs(f) {
            out = out + self.x.multiply(&self.act(l, &head), &self.act(r, &rest));
        }
        out
    }
}

/// Checks that the generator table defines an action of the algebra (the
/// acting side's relations are respected) that makes the coordinate algebra
/// a module algebra (the coordinate relations are respected under the
/// coproduct splitting).  Empty result means pass.
pub fn verify_module_algebra(ma: &ModuleAction) -> Vec<String> {
    let mut failures = Vec::new();
    for ((x1, x2), rhs) in ma.x.rules() {
        for f in 0..ma.u.gen_count() as u16 {
            let f = GenId(f);
            let mut sweedler = NCPoly::zero();
            for (l, r) in ma.hu.coproduct_legs(f) {
                sweedler = sweedler
                    + ma.x.multiply(
                        &ma.act(l, &NCPoly::from_gen(x1)),
                        &ma.act(r, &NCPoly::from_gen(x2)),
                    );
            }
            let direct = ma.act(&NCPoly::from_gen(f), rhs);
            if !ma.x.identity_residual(&sweedler, &direct).is_zero() {
                failures.push(format!(
                    "{} breaks relation {} {}",
                    ma.u.gen_name(f),
                    ma.x.gen_name(x1),
                    ma.x.gen_name(x2)
                ));
            }
        }
    }
    for ((f1, f2), rhs) in ma.u.rules() {
        for x in 0..ma.x.gen_count() as u16 {
            let xp = NCPoly::from_gen(GenId(x));
            let via_word = ma.act(&NCPoly::from_word(Word(vec![f1, f2])), &xp);
            let via_rhs = ma.act(rhs, &xp);
            if !ma.x.identity_residual(&via_word, &via_rhs).is_zero() {
                failures.push(format!(
                    "relation {} {} acts inconsistently on {}",
                    ma.u.gen_name(f1),
                    ma.u.gen_name(f2),
                    ma.x.gen_name(GenId(x))
                ));
            }
        }
    }
    failures
}

/// Checks that generator images define a map that is antimultiplicative,
/// a coalgebra homomorphism, and compatible with star through the antipode
/// (`* . S . phi = phi . * . S` on generators).  Such a map turns a left
/// action into a right action via `x <| f = phi(f) |> x`.
pub fn verify_twist_map(
    u: &Presentation,
    hu: &HopfStructure,
    phi: &[NCPoly],
    star: Option<&crate::ncalg::StarStructure>,
) -> Vec<String> {
    assert_eq!(phi.len(), u.gen_count());
    let mut failures = Vec::new();
    let apply = |x: &NCPoly| -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &x.terms {
            let mut term = NCPoly::scalar(c.clone());
            for &g in w.0.iter().rev() {
                term = u.multiply(&term, &phi[g.0 as usize]);
            }
            out = out + term;
        }
        out
    };
    for ((g1, g2), rhs) in u.rules() {
        let lhs = u.multiply(&phi[g2.0 as usize], &phi[g1.0 as usize]);
        if !u.identity_residual(&lhs, &apply(rhs)).is_zero() {
            failures.push(format!(
                "twist map breaks relation {} {}",
                u.gen_name(g1),
                u.gen_name(g2)
            ));
        }
    }
    let sq = hu.square(u);
    for g in 0..u.gen_count() as u16 {
        let g = GenId(g);
        let lhs = hu.coproduct(u, &phi[g.0 as usize]);
        let mut rhs = NCPoly::zero();
        for (l, r) in hu.coproduct_legs(g) {
            rhs = rhs
                + sq.multiply(
                    &u.embed_into_tensor(&apply(l), 0),
                    &u.embed_into_tensor(&apply(r), 1),
                );
        }
        if !sq.identity_residual(&lhs, &rhs).is_zero() {
            failures.push(format!(
                "twist map is not a coalgebra map on {}",
                u.gen_name(g)
            ));
        }
        if let Some(st) = star {
            let lhs = u.star(st, &hu.antipode(u, &phi[g.0 as usize]));
            let rhs = apply(&u.star(st, &hu.antipode(u, &NCPoly::from_gen(g))));
            if !u.identity_residual(&lhs, &rhs).is_zero() {
                failures.push(format!(
                    "twist map breaks star compatibility on {}",
                    u.gen_name(g)
                ));
            }
        }
    }
    failures
}

/// Builds the right action table `x <| f = phi(f) |> x` from a left action
/// and a twist map given on generators.
pub fn right_from_left(left: &ModuleAction, phi: &[NCPoly]) -> ActionTable {
    assert_eq!(left.side(), Side::Left);
    let mut table = ActionTable::new(Side::Right);
    for f in 0..left.u.gen_count() as u16 {
        for x in 0..left.x.gen_count() as u16 {
            let value = left.act(&phi[f as usize], &NCPoly::from_gen(GenId(x)));
            table.insert(GenId(f), GenId(x), value);
        }
    }
    table
}

/// A cross product algebra: the coordinate algebra and the acting Hopf
/// algebra glued along the action.  For a right action the Hopf letters
/// sort to the left (`x f = f(1) (x <| f(2))`); for a left action the
/// coordinate letters sort to the left (`f x = (f(1) |> x) f(2)`).
pub struct CrossProduct {
    pub pres: Presentation,
    pub side: Side,
    u_offset: u16,
    x_offset: u16,
    u_count: usize,
    x_count: usize,
}

impl CrossProduct {
    /// Embedding of the Hopf algebra part.
    pub fn embed_u(&self, f: &NCPoly) -> NCPoly {
        shift_poly(f, self.u_offset)
    }

    /// Embedding of the coordinate algebra part.
    pub fn embed_x(&self, x: &NCPoly) -> NCPoly {
        shift_poly(x, self.x_offset)
    }

    /// Splits a word into its Hopf algebra part and coordinate part, each in
    /// the ids of its own presentation.  Relative order within each part is
    /// preserved; normal words consist of one block per part.
    pub fn split_word(&self, w: &Word) -> (Word, Word) {
        let mut uw = Vec::new();
        let mut xw = Vec::new();
        for &g in &w.0 {
            let i = g.0;
            if i >= self.u_offset && (i as usize) < self.u_offset as usize + self.u_count {
                uw.push(GenId(i - self.u_offset));
            } else {
                xw.push(GenId(i - self.x_offset));
            }
        }
        (Word(uw), Word(xw))
    }

    /// The star structure of the cross product, combining stars of both
    /// parts; they must use the same scalar conjugation.
    pub fn combine_stars(
        &self,
        star_u: &crate::ncalg::StarStructure,
        star_x: &crate::ncalg::StarStructure,
    ) -> crate::ncalg::StarStructure {
        assert_eq!(star_u.conj, star_x.conj, "incompatible scalar conjugations");
        assert_eq!(star_u.images.len(), self.u_count);
        assert_eq!(star_x.images.len(), self.x_count);
        let mut images = vec![NCPoly::zero(); self.u_count + self.x_count];
        for (i, img) in star_u.images.iter().enumerate() {
            images[self.u_offset as usize + i] = self.embed_u(img);
        }
        for (i, img) in star_x.images.iter().enumerate() {
            images[self.x_offset as usize + i] = self.embed_x(img);
        }
        crate::ncalg::StarStructure {
            conj: star_u.conj,
            images,
        }
    }
}

fn shift_poly(x: &NCPoly, offset: u16) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in &x.terms {
        out.add_assign_term(
            Word(w.0.iter().map(|g| GenId(g.0 + offset)).collect()),
            c.clone(),
        );
    }
    out
}

/// Builds the cross product of the action's Hopf algebra and coordinate
/// algebra.  Generator names of the two parts must be disjoint.
pub fn build_cross_product(name: &str, ma: &ModuleAction) -> CrossProduct {
    let un = ma.u.gen_count();
    let xn = ma.x.gen_count();
    let u_names: Vec<String> = (0..un)
        .map(|i| ma.u.gen_name(GenId(i as u16)).to_string())
        .collect();
    let x_names: Vec<String> = (0..xn)
        .map(|i| ma.x.gen_name(GenId(i as u16)).to_string())
        .collect();
    for n in &u_names {
        assert!(!x_names.contains(n), "generator name clash: {n}");
    }
    let (u_offset, x_offset, gens) = match ma.side() {
        Side::Right => {
            let mut g = u_names.clone();
            g.extend(x_names.clone());
            (0u16, un as u16, g)
        }
        Side::Left => {
            let mut g = x_names.clone();
            g.extend(u_names.clone());
            (xn as u16, 0u16, g)
        }
    };
    let mut rules = Vec::new();
    for ((a, b), rhs) in ma.u.rules() {
        rules.push(RewriteRule {
            lhs: (GenId(a.0 + u_offset), GenId(b.0 + u_offset)),
            rhs: shift_poly(rhs, u_offset),
        });
    }
    for ((a, b), rhs) in ma.x.rules() {
        rules.push(RewriteRule {
            lhs: (GenId(a.0 + x_offset), GenId(b.0 + x_offset)),
            rhs: shift_poly(rhs, x_offset),
        });
    }
    for f in 0..un as u16 {
        for x in 0..xn as u16 {
            let mut rhs = NCPoly::zero();
            for (l, r) in ma.hu.coproduct_legs(GenId(f)) {
                let (u_part, x_part) = match ma.side() {
                    // x f = f(1) (x <| f(2))
                    Side::Right => (l.clone(), ma.act(r, &NCPoly::from_gen(GenId(x)))),
                    // f x = (f(1) |> x) f(2)
                    Side::Left => (r.clone(), ma.act(l, &NCPoly::from_gen(GenId(x)))),
                };
                for (uw, uc) in &shift_poly(&u_part, u_offset).terms {
                    for (xw, xc) in &shift_poly(&x_part, x_offset).terms {
                        let word = match ma.side() {
                            Side::Right => {
                                let mut w = uw.0.clone();
                                w.extend_from_slice(&xw.0);
                                Word(w)
                            }
                            Side::Left => {
                                let mut w = xw.0.clone();
                                w.extend_from_slice(&uw.0);
                                Word(w)
                            }
                        };
                        rhs.add_assign_term(word, uc * xc);
                    }
                }
            }
            let lhs = match ma.side() {
                Side::Right => (GenId(x + x_offset), GenId(f + u_offset)),
                Side::Left => (GenId(f + u_offset), GenId(x + x_offset)),
            };
            rules.push(RewriteRule { lhs, rhs });
        }
    }
    let pres = Presentation::new(name, gens, rules);
    for (_, rhs) in pres.rules() {
        for w in rhs.terms.keys() {
            assert!(
                pres.is_normal(w),
                "cross product rule right-hand side not normal in {name}"
            );
        }
    }
    CrossProduct {
        pres,
        side: ma.side(),
        u_offset,
        x_offset,
        u_count: un,
        x_count: xn,
    }
}

/// A linear map on a right coideal of the Hopf algebra, given on normal
/// basis words.  When it intertwines the right action
/// (`x rho(v) = rho(v(1)) (x <| v(2))`), the element
/// `xi(v) = rho(v(1)) S(v(2))` of the cross product commutes with the whole
/// coordinate part.
#[derive(Debug, Default)]
pub struct CoidealMap {
    pub rho: BTreeMap<Word, NCPoly>,
}

impl CoidealMap {
    /// `xi(v) = rho(v(1)) S(v(2))` in the cross product.  Panics if a
    /// coproduct leg of `v` falls outside the map's domain.
    pub fn xi(
        &self,
        cross: &CrossProduct,
        u: &Presentation,
        hu: &HopfStructure,
        v: &NCPoly,
    ) -> NCPoly {
        let dv = hu.coproduct(u, v);
        let mut out = NCPoly::zero();
        for (w, c) in &dv.terms {
            let parts = split_tensor_word(w, u.gen_count(), 2);
            let rho_val = self.rho.get(&parts[0]).unwrap_or_else(|| {
                panic!(
                    "coproduct leg {} outside coideal map domain",
                    u.format_word(&parts[0])
                )
            });
            let s_right = hu.antipode(u, &NCPoly::from_word(parts[1].clone()));
            out = out
                + cross
                    .pres
                    .multiply(&cross.embed_x(rho_val), &cross.embed_u(&s_right))
                    .scale(c);
        }
        out
    }

    /// Checks the intertwining identity for every domain word against every
    /// coordinate generator; requires a right action.
    pub fn verify_intertwines(&self, ma: &ModuleAction) -> Vec<String> {
        assert_eq!(ma.side(), Side::Right);
        let mut failures = Vec::new();
        for (vw, rho_v) in &self.rho {
            let dv = ma.hu.coproduct(ma.u, &NCPoly::from_word(vw.clone()));
            for x in 0..ma.x.gen_count() as u16 {
                let xp = NCPoly::from_gen(GenId(x));
                let lhs = ma.x.multiply(&xp, rho_v);
                let mut rhs = NCPoly::zero();
                let mut domain_ok = true;
                for (w, c) in &dv.terms {
                    let parts = split_tensor_word(w, ma.u.gen_count(), 2);
                    let Some(rho_l) = self.rho.get(&parts[0]) else {
                        failures.push(format!(
                            "domain of map not closed under coproduct at {}",
                            ma.u.format_word(&parts[0])
                        ));
                        domain_ok = false;
                        break;
                    };
                    let acted = ma.act(&NCPoly::from_word(parts[1].clone()), &xp);
                    rhs = rhs + ma.x.multiply(rho_l, &acted).scale(c);
                }
                if domain_ok && !ma.x.identity_residual(&lhs, &rhs).is_zero() {
                    failures.push(format!(
                        "intertwining fails for {} against {}",
                        ma.u.format_word(vw),
                        ma.x.gen_name(GenId(x))
                    ));
                }
            }
        }
        failures
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::PairingTable;
    use crate::ncalg::RewriteRule;
    use crate::scalars::QScalar;

    fn circle(names: [&str; 2]) -> (Presentation, HopfStructure) {
        let (t, ti) = (GenId(0), GenId(1));
        let p = Presentation::new(
            format!("<{}>", names[0]),
            vec![names[0].into(), names[1].into()],
            vec![
                RewriteRule {
                    lhs: (t, ti),
                    rhs: NCPoly::one(),
                },
                RewriteRule {
                    lhs: (ti, t),
                    rhs: NCPoly::one(),
                },
            ],
        );
        let h = HopfStructure::new(
            &p,
            vec![
                vec![(p.gen(names[0]), p.gen(names[0]))],
                vec![(p.gen(names[1]), p.gen(names[1]))],
            ],
            vec![QScalar::one(), QScalar::one()],
            vec![p.gen(names[1]), p.gen(names[0])],
            vec![p.gen(names[1]), p.gen(names[0])],
        );
        (p, h)
    }

    fn plane() -> Presentation {
        let (z, zs) = (GenId(0), GenId(1));
        Presentation::new(
            "plane",
            vec!["z".into(), "z*".into()],
            vec![RewriteRule {
                lhs: (zs, z),
                rhs: NCPoly::monomial(Word(vec![z, zs]), QScalar::q_pow(2)),
            }],
        )
    }

    fn scaling_table(x: &Presentation, side: Side) -> ActionTable {
        let mut table = ActionTable::new(side);
        table.insert(GenId(0), GenId(0), x.gen("z").scale(&QScalar::q_pow(1)));
        table.insert(GenId(0), GenId(1), x.gen("z*").scale(&QScalar::q_pow(-1)));
        table.insert(GenId(1), GenId(0), x.gen("z").scale(&QScalar::q_pow(-1)));
        table.insert(GenId(1), GenId(1), x.gen("z*").scale(&QScalar::q_pow(1)));
        table
    }

    #[test]
    fn group_like_scaling_acts_on_products() {
        let (u, hu) = circle(["K", "K^-1"]);
        let x = plane();
        let table = scaling_table(&x, Side::Right);
        let ma = ModuleAction {
            u: &u,
            hu: &hu,
            x: &x,
            table: &table,
        };
        let z2 = x.power(&x.gen("z"), 2);
        assert_eq!(
            ma.act(&u.gen("K"), &z2),
            z2.scale(&QScalar::q_pow(2)),
            "group-likes scale monomials multiplicatively"
        );
        let mixed = x.multiply(&x.gen("z"), &x.gen("z*"));
        assert_eq!(ma.act(&u.gen("K"), &mixed), mixed);
        assert!(verify_module_algebra(&ma).is_empty());
    }

    #[test]
    fn broken_inverse_action_is_detected() {
        let (u, hu) = circle(["K", "K^-1"]);
        let x = plane();
        let mut table = scaling_table(&x, Side::Right);
        // K^-1 no longer undoes K.
        table.insert(GenId(1), GenId(0), x.gen("z").scale(&QScalar::q_pow(1)));
        let ma = ModuleAction {
            u: &u,
            hu: &hu,
            x: &x,
            table: &table,
        };
        let failures = verify_module_algebra(&ma);
        assert!(failures.iter().any(|f| f.contains("acts inconsistently")));
    }

    #[test]
    fn cross_product_sorts_hopf_letters_first() {
        let (u, hu) = circle(["K", "K^-1"]);
        let x = plane();
        let table = scaling_table(&x, Side::Right);
        let ma = ModuleAction {
            u: &u,
            hu: &hu,
            x: &x,
            table: &table,
        };
        let cross = build_cross_product("K-plane", &ma);
        let zk = cross
            .pres
            .multiply(&cross.embed_x(&x.gen("z")), &cross.embed_u(&u.gen("K")));
        let kz = cross
            .pres
            .multiply(&cross.embed_u(&u.gen("K")), &cross.embed_x(&x.gen("z")));
        assert_eq!(zk, kz.scale(&QScalar::q_pow(1)), "z K = q K z");
        assert!(cross.pres.confluence_smoke(4, 17, 2).is_empty());
    }

    #[test]
    fn left_cross_product_sorts_coordinates_first() {
        let (u, hu) = circle(["K", "K^-1"]);
        let x = plane();
        let table = scaling_table(&x, Side::Left);
        let ma = ModuleAction {
            u: &u,
            hu: &hu,
            x: &x,
            table: &table,
        };
        let cross = build_cross_product("plane-K", &ma);
        let kz = cross
            .pres
            .multiply(&cross.embed_u(&u.gen("K")), &cross.embed_x(&x.gen("z")));
        let zk = cross
            .pres
            .multiply(&cross.embed_x(&x.gen("z")), &cross.embed_u(&u.gen("K")));
        assert_eq!(kz, zk.scale(&QScalar::q_pow(1)), "K z = q z K");
    }

    #[test]
    fn pairing_derived_table_matches_hand_values() {
        let (u, hu) = circle(["K", "K^-1"]);
        let (x, hx) = circle(["v", "v*"]);
        let mut values = PairingTable::default();
        values.insert(GenId(0), GenId(0), QScalar::q_half_pow(1));
        values.insert(GenId(0), GenId(1), QScalar::q_half_pow(-1));
        values.insert(GenId(1), GenId(0), QScalar::q_half_pow(-1));
        values.insert(GenId(1), GenId(1), QScalar::q_half_pow(1));
        let pairing = HopfPair {
            u: &u,
            hu: &hu,
            x: &x,
            hx: &hx,
            table: &values,
        };
        let table = ActionTable::from_pairing(Side::Right, &pairing);
        assert_eq!(
            table.entries[&(GenId(0), GenId(0))],
            x.gen("v").scale(&QScalar::q_half_pow(1))
        );
        let ma = ModuleAction {
            u: &u,
            hu: &hu,
            x: &x,
            table: &table,
        };
        assert!(verify_module_algebra(&ma).is_empty());
    }

    #[test]
    fn coideal_map_intertwining_is_checked() {
        let (u, hu) = circle(["K", "K^-1"]);
        let x = plane();
        let table = scaling_table(&x, Side::Right);
        let ma = ModuleAction {
            u: &u,
            hu: &hu,
            x: &x,
            table: &table,
        };
        // rho(1) = 1 always intertwines; xi(1) = 1.
        let mut trivial = CoidealMap::default();
        trivial.rho.insert(Word::empty(), NCPoly::one());
        assert!(trivial.verify_intertwines(&ma).is_empty());
        let cross = build_cross_product("K-plane", &ma);
        assert_eq!(trivial.xi(&cross, &u, &hu, &NCPoly::one()), NCPoly::one());
        // rho(K) = z does not intertwine the scaling action.
        let mut bad = CoidealMap::default();
        bad.rho.insert(Word(vec![GenId(0)]), x.gen("z"));
        let failures = bad.verify_intertwines(&ma);
        assert!(failures.iter().any(|f| f.contains("intertwining fails")));
    }

    #[test]
    fn twist_map_validation() {
        let (u, hu) = circle(["K", "K^-1"]);
        // Identity on a commutative Hopf algebra passes.
        let phi = vec![u.gen("K"), u.gen("K^-1")];
        assert!(verify_twist_map(&u, &hu, &phi, None).is_empty());
        // Sending both generators to K cannot respect K K^-1 = 1.
        let broken = vec![u.gen("K"), u.gen("K")];
        let failures = verify_twist_map(&u, &hu, &broken, None);
        assert!(failures.iter().any(|f| f.contains("breaks relation")));
    }
}
