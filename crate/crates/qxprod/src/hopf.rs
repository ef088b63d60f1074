//! Hopf algebra structure on a presentation: coproduct, counit, antipode,
//! and dual pairings between two Hopf algebras.
//!
//! The coproduct is stored on generators as a list of tensor legs and
//! extended multiplicatively; axiom checks therefore test both the axioms on
//! a word basis and the compatibility of the structure maps with the
//! defining relations.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::ncalg::{GenId, NCPoly, Presentation, Word};
use crate::scalars::QScalar;

/// Splits a normal word of a tensor power into its per-copy base words.
/// Assumes letters are sorted by copy, which rewriting guarantees.
pub fn split_tensor_word(w: &Word, base_gens: usize, copies: usize) -> Vec<Word> {
    let n = base_gens as u16;
    let mut parts = vec![Vec::new(); copies];
    for &g in &w.0 {
        let copy = (g.0 / n) as usize;
        parts[copy].push(GenId(g.0 % n));
    }
    let mut expect = 0usize;
    for &g in &w.0 {
        let copy = (g.0 / n) as usize;
        assert!(copy >= expect, "tensor word not sorted by copy");
        expect = copy;
    }
    parts.into_iter().map(Word).collect()
}

/// Hopf structure data for a presentation, given on generators.
#[derive(Debug)]
pub struct HopfStructure {
    /// Tensor legs of the coproduct of each generator.
    coproducts: Vec<Vec<(NCPoly, NCPoly)>>,
    counits: Vec<QScalar>,
    antipodes: Vec<NCPoly>,
    antipode_invs: Vec<NCPoly>,
    square: OnceLock<Presentation>,
    cube: OnceLock<Presentation>,
}

impl HopfStructure {
    pub fn new(
        p: &Presentation,
        coproducts: Vec<Vec<(NCPoly, NCPoly)>>,
        counits: Vec<QScalar>,
        antipodes: Vec<NCPoly>,
        antipode_invs: Vec<NCPoly>,
    ) -> HopfStructure {
        let n = p.gen_count();
        assert_eq!(coproducts.len(), n);
        assert_eq!(counits.len(), n);
        assert_eq!(antipodes.len(), n);
        assert_eq!(antipode_invs.len(), n);
        HopfStructure {
            coproducts,
            counits,
            antipodes,
            antipode_invs,
            square: OnceLock::new(),
            cube: OnceLock::new(),
        }
    }

    /// The tensor square of the algebra, built once on first use.  `p` must
    /// be the presentation this structure was created for.
    pub fn square(&self, p: &Presentation) -> &Presentation {
        self.square.get_or_init(|| p.tensor_power(2))
    }

    /// The tensor cube, used by coassociativity checks.
    pub fn cube(&self, p: &Presentation) -> &Presentation {
        self.cube.get_or_init(|| p.tensor_power(3))
    }

    /// Coproduct of a generator as a polynomial in the tensor square.
    fn gen_coproduct(&self, p: &Presentation, g: GenId) -> NCPoly {
        let sq = self.square(p);
        let mut sum = NCPoly::zero();
        for (l, r) in &self.coproducts[g.0 as usize] {
            let piece = sq.multiply(&p.embed_into_tensor(l, 0), &p.embed_into_tensor(r, 1));
            sum = sum + piece;
        }
        sum
    }

    /// Coproduct, extended multiplicatively to polynomials; the result lives
    /// in [`HopfStructure::square`].
    pub fn coproduct(&self, p: &Presentation, x: &NCPoly) -> NCPoly {
        let sq = self.square(p);
        let mut out = NCPoly::zero();
        for (w, c) in &x.terms {
            let mut term = NCPoly::scalar(c.clone());
            for &g in &w.0 {
                term = sq.multiply(&term, &self.gen_coproduct(p, g));
            }
            out = out + term;
        }
        out
    }

    /// Counit, extended multiplicatively.
    pub fn counit(&self, x: &NCPoly) -> QScalar {
        let mut out = QScalar::zero();
        for (w, c) in &x.terms {
            let mut prod = c.clone();
            for &g in &w.0 {
                prod = prod * &self.counits[g.0 as usize];
            }
            out = out + prod;
        }
        out
    }

    /// Antipode, extended antimultiplicatively.
    pub fn antipode(&self, p: &Presentation, x: &NCPoly) -> NCPoly {
        self.anti_extend(p, x, &self.antipodes)
    }

    /// Inverse antipode, extended antimultiplicatively.
    pub fn antipode_inv(&self, p: &Presentation, x: &NCPoly) -> NCPoly {
        self.anti_extend(p, x, &self.antipode_invs)
    }

    fn anti_extend(&self, p: &Presentation, x: &NCPoly, images: &[NCPoly]) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &x.terms {
            let mut term = NCPoly::scalar(c.clone());
            for &g in w.0.iter().rev() {
                term = p.multiply(&term, &images[g.0 as usize]);
            }
            out = out + term;
        }
        out
    }

    /// Checks coassociativity, the counit and antipode laws, invertibility
    /// of the antipode, and compatibility of all structure maps with the
    /// defining relations, on every word of length at most `max_len`.
    /// Returns human-readable failure descriptions; empty means pass.
    pub fn verify_axioms(&self, p: &Presentation, max_len: usize) -> Vec<String> {
        let mut failures = Vec::new();
        let sq = self.square(p);
        let cube = self.cube(p);
        let n = p.gen_count();

        let place_square = |x: &NCPoly, copies: (usize, usize)| -> NCPoly {
            let mut out = NCPoly::zero();
            for (w, c) in &x.terms {
                let mapped: Vec<GenId> = w
                    .0
                    .iter()
                    .map(|&g| {
                        let (copy, base) = ((g.0 as usize) / n, g.0 as usize % n);
                        let target = if copy == 0 { copies.0 } else { copies.1 };
                        GenId((base + target * n) as u16)
                    })
                    .collect();
                out.add_assign_term(Word(mapped), c.clone());
            }
            cube.normal_form(&out)
        };

        for word in words_up_to(n, max_len) {
            // Axioms are linear, so the normal-word basis suffices.
            if !p.is_normal(&word) {
                continue;
            }
            let x = NCPoly::from_word(word.clone());
            let label = p.format_word(&word);
            let dx = self.coproduct(p, &x);

            let mut lhs = NCPoly::zero();
            let mut rhs = NCPoly::zero();
            let mut counit_l = NCPoly::zero();
            let mut counit_r = NCPoly::zero();
            let mut anti_l = NCPoly::zero();
            let mut anti_r = NCPoly::zero();
            for (w, c) in &dx.terms {
                let parts = split_tensor_word(w, n, 2);
                let (l, r) = (NCPoly::from_word(parts[0].clone()), parts[1].clone());
                let dl = place_square(&self.coproduct(p, &l), (0, 1));
                let dr = place_square(
                    &self.coproduct(p, &NCPoly::from_word(r.clone())),
                    (1, 2),
                );
                let r_at_2 = p.embed_into_tensor(&NCPoly::from_word(r.clone()), 2);
                let l_at_0 = p.embed_into_tensor(&l, 0);
                lhs = lhs + cube.multiply(&dl, &r_at_2).scale(c);
                rhs = rhs + cube.multiply(&l_at_0, &dr).scale(c);

                let r_poly = NCPoly::from_word(r);
                counit_l = counit_l + r_poly.scale(&(c * self.counit(&l)));
                counit_r = counit_r + l.scale(&(c * self.counit(&r_poly)));
                anti_l = anti_l + p.multiply(&self.antipode(p, &l), &r_poly).scale(c);
                anti_r = anti_r + p.multiply(&l, &self.antipode(p, &r_poly)).scale(c);
            }
            if cube.normal_form(&(lhs - rhs)) != NCPoly::zero() {
                failures.push(format!("coassociativity fails on {label}"));
            }
            if p.normal_form(&counit_l) != x {
                failures.push(format!("left counit law fails on {label}"));
            }
            if p.normal_form(&counit_r) != x {
                failures.push(format!("right counit law fails on {label}"));
            }
            let eps = NCPoly::scalar(self.counit(&x));
            if p.normal_form(&anti_l) != eps {
                failures.push(format!("left antipode law fails on {label}"));
            }
            if p.normal_form(&anti_r) != eps {
                failures.push(format!("right antipode law fails on {label}"));
            }
            if self.antipode_inv(p, &self.antipode(p, &x)) != x
                || self.antipode(p, &self.antipode_inv(p, &x)) != x
            {
                failures.push(format!("antipode inverse fails on {label}"));
            }
        }

        for ((g1, g2), rhs) in p.rules() {
            let label = format!(
                "relation {} {}",
                p.gen_name(g1),
                p.gen_name(g2)
            );
            let lhs_cop = sq.multiply(&self.gen_coproduct(p, g1), &self.gen_coproduct(p, g2));
            if sq.normal_form(&(&lhs_cop - &self.coproduct(p, rhs))) != NCPoly::zero() {
                failures.push(format!("coproduct breaks {label}"));
            }
            let eps_lhs = &self.counits[g1.0 as usize] * &self.counits[g2.0 as usize];
            if eps_lhs != self.counit(rhs) {
                failures.push(format!("counit breaks {label}"));
            }
            let s_lhs = p.multiply(
                &self.antipodes[g2.0 as usize],
                &self.antipodes[g1.0 as usize],
            );
            if p.normal_form(&(&s_lhs - &self.antipode(p, rhs))) != NCPoly::zero() {
                failures.push(format!("antipode breaks {label}"));
            }
            let si_lhs = p.multiply(
                &self.antipode_invs[g2.0 as usize],
                &self.antipode_invs[g1.0 as usize],
            );
            if p.normal_form(&(&si_lhs - &self.antipode_inv(p, rhs))) != NCPoly::zero() {
                failures.push(format!("inverse antipode breaks {label}"));
            }
        }
        failures
    }
}

/// All words over `n` generators of length 0..=`max_len`.
pub fn words_up_to(n: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..n as u16 {
                let mut v = w.0.clone();
                v.push(GenId(g));
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Generator-level values of a dual pairing between two Hopf algebras;
/// absent entries are zero.
#[derive(Debug, Default)]
pub struct PairingTable {
    pub values: HashMap<(GenId, GenId), QScalar>,
}

impl PairingTable {
    pub fn insert(&mut self, u: GenId, x: GenId, value: QScalar) {
        self.values.insert((u, x), value);
    }
}

/// A dual pairing `U x X -> scalars` between Hopf algebras, extended from
/// generator values by `<fg, x> = <f, x(1)><g, x(2)>` and
/// `<f, xy> = <f(1), x><f(2), y>`, with `<f, 1>` and `<1, x>` the counits.
pub struct HopfPair<'a> {
    pub u: &'a Presentation,
    pub hu: &'a HopfStructure,
    pub x: &'a Presentation,
    pub hx: &'a HopfStructure,
    pub table: &'a PairingTable,
}

impl HopfPair<'_> {
    pub fn pair(&self, f: &NCPoly, g: &NCPoly) -> QScalar {
        let mut out = QScalar::zero();
        for (fw, fc) in &f.terms {
            for (gw, gc) in &g.terms {
                out = out + fc * gc * self.pair_words(fw, gw);
            }
        }
        out
    }

    fn pair_words(&self, f: &Word, x: &Word) -> QScalar {
        if f.is_empty() {
            return self.hx.counit(&NCPoly::from_word(x.clone()));
        }
        if x.is_empty() {
            return self.hu.counit(&NCPoly::from_word(f.clone()));
        }
        if f.len() >= 2 {
            let head = Word(vec![f.0[0]]);
            let rest = Word(f.0[1..].to_vec());
            let dx = self.hx.coproduct(self.x, &NCPoly::from_word(x.clone()));
            let mut out = QScalar::zero();
            for (w, c) in &dx.terms {
                let parts = split_tensor_word(w, self.x.gen_count(), 2);
                out = out + c * self.pair_words(&head, &parts[0]) * self.pair_words(&rest, &parts[1]);
            }
            return out;
        }
        if x.len() >= 2 {
            let head = NCPoly::from_word(Word(vec![x.0[0]]));
            let rest = NCPoly::from_word(Word(x.0[1..].to_vec()));
            let mut out = QScalar::zero();
            for (l, r) in self.hu.coproduct_legs(f.0[0]) {
                out = out + self.pair(l, &head) * self.pair(r, &rest);
            }
            return out;
        }
        self.table
            .values
            .get(&(f.0[0], x.0[0]))
            .cloned()
            .unwrap_or_else(QScalar::zero)
    }
}

impl HopfStructure {
    /// The stored tensor legs of a generator's coproduct.
    pub fn coproduct_legs(&self, g: GenId) -> impl Iterator<Item = (&NCPoly, &NCPoly)> {
        self.coproducts[g.0 as usize].iter().map(|(l, r)| (l, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::RewriteRule;

    /// Group algebra of the integers: t, t^-1 group-like.
    fn circle() -> (Presentation, HopfStructure) {
        let (t, ti) = (GenId(0), GenId(1));
        let p = Presentation::new(
            "circle",
            vec!["t".into(), "t^-1".into()],
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
                vec![(p.gen("t"), p.gen("t"))],
                vec![(p.gen("t^-1"), p.gen("t^-1"))],
            ],
            vec![QScalar::one(), QScalar::one()],
            vec![p.gen("t^-1"), p.gen("t")],
            vec![p.gen("t^-1"), p.gen("t")],
        );
        (p, h)
    }

    #[test]
    fn group_like_powers() {
        let (p, h) = circle();
        let t2 = p.multiply(&p.gen("t"), &p.gen("t"));
        let sq = h.square(&p);
        let expected = sq.multiply(&p.embed_into_tensor(&t2, 0), &p.embed_into_tensor(&t2, 1));
        assert_eq!(h.coproduct(&p, &t2), expected);
        assert_eq!(h.counit(&t2), QScalar::one());
        assert_eq!(h.antipode(&p, &t2), p.power(&p.gen("t^-1"), 2));
    }

    #[test]
    fn axioms_hold_for_the_circle() {
        let (p, h) = circle();
        assert!(h.verify_axioms(&p, 3).is_empty());
    }

    #[test]
    fn wrong_antipode_is_detected() {
        let (p, _) = circle();
        let broken = HopfStructure::new(
            &p,
            vec![
                vec![(p.gen("t"), p.gen("t"))],
                vec![(p.gen("t^-1"), p.gen("t^-1"))],
            ],
            vec![QScalar::one(), QScalar::one()],
            vec![p.gen("t"), p.gen("t^-1")],
            vec![p.gen("t"), p.gen("t^-1")],
        );
        let failures = broken.verify_axioms(&p, 2);
        assert!(failures.iter().any(|f| f.contains("antipode law")));
    }

    #[test]
    fn pairing_of_group_likes_multiplies_values() {
        let (u, hu) = circle();
        let (x, hx) = circle();
        let mut table = PairingTable::default();
        // <t, t> = q^(1/2) and compatible values on inverses.
        table.insert(GenId(0), GenId(0), QScalar::q_half_pow(1));
        table.insert(GenId(0), GenId(1), QScalar::q_half_pow(-1));
        table.insert(GenId(1), GenId(0), QScalar::q_half_pow(-1));
        table.insert(GenId(1), GenId(1), QScalar::q_half_pow(1));
        let pairing = HopfPair {
            u: &u,
            hu: &hu,
            x: &x,
            hx: &hx,
            table: &table,
        };
        let t2 = u.power(&u.gen("t"), 2);
        let v2 = x.power(&x.gen("t"), 2);
        assert_eq!(pairing.pair(&t2, &v2), QScalar::q_pow(2));
        // <t t^-1, v> = counit consistency.
        let unit = u.multiply(&u.gen("t"), &u.gen("t^-1"));
        assert_eq!(pairing.pair(&unit, &x.gen("t")), QScalar::one());
        assert_eq!(
            pairing.pair(&u.gen("t"), &NCPoly::one()),
            QScalar::one()
        );
    }
}
