//! Buchberger's algorithm with the product and chain criteria, under a
//! cooperative work budget.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::field::Field;
use super::mpoly::{MPoly, Monomial, MonomialOrder, Vars};
use crate::budget::Budget;

/// Terms sorted by decreasing monomial.
#[derive(Clone, Debug)]
struct GPoly<E> {
    t: Vec<(Monomial, E)>,
}

impl<E: Clone> GPoly<E> {
    fn lm(&self) -> &Monomial {
        &self.t[0].0
    }
    fn lc(&self) -> &E {
        &self.t[0].1
    }
    fn is_zero(&self) -> bool {
        self.t.is_empty()
    }
}

struct Ctx<'a, F: Field> {
    k: &'a F,
    ord: MonomialOrder,
}

impl<'a, F: Field> Ctx<'a, F> {
    fn from_mpoly(&self, p: &MPoly<F::Elem>) -> GPoly<F::Elem> {
        let mut t: Vec<(Monomial, F::Elem)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        t.sort_by(|a, b| self.ord.cmp(&b.0, &a.0));
        GPoly { t }
    }

    fn to_mpoly(&self, vars: &Arc<Vars>, p: &GPoly<F::Elem>) -> MPoly<F::Elem> {
        MPoly::from_terms(vars, p.t.iter().cloned(), self.k)
    }

    fn monic(&self, p: GPoly<F::Elem>) -> GPoly<F::Elem> {
        if p.is_zero() {
            return p;
        }
        let li = self.k.inv(p.lc()).unwrap();
        GPoly { t: p.t.into_iter().map(|(m, c)| (m, self.k.mul(&c, &li))).collect() }
    }

    /// `a - c * x^m * b`.
    fn sub_mul(&self, a: &GPoly<F::Elem>, c: &F::Elem, m: &[u32], b: &GPoly<F::Elem>) -> GPoly<F::Elem> {
        let k = self.k;
        let mut out = Vec::with_capacity(a.t.len() + b.t.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |idx: usize| -> Monomial { b.t[idx].0.iter().zip(m).map(|(x, y)| x + y).collect() };
        let mut bj: Option<Monomial> = if b.t.is_empty() { None } else { Some(shifted(0)) };
        while i < a.t.len() || bj.is_some() {
            let ord = match (&bj, a.t.get(i)) {
                (None, _) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some(bm), Some((am, _))) => self.ord.cmp(am, bm),
            };
            match ord {
                Ordering::Greater => {
                    out.push(a.t[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let v = k.neg(&k.mul(c, &b.t[j].1));
                    out.push((bj.take().unwrap(), v));
                    j += 1;
                    bj = if j < b.t.len() { Some(shifted(j)) } else { None };
                }
                Ordering::Equal => {
                    let v = k.sub(&a.t[i].1, &k.mul(c, &b.t[j].1));
                    if !k.is_zero(&v) {
                        out.push((a.t[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                    bj = if j < b.t.len() { Some(shifted(j)) } else { None };
                }
            }
        }
        GPoly { t: out }
    }

    /// Full normal form of `p` modulo `g`; `None` when the budget runs out.
    fn normal_form<B: Budget>(&self, p: &GPoly<F::Elem>, g: &[GPoly<F::Elem>], budget: &mut B) -> Option<GPoly<F::Elem>> {
        let k = self.k;
        let mut p = p.clone();
        let mut rem: Vec<(Monomial, F::Elem)> = Vec::new();
        while !p.is_zero() {
            if !budget.tick(1) {
                return None;
            }
            let (lm, lc) = (p.lm().clone(), p.lc().clone());
            let red = g.iter().find(|h| divides(h.lm(), &lm));
            match red {
                Some(h) => {
                    let m: Monomial = lm.iter().zip(h.lm()).map(|(a, b)| a - b).collect();
                    let c = k.div(&lc, h.lc()).unwrap();
                    p = self.sub_mul(&p, &c, &m, h);
                }
                None => {
                    rem.push(p.t.remove(0));
                }
            }
        }
        Some(GPoly { t: rem })
    }

    fn spoly(&self, a: &GPoly<F::Elem>, b: &GPoly<F::Elem>) -> GPoly<F::Elem> {
        let l = lcm(a.lm(), b.lm());
        let ma: Monomial = l.iter().zip(a.lm()).map(|(x, y)| x - y).collect();
        let mb: Monomial = l.iter().zip(b.lm()).map(|(x, y)| x - y).collect();
        let k = self.k;
        let ca = k.inv(a.lc()).unwrap();
        let cb = k.inv(b.lc()).unwrap();
        let zero = GPoly { t: vec![] };
        let ta = self.sub_mul(&zero, &k.neg(&ca), &ma, a);
        self.sub_mul(&ta, &cb, &mb, b)
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

#[derive(Clone, Debug)]
pub struct GroebnerResult<E> {
    pub basis: Vec<MPoly<E>>,
    /// False when the budget expired; the basis is then only a partial
    /// generating set and proves nothing about the ideal.
    pub completed: bool,
    pub steps: u64,
}

/// Gröbner basis of the ideal generated by `gens`; reduced and monic when completed.
pub fn groebner_basis<F: Field, B: Budget>(
    gens: &[MPoly<F::Elem>],
    order: MonomialOrder,
    k: &F,
    budget: &mut B,
) -> GroebnerResult<F::Elem> {
    let ctx = Ctx { k, ord: order };
    let vars = match gens.first() {
        Some(g) => g.vars().clone(),
        None => return GroebnerResult { basis: vec![], completed: true, steps: 0 },
    };
    let start = budget.used();
    let mut g: Vec<GPoly<F::Elem>> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut pending: Vec<GPoly<F::Elem>> = gens.iter().filter(|p| !p.is_zero()).map(|p| ctx.monic(ctx.from_mpoly(p))).collect();
    let mut completed = true;

    'main: loop {
        while let Some(p) = pending.pop() {
            let r = match ctx.normal_form(&p, &g, budget) {
                None => {
                    g.push(p);
                    completed = false;
                    break 'main;
                }
                Some(r) => r,
            };
            if r.is_zero() {
                continue;
            }
            let r = ctx.monic(r);
            if r.lm().iter().all(|&e| e == 0) {
                let one = MPoly::one(&vars, k);
                return GroebnerResult { basis: vec![one], completed: true, steps: budget.used() - start };
            }
            let idx = g.len();
            g.push(r);
            for i in 0..idx {
                pairs.push((i, idx));
            }
        }
        if pairs.is_empty() {
            break;
        }
        // normal selection: smallest lcm first
        let (pi, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = lcm(g[a.0].lm(), g[a.1].lm());
                let lb = lcm(g[b.0].lm(), g[b.1].lm());
                ctx.ord.cmp(&la, &lb)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(pi);
        let (lmi, lmj) = (g[i].lm().clone(), g[j].lm().clone());
        if coprime(&lmi, &lmj) {
            continue;
        }
        let l = lcm(&lmi, &lmj);
        // chain criterion
        let chain = (0..g.len()).any(|m| {
            m != i
                && m != j
                && divides(g[m].lm(), &l)
                && !pairs.contains(&(i.min(m), i.max(m)))
                && !pairs.contains(&(j.min(m), j.max(m)))
        });
        if chain {
            continue;
        }
        if !budget.tick(1) {
            completed = false;
            break;
        }
        let s = ctx.spoly(&g[i], &g[j]);
        pending.push(s);
    }

    let basis = if completed {
        reduce_basis(&ctx, g)
    } else {
        g
    };
    let basis = basis.iter().map(|p| ctx.to_mpoly(&vars, p)).collect();
    GroebnerResult { basis, completed, steps: budget.used() - start }
}

fn reduce_basis<F: Field>(ctx: &Ctx<'_, F>, g: Vec<GPoly<F::Elem>>) -> Vec<GPoly<F::Elem>> {
    // drop elements whose leading monomial is divisible by another's
    let mut min: Vec<GPoly<F::Elem>> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(j, q)| {
            j != i && divides(q.lm(), p.lm()) && (q.lm() != p.lm() || j < i)
        });
        if !redundant {
            min.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(min.len());
    for i in 0..min.len() {
        let others: Vec<GPoly<F::Elem>> = min.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
        let mut unlimited = crate::budget::Unlimited::default();
        let r = ctx.normal_form(&min[i], &others, &mut unlimited).unwrap();
        out.push(ctx.monic(r));
    }
    out.sort_by(|a, b| ctx.ord.cmp(b.lm(), a.lm()));
    out
}

/// Normal form of `p` with respect to an arbitrary list (used to check bases).
pub fn reduce<F: Field>(p: &MPoly<F::Elem>, g: &[MPoly<F::Elem>], order: MonomialOrder, k: &F) -> MPoly<F::Elem> {
    let ctx = Ctx { k, ord: order };
    let gg: Vec<GPoly<F::Elem>> = g.iter().filter(|q| !q.is_zero()).map(|q| ctx.from_mpoly(q)).collect();
    let mut b = crate::budget::Unlimited::default();
    let r = ctx.normal_form(&ctx.from_mpoly(p), &gg, &mut b).unwrap();
    ctx.to_mpoly(p.vars(), &r)
}

/// S-polynomial of two polynomials under `order`.
pub fn s_polynomial<F: Field>(a: &MPoly<F::Elem>, b: &MPoly<F::Elem>, order: MonomialOrder, k: &F) -> MPoly<F::Elem> {
    let ctx = Ctx { k, ord: order };
    let s = ctx.spoly(&ctx.from_mpoly(a), &ctx.from_mpoly(b));
    ctx.to_mpoly(a.vars(), &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{PrimeField, Rationals};
    use crate::budget::StepBudget;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn p(v: &Arc<Vars>, ts: &[(&[u32], i64)]) -> MPoly<BigRational> {
        MPoly::from_terms(v, ts.iter().map(|(m, c)| (m.to_vec(), q(*c))), &Rationals)
    }

    #[test]
    fn documented_examples() {
        let v = Vars::new(&["x", "y"]);
        let k = Rationals;
        let ord = MonomialOrder::DegRevLex;
        let x = p(&v, &[(&[1, 0], 1)]);
        let y = p(&v, &[(&[0, 1], 1)]);
        let r = groebner_basis(&[x.clone(), y.clone()], ord, &k, &mut StepBudget::new(1000));
        assert!(r.completed);
        assert_eq!(r.basis, vec![x.clone(), y.clone()]);

        let a = p(&v, &[(&[2, 0], 1), (&[0, 0], -1)]);
        let b = p(&v, &[(&[1, 0], 1), (&[0, 0], -1)]);
        let r = groebner_basis(&[a, b.clone()], ord, &k, &mut StepBudget::new(1000));
        assert!(r.completed);
        assert_eq!(r.basis, vec![b]);

        let c = p(&v, &[(&[1, 1], 1), (&[0, 0], -1)]);
        let r = groebner_basis(&[c, x], ord, &k, &mut StepBudget::new(1000));
        assert!(r.completed);
        assert_eq!(r.basis, vec![MPoly::one(&v, &k)]);
    }

    #[test]
    fn zero_budget_is_incomplete() {
        let v = Vars::new(&["x", "y"]);
        let a = p(&v, &[(&[2, 0], 1), (&[0, 1], -1)]);
        let b = p(&v, &[(&[1, 1], 1), (&[0, 0], -1)]);
        let r = groebner_basis(&[a, b], MonomialOrder::DegRevLex, &Rationals, &mut StepBudget::new(0));
        assert!(!r.completed);
    }

    #[test]
    fn basis_property_cyclic3_mod_p() {
        let k = PrimeField::new(32003);
        let v = Vars::new(&["a", "b", "c"]);
        let f = |ts: &[(&[u32], i64)]| MPoly::from_terms(&v, ts.iter().map(|(m, c)| (m.to_vec(), k.from_i64(*c))), &k);
        let gens = vec![
            f(&[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)]),
            f(&[(&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[1, 0, 1], 1)]),
            f(&[(&[1, 1, 1], 1), (&[0, 0, 0], -1)]),
        ];
        for ord in [MonomialOrder::DegRevLex, MonomialOrder::Lex, MonomialOrder::Block(1)] {
            let r = groebner_basis(&gens, ord, &k, &mut StepBudget::new(100_000));
            assert!(r.completed);
            for g in &gens {
                assert!(reduce(g, &r.basis, ord, &k).is_zero());
            }
            for i in 0..r.basis.len() {
                for j in i + 1..r.basis.len() {
                    let s = s_polynomial(&r.basis[i], &r.basis[j], ord, &k);
                    assert!(reduce(&s, &r.basis, ord, &k).is_zero());
                }
            }
        }
    }
}
