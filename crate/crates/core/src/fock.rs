//! Fermionic Fock space with Laurent-polynomial coefficients.
//!
//! `F-` is spanned by left-black diagrams and carries the right action in which
//! `E_i` removes one box of residue `i` and `F_i` adds one. `F+` is spanned by
//! right-black diagrams; its operators are the adjoints under the pairing
//! `<gamma|tau> = [tau is the colour inverse of gamma]`, so `E_i+` adds a
//! residue-`i` box to the upward partition of `tau`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::laurent::{rational, CoeffRing, LaurentPoly, Valuation};
use crate::maya::{Kind, MayaDiagram};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FockError {
    #[error("operator expects a vector on the {expected:?} side")]
    WrongSide { expected: Side },
    #[error("basis diagram of kind {found} does not belong to the {side:?} side")]
    KindMismatch { side: Side, found: Kind },
    #[error("box-count cap {cap} exceeded")]
    CapExceeded { cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn kind(self) -> Kind {
        match self {
            Side::Minus => Kind::LeftBlack,
            Side::Plus => Kind::RightBlack,
        }
    }

    fn of(kind: Kind) -> Side {
        match kind {
            Kind::LeftBlack => Side::Minus,
            Kind::RightBlack => Side::Plus,
        }
    }
}

/// Finite linear combination of basis diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector<C> {
    side: Side,
    terms: BTreeMap<MayaDiagram, LaurentPoly<C>>,
}

impl<C: CoeffRing> FockVector<C> {
    pub fn zero(side: Side) -> Self {
        FockVector { side, terms: BTreeMap::new() }
    }

    /// The basis vector of `d`, on the side matching its kind.
    pub fn basis(d: MayaDiagram) -> Self {
        Self::basis_with(d, LaurentPoly::one())
    }

    pub fn basis_with(d: MayaDiagram, coeff: LaurentPoly<C>) -> Self {
        let mut v = Self::zero(Side::of(d.kind()));
        v.accumulate(d, coeff);
        v
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &MayaDiagram) -> LaurentPoly<C> {
        self.terms.get(d).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MayaDiagram, &LaurentPoly<C>)> {
        self.terms.iter()
    }

    /// Adds `coeff * d`. Panics if `d` has the wrong kind for this side.
    pub fn accumulate(&mut self, d: MayaDiagram, coeff: LaurentPoly<C>) {
        assert_eq!(d.kind(), self.side.kind(), "basis diagram of the wrong kind");
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.get(&d) {
            Some(prev) => prev.add(&coeff),
            None => coeff,
        };
        if sum.is_zero() {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.side, other.side);
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.accumulate(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, p: &LaurentPoly<C>) -> Self {
        let mut out = Self::zero(self.side);
        for (d, c) in &self.terms {
            out.accumulate(d.clone(), c.mul(p));
        }
        out
    }

    /// Applies `f` to every basis diagram and re-labels (e.g. by a σ-shift).
    pub fn map_basis(&self, f: impl Fn(&MayaDiagram) -> MayaDiagram) -> Self {
        let mut out = Self::zero(self.side);
        for (d, c) in &self.terms {
            out.accumulate(f(d), c.clone());
        }
        out
    }

    fn check_side(&self, expected: Side) -> Result<(), FockError> {
        if self.side != expected {
            return Err(FockError::WrongSide { expected });
        }
        Ok(())
    }

    /// Linear extension of a basis map sending each diagram to a sum of
    /// diagrams with coefficient one.
    fn linear_step(&self, moves: impl Fn(&MayaDiagram) -> Vec<MayaDiagram>) -> Self {
        let mut out = Self::zero(self.side);
        for (d, c) in &self.terms {
            for target in moves(d) {
                out.accumulate(target, c.clone());
            }
        }
        out
    }

    /// JSON rendering as a list of `{diagram, coeff}` entries.
    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .terms
            .iter()
            .map(|(d, c)| serde_json::json!({ "diagram": d, "coeff": c.to_json() }))
            .collect();
        serde_json::json!({ "side": self.side, "terms": serde_json::Value::Array(entries) })
    }
}

fn residue_labels(labels: Vec<i64>, i: usize, n: usize) -> impl Iterator<Item = i64> {
    labels.into_iter().filter(move |l| l.rem_euclid(n as i64) as usize == i)
}

fn remove_one(d: &MayaDiagram, i: usize, n: usize) -> Vec<MayaDiagram> {
    residue_labels(d.removable_labels(), i, n).filter_map(|l| d.remove_box(l)).collect()
}

fn add_one(d: &MayaDiagram, i: usize, n: usize) -> Vec<MayaDiagram> {
    residue_labels(d.addable_labels(), i, n).filter_map(|l| d.add_box(l)).collect()
}

/// `v E_i` on `F-`: remove one residue-`i` box.
pub fn e_act<C: CoeffRing>(v: &FockVector<C>, i: usize, n: usize) -> Result<FockVector<C>, FockError> {
    v.check_side(Side::Minus)?;
    Ok(v.linear_step(|d| remove_one(d, i, n)))
}

/// `v F_i` on `F-`: add one residue-`i` box.
pub fn f_act<C: CoeffRing>(v: &FockVector<C>, i: usize, n: usize) -> Result<FockVector<C>, FockError> {
    v.check_side(Side::Minus)?;
    Ok(v.linear_step(|d| add_one(d, i, n)))
}

/// Dual of [`e_act`] on `F+`: add one residue-`i` box to the upward partition.
pub fn e_plus_act<C: CoeffRing>(v: &FockVector<C>, i: usize, n: usize) -> Result<FockVector<C>, FockError> {
    v.check_side(Side::Plus)?;
    Ok(v.linear_step(|d| add_one(d, i, n)))
}

/// Dual of [`f_act`] on `F+`: remove one residue-`i` box.
pub fn f_plus_act<C: CoeffRing>(v: &FockVector<C>, i: usize, n: usize) -> Result<FockVector<C>, FockError> {
    v.check_side(Side::Plus)?;
    Ok(v.linear_step(|d| remove_one(d, i, n)))
}

/// Bilinear pairing of `F-` with `F+`.
pub fn pairing<C: CoeffRing>(
    minus: &FockVector<C>,
    plus: &FockVector<C>,
) -> Result<LaurentPoly<C>, FockError> {
    minus.check_side(Side::Minus)?;
    plus.check_side(Side::Plus)?;
    let mut acc = LaurentPoly::zero();
    for (d, c) in &minus.terms {
        if let Some(c2) = plus.terms.get(&d.dual()) {
            acc = acc.add(&c.mul(c2));
        }
    }
    Ok(acc)
}

/// The one-parameter action `x_i(p) = exp(p E_i)`, summed as
/// `sum_k E_i^k p^k / k!` until the terms vanish.
///
/// On `F+` the series adds boxes; `cap` bounds the box count of every basis
/// diagram produced and the call fails if a term would exceed it. `cap` is
/// ignored on `F-`, where each step strictly shrinks the partitions.
pub fn x_act<C: CoeffRing>(
    v: &FockVector<C>,
    i: usize,
    n: usize,
    p: &LaurentPoly<C>,
    cap: Option<usize>,
) -> Result<FockVector<C>, FockError> {
    let step = |w: &FockVector<C>| match v.side {
        Side::Minus => e_act(w, i, n),
        Side::Plus => e_plus_act(w, i, n),
    };
    if let Some((d, _)) = v.terms.iter().find(|(d, _)| d.kind() != v.side.kind()) {
        return Err(FockError::KindMismatch { side: v.side, found: d.kind() });
    }
    let mut acc = v.clone();
    let mut term = v.clone();
    let mut k: i64 = 0;
    loop {
        k += 1;
        let next = step(&term)?;
        if next.is_zero() {
            break;
        }
        if let (Side::Plus, Some(cap)) = (v.side, cap) {
            if next.terms.keys().any(|d| d.box_count() > cap) {
                return Err(FockError::CapExceeded { cap });
            }
        }
        term = next.scale(&p.scale_rational(&rational(1, k)));
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Minimum coefficient valuation over the support; `+inf` for zero.
pub fn vec_val<C: CoeffRing>(v: &FockVector<C>) -> Valuation {
    v.terms.values().map(LaurentPoly::val).min().unwrap_or(Valuation::Infinite)
}
