//! Maya diagrams, charged partitions and residue-coloured boxes.
//!
//! Slots carry integer labels. A diagram is stored as the finite set of labels
//! whose colour differs from the charge-zero vacuum of its kind:
//!
//! * left-black vacuum: black at labels `>= 0`, white at labels `< 0`;
//! * right-black vacuum: white at labels `>= 0`, black at labels `< 0`.
//!
//! The colour-inversion bijection between the two kinds keeps the flip set and
//! swaps the kind. A right-black diagram's (upward) partition is the partition
//! of its colour inverse, so every partition-level operation below only looks
//! at the flip set.
//!
//! For a partition with charge `c`, the box in row `r`, column `k` (both
//! 1-based) sits below slot `c + k - r`, and the white slots of the left-black
//! picture are exactly `{c + parts[r] - r : r >= 1}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MayaError {
    #[error("slot {0} is given two different colours")]
    ConflictingSlot(i64),
    #[error("partition parts must be positive and weakly decreasing: {0:?}")]
    InvalidParts(Vec<i64>),
    #[error("box ({row}, {col}) lies outside the partition")]
    BoxOutside { row: usize, col: usize },
    #[error("interval [{lo}, {hi}] is empty")]
    EmptyInterval { lo: i64, hi: i64 },
    #[error("interval [{lo}, {hi}] does not contain the support of the diagram")]
    SupportOutside { lo: i64, hi: i64 },
    #[error("expected a {expected} diagram")]
    WrongKind { expected: Kind },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    LeftBlack,
    RightBlack,
}

impl Kind {
    /// Colour of the charge-zero vacuum of this kind at `label`.
    pub fn vacuum_color(self, label: i64) -> Color {
        match (self, label >= 0) {
            (Kind::LeftBlack, true) | (Kind::RightBlack, false) => Color::Black,
            _ => Color::White,
        }
    }

    pub fn dual(self) -> Kind {
        match self {
            Kind::LeftBlack => Kind::RightBlack,
            Kind::RightBlack => Kind::LeftBlack,
        }
    }

    pub fn orientation(self) -> Orientation {
        match self {
            Kind::LeftBlack => Orientation::Downward,
            Kind::RightBlack => Orientation::Upward,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::LeftBlack => "left-black",
            Kind::RightBlack => "right-black",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Downward,
    Upward,
}

impl Orientation {
    pub fn kind(self) -> Kind {
        match self {
            Orientation::Downward => Kind::LeftBlack,
            Orientation::Upward => Kind::RightBlack,
        }
    }
}

/// A Maya diagram in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MayaDiagram {
    kind: Kind,
    /// Sorted, distinct labels whose colour differs from the kind's vacuum.
    flips: Vec<i64>,
}

impl MayaDiagram {
    pub fn vacuum(kind: Kind) -> Self {
        MayaDiagram { kind, flips: Vec::new() }
    }

    /// Builds a diagram from the set of labels that differ from the vacuum.
    pub fn from_flips(kind: Kind, flips: impl IntoIterator<Item = i64>) -> Self {
        let set: BTreeSet<i64> = flips.into_iter().collect();
        MayaDiagram { kind, flips: set.into_iter().collect() }
    }

    /// Builds a diagram from explicit slot colours; slots not listed take the
    /// vacuum colour. Entries that agree with the vacuum are dropped.
    pub fn from_colors(kind: Kind, slots: impl IntoIterator<Item = (i64, Color)>) -> Result<Self, MayaError> {
        let mut seen = std::collections::BTreeMap::new();
        for (label, color) in slots {
            if let Some(prev) = seen.insert(label, color) {
                if prev != color {
                    return Err(MayaError::ConflictingSlot(label));
                }
            }
        }
        let flips = seen
            .into_iter()
            .filter(|&(label, color)| kind.vacuum_color(label) != color)
            .map(|(label, _)| label);
        Ok(MayaDiagram::from_flips(kind, flips))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn flips(&self) -> &[i64] {
        &self.flips
    }

    pub fn is_vacuum(&self) -> bool {
        self.flips.is_empty()
    }

    fn is_flipped(&self, label: i64) -> bool {
        self.flips.binary_search(&label).is_ok()
    }

    pub fn color(&self, label: i64) -> Color {
        let vac = self.kind.vacuum_color(label);
        if self.is_flipped(label) {
            vac.flip()
        } else {
            vac
        }
    }

    /// Colour of `label` in the left-black picture (the diagram itself, or its
    /// colour inverse for right-black diagrams).
    fn frame_color(&self, label: i64) -> Color {
        let vac = Kind::LeftBlack.vacuum_color(label);
        if self.is_flipped(label) {
            vac.flip()
        } else {
            vac
        }
    }

    /// The deviating slots with their actual colours.
    pub fn deviations(&self) -> Vec<(i64, Color)> {
        self.flips.iter().map(|&l| (l, self.color(l))).collect()
    }

    /// Smallest interval containing every deviation, if any.
    pub fn support(&self) -> Option<Interval> {
        match (self.flips.first(), self.flips.last()) {
            (Some(&lo), Some(&hi)) => Some(Interval { lo, hi }),
            _ => None,
        }
    }

    /// Charge: the label of the first box, i.e. the vacuum this diagram
    /// deviates from finitely is black exactly at labels `>= charge`
    /// (left-black picture).
    pub fn charge(&self) -> i64 {
        let nonneg = self.flips.iter().filter(|&&l| l >= 0).count() as i64;
        nonneg - (self.flips.len() as i64 - nonneg)
    }

    /// Colour inversion. Left-black and right-black diagrams are paired by it.
    pub fn dual(&self) -> Self {
        MayaDiagram { kind: self.kind.dual(), flips: self.flips.clone() }
    }

    /// Symmetric difference of the flip set with `labels` (each toggled once).
    pub(crate) fn toggled(&self, labels: &[i64]) -> Self {
        let mut set: BTreeSet<i64> = self.flips.iter().copied().collect();
        for &l in labels {
            if !set.remove(&l) {
                set.insert(l);
            }
        }
        MayaDiagram { kind: self.kind, flips: set.into_iter().collect() }
    }

    /// Translates every slot by `shift` positions.
    pub fn shift(&self, shift: i64) -> Self {
        if shift == 0 {
            return self.clone();
        }
        let mut set: BTreeSet<i64> = self.flips.iter().map(|&l| l + shift).collect();
        let range = if shift > 0 { 0..shift } else { shift..0 };
        for l in range {
            if !set.remove(&l) {
                set.insert(l);
            }
        }
        MayaDiagram { kind: self.kind, flips: set.into_iter().collect() }
    }

    /// Representative of the σ-orbit (shifts by multiples of `n`) with charge
    /// in `0..n`.
    pub fn sigma_canonical(&self, n: usize) -> Self {
        let q = self.charge().div_euclid(n as i64);
        self.shift(-q * n as i64)
    }

    fn change_candidates(&self) -> Vec<i64> {
        let mut c: Vec<i64> = Vec::with_capacity(2 * self.flips.len() + 1);
        c.push(0);
        for &l in &self.flips {
            c.push(l);
            c.push(l + 1);
        }
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Labels of the boxes that can be removed from the diagram's partition.
    pub fn removable_labels(&self) -> Vec<i64> {
        self.change_candidates()
            .into_iter()
            .filter(|&l| self.frame_color(l) == Color::White && self.frame_color(l - 1) == Color::Black)
            .collect()
    }

    /// Labels of the boxes that can be added to the diagram's partition.
    pub fn addable_labels(&self) -> Vec<i64> {
        self.change_candidates()
            .into_iter()
            .filter(|&l| self.frame_color(l) == Color::Black && self.frame_color(l - 1) == Color::White)
            .collect()
    }

    pub fn remove_box(&self, label: i64) -> Option<Self> {
        (self.frame_color(label) == Color::White && self.frame_color(label - 1) == Color::Black)
            .then(|| self.toggled(&[label - 1, label]))
    }

    pub fn add_box(&self, label: i64) -> Option<Self> {
        (self.frame_color(label) == Color::Black && self.frame_color(label - 1) == Color::White)
            .then(|| self.toggled(&[label - 1, label]))
    }

    /// Every diagram obtained by removing a subset of the removable boxes of
    /// residue `residue` mod `n`, paired with the number of boxes removed.
    /// The unmodified diagram comes first.
    pub fn removal_subsets(&self, residue: usize, n: usize) -> Vec<(Self, usize)> {
        let labels: Vec<i64> = self
            .removable_labels()
            .into_iter()
            .filter(|l| l.rem_euclid(n as i64) as usize == residue)
            .collect();
        subsets_toggled(self, &labels)
    }

    /// As [`removal_subsets`](Self::removal_subsets) but adding boxes.
    pub fn addition_subsets(&self, residue: usize, n: usize) -> Vec<(Self, usize)> {
        let labels: Vec<i64> = self
            .addable_labels()
            .into_iter()
            .filter(|l| l.rem_euclid(n as i64) as usize == residue)
            .collect();
        subsets_toggled(self, &labels)
    }

    /// Number of boxes of the associated partition.
    pub fn box_count(&self) -> usize {
        to_partition(self).size()
    }
}

fn subsets_toggled(d: &MayaDiagram, labels: &[i64]) -> Vec<(MayaDiagram, usize)> {
    let k = labels.len();
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u32..(1u32 << k) {
        let mut toggles = Vec::with_capacity(2 * mask.count_ones() as usize);
        for (b, &l) in labels.iter().enumerate() {
            if mask & (1 << b) != 0 {
                toggles.push(l - 1);
                toggles.push(l);
            }
        }
        out.push((d.toggled(&toggles), mask.count_ones() as usize));
    }
    out
}

impl fmt::Debug for MayaDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.kind, self.flips)
    }
}

impl fmt::Display for MayaDiagram {
    /// Bead string over the support (plus one slot on each side), highest
    /// label on the left: `#` black, `o` white.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = match self.support() {
            Some(iv) => (iv.lo.min(-1) - 1, iv.hi.max(0) + 1),
            None => (-2, 1),
        };
        write!(f, "{} ", self.kind)?;
        for l in (lo..=hi).rev() {
            f.write_str(if self.color(l) == Color::Black { "#" } else { "o" })?;
            if l == 0 {
                f.write_str("|")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MayaJson {
    kind: Kind,
    deviations: Vec<(i64, Color)>,
}

impl Serialize for MayaDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MayaJson { kind: self.kind, deviations: self.deviations() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MayaDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = MayaJson::deserialize(d)?;
        MayaDiagram::from_colors(raw.kind, raw.deviations).map_err(serde::de::Error::custom)
    }
}

/// Partition with a charge, facing down (left-black) or up (right-black).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChargedPartition {
    parts: Vec<usize>,
    charge: i64,
    orientation: Orientation,
}

impl ChargedPartition {
    pub fn new(parts: Vec<usize>, charge: i64, orientation: Orientation) -> Result<Self, MayaError> {
        let ok = parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        if !ok {
            return Err(MayaError::InvalidParts(parts.iter().map(|&p| p as i64).collect()));
        }
        Ok(ChargedPartition { parts, charge, orientation })
    }

    pub fn vacuum(charge: i64, orientation: Orientation) -> Self {
        ChargedPartition { parts: Vec::new(), charge, orientation }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn charge(&self) -> i64 {
        self.charge
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    fn part(&self, row: usize) -> usize {
        self.parts.get(row.wrapping_sub(1)).copied().unwrap_or(0)
    }

    /// Every box with its slot label, row by row.
    pub fn boxes(&self) -> Vec<BoxRef> {
        let mut out = Vec::with_capacity(self.size());
        for (r, &len) in self.parts.iter().enumerate() {
            for col in 1..=len {
                out.push(self.box_ref(r + 1, col));
            }
        }
        out
    }

    fn box_ref(&self, row: usize, col: usize) -> BoxRef {
        let label = self.charge + col as i64 - row as i64;
        BoxRef { row, col, label }
    }

    fn without_box(&self, row: usize) -> Self {
        let mut parts = self.parts.clone();
        parts[row - 1] -= 1;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        ChargedPartition { parts, ..self.clone() }
    }
}

#[derive(Deserialize)]
struct PartitionJson {
    parts: Vec<i64>,
    charge: i64,
    orientation: Orientation,
}

impl<'de> Deserialize<'de> for ChargedPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PartitionJson::deserialize(d)?;
        if raw.parts.iter().any(|&p| p <= 0) {
            return Err(serde::de::Error::custom(MayaError::InvalidParts(raw.parts)));
        }
        let parts = raw.parts.iter().map(|&p| p as usize).collect();
        ChargedPartition::new(parts, raw.charge, raw.orientation).map_err(serde::de::Error::custom)
    }
}

/// A box of a charged partition and the slot it sits below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxRef {
    pub row: usize,
    pub col: usize,
    pub label: i64,
}

impl BoxRef {
    pub fn residue(&self, n: usize) -> usize {
        self.label.rem_euclid(n as i64) as usize
    }
}

/// Closed interval of slot labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Result<Self, MayaError> {
        if lo > hi {
            return Err(MayaError::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, label: i64) -> bool {
        self.lo <= label && label <= self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn from_partition(p: &ChargedPartition) -> MayaDiagram {
    let c = p.charge;
    let len = p.parts.len() as i64;
    let whites: BTreeSet<i64> =
        p.parts.iter().enumerate().map(|(r, &part)| c + part as i64 - (r as i64 + 1)).collect();
    // every label at or below `tail` is white
    let tail = c - len - 1;
    let lo = tail.min(-1);
    let hi = (c + p.part(1) as i64 - 1).max(0);
    let flips = (lo..=hi).filter(|&l| {
        let white = l <= tail || whites.contains(&l);
        white == (l >= 0)
    });
    MayaDiagram::from_flips(p.orientation.kind(), flips)
}

pub fn to_partition(m: &MayaDiagram) -> ChargedPartition {
    let c = m.charge();
    let nonneg_flips = m.flips.iter().rev().copied().take_while(|&l| l >= 0);
    let neg_whites = (i64::MIN..0).rev().filter(|&l| !m.is_flipped(l));
    let mut parts = Vec::new();
    for (r, w) in nonneg_flips.chain(neg_whites).enumerate() {
        let part = w - c + r as i64 + 1;
        if part <= 0 {
            break;
        }
        parts.push(part as usize);
    }
    ChargedPartition { parts, charge: c, orientation: m.kind.orientation() }
}

pub fn box_slot_label(row: usize, col: usize, p: &ChargedPartition) -> Result<i64, MayaError> {
    if row == 0 || col == 0 || col > p.part(row) {
        return Err(MayaError::BoxOutside { row, col });
    }
    Ok(p.box_ref(row, col).label)
}

pub fn removable_boxes(p: &ChargedPartition, residue: usize, n: usize) -> Vec<BoxRef> {
    (1..=p.parts.len())
        .filter(|&r| p.part(r) > p.part(r + 1))
        .map(|r| p.box_ref(r, p.part(r)))
        .filter(|b| b.residue(n) == residue)
        .collect()
}

pub fn addable_boxes(p: &ChargedPartition, residue: usize, n: usize) -> Vec<BoxRef> {
    (1..=p.parts.len() + 1)
        .filter(|&r| r == 1 || p.part(r - 1) > p.part(r))
        .map(|r| p.box_ref(r, p.part(r) + 1))
        .filter(|b| b.residue(n) == residue)
        .collect()
}

/// All partitions obtained by deleting a subset of the removable boxes of the
/// given residue; the empty subset (the partition itself) comes first.
pub fn removal_subsets(p: &ChargedPartition, residue: usize, n: usize) -> Vec<ChargedPartition> {
    let boxes = removable_boxes(p, residue, n);
    let mut out = Vec::with_capacity(1 << boxes.len());
    for mask in 0u32..(1u32 << boxes.len()) {
        let mut q = p.clone();
        // remove from the bottom rows up so row indices stay valid
        for (b, bx) in boxes.iter().enumerate().rev() {
            if mask & (1 << b) != 0 {
                q = q.without_box(bx.row);
            }
        }
        out.push(q);
    }
    out
}

pub fn sigma_shift(m: &MayaDiagram, n: i64) -> MayaDiagram {
    m.shift(n)
}

/// Right-black diagram black below label `i` and white from `i` upward.
pub fn lambda_i(i: i64) -> MayaDiagram {
    let flips: Vec<i64> = if i >= 0 { (0..i).collect() } else { (i..0).collect() };
    MayaDiagram::from_flips(Kind::RightBlack, flips)
}

/// `lambda_i(i)` with the colours of slots `i - 1` and `i` exchanged.
pub fn s_i_lambda_i(i: i64) -> MayaDiagram {
    lambda_i(i).toggled(&[i - 1, i])
}

/// The left-black diagram agreeing with `t` on `interval` and colour-inverted
/// outside it.
pub fn invert_outside(t: &MayaDiagram, interval: Interval) -> Result<MayaDiagram, MayaError> {
    if t.kind != Kind::RightBlack {
        return Err(MayaError::WrongKind { expected: Kind::RightBlack });
    }
    if t.flips.iter().any(|&l| !interval.contains(l)) {
        return Err(MayaError::SupportOutside { lo: interval.lo, hi: interval.hi });
    }
    let flips = (interval.lo..=interval.hi).filter(|l| !t.is_flipped(*l));
    Ok(MayaDiagram::from_flips(Kind::LeftBlack, flips))
}

/// All partitions of `total` in reverse lexicographic order.
pub fn partitions_of(total: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, &mut Vec::new(), &mut out);
    out
}

/// σ-canonical left-black diagrams (charge in `0..n`) with at most
/// `max_boxes` boxes, ordered by charge, then size, then reverse-lex parts.
pub fn canonical_diagrams(n: usize, max_boxes: usize) -> Vec<MayaDiagram> {
    let mut out = Vec::new();
    for charge in 0..n as i64 {
        for size in 0..=max_boxes {
            for parts in partitions_of(size) {
                let p = ChargedPartition { parts, charge, orientation: Orientation::Downward };
                out.push(from_partition(&p));
            }
        }
    }
    out
}
