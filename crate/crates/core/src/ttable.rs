//! Transposition table for fully evaluated MAX positions.
//!
//! Two move histories that bind the same digits to the same variables reach
//! the same game position. Keys therefore ignore move order: a key is the
//! set of bindings, sorted by variable name and packed one nibble per
//! variable (`0` for unbound, `digit + 1` otherwise).

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use thiserror::Error;

use crate::expr::Expression;
use crate::tree::Position;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("position has a pending digit; only MAX nodes have keys")]
    NotMaxNode,
    #[error("table belongs to expression {table:?}, not {requested:?}")]
    ExpressionMismatch { table: String, requested: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionKey(u64);

impl PositionKey {
    pub const ROOT: PositionKey = PositionKey(0);

    pub fn raw(self) -> u64 {
        self.0
    }

    /// The bindings behind this key, sorted by variable name.
    pub fn bindings(self, expr: &Expression) -> Vec<(String, u8)> {
        let mut names: Vec<&String> = expr.variables().iter().collect();
        names.sort();
        names
            .into_iter()
            .enumerate()
            .filter_map(|(rank, name)| {
                let nibble = (self.0 >> (4 * rank)) & 0xF;
                (nibble != 0).then(|| (name.clone(), nibble as u8 - 1))
            })
            .collect()
    }
}

/// Per-expression mapping from variable index to the nibble shift of its key
/// slot.
#[derive(Debug, Clone)]
pub(crate) struct KeyLayout {
    shifts: Vec<u32>,
}

impl KeyLayout {
    pub(crate) fn new(expr: &Expression) -> Self {
        let vars = expr.variables();
        let shifts = vars
            .iter()
            .map(|v| 4 * vars.iter().filter(|w| *w < v).count() as u32)
            .collect();
        KeyLayout { shifts }
    }

    #[inline]
    pub(crate) fn component(&self, var: usize, digit: u8) -> u64 {
        (digit as u64 + 1) << self.shifts[var]
    }
}

/// Order-independent key of a MAX position.
pub fn canonical_key(pos: &Position) -> Result<PositionKey, TableError> {
    if !pos.is_max_node() {
        return Err(TableError::NotMaxNode);
    }
    let layout = KeyLayout::new(pos.expr());
    let key = pos
        .bindings()
        .iter()
        .map(|b| layout.component(pos.expr().variable_index(&b.variable).expect("bound variable"), b.digit))
        .sum();
    Ok(PositionKey(key))
}

impl From<u64> for PositionKey {
    fn from(raw: u64) -> Self {
        PositionKey(raw)
    }
}

/// A move of a principal variation, with the variable as an index into
/// [`Expression::variables`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PvStep {
    pub digit: u8,
    pub var: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TTEntry {
    pub value: Value,
    /// Optimal continuation from the keyed position.
    pub pv_suffix: Vec<PvStep>,
}

#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 = (self.0 ^ *b as u64).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u64(&mut self, n: u64) {
        // splitmix64 finalizer
        let mut z = n.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        self.0 = z ^ (z >> 31);
    }
}

/// Memo of MAX positions for one expression.
///
/// Unbounded unless a capacity is set; at capacity, new stores are rejected
/// rather than evicting existing entries.
#[derive(Debug, Clone)]
pub struct TranspositionTable {
    expression: String,
    entries: HashMap<PositionKey, TTEntry, BuildHasherDefault<KeyHasher>>,
    capacity: Option<usize>,
    rejected: u64,
}

impl TranspositionTable {
    pub fn new(expr: &Expression) -> Self {
        Self::with_capacity_limit(expr, None)
    }

    pub fn with_capacity_limit(expr: &Expression, capacity: Option<usize>) -> Self {
        TranspositionTable {
            expression: expr.source().to_string(),
            entries: HashMap::default(),
            capacity,
            rejected: 0,
        }
    }

    /// Errors unless this table was built for the same expression text.
    pub fn check_expression(&self, expr: &Expression) -> Result<(), TableError> {
        if self.expression == expr.source() {
            Ok(())
        } else {
            Err(TableError::ExpressionMismatch {
                table: self.expression.clone(),
                requested: expr.source().to_string(),
            })
        }
    }

    pub fn lookup(&self, key: PositionKey) -> Option<&TTEntry> {
        self.entries.get(&key)
    }

    /// Returns false when the table is full and the entry was dropped.
    pub fn store(&mut self, key: PositionKey, entry: TTEntry) -> bool {
        if let Some(cap) = self.capacity {
            if self.entries.len() >= cap && !self.entries.contains_key(&key) {
                self.rejected += 1;
                return false;
            }
        }
        self.entries.insert(key, entry);
        true
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rejected(&self) -> u64 {
        self.rejected
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PositionKey, &TTEntry)> {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Move;
    use crate::value::Rational;

    fn play(expr: &Expression, moves: &[(u8, &str)]) -> Position {
        let mut p = Position::root(expr.clone());
        for (d, v) in moves {
            p = p.apply_move(&Move::ProposeDigit(*d)).unwrap();
            p = p.apply_move(&Move::AssignVariable(v.to_string())).unwrap();
        }
        p
    }

    #[test]
    fn transposed_positions_share_a_key() {
        let e = Expression::parse("X*(Y-Z)").unwrap();
        let a = canonical_key(&play(&e, &[(2, "X"), (1, "Y")])).unwrap();
        let b = canonical_key(&play(&e, &[(1, "Y"), (2, "X")])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.bindings(&e), vec![("X".to_string(), 2), ("Y".to_string(), 1)]);
        let c = canonical_key(&play(&e, &[(1, "X"), (2, "Y")])).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn root_key_is_empty() {
        let e = Expression::parse("X*(Y-Z)").unwrap();
        let k = canonical_key(&Position::root(e.clone())).unwrap();
        assert_eq!(k, PositionKey::ROOT);
        assert!(k.bindings(&e).is_empty());
    }

    #[test]
    fn keys_sort_by_name_not_occurrence() {
        let e = Expression::parse("z + a").unwrap();
        let k = canonical_key(&play(&e, &[(4, "z")])).unwrap();
        // "a" takes the low nibble, "z" the next one
        assert_eq!(k.raw(), 5 << 4);
    }

    #[test]
    fn min_nodes_have_no_key() {
        let e = Expression::parse("X*(Y-Z)").unwrap();
        let p = play(&e, &[(5, "X")]).apply_move(&Move::ProposeDigit(3)).unwrap();
        assert_eq!(canonical_key(&p), Err(TableError::NotMaxNode));
    }

    #[test]
    fn store_and_lookup() {
        let e = Expression::parse("X+Y").unwrap();
        let mut tt = TranspositionTable::new(&e);
        let key = PositionKey::from(3);
        assert!(tt.lookup(key).is_none());
        let entry = TTEntry {
            value: Value::Finite(Rational::integer(11)),
            pv_suffix: vec![PvStep { digit: 9, var: 1 }],
        };
        assert!(tt.store(key, entry.clone()));
        assert_eq!(tt.lookup(key), Some(&entry));
        let invalid = TTEntry { value: Value::Invalid, pv_suffix: vec![] };
        assert!(tt.store(PositionKey::from(4), invalid.clone()));
        assert_eq!(tt.lookup(PositionKey::from(4)), Some(&invalid));
    }

    #[test]
    fn full_table_rejects_new_keys() {
        let e = Expression::parse("X+Y").unwrap();
        let mut tt = TranspositionTable::with_capacity_limit(&e, Some(1));
        let entry = TTEntry { value: Value::Invalid, pv_suffix: vec![] };
        assert!(tt.store(PositionKey::from(1), entry.clone()));
        assert!(!tt.store(PositionKey::from(2), entry.clone()));
        assert!(tt.store(PositionKey::from(1), entry));
        assert_eq!(tt.len(), 1);
        assert_eq!(tt.rejected(), 1);
    }

    #[test]
    fn table_is_scoped_to_expression_text() {
        let e = Expression::parse("X+Y").unwrap();
        let tt = TranspositionTable::new(&e);
        assert!(tt.check_expression(&e).is_ok());
        assert!(tt.check_expression(&Expression::parse("X-Y").unwrap()).is_err());
    }
}
