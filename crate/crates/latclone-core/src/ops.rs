//! Finitary operations on a ground set, stored as dense value tables.
//!
//! A table row-majors the argument tuples with the last variable running
//! fastest: the tuple `(x1, .., xn)` lives at index
//! `x1 * g^(n-1) + x2 * g^(n-2) + .. + xn`.

use std::sync::Arc;
use thiserror::Error;

/// Ground set elements fit in a byte; see `family::MAX_GROUND`.
pub type Val = u8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpError {
    #[error("arity must be at least 1")]
    ArityZero,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("argument position {pos} out of range for arity {arity}")]
    PositionOutOfRange { pos: usize, arity: usize },
    #[error("table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("table value {value} outside ground set of size {ground}")]
    ValueOutOfRange { value: Val, ground: usize },
    #[error("operations live on different ground sets: {a} vs {b}")]
    GroundMismatch { a: usize, b: usize },
}

/// An operation of some arity on `{0, .., ground-1}`. Equality and hashing
/// are extensional: two operations are the same exactly when their tables
/// agree. The table is shared, so clones are cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    arity: usize,
    ground: usize,
    table: Arc<[Val]>,
}

/// `ground^arity` with an overflow guard; table sizes stay desk-scale.
pub fn table_len(ground: usize, arity: usize) -> usize {
    ground.checked_pow(arity as u32).expect("table size overflow")
}

impl Operation {
    pub fn new(arity: usize, ground: usize, table: Vec<Val>) -> Result<Self, OpError> {
        if arity == 0 {
            return Err(OpError::ArityZero);
        }
        let expected = table_len(ground, arity);
        if table.len() != expected {
            return Err(OpError::TableSize { expected, got: table.len() });
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= ground) {
            return Err(OpError::ValueOutOfRange { value: bad, ground });
        }
        Ok(Operation { arity, ground, table: table.into() })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn table(&self) -> &[Val] {
        &self.table
    }

    pub(crate) fn shared_table(&self) -> Arc<[Val]> {
        Arc::clone(&self.table)
    }

    pub(crate) fn from_shared(arity: usize, ground: usize, table: Arc<[Val]>) -> Self {
        debug_assert_eq!(table.len(), table_len(ground, arity));
        Operation { arity, ground, table }
    }

    /// The projection onto position `pos` (1-based) among `arity` arguments.
    pub fn projection(ground: usize, arity: usize, pos: usize) -> Result<Self, OpError> {
        if arity == 0 {
            return Err(OpError::ArityZero);
        }
        if pos == 0 || pos > arity {
            return Err(OpError::PositionOutOfRange { pos, arity });
        }
        let len = table_len(ground, arity);
        let block = table_len(ground, arity - pos);
        let table: Vec<Val> = (0..len).map(|i| ((i / block) % ground) as Val).collect();
        Operation::new(arity, ground, table)
    }

    /// Which projection this table is, if any.
    pub fn as_projection(&self) -> Option<usize> {
        (1..=self.arity).find(|&pos| {
            let block = table_len(self.ground, self.arity - pos);
            self.table
                .iter()
                .enumerate()
                .all(|(i, &v)| v as usize == (i / block) % self.ground)
        })
    }

    pub fn index_of(&self, point: &[Val]) -> Result<usize, OpError> {
        if point.len() != self.arity {
            return Err(OpError::ArityMismatch { expected: self.arity, got: point.len() });
        }
        let mut idx = 0usize;
        for &x in point {
            if x as usize >= self.ground {
                return Err(OpError::ValueOutOfRange { value: x, ground: self.ground });
            }
            idx = idx * self.ground + x as usize;
        }
        Ok(idx)
    }

    pub fn eval(&self, point: &[Val]) -> Result<Val, OpError> {
        Ok(self.table[self.index_of(point)?])
    }

    /// Superposition `self(args[0](..), .., args[m-1](..))`. All inner
    /// operations must share an arity and a ground set.
    pub fn compose(&self, args: &[Operation]) -> Result<Operation, OpError> {
        if args.len() != self.arity {
            return Err(OpError::ArityMismatch { expected: self.arity, got: args.len() });
        }
        let inner_arity = args[0].arity;
        for a in args {
            if a.arity != inner_arity {
                return Err(OpError::ArityMismatch { expected: inner_arity, got: a.arity });
            }
            if a.ground != self.ground {
                return Err(OpError::GroundMismatch { a: self.ground, b: a.ground });
            }
        }
        let len = table_len(self.ground, inner_arity);
        let mut table = vec![0 as Val; len];
        let refs: Vec<&[Val]> = args.iter().map(|a| &a.table[..]).collect();
        compose_tables(&self.table, self.ground, &refs, &mut table);
        Operation::new(inner_arity, self.ground, table)
    }

    /// Whether the value can change when only the `pos`-th argument does.
    pub fn depends_on(&self, pos: usize) -> Result<bool, OpError> {
        if pos == 0 || pos > self.arity {
            return Err(OpError::PositionOutOfRange { pos, arity: self.arity });
        }
        let g = self.ground;
        let stride = table_len(g, self.arity - pos);
        for i in 0..self.table.len() {
            if (i / stride) % g != 0 {
                continue;
            }
            let base = self.table[i];
            for v in 1..g {
                if self.table[i + v * stride] != base {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Pads a unary operation with ignored arguments: the result has the
    /// given arity and applies `self` to the `pos`-th argument.
    pub fn add_dummies(&self, arity: usize, pos: usize) -> Result<Operation, OpError> {
        if self.arity != 1 {
            return Err(OpError::ArityMismatch { expected: 1, got: self.arity });
        }
        if pos == 0 || pos > arity {
            return Err(OpError::PositionOutOfRange { pos, arity });
        }
        let g = self.ground;
        let len = table_len(g, arity);
        let block = table_len(g, arity - pos);
        let table: Vec<Val> =
            (0..len).map(|i| self.table[(i / block) % g]).collect();
        Operation::new(arity, g, table)
    }
}

/// Composition kernel shared with the enumeration loops: writes
/// `f(args...)` into `out`, which must already have the right length. The
/// args are raw value tables of operations of the output arity.
pub(crate) fn compose_tables(f_table: &[Val], ground: usize, args: &[&[Val]], out: &mut [Val]) {
    match args {
        [a] => {
            for (o, &x) in out.iter_mut().zip(a.iter()) {
                *o = f_table[x as usize];
            }
        }
        [a, b] => {
            for i in 0..out.len() {
                let idx = a[i] as usize * ground + b[i] as usize;
                out[i] = f_table[idx];
            }
        }
        [a, b, c] => {
            for i in 0..out.len() {
                let idx =
                    (a[i] as usize * ground + b[i] as usize) * ground + c[i] as usize;
                out[i] = f_table[idx];
            }
        }
        _ => {
            for i in 0..out.len() {
                let mut idx = 0usize;
                for a in args {
                    idx = idx * ground + a[i] as usize;
                }
                out[i] = f_table[idx];
            }
        }
    }
}
