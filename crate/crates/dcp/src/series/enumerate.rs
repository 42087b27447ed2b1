//! Independent oracle: exhaustive depth-first enumeration of cluster
//! histories, column by column, accumulating exact probability weights.
//!
//! Every cluster history is a sequence of columns (width, midpoint); its
//! probability is a monomial p^a q^b p_w^c q_w^d and its size is the sum of
//! the column widths. The mean size is the weighted sum over all finite
//! histories. Branches whose accumulated p-exponent exceeds the truncation
//! order are pruned; this is exact because every cycle in the column state
//! space carries positive p-degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BivariateSeries, Seed};
use crate::error::{Error, Result};

/// One cluster column: width m and midpoint height y. Width 0 is the empty
/// column that ends a history.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Column {
    pub m: usize,
    pub y: usize,
}

/// Exponents of the monomial p^p q^q p_w^pw q_w^qw.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HistoryWeight {
    pub p: u32,
    pub q: u32,
    pub pw: u32,
    pub qw: u32,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Bulk,
    Adjacent,
    OnWall,
}

fn classify(m: usize, y: usize) -> Result<Class> {
    match () {
        _ if m >= 1 && y > m => Ok(Class::Bulk),
        _ if m >= 1 && y == m => Ok(Class::Adjacent),
        _ if m >= 1 && y + 1 == m => Ok(Class::OnWall),
        _ => Err(Error::InvalidSeed { m, y }),
    }
}

/// Weight of one transition, or an error for incompatible columns.
fn step_weight(from: Column, to: Column) -> Result<HistoryWeight> {
    let class = classify(from.m, from.y)?;
    let mut w = HistoryWeight::default();
    let dm = to.m as i64 - from.m as i64;
    let dy = to.y as i64 - from.y as i64;
    let death = to.m == 0;
    let ok = match (class, dm, dy) {
        (Class::Bulk, 1, 0) => {
            w.p = 2;
            true
        }
        (Class::Bulk, -1, 0) | (Class::Bulk, _, _) if death && from.m == 1 => {
            w.q = 2;
            true
        }
        (Class::Bulk, -1, 0) => {
            w.q = 2;
            true
        }
        (Class::Bulk, 0, 1) | (Class::Bulk, 0, -1) => {
            w.p = 1;
            w.q = 1;
            true
        }
        (Class::Adjacent, 1, 0) => {
            w.p = 1;
            w.pw = 1;
            true
        }
        (Class::Adjacent, _, _) if death && from.m == 1 => {
            w.q = 1;
            w.qw = 1;
            true
        }
        (Class::Adjacent, -1, 0) => {
            w.q = 1;
            w.qw = 1;
            true
        }
        (Class::Adjacent, 0, 1) => {
            w.p = 1;
            w.qw = 1;
            true
        }
        (Class::Adjacent, 0, -1) => {
            w.q = 1;
            w.pw = 1;
            true
        }
        (Class::OnWall, 0, 1) => {
            w.p = 1;
            true
        }
        (Class::OnWall, _, _) if death && from.m == 1 => {
            w.q = 1;
            true
        }
        (Class::OnWall, -1, 0) => {
            w.q = 1;
            true
        }
        _ => false,
    };
    if !ok {
        return Err(Error::Domain(format!(
            "columns ({}, {}) -> ({}, {}) violate compact growth",
            from.m, from.y, to.m, to.y
        )));
    }
    Ok(w)
}

/// Probability monomial of an explicit column history (seed first). The seed
/// column itself carries weight 1; an empty final column records the death
/// step. Consecutive columns must obey compact-growth adjacency.
pub fn history_weight(columns: &[Column]) -> Result<HistoryWeight> {
    if columns.is_empty() {
        return Err(Error::Domain("empty history".into()));
    }
    classify(columns[0].m, columns[0].y)?;
    let mut total = HistoryWeight::default();
    for pair in columns.windows(2) {
        let w = step_weight(pair[0], pair[1])?;
        total.p += w.p;
        total.q += w.q;
        total.pw += w.pw;
        total.qw += w.qw;
    }
    Ok(total)
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Exhaustive enumeration of the mean-size series through order N in p.
///
/// Guaranteed to agree with `mean_size_series` coefficientwise; practical for
/// N up to about 20 only, which is why the order is capped.
pub fn mean_size_enum(seed: Seed, order: usize) -> Result<BivariateSeries> {
    if order > 20 {
        return Err(Error::Domain(format!(
            "enumeration oracle is limited to order <= 20, got {order}"
        )));
    }
    classify(seed.m, seed.y)?;
    let mut terms: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    // stack frame: state and accumulated (p, q, pw, qw, size)
    struct Frame {
        m: usize,
        y: usize,
        w: HistoryWeight,
        size: usize,
    }
    let mut stack = vec![Frame {
        m: seed.m,
        y: seed.y,
        w: HistoryWeight::default(),
        size: seed.m,
    }];
    while let Some(f) = stack.pop() {
        let from = Column { m: f.m, y: f.y };
        let class = classify(f.m, f.y).expect("reachable states are valid");
        let mut targets: Vec<Column> = Vec::with_capacity(4);
        match class {
            Class::Bulk => {
                targets.push(Column { m: f.m + 1, y: f.y });
                targets.push(Column { m: f.m - 1, y: f.y });
                targets.push(Column { m: f.m, y: f.y + 1 });
                targets.push(Column { m: f.m, y: f.y - 1 });
            }
            Class::Adjacent => {
                targets.push(Column { m: f.m + 1, y: f.y });
                targets.push(Column { m: f.m - 1, y: f.y });
                targets.push(Column { m: f.m, y: f.y + 1 });
                targets.push(Column { m: f.m, y: f.y - 1 });
            }
            Class::OnWall => {
                targets.push(Column { m: f.m, y: f.y + 1 });
                targets.push(Column { m: f.m - 1, y: f.y });
            }
        }
        for to in targets {
            let step = step_weight(from, to).expect("generated transitions are valid");
            let w = HistoryWeight {
                p: f.w.p + step.p,
                q: f.w.q + step.q,
                pw: f.w.pw + step.pw,
                qw: f.w.qw + step.qw,
            };
            if w.p as usize > order {
                continue;
            }
            if to.m == 0 {
                // finished history: expand q^b q_w^d and accumulate size
                let size = BigInt::from(f.size);
                let imax = (order - w.p as usize).min(w.q as usize) as u32;
                for i in 0..=imax {
                    let ci = binom(w.q, i);
                    for j in 0..=w.qw {
                        let c = &ci * binom(w.qw, j) * &size;
                        let signed = if (i + j) % 2 == 1 { -c } else { c };
                        let n = w.p as usize + i as usize;
                        let k = w.pw as usize + j as usize;
                        let e = terms.entry((n, k)).or_insert_with(BigInt::zero);
                        *e += signed;
                    }
                }
            } else {
                stack.push(Frame {
                    m: to.m,
                    y: to.y,
                    w,
                    size: f.size + to.m,
                });
            }
        }
    }
    Ok(BivariateSeries::new(order, terms))
}
