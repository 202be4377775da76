//! Schedule-independent fan-out of search subtrees.
//!
//! Subtrees are produced in depth-first order and explored on a rayon pool
//! of `jobs` threads. Results are combined in subtree order, so the outcome
//! never depends on which worker finished first.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

/// Result of exploring one subtree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Explore<T> {
    Found(T),
    Exhausted,
    OutOfBudget,
}

/// Lets a worker notice that an earlier subtree already produced a hit,
/// making its own result irrelevant.
pub struct Stop<'a> {
    index: usize,
    first_found: &'a AtomicUsize,
}

impl Stop<'_> {
    pub fn requested(&self) -> bool {
        self.first_found.load(Ordering::Relaxed) < self.index
    }
}

pub fn with_pool<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Explore `items` in parallel and return the per-item results up to and
/// including the first `Found`. Items after it may have been cut short and
/// are dropped. Each result carries the node count of its subtree.
pub fn ordered_first<S, T, F>(items: Vec<S>, jobs: usize, f: F) -> Vec<(Explore<T>, u64)>
where
    S: Send,
    T: Send,
    F: Fn(S, &Stop) -> (Explore<T>, u64) + Sync,
{
    let first_found = AtomicUsize::new(usize::MAX);
    let run = |(index, item): (usize, S)| {
        let stop = Stop { index, first_found: &first_found };
        if stop.requested() {
            return None;
        }
        let out = f(item, &stop);
        if matches!(out.0, Explore::Found(_)) {
            first_found.fetch_min(index, Ordering::Relaxed);
        }
        Some(out)
    };
    let results: Vec<Option<(Explore<T>, u64)>> = if jobs <= 1 {
        items.into_iter().enumerate().map(run).collect()
    } else {
        with_pool(jobs, || items.into_par_iter().enumerate().map(run).collect())
    };
    let mut out = Vec::new();
    for r in results {
        match r {
            Some(r) => {
                let hit = matches!(r.0, Explore::Found(_));
                out.push(r);
                if hit {
                    break;
                }
            }
            None => break,
        }
    }
    out
}

/// Map every item; results in input order.
pub fn map_all<S, R, F>(items: Vec<S>, jobs: usize, f: F) -> Vec<R>
where
    S: Send,
    R: Send,
    F: Fn(S) -> R + Sync + Send,
{
    if jobs <= 1 {
        items.into_iter().map(f).collect()
    } else {
        with_pool(jobs, || items.into_par_iter().map(f).collect())
    }
}
