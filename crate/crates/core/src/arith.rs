//! Primes, k-free smooth-number enumeration and smooth-number counting.
//!
//! Integers are never materialised: an enumerated `n` is carried as
//! `(log n, Omega(n))`, with the exponent vector available for auditing
//! through the iterator interface.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;

/// Default limit on the number of enumerated elements.
pub const DEFAULT_COUNT_CAP: u64 = 200_000_000;

/// Largest sieve bound accepted.
pub const MAX_SIEVE_BOUND: u64 = 100_000_000;

/// All primes up to `bound`, ascending, with cached natural logs.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSet {
    bound: u64,
    primes: Vec<u64>,
    logs: Vec<f64>,
}

impl PrimeSet {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Number of primes `<= n` (n may exceed the bound only if it equals it).
    pub fn count_up_to(&self, n: u64) -> usize {
        self.primes.partition_point(|&p| p <= n)
    }

    /// The primes `<= n` as a new set. Panics if `n` exceeds the bound.
    pub fn restrict(&self, n: u64) -> PrimeSet {
        assert!(n <= self.bound, "cannot restrict a prime set beyond its bound");
        let c = self.count_up_to(n);
        PrimeSet {
            bound: n,
            primes: self.primes[..c].to_vec(),
            logs: self.logs[..c].to_vec(),
        }
    }
}

/// Sieve of Eratosthenes over odd numbers.
pub fn sieve_primes(bound: u64) -> PrimeSet {
    let bound_capped = bound.min(MAX_SIEVE_BOUND);
    let mut primes = Vec::new();
    if bound_capped >= 2 {
        primes.push(2);
        // index i represents 2i + 1
        let half = ((bound_capped - 1) / 2 + 1) as usize;
        let mut composite = vec![false; half];
        let mut i = 1usize;
        while (2 * i + 1) * (2 * i + 1) <= bound_capped as usize {
            if !composite[i] {
                let p = 2 * i + 1;
                let mut j = (p * p) / 2;
                while j < half {
                    composite[j] = true;
                    j += p;
                }
            }
            i += 1;
        }
        primes.extend((1..half).filter(|&i| !composite[i]).map(|i| (2 * i + 1) as u64));
    }
    let logs = primes.iter().map(|&p| (p as f64).ln()).collect();
    PrimeSet {
        bound: bound_capped,
        primes,
        logs,
    }
}

static PRIME_CACHE: OnceLock<Mutex<Option<Arc<PrimeSet>>>> = OnceLock::new();

/// Process-wide prime table covering at least `bound`; grows on demand.
pub fn shared_primes(bound: u64) -> Arc<PrimeSet> {
    let cell = PRIME_CACHE.get_or_init(|| Mutex::new(None));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(set) = guard.as_ref() {
        if set.bound >= bound {
            return Arc::clone(set);
        }
    }
    let target = bound.max(guard.as_ref().map_or(0, |s| s.bound * 2)).max(1 << 16);
    let set = Arc::new(sieve_primes(target.min(MAX_SIEVE_BOUND)));
    *guard = Some(Arc::clone(&set));
    set
}

/// One enumerated k-free smooth integer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothElement {
    pub log_n: f64,
    pub omega: u32,
    pub exponents: Vec<(u64, u32)>,
}

fn validate_enumeration(primes: &PrimeSet, k: u32, log_cap: f64, cap: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("k must be >= 2, got {k}")));
    }
    if log_cap.is_nan() || log_cap < 0.0 {
        return Err(Error::InvalidParams(format!("log_cap must be >= 0, got {log_cap}")));
    }
    if log_cap.is_infinite() {
        let total = (primes.len() as f64) * (k as f64).ln();
        if total > (cap as f64).ln() {
            return Err(Error::CountCapExceeded { cap });
        }
    }
    Ok(())
}

/// Depth-first iterator over k-free integers composed of `primes` with
/// `log n <= log_cap`. Pre-order: a node is yielded before its children, and
/// children extend the last prime index with ascending primes, each with
/// ascending exponents `1..k`.
pub struct KFreeSmoothIter<'a> {
    logs: &'a [f64],
    primes: &'a [u64],
    k: u32,
    log_cap: f64,
    cap: u64,
    // (prime index, exponent, log n of the parent, Omega of the parent)
    path: Vec<(usize, u32, f64, u32)>,
    log_n: f64,
    omega: u32,
    started: bool,
    done: bool,
    yielded: u64,
}

pub fn enumerate_kfree_smooth(
    primes: &PrimeSet,
    k: u32,
    log_cap: f64,
    count_cap: u64,
) -> Result<KFreeSmoothIter<'_>> {
    validate_enumeration(primes, k, log_cap, count_cap)?;
    Ok(KFreeSmoothIter {
        logs: &primes.logs,
        primes: &primes.primes,
        k,
        log_cap,
        cap: count_cap,
        path: Vec::new(),
        log_n: 0.0,
        omega: 0,
        started: false,
        done: false,
        yielded: 0,
    })
}

impl KFreeSmoothIter<'_> {
    fn fits(&self, base: f64, idx: usize, e: u32) -> bool {
        base + e as f64 * self.logs[idx] <= self.log_cap
    }

    fn push(&mut self, idx: usize, e: u32, base: f64, base_omega: u32) {
        self.path.push((idx, e, base, base_omega));
        self.log_n = base + e as f64 * self.logs[idx];
        self.omega = base_omega + e;
    }

    fn advance(&mut self) -> bool {
        // first child
        let start = self.path.last().map_or(0, |&(i, ..)| i + 1);
        if start < self.logs.len() && self.fits(self.log_n, start, 1) {
            let (b, o) = (self.log_n, self.omega);
            self.push(start, 1, b, o);
            return true;
        }
        // next sibling of the deepest node that has one
        while let Some((idx, e, base, base_omega)) = self.path.pop() {
            self.log_n = base;
            self.omega = base_omega;
            if e + 1 < self.k && self.fits(base, idx, e + 1) {
                self.push(idx, e + 1, base, base_omega);
                return true;
            }
            if idx + 1 < self.logs.len() && self.fits(base, idx + 1, 1) {
                self.push(idx + 1, 1, base, base_omega);
                return true;
            }
        }
        false
    }

    fn current(&self) -> SmoothElement {
        SmoothElement {
            log_n: self.log_n,
            omega: self.omega,
            exponents: self.path.iter().map(|&(i, e, ..)| (self.primes[i], e)).collect(),
        }
    }
}

impl Iterator for KFreeSmoothIter<'_> {
    type Item = Result<SmoothElement>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let have = if self.started {
            self.advance()
        } else {
            self.started = true;
            true
        };
        if !have {
            self.done = true;
            return None;
        }
        self.yielded += 1;
        if self.yielded > self.cap {
            self.done = true;
            return Some(Err(Error::CountCapExceeded { cap: self.cap }));
        }
        Some(Ok(self.current()))
    }
}

/// A unit of enumeration work: either a single node, or a node together
/// with all of its descendants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubtreeTask {
    pub log_n: f64,
    pub omega: u32,
    /// Children use prime indices `>= next_index`.
    pub next_index: usize,
    pub with_descendants: bool,
}

/// Split the enumeration tree into tasks whose concatenation, in the
/// returned order, is exactly the depth-first order. `depth` levels of the
/// tree are expanded into single-node tasks; the nodes at that depth become
/// subtree tasks. The split depends only on the inputs, never on the
/// number of workers.
pub fn partition_tasks(logs: &[f64], k: u32, log_cap: f64, depth: u32) -> Vec<SubtreeTask> {
    let mut out = Vec::new();
    expand(logs, k, log_cap, (0.0, 0, 0), depth, &mut out);
    out
}

fn expand(logs: &[f64], k: u32, log_cap: f64, node: (f64, u32, usize), depth: u32, out: &mut Vec<SubtreeTask>) {
    let (log_n, omega, next_index) = node;
    if depth == 0 {
        out.push(SubtreeTask { log_n, omega, next_index, with_descendants: true });
        return;
    }
    out.push(SubtreeTask { log_n, omega, next_index, with_descendants: false });
    for j in next_index..logs.len() {
        if log_n + logs[j] > log_cap {
            break;
        }
        for e in 1..k {
            let child = log_n + e as f64 * logs[j];
            if child > log_cap {
                break;
            }
            expand(logs, k, log_cap, (child, omega + e, j + 1), depth - 1, out);
        }
    }
}

/// Visit a task's nodes in depth-first order. `visit` returns `false` to abort.
pub fn visit_task<V: FnMut(f64, u32) -> bool>(logs: &[f64], k: u32, log_cap: f64, task: &SubtreeTask, visit: &mut V) -> bool {
    if !visit(task.log_n, task.omega) {
        return false;
    }
    if task.with_descendants {
        descend(logs, k, log_cap, task.log_n, task.omega, task.next_index, visit)
    } else {
        true
    }
}

fn descend<V: FnMut(f64, u32) -> bool>(
    logs: &[f64],
    k: u32,
    log_cap: f64,
    log_n: f64,
    omega: u32,
    start: usize,
    visit: &mut V,
) -> bool {
    for j in start..logs.len() {
        if log_n + logs[j] > log_cap {
            break;
        }
        for e in 1..k {
            let child = log_n + e as f64 * logs[j];
            if child > log_cap {
                break;
            }
            if !visit(child, omega + e) || !descend(logs, k, log_cap, child, omega + e, j + 1, visit) {
                return false;
            }
        }
    }
    true
}

/// Depth at which [`reduce_kfree_smooth`] cuts the tree into tasks.
pub const TASK_SPLIT_DEPTH: u32 = 2;

/// Fold a per-element accumulator over the k-free smooth integers, running
/// subtree tasks in parallel and combining their partial results in
/// depth-first task order. Returns the combined accumulator and the element
/// count.
pub fn reduce_kfree_smooth<A, I, V, C>(
    primes: &PrimeSet,
    k: u32,
    log_cap: f64,
    count_cap: u64,
    init: I,
    visit: V,
    mut combine: C,
) -> Result<(A, u64)>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, f64, u32) + Sync + Send,
    C: FnMut(&mut A, A),
{
    validate_enumeration(primes, k, log_cap, count_cap)?;
    let tasks = partition_tasks(&primes.logs, k, log_cap, TASK_SPLIT_DEPTH);
    let seen = AtomicU64::new(0);
    let partials = par::map(&tasks, |task| {
        let mut acc = init();
        let mut count = 0u64;
        visit_task(&primes.logs, k, log_cap, task, &mut |log_n, omega| {
            if seen.fetch_add(1, Ordering::Relaxed) >= count_cap {
                return false;
            }
            count += 1;
            visit(&mut acc, log_n, omega);
            true
        });
        (acc, count)
    });
    if seen.load(Ordering::Relaxed) > count_cap {
        return Err(Error::CountCapExceeded { cap: count_cap });
    }
    let mut total = init();
    let mut count = 0;
    for (acc, c) in partials {
        combine(&mut total, acc);
        count += c;
    }
    Ok((total, count))
}

/// Psi(x, y): the number of integers `n <= x` whose prime factors are all `<= y`.
pub fn count_smooth(x: f64, y: f64, count_cap: u64) -> Result<u64> {
    if !(x >= 1.0) || !(y >= 2.0) {
        return Err(Error::InvalidParams(format!("count_smooth needs x >= 1 and y >= 2, got x={x}, y={y}")));
    }
    if x >= u64::MAX as f64 {
        return Err(Error::InvalidParams("x too large for exact counting".into()));
    }
    let limit = x.floor() as u64;
    let yb = y.floor() as u64;
    let primes = shared_primes(yb);
    let ps = &primes.primes()[..primes.count_up_to(yb)];
    let mut count = 0u64;
    if !count_rec(1, 0, ps, limit, count_cap, &mut count) {
        return Err(Error::CountCapExceeded { cap: count_cap });
    }
    Ok(count)
}

fn count_rec(n: u64, start: usize, ps: &[u64], limit: u64, cap: u64, count: &mut u64) -> bool {
    *count += 1;
    if *count > cap {
        return false;
    }
    let room = limit / n;
    for (j, &p) in ps.iter().enumerate().skip(start) {
        if p > room {
            break;
        }
        if !count_rec(n * p, j, ps, limit, cap, count) {
            return false;
        }
    }
    true
}
