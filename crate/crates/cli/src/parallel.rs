//! Parallel consistency checking: constraints are independent, so their
//! witness sets can be computed on worker threads and merged by index,
//! keeping output identical to the sequential check.

use gxrepair_core::consistency::{constraint_witnesses, Verdict, Violation, Witness};
use gxrepair_core::datagraph::DataGraph;
use gxrepair_core::gxpath::ConstraintSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Full check across `threads` workers. With one thread (or one
/// constraint) this is the plain sequential check.
pub fn check_parallel(g: &DataGraph, r: &ConstraintSet, threads: usize) -> Verdict {
    let constraints: Vec<_> = r.iter().collect();
    let workers = threads.clamp(1, constraints.len().max(1));
    if workers <= 1 {
        return gxrepair_core::consistency::check(g, r);
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Vec<Witness>)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= constraints.len() {
                    break;
                }
                let witnesses = constraint_witnesses(g, constraints[idx]);
                results.lock().expect("no panics hold the lock").push((idx, witnesses));
            });
        }
    });
    let mut per_constraint = results.into_inner().expect("workers finished");
    per_constraint.sort();
    let violations: Vec<Violation> = per_constraint
        .into_iter()
        .flat_map(|(constraint, witnesses)| {
            witnesses
                .into_iter()
                .map(move |witness| Violation { constraint, witness })
        })
        .collect();
    let consistent = violations.is_empty();
    Verdict {
        consistent,
        violations,
    }
}
