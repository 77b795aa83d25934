//! Parallel map with results delivered in input order.

use std::collections::BTreeMap;
use std::sync::mpsc;

use rayon::prelude::*;

/// Runs `f` over `items` on the rayon pool and hands each result to `emit`
/// in input order as soon as its predecessors are done. Stops early when
/// `emit` fails; remaining work is abandoned.
pub fn for_each_ordered<T, R, E, F, G>(items: &[T], f: F, mut emit: G) -> Result<(), E>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
    G: FnMut(R) -> Result<(), E>,
{
    let (tx, rx) = mpsc::channel::<(usize, R)>();
    std::thread::scope(|s| {
        let f = &f;
        s.spawn(move || {
            items.par_iter().enumerate().for_each_with(tx, |tx, (i, item)| {
                // a closed receiver means emit failed; skip the rest
                let _ = tx.send((i, f(item)));
            });
        });
        // owned here so an early return closes the channel
        let rx = rx;
        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, r) in rx.iter() {
            pending.insert(i, r);
            while let Some(r) = pending.remove(&next) {
                next += 1;
                emit(r)?;
            }
        }
        Ok(())
    })
}
