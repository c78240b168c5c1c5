//! Rayon when the `parallel` feature is on, plain iterators otherwise.
//!
//! Only the `into_par_iter()` entry point is shimmed; callers stick to
//! adaptors that exist on both `Iterator` and `ParallelIterator` (`map`,
//! `collect` into a `Vec`) and fold the collected results sequentially so the
//! outcome never depends on scheduling.

#[cfg(feature = "parallel")]
pub use rayon::prelude::*;

#[cfg(not(feature = "parallel"))]
mod sequential {
    pub trait IntoParallelIterator {
        type Iter;
        type Item;
        fn into_par_iter(self) -> Self::Iter;
    }

    impl<I: IntoIterator> IntoParallelIterator for I {
        type Iter = I::IntoIter;
        type Item = I::Item;
        fn into_par_iter(self) -> Self::Iter {
            self.into_iter()
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub use sequential::*;
