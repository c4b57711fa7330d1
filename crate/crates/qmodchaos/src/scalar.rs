use num_traits as nt;

/// Floating-point scalar used for amplitudes and sequence statistics.
///
/// The integer side of the library (residues, circuits) is exact `u64`
/// arithmetic; everything that genuinely needs a real number is generic
/// over this trait so `f32` and `f64` backends share one implementation.
pub trait Real:
    nt::Float + nt::FromPrimitive + nt::NumAssign + std::fmt::Debug + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: nt::Float + nt::FromPrimitive + nt::NumAssign + std::fmt::Debug + Send + Sync + 'static
{
}
