//! Floating-point scalar used for channel values, LLRs and BP messages.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the channel and decoder are generic over (`f32` or `f64`).
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant, panicking only for values unrepresentable
    /// in every float type (never happens for finite inputs).
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("float conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}
