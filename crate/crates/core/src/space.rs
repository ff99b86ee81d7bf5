//! Structural word accounting.
//!
//! Every index component reports the number of 64-bit words its arrays
//! occupy. The counts are derived from array lengths and element widths,
//! plus the three-word header (pointer, capacity, length) of each array.

/// Size in 64-bit words of a component.
pub trait SpaceUsage {
    /// Number of machine words held by this value, rounded up.
    fn words(&self) -> u64;
}

impl<T: Copy> SpaceUsage for Vec<T> {
    fn words(&self) -> u64 {
        3 + ((self.len() * std::mem::size_of::<T>()) as u64).div_ceil(8)
    }
}

impl<T: SpaceUsage> SpaceUsage for Option<T> {
    fn words(&self) -> u64 {
        self.as_ref().map_or(0, |x| x.words())
    }
}
