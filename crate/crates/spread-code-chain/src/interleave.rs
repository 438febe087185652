use crate::ChainError;

fn check(len: usize, depth: usize) -> Result<usize, ChainError> {
    if depth == 0 || len % depth != 0 {
        return Err(ChainError::Dimension { expected: len.next_multiple_of(depth.max(1)), got: len });
    }
    Ok(len / depth)
}

/// Block interleaver: write `depth` rows of `len / depth` bits row by row,
/// read column by column.
pub fn interleave<T: Copy>(bits: &[T], depth: usize) -> Result<Vec<T>, ChainError> {
    let cols = check(bits.len(), depth)?;
    Ok((0..cols).flat_map(|c| (0..depth).map(move |r| bits[r * cols + c])).collect())
}

/// Inverse of [`interleave`].
pub fn deinterleave<T: Copy>(bits: &[T], depth: usize) -> Result<Vec<T>, ChainError> {
    let cols = check(bits.len(), depth)?;
    // reading row-major out of a column-major store is the transpose with swapped shape
    interleave(bits, cols)
}
