//! Averaging correlation matrices before thresholding can create edges that
//! no individual subject has.
//!
//! Two subjects correlate a pair of regions at 0.9 and 0.1. Their average,
//! 0.5, clears a threshold of 0.4, yet only one of the two subject graphs
//! contains the edge. Thresholding each subject first and then asking how
//! often the edge appears gives a different answer.

use spnet::{threshold, SquareMatrix};

fn main() -> spnet::Result<()> {
    let tau = 0.4;
    let a = SquareMatrix::from_upper_triangle(2, &[0.9])?;
    let b = SquareMatrix::from_upper_triangle(2, &[0.1])?;
    let mean = SquareMatrix::mean_of([&a, &b])?;

    let of_mean = threshold(&mean, tau)?;
    let per_subject: Vec<bool> = [&a, &b]
        .iter()
        .map(|m| threshold(m, tau).map(|g| g.has_edge(0, 1)))
        .collect::<spnet::Result<_>>()?;

    println!("mean correlation      {:.2}", mean.get(0, 1));
    println!("edge in T(mean)       {}", of_mean.has_edge(0, 1));
    println!("edge in T(subject)    {per_subject:?}");
    println!(
        "fraction of subjects  {:.2}",
        per_subject.iter().filter(|&&e| e).count() as f64 / per_subject.len() as f64
    );
    Ok(())
}
