//! Multithreaded point counting over the rows of the affine chart.

use picard_core::arith::mpoly::MPoly;
use picard_core::pointcount::{max_feasible_n, CountKernel};
use picard_core::Error;
use rayon::prelude::*;

/// `#X(F_{p^n})`, same contract as the sequential counter in the core crate.
pub fn count_points_parallel(f: &MPoly<u64>, p: u64, n: u32, max_points: u64) -> picard_core::Result<u64> {
    let max_n = max_feasible_n(p, max_points);
    if n > max_n {
        return Err(Error::BudgetExceeded { max_n });
    }
    let kern = CountKernel::new(f, p, n)?;
    let rows: i64 = (0..kern.rows()).into_par_iter().map(|y| kern.row_sum(y)).sum();
    Ok(kern.total(kern.infinity_sum() + rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use picard_core::arith::mpoly::Vars;
    use picard_core::arith::numfield::NumberField;
    use picard_core::arith::parse::parse_mpoly;
    use picard_core::pointcount::{count_points, reduce_mod};

    #[test]
    fn agrees_with_sequential() {
        let q = NumberField::rationals();
        let f = parse_mpoly("x^6 + y^6 + z^6 + x*y^2*z^3", &Vars::xyz(), &q).unwrap();
        let fq = f.map(&picard_core::arith::Rationals, |c| q.as_rational(c).unwrap());
        for p in [5u64, 7] {
            let fp = reduce_mod(&fq, p).unwrap();
            for n in 1..=3 {
                assert_eq!(count_points_parallel(&fp, p, n, 1 << 30).unwrap(), count_points(&fp, p, n, 1 << 30).unwrap());
            }
        }
    }
}
