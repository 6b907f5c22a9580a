//! Fixed inputs shared by the benchmarks, so every run measures the same work.

use kzp_core::algebra::ExtField;
use kzp_core::curvature::{point_data, point_field, random_point, PointData};
use kzp_core::kz::{KZSystem, PolyVector};
use kzp_core::phyper::{build_solution, Family, Master};
use kzp_core::{seeded_rng, PrimeField, Result};

/// A KZ system with one of its polynomial solutions.
pub fn solution_fixture(family: Family, g: usize, p: u64, r: usize, ell: &[u32]) -> Result<(KZSystem, PolyVector<PrimeField>)> {
    let f = PrimeField::new(p)?;
    let sys = Master::new(family, g, f, r)?.kz_system()?;
    Ok((sys, build_solution(family, g, f, r, ell)?))
}

/// Solutions, p-curvature and good basis at one seeded point.
pub fn point_fixture(g: usize, p: u64, seed: u64) -> Result<(PrimeField, ExtField, PointData<ExtField>)> {
    let f = PrimeField::new(p)?;
    let ext = point_field(f)?;
    let data = point_data(&ext, f, random_point(&ext, g, &mut seeded_rng(seed)))?;
    Ok((f, ext, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        let (sys, v) = solution_fixture(Family::BarN, 2, 7, 2, &[1, 3]).unwrap();
        assert_eq!(v.dim(), sys.dim());
        let (_, _, data) = point_fixture(3, 11, 1).unwrap();
        assert_eq!(data.basis.g, 3);
    }
}
