use super::{plausible_allocations, AdiabaticSchedule, BidSpec, PayoffTable, SearchOperators};
use crate::error::Result;
use crate::quantum::eig_hermitian;

#[derive(Debug, Clone)]
pub struct GapRow {
    pub s: usize,
    pub f: f64,
    /// Ascending eigenvalues of `H(f)`.
    pub eigenvalues: Vec<f64>,
}

impl GapRow {
    pub fn gap(&self) -> f64 {
        self.eigenvalues
            .get(1)
            .map_or(0.0, |l1| l1 - self.eigenvalues[0])
    }
}

/// Eigenvalue tracks of `H(f)` for `s = 0..=S` and the minimum ground gap.
#[derive(Debug, Clone)]
pub struct GapTracks {
    pub rows: Vec<GapRow>,
    pub g_min: f64,
}

/// Diagonalizes `H(f)` at every schedule point, optionally restricted to `subspace`.
pub fn tracks_for(
    ops: &SearchOperators,
    schedule: &AdiabaticSchedule,
    subspace: Option<&[usize]>,
) -> Result<GapTracks> {
    let rows = (0..=schedule.steps())
        .map(|s| {
            let f = schedule.fraction(s);
            let h = ops.interpolated(f);
            let h = match subspace {
                Some(idx) => h.restrict(idx)?,
                None => h,
            };
            Ok(GapRow {
                s,
                f,
                eigenvalues: eig_hermitian(&h)?.eigenvalues,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let g_min = rows.iter().map(GapRow::gap).fold(f64::INFINITY, f64::min);
    Ok(GapTracks { rows, g_min })
}

/// Tracks for the honest interpolation `(1-f) U W U† + f H_p`.
pub fn eigenvalue_tracks(
    bidders: &[BidSpec],
    table: &PayoffTable,
    schedule: &AdiabaticSchedule,
    restrict: bool,
) -> Result<GapTracks> {
    let ops = SearchOperators::honest(bidders, table)?;
    let subspace = plausible_allocations(bidders);
    tracks_for(&ops, schedule, restrict.then_some(subspace.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{build_first_price_table, AuctionConfig, Variant};

    fn setup() -> (Vec<BidSpec>, PayoffTable) {
        (
            vec!["10".parse().unwrap(), "11".parse().unwrap()],
            build_first_price_table(&AuctionConfig::new(2, 2, 1).unwrap()).unwrap(),
        )
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-10)
    }

    #[test]
    fn endpoints() {
        let (b, t) = setup();
        let tracks =
            eigenvalue_tracks(&b, &t, &AdiabaticSchedule::short(Variant::Zeroth), true).unwrap();
        assert_eq!(tracks.rows.len(), 21);
        assert!(close(&tracks.rows[0].eigenvalues, &[0.0, 1.0, 1.0, 2.0]));
        assert!(close(&tracks.rows[20].eigenvalues, &[-3.0, -2.0, 0.0, 0.0]));
        assert!(tracks.rows.iter().all(|r| r.gap() > 0.0));
        assert!(tracks.g_min > 0.0);
    }

    #[test]
    fn restricted_start_matches_brute_force_diagonalization() {
        // Oracle: U† maps the plausible span onto basis states of weights 0,1,1,2,
        // so the restricted beginning Hamiltonian has exactly those eigenvalues.
        let (b, t) = setup();
        let ops = SearchOperators::honest(&b, &t).unwrap();
        let sub = plausible_allocations(&b);
        let hb = ops.beginning_hamiltonian().restrict(&sub).unwrap();
        let ev = eig_hermitian(&hb).unwrap().eigenvalues;
        assert!(close(&ev, &[0.0, 1.0, 1.0, 2.0]));
    }

    #[test]
    fn unrestricted_has_sixteen_levels() {
        let (b, t) = setup();
        let tracks = eigenvalue_tracks(
            &b,
            &t,
            &AdiabaticSchedule::new(4, 1.0, Variant::Exact).unwrap(),
            false,
        )
        .unwrap();
        assert!(tracks.rows.iter().all(|r| r.eigenvalues.len() == 16));
    }
}
