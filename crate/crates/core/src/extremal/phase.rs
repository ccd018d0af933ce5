//! Where a `K_{d,d}` decomposition beats `K_{d,n}` padded with isolated
//! vertices, over a (mu, p) grid.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::format::fmt_real;
use crate::graph::{gen_kdd, gen_kdn, BipartiteGraph};
use crate::infection::{kdn_limit, InfectionParams};
use crate::percolation::{exact_size_profile, PercParams, DEFAULT_EXACT_EDGE_LIMIT};

/// Default tolerance below which the two values count as tied.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Winner {
    /// The `K_{d,d}` decomposition has the lower infected fraction.
    Kdd,
    Kdn,
    Tie,
}

impl Winner {
    fn classify(delta: f64, tie_tol: f64) -> Winner {
        if delta.abs() <= tie_tol {
            Winner::Tie
        } else if delta < 0.0 {
            Winner::Kdd
        } else {
            Winner::Kdn
        }
    }
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Kdd => "KDD",
            Winner::Kdn => "KDN",
            Winner::Tie => "TIE",
        })
    }
}

impl FromStr for Winner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "KDD" => Ok(Winner::Kdd),
            "KDN" => Ok(Winner::Kdn),
            "TIE" => Ok(Winner::Tie),
            other => Err(invalid(format!("unknown winner {other:?}"))),
        }
    }
}

/// How the `K_{d,n}` side is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseMode {
    /// The `n -> infinity` closed form.
    Limit,
    /// Exact value of `K_{d,n}` with `n - d` isolated vertices at this `n`.
    Finite { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseDiagram {
    pub d: usize,
    pub mu_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    /// `cells[i][j]` is the winner at `(mu_grid[i], p_grid[j])`.
    pub cells: Vec<Vec<Winner>>,
    /// `kdd - kdn` at each cell.
    pub deltas: Vec<Vec<f64>>,
}

impl PhaseDiagram {
    pub fn winner_at(&self, mu: f64, p: f64) -> Option<Winner> {
        let i = self.mu_grid.iter().position(|&x| x == mu)?;
        let j = self.p_grid.iter().position(|&x| x == p)?;
        Some(self.cells[i][j])
    }

    /// `mu,p,winner,delta` rows, mu-major.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["mu", "p", "winner", "delta"])
            .expect("in-memory write");
        for (i, &mu) in self.mu_grid.iter().enumerate() {
            for (j, &p) in self.p_grid.iter().enumerate() {
                w.write_record([
                    fmt_real(mu),
                    fmt_real(p),
                    self.cells[i][j].to_string(),
                    fmt_real(self.deltas[i][j]),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// Reads back what [`to_csv`](Self::to_csv) writes.
    pub fn from_csv(d: usize, text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut rows: Vec<(f64, f64, Winner, f64)> = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let line = idx + 2;
            let record = record.map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            if record.len() != 4 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 4 fields, got {}", record.len()),
                });
            }
            let num = |s: &str| {
                s.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad number {s:?}"),
                })
            };
            rows.push((
                num(&record[0])?,
                num(&record[1])?,
                record[2].parse()?,
                num(&record[3])?,
            ));
        }
        let mut mu_grid: Vec<f64> = Vec::new();
        let mut p_grid: Vec<f64> = Vec::new();
        for &(mu, p, _, _) in &rows {
            if !mu_grid.contains(&mu) {
                mu_grid.push(mu);
            }
            if mu == mu_grid[0] {
                p_grid.push(p);
            }
        }
        if rows.len() != mu_grid.len() * p_grid.len() {
            return Err(invalid("phase CSV is not a full mu-major grid"));
        }
        let chunk = p_grid.len().max(1);
        let cells = rows
            .chunks(chunk)
            .map(|c| c.iter().map(|r| r.2).collect())
            .collect();
        let deltas = rows
            .chunks(chunk)
            .map(|c| c.iter().map(|r| r.3).collect())
            .collect();
        Ok(PhaseDiagram {
            d,
            mu_grid,
            p_grid,
            cells,
            deltas,
        })
    }
}

/// `steps + 1` evenly spaced points on `[0, 1]`.
pub fn uniform_grid(steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

/// Compares the exact `K_{d,d}` value with the large-`n` `K_{d,n}` value on
/// every grid cell.
pub fn phase_region(
    d: usize,
    mu_grid: &[f64],
    p_grid: &[f64],
    tie_tol: f64,
) -> Result<PhaseDiagram> {
    phase_region_with(
        d,
        mu_grid,
        p_grid,
        tie_tol,
        PhaseMode::Limit,
        DEFAULT_EXACT_EDGE_LIMIT,
    )
}

pub fn phase_region_with(
    d: usize,
    mu_grid: &[f64],
    p_grid: &[f64],
    tie_tol: f64,
    mode: PhaseMode,
    edge_limit: usize,
) -> Result<PhaseDiagram> {
    for grid in [mu_grid, p_grid] {
        if grid.iter().any(|x| !(0.0..=1.0).contains(x)) || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(
                "grids must be strictly increasing values in [0, 1]",
            ));
        }
    }
    let kdd = gen_kdd(d, d)?;
    let kdn = match mode {
        PhaseMode::Limit => None,
        PhaseMode::Finite { n } => Some(gen_kdn(n, d)?),
    };
    let mut deltas = vec![vec![0.0; p_grid.len()]; mu_grid.len()];
    for (j, &p) in p_grid.iter().enumerate() {
        let kdd_value = FractionCurve::new(&kdd, p, edge_limit)?;
        let kdn_value = kdn
            .as_ref()
            .map(|g| FractionCurve::new(g, p, edge_limit))
            .transpose()?;
        for (i, &mu) in mu_grid.iter().enumerate() {
            let other = match &kdn_value {
                Some(curve) => curve.at(mu),
                None => kdn_limit(d, InfectionParams { mu, p }),
            };
            deltas[i][j] = kdd_value.at(mu) - other;
        }
    }
    let cells = deltas
        .iter()
        .map(|row| row.iter().map(|&x| Winner::classify(x, tie_tol)).collect())
        .collect();
    Ok(PhaseDiagram {
        d,
        mu_grid: mu_grid.to_vec(),
        p_grid: p_grid.to_vec(),
        cells,
        deltas,
    })
}

/// Infected fraction of one graph as a function of `mu` at fixed `p`, from
/// its exact component-size profile.
struct FractionCurve {
    profile: Vec<f64>,
    vertices: f64,
}

impl FractionCurve {
    fn new(g: &BipartiteGraph, p: f64, edge_limit: usize) -> Result<Self> {
        Ok(FractionCurve {
            profile: exact_size_profile(g, PercParams::new(p)?, edge_limit)?,
            vertices: g.vertex_count() as f64,
        })
    }

    fn at(&self, mu: f64) -> f64 {
        let q = 1.0 - mu;
        let mut power = 1.0;
        let mut escape = 0.0;
        for &mass in &self.profile {
            escape += mass * power;
            power *= q;
        }
        1.0 - escape / self.vertices
    }
}

/// Smallest `mu` in `(0, 1)` where the preference flips from `K_{d,d}` to
/// `K_{d,n}` (large-`n` value) at transmission probability `p`, located to
/// within `tol`. `None` when the sign never changes.
pub fn phase_boundary(d: usize, p: f64, tol: f64) -> Result<Option<f64>> {
    let curve = FractionCurve::new(&gen_kdd(d, d)?, p, DEFAULT_EXACT_EDGE_LIMIT)?;
    let delta = |mu: f64| curve.at(mu) - kdn_limit(d, InfectionParams { mu, p });
    const SCAN: usize = 2000;
    let mut lo = 0.5 / SCAN as f64;
    let mut lo_val = delta(lo);
    for i in 1..SCAN {
        let hi = (i as f64 + 0.5) / SCAN as f64;
        let hi_val = delta(hi);
        if lo_val < 0.0 && hi_val >= 0.0 {
            let (mut a, mut b) = (lo, hi);
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if delta(mid) < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Ok(Some(0.5 * (a + b)));
        }
        lo = hi;
        lo_val = hi_val;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infection::kdd_exact;

    #[test]
    fn d1_boundary_is_one_half() {
        let grid = uniform_grid(20);
        let pd = phase_region(1, &grid, &grid, DEFAULT_TIE_TOL).unwrap();
        for (i, &mu) in grid.iter().enumerate() {
            for (j, &p) in grid.iter().enumerate() {
                let expect = if p == 0.0 || mu == 0.0 || mu == 1.0 || mu == 0.5 {
                    Winner::Tie
                } else if mu < 0.5 {
                    Winner::Kdd
                } else {
                    Winner::Kdn
                };
                assert_eq!(pd.cells[i][j], expect, "mu={mu} p={p}");
            }
        }
    }

    #[test]
    fn d2_boundary_at_full_transmission() {
        let target = 1.0 - 2f64.powf(-1.0 / 3.0);
        let mu = phase_boundary(2, 1.0, 1e-13).unwrap().unwrap();
        assert!((mu - target).abs() < 1e-9, "{mu} vs {target}");
        let pd = phase_region(2, &[target], &[1.0], DEFAULT_TIE_TOL).unwrap();
        assert_eq!(pd.cells[0][0], Winner::Tie);
    }

    #[test]
    fn profile_route_matches_kdd_exact() {
        let pd = phase_region(2, &[0.1, 0.45, 0.8], &[0.2, 0.7], DEFAULT_TIE_TOL).unwrap();
        for (i, &mu) in pd.mu_grid.iter().enumerate() {
            for (j, &p) in pd.p_grid.iter().enumerate() {
                let q = InfectionParams::new(mu, p).unwrap();
                let direct = kdd_exact(2, q).unwrap() - kdn_limit(2, q);
                assert!((pd.deltas[i][j] - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn finite_mode_tracks_limit_for_d1() {
        let grid = [0.2, 0.4, 0.6, 0.8];
        let finite = phase_region_with(
            1,
            &grid,
            &grid,
            DEFAULT_TIE_TOL,
            PhaseMode::Finite { n: 20 },
            24,
        )
        .unwrap();
        let limit = phase_region(1, &grid, &grid, DEFAULT_TIE_TOL).unwrap();
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                assert!((finite.deltas[i][j] - limit.deltas[i][j]).abs() < 0.03);
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let grid = uniform_grid(4);
        let pd = phase_region(2, &grid, &grid, DEFAULT_TIE_TOL).unwrap();
        let text = pd.to_csv();
        assert!(text.starts_with("mu,p,winner,delta\n"));
        let back = PhaseDiagram::from_csv(2, &text).unwrap();
        assert_eq!(back.to_csv(), text);
        assert_eq!(back.cells, pd.cells);
        assert!(PhaseDiagram::from_csv(2, "mu,p,winner,delta\n0,0,XYZ,0\n").is_err());
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(phase_region(1, &[0.5, 0.2], &[0.1], DEFAULT_TIE_TOL).is_err());
        assert!(phase_region(1, &[1.5], &[0.1], DEFAULT_TIE_TOL).is_err());
        assert!(phase_region(5, &[0.5], &[0.1], DEFAULT_TIE_TOL).is_err());
    }
}
