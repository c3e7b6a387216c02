//! Exact conditional moments of additive functionals: the generating-function
//! engine and a brute-force enumeration oracle.

mod engine;
mod enumerate;
mod toll;

use num_complex::Complex64;
use serde::Serialize;

pub use engine::{phi_ladder, phi_of_y, series_pow, MomentEngine, MAX_TOLLS};
pub use enumerate::{
    enumerate_moment, enumerate_moment_with_mass, enumerate_trees, functional_of_sizes, WeightedTree,
    MAX_ENUM_SIZE,
};
pub use toll::{format_complex, parse_complex, TollKind, TollSequence, TollSpec};

use crate::error::Result;
use crate::offspring::OffspringLaw;

/// Which computation produced a [`MomentTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Series,
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentValue {
    pub n: usize,
    pub re: f64,
    pub im: f64,
}

/// Conditional moments `E[∏ F_{b_i}(T_n)]` over a list of sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentTable {
    pub law: String,
    pub tolls: Vec<String>,
    pub values: Vec<MomentValue>,
    pub route: Route,
}

impl MomentTable {
    /// Build by either route. Unattainable sizes are skipped.
    pub fn compute(
        law: &OffspringLaw,
        specs: &[TollSpec],
        ns: &[usize],
        truncation: usize,
        route: Route,
    ) -> Result<Self> {
        let tolls: Vec<TollSequence> = specs.iter().map(|s| s.resolve(law)).collect::<Result<_>>()?;
        let ns: Vec<usize> = ns.iter().copied().filter(|&n| law.is_attainable(n)).collect();
        let vals: Vec<Complex64> = match route {
            Route::Series => {
                let top = ns.iter().copied().max().unwrap_or(2).max(truncation).max(2);
                MomentEngine::new(law, top)?.conditional_moments(&ns, &tolls)?
            }
            Route::Enumeration => {
                ns.iter().map(|&n| enumerate_moment(law, n, &tolls)).collect::<Result<_>>()?
            }
        };
        Ok(Self {
            law: law.name().to_string(),
            tolls: specs.iter().map(|s| s.to_string()).collect(),
            values: ns.iter().zip(vals).map(|(&n, v)| MomentValue { n, re: v.re, im: v.im }).collect(),
            route,
        })
    }

    pub fn get(&self, n: usize) -> Option<Complex64> {
        self.values.iter().find(|v| v.n == n).map(|v| Complex64::new(v.re, v.im))
    }
}
