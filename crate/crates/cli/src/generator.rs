//! Named inequality families, shared by `gen-ineq` and the reproduce manifest.

use multicut_core::inequality::*;
use multicut_core::{Error, Family, LinearInequality, MulticutInstance, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Generator {
    CircularStar { n: usize },
    /// Circular star instance with `sum x >= n/2` for even `n`: valid, never a facet.
    EvenStarSum { n: usize },
    CompleteStar { n: usize },
    Tree { n: usize, k: usize },
    OddCycle { n: usize },
    Wagner { n: usize, beta: u8 },
    GeneralizedWagner { n: usize, big_n: usize, breakpoints: Vec<usize>, beta: u8 },
}

impl Generator {
    pub fn generate(&self) -> Result<(MulticutInstance, LinearInequality)> {
        match self {
            Generator::CircularStar { n } => gen_circular_star(*n),
            Generator::EvenStarSum { n } => {
                if n % 2 == 1 || *n < 2 {
                    return Err(Error::BadParams(format!("even star sum needs even n >= 2, got {n}")));
                }
                let inst = circular_star_instance(*n)?;
                Ok((inst, LinearInequality::new(vec![1; *n], (*n / 2) as i64, Family::Custom)))
            }
            Generator::CompleteStar { n } => gen_complete_star(*n),
            Generator::Tree { n, k } => gen_tree_ineq(*n, *k),
            Generator::OddCycle { n } => gen_odd_cycle(*n),
            Generator::Wagner { n, beta } => gen_wagner(*n, *beta),
            Generator::GeneralizedWagner { n, big_n, breakpoints, beta } => {
                gen_generalized_wagner(*n, *big_n, breakpoints, *beta)
            }
        }
    }

    /// Builds a generator from CLI parameters.
    pub fn from_args(
        family: &str,
        n: Option<usize>,
        k: Option<usize>,
        big_n: Option<usize>,
        beta: Option<u8>,
        breakpoints: Option<Vec<usize>>,
    ) -> std::result::Result<Self, String> {
        let need = |v: Option<usize>, name: &str| v.ok_or_else(|| format!("--{name} is required for {family}"));
        Ok(match family {
            "circular-star" => Generator::CircularStar { n: need(n, "n")? },
            "even-star-sum" => Generator::EvenStarSum { n: need(n, "n")? },
            "complete-star" => Generator::CompleteStar { n: need(n, "n")? },
            "tree" => Generator::Tree { n: need(n, "n")?, k: need(k, "k")? },
            "odd-cycle" => Generator::OddCycle { n: need(n, "n")? },
            "wagner" => Generator::Wagner { n: need(n, "n")?, beta: beta.unwrap_or(1) },
            "generalized-wagner" => Generator::GeneralizedWagner {
                n: need(n, "n")?,
                big_n: need(big_n, "big-n")?,
                breakpoints: breakpoints.ok_or("--breakpoints is required for generalized-wagner")?,
                beta: beta.unwrap_or(1),
            },
            other => return Err(format!("unknown family `{other}`")),
        })
    }
}
