//! Discrete Bayesian networks.

use serde::{Deserialize, Serialize};

use crate::bnmodel::{BnError, Dag};

/// Tolerance on CPT row sums accepted from input files.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub states: Vec<String>,
}

impl Variable {
    pub fn cardinality(&self) -> usize {
        self.states.len()
    }
}

/// Conditional probability table. Row `r` holds the distribution for the
/// parent configuration whose mixed-radix index is `r`, with the first
/// parent as the most significant digit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cpt {
    pub parents: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteBayesNet {
    name: String,
    vars: Vec<Variable>,
    cpts: Vec<Cpt>,
    dag: Dag,
    order: Vec<usize>,
}

impl DiscreteBayesNet {
    /// Validates and assembles a network. Rows whose sum is off by more
    /// than `1e-12` (but within [`ROW_SUM_TOLERANCE`]) are rescaled.
    pub fn new(name: impl Into<String>, vars: Vec<Variable>, mut cpts: Vec<Cpt>) -> Result<Self, BnError> {
        let n = vars.len();
        if cpts.len() != n {
            return Err(BnError::Invalid(format!("{} variables but {} tables", n, cpts.len())));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.states.is_empty() {
                return Err(BnError::Invalid(format!("variable {} has no states", v.name)));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(BnError::Invalid(format!("duplicate variable {}", v.name)));
            }
        }
        let mut edges = Vec::new();
        for (v, cpt) in cpts.iter_mut().enumerate() {
            let name = &vars[v].name;
            let mut configs = 1usize;
            for (k, &p) in cpt.parents.iter().enumerate() {
                if p >= n {
                    return Err(BnError::UnknownNode(p.to_string()));
                }
                if p == v || cpt.parents[..k].contains(&p) {
                    return Err(BnError::Invalid(format!("bad parent list for {name}")));
                }
                configs *= vars[p].cardinality();
                edges.push((p, v));
            }
            if cpt.rows.len() != configs {
                return Err(BnError::Invalid(format!(
                    "{name}: {} rows for {configs} parent configurations",
                    cpt.rows.len()
                )));
            }
            for (r, row) in cpt.rows.iter_mut().enumerate() {
                if row.len() != vars[v].cardinality() {
                    return Err(BnError::Invalid(format!("{name}: row {r} has {} entries", row.len())));
                }
                if row.iter().any(|&p| !(p.is_finite() && p >= 0.0)) {
                    return Err(BnError::Invalid(format!("{name}: row {r} has an invalid probability")));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    return Err(BnError::Invalid(format!("{name}: row {r} sums to {sum}")));
                }
                if (sum - 1.0).abs() > 1e-12 {
                    row.iter_mut().for_each(|p| *p /= sum);
                }
            }
        }
        let dag = Dag::new(n, &edges)?;
        let order = dag.topological_order().expect("acyclic");
        Ok(DiscreteBayesNet { name: name.into(), vars, cpts, dag, order })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn variable(&self, v: usize) -> &Variable {
        &self.vars[v]
    }

    pub fn cpt(&self, v: usize) -> &Cpt {
        &self.cpts[v]
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.vars.iter().map(Variable::cardinality).collect()
    }

    /// CPT row for `v` given a full assignment of state indices.
    pub fn row_for(&self, v: usize, assignment: &[usize]) -> &[f64] {
        let cpt = &self.cpts[v];
        let mut idx = 0;
        for &p in &cpt.parents {
            idx = idx * self.vars[p].cardinality() + assignment[p];
        }
        &cpt.rows[idx]
    }
}
