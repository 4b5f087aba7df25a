//! Interpolation in the span of a map's components.
//!
//! For a `k`-regular map `f`, any values at `k` distinct nodes are attained by
//! some `Σ c_j f_j`. The coefficients solve `E · c = λ` for the evaluation
//! matrix `E`; when `N > k` the solution with all free variables zero is taken.

use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::poly::{PolyMap, Polynomial};
use crate::regularity::{eval_matrix, PointTuple};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug)]
pub struct InterpolationProblem<S: Scalar = Rational> {
    pub map: PolyMap,
    pub nodes: PointTuple<S>,
    pub values: Vec<S>,
}

impl<S: Scalar> InterpolationProblem<S> {
    pub fn new(map: PolyMap, nodes: PointTuple<S>, values: Vec<S>) -> Result<Self> {
        if values.len() != nodes.len() {
            return invalid(format!("{} values for {} nodes", values.len(), nodes.len()));
        }
        Ok(Self { map, nodes, values })
    }
}

/// Coefficients `c` with `Σ c_j f_j(P_i) = λ_i` for every node.
pub fn interpolate<S: Scalar>(prob: &InterpolationProblem<S>) -> Result<Vec<S>> {
    if prob.values.len() != prob.nodes.len() {
        return invalid("values and nodes differ in length");
    }
    let e = eval_matrix(&prob.map, &prob.nodes)?;
    let rank = e.rank();
    if rank < prob.nodes.len() {
        return Err(Error::NotRegularOnNodes {
            rank,
            k: prob.nodes.len(),
        });
    }
    e.solve_particular(&prob.values)?
        .ok_or_else(|| Error::NotRegularOnNodes {
            rank,
            k: prob.nodes.len(),
        })
}

/// Expands `Σ c_j f_j`.
pub fn as_polynomial<S: Scalar>(map: &PolyMap, c: &[S]) -> Result<Polynomial<S>> {
    if c.len() != map.len() {
        return invalid(format!(
            "{} coefficients for {} components",
            c.len(),
            map.len()
        ));
    }
    Ok(map
        .components()
        .iter()
        .zip(c)
        .filter(|(_, cj)| !cj.is_zero())
        .fold(Polynomial::zero(map.nvars()), |acc, (f, cj)| {
            acc.add(&f.lift::<S>().scale(cj))
        }))
}

pub fn interpolation_json<S: Scalar>(map: &PolyMap, c: &[S]) -> Result<Value> {
    Ok(json!({
        "coeffs": c.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        "polynomial": as_polynomial(map, c)?.to_json(),
    }))
}
