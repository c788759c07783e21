use serde::{Deserialize, Serialize};

use crate::drawing::Graph;
use crate::error::{Error, Result};

/// Closed integer interval `[lower, upper]` known to contain a genus value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: i64,
    pub upper: i64,
}

impl Interval {
    pub fn new(lower: i64, upper: i64) -> Result<Self> {
        let i = Self { lower, upper };
        i.validate()?;
        Ok(i)
    }

    pub fn exact(value: i64) -> Self {
        Self {
            lower: value,
            upper: value,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lower > self.upper {
            return Err(Error::Structure(format!(
                "interval lower bound {} exceeds upper bound {}",
                self.lower, self.upper
            )));
        }
        Ok(())
    }
}

/// Known bounds on the pieces and the whole of a 2-amalgamation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamationInput {
    pub k: usize,
    pub g0_first: Interval,
    pub g0_second: Interval,
    pub g0_whole: Interval,
    pub eg0_first: Interval,
    pub eg0_second: Interval,
    pub eg0_whole: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityStatus {
    /// No choice of values inside the intervals violates it.
    Holds,
    /// Some choices violate it and some do not.
    Possible,
    /// Every choice violates it.
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub status: InequalityStatus,
    /// Range of `lhs − rhs` over the intervals; the inequality asks for `≤ 0`.
    pub slack_min: i64,
    pub slack_max: i64,
}

impl InequalityCheck {
    pub fn holds(&self) -> bool {
        self.status == InequalityStatus::Holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamationReport {
    pub input: AmalgamationInput,
    pub inequalities_checked: Vec<InequalityCheck>,
    /// Upper bound on `g₀` of the whole graph implied by the pieces.
    pub g0_whole_upper: i64,
    pub eg0_whole_upper: i64,
}

impl AmalgamationReport {
    pub fn refuted(&self) -> bool {
        self.inequalities_checked
            .iter()
            .any(|c| c.status == InequalityStatus::Refuted)
    }
}

/// `first + second + offset − whole` ranges over this interval.
fn sum_minus(first: Interval, second: Interval, offset: i64, whole: Interval) -> (i64, i64) {
    (
        first.lower + second.lower + offset - whole.upper,
        first.upper + second.upper + offset - whole.lower,
    )
}

fn check(name: &str, (slack_min, slack_max): (i64, i64)) -> InequalityCheck {
    let status = if slack_max <= 0 {
        InequalityStatus::Holds
    } else if slack_min > 0 {
        InequalityStatus::Refuted
    } else {
        InequalityStatus::Possible
    };
    InequalityCheck {
        name: name.into(),
        status,
        slack_min,
        slack_max,
    }
}

/// Checks the two-sided additivity bounds for a 2-amalgamation with `k`
/// components (counting the edge `uv`):
///
/// - `g₀(G₁) + g₀(G₂) − (k+1) ≤ g₀(G) ≤ g₀(G₁) + g₀(G₂) + 1`
/// - `eg₀(G₁) + eg₀(G₂) − (2k−1) ≤ eg₀(G) ≤ eg₀(G₁) + eg₀(G₂) + 2`
pub fn amalgamation_check(input: AmalgamationInput) -> Result<AmalgamationReport> {
    for i in [
        input.g0_first,
        input.g0_second,
        input.g0_whole,
        input.eg0_first,
        input.eg0_second,
        input.eg0_whole,
    ] {
        i.validate()?;
    }
    let k = input.k as i64;
    let neg = |(a, b): (i64, i64)| (-b, -a);
    let inequalities_checked = vec![
        check(
            "a_lower",
            sum_minus(input.g0_first, input.g0_second, -(k + 1), input.g0_whole),
        ),
        check(
            "a_upper",
            neg(sum_minus(input.g0_first, input.g0_second, 1, input.g0_whole)),
        ),
        check(
            "b_lower",
            sum_minus(input.eg0_first, input.eg0_second, -(2 * k - 1), input.eg0_whole),
        ),
        check(
            "b_upper",
            neg(sum_minus(input.eg0_first, input.eg0_second, 2, input.eg0_whole)),
        ),
    ];
    Ok(AmalgamationReport {
        input,
        inequalities_checked,
        g0_whole_upper: input.g0_first.upper + input.g0_second.upper + 1,
        eg0_whole_upper: input.eg0_first.upper + input.eg0_second.upper + 2,
    })
}

/// Connected components of `g − u − v`, as vertex lists.
fn components_without(g: &Graph, u: usize, v: usize) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    seen[u] = true;
    seen[v] = true;
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let x = comp[k];
            for y in g.neighbours(x) {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
            k += 1;
        }
        out.push(comp);
    }
    out
}

fn check_pair(g: &Graph, u: usize, v: usize) -> Result<()> {
    if u == v || u >= g.vertex_count() || v >= g.vertex_count() {
        return Err(Error::Structure(format!("({u}, {v}) is not a pair of distinct vertices")));
    }
    Ok(())
}

/// Components of `g − u − v`, plus one if `uv` is an edge.
pub fn amalgamation_k(g: &Graph, u: usize, v: usize) -> Result<usize> {
    check_pair(g, u, v)?;
    Ok(components_without(g, u, v).len() + g.edge_index(u, v).is_some() as usize)
}

/// A 2-amalgamation rewritten so that removing `u` and `v` leaves exactly two
/// components: the edge `uv` is subdivided and the components on each side are
/// chained together by new edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoComponentReduction {
    pub graph: Graph,
    pub k: usize,
    pub subdivision_vertex: Option<usize>,
    pub added_edges: Vec<(usize, usize)>,
    /// Added edges can raise `g₀` by one each and `eg₀` by two each.
    pub g0_slack: usize,
    pub eg0_slack: usize,
}

/// `first_side` lists the vertices of the first piece other than `u`, `v`;
/// every component of `g − u − v` must lie on one side. The subdivision vertex
/// of `uv` joins the first side.
pub fn two_component_reduction(g: &Graph, u: usize, v: usize, first_side: &[usize]) -> Result<TwoComponentReduction> {
    check_pair(g, u, v)?;
    let k = amalgamation_k(g, u, v)?;
    let mut on_first = vec![false; g.vertex_count()];
    for &x in first_side {
        if x >= g.vertex_count() || x == u || x == v {
            return Err(Error::Structure(format!("vertex {x} cannot be placed on a side")));
        }
        on_first[x] = true;
    }
    let mut edges = g.edges().to_vec();
    let mut n = g.vertex_count();
    let mut subdivision_vertex = None;
    if let Some(e) = g.edge_index(u, v) {
        edges.remove(e);
        edges.push((u, n));
        edges.push((n, v));
        on_first.push(true);
        subdivision_vertex = Some(n);
        n += 1;
    }
    let graph = Graph::new(n, edges)?;
    let mut sides: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for comp in components_without(&graph, u, v) {
        let side = on_first[comp[0]];
        if comp.iter().any(|&x| on_first[x] != side) {
            return Err(Error::Structure(format!(
                "component containing vertex {} straddles both sides",
                comp[0]
            )));
        }
        sides[!side as usize].push(comp[0]);
    }
    let mut added_edges = Vec::new();
    let mut edges = graph.edges().to_vec();
    for reps in &sides {
        for w in reps.windows(2) {
            added_edges.push((w[0], w[1]));
            edges.push((w[0], w[1]));
        }
    }
    let added = added_edges.len();
    Ok(TwoComponentReduction {
        graph: Graph::new(n, edges)?,
        k,
        subdivision_vertex,
        added_edges,
        g0_slack: added,
        eg0_slack: 2 * added,
    })
}
