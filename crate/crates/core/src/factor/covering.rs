use std::ops::ControlFlow;

use serde::Serialize;

use super::copies::{check_compat, identity_classes, Embedder};
use super::FactorError;
use crate::graph::{HostGraph, PatternGraph};

/// The two covering conditions: every host vertex lies in some copy, and
/// every role can be played by at least `n / v_H` host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Th2Report {
    pub every_vertex_covered: bool,
    pub roles_realizable: bool,
    /// Per role, the number of host vertices some embedding sends it to.
    pub role_counts: Vec<usize>,
    /// Host vertices in no copy.
    pub uncovered: Vec<usize>,
}

/// A role x can be played by x' when some embedding of the pattern into
/// the host sends x to x'.
pub fn check_th2(g: &HostGraph, h: &PatternGraph) -> Result<Th2Report, FactorError> {
    check_compat(g, h)?;
    let n = g.vertex_count();
    let k = h.vertex_count();
    let classes = identity_classes(g, k);
    let mut plays = vec![vec![false; n]; k];
    for (role, row) in plays.iter_mut().enumerate() {
        let e = Embedder::new(g, h, classes.clone(), Some(role));
        for (v, slot) in row.iter_mut().enumerate() {
            *slot = e.run(Some(v), &mut |_| ControlFlow::Break(())).is_break();
        }
    }
    let role_counts: Vec<usize> = plays.iter().map(|row| row.iter().filter(|&&b| b).count()).collect();
    let uncovered: Vec<usize> = (0..n).filter(|&v| (0..k).all(|r| !plays[r][v])).collect();
    Ok(Th2Report {
        every_vertex_covered: uncovered.is_empty(),
        roles_realizable: k > 0 && role_counts.iter().all(|&c| c * k >= n),
        role_counts,
        uncovered,
    })
}
