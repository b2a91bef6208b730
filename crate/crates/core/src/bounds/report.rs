/// Where a bound input came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    ClosedForm,
    Empirical,
    Supplied,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub gap: Source,
    pub mutual_information: Source,
}

/// Bound evaluations for one experiment point. A bound that does not apply
/// to the experiment's loss is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lb_thm2: Option<f64>,
    pub lb_thm3: Option<f64>,
    pub lb_thm4: Option<f64>,
    pub ub_thm5: Option<f64>,
    pub r_max_star: Option<f64>,
    pub mi_nats: Option<f64>,
    pub gap: f64,
    /// The reported lower bound fell back to the prior probability.
    pub prior_binds: bool,
    pub provenance: Provenance,
}

impl BoundReport {
    /// Tightest available lower bound.
    pub fn lower(&self) -> Option<f64> {
        [self.lb_thm2, self.lb_thm3, self.lb_thm4]
            .into_iter()
            .flatten()
            .reduce(f64::max)
    }
}
