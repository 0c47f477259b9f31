//! Pinned numerical and Monte Carlo tolerances.
//!
//! Statistical tolerances were calibrated by pilot runs; each entry records
//! the pilot result it was derived from.

/// A tolerance with a short note on where its value comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub name: &'static str,
    pub value: f64,
    pub provenance: &'static str,
}

macro_rules! tolerances {
    ($($id:ident = $value:expr, $prov:expr;)*) => {
        $(pub const $id: Tolerance = Tolerance {
            name: stringify!($id),
            value: $value,
            provenance: $prov,
        };)*

        pub const ALL: &[Tolerance] = &[$($id),*];
    };
}

tolerances! {
    CONTAINMENT = 1e-9, "floating-point slack on f1 <= E <= exact_upper";
    HERMITIAN = 1e-10, "eigvalsh input asymmetry";
    PSD_CLAMP = 1e-10, "negative eigenvalues clamped to zero";
    TRACE = 1e-9, "trace of reduced density matrices";
    PAGE_RELATIVE = 0.01, "Page law, 30 samples at alpha=128; pilot spread 0.05%";
    MPD_KS = 0.02, "pooled ESD vs MPD CDF; pilot KS 0.004 at alpha=600";
    DOMINANT_SIGNAL = 0.02, "mean lambda0 vs alpha*gamma^2 for alpha*gamma^2 >= 4 lambda+";
    DOMINANT_EDGE = 0.05, "mean lambda0 vs lambda+ at gamma=0; pilot 4% below";
    DOMINANT_BULK_KS = 0.05, "non-dominant spectrum of decentralized samples vs MPD";
    CONDITIONAL_MEAN = 0.05, "binned entropy vs flexible_E at alpha=beta=64; pilot 0.005";
    RENYI_CONDITIONAL = 0.05, "binned Renyi d=1,2 vs flexible closed forms; pilot 0.001";
    GAP_CONDITIONAL = 0.1, "binned gap vs flexible_gap away from edges; pilot max 0.089";
    TABLE_QUADRATURE = 1e-7, "moment-table coefficients vs quadrature";
    QFT_LAMBDA0 = 0.02, "|delta lambda0| under QFT, alpha=128; 100-sample pilot";
    QFT_ENTROPY = 0.05, "|delta E| under QFT, alpha=128; 100-sample pilot";
    FLEXIBLE_SLACK = 0.02, "scenario points above flexible_E are reported past this";
    SHOR_GRID = 1e-6, "Shor cluster and f_shor membership";
    SHOR_CEILING = 0.05, "Shor max entropy above e_half";
    GROVER_ENTROPY = 1e-6, "post-diffusion entropy <= ln 2";
    GROVER_SUCCESS = 0.99, "final success probability, unique solution";
}

#[cfg(test)]
mod tests {
    #[test]
    fn names_unique() {
        let mut names: Vec<_> = super::ALL.iter().map(|t| t.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), super::ALL.len());
    }
}
