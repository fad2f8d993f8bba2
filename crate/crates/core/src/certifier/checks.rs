//! The inequality catalogue. Every strict check is a slack function that must
//! be positive; it is written once over [`Scalar`] so the same formula runs in
//! plain floating point and in interval arithmetic.

use serde::{Deserialize, Serialize};

use crate::geometry::{leg_forms, saddle_forms, ConeConfig, Leg};
use crate::interval::{IntervalError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    BH1,
    BH2,
    BH3,
    BH4,
    BH5,
    BH6,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::BH1,
        Condition::BH2,
        Condition::BH3,
        Condition::BH4,
        Condition::BH5,
        Condition::BH6,
    ];
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Point on a leg: `t = 0` is the left end (a or c), `t = 1` the right end.
pub fn leg_point<S: Scalar>(leg: Leg, mu: S, t: S) -> Result<S, IntervalError> {
    let l = leg_forms(mu)?;
    Ok(match leg {
        Leg::A => l.a + t * (l.b - l.a),
        Leg::B => l.c + t * (l.d - l.c),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrictCheck {
    LegLeftInCube,
    LegRightInCube,
    LegsDisjoint,
    EscapeOuterLeft,
    EscapeOuterRight,
    EscapeMiddle,
    PAfterLegStart,
    PBeforeLegEnd,
    QAfterLegStart,
    QBeforeLegEnd,
    SConeEscape(Leg),
    UConeInvariance(Leg),
    UuImageDominance(Leg),
    UuAperture,
    ExpansionSteep(Leg),
    ExpansionShallow,
    UConeNormDominance,
    SConeContraction(Leg),
    UpperCornerInside(Leg),
    LowerCornerInside(Leg),
    L1BelowTop,
    L2AboveBottom,
    CenterExpanding,
    PTildeInRange,
    QTildeInRange,
    KeepRightOfP,
    KeepLeftOfQ,
    CrossingPOnLegB,
    CrossingQOnLegA,
    GapExceedsSpread,
    SpreadBound,
    GapLowerBound,
}

impl StrictCheck {
    pub fn all() -> Vec<StrictCheck> {
        use StrictCheck::*;
        let mut v = vec![
            LegLeftInCube,
            LegRightInCube,
            LegsDisjoint,
            EscapeOuterLeft,
            EscapeOuterRight,
            EscapeMiddle,
            PAfterLegStart,
            PBeforeLegEnd,
            QAfterLegStart,
            QBeforeLegEnd,
        ];
        for leg in [Leg::A, Leg::B] {
            v.extend([SConeEscape(leg), UConeInvariance(leg), UuImageDominance(leg)]);
        }
        v.push(UuAperture);
        v.extend([ExpansionSteep(Leg::A), ExpansionSteep(Leg::B)]);
        v.extend([ExpansionShallow, UConeNormDominance]);
        v.extend([SConeContraction(Leg::A), SConeContraction(Leg::B)]);
        for leg in [Leg::A, Leg::B] {
            v.extend([UpperCornerInside(leg), LowerCornerInside(leg)]);
        }
        v.extend([
            L1BelowTop,
            L2AboveBottom,
            CenterExpanding,
            PTildeInRange,
            QTildeInRange,
            KeepRightOfP,
            KeepLeftOfQ,
            CrossingPOnLegB,
            CrossingQOnLegA,
            GapExceedsSpread,
            SpreadBound,
            GapLowerBound,
        ]);
        v
    }

    pub fn condition(self) -> Condition {
        use StrictCheck::*;
        match self {
            LegLeftInCube | LegRightInCube | LegsDisjoint | EscapeOuterLeft | EscapeOuterRight | EscapeMiddle
            | PAfterLegStart | PBeforeLegEnd | QAfterLegStart | QBeforeLegEnd => Condition::BH1,
            SConeEscape(_) | UConeInvariance(_) | UuImageDominance(_) | UuAperture | ExpansionSteep(_)
            | ExpansionShallow | UConeNormDominance | SConeContraction(_) => Condition::BH2,
            UpperCornerInside(_) | LowerCornerInside(_) => Condition::BH3,
            L1BelowTop | L2AboveBottom => Condition::BH4,
            CenterExpanding | PTildeInRange | QTildeInRange | KeepRightOfP | KeepLeftOfQ | CrossingPOnLegB
            | CrossingQOnLegA => Condition::BH5,
            GapExceedsSpread | SpreadBound | GapLowerBound => Condition::BH6,
        }
    }

    /// The leg whose points are an extra variable of the check, if any.
    pub fn leg(self) -> Option<Leg> {
        use StrictCheck::*;
        match self {
            SConeEscape(l) | UConeInvariance(l) | UuImageDominance(l) | ExpansionSteep(l) | SConeContraction(l)
            | UpperCornerInside(l) | LowerCornerInside(l) => Some(l),
            _ => None,
        }
    }

    pub fn name(self) -> String {
        use StrictCheck::*;
        let base = match self {
            LegLeftInCube => "bh1.leg_a_inside_cube",
            LegRightInCube => "bh1.leg_b_inside_cube",
            LegsDisjoint => "bh1.legs_disjoint",
            EscapeOuterLeft => "bh1.escape_left_of_a",
            EscapeOuterRight => "bh1.escape_right_of_d",
            EscapeMiddle => "bh1.escape_between_b_c",
            PAfterLegStart => "bh1.p_right_of_a",
            PBeforeLegEnd => "bh1.p_left_of_b",
            QAfterLegStart => "bh1.q_right_of_c",
            QBeforeLegEnd => "bh1.q_left_of_d",
            SConeEscape(_) => "bh2.s_cone_escape",
            UConeInvariance(_) => "bh2.u_cone_invariance",
            UuImageDominance(_) => "bh2.uu_cone_image_dominance",
            UuAperture => "bh2.uu_cone_aperture",
            ExpansionSteep(_) => "bh2.expansion_steep",
            ExpansionShallow => "bh2.expansion_shallow",
            UConeNormDominance => "bh2.u_cone_norm_dominance",
            SConeContraction(_) => "bh2.s_cone_contraction",
            UpperCornerInside(_) => "bh3.upper_corner_inside",
            LowerCornerInside(_) => "bh3.lower_corner_inside",
            L1BelowTop => "bh4.l1_below_top",
            L2AboveBottom => "bh4.l2_above_bottom",
            CenterExpanding => "bh5.center_expanding",
            PTildeInRange => "bh5.p_tilde_in_range",
            QTildeInRange => "bh5.q_tilde_in_range",
            KeepRightOfP => "bh5.keep_right_of_p",
            KeepLeftOfQ => "bh5.keep_left_of_q",
            CrossingPOnLegB => "bh5.crossing_p_on_leg_b",
            CrossingQOnLegA => "bh5.crossing_q_on_leg_a",
            GapExceedsSpread => "bh6.gap_exceeds_spread",
            SpreadBound => "bh6.spread_le_12.16",
            GapLowerBound => "bh6.gap_ge_31.4",
        };
        match self.leg() {
            Some(l) => format!("{base}.{}", l.symbol()),
            None => base.to_string(),
        }
    }

    /// Extra remark carried into reports.
    pub fn note(self) -> Option<&'static str> {
        match self {
            StrictCheck::KeepLeftOfQ => Some("mirror of keep_right_of_p: slope -1/2 line through Q, image of leg A"),
            _ => None,
        }
    }

    /// Sensitivity of the slack to a perturbation of the second component of
    /// the map: `(w_val, w_jac)` multiply the sup over the cube of `|h|` and
    /// of `|∂h/∂y| + |∂h/∂z|`, where `h = κyz + ηz²`.
    ///
    /// Position checks compare roots of `μ + y² + h = const`; each root moves
    /// by at most `sup|h| / |2y| < sup|h|/4` on the legs, and the lifted
    /// coordinates `r̃ = r/(1 − ξ)` by less than `sup|h|`. Cone checks compare
    /// `|v₁| = |(2y + h_y)v + h_z w|` against fixed multiples of `|v|`.
    pub fn weights(self, cone: &ConeConfig) -> (f64, f64) {
        use StrictCheck::*;
        match self {
            LegLeftInCube | LegRightInCube | LegsDisjoint | EscapeOuterLeft | EscapeOuterRight | EscapeMiddle
            | PAfterLegStart | PBeforeLegEnd | QAfterLegStart | QBeforeLegEnd => (1.0, 0.0),
            SConeEscape(_) | UConeInvariance(_) => (0.0, 2.0),
            UuImageDominance(_) => (0.0, 1.0),
            // 4y²v² − 2ξ|v||w| with 2y → 2y ± δ and |w| ≤ 6.5|v|: 4|y|δ + 2·6.5δ + ... ≤ 113δ on |y| ≤ 4
            ExpansionSteep(_) => (0.0, 113.0),
            // pure parameter inequalities: the perturbation never enters them
            UuAperture | ExpansionShallow | UConeNormDominance | CenterExpanding => (0.0, 0.0),
            // ϑ²(2 + 4y² + ξ²) with 2|y| → 2|y| + δ: ϑ²(4·4·2)δ for |y| ≤ 4
            SConeContraction(_) => (0.0, 32.0 * cone.vartheta * cone.vartheta),
            UpperCornerInside(_) | LowerCornerInside(_) => (1.0, 0.0),
            L1BelowTop | L2AboveBottom | PTildeInRange | QTildeInRange => (1.0, 0.0),
            KeepRightOfP | KeepLeftOfQ | CrossingPOnLegB | CrossingQOnLegA => (2.0, 0.0),
            SpreadBound => (1.0, 0.0),
            GapLowerBound => (2.0, 0.0),
            GapExceedsSpread => (3.0, 0.0),
        }
    }

    /// The slack at parameters `(ξ, μ)`; `t ∈ [0, 1]` selects the point on
    /// the leg for leg checks and is ignored otherwise.
    pub fn slack<S: Scalar>(self, xi: S, mu: S, t: S, cone: &ConeConfig) -> Result<S, IntervalError> {
        use StrictCheck::*;
        let c = S::cst;
        let y = || match self.leg() {
            Some(leg) => leg_point(leg, mu, t),
            None => Err(IntervalError::InvalidBounds),
        };
        Ok(match self {
            LegLeftInCube => leg_forms(mu)?.a + 4.0,
            LegRightInCube => c(4.0) - leg_forms(mu)?.d,
            LegsDisjoint => {
                let l = leg_forms(mu)?;
                l.c - l.b
            }
            // μ + y² is monotone on each side of 0, so the image of [−4, a)
            // lies above μ + a² = 4 as soon as a < 0, and so on.
            EscapeOuterLeft => -leg_forms(mu)?.a,
            EscapeOuterRight => leg_forms(mu)?.d,
            EscapeMiddle => {
                let l = leg_forms(mu)?;
                (-l.b).min(l.c)
            }
            PAfterLegStart => saddle_forms(xi, mu)?.p - leg_forms(mu)?.a,
            PBeforeLegEnd => leg_forms(mu)?.b - saddle_forms(xi, mu)?.p,
            QAfterLegStart => saddle_forms(xi, mu)?.q - leg_forms(mu)?.c,
            QBeforeLegEnd => leg_forms(mu)?.d - saddle_forms(xi, mu)?.q,
            SConeEscape(_) => y()?.abs() * 2.0 - 1f64.max(cone.vartheta),
            UConeInvariance(_) => y()?.abs() * 2.0 - 1.0 / cone.theta,
            UuImageDominance(_) => y()?.abs() - 2.0,
            UuAperture => {
                let th = cone.theta;
                let tx = xi * th;
                c(16.0 * th * th) - (c(2.0) + tx * 2.0 + tx.sqr())
            }
            ExpansionSteep(_) => y()?.sqr() * 4.0 - xi * 13.0 - 4.0,
            ExpansionShallow => xi.sqr() - xi * (2.0 / 6.5) - 1.0,
            UConeNormDominance => c(1.0 - cone.theta),
            SConeContraction(_) => {
                let vt2 = cone.vartheta * cone.vartheta;
                c(1.0) - (c(2.0) + y()?.sqr() * 4.0 + xi.sqr()) * vt2
            }
            UpperCornerInside(_) => c(22.0) - (c(22.0) - y()?).div(xi)?,
            LowerCornerInside(_) => (c(-40.0) - y()?).div(xi)? + 40.0,
            L1BelowTop => {
                let f = saddle_forms(xi, mu)?;
                c(22.0) - ((c(4.0) - f.p) * 0.5 + f.p_tilde)
            }
            L2AboveBottom => {
                let f = saddle_forms(xi, mu)?;
                (c(-4.0) - f.q) * 0.5 + f.q_tilde + 40.0
            }
            CenterExpanding => xi - 1.0,
            PTildeInRange => {
                let pt = saddle_forms(xi, mu)?.p_tilde;
                (c(22.0) - pt).min(pt + 40.0)
            }
            QTildeInRange => {
                let qt = saddle_forms(xi, mu)?.q_tilde;
                (c(22.0) - qt).min(qt + 40.0)
            }
            KeepRightOfP => {
                let f = saddle_forms(xi, mu)?;
                let half = xi * 0.5;
                half * f.p + (c(1.0) - half) * (f.p - mu).sqrt()? + (xi - 1.0) * f.p_tilde
            }
            KeepLeftOfQ => {
                let f = saddle_forms(xi, mu)?;
                let half = xi * 0.5;
                -((xi - 1.0) * f.q_tilde + half * f.q - (c(1.0) - half) * (f.q - mu).sqrt()?)
            }
            CrossingPOnLegB => {
                let f = saddle_forms(xi, mu)?;
                let l = leg_forms(mu)?;
                let y = (f.p - mu).sqrt()?;
                (y - l.c).min(l.d - y)
            }
            CrossingQOnLegA => {
                let f = saddle_forms(xi, mu)?;
                let l = leg_forms(mu)?;
                let y = -(f.q - mu).sqrt()?;
                (y - l.a).min(l.b - y)
            }
            GapExceedsSpread => {
                let f = saddle_forms(xi, mu)?;
                let a = leg_forms(mu)?.a;
                (f.q_tilde - f.p_tilde).abs() - (xi * 0.5 + 1.0) * (f.q - a).abs()
            }
            SpreadBound => {
                let f = saddle_forms(xi, mu)?;
                let a = leg_forms(mu)?.a;
                c(12.16) - (xi * 0.5 + 1.0) * (f.q - a).abs()
            }
            GapLowerBound => {
                let f = saddle_forms(xi, mu)?;
                (f.q_tilde - f.p_tilde).abs() - 31.4
            }
        })
    }
}

/// Numeric bounds on the saddle and leg coordinates that hand proofs of the
/// horseshoe lean on. They are reported next to the BH verdicts but do not
/// enter them: the BH checks use the closed forms directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceBound {
    PLower,
    PUpper,
    PTildeLower,
    PTildeUpper,
    QLower,
    QUpper,
    QTildeLower,
    QTildeUpper,
    ALower,
    AUpper,
    BLower,
    BUpper,
    KeepTermP,
    KeepTermSqrt,
    KeepTermTilde,
    GapUpper,
    StrongExpansionP,
    StrongExpansionQ,
}

impl ReferenceBound {
    pub const ALL: [ReferenceBound; 18] = {
        use ReferenceBound::*;
        [
            PLower,
            PUpper,
            PTildeLower,
            PTildeUpper,
            QLower,
            QUpper,
            QTildeLower,
            QTildeUpper,
            ALower,
            AUpper,
            BLower,
            BUpper,
            KeepTermP,
            KeepTermSqrt,
            KeepTermTilde,
            GapUpper,
            StrongExpansionP,
            StrongExpansionQ,
        ]
    };

    pub fn name(self) -> &'static str {
        use ReferenceBound::*;
        match self {
            PLower => "p > -2.7",
            PUpper => "p < -2.5",
            PTildeLower => "p_tilde > 13",
            PTildeUpper => "p_tilde < 15",
            QLower => "q > 3.5",
            QUpper => "q < 3.71",
            QTildeLower => "q_tilde > -20.6",
            QTildeUpper => "q_tilde < -18.4",
            ALower => "a > -sqrt(14)",
            AUpper => "a < -sqrt(13)",
            BLower => "b > -sqrt(6)",
            BUpper => "b < -sqrt(5)",
            KeepTermP => "(xi/2) p > -1.6065",
            KeepTermSqrt => "(1 - xi/2) sqrt(p - mu) > 1.014",
            KeepTermTilde => "(xi - 1) p_tilde > 2.34",
            GapUpper => "|q_tilde - p_tilde| <= 35.6",
            StrongExpansionP => "2|p| > 5",
            StrongExpansionQ => "2|q| > 7",
        }
    }

    pub fn slack<S: Scalar>(self, xi: S, mu: S) -> Result<S, IntervalError> {
        use ReferenceBound::*;
        let c = S::cst;
        let f = saddle_forms(xi, mu)?;
        let l = leg_forms(mu)?;
        Ok(match self {
            PLower => f.p + 2.7,
            PUpper => c(-2.5) - f.p,
            PTildeLower => f.p_tilde - 13.0,
            PTildeUpper => c(15.0) - f.p_tilde,
            QLower => f.q - 3.5,
            QUpper => c(3.71) - f.q,
            QTildeLower => f.q_tilde + 20.6,
            QTildeUpper => c(-18.4) - f.q_tilde,
            ALower => l.a + c(14.0).sqrt()?,
            AUpper => -c(13.0).sqrt()? - l.a,
            BLower => l.b + c(6.0).sqrt()?,
            BUpper => -c(5.0).sqrt()? - l.b,
            KeepTermP => xi * 0.5 * f.p + 1.6065,
            KeepTermSqrt => (c(1.0) - xi * 0.5) * (f.p - mu).sqrt()? - 1.014,
            KeepTermTilde => (xi - 1.0) * f.p_tilde - 2.34,
            GapUpper => c(35.6) - (f.q_tilde - f.p_tilde).abs(),
            StrongExpansionP => f.p.abs() * 2.0 - 5.0,
            StrongExpansionQ => f.q.abs() * 2.0 - 7.0,
        })
    }
}

/// Exact algebraic relations of the construction. They hold identically in
/// real arithmetic, so they are checked as floating-point residuals at sample
/// parameters rather than as strict inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    ImageTopAtA,
    ImageTopAtD,
    ImageBottomAtB,
    ImageBottomAtC,
    SymmetryAD,
    SymmetryBC,
    CornerImages(Leg),
    SaddleRelations,
    PhiFixesPTilde,
    PhiFixesQTilde,
    ReturnIntervalP,
    ReturnIntervalQ,
}

pub const IDENTITY_TOLERANCE: f64 = 1e-10;

impl Identity {
    pub const ALL: [Identity; 13] = {
        use Identity::*;
        [
            ImageTopAtA,
            ImageTopAtD,
            ImageBottomAtB,
            ImageBottomAtC,
            SymmetryAD,
            SymmetryBC,
            CornerImages(Leg::A),
            CornerImages(Leg::B),
            SaddleRelations,
            PhiFixesPTilde,
            PhiFixesQTilde,
            ReturnIntervalP,
            ReturnIntervalQ,
        ]
    };

    pub fn condition(self) -> Condition {
        use Identity::*;
        match self {
            ImageTopAtA | ImageTopAtD | ImageBottomAtB | ImageBottomAtC | SymmetryAD | SymmetryBC => Condition::BH1,
            CornerImages(_) => Condition::BH3,
            SaddleRelations | PhiFixesPTilde | PhiFixesQTilde | ReturnIntervalP | ReturnIntervalQ => Condition::BH5,
        }
    }

    pub fn name(self) -> String {
        use Identity::*;
        match self {
            ImageTopAtA => "bh1.mu_plus_a2_eq_4".into(),
            ImageTopAtD => "bh1.mu_plus_d2_eq_4".into(),
            ImageBottomAtB => "bh1.mu_plus_b2_eq_-4".into(),
            ImageBottomAtC => "bh1.mu_plus_c2_eq_-4".into(),
            SymmetryAD => "bh1.a_eq_-d".into(),
            SymmetryBC => "bh1.b_eq_-c".into(),
            CornerImages(l) => format!("bh3.corner_images.{}", l.symbol()),
            SaddleRelations => "bh5.saddle_relations".into(),
            PhiFixesPTilde => "bh5.phi_p_fixes_p_tilde".into(),
            PhiFixesQTilde => "bh5.phi_q_fixes_q_tilde".into(),
            ReturnIntervalP => "bh5.phi_p_return_interval".into(),
            ReturnIntervalQ => "bh5.phi_q_return_interval".into(),
        }
    }

    /// Absolute residual at one parameter point.
    pub fn residual(self, xi: f64, mu: f64) -> Result<f64, IntervalError> {
        use Identity::*;
        let l = leg_forms(mu)?;
        let f = saddle_forms(xi, mu)?;
        let phi = |rt: f64, z: f64| xi * z + (1.0 - xi) * rt;
        let ret = |rt: f64| {
            let shift = (1.0 - xi) * rt;
            let alpha = (-40.0 - shift) / xi;
            let beta = (22.0 - shift) / xi;
            (phi(rt, alpha) + 40.0).abs().max((phi(rt, beta) - 22.0).abs())
        };
        Ok(match self {
            ImageTopAtA => (mu + l.a * l.a - 4.0).abs(),
            ImageTopAtD => (mu + l.d * l.d - 4.0).abs(),
            ImageBottomAtB => (mu + l.b * l.b + 4.0).abs(),
            ImageBottomAtC => (mu + l.c * l.c + 4.0).abs(),
            SymmetryAD => (l.a + l.d).abs(),
            SymmetryBC => (l.b + l.c).abs(),
            CornerImages(leg) => {
                let (y0, y1) = match leg {
                    Leg::A => (l.a, l.b),
                    Leg::B => (l.c, l.d),
                };
                let mut worst = 0f64;
                for y in [y0, y1] {
                    let target_y = if y.abs() > 3.0 { 4.0 } else { -4.0 };
                    for (z, target_z) in [((22.0 - y) / xi, 22.0), ((-40.0 - y) / xi, -40.0)] {
                        worst = worst
                            .max((mu + y * y - target_y).abs())
                            .max((xi * z + y - target_z).abs());
                    }
                }
                worst
            }
            SaddleRelations => {
                let mut worst = 0f64;
                for (r, rt) in [(f.p, f.p_tilde), (f.q, f.q_tilde)] {
                    worst = worst.max((mu + r * r - r).abs()).max(((1.0 - xi) * rt - r).abs());
                }
                worst
            }
            PhiFixesPTilde => (phi(f.p_tilde, f.p_tilde) - f.p_tilde).abs(),
            PhiFixesQTilde => (phi(f.q_tilde, f.q_tilde) - f.q_tilde).abs(),
            ReturnIntervalP => ret(f.p_tilde),
            ReturnIntervalQ => ret(f.q_tilde),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;

    const XI: f64 = 1.185;
    const MU: f64 = -9.5;

    fn at(check: StrictCheck, t: f64) -> f64 {
        check.slack(XI, MU, t, &ConeConfig::default()).unwrap()
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<String> = StrictCheck::all().into_iter().map(|c| c.name()).collect();
        names.extend(Identity::ALL.iter().map(|i| i.name()));
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn every_condition_has_checks() {
        for cond in Condition::ALL {
            assert!(StrictCheck::all().iter().any(|c| c.condition() == cond));
        }
    }

    #[test]
    fn reference_point_values() {
        // |q̃ − p̃| = √39 / 0.185
        let gap = at(StrictCheck::GapLowerBound, 0.0) + 31.4;
        assert!((gap - 33.756_745_937_288_639).abs() < 1e-9);
        // (ξ/2 + 1)|q − a| with a = −√13.5
        let spread = 12.16 - at(StrictCheck::SpreadBound, 0.0);
        assert!((spread - 11.620_048_279_298_041).abs() < 1e-8, "{spread}");
        // z̃ − p̃ = |p|(2 − ξ)
        let keep = at(StrictCheck::KeepRightOfP, 0.0);
        assert!((keep - 2.137_336_684_347_347).abs() < 1e-12, "{keep}");
        // z¹ at a: (22 + √13.5)/1.185
        let upper = at(StrictCheck::UpperCornerInside(Leg::A), 0.0);
        assert!((upper - (22.0 - (22.0 + 13.5f64.sqrt()) / 1.185)).abs() < 1e-12);
        assert!((upper - 0.333_979_227).abs() < 1e-8);
        let lower = at(StrictCheck::LowerCornerInside(Leg::B), 1.0);
        assert!((lower - (40.0 - (40.0 + 13.5f64.sqrt()) / 1.185)).abs() < 1e-12);
        // z¹(4) = ½(4 − p) + p̃ ≈ 17.487
        let l1 = 22.0 - at(StrictCheck::L1BelowTop, 0.0);
        assert!((l1 - 17.486_919_765_541_217).abs() < 1e-9, "{l1}");
        let l2 = at(StrictCheck::L2AboveBottom, 0.0) - 40.0;
        assert!((l2 - -23.392_325_170_946_622).abs() < 1e-9, "{l2}");
    }

    #[test]
    fn mirror_keep_closed_form() {
        // −(w̃ − q̃) = q(2 − ξ)
        let q = (1.0 + 39f64.sqrt()) / 2.0;
        assert!((at(StrictCheck::KeepLeftOfQ, 0.0) - q * (2.0 - XI)).abs() < 1e-12);
    }

    #[test]
    fn parameter_only_margins() {
        let cone = ConeConfig::default();
        let shallow = StrictCheck::ExpansionShallow.slack(1.18, MU, 0.0, &cone).unwrap();
        assert!((shallow - 0.029_323_076_923_077).abs() < 1e-12);
        let aperture = StrictCheck::UuAperture.slack(1.19, MU, 0.0, &cone).unwrap();
        assert!((aperture - 0.455_975).abs() < 1e-12);
    }

    #[test]
    fn leg_parameterization_hits_endpoints() {
        let l = leg_forms(MU).unwrap();
        assert_eq!(leg_point(Leg::A, MU, 0.0).unwrap(), l.a);
        assert_eq!(leg_point(Leg::A, MU, 1.0).unwrap(), l.b);
        assert_eq!(leg_point(Leg::B, MU, 0.0).unwrap(), l.c);
        assert_eq!(leg_point(Leg::B, MU, 1.0).unwrap(), l.d);
    }

    #[test]
    fn identities_vanish() {
        for id in Identity::ALL {
            let r = id.residual(XI, MU).unwrap();
            assert!(r < IDENTITY_TOLERANCE, "{} {r}", id.name());
        }
    }

    #[test]
    fn interval_slack_encloses_float_slack() {
        let cone = ConeConfig::default();
        let xi = Interval::point(XI);
        let mu = Interval::point(MU);
        let t = Interval::point(0.3);
        for c in StrictCheck::all() {
            let f = c.slack(XI, MU, 0.3, &cone).unwrap();
            let i = c.slack(xi, mu, t, &cone).unwrap();
            assert!(i.contains(f), "{}", c.name());
        }
        for r in ReferenceBound::ALL {
            let f = r.slack(XI, MU).unwrap();
            let i = r.slack(xi, mu).unwrap();
            assert!(i.contains(f), "{}", r.name());
        }
    }
}
