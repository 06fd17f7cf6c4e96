//! Named checks with verdicts, grouped into reports.
//!
//! Every check is tied to a [`Rule`], whose anchor is the mathematical
//! statement being tested. A FAIL therefore always names what it violates.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    /// Hypothesis not met or quantity not computable; never fatal.
    Skip,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
        })
    }
}

macro_rules! rules {
    ($($variant:ident => $id:literal, $anchor:literal;)*) => {
        /// Every rule the engine can check.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Rule { $($variant),* }

        impl Rule {
            pub const ALL: &'static [Rule] = &[$(Rule::$variant),*];

            pub fn id(self) -> &'static str {
                match self { $(Rule::$variant => $id),* }
            }

            pub fn anchor(self) -> &'static str {
                match self { $(Rule::$variant => $anchor),* }
            }
        }
    };
}

rules! {
    Ambient => "ambient", "dim M = 8 and b₂(M) = 1";
    SemiFree => "semi-free", "every weight lies in {−1, 0, +1}";
    TangentWeights => "tangent-weights", "#{zero weights} = dim F / 2";
    NormalVariant => "normal-variant", "normal data matches the component type and its nonzero weights";
    UniqueMinimum => "unique-minimum", "b₀(M) = #{F : λ_F = 0} = 1";
    UniqueMaximum => "unique-maximum", "b₈(M) = #{F : λ_F = (8 − dim F)/2} = 1";
    LevelOrder => "level-order", "H(F) = −Σwᵢ and H_min < H(F) < H_max for interior F";
    KirwanB2 => "kirwan-b2", "b₂(M) = Σ_F b_{2−2λ_F}(F) = 1";
    Poincare => "poincare-duality", "b_i(M) = b_{8−i}(M)";
    SymplecticB4 => "symplectic-b4", "[ω]² ≠ 0 forces b₄(M) ≥ 1";
    Abbv => "abbv", "Σ_F ∫_F 1/e^{S¹}(N_F) = 0";
    SeriesOracle => "series-oracle", "closed-form contribution = ∫_F [t⁻⁴] e^{S¹}(N_F)⁻¹";
    Signature => "signature", "M^{ℤ₂}·M^{ℤ₂} = σ(M) = b₄(M) for a positive definite intersection form";
    IndexConsistent => "index-consistent", "ι(M) = |∫_a c₁(M)| agrees on every positive-dimensional extremal component";
    IndexDivides => "index-divides", "ι(M) divides ∫_C c₁(M) for every class C in an extremal component";
    AreaPositive => "area-positive", "∫_C ω > 0 on the positive generators of H₂(F)";
    SphereMaxArea2 => "sphere-max-area-2", "no fixed points in H⁻¹(0,2) and a {−1,−1,1,1} point ⇒ a sphere of area 2 in M_max";
    SphereMinArea => "sphere-min-area", "no fixed points in H⁻¹(H_min,0) and a λ = 2 point ⇒ a sphere of area |H_min| in M_min";
    SphereMinSpan => "sphere-min-span", "d₂ = 4 and every interior component an isolated λ = 2 point ⇒ a sphere of area H_max − H_min in M_min";
    SphereExtremalSpan => "sphere-extremal-span", "d₂ ≤ 4 and no interior components ⇒ spheres of area H_max − H_min in M_min and M_max";
    SphereSurface => "sphere-surface-relation", "a {0,−1,1,1} surface Σ with H⁻¹(H_min,H(Σ)) fixed-point free has 3a₁ = 2 + a₁ + a₂ + a₃";
    MiddleSplit => "middle-split", "in shape (0,0) the middle component has |H_min|·c₁(L₋) = |H_max|·c₁(L₊) = c₁(M)|_F";
    IndexAtLeast4 => "index-at-least-4", "shape (0,0) with an interior 4-dimensional component ⇒ ι(M) ≥ 4";
    IndexOdd => "index-odd", "isolated minimum and only {0,−1,1,1} surfaces in H⁻¹(H_min,0) ⇒ ι(M) odd";
    IndexAtMost2 => "index-at-most-2", "isolated minimum and only {−1,1,1,1} points in H⁻¹(H_min,0) ⇒ ι(M) ≤ 2";
    DhPositiveMin => "dh-positive-min", "DH(c) = ∫_{M_c}[ω_c]³ > 0 on the regular interval above H_min";
    DhPositiveMax => "dh-positive-max", "DH(c) = ∫_{M_c}[ω_c]³ > 0 on the regular interval below H_max";
    DhPositive => "dh-positive", "DH(c) > 0 on every regular interval of the profile";
    DhTwoSided => "dh-two-sided", "DH pieces built from below and from above agree: Σ_F R_F ≡ 0";
    DhVolume => "dh-volume", "∫_M c₁⁴ = 4·∫ DH(c) dc";
    VolumeByHalves => "volume-by-halves", "∫_M c₁⁴ = 240 + 176 − 16b₄ = 416 − 16b₄, or 2(176) − 16b₄ = 352 − 16b₄";
    B4Bound => "b4-bound", "12x + 6x² + (1 − k)x³ > 0 on (0,2) forces k ≤ 7, so b₄(M) ≤ 14";
    ShapeKirwan => "shape-kirwan", "Kirwan sums with b₀ = b₂ = b₆ = b₈ = 1";
    ShapeFourDim => "shape-four-dim", "b₄(M) ≥ 1 needs a fixed component of dimension ≥ 4";
    FanoIndex => "fano-index", "a semi-free action forces 1 < ι(M)";
    FanoAutomorphisms => "fano-automorphisms", "a variety with finite automorphism group has no ℂ*-action";
    DegreeGenus => "degree-genus", "∫c₁⁴ = 16·d = 32(g − 1) for index 2";
    FanoVolume => "fano-volume", "∫c₁⁴ must equal an admissible volume for the same ι and b₄";
    FpClass => "fp-class", "fixed-point data equal to a catalog entry up to component symmetries";
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub anchor: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    pub fn new(rule: Rule, verdict: Verdict, detail: impl Into<String>) -> Self {
        Check {
            id: rule.id(),
            anchor: rule.anchor(),
            verdict,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.verdict, self.id, self.detail)?;
        if self.verdict == Verdict::Fail {
            write!(f, " [{}]", self.anchor)?;
        }
        Ok(())
    }
}

/// Ordered list of checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ConstraintReport {
    pub checks: Vec<Check>,
}

impl ConstraintReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rule: Rule, verdict: Verdict, detail: impl Into<String>) {
        self.checks.push(Check::new(rule, verdict, detail));
    }

    pub fn check(&mut self, rule: Rule, ok: bool, detail: impl Into<String>) {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self.push(rule, verdict, detail);
    }

    pub fn skip(&mut self, rule: Rule, detail: impl Into<String>) {
        self.push(rule, Verdict::Skip, detail);
    }

    pub fn extend(&mut self, other: ConstraintReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn verdict_of(&self, rule: Rule) -> Option<Verdict> {
        self.checks
            .iter()
            .filter(|c| c.id == rule.id())
            .map(|c| c.verdict)
            .max()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}
