//! The fixed table of statements a report record can be anchored to.
//!
//! Every record names the mathematical statement it exercises. Anchors are
//! plain formulas so that a report is readable on its own.

pub const SINGULAR_VALUES: &str = "σ_1 ≥ … ≥ σ_n ≥ 0 are the singular values of A";
pub const DISTORTION: &str = "K_O(A) = ‖A‖ⁿ / det A, K_I(A) = K_O(A⁻¹)";
pub const CONE: &str = "A ∈ M_n(δ, K) ⟺ ⟨Aξ, ξ⟩ ≥ δ|Aξ||ξ| for all ξ and ‖A‖ⁿ ≤ K det A";
pub const CONE_NESTING: &str = "M_n(δ₁) ⊂ M_n(δ₂) for δ₁ > δ₂";
pub const SPECTRAL: &str = "A ∈ M_n(δ) for some δ > −1 ⟺ Spec(A) ∩ (−∞, 0) = ∅";
pub const COURANT_FISCHER: &str = "σ_1 = max_{|ξ|=1} |Aξ|, σ_n = min_{|ξ|=1} |Aξ|";
pub const SHIFT_OUTER: &str = "K_O(A + λI) ≤ C(δ, n) K_O(A), C(δ, n) = (2 / √(1 − (δ∧0)²))^(n−1)";
pub const SHIFT_INNER: &str = "K_I(A + λI) ≤ C(δ, n) K_I(A)";
pub const SHIFT_INVERSE: &str = "‖(A + λI)⁻¹‖ ≤ 1 / (λ √(1 − (δ∧0)²))";
pub const SHIFT_SANDWICH: &str = "√(1 − (δ∧0)²) max{σ_j(A), λ} ≤ σ_j(A + λI) ≤ 2 max{σ_j(A), λ}";
pub const SHIFT_DET: &str = "det(A + λI) > 0 for A ∈ M_n(δ), δ > −1";
pub const REVERSE_TRIANGLE: &str = "⟨u, v⟩ ≥ δ|u||v| ⟹ |u + v| ≥ √(1 − δ²) max{|u|, |v|}";
pub const SECTOR: &str = "Df ∈ M_2(δ) ⟺ |arg f_z| + arcsin|f_z̄ / f_z| ≤ arccos δ";
pub const CLOSED_FORM: &str =
    "|arg f_z| + arcsin|f_z̄ / f_z| ≤ arccos δ ⟺ |f_z̄| + δ|im f_z| ≤ √(1 − δ²) re f_z, or δ ≤ 0 and |f_z̄| ≤ |f_z| ≤ re f_z / √(1 − δ²)";
pub const CLOSED_FORM_NONNEGATIVE: &str = "δ ≥ 0: Df ∈ M_2(δ) ⟺ |f_z̄| + δ|im f_z| ≤ √(1 − δ²) re f_z";
pub const TAU_K: &str = "τ_K = 2√K / (K + 1) = √(1 − k²), K = (1 + k) / (1 − k)";
pub const COROLLARY_DELTA: &str = "δ = cos(π − arccos τ + arcsin k) > −1 ⟺ τ < τ_K";
pub const QUASIREGULAR: &str = "|f_z̄| ≤ k|f_z|, K = (1 + k) / (1 − k)";
pub const CASE1_BELTRAMI: &str = "f(z) = az² + b z̄², a = √(1 − k²) + ik, b = −ik: |f_z̄| = k|f_z|";
pub const CASE1_REAL_PART: &str = "re f_z ≥ −√(1 − k²)|f_z| off the coordinate axes";
pub const CASE1_SYMMETRY: &str = "f(z) = f(−z), f(z) = conj f(z̄) for re z ≥ 0";
pub const CASE2_CONTINUITY: &str = "2z² / (|z|√(1 + δ²)) = (i − ε)z − i z̄ on re z = −δ im z, f(z) = conj f(z̄)";
pub const CASE2_BELTRAMI: &str = "|f_z̄| ≤ k|f_z|, k = 1 / √(1 + ε²)";
pub const CASE2_REAL_PART: &str = "re f_z ≥ −√(1 − k²)|f_z|";
pub const WINDING: &str = "μ(y, f, B) = winding number of f|∂B about y";
pub const INDEX: &str = "i(x, f) = μ(f(x), f, B(x, r)) for small r; i(0, f) = 2 at a branch point";
pub const COLLISION: &str = "#{f⁻¹(y) ∩ E} ≥ 2 for some y";
pub const BALL_JACOBIAN: &str = "f(x) = (x', ε s(x) x_n): a_nj = ε x_j x_n / s(x), a_nn = ε s(x)";
pub const BALL_CONE: &str = "Df(x) ∈ M_n(−ε) and J(x, f) > 0 off the axis s(x) = 0";
pub const INTEGRABILITY: &str = "∫_h^1 s^(n−2−q) ds stays bounded as h → 0 ⟺ q < n − 1";
pub const MONOTONICITY: &str = "z^(5/2): ⟨f(e^{iθ}) − f(e^{−iθ}), e^{iθ} − e^{−iθ}⟩ = 4 sin(5θ/2) sin θ";
pub const REGULARIZED_LIMINF: &str = "liminf |f^λ(x) − f^λ(a)| / |x − a| ≥ λ √(1 − (δ∧0)²) / 2";
pub const REGULARIZED_DEGREE: &str = "μ(0, f^λ, B(0, r)) = μ(0, f^Λ, B(0, r)) along λ ↦ f^λ with 0 ∉ f^λ(∂B)";
pub const FINITE_DIFFERENCES: &str = "Df(x) = lim (f(x + h e_j) − f(x − h e_j)) / 2h";

pub const ALL: &[&str] = &[
    SINGULAR_VALUES,
    DISTORTION,
    CONE,
    CONE_NESTING,
    SPECTRAL,
    COURANT_FISCHER,
    SHIFT_OUTER,
    SHIFT_INNER,
    SHIFT_INVERSE,
    SHIFT_SANDWICH,
    SHIFT_DET,
    REVERSE_TRIANGLE,
    SECTOR,
    CLOSED_FORM,
    CLOSED_FORM_NONNEGATIVE,
    TAU_K,
    COROLLARY_DELTA,
    QUASIREGULAR,
    CASE1_BELTRAMI,
    CASE1_REAL_PART,
    CASE1_SYMMETRY,
    CASE2_CONTINUITY,
    CASE2_BELTRAMI,
    CASE2_REAL_PART,
    WINDING,
    INDEX,
    COLLISION,
    BALL_JACOBIAN,
    BALL_CONE,
    INTEGRABILITY,
    MONOTONICITY,
    REGULARIZED_LIMINF,
    REGULARIZED_DEGREE,
    FINITE_DIFFERENCES,
];

pub fn is_known(anchor: &str) -> bool {
    ALL.contains(&anchor)
}
