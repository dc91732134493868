"""Statement corpus used for round-trip checks and transformation probing."""

from functools import lru_cache

ALPHA_PAIR = (
    "theorem t1 (x : Nat) : P x := by sorry",
    "theorem t2 (y : Nat) : P y := by sorry",
)

# Label / prediction pairs where an equivalence checker and a human disagree.
# The modulo pair carries a reconstructed "% 10 = 6" tail.
CASE_STUDY = (
    "theorem thm_P : Infinite (Equiv.Perm ℕ) := by sorry",
    "theorem thm_Q : {Ω : Type u_1} [Infinite Ω] : Infinite (Equiv.Perm Ω) := by sorry",
    "example : thm_P = thm_Q := by rfl",
    "theorem thm_P : Irreducible  (X^4 + 4*X^3 + 6*X^2 + 2*X + 1 : Polynomial ℤ) := by sorry",
    "theorem thm_Q : Irreducible (wilsons_poly : ℤ[X]) := by sorry",
    "theorem thm_P : (239 + 174 + 83) % 10 = 6 := by sorry",
    "theorem thm_Q (s w z : ℕ) : (239 + 174 + 83) % 10 = 6 := by sorry",
)

SYNTHETIC = (
    "theorem thm : True",
    "theorem thm : 1 = 1",
    "theorem a : (x + y) * z = 0",
    "theorem comp (f g : ℝ → ℝ) (hf : ∀ x, f x = 2 * x) (hg : ∀ x, g x = x + 1) : f (g 1) = 4",
    "theorem t (x y : ℕ) : x = y",
    "theorem mathd_algebra_10 : abs ((120 : ℝ) / 100 * 30 - 130 / 100 * 20) = 10 := by norm_num",
    "theorem amc12_2000_p5 (x p : ℝ) (h₀ : x < 2) (h₁ : abs (x - 2) = p) : x - p = 2 - 2 * p",
    "theorem imo_1959_p1 (n : ℕ) (h₀ : 0 < n) : Nat.gcd (21 * n + 4) (14 * n + 3) = 1",
    "theorem induction_sum {n : ℕ} (h : 0 < n) : Finset.sum (Finset.range n) id = n * (n - 1) / 2",
    "theorem dvd_ex (a b : ℤ) (h : a ∣ b) : a ∣ b * b",
    "theorem neg_ex (x : ℝ) : -(x) ^ 2 ≤ 0 ∨ ¬ (x = 0) := by nlinarith",
    "theorem iff_ex (p q : Prop) : p ∧ q ↔ q ∧ p",
    "theorem arrow_ex (p q r : Prop) : (p → q) → (q → r) → p → r",
    "theorem exists_ex : ∃ n : ℕ, n * n = 49 ∧ n > 0",
    "theorem forall_pred : ∀ x > 0, ∃ y ∈ S, x + y ≠ x",
    "theorem lam_ex : (fun x : ℕ => x + 1) 2 = 3",
    "theorem shadow : (λ x => (λ x => x) y z) = z",
    "theorem mem_ex (s : Set ℕ) (h : {1, 2, 3} ⊆ s) : 2 ∈ s",
    "lemma sub_ex {G : Type u} [Group G] (a b : G) : (a * b)⁻¹ = b⁻¹ * a⁻¹",
    "theorem pow_ex (a : ℕ) : 2 ^ a ^ 2 = (2 ^ a) ^ 2 - 0",
    "theorem div_ex (n : ℕ) (h : n % 2 = 1) : ¬ 2 ∣ n",
    "theorem nested (f : ℕ → ℕ) : ∀ m n : ℕ, f (m + n) = f m + f n → f 0 = 0",
    "theorem asc_goal (x : ℝ) (h : 0 ≤ x) : Real.sqrt (x ^ 2) = x",
    "theorem impl_ex {α : Type} [DecidableEq α] (l : List α) : l.length ≥ 0",
    "theorem ascii_ops (a b : ℕ) : a <= b -> b >= a /\\ a != b + 1",
)

STATEMENTS = ALPHA_PAIR + CASE_STUDY + SYNTHETIC


@lru_cache(maxsize=None)
def fixture_trees():
    from .opt import build_opt
    from .parser import parse_theorem
    from .standardize import standardize

    return tuple(build_opt(standardize(parse_theorem(s))) for s in STATEMENTS)
