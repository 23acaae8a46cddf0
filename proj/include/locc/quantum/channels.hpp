#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "locc/numerics/complex_matrix.hpp"

namespace locc {

/// Completely positive map in Kraus form, ρ ↦ Σ_j K_j ρ K_j†. Kraus operators
/// are out_dim × in_dim.
struct CpMap {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<ComplexMatrix> kraus;

  static CpMap identity(std::size_t d);
  static CpMap single(ComplexMatrix k);

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  /// Σ K_j† K_j (in_dim × in_dim)
  ComplexMatrix effect() const;
  /// Throws DimensionMismatch if any Kraus operator has the wrong shape.
  void check_shapes() const;
};

/// c·ℰ for c ≥ 0 (Kraus operators scaled by √c).
CpMap scaled(const CpMap& map, double c);
/// ℰ₁ + ℰ₂ as the union of Kraus lists.
CpMap kraus_union(const CpMap& a, const CpMap& b);
/// (after ∘ before)
CpMap compose(const CpMap& after, const CpMap& before);

/// POVM elements E_i = A_i†A_i on a d-dimensional space.
struct Povm {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> elements;
};

struct PovmCheck {
  bool ok = false;
  double completeness_residual = 0.0;  // ‖Σ E_i − I‖_F
  double min_eigenvalue = 0.0;         // smallest eigenvalue over all elements
  std::vector<std::string> problems;
};

/// Elements Hermitian PSD within 1e-9 and Σ E_i = I within `tol` (Frobenius).
PovmCheck validate_povm(const Povm& p, double tol = 1e-9);

struct InstrumentBranch {
  int label = 0;
  CpMap map;
};

/// Labeled family of CP maps on a common input space whose sum is trace
/// preserving.
struct Instrument {
  std::size_t in_dim = 0;
  std::vector<InstrumentBranch> branches;

  /// ‖Σ_branches Σ_Kraus K†K − I‖_F
  double completeness_residual() const;
  const InstrumentBranch* find(int label) const;
};

struct ChoiMatrix {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  ComplexMatrix matrix;  // (in_dim·out_dim)², input index most significant
};

/// C = Σ_ij E_ij ⊗ ℰ(E_ij).
ChoiMatrix choi_of(const CpMap& map);

inline constexpr double kDefaultKrausTol = 1e-9;

/// Kraus form of a Choi matrix from its eigendecomposition; eigenvalues below
/// kraus_tol·λmax are dropped. Throws NotPsd for a non-PSD input.
CpMap map_of_choi(const ChoiMatrix& c, double kraus_tol = kDefaultKrausTol);

struct KrausPolar {
  ComplexMatrix positive;  // P = √(A†A)
  ComplexMatrix isometry;  // U with A = U·P, U†U = support projector of A†A
};

/// Polar form A = U·√(A†A); the isometry is defined on the support of A†A.
KrausPolar canonicalize_kraus(const ComplexMatrix& a);

}  // namespace locc
