#pragma once

// Finitely generated abelian groups in invariant-factor form and the
// homomorphisms between them. These are the grading groups: every degree in
// the library is a GroupElement of some FgAbGroup.

#include "gradlab/smith.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gradlab {

/// Coordinates of a group element: free coordinates first, then one torsion
/// coordinate per invariant factor, reduced into [0, d_i). An element carries
/// no reference to its group; arithmetic goes through FgAbGroup.
struct GroupElement {
  std::vector<std::int64_t> coords;

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

std::string to_string(const GroupElement& g);

/// Z^rank + Z/d_1 + ... + Z/d_k with d_i >= 2 and d_i | d_{i+1}.
class FgAbGroup {
 public:
  FgAbGroup() = default;
  FgAbGroup(int rank, std::vector<std::int64_t> invariants);

  static FgAbGroup trivial() { return {}; }
  static FgAbGroup free(int rank) { return {rank, {}}; }
  static FgAbGroup cyclic(std::int64_t n);
  /// Z^rank / <relation columns>, normalized to invariant-factor form.
  /// `projection` receives the matrix of the canonical map Z^rows -> result.
  static FgAbGroup presented(const IntMatrix& relations, IntMatrix* projection = nullptr);

  int rank() const { return rank_; }
  const std::vector<std::int64_t>& invariants() const { return invariants_; }
  int num_coords() const { return rank_ + static_cast<int>(invariants_.size()); }
  bool is_finite() const { return rank_ == 0; }
  /// Order of the group; nullopt when infinite.
  std::optional<std::int64_t> order() const;

  /// Diagonal relation matrix (num_coords x #invariants) of the torsion part.
  IntMatrix relation_matrix() const;
  /// Order of coordinate i: 0 for free coordinates, d for torsion ones.
  std::int64_t coord_order(int i) const;

  GroupElement element(std::vector<std::int64_t> coords) const;
  GroupElement reduce(GroupElement g) const;
  GroupElement zero() const;
  GroupElement generator(int i) const;
  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement sub(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  GroupElement scale(std::int64_t k, const GroupElement& a) const;
  bool contains(const GroupElement& g) const;

  /// All elements in lexicographic order; finite groups only.
  std::vector<GroupElement> elements() const;
  /// Elements with free coordinates in [-radius, radius] and arbitrary torsion part.
  std::vector<GroupElement> ball(std::int64_t radius) const;

  std::string to_string() const;

  friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;

 private:
  int rank_ = 0;
  std::vector<std::int64_t> invariants_;
};

/// Homomorphism given by an integer matrix whose columns are the images of
/// the domain generators. Rejected at construction if not well defined.
class GroupHom {
 public:
  GroupHom(FgAbGroup domain, FgAbGroup codomain, IntMatrix matrix);

  static GroupHom identity(const FgAbGroup& g);
  static GroupHom zero(const FgAbGroup& domain, const FgAbGroup& codomain);
  /// The map G -> 0.
  static GroupHom to_trivial(const FgAbGroup& g) { return zero(g, FgAbGroup::trivial()); }

  const FgAbGroup& domain() const { return domain_; }
  const FgAbGroup& codomain() const { return codomain_; }
  const IntMatrix& matrix() const { return matrix_; }

  GroupElement operator()(const GroupElement& g) const;
  /// this ∘ other
  GroupHom after(const GroupHom& other) const;

  friend bool operator==(const GroupHom& a, const GroupHom& b);

 private:
  FgAbGroup domain_;
  FgAbGroup codomain_;
  IntMatrix matrix_;
};

struct KernelData {
  FgAbGroup kernel;
  /// Embedding of the kernel into the domain.
  GroupHom embedding;
  /// nullopt encodes an infinite kernel.
  std::optional<std::int64_t> order;

  bool is_finite() const { return order.has_value(); }
};

struct EpiAnalysis {
  bool is_epi = false;
  FgAbGroup cokernel;
  KernelData kernel;
};

EpiAnalysis analyze_epimorphism(const GroupHom& psi);

/// Some g with psi(g) == h, or nullopt if h is not in the image.
std::optional<GroupElement> preimage(const GroupHom& psi, const GroupElement& h);

/// psi^{-1}(h) in lexicographic order. Throws NotEpimorphism / InfiniteKernel.
std::vector<GroupElement> fiber(const GroupHom& psi, const GroupElement& h);

/// Kernel elements whose kernel coordinates lie in the ball of the given
/// radius, mapped into the domain and sorted. Covers the whole kernel when it
/// is finite.
std::vector<GroupElement> kernel_window(const KernelData& k, const FgAbGroup& domain, std::int64_t radius);

/// Quotient G / <generators> and the canonical projection.
struct QuotientData {
  FgAbGroup quotient;
  GroupHom projection;
};
QuotientData quotient(const FgAbGroup& g, const std::vector<GroupElement>& generators);

}  // namespace gradlab
