#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ustlocal/network.hpp"

namespace ustlocal {

enum class SolverKind { automatic, dense, iterative };

/// Networks up to this many vertices are factorized densely.
inline constexpr VertexId kDenseSolverLimit = 4000;
inline constexpr double kIterativeRelativeResidual = 1e-10;

/// Network Laplacian grounded at one vertex: Delta(i,i) = pi(i) minus loop
/// mass, Delta(i,j) = -c(i,j), with the ground row and column removed. The
/// grounded matrix is positive definite for connected networks.
///
/// Dense mode holds a Cholesky factor; iterative mode runs diagonally
/// preconditioned conjugate gradients per solve. After construction the
/// object is logically immutable and may be shared between threads (the
/// lazily built Green matrix is guarded by a once_flag).
class LaplacianSystem {
 public:
  /// Default ground is a vertex of maximal pi. Throws SingularSystem.
  explicit LaplacianSystem(const Network& net, SolverKind kind = SolverKind::automatic,
                           std::optional<VertexId> ground = std::nullopt);

  VertexId ground() const noexcept { return ground_; }
  VertexId dimension() const noexcept { return n_; }
  SolverKind kind() const noexcept { return kind_; }

  /// Full Laplacian as a dense matrix (diagnostics and tests).
  Eigen::MatrixXd laplacian() const;

  /// Potentials x with x[ground] = 0 solving Delta[a] x = b on the non-ground
  /// entries. `rhs` has one entry per vertex; the ground entry is ignored.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// g_a(i,j) = (Delta[a]^{-1})(i,j): voltage at i when unit current enters
  /// at j and leaves at the ground. Zero when i or j is the ground.
  double green(VertexId i, VertexId j) const;

  /// n x n matrix of green(i,j). Dense mode only (computed once).
  const Eigen::MatrixXd& green_matrix() const;

  /// Effective resistance between u and v.
  double resistance(VertexId u, VertexId v) const;

  /// Effective resistance from v to the set S shorted together.
  double resistance_to_set(VertexId v, std::span<const VertexId> set) const;

  /// Relative residual ||Delta[a] x - b|| / ||b|| of the last-mile check.
  double relative_residual(const Eigen::VectorXd& rhs, const Eigen::VectorXd& x) const;

 private:
  using Sparse = Eigen::SparseMatrix<double>;

  int reduced_index(VertexId v) const noexcept { return v < ground_ ? v : v - 1; }
  Eigen::VectorXd solve_reduced(const Eigen::VectorXd& b) const;
  Eigen::VectorXd green_column(VertexId j) const;
  bool has_green_matrix() const noexcept;

  VertexId n_ = 0;
  VertexId ground_ = 0;
  SolverKind kind_ = SolverKind::dense;
  Sparse grounded_;
  std::unique_ptr<Eigen::LLT<Eigen::MatrixXd>> dense_factor_;
  mutable std::once_flag green_once_;
  mutable std::unique_ptr<Eigen::MatrixXd> green_;
};

}  // namespace ustlocal
