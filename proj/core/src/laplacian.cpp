#include "ustlocal/laplacian.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <string>

#include "ustlocal/error.hpp"

namespace ustlocal {

LaplacianSystem::LaplacianSystem(const Network& net, SolverKind kind,
                                 std::optional<VertexId> ground)
    : n_(net.vertex_count()) {
  if (ground) {
    if (!net.valid_vertex(*ground)) throw VertexOutOfRange("ground " + std::to_string(*ground));
    ground_ = *ground;
  } else {
    for (VertexId v = 1; v < n_; ++v)
      if (net.pi(v) > net.pi(ground_)) ground_ = v;
  }
  kind_ = kind == SolverKind::automatic
              ? (n_ <= kDenseSolverLimit ? SolverKind::dense : SolverKind::iterative)
              : kind;

  const int m = n_ - 1;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(net.edge_count() * 2 + static_cast<std::size_t>(n_));
  for (VertexId v = 0; v < n_; ++v) {
    if (v == ground_) continue;
    triplets.emplace_back(reduced_index(v), reduced_index(v), net.pi(v) - net.loop_conductance(v));
  }
  for (const auto& e : net.edges()) {
    if (e.u == e.v || e.u == ground_ || e.v == ground_) continue;
    triplets.emplace_back(reduced_index(e.u), reduced_index(e.v), -e.conductance);
    triplets.emplace_back(reduced_index(e.v), reduced_index(e.u), -e.conductance);
  }
  grounded_.resize(m, m);
  grounded_.setFromTriplets(triplets.begin(), triplets.end());

  if (kind_ == SolverKind::dense && m > 0) {
    dense_factor_ = std::make_unique<Eigen::LLT<Eigen::MatrixXd>>(Eigen::MatrixXd(grounded_));
    if (dense_factor_->info() != Eigen::Success)
      throw SingularSystem("grounded Laplacian is not positive definite");
  }
}

Eigen::MatrixXd LaplacianSystem::laplacian() const {
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n_, n_);
  for (int k = 0; k < grounded_.outerSize(); ++k)
    for (Sparse::InnerIterator it(grounded_, k); it; ++it) {
      const auto expand = [&](Eigen::Index i) { return static_cast<Eigen::Index>(i < ground_ ? i : i + 1); };
      full(expand(it.row()), expand(it.col())) = it.value();
    }
  // Ground row/column from zero row sums.
  for (VertexId v = 0; v < n_; ++v) {
    if (v == ground_) continue;
    full(v, ground_) = full(ground_, v) = -full.row(v).sum();
  }
  full(ground_, ground_) = -full.row(ground_).sum();
  return full;
}

Eigen::VectorXd LaplacianSystem::solve_reduced(const Eigen::VectorXd& b) const {
  if (b.size() == 0) return b;
  if (kind_ == SolverKind::dense) return dense_factor_->solve(b);
  Eigen::ConjugateGradient<Sparse, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(kIterativeRelativeResidual);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * grounded_.rows()));
  cg.compute(grounded_);
  Eigen::VectorXd x = cg.solve(b);
  if (cg.info() != Eigen::Success) throw SingularSystem("conjugate gradients did not converge");
  return x;
}

Eigen::VectorXd LaplacianSystem::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd b(n_ - 1);
  for (VertexId v = 0; v < n_; ++v)
    if (v != ground_) b(reduced_index(v)) = rhs(v);
  const Eigen::VectorXd y = solve_reduced(b);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
  for (VertexId v = 0; v < n_; ++v)
    if (v != ground_) x(v) = y(reduced_index(v));
  return x;
}

double LaplacianSystem::relative_residual(const Eigen::VectorXd& rhs, const Eigen::VectorXd& x) const {
  Eigen::VectorXd b(n_ - 1), y(n_ - 1);
  for (VertexId v = 0; v < n_; ++v)
    if (v != ground_) {
      b(reduced_index(v)) = rhs(v);
      y(reduced_index(v)) = x(v);
    }
  const double norm = b.norm();
  return norm == 0.0 ? (grounded_ * y).norm() : (grounded_ * y - b).norm() / norm;
}

bool LaplacianSystem::has_green_matrix() const noexcept { return kind_ == SolverKind::dense; }

const Eigen::MatrixXd& LaplacianSystem::green_matrix() const {
  if (!has_green_matrix()) throw SingularSystem("green_matrix requires the dense solver");
  std::call_once(green_once_, [this] {
    auto g = std::make_unique<Eigen::MatrixXd>(Eigen::MatrixXd::Zero(n_, n_));
    if (n_ > 1) {
      const Eigen::MatrixXd inv =
          dense_factor_->solve(Eigen::MatrixXd::Identity(n_ - 1, n_ - 1));
      for (VertexId i = 0; i < n_; ++i) {
        if (i == ground_) continue;
        for (VertexId j = 0; j < n_; ++j) {
          if (j == ground_) continue;
          (*g)(i, j) = inv(reduced_index(i), reduced_index(j));
        }
      }
    }
    green_ = std::move(g);
  });
  return *green_;
}

Eigen::VectorXd LaplacianSystem::green_column(VertexId j) const {
  if (has_green_matrix()) return green_matrix().col(j);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_);
  if (j != ground_) rhs(j) = 1.0;
  return solve(rhs);
}

double LaplacianSystem::green(VertexId i, VertexId j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw VertexOutOfRange("green index");
  if (i == ground_ || j == ground_) return 0.0;
  if (has_green_matrix()) return green_matrix()(i, j);
  return green_column(j)(i);
}

double LaplacianSystem::resistance(VertexId u, VertexId v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) throw VertexOutOfRange("resistance endpoint");
  if (u == v) return 0.0;
  if (has_green_matrix()) {
    const auto& g = green_matrix();
    return std::max(0.0, g(u, u) + g(v, v) - 2.0 * g(u, v));
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_);
  rhs(u) += 1.0;
  rhs(v) -= 1.0;
  const Eigen::VectorXd x = solve(rhs);
  return std::max(0.0, x(u) - x(v));
}

double LaplacianSystem::resistance_to_set(VertexId v, std::span<const VertexId> set) const {
  if (v < 0 || v >= n_) throw VertexOutOfRange("resistance_to_set source");
  if (set.empty()) throw VertexOutOfRange("resistance_to_set needs a nonempty set");
  std::vector<VertexId> members(set.begin(), set.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (const VertexId s : members) {
    if (s < 0 || s >= n_) throw VertexOutOfRange("resistance_to_set member");
    if (s == v) return 0.0;
  }

  // The inverse of the Green block on a terminal set K (ground excluded) is
  // the Schur complement of Delta onto K u {ground}, grounded. In the reduced
  // network the only neighbors of v are in S, so R(v <-> S) is the reciprocal
  // of the reduced diagonal at v once the ground has been eliminated (or
  // shorted into S when it belongs to S).
  const auto green_block = [this](const std::vector<VertexId>& terminals) {
    const auto k = static_cast<Eigen::Index>(terminals.size());
    Eigen::MatrixXd block(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      const Eigen::VectorXd col = green_column(terminals[a]);
      for (Eigen::Index b = 0; b < k; ++b) block(b, a) = col(terminals[b]);
    }
    return block;
  };

  if (v == ground_) {
    // Grounded at v: the reduced Laplacian on S is the inverse block, and
    // shorting S gives an effective conductance equal to its total.
    return 1.0 / green_block(members).inverse().sum();
  }

  std::vector<VertexId> terminals{v};
  bool ground_in_set = false;
  for (const VertexId s : members) {
    if (s == ground_) ground_in_set = true;
    else terminals.push_back(s);
  }
  const Eigen::MatrixXd reduced = green_block(terminals).inverse();
  double diag = reduced(0, 0);
  if (!ground_in_set) {
    const double row = reduced.row(0).sum();
    diag -= row * row / reduced.sum();
  }
  return 1.0 / diag;
}

}  // namespace ustlocal
