#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "couette/errors.hpp"
#include "couette/mode_operators.hpp"

namespace couette {

/// Values psi(0), psi(1), psi'(0), psi'(1) imposed by boundary bordering.
struct BoundaryData {
    cplx psi0{0.0, 0.0};
    cplx psi1{0.0, 0.0};
    cplx dpsi0{0.0, 0.0};
    cplx dpsi1{0.0, 0.0};

    static BoundaryData clamped() { return {}; }
    /// delta_1: psi'(0) = 1.
    static BoundaryData delta1() { return {{}, {}, {1.0, 0.0}, {}}; }
    /// delta_2: psi'(1) = 1.
    static BoundaryData delta2() { return {{}, {}, {}, {1.0, 0.0}}; }
};

struct NormTriple {
    double norm_sq = 0.0;    ///< ||psi||^2
    double dnorm_sq = 0.0;   ///< ||psi'||^2
    double d2norm_sq = 0.0;  ///< ||psi''||^2

    /// Largest relative difference over the three components.
    [[nodiscard]] double max_relative_change(const NormTriple& other) const;

    friend bool operator==(const NormTriple&, const NormTriple&) = default;
};

struct SolverOptions {
    /// Componentwise scaled residual above which a solve is rejected.
    double residual_tol = 1e-8;
    /// Reciprocal-condition floor (of the row-equilibrated matrix) below which
    /// the matrix is declared singular.
    double singular_rcond = 1e-15;
    /// Condition estimates above this are flagged in BvpSolution::warnings.
    double condition_warning = 1e12;
};

struct BvpSolution {
    GridFunction psi;
    GridFunction psi_d1;
    GridFunction psi_d2;
    ModeParams params;
    /// max_i |A psi - b|_i / (|A| |psi| + |b|)_i over all rows.
    double residual_max = 0.0;
    double condition_estimate = 0.0;
    NormTriple norms;
    std::vector<std::string> warnings;
};

/// LU factorization of T T0 with the four boundary rows (0, 1, N-1, N)
/// replaced by psi(0), psi'(0), psi'(1), psi(1). Rows are equilibrated before
/// factorization. Reusable for many right-hand sides.
class BorderedSystem {
public:
    BorderedSystem(const OperatorSet& ops, const SolverOptions& options = {});

    /// Solves for one right-hand side; `interior` supplies rows 2..N-2 (the
    /// entries at boundary rows are ignored) and bc the four constraint values.
    [[nodiscard]] BvpSolution solve(const GridFunction& interior, const BoundaryData& bc) const;

    /// Solves for many right-hand sides at once (no residual bookkeeping).
    /// Boundary rows of rhs must already hold the constraint values.
    [[nodiscard]] ComplexMatrix solve_raw(const ComplexMatrix& rhs) const;

    [[nodiscard]] double condition_estimate() const noexcept { return condition_; }
    [[nodiscard]] const GridPtr& grid() const noexcept { return grid_; }

private:
    GridPtr grid_;
    ModeParams params_;
    SolverOptions options_;
    ComplexMatrix bordered_;
    RealVector row_scale_;
    Eigen::PartialPivLU<ComplexMatrix> lu_;
    double condition_ = 0.0;
};

/// T T0 psi = I with psi = psi' = 0 at both walls.
[[nodiscard]] BvpSolution solve_clamped(const OperatorSet& ops, const GridFunction& forcing_scalar,
                                        const SolverOptions& options = {});

/// T T0 delta = 0 with the given boundary values.
[[nodiscard]] BvpSolution solve_homogeneous_bc(const OperatorSet& ops, const BoundaryData& bc,
                                               const SolverOptions& options = {});

/// Pieces of psi = g - delta. h, g, alpha, beta come from solve_cascade;
/// delta and psi_reconstructed are filled by decompose().
struct Decomposition {
    GridFunction h;
    GridFunction g;
    cplx alpha{0.0, 0.0};  ///< g'(0)
    cplx beta{0.0, 0.0};   ///< g'(1)
    GridFunction delta;
    GridFunction psi_reconstructed;
    ModeParams params;
};

/// T h = I, h(0) = h(1) = 0; then T0 g = h, g(0) = g(1) = 0.
[[nodiscard]] Decomposition solve_cascade(const OperatorSet& ops, const GridFunction& forcing_scalar,
                                          const SolverOptions& options = {});

/// g - (alpha delta1 + beta delta2). Throws InvalidArgument when the three
/// inputs were computed for different parameters or grids.
[[nodiscard]] GridFunction reconstruct(const Decomposition& dec, const BvpSolution& delta1, const BvpSolution& delta2);

/// Runs solve_cascade, the delta_1 and delta_2 problems and reconstruct,
/// filling every field of the result.
[[nodiscard]] Decomposition decompose(const OperatorSet& ops, const GridFunction& forcing_scalar,
                                      const SolverOptions& options = {});

/// Builds the scalar forcing I on a given grid (resampled at every level).
using ForcingBuilder = std::function<GridFunction(const GridPtr&)>;

/// A mode problem independent of discretization.
struct ProblemSpec {
    ModeParams params;
    ForcingBuilder forcing;  ///< empty means I = 0
    BoundaryData bc;
    SolverOptions options;
};

inline constexpr std::size_t kDefaultLevels[] = {64, 96, 128, 192, 256};

struct RefinedSolution {
    BvpSolution solution;  ///< finest level computed
    std::size_t converged_nodes = 0;  ///< coarser level of the agreeing pair
    std::vector<std::size_t> levels_used;
    std::vector<NormTriple> history;
    double last_change = 0.0;
};

/// Error carrying the last two norm triples when refinement stalls.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, NormTriple previous, NormTriple last)
        : Error(what), previous_(previous), last_(last) {}
    [[nodiscard]] const NormTriple& previous() const noexcept { return previous_; }
    [[nodiscard]] const NormTriple& last() const noexcept { return last_; }

private:
    NormTriple previous_;
    NormTriple last_;
};

/// Solves on successive levels until the norm triple changes by less than
/// rel_tol between consecutive levels.
[[nodiscard]] RefinedSolution refine_until_converged(const ProblemSpec& problem, double rel_tol = 1e-6,
                                                     std::span<const std::size_t> levels = kDefaultLevels);

[[nodiscard]] NormTriple compute_norms(const GridFunction& psi);

}  // namespace couette
