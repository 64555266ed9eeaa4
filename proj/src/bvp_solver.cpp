#include "couette/bvp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace couette {

namespace {

double relative_change(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

RealVector equilibrate_rows(const ComplexMatrix& a) {
    RealVector scale(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double m = a.row(i).cwiseAbs().maxCoeff();
        scale[i] = m > 0.0 ? 1.0 / m : 1.0;
    }
    return scale;
}

// max_i |A x - b|_i / (|A| |x| + |b|)_i
double componentwise_residual(const ComplexMatrix& a, const ComplexVector& x, const ComplexVector& b) {
    const ComplexVector r = a * x - b;
    const RealVector denom = a.cwiseAbs() * x.cwiseAbs() + b.cwiseAbs();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double ri = std::abs(r[i]);
        if (ri == 0.0) continue;
        worst = std::max(worst, denom[i] > 0.0 ? ri / denom[i] : ri);
    }
    return worst;
}

std::string describe(const ModeParams& p) {
    std::ostringstream os;
    os << "(k=" << p.k << ", s=" << p.s.real() << (p.s.imag() < 0 ? "" : "+") << p.s.imag() << "i, R=" << p.reynolds
       << ")";
    return os.str();
}

// Second-order operator with Dirichlet rows at both ends.
ComplexVector solve_dirichlet(ComplexMatrix a, ComplexVector rhs, const ModeParams& params,
                              const SolverOptions& options, const char* which) {
    const Eigen::Index last = a.rows() - 1;
    a.row(0).setZero();
    a(0, 0) = 1.0;
    a.row(last).setZero();
    a(last, last) = 1.0;
    rhs[0] = 0.0;
    rhs[last] = 0.0;
    const RealVector scale = equilibrate_rows(a);
    Eigen::PartialPivLU<ComplexMatrix> lu(scale.asDiagonal() * a);
    const double rcond = lu.rcond();
    if (!(rcond > options.singular_rcond)) {
        throw SingularMatrix(std::string(which) + " system is numerically singular at " + describe(params),
                             rcond > 0.0 ? 1.0 / rcond : INFINITY);
    }
    ComplexVector x = lu.solve(scale.asDiagonal() * rhs);
    if (!x.allFinite()) throw SingularMatrix(std::string(which) + " solve produced non-finite values", INFINITY);
    return x;
}

}  // namespace

double NormTriple::max_relative_change(const NormTriple& other) const {
    return std::max({relative_change(norm_sq, other.norm_sq), relative_change(dnorm_sq, other.dnorm_sq),
                     relative_change(d2norm_sq, other.d2norm_sq)});
}

NormTriple compute_norms(const GridFunction& psi) {
    return {l2_norm_sq(psi), l2_norm_sq(differentiate(psi, 1)), l2_norm_sq(differentiate(psi, 2))};
}

BorderedSystem::BorderedSystem(const OperatorSet& ops, const SolverOptions& options)
    : grid_(ops.grid), params_(ops.params), options_(options), bordered_(ops.tt0_matrix) {
    const Eigen::Index last = bordered_.rows() - 1;
    const RealMatrix& d1 = grid_->diff(1);
    bordered_.row(0).setZero();
    bordered_(0, 0) = 1.0;
    bordered_.row(1) = d1.row(0).cast<cplx>();
    bordered_.row(last - 1) = d1.row(last).cast<cplx>();
    bordered_.row(last).setZero();
    bordered_(last, last) = 1.0;

    row_scale_ = equilibrate_rows(bordered_);
    lu_.compute(row_scale_.asDiagonal() * bordered_);
    const double rcond = lu_.rcond();
    condition_ = rcond > 0.0 ? 1.0 / rcond : INFINITY;
    if (!(rcond > options_.singular_rcond)) {
        throw SingularMatrix("bordered fourth-order system is numerically singular at " + describe(params_) +
                                 " (s is close to a discrete eigenvalue)",
                             condition_);
    }
}

ComplexMatrix BorderedSystem::solve_raw(const ComplexMatrix& rhs) const {
    ComplexMatrix x = lu_.solve(row_scale_.asDiagonal() * rhs);
    if (!x.allFinite()) throw SingularMatrix("bordered solve produced non-finite values", condition_);
    return x;
}

BvpSolution BorderedSystem::solve(const GridFunction& interior, const BoundaryData& bc) const {
    if (interior.grid()->n_nodes() != grid_->n_nodes()) {
        throw GridMismatch("forcing and operator live on different grids");
    }
    const Eigen::Index last = bordered_.rows() - 1;
    ComplexVector rhs = interior.values();
    rhs[0] = bc.psi0;
    rhs[1] = bc.dpsi0;
    rhs[last - 1] = bc.dpsi1;
    rhs[last] = bc.psi1;

    ComplexVector x = solve_raw(rhs);

    BvpSolution out;
    out.params = params_;
    out.condition_estimate = condition_;
    out.residual_max = componentwise_residual(bordered_, x, rhs);
    if (!(out.residual_max <= options_.residual_tol)) {
        throw MeshTooCoarse("scaled residual " + std::to_string(out.residual_max) + " exceeds tolerance at " +
                                describe(params_),
                            out.residual_max);
    }
    if (condition_ > options_.condition_warning) {
        out.warnings.push_back("condition estimate " + std::to_string(condition_) + " above warning threshold");
    }
    out.psi = GridFunction(grid_, std::move(x));
    out.psi_d1 = differentiate(out.psi, 1);
    out.psi_d2 = differentiate(out.psi, 2);
    out.norms = {l2_norm_sq(out.psi), l2_norm_sq(out.psi_d1), l2_norm_sq(out.psi_d2)};
    return out;
}

BvpSolution solve_clamped(const OperatorSet& ops, const GridFunction& forcing_scalar, const SolverOptions& options) {
    return BorderedSystem(ops, options).solve(forcing_scalar, BoundaryData::clamped());
}

BvpSolution solve_homogeneous_bc(const OperatorSet& ops, const BoundaryData& bc, const SolverOptions& options) {
    return BorderedSystem(ops, options).solve(GridFunction(ops.grid), bc);
}

Decomposition solve_cascade(const OperatorSet& ops, const GridFunction& forcing_scalar, const SolverOptions& options) {
    if (forcing_scalar.grid()->n_nodes() != ops.n_nodes()) {
        throw GridMismatch("forcing and operator live on different grids");
    }
    Decomposition dec;
    dec.params = ops.params;
    ComplexVector h = solve_dirichlet(ops.t_matrix, forcing_scalar.values(), ops.params, options, "T");
    ComplexVector g = solve_dirichlet(ops.t0_matrix, h, ops.params, options, "T0");
    const RealMatrix& d1 = ops.grid->diff(1);
    const Eigen::Index last = g.size() - 1;
    dec.alpha = d1.row(0).cast<cplx>().dot(g);  // dot() conjugates its first argument; the row is real
    dec.beta = d1.row(last).cast<cplx>().dot(g);
    dec.h = GridFunction(ops.grid, std::move(h));
    dec.g = GridFunction(ops.grid, std::move(g));
    return dec;
}

GridFunction reconstruct(const Decomposition& dec, const BvpSolution& delta1, const BvpSolution& delta2) {
    if (!(dec.params == delta1.params) || !(dec.params == delta2.params)) {
        throw InvalidArgument("reconstruct: decomposition and delta problems were solved for different parameters");
    }
    require_same_grid(dec.g, delta1.psi);
    require_same_grid(dec.g, delta2.psi);
    GridFunction out = dec.g;
    out.values() -= dec.alpha * delta1.psi.values() + dec.beta * delta2.psi.values();
    return out;
}

Decomposition decompose(const OperatorSet& ops, const GridFunction& forcing_scalar, const SolverOptions& options) {
    Decomposition dec = solve_cascade(ops, forcing_scalar, options);
    const BorderedSystem system(ops, options);
    const GridFunction zero(ops.grid);
    const BvpSolution d1 = system.solve(zero, BoundaryData::delta1());
    const BvpSolution d2 = system.solve(zero, BoundaryData::delta2());
    dec.delta = GridFunction(ops.grid, dec.alpha * d1.psi.values() + dec.beta * d2.psi.values());
    dec.psi_reconstructed = reconstruct(dec, d1, d2);
    return dec;
}

RefinedSolution refine_until_converged(const ProblemSpec& problem, double rel_tol, std::span<const std::size_t> levels) {
    if (!(rel_tol > 0.0)) throw InvalidArgument("rel_tol must be positive");
    if (levels.size() < 2) throw InvalidArgument("refinement needs at least two grid levels");
    problem.params.validate();

    RefinedSolution out;
    for (std::size_t level = 0; level < levels.size(); ++level) {
        const GridPtr grid = build_grid(levels[level]);
        const OperatorSet ops = assemble_operators(problem.params, grid);
        const GridFunction forcing = problem.forcing ? problem.forcing(grid) : GridFunction(grid);
        BvpSolution sol = BorderedSystem(ops, problem.options).solve(forcing, problem.bc);
        out.levels_used.push_back(levels[level]);
        out.history.push_back(sol.norms);
        out.solution = std::move(sol);
        if (level > 0) {
            out.last_change = out.history[level].max_relative_change(out.history[level - 1]);
            if (out.last_change < rel_tol) {
                out.converged_nodes = levels[level - 1];
                return out;
            }
        }
    }
    const auto& h = out.history;
    throw NonConvergence("norms still changing by " + std::to_string(out.last_change) + " at " +
                             std::to_string(levels.back()) + " nodes for " + describe(problem.params),
                         h[h.size() - 2], h.back());
}

}  // namespace couette
