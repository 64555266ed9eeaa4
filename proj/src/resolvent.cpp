#include "couette/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "couette/bvp_solver.hpp"
#include "couette/errors.hpp"
#include "couette/parallel.hpp"

namespace couette {

double theorem1_radius(double reynolds) { return 2.0 * std::numbers::sqrt2 * (1.0 + std::sqrt(reynolds)); }

std::optional<double> theorem1_bound(cplx s, double reynolds) {
    const double r = std::abs(s);
    if (r < theorem1_radius(reynolds)) return std::nullopt;
    const double a = 1.0 + std::sqrt(reynolds);
    // at the threshold the ratio is exactly 1; clamp the rounding above it
    return std::min(1.0, 8.0 * a * a / (r * r));
}

int default_k_max(double reynolds) {
    return static_cast<int>(std::ceil(std::sqrt(reynolds / std::numbers::sqrt2))) + 5;
}

ModeNormReport mode_gain(const ModeParams& params, const GridPtr& grid) {
    params.validate_resolvent();
    const OperatorSet ops = assemble_operators(params, grid);
    const BorderedSystem system(ops);

    const auto n = static_cast<Eigen::Index>(grid->n_nodes());
    const Eigen::Index m = n - 2;  // interior values of chi
    const double k = params.k;

    // Right-hand sides T0 chi for each interior unit potential; constraint rows zero.
    ComplexMatrix rhs = ops.t0_matrix.middleCols(1, m);
    rhs.row(0).setZero();
    rhs.row(1).setZero();
    rhs.row(n - 2).setZero();
    rhs.row(n - 1).setZero();
    const ComplexMatrix response = system.solve_raw(rhs);

    const RealMatrix& d1 = grid->diff(1);
    const RealVector& w = grid->weights();
    const RealVector sqrt_w = w.cwiseSqrt();

    // Input form restricted to potentials with chi(0) = chi(1) = 0.
    const RealMatrix d1_in = d1.middleCols(1, m);
    RealMatrix gram_in = d1_in.transpose() * w.asDiagonal() * d1_in;
    gram_in.diagonal() += k * k * w.segment(1, m);
    const Eigen::LLT<RealMatrix> chol(gram_in);
    if (chol.info() != Eigen::Success) throw IndefiniteGram("input energy Gram matrix is not positive definite");

    // Output form ||psi'||^2 + k^2 ||psi||^2 = |F psi|^2, F = [W^1/2 D1; |k| W^1/2].
    ComplexMatrix out(2 * n, m);
    out.topRows(n) = (sqrt_w.asDiagonal() * d1).cast<cplx>() * response;
    out.bottomRows(n) = (std::abs(k) * sqrt_w).cast<cplx>().asDiagonal() * response;

    // z = L^T chi  =>  operator in z coordinates is out * L^{-T}.
    const ComplexMatrix lower = chol.matrixL().toDenseMatrix().cast<cplx>();
    const ComplexMatrix transformed =
        lower.triangularView<Eigen::Lower>().solve(out.transpose()).transpose();

    // Largest singular value from the Hermitian form Z^H Z.
    const ComplexMatrix normal = transformed.adjoint() * transformed;
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(normal, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw EigenSolverFailure("singular-value iteration did not converge");
    ModeNormReport report;
    report.k = params.k;
    report.s = params.s;
    report.reynolds = params.reynolds;
    report.n_nodes = grid->n_nodes();
    report.gain = std::sqrt(std::max(0.0, eig.eigenvalues()[m - 1]));
    report.theorem1_bound = theorem1_bound(params.s, params.reynolds);
    if (report.theorem1_bound) {
        report.within_bound = report.gain * report.gain <= *report.theorem1_bound * (1.0 + kBoundSlack);
    }
    return report;
}

void ResolventQuery::validate() const {
    ModeParams{0, s, reynolds}.validate_resolvent();
    if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
    if (n_nodes < SpectralGrid::kMinNodes) throw SizingError("resolvent query grid too small");
}

GlobalNormReport global_norm(const ResolventQuery& query) {
    query.validate();
    const GridPtr grid = build_grid(query.n_nodes);
    const auto count = static_cast<std::size_t>(2 * query.k_max + 1);

    GlobalNormReport report;
    report.modes.resize(count);
    parallel_for(count, [&](std::size_t i) {
        const int k = static_cast<int>(i) - query.k_max;
        report.modes[i] = mode_gain({k, query.s, query.reynolds}, grid);
    });

    // First maximum in k order wins ties, so the reduction is order independent.
    for (const auto& mode : report.modes) {
        if (mode.gain > report.norm) {
            report.norm = mode.gain;
            report.argmax_k = mode.k;
        }
    }
    report.theorem1_bound = theorem1_bound(query.s, query.reynolds);
    if (report.theorem1_bound) {
        report.within_bound = report.norm * report.norm <= *report.theorem1_bound * (1.0 + kBoundSlack);
    }
    report.truncation_warning = std::abs(report.argmax_k) == query.k_max;
    return report;
}

std::vector<cplx> mode_spectrum(int k, double reynolds, const GridPtr& grid, std::size_t* discarded) {
    ModeParams{k, {0.0, 0.0}, reynolds}.validate();
    const OperatorSet ops = assemble_operators({k, {0.0, 0.0}, reynolds}, grid);
    const auto n = static_cast<Eigen::Index>(grid->n_nodes());
    const Eigen::Index last = n - 1;
    const Eigen::Index m = n - 4;  // unknowns psi_2 .. psi_{N-2}

    // T T0 = A - s B with B = T0.
    const ComplexMatrix& b_full = ops.t0_matrix;
    const ComplexMatrix a_full = ops.tt0_matrix + ops.params.s * b_full;

    // psi_0 = psi_N = 0; psi'(0) = psi'(1) = 0 fixes psi_1, psi_{N-1}.
    const RealMatrix& d1 = grid->diff(1);
    Eigen::Matrix2d corner;
    corner << d1(0, 1), d1(0, last - 1), d1(last, 1), d1(last, last - 1);
    RealMatrix coupling(2, m);
    coupling.row(0) = -d1.row(0).segment(2, m);
    coupling.row(1) = -d1.row(last).segment(2, m);
    const RealMatrix edge = corner.fullPivLu().solve(coupling);  // rows: psi_1, psi_{N-1}

    RealMatrix extend = RealMatrix::Zero(n, m);
    extend.block(2, 0, m, m).setIdentity();
    extend.row(1) = edge.row(0);
    extend.row(last - 1) = edge.row(1);
    const ComplexMatrix e = extend.cast<cplx>();

    const ComplexMatrix a = a_full.middleRows(2, m) * e;
    const ComplexMatrix b = b_full.middleRows(2, m) * e;
    const Eigen::PartialPivLU<ComplexMatrix> lu(b);
    const ComplexMatrix reduced = lu.solve(a);
    if (!reduced.allFinite()) throw EigenSolverFailure("mass operator T0 is singular on the clamped subspace");

    const Eigen::ComplexEigenSolver<ComplexMatrix> solver(reduced, false);
    if (solver.info() != Eigen::Success) throw EigenSolverFailure("complex eigenvalue iteration did not converge");

    const double big_n = static_cast<double>(last);
    const double cutoff = 10.0 * big_n * big_n;
    std::vector<cplx> kept;
    std::size_t dropped = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const cplx lambda = solver.eigenvalues()[i];
        if (std::isfinite(std::abs(lambda)) && std::abs(lambda) <= cutoff) {
            kept.push_back(lambda);
        } else {
            ++dropped;
        }
    }
    if (discarded) *discarded = dropped;
    std::sort(kept.begin(), kept.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
    });
    return kept;
}

SpectrumReport rightmost_eigenvalue(int k, double reynolds, const GridPtr& grid, const SpectrumOptions& options) {
    SpectrumReport report;
    report.k = k;
    report.reynolds = reynolds;
    report.n_nodes = grid->n_nodes();
    std::size_t dropped = 0;
    const auto eigs = mode_spectrum(k, reynolds, grid, &dropped);
    if (eigs.empty()) throw EigenSolverFailure("every eigenvalue was discarded as spurious");
    report.rightmost_eig = eigs.front();
    report.eigenvalues_kept = eigs.size();
    report.eigenvalues_discarded = dropped;
    report.all_eigs_stable = report.rightmost_eig.real() < 0.0;

    if (options.check_refinement) {
        const std::size_t finer = options.refined_nodes ? options.refined_nodes : grid->n_nodes() + grid->n_nodes() / 2;
        const auto fine = mode_spectrum(k, reynolds, build_grid(finer));
        if (fine.empty()) throw EigenSolverFailure("every eigenvalue on the refined grid was discarded");
        // Complex pairs can tie in real part, so match the nearest refined eigenvalue
        // and also count any change in the leading real part.
        const cplx lambda = report.rightmost_eig;
        const cplx nearest = *std::min_element(fine.begin(), fine.end(), [&](cplx x, cplx y) {
            return std::abs(x - lambda) < std::abs(y - lambda);
        });
        const double scale = std::max(std::abs(lambda), std::numeric_limits<double>::min());
        const double shift =
            std::max(std::abs(nearest - lambda), std::abs(fine.front().real() - lambda.real())) / scale;
        report.refinement_shift = shift;
        if (shift > options.shift_warning) {
            report.warnings.push_back("rightmost eigenvalue moved by " + std::to_string(shift) +
                                      " (relative) under refinement to " + std::to_string(finer) + " nodes");
        }
    }
    return report;
}

}  // namespace couette
