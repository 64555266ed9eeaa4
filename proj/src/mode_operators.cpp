#include "couette/mode_operators.hpp"

#include <cmath>
#include <string>

#include "couette/errors.hpp"

namespace couette {

void ModeParams::validate() const {
    if (!(reynolds > 0.0) || !std::isfinite(reynolds)) {
        throw InvalidArgument("Reynolds number must be positive and finite, got " + std::to_string(reynolds));
    }
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw InvalidArgument("s must be finite");
}

void ModeParams::validate_resolvent() const {
    validate();
    if (s.real() < 0.0) throw InvalidArgument("resolvent queries need Re(s) >= 0, got " + std::to_string(s.real()));
}

OperatorSet assemble_operators(const ModeParams& params, const GridPtr& grid) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(grid->n_nodes());
    const double k = params.k;
    const double inv_r = 1.0 / params.reynolds;
    const RealMatrix& d2 = grid->diff(2);
    const RealVector& y = grid->nodes();

    OperatorSet ops;
    ops.params = params;
    ops.grid = grid;

    ops.t0_matrix = d2.cast<cplx>();
    ops.t0_matrix.diagonal().array() -= k * k;

    ops.t_matrix = (inv_r * d2).cast<cplx>();
    for (Eigen::Index i = 0; i < n; ++i) {
        ops.t_matrix(i, i) -= params.s + k * k * inv_r + cplx{0.0, k * y[i]};
    }
    ops.tt0_matrix.noalias() = ops.t_matrix * ops.t0_matrix;
    return ops;
}

GridFunction apply_expanded_operator(const ModeParams& params, const GridFunction& psi) {
    const auto& grid = *psi.grid();
    const double k = params.k;
    const double r = params.reynolds;
    const ComplexVector d4 = grid.diff(4) * psi.values();
    const ComplexVector d2 = grid.diff(2) * psi.values();
    const RealVector& y = grid.nodes();
    ComplexVector out(psi.values().size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const cplx second = params.s + 2.0 * k * k / r + cplx{0.0, k * y[i]};
        const cplx zeroth = params.s * (k * k) + k * k * k * k / r + cplx{0.0, k * k * k * y[i]};
        out[i] = d4[i] / r - second * d2[i] + zeroth * psi.values()[i];
    }
    return GridFunction(psi.grid(), std::move(out));
}

ForcingMode::ForcingMode(GridFunction f, GridFunction g) : f_hat(std::move(f)), g_hat(std::move(g)) {
    require_same_grid(f_hat, g_hat);
    norm_sq = l2_norm_sq(f_hat) + l2_norm_sq(g_hat);
}

GridFunction build_scalar_forcing(const ForcingMode& forcing, int k) {
    require_same_grid(forcing.f_hat, forcing.g_hat);
    GridFunction out = differentiate(forcing.f_hat, 1);
    out.values() -= cplx{0.0, static_cast<double>(k)} * forcing.g_hat.values();
    return out;
}

ForcingMode divergence_free_forcing(const GridFunction& potential, int k) {
    const double scale = 1.0 + potential.max_abs();
    const std::size_t last = potential.grid()->last();
    if (std::abs(potential[0]) > 1e-12 * scale || std::abs(potential[last]) > 1e-12 * scale) {
        throw EndpointViolation("divergence-free forcing needs a potential vanishing at y = 0 and y = 1");
    }
    GridFunction f = differentiate(potential, 1);
    GridFunction g = cplx{0.0, -static_cast<double>(k)} * potential;
    return ForcingMode(std::move(f), std::move(g));
}

}  // namespace couette
