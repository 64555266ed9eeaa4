#pragma once

#include "couette/spectral_grid.hpp"

namespace couette {

/// One Fourier-Laplace mode: integer wavenumber k (period-1 convention,
/// multiplication operator i*k*y exactly as written), Laplace variable s and
/// Reynolds number R.
struct ModeParams {
    int k = 0;
    cplx s{0.0, 0.0};
    double reynolds = 1.0;

    /// Throws InvalidArgument unless reynolds is positive and everything is finite.
    void validate() const;
    /// Additionally requires Re(s) >= 0.
    void validate_resolvent() const;

    friend bool operator==(const ModeParams&, const ModeParams&) = default;
};

/// Discrete T = D^2/R - (s + k^2/R + i k y), T0 = D^2 - k^2 and their
/// product on one grid. No boundary rows are applied here.
struct OperatorSet {
    ComplexMatrix t_matrix;
    ComplexMatrix t0_matrix;
    ComplexMatrix tt0_matrix;
    ModeParams params;
    GridPtr grid;

    [[nodiscard]] std::size_t n_nodes() const { return grid->n_nodes(); }
};

[[nodiscard]] OperatorSet assemble_operators(const ModeParams& params, const GridPtr& grid);

/// Applies the expanded fourth-order form
///   psi''''/R - (s + 2k^2/R + iky) psi'' + (s k^2 + k^4/R + i k^3 y) psi
/// using D^4 and D^2 directly. Equal to T T0 psi in exact arithmetic.
[[nodiscard]] GridFunction apply_expanded_operator(const ModeParams& params, const GridFunction& psi);

/// Velocity-forcing components of one mode.
struct ForcingMode {
    GridFunction f_hat;
    GridFunction g_hat;
    double norm_sq = 0.0;  ///< ||F||^2 + ||G||^2

    ForcingMode() = default;
    ForcingMode(GridFunction f, GridFunction g);
};

/// I = D F - i k G.
[[nodiscard]] GridFunction build_scalar_forcing(const ForcingMode& forcing, int k);

/// Divergence-free forcing from a potential chi with chi(0) = chi(1) = 0:
/// F = chi', G = -i k chi, so that i k F + G' = 0 and I = T0 chi.
[[nodiscard]] ForcingMode divergence_free_forcing(const GridFunction& potential, int k);

}  // namespace couette
