#pragma once

#include <optional>
#include <string>
#include <vector>

#include "couette/mode_operators.hpp"

namespace couette {

/// 8 (1 + sqrt(R))^2 / |s|^2 when |s| >= 2 sqrt(2) (1 + sqrt(R)), empty otherwise.
[[nodiscard]] std::optional<double> theorem1_bound(cplx s, double reynolds);

/// Radius 2 sqrt(2) (1 + sqrt(R)) beyond which the analytic bound applies.
[[nodiscard]] double theorem1_radius(double reynolds);

/// Slack on the analytic bound allowed for discretization error.
inline constexpr double kBoundSlack = 5e-2;

struct ModeNormReport {
    int k = 0;
    cplx s{0.0, 0.0};
    double reynolds = 0.0;
    std::size_t n_nodes = 0;
    /// Induced norm of chi -> psi, both measured in ||f'||^2 + k^2 ||f||^2
    /// (velocity energy of the forcing and of the response).
    double gain = 0.0;
    std::optional<double> theorem1_bound;
    /// gain^2 <= bound (1 + kBoundSlack); true when no bound applies.
    bool within_bound = true;
};

/// Per-mode resolvent norm over divergence-free forcing with potential
/// chi(0) = chi(1) = 0. Energy forms are applied through the Cholesky factor
/// of the input Gram matrix and a square-root factor of the output form; the
/// gain is the largest singular value of the transformed solution operator.
[[nodiscard]] ModeNormReport mode_gain(const ModeParams& params, const GridPtr& grid);

struct ResolventQuery {
    cplx s{0.0, 0.0};
    double reynolds = 1.0;
    int k_max = 1;
    std::size_t n_nodes = 64;

    void validate() const;
};

struct GlobalNormReport {
    double norm = 0.0;
    int argmax_k = 0;
    std::vector<ModeNormReport> modes;  ///< k = -k_max .. k_max in order
    std::optional<double> theorem1_bound;
    bool within_bound = true;
    /// Set when the maximizing mode sits on |k| = k_max.
    bool truncation_warning = false;
};

/// Maximum of mode_gain over |k| <= k_max (modes decouple, so the operator
/// norm is the largest block norm). Modes run concurrently.
[[nodiscard]] GlobalNormReport global_norm(const ResolventQuery& query);

/// Default mode truncation ceil(sqrt(R / sqrt 2)) + 5.
[[nodiscard]] int default_k_max(double reynolds);

struct SpectrumOptions {
    /// Also solve on a finer grid and report the shift of the rightmost eigenvalue.
    bool check_refinement = true;
    /// Finer grid size; 0 means n + n / 2.
    std::size_t refined_nodes = 0;
    double shift_warning = 1e-4;
};

struct SpectrumReport {
    int k = 0;
    double reynolds = 0.0;
    std::size_t n_nodes = 0;
    cplx rightmost_eig{0.0, 0.0};
    bool all_eigs_stable = false;
    std::size_t eigenvalues_kept = 0;
    std::size_t eigenvalues_discarded = 0;
    std::optional<double> refinement_shift;
    std::vector<std::string> warnings;

    friend bool operator==(const SpectrumReport&, const SpectrumReport&) = default;
};

/// All eigenvalues lambda of the mode operator (T T0 psi = 0 at s = lambda,
/// clamped walls) with |lambda| <= 10 N^2, from the dense problem with the
/// boundary unknowns eliminated.
[[nodiscard]] std::vector<cplx> mode_spectrum(int k, double reynolds, const GridPtr& grid,
                                              std::size_t* discarded = nullptr);

[[nodiscard]] SpectrumReport rightmost_eigenvalue(int k, double reynolds, const GridPtr& grid,
                                                  const SpectrumOptions& options = {});

}  // namespace couette
