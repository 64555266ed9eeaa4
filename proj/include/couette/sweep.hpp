#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "couette/bvp_solver.hpp"

namespace couette {

enum class SweepTarget { delta1, delta2, resolvent };

[[nodiscard]] std::string to_string(SweepTarget target);
/// Accepts "delta1", "delta2", "resolvent"; InvalidArgument otherwise.
[[nodiscard]] SweepTarget parse_sweep_target(const std::string& name);

struct SweepSpec {
    std::vector<double> reynolds_list;
    std::size_t xi_points_per_r = 16;
    SweepTarget target = SweepTarget::delta1;
    double rel_tol = 1e-6;
    /// Grid levels tried by the refinement loop of each delta solve.
    std::vector<std::size_t> levels{std::begin(kDefaultLevels), std::end(kDefaultLevels)};
    /// After the lattice pass, scan the critical-layer band xi in [-k, 0] and run
    /// a golden-section search in xi around the best points. The peaks narrow as R
    /// grows, so a bare lattice maximum depends on the lattice density.
    bool local_refine = true;

    /// reynolds_list strictly increasing and positive, xi_points_per_r >= 3, rel_tol > 0.
    void validate() const;
};

struct LatticePoint {
    int k = 0;
    double xi = 0.0;

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct PointFailure {
    int k = 0;
    double xi = 0.0;
    std::string error;

    friend bool operator==(const PointFailure&, const PointFailure&) = default;
};

struct SweepResult {
    double reynolds = 0.0;
    /// True when 1 <= k <= sqrt(R / sqrt 2) has no integer solution.
    bool skipped = false;
    double max_k2_norm_sq = 0.0;  ///< max k^2 ||delta||^2
    double max_dnorm_sq = 0.0;    ///< max ||delta'||^2
    LatticePoint argmax_k2;
    LatticePoint argmax_dnorm;
    /// Maxima over the lattice points alone.
    double lattice_max_k2_norm_sq = 0.0;
    double lattice_max_dnorm_sq = 0.0;
    /// Lattice solves; always |k range| * |xi lattice| when nothing failed.
    std::size_t points_evaluated = 0;
    /// Extra solves spent by the band scan and the golden-section search.
    std::size_t refine_evaluations = 0;
    std::size_t max_nodes_used = 0;
    std::vector<PointFailure> failures;

    friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Largest integer k with k <= sqrt(R / sqrt 2).
[[nodiscard]] int max_wavenumber(double reynolds);

/// count points uniformly spaced on [-half_width, half_width] with exact end points.
[[nodiscard]] std::vector<double> uniform_lattice(double half_width, std::size_t count);

/// xi lattice on [-2(1 + sqrt R), 2(1 + sqrt R)] with
/// base_points * ceil(1 + sqrt(R) / 10) points, capped at kMaxLatticePoints.
[[nodiscard]] std::vector<double> mesh_for_reynolds(double reynolds, std::size_t base_points);

inline constexpr std::size_t kMaxLatticePoints = 2048;
/// A sweep over one R fails when more than this fraction of its points fail.
inline constexpr double kMaxFailureFraction = 0.01;

/// k^2 ||delta_j||^2 and ||delta_j'||^2 at one lattice point (refined).
struct DeltaPointValue {
    double k2_norm_sq = 0.0;
    double dnorm_sq = 0.0;
    std::size_t nodes = 0;
};
[[nodiscard]] DeltaPointValue evaluate_delta_point(SweepTarget which, int k, double xi, double reynolds,
                                                   double rel_tol, std::span<const std::size_t> levels);

/// Maxima of k^2 ||delta_j||^2 and ||delta_j'||^2 over the (k, xi) lattice for
/// every R in the spec, refined locally when spec.local_refine is set. Points
/// run concurrently; reductions walk the points in a fixed order, so results
/// do not depend on thread scheduling.
[[nodiscard]] std::vector<SweepResult> run_delta_sweep(const SweepSpec& spec, SweepTarget which);

struct ResolventSweepOptions {
    std::size_t n_nodes = 64;
    /// 0 selects default_k_max(R).
    int k_max = 0;
    /// Add xi = 0 to the lattice (the k = 0 block peaks there).
    bool include_zero = true;
    /// Multiples of the analytic-bound radius used for spot checks beyond it.
    std::vector<double> spot_radii{1.0, 1.5, 2.0};
    /// Explicit xi lattice; empty selects the uniform default of mesh_for_reynolds density.
    std::vector<double> lattice;
};

struct ResolventSweepRow {
    double reynolds = 0.0;
    double sup_norm = 0.0;
    /// Maximum over the lattice points alone, before local refinement.
    double lattice_sup = 0.0;
    double argmax_xi = 0.0;
    int argmax_k = 0;
    int k_max = 0;
    std::size_t points_evaluated = 0;
    /// Largest global norm over the spot checks with |s| >= radius.
    double theorem_region_sup = 0.0;
    /// Largest gain^2 / bound over the spot checks.
    double theorem_region_max_ratio = 0.0;
    bool theorem_region_ok = true;
    bool truncation_warning = false;
    std::vector<PointFailure> failures;

    friend bool operator==(const ResolventSweepRow&, const ResolventSweepRow&) = default;
};

/// Supremum of the global resolvent norm over s = i xi, |xi| <= 2 sqrt 2 (1 + sqrt R),
/// on a lattice of mesh_for_reynolds density (plus local refinement), and spot
/// checks on and beyond the analytic-bound circle. Only k >= 0 is solved:
/// gain(-k, i xi) == gain(k, -i xi), so mode k scans the lattice and its mirror.
[[nodiscard]] std::vector<ResolventSweepRow> run_resolvent_sweep(const SweepSpec& spec,
                                                                 const ResolventSweepOptions& options = {});

}  // namespace couette
