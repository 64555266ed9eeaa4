#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace couette {

using cplx = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Chebyshev-Gauss-Lobatto points mapped to [0, 1], ascending, with the end
/// points exactly 0 and 1. Works for any n_nodes >= 2.
[[nodiscard]] RealVector chebyshev_nodes_unit(std::size_t n_nodes);

/// Clenshaw-Curtis weights on [0, 1] for the nodes above. Sum to 1.
[[nodiscard]] RealVector clenshaw_curtis_weights_unit(std::size_t n_nodes);

/// Collocation grid on y in [0, 1].
///
/// Nodes ascend (node 0 sits at y = 0, the last node at y = 1). The
/// differentiation matrices D^1..D^4 come from the Chebyshev recurrence
///   D^(l) = l * Z .* (C .* diag(D^(l-1)) - D^(l-1))
/// with the negative-sum trick on the diagonal, so D^2..D^4 are not matrix
/// powers of D^1. Immutable after construction.
class SpectralGrid {
public:
    static constexpr std::size_t kMinNodes = 5;
    static constexpr int kMaxOrder = 4;

    /// Throws SizingError when n_nodes < kMinNodes.
    explicit SpectralGrid(std::size_t n_nodes);

    [[nodiscard]] std::size_t n_nodes() const noexcept { return n_; }
    [[nodiscard]] std::size_t last() const noexcept { return n_ - 1; }
    [[nodiscard]] const RealVector& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const RealVector& weights() const noexcept { return weights_; }
    /// order in 1..4; InvalidArgument otherwise.
    [[nodiscard]] const RealMatrix& diff(int order) const;

private:
    std::size_t n_;
    RealVector nodes_;
    RealVector weights_;
    std::vector<RealMatrix> diff_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Builds (or returns the cached) grid with n_nodes points.
[[nodiscard]] GridPtr build_grid(std::size_t n_nodes);

/// Complex samples of a function on a grid.
class GridFunction {
public:
    GridFunction() = default;
    /// Zero function on grid.
    explicit GridFunction(GridPtr grid);
    /// Throws GridMismatch if values has the wrong length.
    GridFunction(GridPtr grid, ComplexVector values);

    /// Samples f at the nodes of grid.
    static GridFunction sample(GridPtr grid, const std::function<cplx(double)>& f);

    [[nodiscard]] const GridPtr& grid() const noexcept { return grid_; }
    [[nodiscard]] const ComplexVector& values() const noexcept { return values_; }
    [[nodiscard]] ComplexVector& values() noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    [[nodiscard]] cplx operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
    [[nodiscard]] double max_abs() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(cplx factor);

private:
    GridPtr grid_;
    ComplexVector values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx factor, GridFunction f);

/// Throws GridMismatch unless a and b share a discretization.
void require_same_grid(const GridFunction& a, const GridFunction& b);

/// <f, g> = sum_i w_i conj(f_i) g_i (conjugate-linear in f).
[[nodiscard]] cplx inner_product(const GridFunction& f, const GridFunction& g);

/// ||f||^2 = Re <f, f>.
[[nodiscard]] double l2_norm_sq(const GridFunction& f);

/// D^order f on the same grid, order in 1..4.
[[nodiscard]] GridFunction differentiate(const GridFunction& f, int order);

}  // namespace couette
