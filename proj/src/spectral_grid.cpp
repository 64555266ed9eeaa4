#include "couette/spectral_grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "couette/errors.hpp"

namespace couette {

namespace {

// Chebyshev points on [-1, 1] in ascending order, computed with the sine
// form so that x[j] == -x[n-1-j] exactly.
RealVector chebyshev_nodes_reference(std::size_t n_nodes) {
    const auto n = static_cast<Eigen::Index>(n_nodes);
    const double big_n = static_cast<double>(n_nodes - 1);
    RealVector x(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        x[m] = std::sin(std::numbers::pi * (2.0 * static_cast<double>(m) - big_n) / (2.0 * big_n));
    }
    return x;
}

// Differentiation matrices of order 1..max_order on the descending reference
// points x_k = cos(k pi / (n-1)).
std::vector<RealMatrix> chebyshev_diff_reference(std::size_t n_nodes, int max_order) {
    const auto n = static_cast<Eigen::Index>(n_nodes);
    const Eigen::Index half_lo = n / 2;
    const double big_n = static_cast<double>(n - 1);

    RealVector theta(n);
    for (Eigen::Index k = 0; k < n; ++k) theta[k] = static_cast<double>(k) * std::numbers::pi / big_n;

    // dx(i, j) = x_i - x_j via trig identity, then the flipping trick for the
    // lower half so the matrix is exactly antisymmetric under index reversal.
    RealMatrix dx(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            dx(i, j) = 2.0 * std::sin(0.5 * (theta[j] + theta[i])) * std::sin(0.5 * (theta[j] - theta[i]));
        }
    }
    for (Eigen::Index i = half_lo; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) dx(i, j) = -dx(n - 1 - i, n - 1 - j);
    }
    dx.diagonal().setOnes();

    RealMatrix c(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) c(i, j) = ((i + j) % 2 == 0) ? 1.0 : -1.0;
    }
    c.row(0) *= 2.0;
    c.row(n - 1) *= 2.0;
    c.col(0) /= 2.0;
    c.col(n - 1) /= 2.0;

    RealMatrix z = dx.cwiseInverse();
    z.diagonal().setZero();

    std::vector<RealMatrix> out;
    out.reserve(static_cast<std::size_t>(max_order));
    RealMatrix d = RealMatrix::Identity(n, n);
    for (int ell = 1; ell <= max_order; ++ell) {
        RealMatrix next(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double dii = d(i, i);
            for (Eigen::Index j = 0; j < n; ++j) {
                next(i, j) = static_cast<double>(ell) * z(i, j) * (c(i, j) * dii - d(i, j));
            }
        }
        next.diagonal().setZero();
        next.diagonal() = -next.rowwise().sum();
        d = std::move(next);
        out.push_back(d);
    }
    return out;
}

}  // namespace

RealVector chebyshev_nodes_unit(std::size_t n_nodes) {
    if (n_nodes < 2) throw SizingError("chebyshev_nodes_unit: need at least 2 nodes");
    RealVector y = (chebyshev_nodes_reference(n_nodes).array() + 1.0) * 0.5;
    y[0] = 0.0;
    y[static_cast<Eigen::Index>(n_nodes) - 1] = 1.0;
    return y;
}

RealVector clenshaw_curtis_weights_unit(std::size_t n_nodes) {
    if (n_nodes < 2) throw SizingError("clenshaw_curtis_weights_unit: need at least 2 nodes");
    const auto big_n = static_cast<Eigen::Index>(n_nodes) - 1;
    const double nd = static_cast<double>(big_n);
    RealVector w = RealVector::Zero(big_n + 1);
    RealVector v = RealVector::Ones(big_n + 1);
    auto theta = [&](Eigen::Index i) { return std::numbers::pi * static_cast<double>(i) / nd; };
    if (big_n % 2 == 0) {
        w[0] = 1.0 / (nd * nd - 1.0);
        for (Eigen::Index k = 1; k < big_n / 2; ++k) {
            const double kd = static_cast<double>(k);
            for (Eigen::Index i = 1; i < big_n; ++i) v[i] -= 2.0 * std::cos(2.0 * kd * theta(i)) / (4.0 * kd * kd - 1.0);
        }
        for (Eigen::Index i = 1; i < big_n; ++i) v[i] -= std::cos(nd * theta(i)) / (nd * nd - 1.0);
    } else {
        w[0] = 1.0 / (nd * nd);
        for (Eigen::Index k = 1; k <= (big_n - 1) / 2; ++k) {
            const double kd = static_cast<double>(k);
            for (Eigen::Index i = 1; i < big_n; ++i) v[i] -= 2.0 * std::cos(2.0 * kd * theta(i)) / (4.0 * kd * kd - 1.0);
        }
    }
    w[big_n] = w[0];
    for (Eigen::Index i = 1; i < big_n; ++i) w[i] = 2.0 * v[i] / nd;
    // [-1, 1] -> [0, 1]
    return 0.5 * w;
}

SpectralGrid::SpectralGrid(std::size_t n_nodes) : n_(n_nodes) {
    if (n_nodes < kMinNodes) {
        throw SizingError("build_grid: n_nodes = " + std::to_string(n_nodes) + " but a 4th-order operator needs at least " +
                          std::to_string(kMinNodes));
    }
    nodes_ = chebyshev_nodes_unit(n_nodes);
    weights_ = clenshaw_curtis_weights_unit(n_nodes);

    auto reference = chebyshev_diff_reference(n_nodes, kMaxOrder);
    diff_.reserve(reference.size());
    double scale = 1.0;
    for (const auto& d : reference) {
        scale *= 2.0;  // dy = dx / 2
        // reverse both indices: descending reference -> ascending y
        diff_.push_back(scale * d.reverse());
    }
}

const RealMatrix& SpectralGrid::diff(int order) const {
    if (order < 1 || order > kMaxOrder) {
        throw InvalidArgument("differentiation order must be in 1..4, got " + std::to_string(order));
    }
    return diff_[static_cast<std::size_t>(order - 1)];
}

GridPtr build_grid(std::size_t n_nodes) {
    static std::mutex mutex;
    static std::map<std::size_t, GridPtr> cache;
    if (n_nodes < SpectralGrid::kMinNodes) return std::make_shared<const SpectralGrid>(n_nodes);  // throws
    std::lock_guard lock(mutex);
    auto& slot = cache[n_nodes];
    if (!slot) slot = std::make_shared<const SpectralGrid>(n_nodes);
    return slot;
}

GridFunction::GridFunction(GridPtr grid) : grid_(std::move(grid)) {
    values_ = ComplexVector::Zero(static_cast<Eigen::Index>(grid_->n_nodes()));
}

GridFunction::GridFunction(GridPtr grid, ComplexVector values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != grid_->n_nodes()) {
        throw GridMismatch("grid function has " + std::to_string(values_.size()) + " values but the grid has " +
                           std::to_string(grid_->n_nodes()) + " nodes");
    }
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<cplx(double)>& f) {
    const auto& y = grid->nodes();
    ComplexVector v(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) v[i] = f(y[i]);
    return GridFunction(std::move(grid), std::move(v));
}

double GridFunction::max_abs() const { return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff(); }

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_grid(*this, other);
    values_ += other.values_;
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_grid(*this, other);
    values_ -= other.values_;
    return *this;
}

GridFunction& GridFunction::operator*=(cplx factor) {
    values_ *= factor;
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx factor, GridFunction f) { return f *= factor; }

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!a.grid() || !b.grid()) throw GridMismatch("grid function without a grid");
    if (a.grid() != b.grid() && a.grid()->n_nodes() != b.grid()->n_nodes()) {
        throw GridMismatch("grid functions live on grids with " + std::to_string(a.grid()->n_nodes()) + " and " +
                           std::to_string(b.grid()->n_nodes()) + " nodes");
    }
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g);
    const auto& w = f.grid()->weights();
    cplx acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < w.size(); ++i) acc += w[i] * std::conj(f.values()[i]) * g.values()[i];
    return acc;
}

double l2_norm_sq(const GridFunction& f) {
    const auto& w = f.grid()->weights();
    return (w.array() * f.values().array().abs2()).sum();
}

GridFunction differentiate(const GridFunction& f, int order) {
    const RealMatrix& d = f.grid()->diff(order);
    return GridFunction(f.grid(), d * f.values());
}

}  // namespace couette
