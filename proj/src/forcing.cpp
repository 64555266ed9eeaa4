#include "couette/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <numbers>
#include <sstream>

#include "couette/errors.hpp"

namespace couette {

namespace {

constexpr double kPi = std::numbers::pi;

// Complex polynomial sum c[j] y^j with exact derivatives.
struct Poly {
    std::vector<cplx> c;

    [[nodiscard]] Poly derivative() const {
        Poly d;
        for (std::size_t j = 1; j < c.size(); ++j) d.c.push_back(static_cast<double>(j) * c[j]);
        return d;
    }
    [[nodiscard]] cplx operator()(double y) const {
        cplx acc{0.0, 0.0};
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * y + *it;
        return acc;
    }
};

// (1/R) p'''' - (s + 2k^2/R + iky) p'' + (s k^2 + k^4/R + i k^3 y) p
ForcingCase manufactured(const std::string& name, const Poly& p, const ModeParams& params, const GridPtr& grid) {
    const Poly d2 = p.derivative().derivative();
    const Poly d4 = d2.derivative().derivative();
    const double k = params.k;
    const double r = params.reynolds;
    const cplx s = params.s;
    const cplx i{0.0, 1.0};
    ForcingCase out;
    out.name = name;
    out.scalar = GridFunction::sample(grid, [&](double y) {
        return d4(y) / r - (s + 2.0 * k * k / r + i * k * y) * d2(y) +
               (s * k * k + k * k * k * k / r + i * k * k * k * y) * p(y);
    });
    out.exact = GridFunction::sample(grid, p);
    return out;
}

ForcingCase from_components(const std::string& name, const std::function<cplx(double)>& f,
                            const std::function<cplx(double)>& g, int k, const GridPtr& grid) {
    ForcingMode mode(GridFunction::sample(grid, f), GridFunction::sample(grid, g));
    ForcingCase out;
    out.name = name;
    out.scalar = build_scalar_forcing(mode, k);
    out.forcing = std::move(mode);
    return out;
}

}  // namespace

std::vector<std::string> forcing_preset_names() {
    return {"zero", "sin", "sin2", "cos", "poly", "exp", "shear", "divfree", "mms-quartic", "mms-complex"};
}

std::vector<std::string> k0_forcing_presets() { return {"sin", "sin2", "cos", "poly", "exp"}; }

ForcingCase make_preset_forcing(const std::string& name, const ModeParams& params, const GridPtr& grid) {
    params.validate();
    const int k = params.k;
    const auto zero = [](double) { return cplx{0.0, 0.0}; };
    if (name == "zero") return from_components(name, zero, zero, k, grid);
    if (name == "sin") return from_components(name, [](double y) { return cplx{std::sin(kPi * y), 0.0}; }, zero, k, grid);
    if (name == "sin2") {
        return from_components(name, [](double y) { return cplx{std::sin(2.0 * kPi * y), 0.0}; }, zero, k, grid);
    }
    if (name == "cos") return from_components(name, [](double y) { return cplx{std::cos(kPi * y), 0.0}; }, zero, k, grid);
    if (name == "poly") return from_components(name, [](double y) { return cplx{y * (1.0 - y), 0.0}; }, zero, k, grid);
    if (name == "exp") return from_components(name, [](double y) { return cplx{std::exp(y), 0.0}; }, zero, k, grid);
    if (name == "shear") {
        return from_components(
            name, [](double y) { return cplx{1.0 - y, 0.0}; }, [](double y) { return cplx{0.0, y * y}; }, k, grid);
    }
    if (name == "divfree") {
        const GridFunction chi =
            GridFunction::sample(grid, [](double y) { return cplx{y * std::sin(kPi * y), 0.0}; });
        ForcingMode mode = divergence_free_forcing(chi, k);
        ForcingCase out;
        out.name = name;
        out.scalar = build_scalar_forcing(mode, k);
        out.forcing = std::move(mode);
        return out;
    }
    if (name == "mms-quartic") return manufactured(name, Poly{{0.0, 0.0, 1.0, -2.0, 1.0}}, params, grid);
    if (name == "mms-complex") {
        // y^2 (1-y)^2 (1 + i y)
        const cplx i{0.0, 1.0};
        return manufactured(name, Poly{{0.0, 0.0, 1.0, -2.0 + i, 1.0 - 2.0 * i, i}}, params, grid);
    }
    throw InvalidArgument("unknown forcing preset '" + name + "'");
}

TabulatedForcing read_tabulated_forcing(std::istream& in) {
    TabulatedForcing table;
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("forcing table is empty");
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double y = 0, fr = 0, fi = 0, gr = 0, gi = 0;
        if (!(fields >> y >> fr >> fi >> gr >> gi)) {
            throw InvalidArgument("forcing table row " + std::to_string(row) + " needs five numbers");
        }
        if (!table.y.empty() && !(y > table.y.back())) {
            throw InvalidArgument("forcing table y column must be strictly increasing");
        }
        table.y.push_back(y);
        table.f.emplace_back(fr, fi);
        table.g.emplace_back(gr, gi);
    }
    if (table.y.size() < 2 || table.y.front() > 0.0 || table.y.back() < 1.0) {
        throw InvalidArgument("forcing table must span [0, 1] with at least two rows");
    }
    return table;
}

ForcingCase tabulated_forcing_case(const TabulatedForcing& table, int k, const GridPtr& grid) {
    const auto interpolate = [&](const std::vector<cplx>& values) {
        return [&table, &values](double y) {
            const auto upper = std::upper_bound(table.y.begin(), table.y.end(), y);
            const auto j = static_cast<std::size_t>(
                std::clamp<std::ptrdiff_t>(upper - table.y.begin(), 1, static_cast<std::ptrdiff_t>(table.y.size()) - 1));
            const double t = (y - table.y[j - 1]) / (table.y[j] - table.y[j - 1]);
            return (1.0 - t) * values[j - 1] + t * values[j];
        };
    };
    return from_components("table", interpolate(table.f), interpolate(table.g), k, grid);
}

}  // namespace couette
