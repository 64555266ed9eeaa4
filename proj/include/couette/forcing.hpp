#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "couette/mode_operators.hpp"

namespace couette {

/// A forcing ready for the solvers: the scalar right-hand side I and, when the
/// source defines them, the vector components and a manufactured exact solution.
struct ForcingCase {
    std::string name;
    GridFunction scalar;
    std::optional<ForcingMode> forcing;
    std::optional<GridFunction> exact;
};

/// zero, sin, sin2, cos, poly, exp, shear, divfree, mms-quartic, mms-complex.
[[nodiscard]] std::vector<std::string> forcing_preset_names();

/// Presets with F only; used by the k = 0 checks.
[[nodiscard]] std::vector<std::string> k0_forcing_presets();

/// InvalidArgument for unknown names. The mms presets set I to the exact
/// image of psi = y^2 (1-y)^2 (times 1 + i y for mms-complex) under the
/// fourth-order operator, evaluated from closed-form derivatives.
[[nodiscard]] ForcingCase make_preset_forcing(const std::string& name, const ModeParams& params,
                                              const GridPtr& grid);

/// Samples of F and G on an increasing y table covering [0, 1].
struct TabulatedForcing {
    std::vector<double> y;
    std::vector<cplx> f;
    std::vector<cplx> g;
};

/// CSV with header y,F_re,F_im,G_re,G_im. InvalidArgument on malformed rows,
/// a non-increasing y column, or a table that does not span [0, 1].
[[nodiscard]] TabulatedForcing read_tabulated_forcing(std::istream& in);

/// Piecewise-linear interpolation onto the grid, then I = F' - i k G.
[[nodiscard]] ForcingCase tabulated_forcing_case(const TabulatedForcing& table, int k, const GridPtr& grid);

}  // namespace couette
