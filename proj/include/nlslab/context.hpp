#pragma once

#include <optional>

#include "nlslab/constants.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/params.hpp"

namespace nlslab {

/// Everything the criteria need about the equation: exponents, the ground state
/// (Q for 0 < s_c < 1, W for s_c = 1, absent for s_c > 1) and sharp constants.
struct ParamsContext {
    EquationParams params;
    std::optional<GroundStateData> gs;
    SharpConstants sharp;

    bool has_ground_state() const { return gs.has_value(); }
};

inline ParamsContext make_context(const EquationParams& params) {
    ParamsContext ctx;
    ctx.params = params;
    if (params.s_c <= 1.0) ctx.gs = ground_state_for(params);
    ctx.sharp = gn_constant(params, ctx.gs);
    return ctx;
}

inline ParamsContext make_context(double p, int N) { return make_context(make_params(p, N)); }

}  // namespace nlslab
